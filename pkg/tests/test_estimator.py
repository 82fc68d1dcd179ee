import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline

from fermat_refute.errors import ConfigError
from fermat_refute.estimator import FilterTransformer, RefutationClassifier, check_candidates

X = np.array([[2, 3, 4, 3], [6, 10, 14, 3], [6, 5, 7, 3], [4, 8, 9, 5]])


def test_check_candidates_conversions():
    assert check_candidates(X.astype(float)) == [tuple(r) for r in X.tolist()]
    big = np.array([[10**30, 10**30, 10**30 + 1, 3]], dtype=object)
    assert check_candidates(big) == [(10**30, 10**30, 10**30 + 1, 3)]


@pytest.mark.parametrize(
    "bad",
    [[[1, 2, 3]], [[0, 1, 2, 3]], [[1, 2, 3, 4]], [[1.5, 2, 3, 3]], [], [[True, 2, 3, 3]]],
)
def test_check_candidates_rejects(bad):
    with pytest.raises((ValueError, TypeError)):
        check_candidates(bad)


def test_params_and_clone():
    clf = RefutationClassifier(pipeline=("T3", "T4"), use_oracle=False)
    params = clf.get_params()
    assert params["pipeline"] == ("T3", "T4") and params["use_oracle"] is False
    copy = clone(clf)
    assert copy.get_params() == params
    copy.set_params(allow_external=True)
    assert copy.allow_external and not clf.allow_external


def test_classifier_predicts_non_solutions():
    clf = RefutationClassifier().fit(X)
    assert clf.predict(X).tolist() == [False, False, False, False]
    verdicts = clf.verdicts(X)
    assert verdicts[0].refuted and verdicts[2].refuted
    assert clf.score(X, np.zeros(len(X), dtype=bool)) == 1.0


def test_classifier_without_oracle_marks_survivors():
    clf = RefutationClassifier(pipeline=("BASIC_BOUNDS", "T3")).set_params(use_oracle=False).fit(X)
    assert clf.predict(X).tolist() == [False, True, False, False]


def test_classifier_generalized_mode_finds_solutions():
    Xg = np.array([[3, 4, 5, 2], [3, 4, 7, 1], [2, 3, 4, 3], [3, 4, 6, 2]])
    clf = RefutationClassifier(generalized=True).fit(Xg)
    assert clf.predict(Xg).tolist() == [True, True, False, False]
    with pytest.raises(ValueError):
        RefutationClassifier().fit(Xg)


def test_transformer_matrix():
    tf = FilterTransformer(pipeline=("T6", "T3", "MODULAR"))
    out = tf.fit_transform(X)
    assert out.shape == (4, 3)
    assert out[:, 0].tolist() == [1, 0, 1, 1]
    assert out[:, 1].tolist() == [1, 0, 1, 1]
    assert out[1].tolist() == [0, 0, 1]
    assert tf.get_feature_names_out().tolist() == ["T6", "T3", "MODULAR"]


def test_transformer_in_sklearn_pipeline():
    pipe = make_pipeline(FilterTransformer())
    assert pipe.fit_transform(X).shape == (4, 7)


def test_unfitted_and_bad_params():
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        FilterTransformer().transform(X)
    with pytest.raises(ConfigError):
        RefutationClassifier(pipeline=("T1_EXTERNAL",)).fit(X)
