"""scikit-learn compatible wrappers around the filter pipeline.

Rows of ``X`` are candidates ``(x, y, z, p)``. Arrays of Python ints (object
dtype) keep arbitrary precision; fixed-width integer arrays and integral
floats are accepted and converted.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .arith import is_odd_prime
from .filters import (
    DEFAULT_MODULI,
    DEFAULT_PIPELINE,
    Candidate,
    Verdict,
    evaluate,
    raw_check,
    validate_moduli,
    validate_pipeline,
)
from .search import oracle_check


def _as_int(v) -> int:
    if isinstance(v, (bool, np.bool_)):
        raise TypeError("boolean entries are not candidates")
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)) and float(v).is_integer():
        return int(v)
    raise TypeError(f"candidate entries must be integers, got {v!r}")


def check_candidates(X, generalized: bool = False) -> list[tuple[int, int, int, int]]:
    """Validate an ``(n, 4)`` array-like and return rows as tuples of ints.

    Raises ValueError for wrong shape, non-positive entries, or an exponent
    outside the odd primes (unless ``generalized``).
    """
    if isinstance(X, np.ndarray):
        rows = X.tolist() if X.dtype != object else list(map(list, X))
    else:
        rows = [list(r) for r in X]
    if not rows:
        raise ValueError("no candidates given")
    out = []
    for i, row in enumerate(rows):
        if len(row) != 4:
            raise ValueError(f"row {i} has {len(row)} columns, expected 4 (x, y, z, p)")
        x, y, z, p = (_as_int(v) for v in row)
        if min(x, y, z, p) < 1:
            raise ValueError(f"row {i}: entries must be >= 1, got {(x, y, z, p)}")
        if not generalized and not is_odd_prime(p):
            raise ValueError(f"row {i}: exponent {p} is not an odd prime")
        out.append((x, y, z, p))
    return out


class _PipelineParams(BaseEstimator):
    def __init__(self, pipeline=DEFAULT_PIPELINE, moduli=DEFAULT_MODULI, allow_external=False):
        self.pipeline = pipeline
        self.moduli = moduli
        self.allow_external = allow_external

    def _fit_pipeline(self) -> None:
        self.pipeline_ = validate_pipeline(self.pipeline, self.allow_external)
        self.moduli_ = validate_moduli(self.moduli)
        self.n_features_in_ = 4


class FilterTransformer(TransformerMixin, _PipelineParams):
    """Encode candidates as a 0/1 matrix: column ``j`` marks whether filter ``j`` fires.

    Every filter is evaluated independently, not just up to the first hit.
    """

    def fit(self, X=None, y=None):
        self._fit_pipeline()
        if X is not None:
            check_candidates(X)
        self.feature_names_out_ = np.array([f.value for f in self.pipeline_], dtype=object)
        return self

    def transform(self, X):
        check_is_fitted(self, "pipeline_")
        rows = check_candidates(X)
        checks = [raw_check(f, self.moduli_) for f in self.pipeline_]
        out = np.zeros((len(rows), len(checks)), dtype=np.uint8)
        for i, (x, y, z, p) in enumerate(rows):
            for j, fn in enumerate(checks):
                out[i, j] = fn(x, y, z, p) is not None
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "pipeline_")
        return self.feature_names_out_


class RefutationClassifier(ClassifierMixin, _PipelineParams):
    """Labels candidates as solutions (``True``) or non-solutions (``False``).

    Filters run first; only survivors reach exact evaluation. With
    ``use_oracle=False`` survivors are labelled ``True`` ("not refuted").
    In ``generalized`` mode exponents outside the odd primes skip the filters.
    """

    def __init__(
        self,
        pipeline=DEFAULT_PIPELINE,
        moduli=DEFAULT_MODULI,
        allow_external=False,
        generalized=False,
        use_oracle=True,
    ):
        super().__init__(pipeline=pipeline, moduli=moduli, allow_external=allow_external)
        self.generalized = generalized
        self.use_oracle = use_oracle

    def fit(self, X=None, y=None):
        self._fit_pipeline()
        if X is not None:
            check_candidates(X, self.generalized)
        self.classes_ = np.array([False, True])
        return self

    def verdicts(self, X) -> list[Verdict | None]:
        """Per-row filter verdict; ``None`` where filters were skipped."""
        check_is_fitted(self, "pipeline_")
        out = []
        for x, y, z, p in check_candidates(X, self.generalized):
            if not is_odd_prime(p):
                out.append(None)
                continue
            out.append(
                evaluate(Candidate(x, y, z, p), self.pipeline_, self.moduli_, self.allow_external)
            )
        return out

    def predict(self, X):
        rows = check_candidates(X, self.generalized)
        labels = np.zeros(len(rows), dtype=bool)
        for i, (row, verdict) in enumerate(zip(rows, self.verdicts(X))):
            if verdict is not None and verdict.refuted:
                continue
            labels[i] = oracle_check(row) if self.use_oracle else True
        return labels
