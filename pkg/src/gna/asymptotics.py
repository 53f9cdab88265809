"""Finite-grid classification of nets.

Every decision here is made on the tail of the grid only (the smallest
sampled eps). All comparisons against ``eps**m`` happen in log space, since
``eps**m`` underflows double precision long before the orders of interest.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, ClassifierConfig


class Classification(str, enum.Enum):
    NEGLIGIBLE = "negligible"
    STRICTLY_NONZERO = "strictly_nonzero"
    STRICTLY_POSITIVE = "strictly_positive"
    ZERO_DIVISOR_LIKE = "zero_divisor_like"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class AsymptoticReport:
    classification: Classification
    order: int | None
    slope: float
    intercept: float
    residual: float
    tail_fraction_used: float
    m_neg: int
    m_inv: int
    moderate: bool
    moderate_bound: tuple
    n_small: int
    n_large: int
    n_tail: int
    rel_floor: float | None = None

    @property
    def is_negligible(self) -> bool:
        return self.classification is Classification.NEGLIGIBLE

    @property
    def is_strictly_nonzero(self) -> bool:
        return self.classification in (
            Classification.STRICTLY_NONZERO,
            Classification.STRICTLY_POSITIVE,
        )

    @property
    def is_strictly_positive(self) -> bool:
        return self.classification is Classification.STRICTLY_POSITIVE

    def to_dict(self) -> dict:
        return {
            "classification": self.classification.value,
            "order": self.order,
            "slope": _jsonable(self.slope),
            "intercept": _jsonable(self.intercept),
            "residual": _jsonable(self.residual),
            "tail_fraction_used": self.tail_fraction_used,
            "m_neg": self.m_neg,
            "m_inv": self.m_inv,
            "moderate": self.moderate,
            "moderate_bound": {
                "C": _jsonable(self.moderate_bound[0]),
                "N": self.moderate_bound[1],
            },
            "n_small": self.n_small,
            "n_large": self.n_large,
            "n_tail": self.n_tail,
            "rel_floor": self.rel_floor,
        }


def _jsonable(x):
    x = float(x)
    return x if math.isfinite(x) else str(x)


def _log_abs(values):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log(np.abs(values))


def fit_loglog(log_eps, log_abs):
    """Least-squares line log|r| = slope * log(eps) + intercept.

    Zero samples are excluded. A net with no nonzero sample gets slope +inf.
    """
    ok = np.isfinite(log_abs)
    if not np.any(ok) and not np.any(np.isnan(log_abs)):
        return math.inf, -math.inf, 0.0
    if np.count_nonzero(ok) < 2:
        return math.nan, math.nan, math.nan
    x, y = log_eps[ok], log_abs[ok]
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return float(slope), float(intercept), float(np.sqrt(np.mean(resid**2)))


def classify(a, cfg: ClassifierConfig = DEFAULT_CONFIG, *, scale=None, positivity=False,
             grid=None) -> AsymptoticReport:
    """Classify a net as negligible, strictly nonzero, zero-divisor-like or indeterminate.

    ``a`` is a :class:`~gna.scalar.GenScalar` (or a raw sample array together
    with ``grid``). When ``scale`` is given, samples within
    ``cfg.rel_tol * scale`` of zero count as zero: use it for values produced
    by floating-point computations whose exact counterpart is zero.
    ``positivity=True`` upgrades strictly nonzero real nets that are positive
    on the whole tail to ``strictly_positive``.
    """
    if grid is None:
        grid = a.grid
        samples = a.samples
    else:
        samples = np.asarray(a)
    tail = grid.tail(cfg.tail_fraction)
    s = np.asarray(samples)[tail]
    le = grid.log_eps[tail]
    la = _log_abs(s)

    small_thr = cfg.m_neg * le
    large_thr = cfg.m_inv * le
    floor = None
    if scale is not None:
        sc = np.asarray(getattr(scale, "samples", scale), dtype=float)
        sc = np.broadcast_to(np.abs(sc), np.shape(samples))[tail]
        if cfg.rel_tol > 0:
            with np.errstate(divide="ignore"):
                lf = np.log(cfg.rel_tol * sc)
            small_thr = np.maximum(small_thr, lf)
            large_thr = np.maximum(large_thr, lf)
            floor = cfg.rel_tol

    nan = np.isnan(la)
    small = (la <= small_thr) & ~nan
    large = (la > large_thr) & ~nan
    n = len(s)

    if np.all(small):
        cls, order = Classification.NEGLIGIBLE, cfg.m_neg
    elif np.all(large):
        cls, order = Classification.STRICTLY_NONZERO, cfg.m_inv
        if positivity:
            real = np.isrealobj(s) or np.all(np.imag(s) == 0)
            if real and np.all(np.real(s) > 0):
                cls = Classification.STRICTLY_POSITIVE
    elif np.any(small) and np.any(large):
        cls, order = Classification.ZERO_DIVISOR_LIKE, None
    else:
        cls, order = Classification.INDETERMINATE, None

    slope, intercept, residual = fit_loglog(le, la)
    moderate = bool(np.all(np.isfinite(s)))
    if moderate:
        N = 0 if not math.isfinite(slope) else max(0, math.ceil(-slope - 1e-6))
        with np.errstate(over="ignore"):
            C = float(np.exp(np.max(la + N * le))) if n else 0.0
        if not math.isfinite(C):
            moderate = False
        bound = (C, N)
    else:
        bound = (math.inf, None)

    return AsymptoticReport(
        classification=cls,
        order=order,
        slope=slope,
        intercept=intercept,
        residual=residual,
        tail_fraction_used=n / len(grid),
        m_neg=cfg.m_neg,
        m_inv=cfg.m_inv,
        moderate=moderate,
        moderate_bound=bound,
        n_small=int(np.count_nonzero(small)),
        n_large=int(np.count_nonzero(large)),
        n_tail=n,
        rel_floor=floor,
    )


def is_negligible(a, cfg=DEFAULT_CONFIG, *, scale=None) -> bool:
    return classify(a, cfg, scale=scale).is_negligible


def all_negligible(values, grid, cfg=DEFAULT_CONFIG, *, scale=None):
    """Entrywise negligibility of a stacked array of shape (K, ...).

    Returns ``(ok, worst)`` where ``worst`` is the report of the first failing
    entry (or ``None``).
    """
    values = np.asarray(values)
    K = values.shape[0]
    flat = values.reshape(K, -1)
    if flat.shape[1] == 0:
        return True, None
    tail = grid.tail(cfg.tail_fraction)
    le = grid.log_eps[tail][:, None]
    thr = np.broadcast_to(cfg.m_neg * le, flat[tail].shape)
    sc = None
    if scale is not None:
        sc = np.abs(np.asarray(scale, dtype=float))
        if sc.ndim == 1 and values.ndim > 1:
            sc = sc.reshape((K,) + (1,) * (values.ndim - 1))
        sc = np.broadcast_to(sc, values.shape).reshape(K, -1)
        if cfg.rel_tol > 0:
            with np.errstate(divide="ignore"):
                thr = np.maximum(thr, np.log(cfg.rel_tol * sc[tail]))
    small = _log_abs(flat[tail]) <= thr
    if np.all(small):
        return True, None
    j = int(np.argmin(np.all(small, axis=0)))
    rep = classify(flat[:, j], cfg, grid=grid, scale=None if sc is None else sc[:, j])
    return False, rep
