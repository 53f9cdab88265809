"""Finite samplings of the index set (0, 1]."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConfigurationError

MIN_GRID_LENGTH = 8


@dataclass(frozen=True)
class EpsGrid:
    """Strictly decreasing sample points eps_k in (0, 1], k = k_min..k_max.

    Classification is always relative to the grid: a net is only ever
    inspected at these points.
    """

    kind: str
    k_min: int
    k_max: int
    values: tuple = field(repr=False)
    ratio: float | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or len(v) != self.k_max - self.k_min + 1:
            raise ConfigurationError("grid values do not match the index range")
        if len(v) < MIN_GRID_LENGTH:
            raise ConfigurationError(
                f"grid needs at least {MIN_GRID_LENGTH} points, got {len(v)}"
            )
        if not np.all(np.isfinite(v)) or np.any(v <= 0) or np.any(v > 1):
            raise ConfigurationError("grid values must lie in (0, 1]")
        if np.any(np.diff(v) >= 0):
            raise ConfigurationError("grid values must be strictly decreasing")

    def __len__(self):
        return len(self.values)

    @cached_property
    def eps(self) -> np.ndarray:
        a = np.array(self.values, dtype=float)
        a.flags.writeable = False
        return a

    @cached_property
    def log_eps(self) -> np.ndarray:
        a = np.log(self.eps)
        a.flags.writeable = False
        return a

    @cached_property
    def ks(self) -> np.ndarray:
        a = np.arange(self.k_min, self.k_max + 1)
        a.flags.writeable = False
        return a

    def tail(self, fraction: float) -> slice:
        """Slice selecting the final ``fraction`` of the samples (smallest eps)."""
        n = len(self)
        used = max(2, int(np.ceil(fraction * n)))
        return slice(n - min(used, n), n)

    def descriptor(self) -> dict:
        if self.kind == "explicit":
            return {"explicit": [float(x) for x in self.values]}
        d = {"kind": self.kind, "k_min": self.k_min, "k_max": self.k_max}
        if self.kind == "geometric":
            d["ratio"] = self.ratio
        return d


def make_grid(kind="dyadic", k_min=4, k_max=40, *, ratio=None, values=None) -> EpsGrid:
    """Build a grid.

    ``dyadic`` gives eps_k = 2**-k, ``geometric`` gives eps_k = ratio**k and
    ``explicit`` takes ``values`` as given (indexed from ``k_min``).
    """
    if kind == "explicit":
        if values is None:
            raise ConfigurationError("explicit grid needs values")
        values = tuple(float(x) for x in values)
        k_min = 0 if k_min is None else int(k_min)
        return EpsGrid("explicit", k_min, k_min + len(values) - 1, values)
    if k_min is None or k_max is None or int(k_min) >= int(k_max):
        raise ConfigurationError(f"invalid index range k_min={k_min}, k_max={k_max}")
    k_min, k_max = int(k_min), int(k_max)
    if k_min < 0:
        raise ConfigurationError("k_min must be non-negative")
    ks = np.arange(k_min, k_max + 1, dtype=float)
    if kind == "dyadic":
        vals = np.ldexp(1.0, -ks.astype(int))
        return EpsGrid("dyadic", k_min, k_max, tuple(vals.tolist()))
    if kind == "geometric":
        if ratio is None or not 0 < ratio < 1:
            raise ConfigurationError("geometric grid needs 0 < ratio < 1")
        vals = float(ratio) ** ks
        return EpsGrid("geometric", k_min, k_max, tuple(vals.tolist()), float(ratio))
    raise ConfigurationError(f"unknown grid kind {kind!r}")


def grid_from_descriptor(desc) -> EpsGrid:
    """Inverse of :meth:`EpsGrid.descriptor`; also accepts ``"dyadic:4:40"``."""
    if isinstance(desc, str):
        parts = desc.split(":")
        try:
            if parts[0] == "dyadic" and len(parts) == 3:
                return make_grid("dyadic", int(parts[1]), int(parts[2]))
            if parts[0] == "geometric" and len(parts) == 4:
                return make_grid(
                    "geometric", int(parts[2]), int(parts[3]), ratio=float(parts[1])
                )
        except ValueError as exc:
            raise ConfigurationError(f"bad grid descriptor {desc!r}") from exc
        raise ConfigurationError(
            f"bad grid descriptor {desc!r}; use dyadic:KMIN:KMAX or geometric:RATIO:KMIN:KMAX"
        )
    if not isinstance(desc, dict):
        raise ConfigurationError("grid descriptor must be a string or an object")
    if "explicit" in desc:
        return make_grid("explicit", desc.get("k_min", 0), None, values=desc["explicit"])
    try:
        return make_grid(
            desc.get("kind", "dyadic"), desc["k_min"], desc["k_max"], ratio=desc.get("ratio")
        )
    except KeyError as exc:
        raise ConfigurationError(f"grid descriptor lacks {exc}") from exc


DEFAULT_GRID = make_grid("dyadic", 4, 40)
