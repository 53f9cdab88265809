from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace

from .errors import ConfigurationError

CONFIG_ENV_VAR = "GNA_CONFIG"


@dataclass(frozen=True)
class ClassifierConfig:
    """Thresholds standing in for the quantifiers "for all m" / "exists m".

    ``m_neg``: a net is negligible if ``|r_eps| <= eps**m_neg`` on the tail.
    ``m_inv``: a net is strictly nonzero if ``|r_eps| > eps**m_inv`` on the tail.
    ``rel_tol``: roundoff floor, only consulted when a classification is given
    a ``scale`` (the magnitude of the data a computed value came from).
    """

    m_neg: int = 8
    m_inv: int = 8
    tail_fraction: float = 0.5
    fit_method: str = "least_squares_loglog"
    rel_tol: float = 1e-9

    def __post_init__(self):
        if int(self.m_neg) != self.m_neg or self.m_neg < 1:
            raise ConfigurationError("m_neg must be an integer >= 1")
        if int(self.m_inv) != self.m_inv or self.m_inv < 1:
            raise ConfigurationError("m_inv must be an integer >= 1")
        if not 0 < self.tail_fraction <= 1:
            raise ConfigurationError("tail_fraction must lie in (0, 1]")
        if self.fit_method != "least_squares_loglog":
            raise ConfigurationError(f"unknown fit_method {self.fit_method!r}")
        if not 0 <= self.rel_tol < 1:
            raise ConfigurationError("rel_tol must lie in [0, 1)")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ClassifierConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def with_overrides(self, **kw) -> "ClassifierConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


DEFAULT_CONFIG = ClassifierConfig()


def load_config(path=None) -> ClassifierConfig:
    """Read a JSON config file; ``path=None`` falls back to ``$GNA_CONFIG``."""
    path = path or os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return DEFAULT_CONFIG
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError("config file must hold a JSON object")
    return ClassifierConfig.from_dict(data)
