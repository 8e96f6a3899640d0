"""Analysis configuration: tolerances, sampling and the structural constants."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields, replace

from .errors import ValidationError
from .quadrature import QuadratureConfig


@dataclass(frozen=True)
class AnalysisConfig:
    alpha: float = 0.01
    kappa: float = 0.1
    C_lip: float = 8.0
    C_sep: int = 64
    C_alp: float = 4.0
    C_thm: float = 1e6
    eps_target: float = 0.1
    sample_step: float | None = None
    sample_count: int = 2000
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    seed: int = 0
    alpha0: float = 0.05
    C0: float = 1e-4
    C_pipeline: float = 32.0
    witness_C: float = 16.0
    mass_multiplier: float = 1.0 / 64.0
    H_scale: float = 1.0
    geom_eps: float = 1e-12
    tol_density: float = 1e-9
    tol_pair: float = 1e-6
    M3: int | None = None
    alpha_from_eps: bool = False

    def __post_init__(self):
        if isinstance(self.quad, dict):
            object.__setattr__(self, "quad", QuadratureConfig(**self.quad))
        if not self.alpha_from_eps and not (0.0 < self.alpha < self.alpha0):
            raise ValidationError(f"alpha={self.alpha} must lie in (0, alpha0={self.alpha0})")
        if not (0.0 < self.kappa < 1.0):
            raise ValidationError("kappa must lie in (0, 1)")
        for name in ("C_lip", "C_sep", "C_alp", "C_thm", "C_pipeline", "witness_C"):
            if getattr(self, name) < 1:
                raise ValidationError(f"{name} must be >= 1")
        if self.sample_step is not None and not self.sample_step > 0:
            raise ValidationError("sample_step must be positive")
        if self.sample_count < 2:
            raise ValidationError("sample_count must be at least 2")
        if self.M3 is not None and self.M3 < 1:
            raise ValidationError("M3 must be positive")
        if not self.eps_target > 0:
            raise ValidationError("eps_target must be positive")

    @classmethod
    def desk(cls, **overrides) -> "AnalysisConfig":
        """Profile whose bucket counts are usable on unit-scale scenes."""
        base = dict(alpha=0.01, kappa=0.2, C_sep=2)
        base.update(overrides)
        return cls(**base)

    @classmethod
    def from_dict(cls, data: dict) -> "AnalysisConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValidationError(f"unknown config keys: {', '.join(unknown)}")
        data = dict(data)
        if "quad" in data and isinstance(data["quad"], dict):
            qknown = {f.name for f in fields(QuadratureConfig)}
            bad = sorted(set(data["quad"]) - qknown)
            if bad:
                raise ValidationError(f"unknown quad keys: {', '.join(bad)}")
            data["quad"] = QuadratureConfig(**data["quad"])
        return cls(**data)

    def with_overrides(self, **kw) -> "AnalysisConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def to_dict(self) -> dict:
        d = asdict(self)
        d["quad"] = self.quad.to_dict()
        return d

    def effective_alpha(self, eps: float) -> float:
        if self.alpha_from_eps:
            return (eps / self.C_alp) ** 10
        return self.alpha

    def implied_eps(self, alpha: float | None = None) -> float:
        a = self.alpha if alpha is None else alpha
        return self.C_alp * a ** 0.1

    def step_for(self, total_length: float) -> float:
        if self.sample_step is not None:
            return self.sample_step
        return total_length / self.sample_count

    def H_for(self, alpha: float, eps: float) -> float:
        return max(1.0, self.H_scale / (alpha * eps))

    def m2(self, alpha: float) -> int:
        return int(math.ceil(math.pi / (2.0 * math.atan(alpha))))

    def m3(self, alpha: float) -> int:
        if self.M3 is not None:
            return self.M3
        return int(math.ceil(math.pi / alpha**self.kappa))
