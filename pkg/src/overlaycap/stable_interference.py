"""Law of the aggregate interference seen at the origin of a Poisson field.

Each tier of transmitters is a homogeneous PPP of a given density whose members
radiate a common power with path loss ``d**-alpha``. For ``alpha > 2`` the sum
over the plane is a one-sided stable variable whose Laplace transform is

    E[exp(-s I)] = exp(-pi * Gamma(1 - 2/alpha) * D * s**(2/alpha)),
    D = sum_k density_k * power_k**(2/alpha).

For ``alpha = 4`` this is a Levy law with closed-form density and CDF. Other
exponents are only available through :func:`mgf` and the Monte Carlo sampler.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.special import erf

from .numerics import DomainError, gamma_function, q_function, q_inverse

_PI_3_2 = math.pi**1.5

# beyond this Q(x) is below the smallest subnormal double
Q_ARG_CLAMP = 38.0


class UnsupportedExponentError(ValueError):
    """A closed form was requested for a path-loss exponent other than 4."""


@dataclass(frozen=True)
class InterferenceComponent:
    """One tier of interferers: PPP density (1/m^2) and received power scale (W)."""

    density: float
    power: float

    def __post_init__(self):
        if not (math.isfinite(self.density) and self.density >= 0.0):
            raise DomainError(f"density must be finite and >= 0, got {self.density!r}")
        if not (math.isfinite(self.power) and self.power > 0.0):
            raise DomainError(f"power must be finite and > 0, got {self.power!r}")


@dataclass(frozen=True)
class StableLaw:
    alpha: float
    components: tuple[InterferenceComponent, ...]

    def __init__(self, alpha: float, components: Iterable[InterferenceComponent]):
        alpha = float(alpha)
        if not alpha > 2.0:
            raise DomainError(f"path-loss exponent must exceed 2, got {alpha!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "components", tuple(components))

    @classmethod
    def single(cls, density: float, power: float, alpha: float = 4.0) -> "StableLaw":
        return cls(alpha, [InterferenceComponent(density, power)])

    @property
    def dispersion(self) -> float:
        """sum_k density_k * power_k**(2/alpha); the only parameter the law depends on."""
        e = 2.0 / self.alpha
        return math.fsum(c.density * c.power**e for c in self.components)

    def _require_levy(self):
        if self.alpha != 4.0:
            raise UnsupportedExponentError(
                f"closed-form density/CDF exist only for alpha = 4, got {self.alpha}"
            )

    @property
    def levy_scale(self) -> float:
        """Scale c of the Levy law, f(x) = sqrt(c / 2 pi) x^-3/2 exp(-c / 2x)."""
        self._require_levy()
        return 0.5 * math.pi**3 * self.dispersion**2


def mgf(law: StableLaw, s: float) -> float:
    """Laplace transform E[exp(-s I)] of the aggregate interference."""
    s = float(s)
    if not s >= 0.0:
        raise DomainError(f"mgf argument must be >= 0, got {s!r}")
    if s == 0.0:
        return 1.0
    e = 2.0 / law.alpha
    return math.exp(-math.pi * gamma_function(1.0 - e) * law.dispersion * s**e)


def _positive_array(x, name):
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr <= 0.0):
        raise DomainError(f"{name} must be > 0")
    return arr


def _scalar_or_array(arr):
    return float(arr) if arr.ndim == 0 else arr


def levy_pdf(law: StableLaw, x):
    """Density of the interference for alpha = 4 (float or array input)."""
    law._require_levy()
    x = _positive_array(x, "x")
    d = law.dispersion
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        out = 0.5 * math.pi * d * x**-1.5 * np.exp(-(math.pi**3) * d * d / (4.0 * x))
    out = np.where(np.isfinite(x), out, 0.0)
    return _scalar_or_array(out)


def levy_cdf(law: StableLaw, x):
    """P(I <= x) = 2 Q(pi^(3/2) D / sqrt(2x)) for alpha = 4."""
    law._require_levy()
    x = _positive_array(x, "x")
    with np.errstate(divide="ignore"):
        arg = _PI_3_2 * law.dispersion / np.sqrt(2.0 * x)
    arg = np.minimum(arg, Q_ARG_CLAMP)
    return _scalar_or_array(np.minimum(2.0 * np.asarray(q_function(arg)), 1.0))


def tail_probability(law: StableLaw, threshold):
    """P(I >= threshold), the outage probability for SINR margin ``threshold``.

    Computed as erf(.) directly so that small tails keep their relative accuracy.
    """
    law._require_levy()
    t = _positive_array(threshold, "threshold")
    arg = np.minimum(_PI_3_2 * law.dispersion / np.sqrt(2.0 * t), Q_ARG_CLAMP)
    # 1 - 2Q(u) = erf(u / sqrt 2)
    return _scalar_or_array(erf(arg / math.sqrt(2.0)))


def levy_quantile(law: StableLaw, p):
    """Inverse of :func:`levy_cdf`; used to draw reference samples."""
    law._require_levy()
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"quantile level must be in (0, 1), got {p!r}")
    u = q_inverse(0.5 * p)
    return 0.5 * math.pi**3 * law.dispersion**2 / (u * u)


def levy_mode(law: StableLaw) -> float:
    return law.levy_scale / 3.0


def merged(law: StableLaw) -> StableLaw:
    """Equivalent single-component law with unit power and the same dispersion."""
    return StableLaw(law.alpha, [InterferenceComponent(law.dispersion, 1.0)])
