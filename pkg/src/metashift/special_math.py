"""Special functions and closed-form divergences for the Beta family.

Everything downstream (environments, base learners, Gibbs posteriors,
bound evaluators) reduces to Beta/Bernoulli algebra, so this module is
the numerical backbone: log Beta function, Beta log-densities, moments,
the closed-form KL divergence between Beta distributions, and seeded
Beta sampling.

Densities are never evaluated at the endpoints 0 or 1: shape parameters
below one make the endpoint density infinite, so grids and samplers stay
strictly inside the open interval (see ``EPS_INTERIOR``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as _sc

__all__ = [
    "EPS_INTERIOR",
    "BetaParams",
    "log_beta_fn",
    "beta_log_pdf",
    "beta_mean_var",
    "kl_beta_beta",
    "digamma",
    "sample_beta",
]

# Interior clipping margin for grid/density constructions on (0, 1).
EPS_INTERIOR = 1e-9


@dataclass(frozen=True)
class BetaParams:
    """Shape pair (a, b) of a Beta distribution on [0, 1].

    Used for task environments, hyper-priors, model priors and the base
    learner's output distribution alike.
    """

    a: float
    b: float

    def __post_init__(self) -> None:
        a, b = float(self.a), float(self.b)
        if not (np.isfinite(a) and np.isfinite(b)) or a <= 0.0 or b <= 0.0:
            raise ValueError(f"Beta shapes must be finite and positive, got ({self.a}, {self.b})")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def mean(self) -> float:
        return self.a / (self.a + self.b)

    @property
    def variance(self) -> float:
        s = self.a + self.b
        return self.a * self.b / (s * s * (s + 1.0))


_STIRLING_SWITCH = 1e4


def _stirling_tail(z):
    # correction series of ln Gamma beyond the leading Stirling terms;
    # below 1e-30 absolute for z >= 1e4
    z2 = 1.0 / (z * z)
    return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - z2 / 1680.0) * z2) * z2) / z


def _log_gamma_ratio(hi, lo):
    # ln Gamma(hi) - ln Gamma(hi + lo) without cancellation, hi large
    return (
        -(hi - 0.5) * np.log1p(lo / hi)
        - lo * np.log(hi + lo)
        + lo
        + _stirling_tail(hi)
        - _stirling_tail(hi + lo)
    )


def log_beta_fn(a, b):
    """ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b).

    Accepts scalars or arrays; inputs must be positive and finite.
    Large arguments take a Stirling-difference branch: the naive
    three-term form cancels catastrophically once a + b is huge.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(~np.isfinite(a)) or np.any(~np.isfinite(b)) or np.any(a <= 0) or np.any(b <= 0):
        raise ValueError("log_beta_fn requires finite positive shape arguments")
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    big = hi >= _STIRLING_SWITCH
    safe_hi = np.where(big, hi, _STIRLING_SWITCH)
    out = np.where(
        big,
        _sc.gammaln(lo) + _log_gamma_ratio(safe_hi, lo),
        _sc.betaln(a, b),
    )
    return float(out) if out.ndim == 0 else out


def digamma(x):
    """Digamma function psi(x) for x > 0 (scalar or array)."""
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x <= 0):
        raise ValueError("digamma requires finite positive arguments")
    out = _sc.digamma(x)
    return float(out) if out.ndim == 0 else out


def beta_log_pdf(x, p: BetaParams):
    """Log-density of Beta(p.a, p.b) at x, with x strictly inside (0, 1).

    Endpoint evaluations are a domain error by design; callers that walk
    grids must clip to the open interval first.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0) or np.any(x >= 1.0):
        raise ValueError("beta_log_pdf requires 0 < x < 1")
    out = (p.a - 1.0) * np.log(x) + (p.b - 1.0) * np.log1p(-x) - log_beta_fn(p.a, p.b)
    return float(out) if out.ndim == 0 else out


def beta_mean_var(p: BetaParams) -> tuple[float, float]:
    """Mean a/(a+b) and variance ab/((a+b)^2 (a+b+1)) of Beta(a, b)."""
    return p.mean, p.variance


def kl_beta_beta(p: BetaParams, q: BetaParams) -> float:
    """KL divergence D(Beta(p) || Beta(q)) in nats, closed form.

    ln[B(q)/B(p)] + (p.a-q.a) psi(p.a) + (p.b-q.b) psi(p.b)
                  + (q.a-p.a+q.b-p.b) psi(p.a+p.b)

    Nonnegative up to ~1e-12 of floating point slack.
    """
    return float(
        log_beta_fn(q.a, q.b)
        - log_beta_fn(p.a, p.b)
        + (p.a - q.a) * _sc.digamma(p.a)
        + (p.b - q.b) * _sc.digamma(p.b)
        + (q.a - p.a + q.b - p.b) * _sc.digamma(p.a + p.b)
    )


def kl_beta_beta_arrays(pa, pb, qa, qb):
    """Vectorized ``kl_beta_beta`` on raw shape arrays (internal fast path)."""
    return (
        _sc.betaln(qa, qb)
        - _sc.betaln(pa, pb)
        + (pa - qa) * _sc.digamma(pa)
        + (pb - qb) * _sc.digamma(pb)
        + (qa - pa + qb - pb) * _sc.digamma(pa + pb)
    )


def sample_beta(p: BetaParams, rng: np.random.Generator, size=None):
    """Draw from Beta(p.a, p.b) using the given stream.

    Deterministic for a given generator state. Draws are clipped to the
    open interval so downstream log-density evaluations stay finite.
    """
    draw = rng.beta(p.a, p.b, size=size)
    return np.clip(draw, EPS_INTERIOR, 1.0 - EPS_INTERIOR)
