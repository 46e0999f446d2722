"""Parametric complexity and coordinate-invariant NML code-lengths.

The asymptotic log parametric complexity of a k-parameter model on n
observations is

    (k/2) log(n / 2 pi) + log integral sqrt(det I(theta)) d theta + o(1)

and for distance-determined families on a symmetric space the integral
factorizes into a parameter-space volume and a one-dimensional integral
over the extra parameter.  The code-length of a dataset is the maximized
negative log-likelihood (with respect to the volume element) plus the log
parametric complexity; its regret is constant and equal to the log
parametric complexity.  All code-lengths here are in nats; the o(1) term
of the asymptotic formula is dropped throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from . import hyperbolic as hy
from .gaussian import Dataset, MleFit, log_lik, mle, xi, xi_derivatives
from .quadrature import QuadSpec, RngSeed, integrate_1d, make_rng

#: Default compact parameter domain (geodesic ball radius, sigma interval).
DEFAULT_RADIUS = 3.0
DEFAULT_SIGMA_MIN = 0.1
DEFAULT_SIGMA_MAX = 3.0


@dataclass(frozen=True)
class ParamDomain:
    """Compact parameter region: geodesic ball of radius ``radius_R`` about
    the origin for the location, interval [sigma_min, sigma_max] for the
    scale."""

    radius_R: float = DEFAULT_RADIUS
    sigma_min: float = DEFAULT_SIGMA_MIN
    sigma_max: float = DEFAULT_SIGMA_MAX

    def __post_init__(self):
        if not self.radius_R > 0:
            raise ValueError("radius_R must be positive")
        if not 0 < self.sigma_min < self.sigma_max:
            raise ValueError("need 0 < sigma_min < sigma_max")


@dataclass(frozen=True)
class PcResult:
    """Log parametric complexity split into its three additive terms."""

    k: int
    n: int
    term_kn: float
    term_volume: float
    term_fisher: float

    @property
    def total_log_pc(self) -> float:
        return self.term_kn + self.term_volume + self.term_fisher


@dataclass(frozen=True)
class CodeLengthReport:
    """Code-length decomposition for one dataset."""

    neg_max_loglik: float
    log_pc: float
    boundary_flag: bool

    @property
    def total(self) -> float:
        return self.neg_max_loglik + self.log_pc


def pc_general(k: int, n: int, fisher_integral: float) -> PcResult:
    """Asymptotic log parametric complexity from a precomputed Fisher integral."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if n < 2:
        raise ValueError("n must be >= 2")
    if not fisher_integral > 0:
        raise ValueError(f"the Fisher integral must be positive, got {fisher_integral}")
    return PcResult(
        k=k, n=n,
        term_kn=0.5 * k * math.log(n / (2.0 * math.pi)),
        term_volume=0.0,
        term_fisher=math.log(fisher_integral))


def pc_symmetric(dim: int, m: int, n: int, vol_theta: float,
                 gamma_integral: float) -> PcResult:
    """Three-term decomposition for distance-determined families.

    k = dim + m parameters; the Fisher integral splits into the volume of
    the location domain and the one-dimensional integral over the extra
    parameters.  Consistent with :func:`pc_general` evaluated at
    ``vol_theta * gamma_integral``.
    """
    if dim < 1 or m < 1:
        raise ValueError("dim and m must be >= 1")
    if n < 2:
        raise ValueError("n must be >= 2")
    if not vol_theta > 0 or not gamma_integral > 0:
        raise ValueError("volume and integral must be positive")
    return PcResult(
        k=dim + m, n=n,
        term_kn=0.5 * (dim + m) * math.log(n / (2.0 * math.pi)),
        term_volume=math.log(vol_theta),
        term_fisher=math.log(gamma_integral))


def hgd_sigma_integral(dim: int, domain: ParamDomain,
                       quad: QuadSpec = QuadSpec(rel_tol=1e-10),
                       derivatives=None) -> float:
    """integral over [sigma_min, sigma_max] of (xi'/(D sigma xi))^(D/2) B(sigma).

    B(sigma) is the square root of the sigma Fisher information.
    ``derivatives`` may replace the closed-form (xi', xi'') supplier, which
    lets an independent finite-difference oracle rebuild the integrand.
    """
    if derivatives is None:
        derivatives = xi_derivatives

    def integrand(s: float) -> float:
        value = xi(dim, s)
        d1, d2 = derivatives(dim, s)
        ratio = d1 / value
        i_sigma = d2 / value - ratio * ratio + 3.0 / s * ratio
        c_theta = (d1 / (dim * s * value)) ** dim
        return math.sqrt(c_theta * i_sigma)

    return integrate_1d(integrand, domain.sigma_min, domain.sigma_max, quad)


def pc_hgd(dim: int, n: int, domain: ParamDomain,
           quad: QuadSpec = QuadSpec(rel_tol=1e-10), derivatives=None) -> PcResult:
    """Log parametric complexity of the hyperbolic Gaussian on ``domain``.

    (D+1)/2 log(n/2pi) + log V_{H^D}(R) + log of the sigma integral.  The
    location Fisher factor is xi'/(D sigma xi); see the module notes on the
    dropped o(1) term.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    return pc_symmetric(
        dim, 1, n,
        vol_theta=hy.ball_volume(dim, domain.radius_R),
        gamma_integral=hgd_sigma_integral(dim, domain, quad, derivatives))


def rm_nml_codelength(data: Dataset, domain: ParamDomain = ParamDomain(),
                      quad: QuadSpec = QuadSpec(rel_tol=1e-10),
                      fit: MleFit | None = None) -> CodeLengthReport:
    """Volume-element NML code-length of ``data`` in nats.

    Maximized negative log-likelihood plus log parametric complexity; the
    boundary flag records an MLE clamped to the domain boundary, where the
    asymptotic complexity formula is not reliable.
    """
    if fit is None:
        fit = mle(data, domain)
    neg_ll = -log_lik(data, fit.params)
    pc = pc_hgd(data.dim, data.n, domain, quad)
    return CodeLengthReport(
        neg_max_loglik=neg_ll,
        log_pc=pc.total_log_pc,
        boundary_flag=fit.boundary)


def chart_gap(data: Dataset, chart: str) -> float:
    """Code-length gap between chart-density NML and volume-element NML.

    Equals -sum_i log sqrt(det g(x_i)) in the given chart: exactly the
    difference between the conventional NML code-length computed from
    chart densities and the volume-element code-length.
    """
    total = 0.0
    for point in data:
        total -= math.log(hy.sqrt_det_metric(chart, point))
    return total


def regret(data: Dataset, codelength: float,
           domain: ParamDomain = ParamDomain()) -> float:
    """Code-length regret: codelength minus the maximized log-loss.

    For the volume-element NML code-length this equals the log parametric
    complexity for every dataset (the constant-regret property).
    """
    fit = mle(data, domain)
    return codelength - (-log_lik(data, fit.params))


def pc_mc_gauss1d(n: int, a: float, b: float, samples: int,
                  seed: int | RngSeed) -> tuple[float, float]:
    """Monte-Carlo log parametric complexity of N(theta, 1), theta in [a, b].

    Importance sampling with theta uniform on [a, b] and the data drawn
    from N(theta, 1): the estimate targets
    integral p(y^n | thetahat(y^n)) 1{thetahat in [a, b]} dy^n, which this
    family admits exactly as (b - a) sqrt(n / 2 pi).  Weights use the
    mixture (marginal) proposal density, which keeps them bounded; the
    per-theta conditional weight exp(n (thetahat - theta)^2 / 2) has such a
    heavy tail that feasible sample sizes systematically miss part of the
    mass.  Everything depends on y^n only through its mean, so the mean is
    drawn directly from its exact law N(theta, 1/n).  Returns the log
    estimate (via log-sum-exp) and its delta-method standard error.
    """
    if not b > a:
        raise ValueError(f"degenerate interval: [{a}, {b}]")
    if n < 10:
        raise ValueError("n must be >= 10")
    if samples < 10_000:
        raise ValueError("samples must be >= 1e4")
    rng = make_rng(seed)
    theta = rng.uniform(a, b, samples)
    ybar = theta + rng.standard_normal(samples) / math.sqrt(n)
    inside = (ybar >= a) & (ybar <= b)
    sqrt_n = math.sqrt(n)
    marginal = ndtr(sqrt_n * (b - ybar)) - ndtr(sqrt_n * (a - ybar))
    log_w = np.where(
        inside,
        0.5 * math.log(n / (2.0 * math.pi)) + math.log(b - a)
        - np.log(np.maximum(marginal, 1e-300)),
        -np.inf)
    shift = float(np.max(log_w))
    w = np.exp(log_w - shift)
    mean_w = float(w.mean())
    se_w = float(w.std(ddof=1) / math.sqrt(samples))
    return shift + math.log(mean_w), se_w / mean_w
