"""Riemannian Gaussian distribution on hyperbolic space.

Density with respect to the volume element:

    p_vol(x | mu, sigma) = exp(-d^2(x, mu) / (2 sigma^2)) / xi(sigma)

with the normalization constant xi given in closed form through erf and a
binomial sum over the expansion of sinh^(D-1).  Includes exact first and
second derivatives of xi, log-likelihoods, seeded sampling and maximum
likelihood estimation (Frechet mean + bisection for sigma).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator

import numpy as np
from scipy.special import erf, gammaln

from . import hyperbolic as hy
from .quadrature import RngSeed, make_rng

if TYPE_CHECKING:
    from .complexity import ParamDomain

SQRT_2PI = math.sqrt(2.0 * math.pi)

_MAX_FRECHET_ITERATIONS = 10_000
_FRECHET_STEP_TOL = 1e-10


class EstimationError(RuntimeError):
    """Maximum likelihood estimation failed to converge."""


@dataclass(frozen=True, eq=False)
class RgdParams:
    """Location/scale parameters (mu, sigma) of the hyperbolic Gaussian."""

    mu: hy.LorentzPoint
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    @property
    def dim(self) -> int:
        return self.mu.dim


class Dataset:
    """Sample of points of H^D stored as an (n, D+1) Lorentz coordinate array."""

    def __init__(self, coords: np.ndarray):
        coords = np.asarray(coords, dtype=float)
        if coords.ndim != 2 or coords.shape[1] < 2:
            raise ValueError(f"expected an (n, D+1) array, got shape {coords.shape}")
        if coords.shape[0] < 1:
            raise ValueError("a dataset needs at least one point")
        for i in range(coords.shape[0]):
            try:
                hy.LorentzPoint(coords[i])
            except hy.GeometryError as exc:
                raise ValueError(f"point {i} is invalid: {exc}") from exc
        self._coords = coords.copy()
        self._coords.setflags(write=False)

    @classmethod
    def from_points(cls, points: list[hy.LorentzPoint]) -> "Dataset":
        if not points:
            raise ValueError("a dataset needs at least one point")
        dims = {p.dim for p in points}
        if len(dims) != 1:
            raise ValueError(f"points of mixed dimension: {sorted(dims)}")
        return cls(np.stack([p.coords for p in points]))

    @property
    def coords(self) -> np.ndarray:
        return self._coords

    @property
    def dim(self) -> int:
        return self._coords.shape[1] - 1

    @property
    def n(self) -> int:
        return self._coords.shape[0]

    def __len__(self) -> int:
        return self.n

    def __iter__(self) -> Iterator[hy.LorentzPoint]:
        for row in self._coords:
            yield hy.LorentzPoint(row)

    def transformed(self, T: np.ndarray) -> "Dataset":
        """Dataset with every point mapped through the isometry matrix T."""
        return Dataset(self._coords @ T.T)


def _xi_terms(dim: int, sigma: float):
    """Prefactor K and per-term arrays of the xi expansion.

    xi(sigma) = K * sigma * sum_i a_i with
    a_i = (-1)^i C(D-1, i) exp(sigma^2 p_i^2 / 2) (1 + erf(p_i sigma / sqrt 2)),
    p_i = (D - 1) - 2i.
    """
    K = (math.pi ** (dim / 2.0) * math.exp(-gammaln(dim / 2.0))
         * math.sqrt(math.pi / 2.0) / 2.0 ** (dim - 2))
    i = np.arange(dim)
    p = (dim - 1) - 2.0 * i
    b = (-1.0) ** i * np.array([math.comb(dim - 1, k) for k in range(dim)], dtype=float)
    a = b * np.exp(0.5 * sigma * sigma * p * p) * (1.0 + erf(p * sigma / math.sqrt(2.0)))
    return K, a, b, p


def xi(dim: int, sigma: float) -> float:
    """Normalization constant of the hyperbolic Gaussian."""
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    K, a, _, _ = _xi_terms(dim, sigma)
    return K * sigma * math.fsum(a)


def xi_derivatives(dim: int, sigma: float) -> tuple[float, float]:
    """First and second derivatives of :func:`xi` with respect to sigma.

    Obtained by differentiating the closed form; the b_i p_i sums vanish
    for most dimensions but are required at D = 2 (and contribute to the
    second derivative at even D >= 4).
    """
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    K, a, b, p = _xi_terms(dim, sigma)
    s = sigma
    sum_a = math.fsum(a)
    sum_ap2 = math.fsum(a * p * p)
    sum_ap4 = math.fsum(a * p ** 4)
    sum_bp = math.fsum(b * p)
    sum_bp3 = math.fsum(b * p ** 3)
    c = math.sqrt(2.0 / math.pi)
    d1 = K * (sum_a + s * s * sum_ap2 + s * c * sum_bp)
    d2 = K * (3.0 * s * sum_ap2 + s ** 3 * sum_ap4 + c * (2.0 * sum_bp + s * s * sum_bp3))
    return d1, d2


def radial_cutoff(dim: int, sigma: float, tail: float = 40.0) -> float:
    """Truncation radius for integrals of exp(-r^2/2s^2) sinh^(D-1) r.

    The integrand completes to a Gaussian centered near sigma^2 (D-1) with
    width sigma, so ``tail`` standard deviations beyond that point leave a
    negligible remainder (below 1e-300 at the default).
    """
    return sigma * sigma * (dim - 1) + tail * sigma


def log_radial_weight(dim: int, r: np.ndarray, sigma: float) -> np.ndarray:
    """log of exp(-r^2 / 2 sigma^2) sinh^(D-1)(r), stable for large r."""
    r = np.asarray(r, dtype=float)
    gauss = -r * r / (2.0 * sigma * sigma)
    if dim == 1:
        return gauss
    with np.errstate(divide="ignore"):
        log_sinh = np.where(
            r > 0.0,
            r + np.log1p(-np.exp(-2.0 * np.maximum(r, 1e-300))) - math.log(2.0),
            -np.inf)
    return gauss + (dim - 1) * log_sinh


def log_pdf_vol_many(coords: np.ndarray, params: RgdParams) -> np.ndarray:
    """log p_vol for every row of an (n, D+1) Lorentz coordinate array."""
    d = hy.dist_many(params.mu.coords, coords)
    return -d * d / (2.0 * params.sigma ** 2) - math.log(xi(params.dim, params.sigma))


def pdf_vol(x: hy.LorentzPoint, params: RgdParams) -> float:
    """Density of the hyperbolic Gaussian with respect to the volume element."""
    return float(np.exp(log_pdf_vol_many(x.coords[None, :], params)[0]))


def log_lik(data: Dataset, params: RgdParams) -> float:
    """Log-likelihood -n log xi(sigma) - sum_i d^2(x_i, mu) / (2 sigma^2)."""
    if data.dim != params.dim:
        raise ValueError(f"data dimension {data.dim} != parameter dimension {params.dim}")
    d = hy.dist_many(params.mu.coords, data.coords)
    return float(-data.n * math.log(xi(data.dim, params.sigma))
                 - (d @ d) / (2.0 * params.sigma ** 2))


def _radial_table(dim: int, sigma: float, nodes: int = 4096):
    """Inverse-CDF table of the radial density on [0, cutoff]."""
    r = np.linspace(0.0, radial_cutoff(dim, sigma, tail=12.0), nodes)
    logw = log_radial_weight(dim, r, sigma)
    w = np.exp(logw - np.max(logw))
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (w[1:] + w[:-1]) * np.diff(r))])
    cdf /= cdf[-1]
    return r, cdf


def sample(n: int, params: RgdParams, seed: int | RngSeed) -> Dataset:
    """Draw ``n`` points: tabulated inverse-CDF radius, uniform direction.

    The radius follows the density proportional to
    exp(-r^2 / 2 sigma^2) sinh^(D-1) r via a 4096-node inverse-CDF table
    with linear interpolation; the direction is uniform on S^(D-1).  The
    polar point at the origin is then carried to ``mu`` by the isometry
    :func:`rmnml.hyperbolic.isometry_to`.  Deterministic for a fixed seed.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    dim = params.dim
    rng = make_rng(seed)
    grid, cdf = _radial_table(dim, params.sigma)
    radii = np.interp(rng.uniform(0.0, 1.0, n), cdf, grid)
    if dim == 1:
        dirs = (rng.integers(0, 2, size=(n, 1)) * 2 - 1).astype(float)
    else:
        g = rng.standard_normal((n, dim))
        norms = np.linalg.norm(g, axis=1, keepdims=True)
        # a zero draw has probability 0; regularize anyway
        dirs = g / np.maximum(norms, 1e-300)
    coords = np.empty((n, dim + 1))
    coords[:, 0] = np.cosh(radii)
    coords[:, 1:] = np.sinh(radii)[:, None] * dirs
    T = hy.isometry_to(params.mu)
    return Dataset(coords @ T.T)


def frechet_mean(coords: np.ndarray) -> hy.LorentzPoint:
    """Minimizer of sum_i d^2(x_i, mu) by Riemannian gradient descent.

    Update mu <- exp_mu((eta/n) sum_i log_mu(x_i)) with eta = 1, halved
    whenever the objective does not decrease; stops when the step norm
    drops below 1e-10.
    """
    n = coords.shape[0]
    mean = coords.mean(axis=0)
    # the Euclidean mean of hyperboloid points is timelike, so this projection
    # onto the sheet is always defined
    mink = float(mean[1:] @ mean[1:] - mean[0] * mean[0])
    mu = mean / math.sqrt(-mink)

    def objective(m: np.ndarray) -> float:
        d = hy.dist_many(m, coords)
        return float(d @ d)

    value = objective(mu)
    eta = 1.0
    for _ in range(_MAX_FRECHET_ITERATIONS):
        d = hy.dist_many(mu, coords)
        alpha = np.cosh(d)
        u = coords - alpha[:, None] * mu[None, :]
        sinh_d = np.sqrt(np.maximum(alpha * alpha - 1.0, 0.0))
        coef = np.where(sinh_d > 1e-15, d / np.maximum(sinh_d, 1e-300), 1.0)
        grad = (coef[:, None] * u).sum(axis=0) / n
        # re-project: rounding in alpha leaves a non-tangent component that
        # would otherwise feed back through the exponential map
        grad += (grad[1:] @ mu[1:] - grad[0] * mu[0]) * mu
        step = eta * grad
        step_norm = math.sqrt(max(float(step[1:] @ step[1:] - step[0] * step[0]), 0.0))
        if step_norm < _FRECHET_STEP_TOL:
            return hy.LorentzPoint(mu)
        candidate = hy._exp_map_coords(mu, step)
        new_value = objective(candidate)
        if new_value < value:
            mu, value = candidate, new_value
        else:
            eta *= 0.5
    raise EstimationError(
        f"Frechet mean did not converge in {_MAX_FRECHET_ITERATIONS} iterations")


def mean_dispersion(dim: int, sigma: float) -> float:
    """sigma^3 xi'(sigma) / xi(sigma), the model value of E[d^2(x, mu)].

    Strictly increasing in sigma, which makes the sigma-step of the MLE a
    bisection problem.
    """
    d1, _ = xi_derivatives(dim, sigma)
    return sigma ** 3 * d1 / xi(dim, sigma)


@dataclass(frozen=True)
class MleFit:
    """MLE result with flags recording clamping to the parameter domain."""

    params: RgdParams
    mu_clamped: bool
    sigma_clamped: bool

    @property
    def boundary(self) -> bool:
        return self.mu_clamped or self.sigma_clamped


def mle(data: Dataset, domain: "ParamDomain") -> MleFit:
    """Maximum likelihood fit of (mu, sigma), clamped to ``domain``.

    mu is the Frechet mean, pulled back to the geodesic ball of radius
    ``domain.radius_R`` about the origin if it falls outside; sigma solves
    sigma^3 xi'/xi = mean d^2(x_i, mu) by bisection on
    [sigma_min, sigma_max], with boundary values used (and flagged) when
    the equation has no interior root.
    """
    if data.n < 2:
        raise ValueError("the MLE needs at least 2 points (sigma is degenerate at n=1)")
    dim = data.dim
    mu = frechet_mean(data.coords)

    mu_clamped = False
    r_mu = float(np.arccosh(max(mu.coords[0], 1.0)))
    if r_mu > domain.radius_R:
        polar = hy.to_polar(mu)
        mu = hy.from_polar(hy.PolarCoords(domain.radius_R, polar.direction))
        mu_clamped = True

    d = hy.dist_many(mu.coords, data.coords)
    target = float(d @ d) / data.n

    lo, hi = domain.sigma_min, domain.sigma_max
    sigma_clamped = False
    if target <= mean_dispersion(dim, lo):
        sigma = lo
        sigma_clamped = True
    elif target >= mean_dispersion(dim, hi):
        sigma = hi
        sigma_clamped = True
    else:
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mean_dispersion(dim, mid) < target:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-14 * max(1.0, hi):
                break
        sigma = 0.5 * (lo + hi)
    return MleFit(RgdParams(mu, sigma), mu_clamped, sigma_clamped)


class RiemannianGaussianMLE:
    """Estimator-style wrapper around :func:`mle`.

    Follows the fit/get_params convention so the model composes with
    generic model-selection tooling:

    >>> est = RiemannianGaussianMLE(radius_R=3.0).fit(data)
    >>> est.mu_, est.sigma_
    """

    def __init__(self, radius_R: float = 3.0, sigma_min: float = 0.1,
                 sigma_max: float = 3.0):
        self.radius_R = radius_R
        self.sigma_min = sigma_min
        self.sigma_max = sigma_max

    def get_params(self, deep: bool = True) -> dict:
        return {"radius_R": self.radius_R, "sigma_min": self.sigma_min,
                "sigma_max": self.sigma_max}

    def set_params(self, **params) -> "RiemannianGaussianMLE":
        for key, value in params.items():
            if key not in self.get_params():
                raise ValueError(f"unknown parameter {key!r}")
            setattr(self, key, value)
        return self

    def _domain(self):
        from .complexity import ParamDomain
        return ParamDomain(self.radius_R, self.sigma_min, self.sigma_max)

    def fit(self, X: Dataset | np.ndarray, y=None) -> "RiemannianGaussianMLE":
        data = X if isinstance(X, Dataset) else Dataset(X)
        fit = mle(data, self._domain())
        self.mu_ = fit.params.mu
        self.sigma_ = fit.params.sigma
        self.boundary_ = fit.boundary
        self.n_features_in_ = data.dim + 1
        return self

    def score_samples(self, X: Dataset | np.ndarray) -> np.ndarray:
        data = X if isinstance(X, Dataset) else Dataset(X)
        return log_pdf_vol_many(data.coords, RgdParams(self.mu_, self.sigma_))

    def score(self, X: Dataset | np.ndarray, y=None) -> float:
        return float(self.score_samples(X).mean())

    def sample(self, n: int, seed: int | RngSeed = 0) -> Dataset:
        return sample(n, RgdParams(self.mu_, self.sigma_), seed)
