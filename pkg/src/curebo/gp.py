"""Gaussian-process regression with a Matern-5/2 ARD correlation kernel.

The model is constant-mean kriging: outputs are treated as a realization of
mu + Z(x) where Z is a zero-mean stationary process. The kernel is used as a
correlation function (unit diagonal); the constant mean and the process
variance are profiled out in closed form,

    mu_hat     = 1' R^-1 y / 1' R^-1 1
    sigma2_hat = (y - mu_hat)' R^-1 (y - mu_hat) / n

so the only free hyperparameters are the per-dimension length scales, chosen
by maximizing the concentrated log marginal likelihood. Posterior prediction
includes the mean-estimation term in the variance:

    s2(x) = sigma2_hat * [1 - r' R^-1 r + (1 - 1' R^-1 r)^2 / (1' R^-1 1)]

Fitted models are immutable and safe for concurrent prediction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import cho_solve, cholesky, solve_triangular
from scipy.optimize import minimize
from scipy.spatial.distance import cdist

SQRT5 = np.sqrt(5.0)

# Length-scale search box in normalized-input units (log-space optimization).
LENGTH_SCALE_BOUNDS = (1e-3, 1e3)

# Diagonal jitter: start small, escalate x10 on factorization failure.
JITTER_START = 1e-10
JITTER_MAX = 1e-4


class NumericalError(RuntimeError):
    """Linear-algebra failure that survived jitter escalation."""


@dataclass(frozen=True)
class KernelParams:
    """Matern-5/2 ARD hyperparameters.

    The kernel is evaluated as a correlation, so `scale` is redundant once the
    process variance is profiled; the fitter leaves it at 1.0.
    """

    length_scales: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        ls = np.atleast_1d(np.asarray(self.length_scales, dtype=float))
        object.__setattr__(self, "length_scales", ls)
        if np.any(ls <= 0):
            raise ValueError("length scales must be positive")
        if self.scale <= 0:
            raise ValueError("kernel scale must be positive")


@dataclass(frozen=True)
class Posterior:
    """Predictive mean and (clamped, nonnegative) variance at one point."""

    mean: float
    variance: float


@dataclass(frozen=True)
class FitConfig:
    """Hyperparameter-search settings for fit_gp.

    restarts counts perturbed starts added on top of the default
    initialization (length scale = per-dimension standard deviation of the
    training inputs). Setting optimize=False or pinning length_scales skips
    the search entirely.
    """

    restarts: int = 2
    seed: int = 0
    optimize: bool = True
    length_scales: Optional[np.ndarray] = None
    maxiter: int = 60


@dataclass(frozen=True)
class GpSurrogate:
    """Fitted GP state: kernel, Cholesky factor, profile estimates, caches."""

    train_x: np.ndarray
    train_y: np.ndarray
    kernel: KernelParams
    factor: np.ndarray  # lower-triangular L with L L' = R + jitter I
    jitter: float
    mu_hat: float
    sigma2_hat: float
    log_likelihood: float
    resid_solve: np.ndarray = field(repr=False, default=None)  # R^-1 (y - mu 1)
    ones_solve: np.ndarray = field(repr=False, default=None)  # R^-1 1
    one_r_one: float = 0.0  # 1' R^-1 1

    @property
    def n(self) -> int:
        return len(self.train_y)

    @property
    def dims(self) -> int:
        return self.train_x.shape[1]


def matern52(a, b, params: KernelParams) -> float:
    """Matern-5/2 correlation between two points; 1 at zero distance."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("point dimensions differ")
    d2 = float(np.sum(((a - b) / params.length_scales) ** 2))
    rd = np.sqrt(d2)
    return float((1.0 + SQRT5 * rd + (5.0 / 3.0) * d2) * np.exp(-SQRT5 * rd))


def matern52_matrix(x: np.ndarray, z: np.ndarray, length_scales: np.ndarray) -> np.ndarray:
    """Correlation matrix between row sets x (n,d) and z (m,d)."""
    d2 = cdist(x / length_scales, z / length_scales, metric="sqeuclidean")
    rd = np.sqrt(d2)
    poly = 1.0 + SQRT5 * rd + (5.0 / 3.0) * d2
    rd *= -SQRT5
    np.exp(rd, out=rd)
    poly *= rd
    return poly


def _chol_with_jitter(r: np.ndarray) -> tuple[np.ndarray, float]:
    """Cholesky of r + jitter I, escalating jitter x10 up to JITTER_MAX."""
    jitter = JITTER_START
    eye = np.eye(len(r))
    while True:
        try:
            L = cholesky(r + jitter * eye, lower=True, check_finite=False)
            return L, jitter
        except np.linalg.LinAlgError:
            pass
        except ValueError:
            pass
        if jitter >= JITTER_MAX:
            diag = np.diag(r)
            raise NumericalError(
                "correlation matrix not factorizable at max jitter "
                f"{JITTER_MAX:g} (n={len(r)}, diag range "
                f"[{diag.min():.3g}, {diag.max():.3g}])"
            )
        jitter *= 10.0


def _profile_estimates(L: np.ndarray, y: np.ndarray):
    """Closed-form mu_hat, sigma2_hat and caches from a Cholesky factor."""
    n = len(y)
    ones = np.ones(n)
    rinv_y = cho_solve((L, True), y, check_finite=False)
    rinv_1 = cho_solve((L, True), ones, check_finite=False)
    one_r_one = float(ones @ rinv_1)
    mu = float(ones @ rinv_y) / one_r_one
    resid_solve = rinv_y - mu * rinv_1  # R^-1 (y - mu 1)
    sigma2 = float((y - mu) @ resid_solve) / n
    sigma2 = max(sigma2, 0.0)
    logdet = 2.0 * float(np.sum(np.log(np.diag(L))))
    s2_safe = max(sigma2, 1e-300)
    ll = -0.5 * (n * np.log(2.0 * np.pi * s2_safe) + logdet + n)
    return mu, sigma2, ll, resid_solve, rinv_1, one_r_one


def profile_log_likelihood(x: np.ndarray, y: np.ndarray, length_scales) -> float:
    """Concentrated log marginal likelihood at given length scales."""
    ls = np.atleast_1d(np.asarray(length_scales, dtype=float))
    L, _ = _chol_with_jitter(matern52_matrix(x, x, ls))
    return _profile_estimates(L, y)[2]


def _initial_length_scales(x: np.ndarray) -> np.ndarray:
    """Default start: per-dimension standard deviation of the inputs."""
    ls = np.std(x, axis=0)
    return np.clip(ls, LENGTH_SCALE_BOUNDS[0], LENGTH_SCALE_BOUNDS[1])


def _nll_and_grad(x: np.ndarray, y: np.ndarray, log_ls: np.ndarray):
    """Negative profile log likelihood and its gradient in log length scales.

    Uses dK/dr = -(5 r / 3)(1 + sqrt5 r) exp(-sqrt5 r) together with
    dr/dlog l_h = -s_h / r for s_h the squared scaled separation in h, so
    dR/dlog l_h = (5/3)(1 + sqrt5 r) exp(-sqrt5 r) * s_h elementwise. The
    profiled mean drops out of the gradient (envelope argument).
    """
    n, d = x.shape
    ls = np.exp(log_ls)
    diff = (x[:, None, :] - x[None, :, :]) / ls
    s = diff * diff  # (n, n, d)
    d2 = s.sum(axis=2)
    rd = np.sqrt(d2)
    decay = np.exp(-SQRT5 * rd)
    R = (1.0 + SQRT5 * rd + (5.0 / 3.0) * d2) * decay
    try:
        L, _ = _chol_with_jitter(R)
    except NumericalError:
        return 1e12, np.zeros(d)
    mu, sigma2, ll, resid_solve, _, _ = _profile_estimates(L, y)
    s2_safe = max(sigma2, 1e-300)
    rinv = cho_solve((L, True), np.eye(n), check_finite=False)
    core = (5.0 / 3.0) * (1.0 + SQRT5 * rd) * decay  # dR/dlog l_h = core * s_h
    quad = np.einsum("i,ijh,j->h", resid_solve, core[:, :, None] * s, resid_solve)
    trace = np.einsum("ij,ijh->h", rinv, core[:, :, None] * s)
    grad = 0.5 * quad / s2_safe - 0.5 * trace
    return -ll, -grad


def fit_gp(train_x, train_y, config: FitConfig = FitConfig()) -> GpSurrogate:
    """Fit the surrogate by maximizing the profile log likelihood.

    Training rows are sorted into a canonical order internally, so the fit
    (and every downstream prediction) is exactly invariant to the order in
    which the data was supplied.

    Parameters
    ----------
    train_x : (n, d) array of normalized inputs, pairwise distinct, n >= 2.
    train_y : (n,) array of outputs.
    config : FitConfig
        Search settings; pin `length_scales` to skip the search.

    Raises
    ------
    ValueError for bad training data; NumericalError if the correlation
    matrix cannot be factorized even at maximum jitter.
    """
    x = np.atleast_2d(np.asarray(train_x, dtype=float))
    y = np.asarray(train_y, dtype=float).ravel()
    n = len(y)
    if x.shape[0] != n:
        raise ValueError("train_x and train_y lengths differ")
    if n < 2:
        raise ValueError("need at least two training points")
    if len(np.unique(x, axis=0)) != n:
        raise ValueError("training inputs must be pairwise distinct")

    order = np.lexsort(x.T[::-1])
    x = np.ascontiguousarray(x[order])
    y = np.ascontiguousarray(y[order])
    d = x.shape[1]

    lo, hi = np.log(LENGTH_SCALE_BOUNDS[0]), np.log(LENGTH_SCALE_BOUNDS[1])

    if config.length_scales is not None:
        best_ls = np.atleast_1d(np.asarray(config.length_scales, dtype=float))
        if best_ls.size != d:
            raise ValueError("pinned length_scales dimension mismatch")
    else:
        init = np.log(_initial_length_scales(x))
        starts = [init]
        rng = np.random.default_rng(config.seed)
        for _ in range(max(config.restarts, 0)):
            starts.append(np.clip(init + rng.normal(0.0, 0.7, size=d), lo, hi))

        candidates = list(starts)
        if config.optimize:
            for s in starts:
                res = minimize(
                    lambda v: _nll_and_grad(x, y, v),
                    s,
                    method="L-BFGS-B",
                    jac=True,
                    bounds=[(lo, hi)] * d,
                    options={"maxiter": config.maxiter},
                )
                candidates.append(np.clip(res.x, lo, hi))
        # The untouched starts stay in the candidate set, so the selected
        # optimum can never fall below the default initialization.
        scores = [-_nll_and_grad(x, y, c)[0] for c in candidates]
        best_ls = np.exp(candidates[int(np.argmax(scores))])

    R = matern52_matrix(x, x, best_ls)
    L, jitter = _chol_with_jitter(R)
    mu, sigma2, ll, resid_solve, rinv_1, one_r_one = _profile_estimates(L, y)
    return GpSurrogate(
        train_x=x,
        train_y=y,
        kernel=KernelParams(length_scales=best_ls),
        factor=L,
        jitter=jitter,
        mu_hat=mu,
        sigma2_hat=sigma2,
        log_likelihood=ll,
        resid_solve=resid_solve,
        ones_solve=rinv_1,
        one_r_one=one_r_one,
    )


def predict_batch(model: GpSurrogate, queries: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Posterior means and variances at many query points, vectorized."""
    q = np.atleast_2d(np.asarray(queries, dtype=float))
    if q.shape[1] != model.dims:
        raise ValueError(f"expected {model.dims}-dimensional queries, got {q.shape[1]}")
    r = matern52_matrix(q, model.train_x, model.kernel.length_scales)  # (m, n)
    means = model.mu_hat + r @ model.resid_solve
    v = solve_triangular(model.factor, r.T, lower=True, check_finite=False)  # (n, m)
    r_rinv_r = np.einsum("ij,ij->j", v, v)
    one_rinv_r = r @ model.ones_solve
    variances = model.sigma2_hat * (
        1.0 - r_rinv_r + (1.0 - one_rinv_r) ** 2 / model.one_r_one
    )
    return means, np.maximum(variances, 0.0)


def predict(model: GpSurrogate, query) -> Posterior:
    """Posterior at a single query point."""
    means, variances = predict_batch(model, np.asarray(query, dtype=float)[None, :])
    return Posterior(mean=float(means[0]), variance=float(variances[0]))


def diagnostics(model: GpSurrogate) -> str:
    """One-line hyperparameter and likelihood summary for reports."""
    ls = ", ".join(f"{v:.4g}" for v in model.kernel.length_scales)
    return (
        f"n={model.n} length_scales=[{ls}] mu_hat={model.mu_hat:.6g} "
        f"sigma2_hat={model.sigma2_hat:.6g} jitter={model.jitter:g} "
        f"loglik={model.log_likelihood:.6g}"
    )
