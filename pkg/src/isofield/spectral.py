"""Covariance matrix functions as Jacobi series with matrix coefficients.

A purely spatial model is a finite sequence B_0..B_N of symmetric
nonnegative-definite m x m matrices, interpreted as
C(rho) = sum_n B_n P_n(cos rho) with the space's geometric parameters,
optionally extended past degree N by a geometric envelope c*r^n that
dominates ||B_n|| P_n(1) and keeps the tail bound computable.

Spatio-temporal models attach a temporal kernel to the stored matrices so
that each degree carries a stationary covariance matrix function B_n(t):
a scalar correlation multiplying B_n (separable case), the lag table of a
first-order vector moving average built from per-degree innovation
covariances, or a constant-in-time B_n. The fixed lag convention is
cov(Z(t1), Z(t2)) = B(t1 - t2); for the moving average
Z(t) = e(t) + Phi e(t-1) this puts Phi*Sigma at lag +1 and Sigma*Phi^T at
lag -1, which the brute-force process oracle in the tests pins down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, UsageError
from .jacobi import gauss_jacobi, jacobi_at_one, jacobi_eval, jacobi_norm_constant
from .spaces import SpaceParams

# Relative floors for symmetry / nonnegative-definiteness under rounding.
SYMMETRY_TOL = 1e-12
PSD_TOL = 1e-10
BLOCK_PSD_TOL = 1e-9

INTEGER_LAGS = "integers"
REAL_LAGS = "reals"


@dataclass(frozen=True)
class TailEnvelope:
    """Geometric bound c * r^n on ||B_n|| P_n(1) past the stored degrees."""

    c: float
    r: float

    def __post_init__(self):
        if not (self.c >= 0.0 and math.isfinite(self.c)):
            raise ParameterError(f"envelope scale must be finite and >= 0, got {self.c}")
        if not (0.0 < self.r < 1.0):
            raise ParameterError(f"envelope ratio must lie in (0, 1), got {self.r}")

    def tail_sum(self, first_degree: int) -> float:
        """sum_{n >= first_degree} c * r^n = c * r^first / (1 - r)."""
        return self.c * self.r ** first_degree / (1.0 - self.r)


def _as_coeff_matrices(coeffs, m: int) -> list[np.ndarray]:
    out = []
    for n, c in enumerate(coeffs):
        c = np.asarray(c, dtype=float)
        if c.shape != (m, m):
            raise ParameterError(f"coefficient {n} has shape {c.shape}, expected ({m}, {m})")
        out.append(c)
    if not out:
        raise ParameterError("a model needs at least one coefficient matrix")
    return out


@dataclass
class SpatialModel:
    """Jacobi-series covariance model of an m-variate isotropic field."""

    space: SpaceParams
    m: int
    coeffs: list[np.ndarray]
    tail: TailEnvelope | None = None

    def __post_init__(self):
        self.coeffs = _as_coeff_matrices(self.coeffs, self.m)

    @property
    def max_degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff_at(self, n: int, t: float = 0.0) -> np.ndarray:
        if t != 0.0:
            raise UsageError("a purely spatial model is evaluated at lag 0 only")
        return self.coeffs[n]


# --------------------------------------------------------------------------
# Temporal kernels. Each kernel exposes `domain` and
# coeff_at(n, t, coeffs) -> the m x m matrix B_n(t).
# --------------------------------------------------------------------------


def _require_lag(domain: str, t) -> float:
    t = float(t)
    if domain == INTEGER_LAGS and not t.is_integer():
        raise UsageError(f"lag {t} is not an integer but the model's temporal domain is Z")
    return t


@dataclass(frozen=True)
class PureSpatial:
    """Constant in time: B_n(t) = B_n for every lag."""

    domain: str = REAL_LAGS

    def coeff_at(self, n, t, coeffs):
        _require_lag(self.domain, t)
        return coeffs[n]


@dataclass(frozen=True)
class SeparableScalar:
    """B_n(t) = r(t) * B_n with a scalar stationary correlation r.

    kind "ar1": r(t) = phi^|t| on integer lags, |phi| < 1.
    kind "exponential": r(t) = exp(-theta |t|) on real lags, theta > 0.
    """

    kind: str
    param: float

    def __post_init__(self):
        if self.kind == "ar1":
            if not (-1.0 < self.param < 1.0):
                raise ParameterError(f"ar1 coefficient must lie in (-1, 1), got {self.param}")
        elif self.kind == "exponential":
            if not (self.param > 0.0):
                raise ParameterError(f"exponential rate must be positive, got {self.param}")
        else:
            raise ParameterError(f"unknown separable kernel kind {self.kind!r}")

    @property
    def domain(self) -> str:
        return INTEGER_LAGS if self.kind == "ar1" else REAL_LAGS

    def correlation(self, t) -> float:
        t = _require_lag(self.domain, t)
        if self.kind == "ar1":
            return self.param ** abs(int(round(t)))
        return math.exp(-self.param * abs(t))

    def coeff_at(self, n, t, coeffs):
        return self.correlation(t) * coeffs[n]


@dataclass(frozen=True)
class VectorMA1:
    """Per-degree lag table of Z(t) = e(t) + Phi e(t-1), var e = Sigma_n.

    With cov(Z(t1), Z(t2)) = B(t1 - t2):
    B_n(0) = Sigma_n + Phi Sigma_n Phi^T, B_n(1) = Phi Sigma_n,
    B_n(-1) = Sigma_n Phi^T, zero beyond lag one. The stored model
    coefficients are the innovation covariances Sigma_n.
    """

    phi: np.ndarray = field(repr=False)
    domain: str = INTEGER_LAGS

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=float)
        if phi.ndim != 2 or phi.shape[0] != phi.shape[1]:
            raise ParameterError(f"moving-average matrix must be square, got {phi.shape}")
        object.__setattr__(self, "phi", phi)

    def coeff_at(self, n, t, coeffs):
        t = _require_lag(self.domain, t)
        sigma = coeffs[n]
        k = int(round(t))
        if k == 0:
            return sigma + self.phi @ sigma @ self.phi.T
        if k == 1:
            return self.phi @ sigma
        if k == -1:
            return sigma @ self.phi.T
        return np.zeros_like(sigma)


@dataclass
class SpatioTemporalModel:
    """Space-time covariance model: per-degree stationary matrix functions.

    `coeffs` stores B_n for pure-spatial/separable kernels and the
    innovation covariances Sigma_n for the moving-average kernel.
    """

    space: SpaceParams
    m: int
    coeffs: list[np.ndarray]
    kernel: object
    tail: TailEnvelope | None = None

    def __post_init__(self):
        self.coeffs = _as_coeff_matrices(self.coeffs, self.m)
        if isinstance(self.kernel, VectorMA1) and self.kernel.phi.shape != (self.m, self.m):
            raise ParameterError(
                f"moving-average matrix shape {self.kernel.phi.shape} does not match m={self.m}"
            )

    @property
    def max_degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def domain(self) -> str:
        return self.kernel.domain

    def coeff_at(self, n: int, t: float = 0.0) -> np.ndarray:
        return self.kernel.coeff_at(n, t, self.coeffs)


# --------------------------------------------------------------------------
# Validity checking
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    degree: int
    lag: object  # numeric lag, or "spatial" for lag-free findings
    kind: str  # "asymmetric" | "indefinite" | "divergent"
    magnitude: float

    def as_dict(self) -> dict:
        return {
            "degree": self.degree,
            "lag": self.lag,
            "kind": self.kind,
            "magnitude": self.magnitude,
        }


@dataclass
class ValidityReport:
    valid: bool
    violations: list[Violation]

    def as_dict(self) -> dict:
        return {"valid": self.valid, "violations": [v.as_dict() for v in self.violations]}

    def summary(self) -> str:
        if self.valid:
            return "valid"
        parts = [
            f"degree {v.degree} lag {v.lag}: {v.kind} (magnitude {v.magnitude:.3e})"
            for v in self.violations
        ]
        return "invalid: " + "; ".join(parts)


def _asymmetry(mat: np.ndarray) -> float:
    return float(np.max(np.abs(mat - mat.T)))


def _min_max_eigenvalues(mat: np.ndarray) -> tuple[float, float]:
    w = np.linalg.eigvalsh(0.5 * (mat + mat.T))
    return float(w[0]), float(w[-1])


def _check_matrix(n, mat, violations, lag="spatial"):
    if not np.all(np.isfinite(mat)):
        violations.append(Violation(n, lag, "divergent", float("inf")))
        return
    scale = max(1.0, float(np.max(np.abs(mat))))
    asym = _asymmetry(mat)
    if asym > SYMMETRY_TOL * scale:
        violations.append(Violation(n, lag, "asymmetric", asym))
    wmin, wmax = _min_max_eigenvalues(mat)
    if wmin < -PSD_TOL * max(1.0, wmax):
        violations.append(Violation(n, lag, "indefinite", wmin))


def _check_convergence(model, violations):
    # Finite sequences always converge; the envelope must contract and the
    # summands must be finite.
    total = 0.0
    for n, c in enumerate(model.coeffs):
        b0 = model.coeff_at(n, 0.0) if isinstance(model, SpatioTemporalModel) else c
        if not np.all(np.isfinite(b0)):
            violations.append(Violation(n, "spatial", "divergent", float("inf")))
            return
        total += float(np.linalg.norm(b0, 2)) * jacobi_at_one(n, model.space.geom)
    if model.tail is not None:
        total += model.tail.tail_sum(model.max_degree + 1)
    if not math.isfinite(total):
        violations.append(Violation(model.max_degree, "spatial", "divergent", float("inf")))


def validate_spatial(model: SpatialModel) -> ValidityReport:
    """Check symmetry and nonnegative definiteness of each coefficient,
    finiteness of sum ||B_n|| P_n(1), and the tail envelope."""
    violations: list[Violation] = []
    for n, c in enumerate(model.coeffs):
        _check_matrix(n, c, violations)
    _check_convergence(model, violations)
    return ValidityReport(valid=not violations, violations=violations)


def validate_spatiotemporal(model: SpatioTemporalModel, probe_lags) -> ValidityReport:
    """Necessary-condition checks of a space-time model on a finite lag grid.

    Per degree: B_n(-t) must equal B_n(t)^T on the probed lags, and the
    block matrix [B_n(t_i - t_j)] over the grid must be nonnegative
    definite. Convergence of sum ||B_n(0)|| P_n(1) is checked as in the
    spatial case. Passing all probes is necessary but, for continuous
    time, not sufficient for validity on all of R.
    """
    lags = [float(t) for t in probe_lags]
    if not lags:
        raise UsageError("probe_lags must be nonempty")
    if not any(t == 0.0 for t in lags):
        raise UsageError("probe_lags must contain 0")
    grid = sorted(set(lags))
    k = len(grid)
    m = model.m
    violations: list[Violation] = []
    for n in range(model.max_degree + 1):
        for t in grid:
            bt = model.coeff_at(n, t)
            bmt = model.coeff_at(n, -t)
            if not (np.all(np.isfinite(bt)) and np.all(np.isfinite(bmt))):
                violations.append(Violation(n, t, "divergent", float("inf")))
                continue
            scale = max(1.0, float(np.max(np.abs(bt))))
            mismatch = float(np.max(np.abs(bmt - bt.T)))
            if mismatch > SYMMETRY_TOL * scale:
                violations.append(Violation(n, t, "asymmetric", mismatch))
        gram = np.zeros((k * m, k * m))
        for i in range(k):
            for j in range(k):
                gram[i * m : (i + 1) * m, j * m : (j + 1) * m] = model.coeff_at(
                    n, grid[i] - grid[j]
                )
        if np.all(np.isfinite(gram)):
            wmin, wmax = _min_max_eigenvalues(gram)
            if wmin < -BLOCK_PSD_TOL * max(1.0, wmax):
                violations.append(Violation(n, "spatial", "indefinite", wmin))
    _check_convergence(model, violations)
    return ValidityReport(valid=not violations, violations=violations)


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------


def _resolve_trunc(model, trunc) -> int:
    if trunc is None:
        return model.max_degree
    if trunc < 0 or int(trunc) != trunc:
        raise UsageError(f"truncation degree must be a nonnegative integer, got {trunc}")
    if trunc > model.max_degree:
        raise UsageError(
            f"truncation degree {trunc} exceeds stored maximum degree {model.max_degree}"
        )
    return int(trunc)


def eval_cov(model, rho: float, t: float = 0.0, trunc: int | None = None) -> np.ndarray:
    """Partial sum of the covariance series through the given degree.

    Spatial models require t = 0. The neglected degrees are bounded by
    truncation_bound(model, trunc).
    """
    trunc = _resolve_trunc(model, trunc)
    x = math.cos(float(rho))
    out = np.zeros((model.m, model.m))
    for n in range(trunc + 1):
        out += model.coeff_at(n, t) * jacobi_eval(n, model.space.geom, x)
    return out


def eval_cov_symmetrized(
    model: SpatioTemporalModel, rho: float, t: float, trunc: int | None = None
) -> np.ndarray:
    """(C(rho, t) + C(rho, -t)) / 2, a symmetric matrix."""
    return 0.5 * (eval_cov(model, rho, t, trunc) + eval_cov(model, rho, -t, trunc))


def truncation_bound(model, N: int) -> float:
    """Upper bound sum_{n > N} ||B_n(0)|| P_n(1) on the discarded tail."""
    if N < 0:
        raise UsageError("truncation degree must be nonnegative")
    total = 0.0
    for n in range(N + 1, model.max_degree + 1):
        total += float(np.linalg.norm(model.coeff_at(n, 0.0), 2)) * jacobi_at_one(
            n, model.space.geom
        )
    if model.tail is not None:
        total += model.tail.tail_sum(max(N, model.max_degree) + 1)
    return total


def angular_power_spectrum(model: SpatialModel, n: int) -> np.ndarray:
    """Per-eigenspace normalization B_n / dim H_n."""
    if not (0 <= n <= model.max_degree):
        raise UsageError(f"degree {n} outside stored range 0..{model.max_degree}")
    from .spaces import dim_eigenspace

    return model.coeffs[n] / dim_eigenspace(model.space, n)


def recover_coefficients(
    cov, space: SpaceParams, m: int, N: int, order: int
) -> SpatialModel:
    """Invert a distance-only covariance into Jacobi-series coefficients.

    B_n is the weighted Gauss-Jacobi quadrature of cov(arccos x) P_n(x)
    divided by the norm constant of P_n; exact for covariances that are
    degree <= N expansions when order >= N + 1. Output matrices are
    symmetrized.
    """
    if order < N + 1:
        raise UsageError(f"quadrature order {order} is too small for max degree {N}")
    rule = gauss_jacobi(order, space.geom)
    cov_values = np.empty((order, m, m))
    for k, x in enumerate(rule.nodes):
        c = np.asarray(cov(float(np.arccos(np.clip(x, -1.0, 1.0)))), dtype=float)
        if c.shape == () and m == 1:
            c = c.reshape(1, 1)
        if c.shape != (m, m):
            raise UsageError(f"covariance callable returned shape {c.shape}, expected ({m}, {m})")
        if not np.all(np.isfinite(c)):
            raise UsageError("covariance callable returned non-finite values")
        cov_values[k] = c
    coeffs = []
    for n in range(N + 1):
        pn = jacobi_eval(n, space.geom, rule.nodes)
        b = np.tensordot(rule.weights * pn, cov_values, axes=(0, 0))
        b /= jacobi_norm_constant(n, space.geom)
        coeffs.append(0.5 * (b + b.T))
    return SpatialModel(space=space, m=m, coeffs=coeffs, tail=None)
