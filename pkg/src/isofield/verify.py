"""Numeric oracles: Monte-Carlo checks and closed-form identity checks.

Monte-Carlo estimates carry their standard error and a z-score against the
analytic target; the suite convention is |z| <= 5, which at the replicate
counts used here keeps the per-check false-alarm probability below 1e-6.
Estimates are deterministic given their seed. Integrals over the space are
the only thing estimated by Monte-Carlo; one-dimensional integrals go
through Gauss-Jacobi quadrature instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UsageError
from .jacobi import jacobi_at_one, jacobi_eval
from .simulate import Realization
from .spaces import (
    Point,
    SpaceParams,
    a_constant,
    cos_distance,
    cos_distance_batch,
    dim_eigenspace,
    sample_uniform_batch,
    sphere_volume,
)
from .spectral import eval_cov

Z_THRESHOLD = 5.0


def replicate_seeds(master_seed: int, count: int) -> list[int]:
    """Deterministic per-replicate seeds derived from one master seed."""
    state = np.random.SeedSequence(master_seed).generate_state(count, np.uint64)
    return [int(s) for s in state]


def _z_score(value, std_error, target) -> float:
    value = np.atleast_1d(np.asarray(value, dtype=float))
    se = np.atleast_1d(np.asarray(std_error, dtype=float))
    target = np.atleast_1d(np.asarray(target, dtype=float))
    diff = np.abs(value - target)
    scale = np.maximum(1.0, np.maximum(np.abs(value), np.abs(target)))
    # identical samples leave an O(eps) residual standard error; anything
    # below this floor is a deterministic component
    live = se > 1e-13 * scale
    z = np.zeros_like(diff)
    z[live] = diff[live] / se[live]
    dead = ~live & (diff > 1e-12 * scale)
    z[dead] = np.inf
    return float(np.max(z))


@dataclass
class MCEstimate:
    """A Monte-Carlo estimate with its standard error and analytic target."""

    value: object
    std_error: object
    replicates: int
    target: object
    z_score: float = field(init=False)

    def __post_init__(self):
        self.z_score = _z_score(self.value, self.std_error, self.target)

    @property
    def passed(self) -> bool:
        return self.z_score <= Z_THRESHOLD

    def as_dict(self) -> dict:
        return {
            "value": np.asarray(self.value).tolist(),
            "std_error": np.asarray(self.std_error).tolist(),
            "replicates": self.replicates,
            "target": np.asarray(self.target).tolist(),
            "z": self.z_score,
            "pass": self.passed,
        }


def _mean_se(samples: np.ndarray, axis=0) -> tuple[np.ndarray, np.ndarray]:
    n = samples.shape[axis]
    mean = samples.mean(axis=axis)
    se = samples.std(axis=axis, ddof=1) / np.sqrt(n)
    return mean, se


def mc_funk_hecke(
    space: SpaceParams,
    i: int,
    j: int,
    x1: Point,
    x2: Point,
    replicates: int = 100_000,
    seed: int = 0,
) -> MCEstimate:
    """Estimate the zonal product integral over the space.

    Target: delta_ij * omega_d / a_i^2 * P_i(cos rho(x1, x2)); the
    integral of P_i(cos rho(x1, .)) P_j(cos rho(x2, .)) vanishes for
    distinct degrees.
    """
    if replicates < 2:
        raise UsageError("at least 2 replicates are required")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    reps = sample_uniform_batch(space, replicates, rng)
    c1 = cos_distance_batch(space, x1, reps)
    c2 = cos_distance_batch(space, x2, reps)
    samples = space.volume * jacobi_eval(i, space.geom, c1) * jacobi_eval(j, space.geom, c2)
    value, se = _mean_se(samples)
    if i == j:
        ai = a_constant(space, i)
        target = space.volume / (ai * ai) * jacobi_eval(i, space.geom, cos_distance(space, x1, x2))
    else:
        target = 0.0
    return MCEstimate(float(value), float(se), replicates, float(target))


@dataclass
class ZonalCheck:
    """Mean, covariance, and cross-degree covariance of the zonal field."""

    mean: MCEstimate
    covariance: MCEstimate
    cross: MCEstimate


def mc_zonal_covariance(
    space: SpaceParams,
    n: int,
    x1: Point,
    x2: Point,
    replicates: int = 100_000,
    seed: int = 0,
    cross_degree: int | None = None,
) -> ZonalCheck:
    """Simulate Z_n(x) = a_n P_n(cos rho(x, U)) and check its moments.

    The mean targets 0, the covariance targets P_n(cos rho(x1, x2)), and
    the covariance against an independent copy of a different degree
    targets 0.
    """
    if n < 1:
        raise UsageError("the zonal field check needs degree n >= 1")
    if replicates < 2:
        raise UsageError("at least 2 replicates are required")
    k = cross_degree if cross_degree is not None else n + 1
    if k == n:
        raise UsageError("cross degree must differ from n")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    reps = sample_uniform_batch(space, replicates, rng)
    c1 = cos_distance_batch(space, x1, reps)
    c2 = cos_distance_batch(space, x2, reps)
    z1 = a_constant(space, n) * jacobi_eval(n, space.geom, c1)
    z2 = a_constant(space, n) * jacobi_eval(n, space.geom, c2)
    zk = a_constant(space, k) * jacobi_eval(k, space.geom, c2)
    mean_v, mean_se = _mean_se(z1)
    cov_v, cov_se = _mean_se(z1 * z2)  # fields are exactly centred
    cross_v, cross_se = _mean_se(z1 * zk)
    cov_target = float(jacobi_eval(n, space.geom, cos_distance(space, x1, x2)))
    return ZonalCheck(
        mean=MCEstimate(float(mean_v), float(mean_se), replicates, 0.0),
        covariance=MCEstimate(float(cov_v), float(cov_se), replicates, cov_target),
        cross=MCEstimate(float(cross_v), float(cross_se), replicates, 0.0),
    )


def empirical_cov(
    realizations: list[Realization], point_pair: tuple[int, int], lag: float = 0.0
) -> MCEstimate:
    """Cross-covariance E[Z(x_a; t+lag) Z(x_b; t)^T] across an ensemble.

    Valid time offsets within each replicate are averaged first (variance
    reduction only); the standard error comes from the replicate count.
    The target is the model covariance at the realizations' truncation.
    """
    if len(realizations) < 2:
        raise UsageError("at least 2 realizations are required")
    first = realizations[0]
    if first.model is None:
        raise UsageError("realizations must carry their model to locate the target")
    seeds = {r.seed for r in realizations}
    if len(seeds) != len(realizations):
        raise UsageError("realizations must have distinct seeds")
    for r in realizations[1:]:
        if (
            r.model_hash != first.model_hash
            or r.times != first.times
            or r.trunc != first.trunc
            or len(r.points) != len(first.points)
            or any(
                not np.array_equal(p.coords, q.coords)
                for p, q in zip(r.points, first.points)
            )
        ):
            raise UsageError("realizations must share model, points, times, and truncation")
    a, b = point_pair
    times = np.asarray(first.times)
    pairs = [
        (i, j)
        for i in range(len(times))
        for j in range(len(times))
        if abs((times[i] - times[j]) - lag) <= 1e-9
    ]
    if not pairs:
        raise UsageError(f"lag {lag} is not realizable on the time grid {first.times}")
    per_rep = np.stack(
        [
            np.mean([np.outer(r.values[a, i], r.values[b, j]) for i, j in pairs], axis=0)
            for r in realizations
        ]
    )
    value, se = _mean_se(per_rep)
    rho = (
        0.0
        if a == b
        else float(
            np.arccos(np.clip(cos_distance(first.space, first.points[a], first.points[b]), -1, 1))
        )
    )
    target = eval_cov(first.model, rho, lag, first.trunc)
    return MCEstimate(value, se, len(realizations), target)


def mc_recover_vn(
    realization: Realization,
    n: int,
    replicates_for_integral: int = 100_000,
    seed: int = 0,
) -> list[MCEstimate]:
    """Recover the degree-n coefficient path from the field by integration.

    V_n(t) = a_n^2 / (omega_d P_n(1)) * integral of Z(x; t) P_n(cos rho(x, U));
    the integral is estimated as omega_d times the average over fresh
    uniform abscissae. One estimate per recorded time; degrees beyond the
    truncation target zero.
    """
    if realization.latent_u is None or realization.latent_v is None:
        raise UsageError("realization lacks latent data; cannot recover coefficients")
    if replicates_for_integral < 2:
        raise UsageError("at least 2 abscissae are required")
    space = realization.space
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    reps = sample_uniform_batch(space, replicates_for_integral, rng)
    c = cos_distance_batch(space, realization.latent_u, reps)
    # Field values at the fresh abscissae, rebuilt from the latent draws.
    p_all = np.stack(
        [jacobi_eval(k, space.geom, c) for k in range(realization.trunc + 1)]
    )  # (trunc+1, R)
    z_fresh = np.einsum("kr,ktm->rtm", p_all, realization.latent_v)
    pn = jacobi_eval(n, space.geom, c) if n > realization.trunc else p_all[n]
    an = a_constant(space, n)
    scale = an * an / jacobi_at_one(n, space.geom)
    samples = scale * pn[:, None, None] * z_fresh  # (R, ntimes, m)
    value, se = _mean_se(samples)
    ntimes, m = value.shape
    out = []
    for i in range(ntimes):
        target = (
            realization.latent_v[n, i]
            if n <= realization.trunc
            else np.zeros(m)
        )
        out.append(
            MCEstimate(value[i], se[i], replicates_for_integral, np.asarray(target, dtype=float))
        )
    return out


# --------------------------------------------------------------------------
# Closed-form identity checks
# --------------------------------------------------------------------------


@dataclass
class IdentityCheck:
    """One verified identity: relative error against a stated tolerance."""

    name: str
    identity: str
    target: float
    value: float
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "identity": self.identity,
            "target": self.target,
            "value": self.value,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclass
class IdentityReport:
    space: str
    checks: list[IdentityCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[IdentityCheck]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {
            "space": self.space,
            "pass": self.passed,
            "checks": [c.as_dict() for c in self.checks],
        }


def _rel_err(value: float, target: float) -> float:
    return abs(value - target) / max(1.0, abs(target))


def check_space_identities(
    space: SpaceParams, n_max: int = 50, a_scale: float = 1.0
) -> IdentityReport:
    """Verify the closed-form constants of one space against each other.

    Volume formula vs the integer multiple of the equal-dimension sphere
    volume, integrality of that multiple, the dimension bookkeeping
    d = 2*alpha + 2 and e = 2*beta + 2, a_n^2 P_n(1) = dim H_n, and
    integrality of dim H_n, for n up to n_max. `a_scale` is a fault
    -injection hook: anything other than 1 must make the a_n identity fail,
    which the test suite uses to prove the check has teeth.
    """
    checks: list[IdentityCheck] = []
    a, b = space.geom.alpha, space.geom.beta
    vol_target = space.weinstein * sphere_volume(space.d)
    err = _rel_err(space.volume, vol_target)
    checks.append(
        IdentityCheck(
            name="volume_ratio",
            identity="omega_d = i(M) * volume(S^d)",
            target=vol_target,
            value=space.volume,
            tolerance=1e-9,
            passed=err <= 1e-9,
        )
    )
    from .spaces import weinstein_integer_value

    w_raw = weinstein_integer_value(a, b)
    checks.append(
        IdentityCheck(
            name="weinstein_integer",
            identity="i(M) = 2^(2a+1) G(a+3/2) G(b+1) / (sqrt(pi) G(a+b+2)) is an integer",
            target=float(round(w_raw)),
            value=w_raw,
            tolerance=1e-9,
            passed=abs(w_raw - round(w_raw)) <= 1e-9 * max(1.0, abs(w_raw)),
        )
    )
    checks.append(
        IdentityCheck(
            name="dimension_alpha",
            identity="d = 2*alpha + 2",
            target=float(space.d),
            value=2.0 * a + 2.0,
            tolerance=0.0,
            passed=2.0 * a + 2.0 == float(space.d),
        )
    )
    checks.append(
        IdentityCheck(
            name="dimension_beta",
            identity="e = 2*beta + 2",
            target=float(space.e),
            value=2.0 * b + 2.0,
            tolerance=0.0,
            passed=2.0 * b + 2.0 == float(space.e),
        )
    )
    worst_pair = 0.0
    worst_int = 0.0
    for n in range(n_max + 1):
        an = a_scale * a_constant(space, n)
        dim = dim_eigenspace(space, n)
        worst_pair = max(worst_pair, _rel_err(an * an * jacobi_at_one(n, space.geom), dim))
        worst_int = max(worst_int, abs(dim - round(dim)) / max(1.0, dim))
    checks.append(
        IdentityCheck(
            name="eigenspace_dimension",
            identity="a_n^2 * P_n(1) = dim H_n",
            target=0.0,
            value=worst_pair,
            tolerance=1e-9,
            passed=worst_pair <= 1e-9,
        )
    )
    checks.append(
        IdentityCheck(
            name="eigenspace_integrality",
            identity="dim H_n is a positive integer",
            target=0.0,
            value=worst_int,
            tolerance=1e-9,
            passed=worst_int <= 1e-9,
        )
    )
    return IdentityReport(space=space.label, checks=checks)
