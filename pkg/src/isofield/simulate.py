"""Series simulation of isotropic vector random fields, optionally in time.

A realization is built from a single uniform latent point U and, per
degree n, an m-vector coefficient process V_n(t) with
cov(V_n(t1), V_n(t2)) = a_n^2 B_n(t1 - t2); the field is
Z(x; t) = sum_n V_n(t) P_n(cos rho(x, U)) truncated at the requested
degree. Ensembles over independent seeds reproduce the model covariance;
a single realization is not ergodic in U and its spatial averages do not
converge to the ensemble covariance.

Randomness is split into named substreams of the master seed
(spawn key (0,) for U, (1, n) for the degree-n process), so results do
not depend on evaluation order and replicates can run in parallel with
per-replicate derived seeds.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import IndefiniteMatrixError, ModelError, NumericError, UsageError
from .jacobi import jacobi_eval
from .modelio import model_hash, model_to_dict
from .spaces import Point, SpaceParams, a_constant, cos_distance, sample_uniform
from .spectral import (
    INTEGER_LAGS,
    PureSpatial,
    SeparableScalar,
    SpatialModel,
    SpatioTemporalModel,
    VectorMA1,
    validate_spatial,
    validate_spatiotemporal,
)

MATRIX_SQRT_TOL = 1e-10


def substream(seed: int, *key: int) -> np.random.Generator:
    """Named child generator of a master seed (documented splitting rule)."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def matrix_sqrt(B: np.ndarray) -> np.ndarray:
    """Symmetric nonnegative square root via eigendecomposition.

    Eigenvalues in [-tol*scale, 0] are clipped to zero so rank-deficient
    coefficient matrices remain usable; anything more negative raises
    IndefiniteMatrixError.
    """
    B = np.asarray(B, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise UsageError(f"matrix square root needs a square matrix, got shape {B.shape}")
    scale = max(1.0, float(np.max(np.abs(B)))) if B.size else 1.0
    if float(np.max(np.abs(B - B.T))) > MATRIX_SQRT_TOL * scale:
        raise UsageError("matrix square root needs a symmetric matrix")
    w, v = np.linalg.eigh(0.5 * (B + B.T))
    lo = -MATRIX_SQRT_TOL * max(1.0, float(w[-1]))
    if w[0] < lo:
        raise IndefiniteMatrixError(
            f"matrix has eigenvalue {w[0]:.6e} below tolerance {lo:.6e}",
            min_eigenvalue=float(w[0]),
        )
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
    return 0.5 * (root + root.T)


@dataclass
class Realization:
    """Simulated field values plus the latent draws that produced them.

    values has shape (len(points), len(times), m). latent_v[n, i, :] is
    the degree-n series coefficient at times[i] (the V_n(t) of the series,
    including the a_n and coefficient-matrix factors), so the field at any
    point x is sum_n latent_v[n, i] * P_n(cos rho(x, latent_u)).
    """

    space: SpaceParams
    model: object
    points: list[Point]
    times: list[float]
    values: np.ndarray = field(repr=False)
    latent_u: Point = field(repr=False)
    latent_v: np.ndarray = field(repr=False)
    trunc: int
    seed: int
    model_hash: str = ""

    def __post_init__(self):
        if not self.model_hash and self.model is not None:
            self.model_hash = model_hash(self.model)


def _degree_matrix(space: SpaceParams, points, u: Point, trunc: int) -> np.ndarray:
    """(trunc+1, npoints) array of P_n(cos rho(x_p, u))."""
    cosr = np.array([cos_distance(space, p, u) for p in points])
    return np.stack([jacobi_eval(n, space.geom, cosr) for n in range(trunc + 1)])


def simulate_spatial(
    model: SpatialModel, points, trunc: int | None = None, seed: int = 0
) -> Realization:
    """One realization of the purely spatial series at the given points.

    Draws U uniform, then per degree an m-vector V_n with covariance
    a_n^2 I, and emits sum_n B_n^(1/2) V_n P_n(cos rho(x, U)).
    """
    report = validate_spatial(model)
    if not report.valid:
        raise ModelError(f"cannot simulate from an invalid model: {report.summary()}")
    trunc = model.max_degree if trunc is None else int(trunc)
    if not (0 <= trunc <= model.max_degree):
        raise UsageError(f"truncation {trunc} outside stored range 0..{model.max_degree}")
    points = list(points)
    space = model.space
    u = sample_uniform(space, substream(seed, 0))
    roots = [matrix_sqrt(model.coeffs[n]) for n in range(trunc + 1)]
    latent_v = np.zeros((trunc + 1, 1, model.m))
    for n in range(trunc + 1):
        v = a_constant(space, n) * substream(seed, 1, n).standard_normal(model.m)
        latent_v[n, 0] = roots[n] @ v
    pn = _degree_matrix(space, points, u, trunc)
    values = np.einsum("np,ntm->ptm", pn, latent_v)
    return Realization(
        space=space,
        model=model,
        points=points,
        times=[0.0],
        values=values,
        latent_u=u,
        latent_v=latent_v,
        trunc=trunc,
        seed=int(seed),
    )


def _separable_paths(kernel: SeparableScalar, times, m, rng) -> np.ndarray:
    """(ntimes, m) matrix of m independent stationary unit-variance paths."""
    k = len(times)
    if kernel.kind == "ar1":
        phi = kernel.param
        xi = np.empty((k, m))
        xi[0] = rng.standard_normal(m)
        for i in range(1, k):
            gap = int(round(times[i] - times[i - 1]))
            rho = phi**gap
            # exact stationary transition across integer gaps
            xi[i] = rho * xi[i - 1] + np.sqrt(1.0 - rho * rho) * rng.standard_normal(m)
        return xi
    tgrid = np.asarray(times)
    corr = np.exp(-kernel.param * np.abs(tgrid[:, None] - tgrid[None, :]))
    try:
        chol = np.linalg.cholesky(corr)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            "correlation matrix of the time grid is not positive definite "
            "(duplicate times?)"
        ) from exc
    return chol @ rng.standard_normal((k, m))


def simulate_spatiotemporal(
    model: SpatioTemporalModel, points, times, trunc: int | None = None, seed: int = 0
) -> Realization:
    """One realization of the space-time series on a points x times grid.

    Per degree, an independent stationary path V_n(.) is constructed with
    cov(V_n(t1), V_n(t2)) = a_n^2 B_n(t1 - t2): scaled stationary scalar
    processes through B_n^(1/2) for separable kernels, a first-order
    moving average of per-degree innovations for the vector kernel, and a
    constant-in-time vector otherwise.
    """
    times = [float(t) for t in times]
    if sorted(times) != times:
        raise UsageError("times must be sorted ascending")
    if not times:
        raise UsageError("at least one time is required")
    if model.domain == INTEGER_LAGS and not all(t.is_integer() for t in times):
        raise UsageError("this model's temporal domain is Z; times must be integers")
    probe = sorted({round(t1 - t2, 12) for t1 in times for t2 in times})
    report = validate_spatiotemporal(model, probe)
    if not report.valid:
        raise ModelError(f"cannot simulate from an invalid model: {report.summary()}")
    trunc = model.max_degree if trunc is None else int(trunc)
    if not (0 <= trunc <= model.max_degree):
        raise UsageError(f"truncation {trunc} outside stored range 0..{model.max_degree}")
    points = list(points)
    space = model.space
    kernel = model.kernel
    u = sample_uniform(space, substream(seed, 0))
    k = len(times)
    latent_v = np.zeros((trunc + 1, k, model.m))
    for n in range(trunc + 1):
        rng = substream(seed, 1, n)
        an = a_constant(space, n)
        if isinstance(kernel, PureSpatial):
            w = matrix_sqrt(model.coeffs[n]) @ rng.standard_normal(model.m)
            latent_v[n, :, :] = an * w
        elif isinstance(kernel, SeparableScalar):
            xi = _separable_paths(kernel, times, model.m, rng)
            latent_v[n] = an * xi @ matrix_sqrt(model.coeffs[n]).T
        elif isinstance(kernel, VectorMA1):
            root = matrix_sqrt(model.coeffs[n])
            needed = sorted({int(t) for t in times} | {int(t) - 1 for t in times})
            eps = {s: root @ rng.standard_normal(model.m) for s in needed}
            for i, t in enumerate(times):
                latent_v[n, i] = an * (eps[int(t)] + kernel.phi @ eps[int(t) - 1])
        else:
            raise UsageError(f"unsupported temporal kernel {type(kernel).__name__}")
    pn = _degree_matrix(space, points, u, trunc)
    values = np.einsum("np,ntm->ptm", pn, latent_v)
    return Realization(
        space=space,
        model=model,
        points=points,
        times=times,
        values=values,
        latent_u=u,
        latent_v=latent_v,
        trunc=trunc,
        seed=int(seed),
    )


# --------------------------------------------------------------------------
# Realization I/O: columnar CSV plus a JSON metadata sidecar
# --------------------------------------------------------------------------


def _point_to_list(p: Point) -> list[float]:
    c = np.asarray(p.coords)
    if np.iscomplexobj(c):
        flat = np.column_stack([c.real, c.imag]).ravel()
    else:
        flat = c.ravel()
    return [float(v) for v in flat]


def save_realization(real: Realization, csv_path, meta_path=None) -> tuple[Path, Path]:
    """Write values as (point_index, time, component, value) rows plus sidecar.

    Output is a pure function of the realization, so identical
    configurations produce byte-identical files.
    """
    csv_path = Path(csv_path)
    if meta_path is None:
        meta_path = csv_path.with_name(csv_path.stem + ".meta.json")
    meta_path = Path(meta_path)
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["point_index", "time", "component", "value"])
        npts, ntimes, m = real.values.shape
        for p in range(npts):
            for i in range(ntimes):
                for c in range(m):
                    writer.writerow(
                        [p, repr(real.times[i]), c, repr(float(real.values[p, i, c]))]
                    )
    meta = {
        "space": real.space.label,
        "m": int(real.values.shape[2]),
        "seed": int(real.seed),
        "trunc": int(real.trunc),
        "model_hash": real.model_hash,
        "times": [float(t) for t in real.times],
        "latent_u": _point_to_list(real.latent_u),
        "points": [_point_to_list(p) for p in real.points],
    }
    with open(meta_path, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path, meta_path


def load_realization_values(csv_path) -> np.ndarray:
    """Read a values CSV back into its (points, times, components) array."""
    rows = []
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            rows.append(
                (
                    int(row["point_index"]),
                    float(row["time"]),
                    int(row["component"]),
                    float(row["value"]),
                )
            )
    if not rows:
        raise UsageError(f"no data rows in {csv_path}")
    npts = max(r[0] for r in rows) + 1
    times = sorted({r[1] for r in rows})
    m = max(r[2] for r in rows) + 1
    out = np.full((npts, len(times), m), np.nan)
    t_index = {t: i for i, t in enumerate(times)}
    for p, t, c, v in rows:
        out[p, t_index[t], c] = v
    return out
