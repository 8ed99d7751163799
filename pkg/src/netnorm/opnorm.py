"""Operator-norm test statistics.

``t22`` is the largest spectral norm of the signed indicator difference over
the threshold grid.  ``s_inf1`` replaces the (NP-hard) infinity-to-one norm by
its semidefinite relaxation

    1/2 max <[[0, M], [M, 0]], X>  over PSD X with unit diagonal,

which we solve in factored form X = V V^T (V has unit-norm rows).  For this
block structure the objective is sum_ij M_ij <u_i, w_j> with V = [U; W], so
maximizing over U with W fixed is a row-wise normalization of M W.  The
solver alternates those two exact block updates.

``t_inf1_exact`` enumerates sign vectors and serves as an oracle for small n.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import sparse

from . import _kernels
from .errors import NoConvergence, TooLarge, ValidationError
from .network import NetworkPair, indicator_diff, threshold_grid
from .streams import substream

log = logging.getLogger(__name__)

#: Grothendieck constant upper bound (Krivine): pi / (2 ln(1 + sqrt 2)).
GROTHENDIECK_K = math.pi / (2.0 * math.log(1.0 + math.sqrt(2.0)))

EXACT_CAP = 22


def _check_square(m) -> np.ndarray:
    m = np.ascontiguousarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")
    return m


def spectral_norm(m, tol: float = 1e-10, *, method: str = "power",
                  max_iter: int = 50_000, seed: int = 0, fallback: bool = True) -> float:
    """Largest absolute eigenvalue of a symmetric matrix.

    Parameters
    ----------
    m : array_like
        Symmetric real matrix.
    tol : float
        Power iteration stops once the eigen-residual of ``m @ m`` falls below
        ``tol`` times its Rayleigh quotient.
    method : {"power", "dense"}
        ``"power"`` iterates on ``m @ m`` from a seeded random start;
        ``"dense"`` calls LAPACK ``eigvalsh``.
    fallback : bool
        On power-iteration budget exhaustion, use the dense solver instead of
        raising :class:`NoConvergence`.
    """
    m = _check_square(m)
    if not np.any(m):
        return 0.0
    if method == "dense":
        return float(np.max(np.abs(np.linalg.eigvalsh(m))))
    if method != "power":
        raise ValueError(f"unknown method {method!r}")
    if tol <= 0:
        raise ValidationError("tol must be positive")
    v = np.random.default_rng(seed).standard_normal(m.shape[0])
    v /= np.linalg.norm(v)
    est, iters = _kernels.power_norm(m, v, tol, max_iter)
    if iters < 0:
        if not fallback:
            raise NoConvergence(max_iter, last_iterate=v)
        log.info("power iteration hit %d iterations; using dense eigendecomposition", max_iter)
        return float(np.max(np.abs(np.linalg.eigvalsh(m))))
    return float(est)


def t22(pair: NetworkPair, *, tol: float = 1e-10, method: str = "power") -> float:
    """Max over thresholds of the spectral norm of the indicator difference."""
    best = 0.0
    for s in threshold_grid(pair):
        d = indicator_diff(pair, s)
        if np.any(d):
            best = max(best, spectral_norm(d, tol, method=method))
    return best


def t_inf1_exact(m, cap: int = EXACT_CAP) -> float:
    """Exact infinity-to-one norm ``max_phi ||m phi||_1`` by enumeration.

    Raises
    ------
    TooLarge
        If ``n > cap``; the search visits ``2**(n-1)`` sign vectors.
    """
    return t_inf1_exact_argmax(m, cap)[0]


def t_inf1_exact_argmax(m, cap: int = EXACT_CAP) -> tuple[float, np.ndarray]:
    m = _check_square(m)
    n = m.shape[0]
    if n > cap:
        raise TooLarge(n, cap)
    value, phi = _kernels.inf1_enumerate(m)
    return float(value), phi


@dataclass(frozen=True)
class SolverOptions:
    """Settings for :func:`sdp_inf1`.

    ``tol`` is relative: iteration stops once the objective gains less than
    ``tol * max(1, |objective|)``.  ``rank=None`` uses ``ceil(sqrt(4n)) + 1``.
    ``method="gradient"`` runs projected gradient ascent on the full factor
    with step ``1 / (2 * max row 1-norm of B)`` instead of block updates.
    """

    restarts: int = 5
    rank: int | None = None
    tol: float = 1e-7
    max_iter: int = 2000
    roundings: int = 100
    seed: int = 0
    method: str = "alternating"

    def __post_init__(self):
        if self.restarts < 1:
            raise ValidationError("restarts must be >= 1")
        if self.rank is not None and self.rank < 1:
            raise ValidationError("rank must be >= 1")
        if self.tol <= 0 or self.max_iter < 1 or self.roundings < 0:
            raise ValidationError("tol must be > 0, max_iter >= 1, roundings >= 0")
        if self.method not in ("alternating", "gradient"):
            raise ValidationError(f"unknown SDP method {self.method!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "SolverOptions":
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValidationError(f"unknown solver option(s): {', '.join(sorted(unknown))}")
        return cls(**d)

    def with_(self, **kw) -> "SolverOptions":
        return replace(self, **kw)


@dataclass(frozen=True)
class RoundedSigns:
    phi: np.ndarray
    psi: np.ndarray
    objective: float


@dataclass(frozen=True)
class SdpSolution:
    """Best factored solution found by :func:`sdp_inf1`.

    ``factor`` stacks the row and column blocks (``2n x k``, unit rows).
    ``value`` is never below ``best_rounded.objective``: a rounded sign pair
    is itself a feasible rank-one point, so the larger of the two is kept.
    """

    factor: np.ndarray
    value: float
    best_rounded: RoundedSigns
    restarts_used: int
    iterations: int
    restart_values: tuple[float, ...] = field(default=())


def default_rank(n: int) -> int:
    return math.ceil(math.sqrt(4 * n)) + 1


def _unit_rows(rng, n, k) -> np.ndarray:
    x = rng.standard_normal((n, k))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return x


def _gradient_ascent(m, u, w, tol, max_iter):
    n = m.shape[0]
    b = np.block([[np.zeros((n, n)), m], [m, np.zeros((n, n))]])
    step = 1.0 / (2.0 * np.abs(b).sum(axis=1).max())
    v = np.vstack([u, w])
    prev = -np.inf
    obj = 0.0
    it = 0
    for it in range(max_iter):
        v = v + step * (b @ v)
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        obj = 0.5 * float(np.sum(v * (b @ v)))
        if obj - prev < tol * max(1.0, abs(obj)):
            break
        prev = obj
    u[:] = v[:n]
    w[:] = v[n:]
    return obj, it + 1


def _round(m, u, w, rng, cuts) -> RoundedSigns:
    """Random-hyperplane signs for the row block, then the best column signs."""
    n = m.shape[0]
    phi = np.ones(n)
    y = m @ phi
    best = RoundedSigns(phi, np.where(y >= 0, 1.0, -1.0), float(np.abs(y).sum()))
    if cuts:
        g = rng.standard_normal((u.shape[1], cuts))
        for signs in (np.where(u @ g >= 0, 1.0, -1.0), np.where(w @ g >= 0, 1.0, -1.0)):
            vals = np.abs(m @ signs).sum(axis=0)
            c = int(np.argmax(vals))
            if vals[c] > best.objective:
                phi = signs[:, c].copy()
                y = m @ phi
                best = RoundedSigns(phi, np.where(y >= 0, 1.0, -1.0), float(np.abs(y).sum()))
    return best


def sdp_inf1(m, opts: SolverOptions | None = None) -> SdpSolution:
    """Semidefinite relaxation of the infinity-to-one norm of symmetric ``m``.

    Runs ``opts.restarts`` ascents from seeded random starts; restart ``r``
    draws from ``substream(opts.seed, r)``, so results do not depend on
    execution order.  Ties between restarts go to the lowest index.
    """
    opts = opts or SolverOptions()
    m = _check_square(m)
    if np.any(m != m.T):
        raise ValidationError("sdp_inf1 needs a symmetric matrix")
    n = m.shape[0]
    k = opts.rank or default_rank(n)
    csr = sparse.csr_matrix(m)
    indptr = csr.indptr.astype(np.int64)
    indices = csr.indices.astype(np.int64)
    data = csr.data.astype(float)

    best = None
    values = []
    total_iters = 0
    for r in range(opts.restarts):
        rng = substream(opts.seed, r)
        u = _unit_rows(rng, n, k)
        w = _unit_rows(rng, n, k)
        if csr.nnz == 0:
            value, iters = 0.0, 0
        elif opts.method == "alternating":
            value, iters = _kernels.bm_alternating(indptr, indices, data, u, w, opts.tol, opts.max_iter)
        else:
            value, iters = _gradient_ascent(m, u, w, opts.tol, opts.max_iter)
        values.append(float(value))
        total_iters += iters
        if best is None or value > best[0]:
            best = (float(value), u, w)
        if csr.nnz == 0:
            break

    value, u, w = best
    rounded = _round(m, u, w, substream(opts.seed, opts.restarts), opts.roundings)
    return SdpSolution(
        factor=np.vstack([u, w]),
        value=max(value, rounded.objective),
        best_rounded=rounded,
        restarts_used=len(values),
        iterations=total_iters,
        restart_values=tuple(values),
    )


def s_inf1(pair: NetworkPair, opts: SolverOptions | None = None) -> float:
    """Max over thresholds of the SDP value for the indicator difference."""
    best = 0.0
    for s in threshold_grid(pair):
        d = indicator_diff(pair, s)
        if np.any(d):
            best = max(best, sdp_inf1(d, opts).value)
    return best


def row_norm_stats(m) -> tuple[float, float]:
    """(max, sum) of the row 2-norms of ``m``."""
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return 0.0, 0.0
    rows = np.sqrt(np.sum(m * m, axis=1))
    return float(rows.max()), float(rows.sum())
