"""Descriptive network statistics and the difference statistics built on them.

Every test statistic here compares the two networks of a pair and is
symmetric in them, so swapping ``a`` and ``b`` leaves its value unchanged.
"""

from __future__ import annotations

import enum
import json
import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy.sparse import csgraph

from . import opnorm
from .errors import NegativeWeight, NoConvergence, ValidationError
from .network import Network, NetworkPair


class StatisticId(str, enum.Enum):
    AVG_DEGREE_ABSDIFF = "avg_degree_absdiff"
    DEGREE_MSD = "degree_msd"
    EIGCENTRALITY_MSD = "eigcentrality_msd"
    CLUSTERING_ABSDIFF = "clustering_absdiff"
    DIAMETER_ABSDIFF = "diameter_absdiff"
    T22 = "t22"
    S_INF1 = "s_inf1"
    RMS_CUSTOM = "rms_custom"

    def __str__(self):
        return self.value


#: Column order of the seven-statistic battery in reports.
TABLE_ORDER = (
    StatisticId.AVG_DEGREE_ABSDIFF,
    StatisticId.DEGREE_MSD,
    StatisticId.EIGCENTRALITY_MSD,
    StatisticId.CLUSTERING_ABSDIFF,
    StatisticId.DIAMETER_ABSDIFF,
    StatisticId.T22,
    StatisticId.S_INF1,
)

CLUSTERING_MODES = ("standard", "literal")


def _nonnegative(net: Network):
    if np.any(net.weights < 0):
        raise NegativeWeight("statistic needs nonnegative weights")


def degree_sequence(net: Network) -> np.ndarray:
    return net.weights.sum(axis=1)


def eigenvector_centrality(net: Network, tol: float = 1e-10, max_iter: int = 10_000) -> np.ndarray:
    """Leading eigenvector of ``W + I`` by power iteration from the uniform vector.

    The identity shift keeps bipartite components from oscillating and leaves
    the leading eigenvector unchanged.  Output is nonnegative with unit 2-norm.
    Iteration stops once successive iterates differ by less than ``tol`` and
    the eigen-residual ``||(W + I)v - lambda v||`` is below ``10 * tol``.

    Raises
    ------
    NegativeWeight
    NoConvergence
        ``last_iterate`` carries the final (normalized) iterate.
    """
    _nonnegative(net)
    if tol <= 0:
        raise ValidationError("tol must be positive")
    a = net.weights + np.eye(net.n)
    v = np.full(net.n, 1.0 / np.sqrt(net.n))
    for _ in range(max_iter):
        av = a @ v
        residual = np.linalg.norm(av - (v @ av) * v)
        nxt = av / np.linalg.norm(av)
        # the step test alone leaves a residual up to lambda * tol
        if np.linalg.norm(nxt - v) < tol and residual < 10 * tol:
            return v
        v = nxt
    raise NoConvergence(max_iter, last_iterate=v)


def _centrality_or_fallback(net: Network, tol: float, max_iter: int) -> tuple[np.ndarray, bool]:
    try:
        return eigenvector_centrality(net, tol, max_iter), True
    except NoConvergence as exc:
        return exc.last_iterate, False


def clustering_coefficient(net: Network, mode: str = "standard") -> float:
    """Weighted clustering ``sum D_ij D_ik D_jk / sum D_ij D_ik`` over triples.

    ``mode="literal"`` sums the denominator over all ordered triples including
    ``j == k``; ``mode="standard"`` drops those terms (classical transitivity).
    Zero denominator gives 0.
    """
    if mode not in CLUSTERING_MODES:
        raise ValueError(f"mode must be one of {CLUSTERING_MODES}")
    _nonnegative(net)
    w = net.weights
    numerator = float(np.trace(w @ w @ w))
    deg = w.sum(axis=1)
    denominator = float(np.sum(deg * deg))
    if mode == "standard":
        denominator -= float(np.sum(w * w))
    if denominator <= 0:
        return 0.0
    return numerator / denominator


def diameter_largest_component(net: Network) -> int:
    """Hop diameter of the largest connected component (edges: weight != 0).

    Ties between equally large components go to the one holding the smallest
    node index.
    """
    adj = (net.weights != 0).astype(np.int8)
    count, labels = csgraph.connected_components(adj, directed=False)
    sizes = np.bincount(labels, minlength=count)
    first = np.full(count, net.n)
    np.minimum.at(first, labels, np.arange(net.n))
    comp = min(range(count), key=lambda c: (-sizes[c], first[c]))
    nodes = np.flatnonzero(labels == comp)
    if nodes.size == 1:
        return 0
    dist = csgraph.shortest_path(adj[np.ix_(nodes, nodes)], method="D", directed=False, unweighted=True)
    return int(dist.max())


@dataclass(frozen=True)
class DescriptiveSummary:
    mean_degree: float
    sd_degree: float
    mean_eigcentrality: float
    sd_eigcentrality: float
    clustering: float
    diameter: int
    n: int = 0
    clustering_mode: str = "standard"
    centrality_converged: bool = True

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def describe(net: Network, clustering: str = "standard", tol: float = 1e-10,
             max_iter: int = 10_000) -> DescriptiveSummary:
    """Means and population SDs of degree and centrality, plus clustering and diameter."""
    _nonnegative(net)
    deg = degree_sequence(net)
    cent, ok = _centrality_or_fallback(net, tol, max_iter)
    if not ok:
        warnings.warn("eigenvector centrality did not converge; reporting last iterate", RuntimeWarning)
    return DescriptiveSummary(
        mean_degree=float(deg.mean()),
        sd_degree=float(deg.std()),
        mean_eigcentrality=float(cent.mean()),
        sd_eigcentrality=float(cent.std()),
        clustering=clustering_coefficient(net, clustering),
        diameter=diameter_largest_component(net),
        n=net.n,
        clustering_mode=clustering,
        centrality_converged=ok,
    )


def format_summaries(summaries: dict[str, DescriptiveSummary], digits: int = 2) -> str:
    """Plain-text table with one Mean and one SD row per network."""
    head = f"{'':<14}{'':<6}{'Degree':>10}{'EigCent':>10}{'Clustering':>12}{'Diameter':>10}"
    lines = [head, "-" * len(head)]
    for name, s in summaries.items():
        lines.append(f"{name:<14}{'Mean':<6}{s.mean_degree:>10.{digits}f}{s.mean_eigcentrality:>10.{digits}f}"
                     f"{s.clustering:>12.{digits}f}{s.diameter:>10d}")
        lines.append(f"{'':<14}{'SD':<6}{s.sd_degree:>10.{digits}f}{s.sd_eigcentrality:>10.{digits}f}")
    return "\n".join(lines) + "\n"


NodeStatistic = Callable[[Network], np.ndarray]


@dataclass(frozen=True)
class StatisticOptions:
    """Knobs shared by the statistic evaluators.

    ``node_statistic`` is required by ``rms_custom``; ``spectral_method`` is
    passed to :func:`netnorm.opnorm.spectral_norm`.
    """

    clustering: str = "standard"
    centrality_tol: float = 1e-10
    centrality_max_iter: int = 10_000
    solver: opnorm.SolverOptions = field(default_factory=opnorm.SolverOptions)
    spectral_method: str = "power"
    node_statistic: NodeStatistic | None = None


def _msd(x: np.ndarray, y: np.ndarray) -> float:
    return float(np.mean((x - y) ** 2))


def evaluate_statistic(stat, pair: NetworkPair, options: StatisticOptions | None = None) -> float:
    """Value of statistic ``stat`` (a :class:`StatisticId`, its name, or a
    callable on the pair) for ``pair``."""
    if callable(stat) and not isinstance(stat, str):
        return float(stat(pair))
    options = options or StatisticOptions()
    sid = StatisticId(stat)
    a, b = pair.a, pair.b
    if sid is StatisticId.AVG_DEGREE_ABSDIFF:
        return abs(float(degree_sequence(a).mean() - degree_sequence(b).mean()))
    if sid is StatisticId.DEGREE_MSD:
        return _msd(degree_sequence(a), degree_sequence(b))
    if sid is StatisticId.EIGCENTRALITY_MSD:
        ca, _ = _centrality_or_fallback(a, options.centrality_tol, options.centrality_max_iter)
        cb, _ = _centrality_or_fallback(b, options.centrality_tol, options.centrality_max_iter)
        return _msd(ca, cb)
    if sid is StatisticId.CLUSTERING_ABSDIFF:
        return abs(clustering_coefficient(a, options.clustering) - clustering_coefficient(b, options.clustering))
    if sid is StatisticId.DIAMETER_ABSDIFF:
        return float(abs(diameter_largest_component(a) - diameter_largest_component(b)))
    if sid is StatisticId.T22:
        return opnorm.t22(pair, method=options.spectral_method)
    if sid is StatisticId.S_INF1:
        return opnorm.s_inf1(pair, options.solver)
    if options.node_statistic is None:
        raise ValidationError("rms_custom needs StatisticOptions.node_statistic")
    diff = np.asarray(options.node_statistic(a), float) - np.asarray(options.node_statistic(b), float)
    return float(np.linalg.norm(diff))


def parse_statistics(spec: str | list) -> list[StatisticId]:
    """Comma-separated names (or ``"all"``, the seven-column battery)."""
    items = spec.split(",") if isinstance(spec, str) else list(spec)
    out = []
    for item in items:
        item = str(item).strip()
        if not item:
            continue
        if item == "all":
            out.extend(TABLE_ORDER)
            continue
        try:
            out.append(StatisticId(item))
        except ValueError:
            names = ", ".join(s.value for s in StatisticId)
            raise ValidationError(f"unknown statistic {item!r} (choose from {names})") from None
    if not out:
        raise ValidationError("no statistics selected")
    return out
