"""Random graph models with finite edge-weight supports, and power studies.

A :class:`RandomGraphModel` stores, for every slot ``(i, j)``, a probability
vector over one shared sorted support.  Slots are independent above the
diagonal; the diagonal is a point mass at 0.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import opnorm, streams
from .errors import InvalidProbability, SizeMismatch, ValidationError
from .network import Network, NetworkPair, default_labels
from .randomization import run_battery
from .statistics import StatisticId, StatisticOptions


@dataclass(frozen=True)
class EdgeDistribution:
    support: tuple[tuple[float, float], ...]

    def __post_init__(self):
        vals = [v for v, _ in self.support]
        probs = np.array([p for _, p in self.support], dtype=float)
        if len(set(vals)) != len(vals) or not all(math.isfinite(v) for v in vals):
            raise ValidationError("support values must be distinct and finite")
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-12:
            raise InvalidProbability(f"probabilities must be >= 0 and sum to 1, got {probs.tolist()}")

    def cdf(self, s: float) -> float:
        return float(sum(p for v, p in self.support if v <= s))


class RandomGraphModel:
    """``n x n`` matrix of independent edge distributions on a shared support.

    Parameters
    ----------
    values : array_like, shape (V,)
        Sorted distinct support; must contain 0.
    probs : array_like, shape (n, n, V)
        ``probs[i, j, v] = P(D_ij = values[v])``; symmetric in ``(i, j)``.
    """

    def __init__(self, values, probs):
        values = np.asarray(values, dtype=float)
        probs = np.array(probs, dtype=float)
        if values.ndim != 1 or np.any(np.diff(values) <= 0) or not np.all(np.isfinite(values)):
            raise ValidationError("support values must be finite, sorted and distinct")
        if 0.0 not in values:
            raise ValidationError("support must include 0 for the diagonal")
        if probs.ndim != 3 or probs.shape[0] != probs.shape[1] or probs.shape[2] != values.size:
            raise ValidationError(f"probs must have shape (n, n, {values.size}), got {probs.shape}")
        if np.any(probs < 0) or np.any(np.abs(probs.sum(axis=2) - 1.0) > 1e-12):
            raise InvalidProbability("each cell must be a probability vector")
        if not np.array_equal(probs, probs.transpose(1, 0, 2)):
            raise ValidationError("cell distributions must be symmetric")
        zero = int(np.flatnonzero(values == 0.0)[0])
        n = probs.shape[0]
        diag = probs[np.arange(n), np.arange(n)]
        if np.any(diag[:, zero] != 1.0):
            raise ValidationError("diagonal cells must be degenerate at 0")
        self.values = values
        self.probs = probs
        self.values.setflags(write=False)
        self.probs.setflags(write=False)
        self._cum = np.cumsum(probs, axis=2)

    @property
    def n(self) -> int:
        return self.probs.shape[0]

    def cell(self, i: int, j: int) -> EdgeDistribution:
        p = self.probs[i, j]
        return EdgeDistribution(tuple((float(v), float(q)) for v, q in zip(self.values, p) if q > 0))

    def cdf_matrix(self, s: float) -> np.ndarray:
        """``F(s)`` with entries ``P(D_ij <= s)``."""
        k = int(np.searchsorted(self.values, s, side="right"))
        if k == 0:
            return np.zeros((self.n, self.n))
        return np.minimum(self._cum[:, :, k - 1], 1.0)

    def __eq__(self, other):
        if not isinstance(other, RandomGraphModel):
            return NotImplemented
        return np.array_equal(self.values, other.values) and np.array_equal(self.probs, other.probs)

    def __repr__(self):
        return f"RandomGraphModel(n={self.n}, support={self.values.tolist()})"

    @classmethod
    def bernoulli(cls, p) -> "RandomGraphModel":
        """0/1 model from a symmetric matrix of link probabilities (diagonal ignored)."""
        p = np.array(p, dtype=float)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValidationError("probability matrix must be square")
        if np.any(~np.isfinite(p)) or np.any((p < 0) | (p > 1)):
            raise InvalidProbability("link probabilities must lie in [0, 1]")
        np.fill_diagonal(p, 0.0)
        return cls([0.0, 1.0], np.stack([1.0 - p, p], axis=2))


def _prob(p: float, name: str) -> float:
    if not (0.0 <= p <= 1.0):
        raise InvalidProbability(f"{name} must be in [0, 1], got {p}")
    return float(p)


def er_model(n: int, p: float) -> RandomGraphModel:
    _prob(p, "p")
    return RandomGraphModel.bernoulli(np.full((n, n), p))


def star_block_model(n: int, p_star: float, p_rest: float) -> RandomGraphModel:
    """Node 0 links to each other node w.p. ``p_star``; all other pairs w.p. ``p_rest``."""
    _prob(p_star, "p_star")
    p = np.full((n, n), _prob(p_rest, "p_rest"))
    p[0, :] = p[:, 0] = p_star
    return RandomGraphModel.bernoulli(p)


def block_model(n: int, p_base: float, rows: Sequence[int], cols: Sequence[int], p_block: float) -> RandomGraphModel:
    """ER(``p_base``) except pairs in ``rows x cols`` (both orientations) link w.p. ``p_block``."""
    p = np.full((n, n), _prob(p_base, "p_base"))
    r, c = np.asarray(rows), np.asarray(cols)
    p[np.ix_(r, c)] = _prob(p_block, "p_block")
    p[np.ix_(c, r)] = p_block
    return RandomGraphModel.bernoulli(p)


def sample_network(model: RandomGraphModel, rng: np.random.Generator, labels=None) -> Network:
    """Draw one network; each upper slot uses one uniform through the inverse CDF."""
    n = model.n
    iu = np.triu_indices(n, 1)
    u = rng.random(iu[0].size)
    cum = model._cum[iu]
    idx = np.minimum((u[:, None] >= cum).sum(axis=1), model.values.size - 1)
    w = np.zeros((n, n))
    w[iu] = model.values[idx]
    w += w.T
    return Network._trusted(w, tuple(labels) if labels is not None else default_labels(n))


def sample_pair(f1: RandomGraphModel, f2: RandomGraphModel, rng: np.random.Generator) -> NetworkPair:
    if f1.n != f2.n:
        raise SizeMismatch("models differ in size")
    return NetworkPair(sample_network(f1, rng), sample_network(f2, rng))


@dataclass(frozen=True)
class PopulationDiagnostics:
    """Population counterparts of the test statistics and their null scales.

    ``tau`` and ``sigma`` are the max over thresholds of the largest and the
    summed root row variances of the indicator difference.
    ``t_inf1_exact`` is False when ``t_inf1_pop`` is an SDP value (n above
    the enumeration cap).
    """

    tau: float
    sigma: float
    t22_pop: float
    t_inf1_pop: float
    grid: tuple[float, ...]
    t_inf1_exact: bool = True
    t22_row_bound: float = 0.0

    @property
    def t22_ratio(self) -> float:
        return self.t22_pop / self.tau if self.tau > 0 else 0.0

    @property
    def t_inf1_ratio(self) -> float:
        return self.t_inf1_pop / self.sigma if self.sigma > 0 else 0.0

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "sigma": self.sigma,
            "t22_pop": self.t22_pop,
            "t_inf1_pop": self.t_inf1_pop,
            "t22_pop_over_tau": self.t22_ratio,
            "t_inf1_pop_over_sigma": self.t_inf1_ratio,
            "t_inf1_exact": self.t_inf1_exact,
            "grid": list(self.grid),
        }


def population_diagnostics(f1: RandomGraphModel, f2: RandomGraphModel, cap: int = opnorm.EXACT_CAP,
                           solver: opnorm.SolverOptions | None = None) -> PopulationDiagnostics:
    if f1.n != f2.n:
        raise SizeMismatch(f"models have {f1.n} and {f2.n} nodes")
    grid = np.union1d(f1.values, f2.values)
    tau = sigma = t22 = tinf = 0.0
    row_bound = 0.0
    exact = f1.n <= cap
    for s in grid:
        a, b = f1.cdf_matrix(s), f2.cdf_matrix(s)
        nu = a + b - 2 * a * b
        root = np.sqrt(nu.sum(axis=1))
        tau = max(tau, float(root.max()))
        sigma = max(sigma, float(root.sum()))
        diff = a - b
        np.fill_diagonal(diff, 0.0)
        if not np.any(diff):
            continue
        norm = opnorm.spectral_norm(diff)
        if norm > t22:
            t22 = norm
            row_bound = opnorm.row_norm_stats(diff)[0]
        if exact:
            tinf = max(tinf, opnorm.t_inf1_exact(diff, cap))
        else:
            tinf = max(tinf, opnorm.sdp_inf1(diff, solver).value)
    return PopulationDiagnostics(tau, sigma, t22, tinf, tuple(float(x) for x in grid), exact, row_bound)


# --- presets ---------------------------------------------------------------

def sparse_er_preset(n: int) -> tuple[RandomGraphModel, RandomGraphModel]:
    """Erdos-Renyi with mean degrees about 8 versus 5."""
    return er_model(n, 8.0 / n), er_model(n, 5.0 / n)


def degree_het_preset(n: int) -> tuple[RandomGraphModel, RandomGraphModel]:
    """One hub linking w.p. 0.5 in both; other pairs 0.02 versus 0.08."""
    return star_block_model(n, 0.5, 0.02), star_block_model(n, 0.5, 0.08)


PRESETS: dict[str, Callable[[int], tuple[RandomGraphModel, RandomGraphModel]]] = {
    "sparse-er": sparse_er_preset,
    "degree-het": degree_het_preset,
}

#: throughput settings for simulation studies; see README
STUDY_SOLVER = opnorm.SolverOptions(restarts=1)
STUDY_OPTIONS = StatisticOptions(solver=STUDY_SOLVER, spectral_method="dense")


# --- power studies ---------------------------------------------------------

@dataclass(frozen=True)
class StatisticSummary:
    statistic: str
    mean_p: float
    se_p: float
    rejection_rate: float
    se_rejection: float
    trials: int


@dataclass
class StudyResult:
    """Trial-level p-values plus per-statistic summaries."""

    statistics: list[str]
    p_values: np.ndarray          # (trials, statistics)
    observed: np.ndarray          # (trials, statistics)
    alpha: float
    R: int
    seed: int
    config: dict = field(default_factory=dict)

    @property
    def trials(self) -> int:
        return self.p_values.shape[0]

    def summary(self) -> list[StatisticSummary]:
        out = []
        m = self.trials
        for k, name in enumerate(self.statistics):
            p = self.p_values[:, k]
            rej = (p <= self.alpha).astype(float)
            se = float(p.std(ddof=1) / math.sqrt(m)) if m > 1 else float("nan")
            rate = float(rej.mean())
            out.append(StatisticSummary(name, float(p.mean()), se, rate, math.sqrt(rate * (1 - rate) / m), m))
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["trial", "statistic", "observed", "p_value", "reject"])
        for t in range(self.trials):
            for k, name in enumerate(self.statistics):
                p = self.p_values[t, k]
                writer.writerow([t, name, repr(float(self.observed[t, k])), repr(float(p)), int(p <= self.alpha)])
        return buf.getvalue()

    def summary_dict(self) -> dict:
        return {
            "config": self.config,
            "trials": self.trials,
            "R": self.R,
            "alpha": self.alpha,
            "seed": self.seed,
            "statistics": {s.statistic: {
                "mean_p": s.mean_p,
                "se_p": s.se_p,
                "rejection_rate": s.rejection_rate,
                "se_rejection": s.se_rejection,
            } for s in self.summary()},
        }

    def summary_json(self) -> str:
        return json.dumps(self.summary_dict(), indent=2) + "\n"

    def format_summary(self) -> str:
        lines = [f"{'statistic':<20}{'mean p':>10}{'(se)':>10}{'reject':>10}{'(se)':>10}"]
        for s in self.summary():
            lines.append(f"{s.statistic:<20}{s.mean_p:>10.3f}{s.se_p:>10.3f}{s.rejection_rate:>10.3f}{s.se_rejection:>10.3f}")
        lines.append(f"trials = {self.trials}, R = {self.R}, alpha = {self.alpha:g}, seed = {self.seed}")
        return "\n".join(lines) + "\n"


def power_study(f1: RandomGraphModel, f2: RandomGraphModel, trials: int, R: int, alpha: float,
                statistics: Sequence = (StatisticId.T22, StatisticId.S_INF1), seed: int = 0,
                options: StatisticOptions | None = None, threads: int = 1,
                progress: Callable[[int], None] | None = None) -> StudyResult:
    """Sample ``trials`` pairs (one network from each model) and test each.

    Trial ``t`` samples from ``substream(seed, SAMPLING, t)`` and runs its
    battery with a seed derived from ``(seed, t)``.
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    if f1.n != f2.n:
        raise SizeMismatch(f"models have {f1.n} and {f2.n} nodes")
    options = options or STUDY_OPTIONS
    stats = list(statistics)
    p = np.empty((trials, len(stats)))
    obs = np.empty((trials, len(stats)))
    for t in range(trials):
        pair = sample_pair(f1, f2, streams.substream(seed, streams.SAMPLING, t))
        reports = run_battery(pair, stats, R, alpha, streams.derive_seed(seed, streams.BATTERY, t),
                              options, threads)
        p[t] = [r.p_value for r in reports]
        obs[t] = [r.observed for r in reports]
        if progress is not None:
            progress(t)
    names = [reports[k].statistic for k in range(len(stats))]
    return StudyResult(names, p, obs, float(alpha), int(R), int(seed))


def model_from_spec(spec: dict, n: int | None = None) -> RandomGraphModel:
    """Build a model from a JSON-style spec.

    Kinds: ``{"kind": "er", "n", "p"}``, ``{"kind": "star", "n", "p_star",
    "p_rest"}``, ``{"kind": "block", "n", "p_base", "rows", "cols", "p_block"}``,
    ``{"kind": "matrix", "probabilities": [[...]]}`` or ``{"kind": "matrix",
    "path": "file.csv"}`` (plain CSV of link probabilities).
    """
    kind = spec.get("kind")
    size = spec.get("n", n)
    try:
        if kind == "er":
            return er_model(int(size), float(spec["p"]))
        if kind == "star":
            return star_block_model(int(size), float(spec["p_star"]), float(spec["p_rest"]))
        if kind == "block":
            return block_model(int(size), float(spec["p_base"]), spec["rows"], spec["cols"], float(spec["p_block"]))
        if kind == "matrix":
            if "probabilities" in spec:
                return RandomGraphModel.bernoulli(spec["probabilities"])
            return RandomGraphModel.bernoulli(np.loadtxt(spec["path"], delimiter=",", comments="#", ndmin=2))
    except KeyError as exc:
        raise ValidationError(f"model spec of kind {kind!r} is missing {exc}") from None
    raise ValidationError(f"unknown model kind {kind!r}")


def resolve_models(name_or_spec, n: int | None = None):
    """Preset name -> model pair, or a single model spec -> model."""
    if isinstance(name_or_spec, str):
        if name_or_spec not in PRESETS:
            raise ValidationError(f"unknown preset {name_or_spec!r} (choose from {', '.join(PRESETS)})")
        if n is None:
            raise ValidationError("presets need n")
        return PRESETS[name_or_spec](int(n))
    return model_from_spec(name_or_spec, n)


__all__ = [
    "EdgeDistribution", "RandomGraphModel", "PopulationDiagnostics", "StudyResult", "StatisticSummary",
    "er_model", "star_block_model", "block_model", "sample_network", "sample_pair",
    "population_diagnostics", "power_study", "PRESETS", "STUDY_OPTIONS", "STUDY_SOLVER", "model_from_spec",
    "sparse_er_preset", "degree_het_preset",
    "resolve_models",
]
