"""Randomization tests for the two-network null hypothesis.

Under the null the two weights at each slot ``(i, j)`` are exchangeable, so
each replicate flips a fair coin per slot and exchanges the entries when it
comes up 0.  The p-value is ``(1 + #{r : T_r >= T_obs}) / (R + 1)``.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import streams
from .errors import AssumptionWarning, InvalidParams, SizeMismatch
from .network import Network, NetworkPair
from .statistics import StatisticOptions, evaluate_statistic


@dataclass(frozen=True, eq=False)
class SwapMask:
    """Symmetric 0/1 matrix with zero diagonal; 1 keeps a slot, 0 exchanges it."""

    bits: np.ndarray

    @property
    def n(self) -> int:
        return self.bits.shape[0]


@lru_cache(maxsize=32)
def _upper(n: int):
    return np.triu_indices(n, 1)


def draw_swap_mask(n: int, rng: np.random.Generator) -> SwapMask:
    if n < 1:
        raise InvalidParams("n must be >= 1")
    iu = _upper(n)
    bits = np.zeros((n, n), dtype=bool)
    bits[iu] = rng.integers(0, 2, size=iu[0].size).astype(bool)
    bits |= bits.T
    bits.setflags(write=False)
    return SwapMask(bits)


def apply_swap(pair: NetworkPair, mask: SwapMask) -> NetworkPair:
    """Randomized pair: ``a_r = a*bit + b*(1-bit)``, ``b_r = a*(1-bit) + b*bit``."""
    if mask.n != pair.n:
        raise SizeMismatch(f"mask is {mask.n}x{mask.n}, pair has {pair.n} nodes")
    wa, wb = pair.a.weights, pair.b.weights
    na = np.where(mask.bits, wa, wb)
    nb = np.where(mask.bits, wb, wa)
    labels = pair.labels
    return NetworkPair(Network._trusted(na, labels), Network._trusted(nb, labels))


@dataclass(frozen=True)
class TestReport:
    statistic: str
    observed: float
    reference: tuple[float, ...]
    p_value: float
    alpha: float
    reject: bool
    R: int
    seed: int

    __test__ = False  # not a pytest class

    def to_dict(self, max_reference: int | None = None) -> dict:
        d = {
            "statistic": self.statistic,
            "observed": self.observed,
            "p_value": self.p_value,
            "alpha": self.alpha,
            "reject": self.reject,
            "R": self.R,
            "seed": self.seed,
        }
        if max_reference is None or len(self.reference) <= max_reference:
            d["reference"] = list(self.reference)
        return d


def _stat_name(stat) -> str:
    if isinstance(stat, str):
        return str(stat.value if hasattr(stat, "value") else stat)
    return getattr(stat, "__name__", repr(stat))


def _check_params(R, alpha):
    if isinstance(R, bool) or not isinstance(R, (int, np.integer)) or R < 1:
        raise InvalidParams(f"R must be a positive integer, got {R!r}")
    if not (0 < alpha <= 1):
        raise InvalidParams(f"alpha must be in (0, 1], got {alpha!r}")
    if alpha * (R + 1) < 1:
        warnings.warn(f"alpha*(R+1) = {alpha * (R + 1):g} < 1: the test cannot reject", AssumptionWarning,
                      stacklevel=3)


def p_value(observed: float, reference: Sequence[float]) -> float:
    ref = np.asarray(reference, dtype=float)
    return (1 + int(np.count_nonzero(ref >= observed))) / (ref.size + 1)


def run_battery(pair: NetworkPair, statistics: Sequence, R: int, alpha: float, seed: int,
                options: StatisticOptions | None = None, threads: int = 1) -> list[TestReport]:
    """Test the null with several statistics on one shared set of swap masks.

    Replicate ``r`` uses the mask drawn from ``substream(seed, r)``; results
    are identical for any ``threads``.
    """
    _check_params(R, alpha)
    options = options or StatisticOptions()
    stats = list(statistics)
    observed = [evaluate_statistic(s, pair, options) for s in stats]

    def replicate(r):
        mask = draw_swap_mask(pair.n, streams.substream(seed, streams.SWAP_MASKS, r))
        swapped = apply_swap(pair, mask)
        return [evaluate_statistic(s, swapped, options) for s in stats]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(replicate, range(R), chunksize=max(1, R // (4 * threads))))
    else:
        rows = [replicate(r) for r in range(R)]
    ref = np.asarray(rows, dtype=float).reshape(R, len(stats))

    reports = []
    for k, stat in enumerate(stats):
        p = p_value(observed[k], ref[:, k])
        reports.append(TestReport(
            statistic=_stat_name(stat),
            observed=float(observed[k]),
            reference=tuple(float(x) for x in ref[:, k]),
            p_value=p,
            alpha=float(alpha),
            reject=p <= alpha,
            R=int(R),
            seed=int(seed),
        ))
    return reports


def run_test(pair: NetworkPair, statistic, R: int, alpha: float, seed: int,
             options: StatisticOptions | None = None, threads: int = 1) -> TestReport:
    return run_battery(pair, [statistic], R, alpha, seed, options, threads)[0]


def format_reports(reports: Sequence[TestReport], fmt: str = "text", max_reference: int | None = 0) -> str:
    """Render reports as an aligned table, CSV, or JSON.

    ``max_reference`` caps how many reference values JSON output carries (the
    list is omitted above the cap); ``None`` keeps them all.
    """
    if fmt == "json":
        return json.dumps([r.to_dict(max_reference) for r in reports], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["statistic", "observed", "p_value", "alpha", "reject", "R", "seed"])
        for r in reports:
            writer.writerow([r.statistic, repr(r.observed), f"{r.p_value:.6f}", r.alpha, int(r.reject), r.R, r.seed])
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    width = max([len("statistic")] + [len(r.statistic) for r in reports])
    lines = [f"{'statistic':<{width}}  {'observed':>14}  {'p-value':>8}  reject",
             f"{'-' * width}  {'-' * 14}  {'-' * 8}  ------"]
    for r in reports:
        lines.append(f"{r.statistic:<{width}}  {r.observed:>14.6f}  {r.p_value:>8.3f}  {'yes' if r.reject else 'no'}")
    if reports:
        lines.append(f"R = {reports[0].R}, alpha = {reports[0].alpha:g}, seed = {reports[0].seed}")
    return "\n".join(lines) + "\n"
