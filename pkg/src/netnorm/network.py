"""Network data model: symmetric hollow weight matrices with node labels.

Both networks of a pair share one ordered label list so that index ``i`` is the
same agent in each.  Directed or bipartite data enter through
:func:`embed_rectangular`, which places the rectangular matrix in the
off-diagonal blocks of a symmetric square one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    AsymmetricMatrix,
    DuplicateLabel,
    LabelMismatch,
    NonFiniteEntry,
    NonzeroDiagonal,
    SizeMismatch,
    ValidationError,
)

__all__ = [
    "Network",
    "NetworkPair",
    "RectangularNetwork",
    "validate",
    "align",
    "embed_rectangular",
    "threshold_grid",
    "indicator_diff",
    "default_labels",
]


def default_labels(n: int) -> tuple[str, ...]:
    width = len(str(max(n - 1, 0)))
    return tuple(f"{i:0{width}d}" for i in range(n))


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Network:
    """Undirected weighted network.

    Parameters
    ----------
    weights : array_like, shape (n, n)
        Symmetric matrix with zero diagonal and finite entries.
    labels : sequence of str, optional
        Distinct node identifiers; defaults to zero-padded indices.
    """

    weights: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        w = _frozen(self.weights)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] == 0:
            raise ValidationError(f"weights must be a non-empty square matrix, got shape {w.shape}")
        labels = tuple(str(x) for x in self.labels) if len(self.labels) else default_labels(w.shape[0])
        if len(labels) != w.shape[0]:
            raise ValidationError(f"{len(labels)} labels for {w.shape[0]} nodes")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "labels", labels)
        validate(self)

    @classmethod
    def _trusted(cls, weights: np.ndarray, labels: tuple[str, ...]) -> "Network":
        # skips validation; callers guarantee the invariants
        obj = object.__new__(cls)
        if weights.flags.writeable:
            weights.setflags(write=False)
        object.__setattr__(obj, "weights", weights)
        object.__setattr__(obj, "labels", labels)
        return obj

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash((self.labels, self.weights.tobytes()))

    def __repr__(self):
        return f"Network(n={self.n}, edges={self.edge_count()})"

    def edge_count(self) -> int:
        return int(np.count_nonzero(np.triu(self.weights, 1)))

    def is_binary(self) -> bool:
        return bool(np.all((self.weights == 0) | (self.weights == 1)))

    def permuted(self, order: Sequence[int]) -> "Network":
        """Relabel nodes: new node ``k`` is old node ``order[k]``."""
        idx = np.asarray(order)
        return Network._trusted(
            np.ascontiguousarray(self.weights[np.ix_(idx, idx)]),
            tuple(self.labels[i] for i in idx),
        )


def validate(net: Network) -> None:
    """Raise the first invariant violation found in ``net``; return None if valid."""
    w = net.weights
    bad = ~np.isfinite(w)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise NonFiniteEntry(i, j)
    diag = np.flatnonzero(np.diag(w) != 0)
    if diag.size:
        raise NonzeroDiagonal(diag[0])
    asym = np.argwhere(w != w.T)
    if asym.size:
        i, j = sorted(asym[0])
        raise AsymmetricMatrix(i, j)
    seen = set()
    for lab in net.labels:
        if lab in seen:
            raise DuplicateLabel(lab)
        seen.add(lab)


@dataclass(frozen=True, eq=False)
class NetworkPair:
    """Two networks on the same ordered node set."""

    a: Network
    b: Network

    def __post_init__(self):
        if self.a.n != self.b.n:
            raise SizeMismatch(f"networks have {self.a.n} and {self.b.n} nodes")
        if self.a.labels != self.b.labels:
            for x, y in zip(self.a.labels, self.b.labels):
                if x != y:
                    raise LabelMismatch(x, f"label order differs: {x!r} vs {y!r}; use align()")

    @property
    def n(self) -> int:
        return self.a.n

    @property
    def labels(self) -> tuple[str, ...]:
        return self.a.labels

    def swapped(self) -> "NetworkPair":
        return NetworkPair(self.b, self.a)

    def permuted(self, order: Sequence[int]) -> "NetworkPair":
        return NetworkPair(self.a.permuted(order), self.b.permuted(order))

    def __eq__(self, other):
        if not isinstance(other, NetworkPair):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))


def align(a: Network, b: Network) -> NetworkPair:
    """Pair two networks by label, reordering ``b`` to ``a``'s label order.

    Raises
    ------
    LabelMismatch
        If a label appears in one network but not the other.
    """
    only_a = sorted(set(a.labels) - set(b.labels))
    if only_a:
        raise LabelMismatch(only_a[0], f"label {only_a[0]!r} missing from second network")
    only_b = sorted(set(b.labels) - set(a.labels))
    if only_b:
        raise LabelMismatch(only_b[0], f"label {only_b[0]!r} missing from first network")
    pos = {lab: k for k, lab in enumerate(b.labels)}
    return NetworkPair(a, b.permuted([pos[lab] for lab in a.labels]))


@dataclass(frozen=True, eq=False)
class RectangularNetwork:
    """Agent-by-market (or sender-by-receiver) weights, ``n1 x n2``."""

    weights: np.ndarray
    row_labels: tuple[str, ...] = ()
    col_labels: tuple[str, ...] = ()

    def __post_init__(self):
        w = _frozen(self.weights)
        if w.ndim != 2:
            raise ValidationError("rectangular weights must be 2-D")
        if not np.all(np.isfinite(w)):
            i, j = np.argwhere(~np.isfinite(w))[0]
            raise NonFiniteEntry(i, j)
        rows = tuple(map(str, self.row_labels)) or default_labels(w.shape[0])
        cols = tuple(map(str, self.col_labels)) or default_labels(w.shape[1])
        if len(rows) != w.shape[0] or len(cols) != w.shape[1]:
            raise ValidationError("label counts do not match the matrix shape")
        for side in (rows, cols):
            if len(set(side)) != len(side):
                dup = next(x for x in side if side.count(x) > 1)
                raise DuplicateLabel(dup)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "row_labels", rows)
        object.__setattr__(self, "col_labels", cols)

    @property
    def n1(self) -> int:
        return self.weights.shape[0]

    @property
    def n2(self) -> int:
        return self.weights.shape[1]


def embed_rectangular(rect: RectangularNetwork) -> Network:
    """Symmetric ``(n1+n2)``-node embedding ``[[0, W], [W.T, 0]]``.

    Row labels get an ``r:`` prefix and column labels a ``c:`` prefix so the
    two sides can never collide.
    """
    n1, n2 = rect.n1, rect.n2
    w = np.zeros((n1 + n2, n1 + n2))
    w[:n1, n1:] = rect.weights
    w[n1:, :n1] = rect.weights.T
    labels = tuple(f"r:{x}" for x in rect.row_labels) + tuple(f"c:{x}" for x in rect.col_labels)
    return Network(w, labels)


def _offdiag(w: np.ndarray) -> np.ndarray:
    n = w.shape[0]
    return w[~np.eye(n, dtype=bool)]


def threshold_grid(pair: NetworkPair) -> np.ndarray:
    """Sorted distinct off-diagonal weights of both networks.

    ``indicator_diff`` only changes at these values, so maximizing any norm of
    it over all real thresholds reduces to maximizing over this grid.
    """
    if pair.n == 1:
        return np.empty(0)
    return np.unique(np.concatenate([_offdiag(pair.a.weights), _offdiag(pair.b.weights)]))


def indicator_diff(pair: NetworkPair, s: float) -> np.ndarray:
    """``1{a <= s} - 1{b <= s}`` entrywise, with the diagonal forced to zero."""
    d = (pair.a.weights <= s).astype(float) - (pair.b.weights <= s).astype(float)
    np.fill_diagonal(d, 0.0)
    return d
