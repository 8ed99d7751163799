"""Reading and writing networks.

Two text formats are understood:

* edge lists, a CSV with header ``src,dst,weight`` (weight optional, default
  1.0).  A row with an empty ``dst`` declares an isolated node.
* matrices, a square CSV whose first row and first column hold the labels.

Lines starting with ``#`` are comments in both.  JSON documents of the form
``{"labels": [...], "weights": [[...]]}`` are also accepted; this is what the
CLI emits, so outputs can be read back in.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import (
    AsymmetricMatrix,
    DuplicateEdge,
    ParseError,
    SelfLoop,
    ValidationError,
)
from .network import Network

SYMMETRIZE_RULES = ("or", "and", "strict")


@dataclass(frozen=True)
class IngestOptions:
    """How to turn possibly-directed survey rows into an undirected network.

    ``symmetrize``:
        ``"or"`` links i and j if either direction is reported (weight is the
        max of the two directions); ``"and"`` requires both (weight is the min,
        with an unreported direction counting as 0); ``"strict"`` treats rows as
        undirected and rejects pairs whose two directions disagree.
    ``allow_zero_self_loops``:
        drop self-loops of weight 0 instead of raising :class:`SelfLoop`.
    ``nodes``:
        extra labels to include even if they appear in no edge.
    """

    symmetrize: str = "or"
    allow_zero_self_loops: bool = False
    nodes: Sequence[str] = ()

    def __post_init__(self):
        if self.symmetrize not in SYMMETRIZE_RULES:
            raise ValueError(f"symmetrize must be one of {SYMMETRIZE_RULES}, got {self.symmetrize!r}")


def _text(stream) -> IO[str]:
    if isinstance(stream, (bytes, bytearray)):
        return io.StringIO(stream.decode("utf-8"))
    if isinstance(stream, str):
        return io.StringIO(stream)
    if isinstance(stream, io.TextIOBase):
        return stream
    if hasattr(stream, "read"):
        data = stream.read()
        return io.StringIO(data.decode("utf-8") if isinstance(data, bytes) else data)
    raise TypeError(f"expected text, bytes or a stream, got {type(stream).__name__}")


def _rows(text: IO[str]) -> Iterable[tuple[int, list[str]]]:
    for lineno, line in enumerate(text, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield lineno, next(csv.reader([stripped]))


def _number(token: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(lineno, f"not a number: {token!r}") from None
    if not math.isfinite(value):
        raise ParseError(lineno, f"non-finite weight {token!r}")
    return value


def load_edge_list(stream, options: IngestOptions | None = None) -> Network:
    """Parse an edge-list CSV into a :class:`Network`.

    Nodes are the union of endpoint labels (plus ``options.nodes``), sorted
    lexicographically.  Pairs that never appear get weight 0.

    Raises
    ------
    ParseError
        Malformed header or row; carries the 1-based line number.
    DuplicateEdge
        The same ordered ``(src, dst)`` appears twice.
    SelfLoop
        ``src == dst``, unless zero-weight loops are allowed.
    AsymmetricMatrix
        Under ``symmetrize="strict"`` when the two directions disagree.
    """
    options = options or IngestOptions()
    rows = _rows(_text(stream))
    try:
        lineno, header = next(rows)
    except StopIteration:
        raise ParseError(1, "empty input") from None
    header = [h.strip().lower() for h in header]
    if header[:2] != ["src", "dst"] or len(header) > 3 or (len(header) == 3 and header[2] != "weight"):
        raise ParseError(lineno, f"expected header 'src,dst,weight', got {','.join(header)!r}")

    directed: dict[tuple[str, str], float] = {}
    nodes = set(map(str, options.nodes))
    for lineno, row in rows:
        if len(row) < 2 or len(row) > len(header):
            raise ParseError(lineno, f"expected {len(header)} fields, got {len(row)}")
        src, dst = row[0].strip(), row[1].strip()
        if not src:
            raise ParseError(lineno, "empty src")
        nodes.add(src)
        if not dst:
            continue
        nodes.add(dst)
        token = row[2].strip() if len(row) > 2 else ""
        weight = _number(token, lineno) if token else 1.0
        if src == dst:
            if weight == 0 and options.allow_zero_self_loops:
                continue
            raise SelfLoop(lineno, src)
        if (src, dst) in directed:
            raise DuplicateEdge(lineno, src, dst)
        directed[(src, dst)] = weight

    labels = sorted(nodes)
    index = {lab: k for k, lab in enumerate(labels)}
    w = np.zeros((len(labels), len(labels)))
    done = set()
    for (src, dst), fwd in directed.items():
        key = (src, dst) if src < dst else (dst, src)
        if key in done:
            continue
        done.add(key)
        back = directed.get((dst, src))
        if options.symmetrize == "or":
            value = fwd if back is None else max(fwd, back)
        elif options.symmetrize == "and":
            value = 0.0 if back is None else min(fwd, back)
        else:
            if back is not None and back != fwd:
                raise AsymmetricMatrix(index[src], index[dst],
                                       f"edge ({src}, {dst}) has weights {fwd} and {back}")
            value = fwd
        i, j = index[src], index[dst]
        w[i, j] = w[j, i] = value
    if not labels:
        raise ParseError(lineno, "no nodes")
    return Network(w, labels)


def load_matrix(stream) -> Network:
    """Parse a labelled square matrix CSV (corner cell, labels, then rows)."""
    rows = list(_rows(_text(stream)))
    if not rows:
        raise ParseError(1, "empty input")
    lineno, header = rows[0]
    labels = [h.strip() for h in header[1:]]
    n = len(labels)
    if len(rows) - 1 != n:
        raise ParseError(lineno, f"{n} column labels but {len(rows) - 1} rows")
    w = np.zeros((n, n))
    for k, (lineno, row) in enumerate(rows[1:]):
        if len(row) != n + 1:
            raise ParseError(lineno, f"expected {n + 1} fields, got {len(row)}")
        if row[0].strip() != labels[k]:
            raise ParseError(lineno, f"row label {row[0].strip()!r} does not match column label {labels[k]!r}")
        w[k] = [_number(tok.strip(), lineno) for tok in row[1:]]
    return Network(w, labels)


def network_from_json(doc) -> Network:
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    if "labels" not in doc and len(doc) == 1:
        # a describe report holding one network
        doc = next(iter(doc.values()))
    if isinstance(doc, dict) and "network" in doc:
        doc = doc["network"]
    try:
        return Network(np.asarray(doc["weights"], dtype=float), doc["labels"])
    except KeyError as exc:
        raise ValidationError(f"network JSON needs 'labels' and 'weights' (missing {exc})") from None


def network_to_json(net: Network) -> dict:
    # float() keeps full precision; json writes repr, which round-trips
    return {"labels": list(net.labels), "weights": [[float(x) for x in row] for row in net.weights]}


def dump_matrix(net: Network, stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow([""] + list(net.labels))
    for lab, row in zip(net.labels, net.weights):
        writer.writerow([lab] + [repr(float(x)) for x in row])


def load_network(path, options: IngestOptions | None = None) -> Network:
    """Load a network file, choosing the parser from the content.

    ``.json`` files are parsed as JSON; CSV files whose first non-comment line
    starts with ``src`` are edge lists, anything else is a matrix.
    """
    path = Path(path)
    raw = path.read_bytes()
    if path.suffix.lower() == ".json":
        return network_from_json(raw)
    for _, row in _rows(io.StringIO(raw.decode("utf-8"))):
        if row and row[0].strip().lower() == "src":
            return load_edge_list(raw, options)
        break
    return load_matrix(raw)
