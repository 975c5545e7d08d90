"""Text formats.

``.dhg`` (directed hypergraph)::

    dhg 1 <n>
    <|T|> <t_1> ... <|H|> <h_1> ... <weight>     # one line per edge, ids 0,1,2,...

``.dhu`` (update stream)::

    add <|T|> <t...> <|H|> <h...> <weight>
    del <edge-id>
    batch <count>                                # groups the next <count> lines

Lines starting with ``#`` and blank lines are ignored in both formats.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Union

from .hypergraph import Hyperedge, Hypergraph

__all__ = [
    "FormatError",
    "AddOp",
    "DelOp",
    "BatchOp",
    "dumps_dhg",
    "loads_dhg",
    "read_dhg",
    "write_dhg",
    "loads_dhu",
    "dumps_dhu",
    "read_dhu",
]


class FormatError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


@dataclass(frozen=True)
class AddOp:
    tail: tuple[int, ...]
    head: tuple[int, ...]
    weight: float


@dataclass(frozen=True)
class DelOp:
    edge_id: int


@dataclass(frozen=True)
class BatchOp:
    ops: tuple[Union[AddOp, DelOp], ...]

    @property
    def adds(self) -> list[AddOp]:
        return [op for op in self.ops if isinstance(op, AddOp)]

    @property
    def deletes(self) -> list[int]:
        return [op.edge_id for op in self.ops if isinstance(op, DelOp)]


Op = Union[AddOp, DelOp, BatchOp]


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split()


def _fmt_edge(tail, head, weight: float) -> str:
    return " ".join(
        [str(len(tail)), *map(str, tail), str(len(head)), *map(str, head), repr(float(weight))]
    )


def _parse_edge(tokens: list[str], lineno: int) -> tuple[list[int], list[int], float]:
    try:
        pos = 0
        nt = int(tokens[pos])
        tail = [int(t) for t in tokens[pos + 1 : pos + 1 + nt]]
        pos += 1 + nt
        nh = int(tokens[pos])
        head = [int(h) for h in tokens[pos + 1 : pos + 1 + nh]]
        pos += 1 + nh
        weight = float(tokens[pos])
    except (IndexError, ValueError) as exc:
        raise FormatError(f"malformed edge: {exc}", lineno) from None
    if len(tail) != nt or len(head) != nh:
        raise FormatError("edge is truncated", lineno)
    if pos + 1 != len(tokens):
        raise FormatError("trailing tokens after weight", lineno)
    if nt < 1:
        raise FormatError("empty tail", lineno)
    if nh < 1:
        raise FormatError("empty head", lineno)
    return tail, head, weight


def dumps_dhg(H: Hypergraph) -> str:
    """Serialise; edges are written in id order and renumbered implicitly."""
    lines = [f"dhg 1 {H.n}"]
    lines.extend(_fmt_edge(e.tail, e.head, e.weight) for e in H)
    return "\n".join(lines) + "\n"


def loads_dhg(text: str) -> Hypergraph:
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise FormatError("missing 'dhg 1 <n>' header") from None
    if len(header) != 3 or header[0] != "dhg" or header[1] != "1":
        raise FormatError("expected header 'dhg 1 <n>'", lineno)
    try:
        n = int(header[2])
    except ValueError:
        raise FormatError(f"bad vertex count {header[2]!r}", lineno) from None
    if n < 1:
        raise FormatError("vertex count must be >= 1", lineno)
    edges = []
    for lineno, tokens in lines:
        tail, head, weight = _parse_edge(tokens, lineno)
        try:
            e = Hyperedge(len(edges), tail, head, weight)
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from None
        if e.tail[-1] >= n or e.head[-1] >= n:
            raise FormatError(f"vertex out of range [0, {n})", lineno)
        edges.append(e)
    return Hypergraph(n, edges)


def read_dhg(path: str | os.PathLike) -> Hypergraph:
    with open(path, encoding="utf-8") as fh:
        return loads_dhg(fh.read())


def write_dhg(H: Hypergraph, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_dhg(H))


def _parse_op(tokens: list[str], lineno: int) -> Union[AddOp, DelOp]:
    kind = tokens[0]
    if kind == "add":
        tail, head, weight = _parse_edge(tokens[1:], lineno)
        if not (weight > 0 and weight != float("inf")):
            raise FormatError(f"edge weight must be positive and finite, got {weight!r}", lineno)
        return AddOp(tuple(tail), tuple(head), weight)
    if kind == "del":
        if len(tokens) != 2:
            raise FormatError("expected 'del <edge-id>'", lineno)
        try:
            eid = int(tokens[1])
        except ValueError:
            raise FormatError(f"bad edge id {tokens[1]!r}", lineno) from None
        if eid < 0:
            raise FormatError("edge id must be non-negative", lineno)
        return DelOp(eid)
    raise FormatError(f"unknown operation {kind!r}", lineno)


def loads_dhu(text: str) -> list[Op]:
    ops: list[Op] = []
    lines = _content_lines(text)
    for lineno, tokens in lines:
        if tokens[0] == "batch":
            if len(tokens) != 2:
                raise FormatError("expected 'batch <count>'", lineno)
            try:
                count = int(tokens[1])
            except ValueError:
                raise FormatError(f"bad batch count {tokens[1]!r}", lineno) from None
            if count < 0:
                raise FormatError("batch count must be non-negative", lineno)
            group = []
            for _ in range(count):
                try:
                    sub_lineno, sub = next(lines)
                except StopIteration:
                    raise FormatError(f"batch of {count} ends early", lineno) from None
                if sub[0] == "batch":
                    raise FormatError("nested batch", sub_lineno)
                group.append(_parse_op(sub, sub_lineno))
            ops.append(BatchOp(tuple(group)))
        else:
            ops.append(_parse_op(tokens, lineno))
    return ops


def dumps_dhu(ops: Iterable[Op]) -> str:
    out = []

    def one(op):
        if isinstance(op, AddOp):
            return "add " + _fmt_edge(op.tail, op.head, op.weight)
        return f"del {op.edge_id}"

    for op in ops:
        if isinstance(op, BatchOp):
            out.append(f"batch {len(op.ops)}")
            out.extend(one(o) for o in op.ops)
        else:
            out.append(one(op))
    return "\n".join(out) + ("\n" if out else "")


def read_dhu(path: str | os.PathLike) -> list[Op]:
    with open(path, encoding="utf-8") as fh:
        return loads_dhu(fh.read())
