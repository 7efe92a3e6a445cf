"""Instance and solution files.

Text form (``#`` starts a comment, blank lines ignored)::

    subsetkconn-instance 1
    n 9
    k 2
    terminals 5 6 7 8
    root 0            # optional, rooted instances only
    edge 0 1 3        # u v cost, one line per edge
    purchased 0 1     # optional, edges already bought

The JSON form carries the same fields in one object with ``"format"`` and
``"version"`` keys. Costs are non-negative integers in both forms.

Solutions are either ``subsetkconn-solution 1`` followed by ``edge u v``
lines, or any JSON object with a ``"solution"`` list of ``[u, v]`` pairs
(the output of ``solve --format json`` qualifies).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .errors import InputError
from .graph import Edge, Graph, edge_key

INSTANCE_MAGIC = "subsetkconn-instance"
SOLUTION_MAGIC = "subsetkconn-solution"
VERSION = 1


class ParseError(InputError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class InstanceFile:
    n: int
    k: int
    terminals: list[int]
    edges: list[tuple[int, int, int]]
    purchased: list[Edge] = field(default_factory=list)
    root: int | None = None

    def graph(self) -> Graph:
        return Graph(self.n, self.edges)

    def to_instance(self):
        from .solver import Instance

        if self.root is not None:
            raise InputError("file describes a rooted instance")
        return Instance(self.graph(), tuple(self.terminals), self.k, frozenset(self.purchased))

    def to_rooted(self):
        from .reduction import RootedInstance

        if self.root is None:
            raise InputError("file has no root line")
        return RootedInstance(self.graph(), tuple(self.terminals), self.root, self.k, frozenset(self.purchased))

    def dumps_text(self) -> str:
        lines = [f"{INSTANCE_MAGIC} {VERSION}", f"n {self.n}", f"k {self.k}"]
        lines.append("terminals " + " ".join(map(str, self.terminals)))
        if self.root is not None:
            lines.append(f"root {self.root}")
        lines += [f"edge {u} {v} {c}" for u, v, c in self.edges]
        lines += [f"purchased {u} {v}" for u, v in self.purchased]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        d = {
            "format": INSTANCE_MAGIC,
            "version": VERSION,
            "n": self.n,
            "k": self.k,
            "terminals": list(self.terminals),
            "edges": [list(e) for e in self.edges],
            "purchased": [list(e) for e in self.purchased],
        }
        if self.root is not None:
            d["root"] = self.root
        return d

    def dumps_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True) + "\n"

    @classmethod
    def from_parts(cls, g: Graph, terminals: Iterable[int], k: int, purchased=(), root=None) -> "InstanceFile":
        edges = []
        for u, v, c in g.edges:
            if not isinstance(c, int):
                raise InputError("instance files store integer costs only")
            edges.append((u, v, c))
        return cls(g.n, k, sorted(set(terminals)), edges, sorted(edge_key(*e) for e in purchased), root)


def _ints(tokens: list[str], line: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", line) from None


def _validate(f: InstanceFile, where: dict[str, int]) -> InstanceFile:
    def err(msg, key):
        raise ParseError(msg, where.get(key))

    if f.n < 1:
        err("vertex count must be positive", "n")
    if f.k < 1:
        err("k must be at least 1", "k")
    seen: set[Edge] = set()
    for i, (u, v, c) in enumerate(f.edges):
        key = f"edge{i}"
        if not (0 <= u < f.n and 0 <= v < f.n):
            err(f"edge ({u}, {v}) has an endpoint outside 0..{f.n - 1}", key)
        if u == v:
            err(f"self-loop at {u}", key)
        if c < 0:
            err(f"negative cost {c}", key)
        e = edge_key(u, v)
        if e in seen:
            err(f"duplicate edge ({e[0]}, {e[1]})", key)
        seen.add(e)
    for t in f.terminals:
        if not 0 <= t < f.n:
            err(f"terminal {t} outside 0..{f.n - 1}", "terminals")
    if len(set(f.terminals)) != len(f.terminals):
        err("duplicate terminal", "terminals")
    for i, (u, v) in enumerate(f.purchased):
        if edge_key(u, v) not in seen:
            err(f"purchased edge ({u}, {v}) is not an edge of the instance", f"purchased{i}")
    if len({edge_key(*e) for e in f.purchased}) != len(f.purchased):
        err("duplicate purchased edge", "purchased")
    if f.root is not None and not 0 <= f.root < f.n:
        err(f"root {f.root} outside 0..{f.n - 1}", "root")
    f.purchased = [edge_key(*e) for e in f.purchased]
    return f


def _parse_text(text: str) -> InstanceFile:
    header = None
    fields: dict[str, object] = {}
    where: dict[str, int] = {}
    edges: list[tuple[int, int, int]] = []
    purchased: list[Edge] = []
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].split()
        if not body:
            continue
        if header is None:
            if body[0] != INSTANCE_MAGIC or len(body) != 2:
                raise ParseError(f"expected header '{INSTANCE_MAGIC} {VERSION}'", no)
            if body[1] != str(VERSION):
                raise ParseError(f"unsupported version {body[1]}", no)
            header = no
            continue
        key, args = body[0], body[1:]
        if key == "edge":
            if len(args) != 3:
                raise ParseError("edge needs 'u v cost'", no)
            where[f"edge{len(edges)}"] = no
            edges.append(tuple(_ints(args, no)))
        elif key == "purchased":
            if len(args) != 2:
                raise ParseError("purchased needs 'u v'", no)
            where[f"purchased{len(purchased)}"] = no
            purchased.append(tuple(_ints(args, no)))
        elif key in ("n", "k", "root"):
            if len(args) != 1:
                raise ParseError(f"{key} takes one integer", no)
            if key in fields:
                raise ParseError(f"repeated {key} line", no)
            fields[key] = _ints(args, no)[0]
            where[key] = no
        elif key == "terminals":
            if "terminals" in fields:
                raise ParseError("repeated terminals line", no)
            fields["terminals"] = _ints(args, no)
            where[key] = no
        else:
            raise ParseError(f"unknown keyword {key!r}", no)
    if header is None:
        raise ParseError("empty instance file")
    for req in ("n", "k", "terminals"):
        if req not in fields:
            raise ParseError(f"missing '{req}' line")
    f = InstanceFile(fields["n"], fields["k"], fields["terminals"], edges, purchased, fields.get("root"))
    return _validate(f, where)


def _parse_json(text: str) -> InstanceFile:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(d, dict) or d.get("format") != INSTANCE_MAGIC:
        raise ParseError(f"JSON instance needs \"format\": \"{INSTANCE_MAGIC}\"")
    if d.get("version") != VERSION:
        raise ParseError(f"unsupported version {d.get('version')!r}")
    try:
        f = InstanceFile(
            int(d["n"]),
            int(d["k"]),
            [int(t) for t in d["terminals"]],
            [tuple(int(x) for x in e) for e in d.get("edges", [])],
            [tuple(int(x) for x in e) for e in d.get("purchased", [])],
            None if d.get("root") is None else int(d["root"]),
        )
    except KeyError as exc:
        raise ParseError(f"missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad value: {exc}") from None
    if any(len(e) != 3 for e in f.edges) or any(len(e) != 2 for e in f.purchased):
        raise ParseError("edges are [u, v, cost] and purchased edges are [u, v]")
    return _validate(f, {})


def loads_instance(text: str) -> InstanceFile:
    """Parse either form; JSON is recognised by a leading ``{``."""
    if text.lstrip().startswith("{"):
        return _parse_json(text)
    return _parse_text(text)


def load_instance(path) -> InstanceFile:
    with open(path, encoding="utf-8") as fh:
        return loads_instance(fh.read())


def dumps_solution(edges: Iterable[Edge]) -> str:
    lines = [f"{SOLUTION_MAGIC} {VERSION}"]
    lines += [f"edge {u} {v}" for u, v in sorted(edge_key(*e) for e in edges)]
    return "\n".join(lines) + "\n"


def loads_solution(text: str) -> list[Edge]:
    if text.lstrip().startswith("{"):
        try:
            d = json.loads(text)
            return [edge_key(int(e[0]), int(e[1])) for e in d["solution"]]
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
        except (KeyError, TypeError, ValueError, IndexError):
            raise ParseError("JSON solution needs a \"solution\" list of [u, v] pairs") from None
    out: list[Edge] = []
    header = False
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].split()
        if not body:
            continue
        if not header:
            if body != [SOLUTION_MAGIC, str(VERSION)]:
                raise ParseError(f"expected header '{SOLUTION_MAGIC} {VERSION}'", no)
            header = True
            continue
        if body[0] != "edge" or len(body) != 3:
            raise ParseError("expected 'edge u v'", no)
        u, v = _ints(body[1:], no)
        out.append(edge_key(u, v))
    if not header:
        raise ParseError("empty solution file")
    return out


def load_solution(path) -> list[Edge]:
    with open(path, encoding="utf-8") as fh:
        return loads_solution(fh.read())
