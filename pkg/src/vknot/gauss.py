"""Oriented Gauss codes for virtual knot diagrams.

A pass is written as three symbols: ``+`` or ``-`` (over or under), ``>`` or
``<`` (the crossed strand runs left-to-right or right-to-left as seen by the
traveller) and the crossing index.  Components are separated by ``;``.
Whitespace between tokens is ignored.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum


class GaussCodeError(ValueError):
    """Base class for rejected Gauss codes."""


class GaussSyntaxError(GaussCodeError):
    pass


class ConsistencyError(GaussCodeError):
    pass


class MultiComponentError(GaussCodeError):
    pass


class Side(Enum):
    LEFT_TO_RIGHT = ">"
    RIGHT_TO_LEFT = "<"


@dataclass(frozen=True)
class CrossingPass:
    over: bool
    side: Side
    crossing_id: int

    def __post_init__(self):
        if self.crossing_id < 1:
            raise ConsistencyError(f"crossing index must be positive, got {self.crossing_id}")

    def __str__(self) -> str:
        return ("+" if self.over else "-") + self.side.value + str(self.crossing_id)


@dataclass(frozen=True)
class OrientedGaussCode:
    components: tuple[tuple[CrossingPass, ...], ...]
    crossing_count: int
    # original index -> canonical index, only populated when renumbering happened
    renumbering: dict[int, int] = field(default_factory=dict, compare=False)

    @property
    def c(self) -> int:
        return self.crossing_count

    def passes(self) -> list[tuple[int, int, CrossingPass]]:
        """Flat list of (component, position, pass)."""
        return [(k, i, p) for k, comp in enumerate(self.components) for i, p in enumerate(comp)]

    def pass_positions(self) -> dict[int, dict[bool, tuple[int, int]]]:
        """crossing id -> {over flag: (component, position)}."""
        out: dict[int, dict[bool, tuple[int, int]]] = {}
        for k, i, p in self.passes():
            out.setdefault(p.crossing_id, {})[p.over] = (k, i)
        return out

    def is_knot(self) -> bool:
        return len(self.components) == 1

    def __str__(self) -> str:
        return serialize_gauss_code(self)


_TOKEN = re.compile(r"([+-])([<>])(\d+)")


def _tokenize_component(text: str) -> list[tuple[str, str, int]]:
    body = "".join(text.split())
    tokens = []
    pos = 0
    while pos < len(body):
        m = _TOKEN.match(body, pos)
        if m is None:
            raise GaussSyntaxError(f"bad token at {body[pos:pos + 8]!r}")
        tokens.append((m.group(1), m.group(2), int(m.group(3))))
        pos = m.end()
    return tokens


def parse_gauss_code(text: str, *, require_knot: bool = False) -> OrientedGaussCode:
    """Parse an oriented Gauss code.

    Crossing indices that do not form ``1..c`` are renumbered in order of
    first appearance; the mapping is kept in ``renumbering``.

    >>> parse_gauss_code("+>1-<2+>2-<1").c
    2
    """
    if not isinstance(text, str):
        raise GaussSyntaxError("Gauss code must be a string")
    raw = [_tokenize_component(part) for part in text.split(";")]
    if require_knot and len(raw) != 1:
        raise MultiComponentError(f"expected a knot, got {len(raw)} components")

    seen: dict[int, list[str]] = {}
    order: list[int] = []
    for comp in raw:
        for sign, _side, idx in comp:
            if idx < 1:
                raise ConsistencyError(f"crossing index must be positive, got {idx}")
            if idx not in seen:
                seen[idx] = []
                order.append(idx)
            seen[idx].append(sign)
    for idx, signs in seen.items():
        if len(signs) != 2:
            raise ConsistencyError(f"crossing {idx} appears {len(signs)} time(s)")
        if sorted(signs) != ["+", "-"]:
            kind = "over" if signs[0] == "+" else "under"
            raise ConsistencyError(f"crossing {idx} passed {kind} twice")

    if sorted(order) == list(range(1, len(order) + 1)):
        relabel = {i: i for i in order}
        mapping: dict[int, int] = {}
    else:
        relabel = {old: new for new, old in enumerate(order, start=1)}
        mapping = dict(relabel)

    comps = tuple(
        tuple(CrossingPass(sign == "+", Side(side), relabel[idx]) for sign, side, idx in comp)
        for comp in raw
    )
    return OrientedGaussCode(comps, len(order), mapping)


def serialize_gauss_code(code: OrientedGaussCode) -> str:
    return ";".join("".join(str(p) for p in comp) for comp in code.components)


def ribbon_genus(code: OrientedGaussCode) -> int:
    """Genus of the abstract (ribbon) surface of the diagram, capped off.

    Computed purely combinatorially from darts: each crossing is a vertex
    with four darts in counterclockwise order, arcs pair an outgoing dart
    with the next incoming one, and boundary circles are orbits of
    rotation-after-arc.  Used as an oracle independent of any triangulation.
    """
    c = code.c
    if c == 0:
        return 0
    # dart ids: 4*(x-1) + slot, slots ccw = 0:E 1:N 2:W 3:S
    over_pass_side = {}
    for _, _, p in code.passes():
        if p.over:
            over_pass_side[p.crossing_id] = p.side

    def dart(p: CrossingPass, outgoing: bool) -> int:
        base = 4 * (p.crossing_id - 1)
        if p.over:
            return base + (1 if outgoing else 3)
        ltr = over_pass_side[p.crossing_id] is Side.LEFT_TO_RIGHT
        # left-to-right under strand enters on W and leaves on E
        if ltr:
            return base + (0 if outgoing else 2)
        return base + (2 if outgoing else 0)

    alpha = [0] * (4 * c)
    for comp in code.components:
        m = len(comp)
        for i, p in enumerate(comp):
            a = dart(p, True)
            b = dart(comp[(i + 1) % m], False)
            alpha[a], alpha[b] = b, a

    def rot(d: int) -> int:
        return 4 * (d // 4) + (d % 4 + 1) % 4

    seen = [False] * (4 * c)
    faces = 0
    for d in range(4 * c):
        if seen[d]:
            continue
        faces += 1
        x = d
        while not seen[x]:
            seen[x] = True
            x = rot(alpha[x])
    components = _diagram_components(code)
    chi = c - 2 * c + faces
    return components - chi // 2


def _diagram_components(code: OrientedGaussCode) -> int:
    # connected components of the underlying 4-valent graph (plus empty circles)
    parent = list(range(len(code.components)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    where = {}
    for k, _, p in code.passes():
        if p.crossing_id in where:
            parent[find(k)] = find(where[p.crossing_id])
        else:
            where[p.crossing_id] = k
    return len({find(k) for k in range(len(code.components))})
