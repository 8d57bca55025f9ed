"""Deciding classicality of a virtual knot, and checking witnesses for it.

The search works on a simplified exterior: the canonical exterior is
reduced once per code (``working_exterior``) and again after every
destabilization.  Witness vectors therefore live on these reduced
triangulations, and the verifier replays exactly the same deterministic
reductions before reading each vector.
"""
from __future__ import annotations

import hashlib
import json
import time
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Optional, Sequence, Union

from .exterior import NoReducibleEdge, build_canonical_exterior, build_canonical_surface, one_vertex_reduction
from .gauss import OrientedGaussCode, parse_gauss_code, serialize_gauss_code
from .normal import (
    InadmissibleVector,
    chi_functional,
    classify_surface,
    enumerate_vertex_solutions,
    matching_system,
    min_integer_multiple,
    verify_vertex_witness,
)
from .simplify import reduce_triangulation
from .surgery import destabilize, split_along_sphere
from .tricomplex import BoundaryLabel, Triangulation, label_genus

S0 = BoundaryLabel.SurfaceCopy0
S1 = BoundaryLabel.SurfaceCopy1


class Verdict(Enum):
    Classical = "yes"
    NotClassical = "no"
    Unknown = "unknown"


class Action(Enum):
    GenusZero = "GenusZero"
    SphereSplit = "SphereSplit"
    ClassicalizationFound = "ClassicalizationFound"
    Destabilized = "Destabilized"
    NoSurfaceFound = "NoSurfaceFound"


class BudgetExceeded(RuntimeError):
    """A tetrahedron or wall-clock limit stopped the search.  The partial
    trace is attached so callers can still report it."""

    def __init__(self, reason: str, trace: Optional["RecognitionTrace"] = None):
        super().__init__(reason)
        self.reason = reason
        self.trace = trace


class MalformedWitness(ValueError):
    pass


@dataclass(frozen=True)
class Budget:
    max_tets: Optional[int] = None
    timeout: Optional[float] = None


Vector = tuple[int, ...]
Witness = list[Vector]


def vector_digest(v: Sequence[int]) -> str:
    return hashlib.sha256(" ".join(map(str, v)).encode()).hexdigest()[:16]


@dataclass
class TraceStep:
    iteration: int
    genus_before: int
    genus_after: int
    action: str
    digest: Optional[str]
    tets_before: int
    tets_after: int


@dataclass
class RecognitionTrace:
    code: str
    steps: list[TraceStep] = field(default_factory=list)
    witness: Witness = field(default_factory=list)
    verdict: Optional[str] = None
    note: Optional[str] = None

    def record(self, iteration, g0, g1, action: Action, vector, n0, n1) -> None:
        digest = vector_digest(vector) if vector is not None else None
        self.steps.append(TraceStep(iteration, g0, g1, action.value, digest, n0, n1))
        if vector is not None:
            self.witness.append(tuple(vector))

    def to_lines(self) -> list[str]:
        out = [f"code {self.code!r}"]
        for s in self.steps:
            out.append(
                f"iter={s.iteration} action={s.action} genus={s.genus_before}->{s.genus_after} "
                f"tets={s.tets_before}->{s.tets_after} digest={s.digest or '-'}"
            )
        out.append(f"verdict {self.verdict}" + (f" ({self.note})" if self.note else ""))
        return out

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "verdict": self.verdict,
            "note": self.note,
            "steps": [asdict(s) for s in self.steps],
            "witness": [list(v) for v in self.witness],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def _as_code(code: Union[str, OrientedGaussCode]) -> OrientedGaussCode:
    return parse_gauss_code(code, require_knot=True) if isinstance(code, str) else code


def supporting_genus(code: OrientedGaussCode) -> int:
    if code.c == 0:
        return 0
    return build_canonical_surface(code)[1]


_EXTERIORS: dict[str, Triangulation] = {}


def working_exterior(code: OrientedGaussCode, *, deadline: Optional[float] = None) -> Triangulation:
    """The reduced canonical exterior that witnesses refer to.

    Reduction is deterministic, so the verifier rebuilds the same
    triangulation the recognizer searched.  Results are cached per code."""
    text = serialize_gauss_code(code)
    if text not in _EXTERIORS:
        _EXTERIORS[text] = reduce_triangulation(build_canonical_exterior(code), deadline=deadline)
    return _EXTERIORS[text]


def clear_exterior_cache() -> None:
    _EXTERIORS.clear()


def _reduce(tri: Triangulation, deadline: Optional[float] = None) -> Triangulation:
    return reduce_triangulation(tri, deadline=deadline) if tri.n else tri


def _genus(tri: Triangulation) -> int:
    return label_genus(tri, S0) if tri.n else 0


def _one_vertex(tri: Triangulation) -> Triangulation:
    for which in (S0, S1):
        try:
            tri = one_vertex_reduction(tri, which)
        except NoReducibleEdge:
            pass
    return tri


def _has_surface_copy(tri: Triangulation) -> bool:
    return any(lab in (S0, S1) for lab in tri.labels.values())


def scan(tri: Triangulation, *, deadline: Optional[float] = None) -> list[tuple[Vector, str]]:
    """Primitive integer vertex solutions of ``tri`` with their class.

    Surfaces of negative Euler characteristic are tagged without running
    the full classifier since none of the searched classes can have one."""
    system = matching_system(tri)
    chi = chi_functional(tri)
    found = []
    for x in enumerate_vertex_solutions(system, admissible_only=True, method="lifted", deadline=deadline):
        _, v = min_integer_multiple(x)
        if chi(v) < 0:
            found.append((v, "Other"))
        else:
            found.append((v, classify_surface(tri, v, system, chi).tag))
    return found


def recognize(code: Union[str, OrientedGaussCode], budget: Optional[Budget] = None
              ) -> tuple[Verdict, RecognitionTrace]:
    """Decide whether ``code`` represents a classical knot.

    Raises BudgetExceeded (carrying the partial trace) when a limit in
    ``budget`` is hit; that outcome is never reported as "no"."""
    code = _as_code(code)
    budget = budget or Budget()
    deadline = time.monotonic() + budget.timeout if budget.timeout is not None else None
    trace = RecognitionTrace(serialize_gauss_code(code))

    def stop(reason: str):
        trace.verdict = Verdict.Unknown.value
        trace.note = reason
        return BudgetExceeded(reason, trace)

    def finish(verdict: Verdict):
        trace.verdict = verdict.value
        return verdict, trace

    if supporting_genus(code) == 0:
        trace.record(0, 0, 0, Action.GenusZero, None, 0, 0)
        return finish(Verdict.Classical)

    try:
        tri = working_exterior(code, deadline=deadline)
        iteration = 0
        while True:
            g = _genus(tri)
            if g == 0:
                trace.record(iteration, 0, 0, Action.GenusZero, None, tri.n, tri.n)
                return finish(Verdict.Classical)
            if budget.max_tets is not None and tri.n > budget.max_tets:
                raise stop(f"tetrahedron limit: {tri.n} > {budget.max_tets}")

            found = scan(tri, deadline=deadline)
            for v, tag in found:
                if tag != "Sphere2":
                    continue
                out = split_along_sphere(tri, v)
                if not _has_surface_copy(out):
                    trace.record(iteration, g, 0, Action.SphereSplit, v, tri.n, out.n)
                    return finish(Verdict.Classical)

            reduced = _one_vertex(tri)
            if reduced is not tri:
                found = scan(reduced, deadline=deadline)

            for v, tag in found:
                if tag == "ClassicalizationAnnulus":
                    trace.record(iteration, g, 0, Action.ClassicalizationFound, v, reduced.n, reduced.n)
                    return finish(Verdict.Classical)

            best = None
            for v, tag in found:
                if tag != "VerticalAnnulus":
                    continue
                out = destabilize(reduced, v)
                if _genus(out) < g and (best is None or (out.n, v) < (best[1].n, best[0])):
                    best = (v, out)
            if best is None:
                trace.record(iteration, g, g, Action.NoSurfaceFound, None, reduced.n, reduced.n)
                return finish(Verdict.NotClassical)

            v, out = best
            trace.record(iteration, g, _genus(out), Action.Destabilized, v, reduced.n, out.n)
            tri = _reduce(out, deadline)
            iteration += 1
    except TimeoutError:
        raise stop("wall-clock limit")


# -- witnesses -----------------------------------------------------------------------


def format_witness(witness: Sequence[Sequence[int]]) -> str:
    lines = [str(len(witness))]
    for v in witness:
        if len(v) % 7:
            raise MalformedWitness("vector length is not a multiple of 7")
        lines.append(f"n={len(v) // 7}")
        lines.append(" ".join(map(str, v)))
    return "\n".join(lines) + "\n"


def parse_witness(text: str) -> Witness:
    tokens = text.split()
    if not tokens:
        raise MalformedWitness("empty witness file")
    try:
        m = int(tokens[0])
    except ValueError:
        raise MalformedWitness(f"bad vector count {tokens[0]!r}") from None
    if m < 0:
        raise MalformedWitness("negative vector count")
    pos = 1
    out: Witness = []
    for i in range(m):
        if pos >= len(tokens) or not tokens[pos].startswith("n="):
            raise MalformedWitness(f"block {i}: missing n=<tets> header")
        try:
            n = int(tokens[pos][2:])
        except ValueError:
            raise MalformedWitness(f"block {i}: bad header {tokens[pos]!r}") from None
        if n < 0:
            raise MalformedWitness(f"block {i}: negative tetrahedron count")
        pos += 1
        chunk = tokens[pos:pos + 7 * n]
        if len(chunk) < 7 * n:
            raise MalformedWitness(f"block {i}: expected {7 * n} integers, found {len(chunk)}")
        try:
            out.append(tuple(int(x) for x in chunk))
        except ValueError:
            raise MalformedWitness(f"block {i}: non-integer entry") from None
        pos += 7 * n
    if pos != len(tokens):
        raise MalformedWitness("trailing data after the last block")
    return out


def replay_witness(code: Union[str, OrientedGaussCode], witness: Sequence[Sequence[int]]) -> bool:
    """The verifier proper; raises MalformedWitness on a length mismatch."""
    code = _as_code(code)
    if supporting_genus(code) == 0 and not witness:
        return True
    if code.c == 0:
        raise MalformedWitness("the empty code has no exterior to read vectors against")
    tri = working_exterior(code)
    for i, x in enumerate(witness):
        x = tuple(x)
        if any(not isinstance(e, int) for e in x):
            raise MalformedWitness(f"vector {i}: non-integer entry")
        if tri.n == 0:
            raise MalformedWitness(f"vector {i}: the triangulation is already empty")
        if len(x) == 7 * tri.n and verify_vertex_witness(matching_system(tri), x) \
                and classify_surface(tri, x).tag == "Sphere2":
            tri = split_along_sphere(tri, x)
            continue
        reduced = _one_vertex(tri)
        if len(x) != 7 * reduced.n:
            raise MalformedWitness(f"vector {i}: length {len(x)} does not match {reduced.n} tetrahedra")
        if not verify_vertex_witness(matching_system(reduced), x):
            return False
        try:
            tag = classify_surface(reduced, x).tag
        except InadmissibleVector:
            return False
        if tag == "ClassicalizationAnnulus":
            return True
        if tag != "VerticalAnnulus":
            return False
        tri = _reduce(destabilize(reduced, x))
    return _genus(tri) == 0 and (tri.n == 0 or label_genus(tri, S1) == 0)


def verify_witness(code: Union[str, OrientedGaussCode], witness: Sequence[Sequence[int]]) -> bool:
    try:
        return replay_witness(code, witness)
    except MalformedWitness:
        return False
