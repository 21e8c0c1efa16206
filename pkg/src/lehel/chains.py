"""ell-paths, ell-cycles, degenerate cycles and certificates.

Paths and cycles are stored as flat vertex sequences; edge ``i`` (1-based) is
the window of ``k`` vertices starting at position ``(i-1)*(k-ell)``, taken
cyclically for cycles.  Consecutive windows therefore share exactly ``ell``
vertices by construction.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import Colour, ColouringOracle, Params, mask_of


class ChainError(ValueError):
    """Raised when a vertex sequence does not realize a valid path or cycle."""


def _check_vertices(params: Params, vseq: Sequence[int]) -> None:
    if len(set(vseq)) != len(vseq):
        seen = set()
        dup = next(v for v in vseq if v in seen or seen.add(v))
        raise ChainError(f"duplicate vertex {dup}")
    for v in vseq:
        if not 1 <= v <= params.n:
            raise ChainError(f"vertex {v} out of range 1..{params.n}")


@dataclass(frozen=True)
class EllPath:
    params: Params
    vseq: tuple[int, ...]

    @property
    def m(self) -> int:
        if not self.vseq:
            return 0
        return (len(self.vseq) - self.params.ell) // self.params.s

    def __len__(self) -> int:
        return self.m

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vseq)

    def edge(self, i: int) -> tuple[int, ...]:
        if not 1 <= i <= self.m:
            raise IndexError(f"edge index {i} outside 1..{self.m}")
        start = (i - 1) * self.params.s
        return self.vseq[start:start + self.params.k]

    def edges(self) -> list[tuple[int, ...]]:
        return [self.edge(i) for i in range(1, self.m + 1)]

    def first(self) -> tuple[int, ...]:
        """f_1^- : the first ell vertices."""
        return self.vseq[:self.params.ell]

    def last(self) -> tuple[int, ...]:
        """f_m^+ : the last ell vertices."""
        return self.vseq[len(self.vseq) - self.params.ell:]

    def drop_first(self, count: int = 1) -> "EllPath":
        if count >= self.m:
            return EllPath(self.params, ())
        return EllPath(self.params, self.vseq[count * self.params.s:])

    def drop_last(self, count: int = 1) -> "EllPath":
        if count >= self.m:
            return EllPath(self.params, ())
        return EllPath(self.params, self.vseq[:len(self.vseq) - count * self.params.s])


@dataclass(frozen=True)
class EllCycle:
    params: Params
    vseq: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.vseq) // self.params.s

    def __len__(self) -> int:
        return self.m

    @property
    def collapsed(self) -> bool:
        """Two-edge walk whose windows coincide (only possible when 2*ell == k)."""
        return self.m == 2 and 2 * self.params.ell == self.params.k

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vseq)

    def edge(self, i: int) -> tuple[int, ...]:
        """Edge ``i``, indices taken modulo m (so edge 0 is edge m)."""
        s, k, L = self.params.s, self.params.k, len(self.vseq)
        start = ((i - 1) % self.m) * s
        end = start + k
        if end <= L:
            return self.vseq[start:end]
        return self.vseq[start:] + self.vseq[:end - L]

    def edges(self) -> list[tuple[int, ...]]:
        return [self.edge(i) for i in range(1, self.m + 1)]

    def block(self, i: int) -> tuple[int, ...]:
        """e_i minus e_i^+ : the k-ell vertices owned by edge i."""
        s = self.params.s
        start = ((i - 1) % self.m) * s
        return self.vseq[start:start + s]


@dataclass(frozen=True)
class DegenerateCycle:
    params: Params
    vertices: frozenset[int]

    @property
    def vertex_set(self) -> frozenset[int]:
        return self.vertices

    @property
    def vseq(self) -> tuple[int, ...]:
        return tuple(sorted(self.vertices))


@dataclass(frozen=True)
class BlueRedPath:
    path: EllPath
    m0: int
    lead: Colour | None

    @property
    def m(self) -> int:
        return self.path.m

    @property
    def monochromatic(self) -> bool:
        return self.m0 == self.path.m


@dataclass(frozen=True)
class Profile:
    kind: str  # "monochromatic" | "blue_red" | "invalid"
    m0: int = 0
    lead: Colour | None = None


@dataclass(frozen=True)
class CertItem:
    cycle: EllCycle | DegenerateCycle
    colour: Colour | None

    @property
    def kind(self) -> str:
        return "degenerate" if isinstance(self.cycle, DegenerateCycle) else "cycle"


@dataclass(frozen=True)
class Certificate:
    params: Params
    items: tuple[CertItem, ...]
    uncovered: frozenset[int]
    variant: str | None = None
    stats: dict = field(default_factory=dict, compare=False, hash=False)

    def to_dict(self) -> dict:
        out = {
            "params": self.params.as_dict(),
            "items": [
                {
                    "kind": it.kind,
                    "vseq": list(it.cycle.vseq),
                    "colour": it.colour.label if it.colour is not None else None,
                }
                for it in self.items
            ],
            "uncovered": sorted(self.uncovered),
        }
        if self.variant is not None:
            out["variant"] = self.variant
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "Certificate":
        """Parse without validating structure; the verifier re-assembles every item."""
        p = data["params"]
        params = Params(int(p["n"]), int(p["k"]), int(p["ell"]))
        items = []
        for raw in data["items"]:
            colour = Colour.parse(raw["colour"]) if raw.get("colour") is not None else None
            vseq = tuple(int(v) for v in raw["vseq"])
            if raw["kind"] == "degenerate":
                items.append(CertItem(DegenerateCycle(params, frozenset(vseq)), colour))
            elif raw["kind"] == "cycle":
                items.append(CertItem(EllCycle(params, vseq), colour))
            else:
                raise ValueError(f"unknown item kind {raw['kind']!r}")
        return cls(params, tuple(items), frozenset(int(v) for v in data["uncovered"]),
                   data.get("variant"))

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))

    @property
    def cycles(self) -> list[CertItem]:
        return [it for it in self.items if it.kind == "cycle"]


def make_certificate(params: Params, items: Iterable[tuple], variant: str | None = None,
                     stats: dict | None = None) -> Certificate:
    """Certificate from (cycle, colour) pairs; the uncovered set is computed."""
    items = tuple(CertItem(c, col) for c, col in items)
    covered = set()
    for it in items:
        covered |= it.cycle.vertex_set
    uncovered = frozenset(range(1, params.n + 1)) - covered
    return Certificate(params, items, uncovered, variant, dict(stats or {}))


# ----------------------------------------------------------------------------
# segment accessors

def segment(edge_view: Sequence[int], which, params: Params) -> frozenset[int]:
    """Positional pieces of an ordered edge: ``minus``, ``plus``, ``interior`` or an index set."""
    k, ell = params.k, params.ell
    if len(edge_view) != k:
        raise ValueError(f"edge view must have {k} vertices, got {len(edge_view)}")
    if which == "minus":
        return frozenset(edge_view[:ell])
    if which == "plus":
        return frozenset(edge_view[k - ell:])
    if which == "interior":
        return frozenset(edge_view[ell:k - ell])
    idx = set(which)
    if not idx <= set(range(1, k + 1)):
        raise ValueError("index set must be a subset of 1..k")
    return frozenset(edge_view[i - 1] for i in sorted(idx))


# ----------------------------------------------------------------------------
# validating assemblers

def assemble_path(params: Params, vseq: Iterable[int]) -> EllPath:
    vseq = tuple(vseq)
    if vseq:
        if len(vseq) < params.k or (len(vseq) - params.ell) % params.s:
            raise ChainError(
                f"path length {len(vseq)} is not ell mod (k-ell) with at least one edge")
        _check_vertices(params, vseq)
    return EllPath(params, vseq)


def assemble_cycle(params: Params, vseq: Iterable[int]) -> EllCycle:
    vseq = tuple(vseq)
    if len(vseq) % params.s:
        raise ChainError(f"cycle length {len(vseq)} is not a multiple of k-ell={params.s}")
    if len(vseq) // params.s < 2:
        raise ChainError("a cycle needs at least two edges")
    _check_vertices(params, vseq)
    return EllCycle(params, vseq)


def splice(cycle: EllCycle, remove: Iterable[int], inserts: Sequence[Sequence[int]]) -> EllCycle:
    """Replace a cyclically contiguous run of edges by a chain of inserted edges.

    ``remove`` holds 1-based edge indices forming one cyclic run; ``inserts``
    are ordered k-tuples whose first ell vertices continue from the retained
    path's end and whose last ell vertices lead back into its start.
    """
    params = cycle.params
    ell, s, m = params.ell, params.s, cycle.m
    remove = sorted({(i - 1) % m + 1 for i in remove})
    if not remove:
        if inserts:
            raise ChainError("inserts require a removed run to replace")
        return cycle
    # locate the run start: a removed edge whose predecessor is retained
    rset = set(remove)
    if len(rset) == m:
        raise ChainError("cannot remove every edge")
    starts = [i for i in remove if ((i - 2) % m + 1) not in rset]
    if len(starts) != 1:
        raise ChainError("removed edges must form one cyclic run")
    first = starts[0]
    after = (first - 1 + len(remove)) % m + 1
    # retained path: edges after, after+1, ..., first-1
    rot = rotate(cycle, after - 1).vseq
    kept = rot[:(m - len(remove)) * s + ell]
    for t in inserts:
        if len(t) != params.k:
            raise ChainError(f"inserted edge must have {params.k} vertices")
    prev_end = set(kept[-ell:])
    for t in inserts:
        if set(t[:ell]) != prev_end:
            raise ChainError("inserted edge does not overlap its predecessor in exactly ell vertices")
        prev_end = set(t[-ell:])
    if prev_end != set(kept[:ell]):
        raise ChainError("inserted chain does not close onto the retained path")
    body = list(kept)
    for j, t in enumerate(inserts):
        tail = t[ell:] if j < len(inserts) - 1 else t[ell:params.k - ell]
        body.extend(tail)
    new = assemble_cycle(params, body)
    # keep the original anchor vertex in front when it sits on a window start
    anchor = cycle.vseq[0]
    if anchor in new.vertex_set:
        pos = new.vseq.index(anchor)
        if pos % s == 0:
            new = EllCycle(params, new.vseq[pos:] + new.vseq[:pos])
    return new


def join_segments(params: Params, parts: Iterable[Sequence[int]], cyclic: bool):
    """Concatenate vertex runs and validate the result as a path or cycle."""
    vseq = [v for part in parts for v in part]
    return assemble_cycle(params, vseq) if cyclic else assemble_path(params, vseq)


def reverse(path: EllPath) -> EllPath:
    return EllPath(path.params, path.vseq[::-1])


def rotate(cycle: EllCycle, by: int) -> EllCycle:
    """Shift edge numbering so that old edge ``by+1`` becomes edge 1."""
    cut = (by % cycle.m) * cycle.params.s
    return EllCycle(cycle.params, cycle.vseq[cut:] + cycle.vseq[:cut])


def reverse_cycle(cycle: EllCycle) -> EllCycle:
    """Traverse the cycle backwards; the edge set is unchanged."""
    r = cycle.vseq[::-1]
    cut = (len(r) - cycle.params.ell) % len(r)
    return EllCycle(cycle.params, r[cut:] + r[:cut])


def colour_profile(oracle: ColouringOracle, path: EllPath) -> Profile:
    if path.m == 0:
        return Profile("monochromatic", 0, None)
    colours = [oracle.colour(e) for e in path.edges()]
    changes = [i for i in range(1, len(colours)) if colours[i] != colours[i - 1]]
    if not changes:
        return Profile("monochromatic", path.m, colours[0])
    if len(changes) == 1:
        return Profile("blue_red", changes[0], colours[0])
    return Profile("invalid")


def is_monochromatic(oracle: ColouringOracle, structure, colour: Colour) -> bool:
    return all(oracle.colour_of_mask(mask_of(e)) == colour for e in structure.edges())
