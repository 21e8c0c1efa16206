"""Cover every vertex: a two-cycle certificate plus small patches on the leftover.

Any 2-colouring of the k-sets inside a 2(k-ell)-set contains a monochromatic
two-edge ell-cycle when ell < k/2, so the leftover of a theorem certificate can
be carved into such patches, with a final residue of k-ell vertices counted as
a degenerate cycle.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .chains import Certificate, DegenerateCycle, EllCycle, assemble_cycle, make_certificate
from .core import Colour, ColouringOracle, mask_of
from .partition import partition_theorem_a, partition_theorem_b


class CoverError(ValueError):
    """A patch was needed but cannot exist (ell = k/2)."""


def find_mono_two_edge_cycle(oracle: ColouringOracle, vertices: Iterable[int]) -> tuple[EllCycle, Colour]:
    """Monochromatic two-edge ell-cycle spanning exactly ``vertices``.

    Edges e, f with e | f == L and |e & f| == 2*ell are searched exhaustively;
    only k-subsets of L are ever queried.
    """
    p = oracle.params
    k, ell, s = p.k, p.ell, p.s
    given = list(vertices)
    L = tuple(sorted(set(given)))
    if 2 * ell == k:
        raise CoverError("two-edge patches do not exist for ell = k/2")
    if len(L) != len(given) or len(L) != 2 * s:
        raise ValueError(f"need exactly {2 * s} distinct vertices, got {given}")
    if L[0] < 1 or L[-1] > p.n:
        raise ValueError("vertex out of range")
    lmask = mask_of(L)
    for e in combinations(L, k):
        ce = oracle.colour_of_mask(mask_of(e))
        rest = tuple(v for v in L if v not in e)
        for shared in combinations(e, 2 * ell):
            fmask = mask_of(rest) | mask_of(shared)
            assert fmask & ~lmask == 0
            if oracle.colour_of_mask(fmask) != ce:
                continue
            only_e = [v for v in e if v not in shared]
            vseq = [*shared[:ell], *only_e, *shared[ell:], *rest]
            cycle = assemble_cycle(p, vseq)
            assert set(cycle.edge(1)) == set(e) and set(cycle.edge(2)) == set(rest) | set(shared)
            return cycle, ce
    raise AssertionError(f"no monochromatic two-edge cycle on {L}; contradicts the Ramsey bound")


def cover_all_vertices(oracle: ColouringOracle, variant: str = "a", check: bool = False) -> Certificate:
    """Certificate covering [n] with at most 4 (variant a) or 3 (variant b) items."""
    if variant not in ("a", "b"):
        raise ValueError("variant must be 'a' or 'b'")
    p = oracle.params
    engine = partition_theorem_a if variant == "a" else partition_theorem_b
    base = engine(oracle, check=check)
    leftover = sorted(base.uncovered)
    s = p.s
    if len(leftover) % s:
        raise AssertionError("leftover is not a multiple of k-ell")
    if len(leftover) >= 2 * s and 2 * p.ell == p.k:
        raise CoverError(f"leftover of {len(leftover)} vertices needs two-edge patches, impossible for ell = k/2")
    items = [(it.cycle, it.colour) for it in base.items]
    patches = 0
    while len(leftover) >= 2 * s:
        chunk, leftover = leftover[:2 * s], leftover[2 * s:]
        items.append(find_mono_two_edge_cycle(oracle, chunk))
        patches += 1
    if leftover:
        items.append((DegenerateCycle(p, frozenset(leftover)), None))
    cert = make_certificate(p, items, f"cover_{variant}", {**base.stats, "patches": patches})
    assert not cert.uncovered
    assert len(cert.items) <= (4 if variant == "a" else 3)
    return cert

