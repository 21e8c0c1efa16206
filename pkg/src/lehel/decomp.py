"""Monochromatic ell-cycle plus a disjoint ell-path of the other colour."""
from __future__ import annotations

from dataclasses import dataclass

from .br_path import find_blue_red_path
from .chains import EllCycle, EllPath, assemble_cycle, assemble_path, is_monochromatic
from .core import Colour, ColouringOracle


@dataclass(frozen=True)
class CyclePath:
    cycle: EllCycle
    cycle_colour: Colour
    path: EllPath
    path_colour: Colour | None
    rounds: int = 0


def decompose_cycle_path(oracle: ColouringOracle, check: bool = False) -> CyclePath:
    """Local search over blue-red paths maximizing the longer monochromatic section.

    Requires n/(k-ell) >= 3.  With n/(k-ell) == 4 the two-edge closing branch
    yields a cycle on 2(k-ell) vertices and an empty path.
    """
    params = oracle.params
    params.require_n0(3)
    k, ell, s = params.k, params.ell, params.s
    brp = find_blue_red_path(oracle, check=check)
    vseq = list(brp.path.vseq)
    m0, lead = brp.m0, brp.lead
    m = brp.path.m
    if m0 < m and m - m0 > m0:
        vseq.reverse()
        m0, lead = m - m0, lead.swap()

    rounds = 0
    while m0 < m:
        rounds += 1
        if rounds > params.n0:
            raise AssertionError("cycle+path local search exceeded its round bound")
        used = set(vseq)
        z = [v for v in range(1, params.n + 1) if v not in used]
        pivot = vseq[m0 * s:m0 * s + ell]      # e_{m0}^+
        end = vseq[-ell:]                       # e_m^+
        e = (*pivot, *z, *end)
        if oracle.colour(e) == lead:
            # (P minus e_{m0+1}) plus e: lead section grows by one
            vseq = [*vseq[:m0 * s + ell], *z, *vseq[(m0 + 1) * s:][::-1]]
            m0 += 1
            continue
        # minority section closes into a cycle through Z
        cycle = assemble_cycle(params, [*vseq[m0 * s:], *z])
        path = assemble_path(params, vseq[:(m0 - 1) * s + ell] if m0 > 1 else ())
        out = CyclePath(cycle, lead.swap(), path, lead if path.m else None, rounds)
        if check:
            _check(oracle, out)
        return out

    # monochromatic path of colour ``lead``
    used = set(vseq)
    z = [v for v in range(1, params.n + 1) if v not in used]
    e1_plus = vseq[s:s + ell]
    e1_int = vseq[ell:s]
    em_plus = vseq[-ell:]
    close_int = (*e1_plus, *e1_int, *em_plus)
    close_z = (*e1_plus, *z, *em_plus)
    if oracle.colour(close_int) == lead:
        cycle = assemble_cycle(params, [*vseq[s:], *e1_int])
        out = CyclePath(cycle, lead, EllPath(params, ()), None, rounds)
    elif oracle.colour(close_z) == lead:
        cycle = assemble_cycle(params, [*vseq[s:], *z])
        out = CyclePath(cycle, lead, EllPath(params, ()), None, rounds)
    else:
        two = assemble_cycle(params, [*e1_plus, *e1_int, *em_plus, *z])
        rest = vseq[2 * s:(m - 1) * s + ell] if m >= 4 else ()
        path = assemble_path(params, rest)
        out = CyclePath(two, lead.swap(), path, lead if path.m else None, rounds)
    if check:
        _check(oracle, out)
    return out


def _check(oracle: ColouringOracle, out: CyclePath) -> None:
    p = oracle.params
    n, k, ell = p.n, p.k, p.ell
    assert not (out.cycle.vertex_set & out.path.vertex_set)
    assert out.cycle.m >= 2
    assert is_monochromatic(oracle, out.cycle, out.cycle_colour)
    if out.path.m:
        assert out.path_colour == out.cycle_colour.swap()
        assert is_monochromatic(oracle, out.path, out.path_colour)
        total = len(out.cycle.vseq) + len(out.path.vseq)
        assert total in (n - k + 2 * ell, n - 2 * k + 3 * ell), total
    else:
        # n/(k-ell) == 4 with the two-edge closing branch covers 2(k-ell)
        assert len(out.cycle.vseq) in (n - k + ell, n - 2 * p.s), len(out.cycle.vseq)
