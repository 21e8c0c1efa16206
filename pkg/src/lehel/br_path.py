"""Blue-red ell-path covering all but k - 2*ell vertices.

The search starts from the edge ``(1, ..., k)`` and grows the path one edge at
a time using scratch vertices taken from the uncovered set.  Every step is one
of three moves, so the number of rounds is bounded by n/(k-ell).
"""
from __future__ import annotations

from .chains import BlueRedPath, EllPath, assemble_path, colour_profile
from .core import ColouringOracle, Params, ParamsError


class ScratchSets:
    """Disjoint uncovered sets Z0 (size ell) and Z1, Z2 (size k - 2*ell)."""

    __slots__ = ("z0", "z1", "z2")

    def __init__(self, params: Params, free: list[int]):
        ell, r = params.ell, params.interior
        if len(free) < ell + 2 * r:
            raise ValueError("not enough uncovered vertices for scratch sets")
        self.z0 = tuple(free[:ell])
        self.z1 = tuple(free[ell:ell + r])
        self.z2 = tuple(free[ell + r:ell + 2 * r])


def _uncovered(params: Params, vseq) -> list[int]:
    used = set(vseq)
    return [v for v in range(1, params.n + 1) if v not in used]


def find_blue_red_path(oracle: ColouringOracle, check: bool = False,
                       trace: list | None = None) -> BlueRedPath:
    """Blue-red ell-path on exactly n - k + 2*ell vertices.

    With ``check`` every intermediate path is re-validated; ``trace`` (if a
    list) receives the name of each move applied.
    """
    params = oracle.params
    if params.n < params.k:
        raise ParamsError("need n >= k for at least one edge")
    k, ell, s = params.k, params.ell, params.s
    target = params.n - k + 2 * ell

    vseq = list(range(1, k + 1))
    m0, lead = 1, oracle.colour(vseq)
    tail = None  # colour of edges m0+1..m, None while monochromatic
    rounds = 0
    while len(vseq) < target:
        rounds += 1
        if rounds > params.n0:
            raise AssertionError("blue-red path search exceeded its round bound")
        z = ScratchSets(params, _uncovered(params, vseq))
        m = (len(vseq) - ell) // s
        first, last = vseq[:ell], vseq[-ell:]
        e_front = (*z.z0, *z.z1, *first)
        e_back = (*last, *z.z1, *z.z0)
        c_front = oracle.colour(e_front)
        if c_front == lead:
            vseq = [*z.z0, *z.z1, *vseq]
            m0 += 1
            move = "prepend"
        else:
            c_back = oracle.colour(e_back)
            if tail is None:
                vseq = [*vseq, *z.z1, *z.z0]
                if c_back == lead:
                    m0 += 1
                else:
                    tail = c_back
                move = "append"
            elif c_back == tail:
                vseq = [*vseq, *z.z1, *z.z0]
                move = "append"
            else:
                # front edge has the tail colour, back edge has the lead colour
                pivot = vseq[m0 * s:m0 * s + ell]
                e_mid = (*pivot, *z.z2, *z.z0)
                lead_part = vseq[:m0 * s + ell]          # edges 1..m0
                tail_part = vseq[m0 * s:]                 # edges m0+1..m
                if oracle.colour(e_mid) == tail:
                    # reversed tail, e_mid, e_front, lead edges 1..m0-1
                    body = [*tail_part[::-1], *z.z2, *z.z0, *z.z1,
                            *lead_part[:(m0 - 1) * s + ell]]
                    new_m0 = m - m0 + 2
                    lead, tail = tail, lead
                    move = "rebuild_front"
                else:
                    # lead edges 1..m0, e_mid, e_back, reversed tail minus e_{m0+1}
                    body = [*lead_part, *z.z2, *z.z0, *z.z1,
                            *vseq[(m0 + 1) * s:][::-1]]
                    new_m0 = m0 + 2
                    move = "rebuild_back"
                vseq = body
                m0 = new_m0
                new_m = (len(vseq) - ell) // s
                if m0 >= new_m:
                    m0, tail = new_m, None
        if trace is not None:
            trace.append(move)
        if check:
            _check_state(oracle, vseq, m0, lead)
    path = assemble_path(params, vseq)
    result = BlueRedPath(path, m0, lead)
    if check:
        _check_state(oracle, vseq, m0, lead)
        assert len(path.vseq) % s == ell % s
    return result


def _check_state(oracle: ColouringOracle, vseq, m0: int, lead) -> None:
    path = assemble_path(oracle.params, vseq)
    prof = colour_profile(oracle, path)
    if m0 == path.m:
        assert prof.kind == "monochromatic" and prof.lead == lead, prof
    else:
        assert prof.kind == "blue_red" and prof.m0 == m0 and prof.lead == lead, (prof, m0, lead)


def path_uncovered(params: Params, path: EllPath) -> list[int]:
    return _uncovered(params, path.vseq)
