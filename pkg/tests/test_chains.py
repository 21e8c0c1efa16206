import json
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lehel.chains import (Certificate, ChainError, DegenerateCycle, EllCycle, EllPath,
                          assemble_cycle, assemble_path, colour_profile, is_monochromatic,
                          join_segments, make_certificate, reverse, reverse_cycle, rotate,
                          segment, splice)
from lehel.core import Colour, Params, make_colouring, oracle_from_bits, colex_rank

from conftest import params_st

P31 = Params(6, 3, 1)


def edge_sets(structure):
    return sorted(tuple(sorted(e)) for e in structure.edges())


def test_segment_examples():
    p = Params(9, 5, 2)
    assert segment((1, 2, 3, 4, 5), "minus", p) == {1, 2}
    assert segment((1, 2, 3, 4, 5), "plus", p) == {4, 5}
    assert segment((1, 2, 3, 4, 5), "interior", p) == {3}
    q = Params(9, 4, 1)
    assert segment((7, 3, 9, 2), {2, 3}, q) == {3, 9}
    with pytest.raises(ValueError):
        segment((1, 2, 3), "minus", p)
    with pytest.raises(ValueError):
        segment((7, 3, 9, 2), {5}, q)


def test_assemble_examples():
    path = assemble_path(P31, (1, 2, 3, 4, 5))
    assert path.m == 2 and path.edges() == [(1, 2, 3), (3, 4, 5)]
    cyc = assemble_cycle(P31, (1, 2, 3, 4, 5, 6))
    assert cyc.m == 3
    assert [set(e) for e in cyc.edges()] == [{1, 2, 3}, {3, 4, 5}, {5, 6, 1}]
    with pytest.raises(ChainError):
        assemble_path(P31, (1, 2, 2, 4, 5))
    with pytest.raises(ChainError):
        assemble_path(P31, (1, 2, 3, 4))
    with pytest.raises(ChainError):
        assemble_cycle(P31, (1, 2, 3, 4, 5))
    with pytest.raises(ChainError):
        assemble_cycle(P31, (1, 2))
    with pytest.raises(ChainError):
        assemble_cycle(P31, (1, 2, 3, 9))
    assert assemble_path(P31, ()).m == 0


def test_two_edge_cycles():
    p = Params(8, 3, 1)
    c = assemble_cycle(p, (1, 2, 3, 4))
    e, f = (set(x) for x in c.edges())
    assert len(e & f) == 2 and not c.collapsed
    q = Params(8, 4, 2)
    d = assemble_cycle(q, (1, 2, 3, 4))
    assert d.collapsed and set(d.edge(1)) == set(d.edge(2))


def test_splice_examples():
    cyc = assemble_cycle(P31, (1, 2, 3, 4, 5, 6))
    assert splice(cyc, [], []) == cyc
    p = Params(10, 3, 1)
    cyc9 = assemble_cycle(p, (1, 2, 3, 4, 5, 6))
    out = splice(cyc9, [2], [(3, 9, 5)])
    assert out.vseq == (1, 2, 3, 9, 5, 6)
    # one edge replaced by a longer detour (3, 7, 8) + (8, 9, 5)
    longer = splice(cyc9, [2], [(3, 7, 8), (8, 9, 5)])
    assert longer.m == 4 and longer.vertex_set == {1, 2, 3, 5, 6, 7, 8, 9}


def test_splice_errors():
    p = Params(12, 3, 1)
    cyc = assemble_cycle(p, tuple(range(1, 9)))
    with pytest.raises(ChainError):
        splice(cyc, [2], [(4, 9, 5)])
    with pytest.raises(ChainError):
        splice(cyc, [1, 3], [(1, 9, 3)])
    with pytest.raises(ChainError):
        splice(cyc, [1, 2, 3, 4], [])
    with pytest.raises(ChainError):
        splice(cyc, [2], [(3, 9)])
    with pytest.raises(ChainError):
        splice(cyc, [2], [(3, 2, 5)])


def test_splice_wraparound_run():
    p = Params(12, 3, 1)
    cyc = assemble_cycle(p, tuple(range(1, 9)))
    # edges 4 = (7, 8, 1) and 1 = (1, 2, 3) form one cyclic run
    out = splice(cyc, [4, 1], [(7, 9, 3)])
    assert edge_sets(out) == [(3, 4, 5), (3, 7, 9), (5, 6, 7)]


def test_reverse_and_rotate_examples():
    assert reverse(assemble_path(P31, (1, 2, 3, 4, 5))).vseq == (5, 4, 3, 2, 1)
    assert reverse(assemble_path(P31, ())).m == 0
    cyc = assemble_cycle(P31, (1, 2, 3, 4, 5, 6))
    assert rotate(cyc, 1).vseq == (3, 4, 5, 6, 1, 2)
    assert rotate(cyc, 3) == cyc


def test_colour_profile_examples():
    p = Params(8, 3, 1)
    path = assemble_path(p, (1, 2, 3, 4, 5, 6, 7))
    blue = make_colouring(p, {"kind": "constant", "colour": "blue"})
    assert colour_profile(blue, path).kind == "monochromatic"

    def with_colours(cols):
        bits = [0] * p.num_edges
        for e, c in zip(path.edges(), cols):
            bits[colex_rank(e, p)] = c
        return oracle_from_bits(p, bits)

    prof = colour_profile(with_colours([0, 0, 1]), path)
    assert (prof.kind, prof.m0, prof.lead) == ("blue_red", 2, Colour.BLUE)
    assert colour_profile(with_colours([0, 1, 0]), path).kind == "invalid"
    empty = colour_profile(blue, assemble_path(p, ()))
    assert empty.kind == "monochromatic" and empty.lead is None


def test_certificate_json_round_trip():
    p = Params(8, 3, 1)
    items = [(assemble_cycle(p, (1, 2, 3, 4)), Colour.RED),
             (DegenerateCycle(p, frozenset({5, 6})), None)]
    cert = make_certificate(p, items, "cover_a")
    assert cert.uncovered == {7, 8}
    data = json.loads(cert.to_json())
    assert data["items"][1] == {"kind": "degenerate", "vseq": [5, 6], "colour": None}
    assert data["params"] == {"n": 8, "k": 3, "ell": 1}
    assert Certificate.from_json(cert.to_json()) == cert
    with pytest.raises(ValueError):
        Certificate.from_dict({**data, "items": [{"kind": "blob", "vseq": [], "colour": None}]})


@st.composite
def cycle_st(draw):
    p = draw(params_st(min_n0=2, max_n0=8))
    m = draw(st.integers(2, p.n0))
    vseq = draw(st.permutations(range(1, p.n + 1)))[:m * p.s]
    return assemble_cycle(p, vseq)


@given(cycle_st(), st.integers(-20, 20))
def test_rotate_and_reverse_preserve_edges(cyc, by):
    assert edge_sets(rotate(cyc, by)) == edge_sets(cyc)
    assert rotate(rotate(cyc, by), -by) == cyc
    back = reverse_cycle(cyc)
    assert edge_sets(back) == edge_sets(cyc)
    assert reverse_cycle(back) == cyc


@given(params_st(max_n0=8), st.data())
def test_window_layout_property(p, data):
    m = data.draw(st.integers(1, max(1, (p.n - p.ell) // p.s)))
    if m * p.s + p.ell > p.n:
        return
    vseq = data.draw(st.permutations(range(1, p.n + 1)))[:m * p.s + p.ell]
    path = assemble_path(p, vseq)
    assert len(path.vseq) == path.m * p.s + p.ell
    edges = path.edges()
    for a, b in zip(edges, edges[1:]):
        assert a[-p.ell:] == b[:p.ell]
        assert len(set(a) & set(b)) == p.ell
    assert reverse(reverse(path)) == path


@given(st.lists(st.integers(0, 12), min_size=1, max_size=14))
def test_assemble_never_returns_invalid(raw):
    p = Params(12, 3, 1)
    for build in (assemble_path, assemble_cycle):
        try:
            out = build(p, raw)
        except ChainError:
            continue
        assert len(set(out.vseq)) == len(out.vseq)
        assert all(1 <= v <= 12 for v in out.vseq)
        assert all(len(set(e)) == 3 for e in out.edges())


@given(cycle_st(), st.integers(0, 2**32))
def test_profile_swap_symmetry(cyc, seed):
    p = cyc.params
    o = make_colouring(p, {"kind": "random", "seed": seed, "p_red": 0.5})
    path = assemble_path(p, cyc.vseq[:p.s + p.ell])
    a, b = colour_profile(o, path), colour_profile(o.swapped(), path)
    assert (a.kind, a.m0) == (b.kind, b.m0)
    assert a.lead == (b.lead.swap() if b.lead is not None else None)
    assert is_monochromatic(o, cyc, Colour.RED) == is_monochromatic(o.swapped(), cyc, Colour.BLUE)


def test_join_segments():
    assert join_segments(P31, [(1, 2), (3, 4, 5)], cyclic=False).m == 2
    assert join_segments(P31, [(1, 2), (3, 4), (5, 6)], cyclic=True).m == 3
    with pytest.raises(ChainError):
        join_segments(P31, [(1, 2), (3, 4)], cyclic=False)
