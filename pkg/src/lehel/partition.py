"""Two monochromatic ell-cycles of different colours covering almost everything.

The engine keeps a monochromatic cycle ``C`` (edges e_1..e_mc) and a disjoint
path ``P`` of the other colour (edges f_1..f_mp) whose union covers a fixed
number of vertices.  Every branch of the case analysis either returns a
certificate or replaces (C, P) by a pair with a strictly longer cycle, so the
loop runs at most n/(k-ell) times.

Terminology used below ("blue" = colour of C, "red" = colour of P):

* block(i): e_i minus e_i^+, the k-ell vertices owned by edge i.  A cycle is
  the concatenation of its blocks, and any sequence of distinct blocks
  b_0, b_1, ... is an ell-cycle whose edges are block(b_j) + minus(b_{j+1}).
* g_i = block(i) + minus(i+3) and h_i = block(i) + minus(i+4) are such jump
  edges; if they are blue they shortcut C, if red they route a red cycle.
* filler t: one of the scratch sets Z_t drawn from uncovered vertices, or
  (variant b) the interior of the edge the connector attaches to.
* v(t, i) = f_mp^+ + filler + e_i^-,  u(t, i) = f_1^- + filler + e_i^-,
  w(t) = f_1^- + Z_t + f_mp^+.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .chains import (Certificate, EllCycle, EllPath, assemble_cycle, assemble_path,
                     is_monochromatic, make_certificate)
from .core import Colour, ColouringOracle, ParamsError, mask_of
from .decomp import decompose_cycle_path

INTERIOR = "I"


class EngineFailure(RuntimeError):
    """An internal step produced a structure that failed validation."""


class Stuck(EngineFailure):
    """No move of the case analysis applies to the current state."""


def block_route(mc: int, start: int, succ: dict, end: int) -> list[int]:
    """Blocks visited from ``start`` until ``end`` (exclusive), stepping by ``succ`` or +3 mod mc."""
    out: list[int] = []
    b, end = (start - 1) % mc + 1, (end - 1) % mc + 1
    while b != end:
        if b in out:
            raise EngineFailure("block route does not reach its end")
        out.append(b)
        b = (succ.get(b, b + 3) - 1) % mc + 1
    return out


@dataclass
class Done:
    items: list  # [(EllCycle, Colour)]
    route: str


@dataclass
class EngineState:
    cycle: tuple[int, ...]
    colour: Colour
    path: tuple[int, ...]
    scratch: list = field(default_factory=list)

    @property
    def path_colour(self) -> Colour:
        return self.colour.swap()


def bound_for(params, variant: str) -> int:
    return (4 if variant == "a" else 2) * params.s


def trim_path(state: EngineState, target_covered: int, params) -> EngineState:
    """Drop edges from the far end of P until C and P cover ``target_covered`` vertices."""
    covered = len(state.cycle) + len(state.path)
    diff = covered - target_covered
    if state.path and diff == len(state.path):
        # the last edge takes its ell shared vertices with it
        return EngineState(state.cycle, state.colour, (), state.scratch)
    if diff < 0 or diff % params.s:
        raise ValueError(f"cannot trim from {covered} to {target_covered} by whole edges")
    drop = diff // params.s
    if drop == 0:
        return state
    path = EllPath(params, state.path).drop_last(drop).vseq
    return EngineState(state.cycle, state.colour, path, state.scratch)


class _Run:
    def __init__(self, oracle: ColouringOracle, variant: str, check: bool):
        self.oracle = oracle
        self.p = oracle.params
        self.variant = variant
        self.check = check
        self.bound = bound_for(self.p, variant)
        self.improvements = 0
        self.iterations = 0
        self.route = ""
        self.min_claim1_gap = None

    # -- colour helpers ---------------------------------------------------
    def col(self, *parts) -> Colour:
        return self.oracle.colour_of_mask(mask_of(v for part in parts for v in part))

    # -- structure accessors on the current state --------------------------
    def load(self, st: EngineState):
        p = self.p
        self.st = st
        self.cyc = st.cycle
        self.blue = st.colour
        self.red = st.colour.swap()
        self.path = st.path
        self.mc = len(self.cyc) // p.s
        self.mp = (len(self.path) - p.ell) // p.s if self.path else 0
        used = set(self.cyc) | set(self.path)
        free = [v for v in range(1, p.n + 1) if v not in used]
        r = p.interior
        count = 3 if self.variant == "a" else 2
        self.free = free
        self.Z = [tuple(free[j * r:(j + 1) * r]) for j in range(count)]
        self.zid = list(range(count))  # renaming of scratch sets
        self.f1m = self.path[:p.ell]
        self.fmp = self.path[len(self.path) - p.ell:]

    def idx(self, i: int) -> int:
        return (i - 1) % self.mc + 1

    def block(self, i: int) -> tuple[int, ...]:
        s = self.p.s
        start = (self.idx(i) - 1) * s
        return self.cyc[start:start + s]

    def minus(self, i: int) -> tuple[int, ...]:
        return self.block(i)[:self.p.ell]

    def interior(self, i: int) -> tuple[int, ...]:
        return self.block(i)[self.p.ell:]

    def z(self, t: int) -> tuple[int, ...]:
        return self.Z[self.zid[t]]

    def filler(self, t, i: int) -> tuple[int, ...]:
        return self.interior(i) if t == INTERIOR else self.z(t)

    def fillers(self) -> list:
        ts = list(range(len(self.Z)))
        return ts + [INTERIOR] if self.variant == "b" else ts

    def u(self, t, i) -> Colour:
        return self.col(self.f1m, self.filler(t, i), self.minus(i))

    def v(self, t, i) -> Colour:
        return self.col(self.fmp, self.filler(t, i), self.minus(i))

    def w(self, t) -> Colour:
        return self.col(self.f1m, self.z(t), self.fmp)

    # -- state transitions --------------------------------------------------
    def rotate(self, i: int):
        """Renumber C so that edge i becomes edge 1."""
        cut = (self.idx(i) - 1) * self.p.s
        self.cyc = self.cyc[cut:] + self.cyc[:cut]

    def reverse_path(self):
        self.path = self.path[::-1]
        self.f1m, self.fmp = self.path[:self.p.ell], self.path[len(self.path) - self.p.ell:]

    def swap_z(self, a: int, b: int):
        self.zid[a], self.zid[b] = self.zid[b], self.zid[a]

    def path_without(self, first: int, last: int) -> tuple[int, ...]:
        """P minus its first ``first`` and last ``last`` edges (empty when nothing remains)."""
        if first + last >= self.mp:
            return ()
        s = self.p.s
        return self.path[first * s:len(self.path) - last * s]

    def blocks_path(self, start: int, count: int) -> tuple[int, ...]:
        """Sub-path of C made of ``count`` edges starting at edge ``start``."""
        if count <= 0:
            return ()
        out = []
        for j in range(count):
            out.extend(self.block(start + j))
        out.extend(self.minus(start + count))
        return tuple(out)

    def improve(self, cycle, colour: Colour, path, why: str) -> EngineState:
        new_mc = len(cycle) // self.p.s
        if new_mc <= self.mc:
            raise EngineFailure(f"{why}: cycle did not grow ({self.mc} -> {new_mc})")
        c = assemble_cycle(self.p, cycle)
        pth = assemble_path(self.p, path)
        if self.check:
            if not is_monochromatic(self.oracle, c, colour):
                raise EngineFailure(f"{why}: new cycle is not monochromatic")
            if pth.m and not is_monochromatic(self.oracle, pth, colour.swap()):
                raise EngineFailure(f"{why}: new path is not monochromatic")
            if c.vertex_set & pth.vertex_set:
                raise EngineFailure(f"{why}: cycle and path intersect")
        self.improvements += 1
        self.route += f"+{why}"
        return EngineState(tuple(cycle), colour, tuple(path))

    def done(self, items, why: str) -> Done:
        built = []
        for vseq, colour in items:
            c = assemble_cycle(self.p, vseq)
            if not is_monochromatic(self.oracle, c, colour):
                raise EngineFailure(f"{why}: cycle declared {colour.label} is not monochromatic")
            built.append((c, colour))
        return Done(built, why)

    def red_close(self, parts) -> tuple:
        """Red cycle P + parts (parts lead from f_mp^+ back to f_1^-)."""
        return tuple(self.path) + tuple(v for part in parts for v in part)

    # -- moves ---------------------------------------------------------------
    def insert_v(self, i: int, t, t2) -> EngineState:
        """v(t,i), v(t2,i+1) blue: route C through f_mp^+ between e_i^- and e_{i+1}^-."""
        parts = []
        for j in range(1, self.mc + 1):
            if j == self.idx(i):
                parts += [self.minus(i), self.filler(t, i), self.fmp, self.z(t2)]
            else:
                parts.append(self.block(j))
        cyc = tuple(v for part in parts for v in part)
        return self.improve(cyc, self.blue, self.path_without(0, 1), "vi")

    def insert_u(self, i: int, t, t2) -> EngineState:
        parts = []
        for j in range(1, self.mc + 1):
            if j == self.idx(i):
                parts += [self.minus(i), self.filler(t, i), self.f1m, self.z(t2)]
            else:
                parts.append(self.block(j))
        cyc = tuple(v for part in parts for v in part)
        return self.improve(cyc, self.blue, self.path_without(1, 0), "ui")

    def insert_both(self, i: int, t_u, t_w, t_v, first: str) -> EngineState:
        """Replace the interior of e_i by a detour through both ends of P.

        ``first == "u"``: e_i^-, filler, f_1^-, Z, f_mp^+, Z, e_{i+1}^- (edges u, w, v)
        ``first == "v"``: e_i^-, filler, f_mp^+, Z, f_1^-, Z, e_{i+1}^- (edges v, w, u)
        """
        ends = (self.f1m, self.fmp) if first == "u" else (self.fmp, self.f1m)
        parts = []
        for j in range(1, self.mc + 1):
            if j == self.idx(i):
                parts += [self.minus(i), self.filler(t_u, i), ends[0], self.z(t_w), ends[1],
                          self.z(t_v)]
            else:
                parts.append(self.block(j))
        cyc = tuple(v for part in parts for v in part)
        return self.improve(cyc, self.blue, self.path_without(1, 1), "uwv")

    def scan_pairs(self):
        """Both of v(t,i), v(t',i+1) (or u) blue gives a longer cycle."""
        zs = list(range(len(self.Z)))
        for i in range(1, self.mc + 1):
            for t in self.fillers():
                for t2 in zs:
                    if t2 == t:
                        continue
                    if self.v(t, i) == self.blue and self.v(t2, i + 1) == self.blue:
                        return self.insert_v(i, t, t2)
                    if self.u(t, i) == self.blue and self.u(t2, i + 1) == self.blue:
                        return self.insert_u(i, t, t2)
        return None

    def rename_u_red(self):
        """Rotate C and rename scratch sets so that u(0, 1) is red."""
        for i in range(1, self.mc + 1):
            for t in range(len(self.Z)):
                if self.u(t, i) == self.red:
                    self.rotate(i)
                    if t:
                        self.swap_z(0, t)
                    return True
        return False

    def claim_long_cycle(self):
        """Cycle has fewer than mp+2 edges: every branch lengthens the cycle."""
        if not self.rename_u_red():
            raise EngineFailure("no red u-connector although no pair move applies")
        tb = 1 if self.variant == "a" else INTERIOR   # filler of v at e_1
        tc = 2 if self.variant == "a" else 1          # filler of v at e_2 / of w
        mc = self.mc
        if self.v(tb, 1) == self.red:
            red = self.red_close([self.filler(tb, 1), self.minus(1), self.z(0)])
            return self.improve(red, self.red, self.blocks_path(2, mc - 2), "claim1a")
        if self.v(tc, 2) == self.blue:
            return self.insert_v(1, tb, tc)
        if self.u(0, 2) == self.red:
            red = self.red_close([self.z(tc), self.minus(2), self.z(0)])
            return self.improve(red, self.red, self.blocks_path(3, mc - 2), "claim1b")
        # v(tb,1), w(tc), u(0,2) blue
        parts = []
        for j in range(1, mc + 1):
            if j == 1:
                parts += [self.minus(1), self.filler(tb, 1), self.fmp, self.z(tc), self.f1m,
                          self.z(0)]
            else:
                parts.append(self.block(j))
        cyc = tuple(v for part in parts for v in part)
        return self.improve(cyc, self.blue, self.path_without(1, 1), "claim1c")

    def shortcut(self, i: int, d: int) -> tuple[int, ...]:
        """C with edges e_i..e_{i+d} replaced by block(i) + minus(i+d+1)."""
        parts = [self.block(i)]
        for j in range(i + d + 1, i + self.mc):
            parts.append(self.block(j))
        return tuple(v for part in parts for v in part)

    def claim_jumps(self):
        """Blue g_i (or h_i when mc > 4) either finishes or lengthens the cycle."""
        spans = [2]
        if self.variant == "a" and self.mc > 4:
            spans.append(3)
        for d in spans:
            for i in range(1, self.mc + 1):
                if self.col(self.block(i), self.minus(i + d + 1)) != self.blue:
                    continue
                out = self._jump_branch(i, d)
                if out is not None:
                    return out
        return None

    def _jump_branch(self, i: int, d: int):
        zs = self.zid[:]
        short = self.shortcut(i, d)
        t3 = 2 if self.variant == "a" else INTERIOR
        if self.u(0, i + 1) == self.red and self.v(1, i + 1) == self.red:
            red = self.red_close([self.z(1), self.minus(i + 1), self.z(0)])
            return self._finish_pair(short, red, f"jump{d}-uv")
        if self.u(0, i + 1) == self.red:
            # mirror P and swap Z_1, Z_2 so that u(0, i+1) is blue
            self.reverse_path()
            self.swap_z(0, 1)
        if self.u(1, i + 2) == self.blue:
            out = self.insert_u(i + 1, 0, 1)
            return out
        if self.v(t3, i + 2) == self.red:
            red = self.red_close([self.filler(t3, i + 2), self.minus(i + 2), self.z(1)])
            return self._finish_pair(short, red, f"jump{d}-uv2")
        if t3 == INTERIOR:
            self.zid = zs
            return None
        # u(0,i+1), w(1), v(2,i+2) blue
        return self.insert_both(i + 1, 0, 1, 2, "u")

    def _finish_pair(self, blue_cycle, red_cycle, why):
        covered = len(blue_cycle) + len(red_cycle)
        if self.p.n - covered > self.bound:
            return None
        return self.done([(blue_cycle, self.blue), (red_cycle, self.red)], why)

    # -- final case analysis (variant a) ------------------------------------
    def route_cycle(self, start: int, succ: dict, end: int, t_in, t_out):
        """Red cycle: P, v(t_in, start), blocks along succ up to ``end``, u(t_out, end)."""
        parts = [self.z(t_in)]
        parts += [self.block(b) for b in block_route(self.mc, start, succ, end)]
        parts += [self.minus(end), self.filler(t_out, end)]
        return self.red_close(parts)

    def cases(self):
        mc = self.mc
        if not self.rename_u_red():
            raise EngineFailure("no red u-connector at the case analysis")
        # Z roles: index 0 -> Z_1, 1 -> Z_2, 2 -> Z_3
        v24 = self.v(1, 4) == self.red
        if v24:
            if mc % 3:
                red = self.route_cycle(4, {}, 1, 1, 0)
                return self.done([(red, self.red)], "case1")
            succ = {4: 8, 2: 6, 3: 7}
            red = self.route_cycle(4, succ, 1, 1, 0)
            return self.done([(red, self.red)], "case2")
        if mc == 4:
            # v(1,4) blue forces v(2,3) red; route 3 -> 2 -> 1 along g_3, g_2
            if self.v(2, 3) == self.blue:
                return self.insert_v(3, 2, 1)
            red = self.route_cycle(3, {}, 1, 2, 0)
            return self.done([(red, self.red)], "case5")
        if self.v(2, 5) == self.blue:
            return self.insert_v(4, 1, 2)
        if mc % 3 != 1:
            red = self.route_cycle(5, {2: 6, 3: 7}, 1, 2, 0)
            return self.done([(red, self.red)], "case3")
        if mc % 2:
            succ = {b: b + 4 for b in range(1, mc + 1)}
            red = self.route_cycle(5, succ, 1, 2, 0)
            return self.done([(red, self.red)], "case4-odd")
        red = self.route_cycle(5, {5: 9, 2: 6, 6: 10, 3: 7, 7: 11}, 1, 2, 0)
        return self.done([(red, self.red)], "case4-even")

    # -- generic route finisher (variant b endgame, fallback) ----------------
    def route_search(self, node_budget: int = 20000):
        """Search red cycles P + connector + jump route + connector, C kept or shortcut."""
        p, mc = self.p, self.mc
        target = p.n - self.bound
        options = [(tuple(self.cyc), frozenset(range(1, mc + 1)))]
        for d in (1, 2, 3):
            if mc - d < 2:
                break
            for i in range(1, mc + 1):
                if self.col(self.block(i), self.minus(i + d + 1)) == self.blue:
                    dropped = frozenset(self.idx(i + j) for j in range(1, d + 1))
                    options.append((self.shortcut(i, d),
                                    frozenset(range(1, mc + 1)) - dropped))
        options.append(((), frozenset()))
        budget = [node_budget]
        for blue_cyc, kept in options:
            avail = [b for b in range(1, mc + 1) if b not in kept]
            base = len(blue_cyc) + len(self.path)
            for orient in (0, 1):
                if orient:
                    self.reverse_path()
                found = self._route_dfs(avail, base, target, budget)
                if orient:
                    self.reverse_path()
                if found is not None:
                    red, why = found
                    items = [(red, self.red)]
                    if blue_cyc:
                        items.insert(0, (blue_cyc, self.blue))
                    return self.done(items, why)
                if budget[0] <= 0:
                    return None
        return None

    def _route_dfs(self, avail, base, target, budget):
        p = self.p
        s, ell = p.s, p.ell
        zs = list(range(len(self.Z)))
        avail_set = set(avail)
        jump_order = [3, 4] + [d for d in range(1, self.mc) if d not in (3, 4)]
        for t_in in zs:
            for b0 in avail:
                if self.v(t_in, b0) != self.red:
                    continue
                outs = [t for t in zs if t != t_in] + [INTERIOR]
                stack = [(b0, (b0,))]
                while stack:
                    budget[0] -= 1
                    if budget[0] <= 0:
                        return None
                    b, route = stack.pop()
                    nblocks = len(route)
                    # close at b: blocks before b full, b contributes minus(b) + filler
                    for t_out in outs:
                        covered = base + p.interior + (nblocks - 1) * s + (
                            s if t_out == INTERIOR else ell + p.interior)
                        if covered < target:
                            continue
                        if self.u(t_out, b) == self.red:
                            parts = [self.z(t_in)] + [self.block(x) for x in route[:-1]]
                            parts += [self.minus(b), self.filler(t_out, b)]
                            return self.red_close(parts), "route"
                    # prune: even taking all remaining blocks cannot reach the target
                    left = len(avail_set) - nblocks
                    best = base + p.interior + (nblocks + left) * s + p.interior
                    if best < target:
                        continue
                    for d in jump_order:
                        nxt = self.idx(b + d)
                        if nxt in avail_set and nxt not in route:
                            if self.col(self.block(b), self.minus(nxt)) == self.red:
                                stack.append((nxt, route + (nxt,)))
        return None

    # -- main loop -------------------------------------------------------------
    def step(self):
        """One pass: returns Done or a new EngineState."""
        p = self.p
        uncovered_by_cycle = p.n - len(self.cyc)
        if uncovered_by_cycle <= self.bound:
            return Done([(assemble_cycle(p, self.cyc), self.blue)], "cycle-alone")
        for t in range(len(self.Z)):
            if self.w(t) == self.red:
                red = self.red_close([self.z(t)])
                return self.done([(self.cyc, self.blue), (red, self.red)], "close-path")
        moved = self.scan_pairs()
        if moved is not None:
            return moved
        if self.mc < self.mp + 2:
            return self.claim_long_cycle()
        gap = self.mc - self.mp
        self.min_claim1_gap = gap if self.min_claim1_gap is None else min(self.min_claim1_gap, gap)
        if self.check:
            assert self.mc >= self.mp + 2, (self.mc, self.mp)
        if self.mc < 4:
            # only reachable with a one-edge path; the jump edges need m_c >= 4
            out = self.route_search()
            if out is not None:
                return out
            raise Stuck(f"cycle too short for the jump analysis (m_c={self.mc}, m_p={self.mp})")
        out = self.claim_jumps()
        if out is not None:
            return out
        if self.variant == "a":
            out = self.cases()
            if out is not None:
                return out
        out = self.route_search()
        if out is not None:
            return out
        raise Stuck("no finishing move found")


def _prepare(oracle: ColouringOracle, variant: str, check: bool):
    p = oracle.params
    bound = bound_for(p, variant)
    if p.n <= bound:
        return None, Done([], "trivial")
    cp = decompose_cycle_path(oracle, check=check)
    if not cp.path.m:
        return None, Done([(cp.cycle, cp.cycle_colour)], "lemma-cycle")
    target = p.n - 3 * p.k + 4 * p.ell if variant == "a" else p.n - 2 * p.k + 3 * p.ell
    st = EngineState(cp.cycle.vseq, cp.cycle_colour, cp.path.vseq)
    st = trim_path(st, target, p)
    return st, None


MAX_RESTARTS = 16


def _run_once(oracle: ColouringOracle, variant: str, check: bool):
    p = oracle.params
    st, early = _prepare(oracle, variant, check)
    run = _Run(oracle, variant, check)
    if early is None:
        run.load(st)
        while True:
            run.iterations += 1
            if run.iterations > p.n0 + 1:
                raise AssertionError("improvement loop exceeded n/(k-ell) rounds")
            out = run.step()
            if isinstance(out, Done):
                early = out
                break
            if check:
                _check_state(oracle, out, variant)
            run.load(out)
    return early, run


def _run(oracle: ColouringOracle, variant: str, check: bool = False) -> Certificate:
    """Run the engine; if it gets stuck, rerun on seeded vertex relabellings.

    A relabelled run explores a different (C, P) pair.  Its cycles are mapped
    back through the permutation, so the certificate refers to the original ids.
    """
    p = oracle.params
    if variant == "b" and 3 * p.ell > p.k:
        raise ParamsError("variant b requires ell <= k/3")
    restarts = 0
    try:
        early, run = _run_once(oracle, variant, check)
        items = early.items
    except Stuck:
        while True:
            restarts += 1
            if restarts > MAX_RESTARTS:
                raise
            perm = [0, *random.Random(restarts).sample(range(1, p.n + 1), p.n)]
            try:
                early, run = _run_once(oracle.relabelled(perm), variant, check)
            except Stuck:
                continue
            items = [(assemble_cycle(p, [perm[v] for v in c.vseq]), colour)
                     for c, colour in early.items]
            break
    stats = {"iterations": run.improvements, "queries": oracle.query_count,
             "route": (early.route + run.route), "restarts": restarts}
    if run.min_claim1_gap is not None:
        stats["min_claim1_gap"] = run.min_claim1_gap
    return make_certificate(p, items, variant, stats)


def _check_state(oracle, st: EngineState, variant: str) -> None:
    p = oracle.params
    c = assemble_cycle(p, st.cycle)
    path = assemble_path(p, st.path)
    assert not (c.vertex_set & path.vertex_set)
    assert is_monochromatic(oracle, c, st.colour)
    if path.m:
        assert is_monochromatic(oracle, path, st.colour.swap())
        target = p.n - 3 * p.k + 4 * p.ell if variant == "a" else p.n - 2 * p.k + 3 * p.ell
        assert len(c.vseq) + len(path.vseq) == target


def partition_theorem_a(oracle: ColouringOracle, check: bool = False) -> Certificate:
    """Two vertex-disjoint monochromatic cycles of distinct colours, at most 4(k-ell) uncovered."""
    return _run(oracle, "a", check)


def partition_theorem_b(oracle: ColouringOracle, check: bool = False) -> Certificate:
    """As :func:`partition_theorem_a` with at most 2(k-ell) uncovered; needs ell <= k/3."""
    return _run(oracle, "b", check)
