"""Certificate verifier, brute-force ground truth and sweep harness.

The verifier only uses the validating assemblers from :mod:`lehel.chains` and
oracle queries; it never calls engine code.
"""
from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from multiprocessing import Pool
from pathlib import Path

from .chains import (Certificate, ChainError, DegenerateCycle, EllCycle, assemble_cycle,
                     make_certificate)
from .core import (Colour, ColouringOracle, Params, mask_of, oracle_from_int, save_colouring,
                   splitmix64)

log = logging.getLogger(__name__)

THEOREM_VARIANTS = ("a", "b", "pair")
COVER_LIMITS = {"cover_a": 4, "cover_b": 3}


class BudgetExceeded(RuntimeError):
    """The requested enumeration is larger than the configured budget."""


@dataclass
class Report:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def auto_bound(params: Params, variant: str | None) -> int:
    if variant == "a":
        return 4 * params.s
    if variant == "b":
        return 2 * params.s
    if variant in COVER_LIMITS:
        return 0
    return params.n


def verify_certificate(oracle: ColouringOracle, cert: Certificate, bound: int | str = "auto") -> Report:
    """Check a certificate against the oracle; violations are collected, never raised."""
    rep = Report()
    bad = rep.violations.append
    p = oracle.params
    if cert.params != p:
        bad(f"params: certificate params {cert.params} differ from oracle params {p}")
        return rep
    everything = set(range(1, p.n + 1))
    seen: set[int] = set()
    colours: list[Colour] = []
    for pos, item in enumerate(cert.items):
        shape = item.cycle
        if isinstance(shape, DegenerateCycle):
            verts = set(shape.vertices)
            if len(verts) != p.s:
                bad(f"structure: item {pos}: degenerate cycle has {len(verts)} vertices, expected {p.s}")
            if item.colour is not None:
                bad(f"structure: item {pos}: degenerate cycle carries a colour")
        else:
            try:
                cyc = assemble_cycle(p, shape.vseq)
            except (ChainError, ValueError) as exc:
                bad(f"structure: item {pos}: not a valid ell-cycle ({exc})")
                continue
            verts = set(cyc.vseq)
            if item.colour is None:
                bad(f"structure: item {pos}: cycle without a colour")
            else:
                colours.append(item.colour)
                for j, edge in enumerate(cyc.edges(), start=1):
                    if oracle.colour(edge) != item.colour:
                        bad(f"monochromatic: item {pos}: edge {j} {sorted(edge)} is not {item.colour.label}")
                        break
        if not verts <= everything:
            bad(f"partition: item {pos}: vertices outside 1..{p.n}")
        if verts & seen:
            bad(f"disjointness: item {pos} shares vertices {sorted(verts & seen)} with an earlier item")
        seen |= verts
    unc = set(cert.uncovered)
    if unc & seen:
        bad(f"partition: {sorted(unc & seen)} both covered and uncovered")
    if (unc | seen) != everything:
        bad(f"partition: {sorted(everything - unc - seen)} missing")
    if cert.variant in THEOREM_VARIANTS:
        if len(cert.items) > 2:
            bad(f"count: {len(cert.items)} items in a two-cycle certificate")
        if len(colours) != len(set(colours)):
            bad("colours: two cycles of the same colour")
    elif cert.variant in COVER_LIMITS and len(cert.items) > COVER_LIMITS[cert.variant]:
        bad(f"count: {len(cert.items)} items exceed the limit {COVER_LIMITS[cert.variant]}")
    limit = auto_bound(p, cert.variant) if bound == "auto" else int(bound)
    if len(unc) > limit:
        bad(f"bound: {len(unc)} uncovered vertices exceed the bound {limit}")
    return rep


# -- brute force ---------------------------------------------------------------

def enumerate_cycles(params: Params, oracle: ColouringOracle | None = None, budget: int | None = None):
    """Yield ``(vseq, colour)`` for every distinct ell-cycle (monochromatic ones if ``oracle``).

    A cycle is generated in canonical form: its smallest vertex sits in the
    first block, and within every shared part and every interior the vertices
    are increasing.  Remaining duplicates (reflections, the split of e & f in
    two-edge cycles) are removed by the cycle's edge set.  Without an oracle the
    colour is None.
    """
    n, k, ell, s = params.n, params.k, params.ell, params.s
    r = k - 2 * ell
    nodes = [0]
    for m in range(2, n // s + 1):
        seen: set[frozenset] = set()
        # group 2j is the shared part starting block j, group 2j+1 its interior
        sizes = [ell if g % 2 == 0 else r for g in range(2 * m)]
        for u0 in range(1, n + 1):
            pool0 = list(range(u0 + 1, n + 1))
            if len(pool0) + 1 < m * s:
                break
            for anchor in ([0, 1] if r else [0]):
                for out in _fill(params, oracle, sizes, u0, anchor, pool0, nodes, budget):
                    vseq, colour = out
                    edges = frozenset(mask_of(e) for e in EllCycle(params, vseq).edges())
                    if edges in seen:
                        continue
                    seen.add(edges)
                    yield vseq, colour


def _fill(params, oracle, sizes, u0, anchor, pool, nodes, budget):
    k, ell = params.k, params.ell
    ngroups = len(sizes)
    groups: list[tuple[int, ...]] = []

    def edge_of(j):
        # edge j = shared_j + interior_j + shared_{j+1}
        return (*groups[2 * j], *groups[2 * j + 1], *groups[(2 * j + 2) % ngroups])

    def rec(g, avail, colour):
        nodes[0] += 1
        if budget is not None and nodes[0] > budget:
            raise BudgetExceeded(f"cycle enumeration exceeded {budget} nodes")
        if g == ngroups:
            if oracle is not None:
                last = oracle.colour(edge_of(ngroups // 2 - 1))
                if last != colour:
                    return
            yield tuple(v for grp in groups for v in grp), colour
            return
        size = sizes[g]
        if g == anchor:
            choices = ((u0, *c) for c in combinations(avail, size - 1))
        else:
            choices = combinations(avail, size)
        for grp in choices:
            groups.append(grp)
            c2 = colour
            ok = True
            # edge j is complete once group 2j+2 is placed (except the wrap-around edge)
            if oracle is not None and g >= 2 and g % 2 == 0:
                c_e = oracle.colour(edge_of(g // 2 - 1))
                if colour is None:
                    c2 = c_e
                elif c_e != colour:
                    ok = False
            if ok:
                rest = [v for v in avail if v not in grp]
                yield from rec(g + 1, rest, c2)
            groups.pop()

    yield from rec(0, list(pool), None)


def count_cycles(params: Params, budget: int | None = None) -> Counter:
    """Number of distinct ell-cycles in the complete host, by number of edges."""
    out = Counter()
    for vseq, _ in enumerate_cycles(params, None, budget):
        out[len(vseq) // params.s] += 1
    return out


def brute_force_min_uncovered(oracle: ColouringOracle, budget: int = 2_000_000) -> tuple[int, Certificate]:
    """Exact minimum uncovered count over pairs of disjoint cycles of distinct colours.

    Either member may be absent or a degenerate (k-ell)-set.  Returns the
    minimum and a witness certificate (variant ``"pair"``).
    """
    p = oracle.params
    best_of: dict[tuple[int, Colour], tuple[int, ...]] = {}
    for vseq, colour in enumerate_cycles(p, oracle, budget):
        key = (mask_of(vseq), colour)
        best_of.setdefault(key, vseq)
    cands: list[tuple[int, object, object]] = [(0, None, None)]
    for (mask, colour), vseq in best_of.items():
        cands.append((mask, colour, vseq))
    for verts in combinations(range(1, p.n + 1), p.s):
        cands.append((mask_of(verts), "degenerate", verts))
    cands.sort(key=lambda c: -bin(c[0]).count("1"))
    best = (p.n + 1, None, None)
    for i, a in enumerate(cands):
        if p.n - 2 * bin(a[0]).count("1") >= best[0]:
            break  # later candidates are no larger, so no pair can improve
        for b in cands[i:]:
            if a[0] & b[0]:
                continue
            if isinstance(a[1], Colour) and a[1] == b[1]:
                continue
            unc = p.n - bin(a[0] | b[0]).count("1")
            if unc < best[0]:
                best = (unc, a, b)
                if unc == 0:
                    break
        if best[0] == 0:
            break
    items = []
    for c in best[1:]:
        if c is None or c[1] is None:
            continue
        if c[1] == "degenerate":
            items.append((DegenerateCycle(p, frozenset(c[2])), None))
        else:
            items.append((assemble_cycle(p, c[2]), c[1]))
    return best[0], make_certificate(p, items, "pair")


# -- sweeps --------------------------------------------------------------------

ENGINES = ("a", "b", "cover_a", "cover_b")


def run_engine(oracle: ColouringOracle, engine: str, check: bool = False) -> Certificate:
    from .full_cover import cover_all_vertices
    from .partition import partition_theorem_a, partition_theorem_b
    if engine == "a":
        return partition_theorem_a(oracle, check=check)
    if engine == "b":
        return partition_theorem_b(oracle, check=check)
    if engine in ("cover_a", "cover_b"):
        return cover_all_vertices(oracle, engine[-1], check=check)
    raise ValueError(f"unknown engine {engine!r}")


def random_instance_seed(seed: int, index: int) -> int:
    return splitmix64((splitmix64(seed) + index) & ((1 << 64) - 1))


@dataclass
class _Task:
    params: Params
    mode: str
    engine: str
    start: int
    stop: int
    seed: int
    p_red: float
    check: bool
    dump_dir: str | None


def _instance(task: _Task, i: int) -> ColouringOracle:
    if task.mode == "exhaustive":
        return oracle_from_int(task.params, i)
    return ColouringOracle(task.params, ("random", random_instance_seed(task.seed, i), task.p_red))


def _run_range(task: _Task) -> dict:
    summary = _empty_summary()
    for i in range(task.start, task.stop):
        oracle = _instance(task, i)
        summary["instances"] += 1
        try:
            cert = run_engine(oracle, task.engine, task.check)
        except Exception as exc:  # engine errors count as failures, with a dump
            summary["failures"] += 1
            _dump(task, i, oracle, None, repr(exc))
            continue
        rep = verify_certificate(oracle, cert)
        if not rep.ok:
            summary["failures"] += 1
            _dump(task, i, oracle, cert, "; ".join(rep.violations))
            continue
        unc = len(cert.uncovered)
        summary["max_uncovered"] = max(summary["max_uncovered"], unc)
        summary["histogram"][str(unc)] = summary["histogram"].get(str(unc), 0) + 1
        summary["max_iterations"] = max(summary["max_iterations"], cert.stats.get("iterations", 0))
        summary["max_queries"] = max(summary["max_queries"], cert.stats.get("queries", 0))
    return summary


def _dump(task: _Task, i: int, oracle, cert, why: str) -> None:
    log.error("instance %d failed: %s", i, why)
    if not task.dump_dir:
        return
    out = Path(task.dump_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_colouring(oracle.materialized(), out / f"fail_{i}.col")
    data = {"index": i, "engine": task.engine, "reason": why,
            "certificate": cert.to_dict() if cert is not None else None}
    (out / f"fail_{i}.json").write_text(json.dumps(data, indent=1))


def _empty_summary() -> dict:
    return {"instances": 0, "failures": 0, "max_uncovered": 0, "histogram": {},
            "max_iterations": 0, "max_queries": 0}


def merge_summaries(parts) -> dict:
    """Order-insensitive reduction of partial summaries."""
    out = _empty_summary()
    for part in parts:
        out["instances"] += part["instances"]
        out["failures"] += part["failures"]
        for key in ("max_uncovered", "max_iterations", "max_queries"):
            out[key] = max(out[key], part[key])
        for unc, cnt in part["histogram"].items():
            out["histogram"][unc] = out["histogram"].get(unc, 0) + cnt
    out["histogram"] = dict(sorted(out["histogram"].items(), key=lambda kv: int(kv[0])))
    return out


def sweep(params: Params, mode: str = "random", engine: str = "a", count: int = 100,
          seed: int = 0, p_red: float = 0.5, jobs: int = 1, check: bool = False,
          dump_dir: str | None = None, max_bits: int = 24) -> dict:
    """Run engine + verifier on every (exhaustive) or ``count`` random colourings."""
    if engine not in ENGINES:
        raise ValueError(f"engine must be one of {ENGINES}")
    if mode == "exhaustive":
        bits = comb(params.n, params.k)
        if bits > max_bits:
            raise BudgetExceeded(f"C({params.n},{params.k}) = {bits} bits exceeds the budget of {max_bits}")
        total = 1 << bits
    elif mode == "random":
        total = count
    else:
        raise ValueError("mode must be 'exhaustive' or 'random'")
    jobs = max(1, int(jobs))
    chunks = max(1, min(total, jobs * 8))
    edges = [total * j // chunks for j in range(chunks + 1)]
    tasks = [_Task(params, mode, engine, a, b, seed, p_red, check, dump_dir)
             for a, b in zip(edges, edges[1:]) if b > a]
    if jobs == 1:
        parts = [_run_range(t) for t in tasks]
    else:
        with Pool(jobs) as pool:
            parts = pool.map(_run_range, tasks)
    return merge_summaries(parts)
