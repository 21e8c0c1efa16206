"""Acceptance criteria 1-7, each reported as one PASS/FAIL line."""
import os
import random
import time
from math import comb

import pytest

from lehel.chains import DegenerateCycle
from lehel.core import Params, make_colouring, oracle_from_int
from lehel.full_cover import CoverError, cover_all_vertices
from lehel.partition import partition_theorem_a, partition_theorem_b
from lehel.verify import brute_force_min_uncovered, sweep, verify_certificate

from conftest import instance_oracles

SUITE = [(3, 1, 24), (4, 2, 24), (5, 2, 27), (6, 3, 30), (6, 2, 32), (7, 3, 32), (7, 2, 30)]
SEEDS = 500
JOBS = os.cpu_count() or 1
pytestmark = pytest.mark.slow


def report(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")


def suite_params():
    return [Params(n, k, ell) for k, ell, n in SUITE]


def b_allowed(p):
    return 3 * p.ell <= p.k


class Tally:
    def __init__(self):
        self.runs = 0
        self.failures = []
        self.slowest = 0.0
        self.max_iter_ratio = 0.0
        self.max_queries = 0

    def run(self, label, oracle, engine, limit):
        """Run ``engine`` in check mode, verify, and record the outcome."""
        self.runs += 1
        p = oracle.params
        t0 = time.perf_counter()
        try:
            cert = engine(oracle, check=True)
        except Exception as exc:
            self.failures.append((label, repr(exc)))
            return None
        self.slowest = max(self.slowest, time.perf_counter() - t0)
        rep = verify_certificate(oracle, cert)
        if not rep.ok or len(cert.uncovered) > limit:
            self.failures.append((label, rep.violations or f"{len(cert.uncovered)} > {limit}"))
        its = cert.stats.get("iterations", 0)
        self.max_iter_ratio = max(self.max_iter_ratio, its / p.n0)
        self.max_queries = max(self.max_queries, cert.stats.get("queries", 0))
        return cert


@pytest.fixture(scope="module")
def suite3():
    """Criteria 3, 5 and 7 share these runs: A and B on every instance, plus swaps and relabellings."""
    main, robust = Tally(), Tally()
    for p in suite_params():
        for seed in range(SEEDS):
            for j, o in enumerate(instance_oracles(p, seed)):
                label = (p.n, p.k, p.ell, seed, j)
                perm = [0, *random.Random(seed).sample(range(1, p.n + 1), p.n)]
                engines = [("a", partition_theorem_a, 4 * p.s)]
                if b_allowed(p):
                    engines.append(("b", partition_theorem_b, 2 * p.s))
                for name, eng, limit in engines:
                    main.run(label + (name,), o, eng, limit)
                    robust.run(label + (name, "swap"), o.swapped(), eng, limit)
                    robust.run(label + (name, "relabel"), o.relabelled(perm), eng, limit)
    return main, robust


def test_criterion_1_exhaustive_k3(capsys):
    p = Params(6, 3, 1)
    t0 = time.perf_counter()
    s = sweep(p, mode="exhaustive", engine="a", jobs=JOBS, check=True)
    took = time.perf_counter() - t0
    ok = (s["instances"] == 2 ** 20 and s["failures"] == 0
          and s["max_uncovered"] <= min(p.n, 4 * p.s) and took <= 15 * 60)
    report(capsys, 1, ok, f"{s['instances']} colourings, {s['failures']} failures, "
           f"max_uncovered {s['max_uncovered']}, {took:.1f}s")
    assert ok


def test_criterion_2_exhaustive_graph(capsys):
    p = Params(6, 2, 1)
    t0 = time.perf_counter()
    s = sweep(p, mode="exhaustive", engine="a", jobs=JOBS, check=True)
    worst = max(brute_force_min_uncovered(oracle_from_int(p, w))[0] for w in range(2 ** comb(6, 2)))
    took = time.perf_counter() - t0
    ok = (s["instances"] == 2 ** 15 and s["failures"] == 0 and s["max_uncovered"] <= 4
          and worst == 0 and took <= 5 * 60)
    report(capsys, 2, ok, f"{s['instances']} colourings, {s['failures']} failures, "
           f"max_uncovered {s['max_uncovered']}, max brute-force minimum {worst}, {took:.1f}s")
    assert ok


def test_criterion_3_random_suites(capsys, suite3):
    main, _ = suite3
    ok = not main.failures and main.slowest <= 1.0
    report(capsys, 3, ok, f"{main.runs} runs, {len(main.failures)} failures, slowest {main.slowest:.3f}s")
    assert ok, main.failures[:5]


def test_criterion_4_full_cover(capsys):
    runs, excluded, failures, patches = 0, 0, [], 0
    for p in suite_params():
        variants = ["a", "b"] if b_allowed(p) else ["a"]
        for seed in range(SEEDS):
            for j, o in enumerate(instance_oracles(p, seed)):
                for variant in variants:
                    runs += 1
                    try:
                        cert = cover_all_vertices(o, variant, check=True)
                    except CoverError:
                        if 2 * p.ell == p.k:
                            excluded += 1
                        else:
                            failures.append((p, seed, j, variant, "CoverError"))
                        continue
                    except Exception as exc:
                        failures.append((p, seed, j, variant, repr(exc)))
                        continue
                    limit = 4 if variant == "a" else 3
                    bad = (not verify_certificate(o, cert).ok or cert.uncovered
                           or len(cert.items) > limit)
                    for item in cert.items[2:]:
                        if not isinstance(item.cycle, DegenerateCycle):
                            e, f = (set(x) for x in item.cycle.edges())
                            patches += 1
                            bad = bad or len(e & f) != 2 * p.ell
                    if bad:
                        failures.append((p, seed, j, variant, "rejected"))
    ok = not failures
    report(capsys, 4, ok, f"{runs} runs, {len(failures)} failures, {patches} patches, "
           f"{excluded} excluded at ell = k/2")
    assert ok, failures[:5]


def test_criterion_5_termination(capsys, suite3):
    main, robust = suite3
    ratios = [main.max_iter_ratio, robust.max_iter_ratio]
    sweeps = [(p, sweep(p, count=50, seed=1, engine=e, check=True))
              for p in suite_params() for e in (["a", "b"] if b_allowed(p) else ["a"])]
    sweep_ok = all(s["failures"] == 0 and s["max_iterations"] <= p.n0 for p, s in sweeps)
    queries = max(s["max_queries"] for _, s in sweeps)
    ok = max(ratios) <= 1.0 and sweep_ok and queries > 0
    report(capsys, 5, ok, f"max iterations/(n/(k-ell)) {max(ratios):.2f}, max_queries {queries}, "
           "invariants asserted on every state")
    assert ok


def test_criterion_6_brute_force_cross_check(capsys):
    cases = [Params(n, 2, 1) for n in (4, 5, 6, 7, 8)] + [Params(6, 3, 1)]
    checked, failures = 0, []
    for p in cases:
        for seed in range(10):
            o = make_colouring(p, {"kind": "random", "seed": 1000 + seed, "p_red": (0.2, 0.5, 0.8)[seed % 3]})
            best, witness = brute_force_min_uncovered(o)
            cert = partition_theorem_a(o, check=True)
            unc = len(cert.uncovered)
            checked += 1
            if not (best <= unc <= min(p.n, 4 * p.s)) or not verify_certificate(o, cert).ok:
                failures.append((p, seed, best, unc))
            if not verify_certificate(o, witness, best).ok:
                failures.append((p, seed, "witness"))
    ok = checked >= 50 and not failures
    report(capsys, 6, ok, f"{checked} colourings, {len(failures)} mismatches")
    assert ok, failures[:5]


def test_criterion_7_robustness(capsys, suite3):
    _, robust = suite3
    ok = not robust.failures
    report(capsys, 7, ok, f"{robust.runs} swapped or relabelled runs, {len(robust.failures)} failures")
    assert ok, robust.failures[:5]
