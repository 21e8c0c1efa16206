from __future__ import annotations

import random

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from lehel.core import ColouringOracle, Params, make_colouring

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("default")

# (k, ell) pairs with 2*ell <= k, kept small enough for quick runs
KL = [(2, 1), (3, 1), (4, 1), (4, 2), (5, 1), (5, 2), (6, 2), (6, 3), (7, 2), (7, 3)]


@st.composite
def params_st(draw, min_n0: int = 1, max_n0: int = 9, variant_b: bool = False) -> Params:
    pairs = [kl for kl in KL if not variant_b or 3 * kl[1] <= kl[0]]
    k, ell = draw(st.sampled_from(pairs))
    s = k - ell
    lo = max(min_n0, -(-k // s))  # need n >= k
    n0 = draw(st.integers(min_value=lo, max_value=max(lo, max_n0)))
    return Params(n0 * s, k, ell)


@st.composite
def oracle_st(draw, params: Params) -> ColouringOracle:
    kind = draw(st.sampled_from(["random", "random", "split", "constant", "biased"]))
    seed = draw(st.integers(0, 2**32))
    if kind == "random":
        return make_colouring(params, {"kind": "random", "seed": seed, "p_red": 0.5})
    if kind == "biased":
        p = draw(st.sampled_from([0.05, 0.1, 0.9, 0.95]))
        return make_colouring(params, {"kind": "random", "seed": seed, "p_red": p})
    if kind == "split":
        rng = random.Random(seed)
        a = rng.sample(range(1, params.n + 1), rng.randint(0, params.n))
        return make_colouring(params, {"kind": "split", "A": a, "t": rng.randint(0, params.k)})
    colour = draw(st.sampled_from(["blue", "red"]))
    return make_colouring(params, {"kind": "constant", "colour": colour})


def instance_oracles(params: Params, seed: int):
    """The colouring mix used by the random suites."""
    out = [make_colouring(params, {"kind": "random", "seed": seed, "p_red": p}) for p in (0.1, 0.5, 0.9)]
    rng = random.Random(seed)
    a = rng.sample(range(1, params.n + 1), rng.randint(1, params.n - 1))
    out.append(make_colouring(params, {"kind": "split", "A": a, "t": rng.randint(1, params.k)}))
    return out
