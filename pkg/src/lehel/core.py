"""Parameters, colours, colex indexing and colouring oracles.

Vertices are the integers ``1..n``.  An edge is identified by its vertex set;
internally the set is packed into an integer bitmask (bit ``v`` for vertex
``v``) so that memo lookups are cheap and independent of traversal order.
"""
from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from pathlib import Path
from typing import Iterable, Sequence


class ParamsError(ValueError):
    """Raised when (n, k, ell) violate the admissibility constraints."""


class ColouringFormatError(ValueError):
    """Raised on malformed or mismatched colouring files."""


class Colour(enum.IntEnum):
    BLUE = 0
    RED = 1

    def swap(self) -> "Colour":
        return Colour(1 - self)

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> "Colour":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown colour {text!r}") from None


@dataclass(frozen=True)
class Params:
    n: int
    k: int
    ell: int

    def __post_init__(self):
        if self.k < 2:
            raise ParamsError("k must be at least 2")
        if not 0 < self.ell:
            raise ParamsError("ell must be positive")
        if 2 * self.ell > self.k:
            raise ParamsError("ell must satisfy 2*ell <= k")
        if self.n <= 0 or self.n % (self.k - self.ell):
            raise ParamsError("(k-ell) must divide n")

    @property
    def s(self) -> int:
        """Step length k - ell between consecutive edge windows."""
        return self.k - self.ell

    @property
    def n0(self) -> int:
        return self.n // (self.k - self.ell)

    @property
    def interior(self) -> int:
        return self.k - 2 * self.ell

    @property
    def num_edges(self) -> int:
        return comb(self.n, self.k)

    def require_n0(self, at_least: int) -> None:
        if self.n0 < at_least:
            raise ParamsError(f"n/(k-ell) must be at least {at_least}, got {self.n0}")

    def as_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "ell": self.ell}


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def vertices_of(mask: int) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def validate_edge(params: Params, vertices: Iterable[int]) -> tuple[int, ...]:
    """Return the canonical (sorted) form of an edge, or raise ValueError."""
    e = tuple(sorted(vertices))
    if len(e) != params.k or len(set(e)) != params.k:
        raise ValueError(f"edge must have exactly {params.k} distinct vertices: {e}")
    if e[0] < 1 or e[-1] > params.n:
        raise ValueError(f"edge vertex out of range 1..{params.n}: {e}")
    return e


def colex_rank(edge: Iterable[int], params: Params) -> int:
    e = validate_edge(params, edge)
    return sum(comb(v - 1, i) for i, v in enumerate(e, start=1))


def colex_unrank(rank: int, params: Params) -> tuple[int, ...]:
    if not 0 <= rank < params.num_edges:
        raise ValueError(f"rank {rank} out of range for C({params.n},{params.k})")
    return _unrank_raw(rank, params.n, params.k)


@lru_cache(maxsize=64)
def _mask_rank_table(n: int, k: int) -> dict[int, int]:
    return {mask_of(_unrank_raw(r, n, k)): r for r in range(comb(n, k))}


def _unrank_raw(rank: int, n: int, k: int) -> tuple[int, ...]:
    # greedy: the i-th largest element is the largest x with C(x-1, i) <= r
    out = []
    r = rank
    x = n
    for i in range(k, 0, -1):
        while comb(x - 1, i) > r:
            x -= 1
        out.append(x)
        r -= comb(x - 1, i)
        x -= 1
    return tuple(reversed(out))


def _mask_colex_rank(mask: int) -> int:
    r = 0
    i = 0
    v = 0
    while mask:
        if mask & 1:
            i += 1
            r += comb(v - 1, i)
        mask >>= 1
        v += 1
    return r


# SplitMix64 (Steele, Lea, Flood 2014); fixed so random colourings reproduce
# bit-for-bit on every platform.
_M64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _M64
    return x ^ (x >> 31)


def random_colour(seed: int, rank: int, p_red: float) -> Colour:
    """Colour of the edge with colex rank ``rank`` in the seeded random colouring.

    The draw is ``splitmix64(splitmix64(seed) ^ rank) / 2**64 < p_red``; it
    depends only on (seed, rank), so the colouring is independent of query order.
    """
    u = splitmix64(splitmix64(seed & _M64) ^ rank)
    return Colour.RED if u < p_red * 2.0**64 else Colour.BLUE


@dataclass
class ColouringOracle:
    """Memoized total 2-colouring of the complete k-uniform hypergraph.

    ``source`` is one of ``("table", bits)``, ``("random", seed, p_red)``,
    ``("split", frozenset A, t)``, ``("constant", Colour)``,
    ``("function", f)`` with ``f(sorted vertex tuple) -> 0/1``, or
    ``("swapped", inner_oracle)`` / ``("relabel", inner_oracle, perm)``.
    """

    params: Params
    source: tuple
    query_count: int = 0
    memo: dict[int, Colour] = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def colour_of_mask(self, mask: int) -> Colour:
        c = self.memo.get(mask)
        if c is None:
            c = self._compute(mask)
            with self._lock:
                if mask not in self.memo:
                    self.memo[mask] = c
                    self.query_count += 1
        return c

    def colour(self, edge: Iterable[int]) -> Colour:
        """Colour of an edge given as any iterable of vertices (unchecked)."""
        return self.colour_of_mask(mask_of(edge))

    def _compute(self, mask: int) -> Colour:
        kind = self.source[0]
        if kind == "constant":
            return self.source[1]
        if kind == "table":
            bits = self.source[1]
            return Colour(bits[_mask_rank_table(self.params.n, self.params.k)[mask]])
        if kind == "random":
            return random_colour(self.source[1], _mask_colex_rank(mask), self.source[2])
        if kind == "split":
            a_mask, t = self.source[1], self.source[2]
            return Colour.RED if bin(mask & a_mask).count("1") >= t else Colour.BLUE
        if kind == "swapped":
            return self.source[1].colour_of_mask(mask).swap()
        if kind == "function":
            return Colour(int(self.source[1](vertices_of(mask))))
        if kind == "relabel":
            inner, perm = self.source[1], self.source[2]
            return inner.colour_of_mask(mask_of(perm[v] for v in vertices_of(mask)))
        raise ValueError(f"unknown oracle source {kind!r}")

    def bits(self) -> list[int]:
        """Materialize the colouring as a colex-ordered list of 0/1."""
        n, k = self.params.n, self.params.k
        return [int(self.colour(_unrank_raw(r, n, k))) for r in range(comb(n, k))]

    def materialized(self) -> "ColouringOracle":
        return ColouringOracle(self.params, ("table", tuple(self.bits())))

    def swapped(self) -> "ColouringOracle":
        return ColouringOracle(self.params, ("swapped", self))

    def relabelled(self, perm: Sequence[int]) -> "ColouringOracle":
        """Oracle colouring ``e`` like the inner oracle colours ``perm[e]``.

        ``perm`` is indexed by vertex (``perm[0]`` is ignored).
        """
        return ColouringOracle(self.params, ("relabel", self, tuple(perm)))

    def reset_count(self) -> None:
        self.memo.clear()
        self.query_count = 0


def colour_of(oracle: ColouringOracle, edge: Iterable[int]) -> Colour:
    validate_edge(oracle.params, edge)
    return oracle.colour(edge)


def make_colouring(params: Params, spec: dict) -> ColouringOracle:
    """Build an oracle from a spec dict.

    Accepted shapes: ``{"kind": "explicit", "path": ...}``,
    ``{"kind": "random", "seed": int, "p_red": float}``,
    ``{"kind": "split", "A": iterable, "t": int}``,
    ``{"kind": "constant", "colour": Colour | str}``.
    """
    kind = spec.get("kind")
    if kind == "explicit":
        oracle = load_colouring(spec["path"])
        if oracle.params != params:
            raise ColouringFormatError(f"file params {oracle.params} != {params}")
        return oracle
    if kind == "random":
        p = float(spec.get("p_red", 0.5))
        if not 0.0 <= p <= 1.0:
            raise ValueError("p_red must lie in [0, 1]")
        return ColouringOracle(params, ("random", int(spec["seed"]), p))
    if kind == "split":
        a = frozenset(spec["A"])
        t = int(spec["t"])
        if not a <= set(range(1, params.n + 1)):
            raise ValueError("A must be a subset of 1..n")
        if not 0 <= t <= params.k:
            raise ValueError("threshold t must satisfy 0 <= t <= k")
        return ColouringOracle(params, ("split", mask_of(a), t))
    if kind == "constant":
        c = spec["colour"]
        c = Colour.parse(c) if isinstance(c, str) else Colour(c)
        return ColouringOracle(params, ("constant", c))
    raise ValueError(f"unknown colouring kind {kind!r}")


def oracle_from_bits(params: Params, bits: Sequence[int]) -> ColouringOracle:
    if len(bits) != params.num_edges:
        raise ColouringFormatError(
            f"bitstring length {len(bits)} != C({params.n},{params.k}) = {params.num_edges}")
    return ColouringOracle(params, ("table", tuple(int(b) for b in bits)))


def oracle_from_int(params: Params, word: int) -> ColouringOracle:
    """Colouring whose colex-rank-j edge is Red iff bit j of ``word`` is set."""
    return ColouringOracle(params, ("table", tuple((word >> j) & 1 for j in range(params.num_edges))))


def dumps_colouring(oracle: ColouringOracle) -> str:
    p = oracle.params
    return f"{p.n} {p.k} {p.ell}\n" + "".join(map(str, oracle.bits())) + "\n"


def save_colouring(oracle: ColouringOracle, path: str | Path) -> None:
    Path(path).write_text(dumps_colouring(oracle))


def loads_colouring(text: str) -> ColouringOracle:
    lines = text.split("\n")
    if len(lines) < 2:
        raise ColouringFormatError("expected a header line and a bitstring line")
    try:
        n, k, ell = (int(x) for x in lines[0].split())
    except ValueError:
        raise ColouringFormatError(f"bad header {lines[0]!r}") from None
    params = Params(n, k, ell)
    body = lines[1].strip("\r")
    if any(rest.strip() for rest in lines[2:]):
        raise ColouringFormatError("trailing content after bitstring")
    if set(body) - {"0", "1"}:
        raise ColouringFormatError("bitstring must consist of 0 and 1")
    return oracle_from_bits(params, [int(ch) for ch in body])


def load_colouring(path: str | Path) -> ColouringOracle:
    return loads_colouring(Path(path).read_text())
