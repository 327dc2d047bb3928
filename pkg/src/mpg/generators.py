"""Deterministic game generation for tests and benchmarks.

The generator is a self-contained splitmix64 stream so that a corpus is
reproducible from (model, parameters, seed) alone, on any platform and in any
implementation: no library RNG, no floats.  Bounded draws use plain modulo
reduction of the 64-bit output.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .game import Game, Player

_MASK64 = (1 << 64) - 1


class Rng:
    """splitmix64: state advances by 0x9E3779B97F4A7C15, output is mixed."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform-ish draw in [0, bound) by modulo reduction."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % bound

    def randint(self, lo: int, hi: int) -> int:
        """Draw in [lo, hi], both ends included."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.below(hi - lo + 1)

    def chance(self, num: int, den: int) -> bool:
        """True with probability num/den."""
        return self.below(den) < num

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


class Model(enum.Enum):
    UNIFORM = "uniform"
    CYCLE_HEAVY = "cycle-heavy"
    LAYERED = "layered"


@dataclass(frozen=True)
class GenParams:
    """Shape of a random game.  ``out_degree`` is an inclusive range with a
    lower bound of at least 1, so generated games are sinkless by construction."""

    n: int
    out_degree: tuple = (1, 3)
    weight_bound: int = 4
    min_fraction: Fraction = Fraction(1, 2)
    model: Model = Model.UNIFORM
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.out_degree
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if lo < 1 or hi < lo:
            raise ValueError("out_degree range must satisfy 1 <= lo <= hi")
        if self.weight_bound < 1:
            raise ValueError("weight_bound must be at least 1")
        frac = Fraction(self.min_fraction)
        if not 0 <= frac <= 1:
            raise ValueError("min_fraction must lie in [0, 1]")
        object.__setattr__(self, "min_fraction", frac)


def gen_random(p: GenParams) -> Game:
    """Deterministic function of the parameters; see ``Model`` for shapes.

    UNIFORM draws every edge target uniformly.  CYCLE_HEAVY first threads one
    long cycle through a shuffled vertex order, then adds uniform extras.
    LAYERED points edges a short distance forward (wrapping around), with a
    quarter of them rerouted uniformly as back edges.
    """
    rng = Rng(p.seed)
    n = p.n
    lo, hi = p.out_degree
    w_bound = p.weight_bound
    frac = p.min_fraction
    owners = [
        Player.MIN if rng.chance(frac.numerator, frac.denominator) else Player.MAX
        for _ in range(n)
    ]
    edges: list = []

    def weight() -> int:
        return rng.randint(-w_bound, w_bound)

    if p.model is Model.CYCLE_HEAVY:
        order = list(range(n))
        rng.shuffle(order)
        for i, v in enumerate(order):
            edges.append((v, order[(i + 1) % n], weight()))
        for v in range(n):
            for _ in range(rng.randint(lo, hi) - 1):
                edges.append((v, rng.below(n), weight()))
    elif p.model is Model.LAYERED:
        span = max(1, n // 3)
        for v in range(n):
            for _ in range(rng.randint(lo, hi)):
                if rng.chance(1, 4):
                    dst = rng.below(n)
                else:
                    dst = (v + 1 + rng.below(span)) % n
                edges.append((v, dst, weight()))
    else:
        for v in range(n):
            for _ in range(rng.randint(lo, hi)):
                edges.append((v, rng.below(n), weight()))
    return Game(owners, edges)
