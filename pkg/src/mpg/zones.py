"""Zone partition of a game and the reduced-game test.

Vertices are classified by the weight sign of their immediately optimal edge
(N negative, Z zero, P positive) and by which player wins the race to show an
edge of their sign first (ZN for Min, ZP for Max).  Both computations assume
the game has no zero-weight cycles; the caller is responsible for that.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .game import Game, Player


@dataclass(frozen=True)
class Zones:
    """The five zones of one game.  N, Z, P partition V, as do ZN and ZP,
    with N contained in ZN and P in ZP."""

    N: frozenset
    Z: frozenset
    P: frozenset
    ZN: frozenset
    ZP: frozenset


def compute_zones(g: Game) -> Zones:
    """Classify every vertex; runs in O(n + m).

    ZN is the least set containing N and closed under: a Min vertex with a
    zero-weight edge into ZN joins, and a Max vertex in Z joins once every one
    of its zero-weight edges leads into ZN.  ZP is the complement.
    """
    n = g.n
    owners, out, ew, edst, esrc = g.owners, g.out, g.eweight, g.edst, g.esrc
    in_n = [False] * n
    in_p = [False] * n
    is_max = [owners[v] is Player.MAX for v in range(n)]
    for v in range(n):
        ws = [ew[e] for e in out[v]]
        best = max(ws) if is_max[v] else min(ws)
        if best < 0:
            in_n[v] = True
        elif best > 0:
            in_p[v] = True
    # Zero-edge escape counters for Max vertices whose best weight is zero.
    esc = [0] * n
    for v in range(n):
        if is_max[v] and not in_n[v] and not in_p[v]:
            esc[v] = sum(1 for e in out[v] if ew[e] == 0)
    in_zn = [False] * n
    pending = [False] * n
    queue = deque()
    for v in range(n):
        if in_n[v]:
            pending[v] = True
            queue.append(v)
    while queue:
        v = queue.popleft()
        in_zn[v] = True
        for e in g.inc[v]:
            u = esrc[e]
            if pending[u] or in_p[u]:
                continue
            if is_max[u]:
                if ew[e] == 0:
                    esc[u] -= 1
                    if esc[u] == 0:
                        pending[u] = True
                        queue.append(u)
            elif ew[e] == 0:
                pending[u] = True
                queue.append(u)
    rng = range(n)
    return Zones(
        N=frozenset(v for v in rng if in_n[v]),
        Z=frozenset(v for v in rng if not in_n[v] and not in_p[v]),
        P=frozenset(v for v in rng if in_p[v]),
        ZN=frozenset(v for v in rng if in_zn[v]),
        ZP=frozenset(v for v in rng if not in_zn[v]),
    )


def is_reduced(g: Game, z: Zones) -> bool:
    """True iff every vertex is reduced, checked against its own zone.

    A ZN vertex is reduced when Min can force the first edge to be <= 0 and
    into ZN: a Min vertex needs one such edge, a Max vertex needs all of its
    edges to qualify.  ZP vertices are handled dually (>= 0 into ZP).  In a
    reduced game ZN and ZP are exactly the winning regions.

    Every vertex is inspected, including Z vertices: a Max vertex in Z and ZN
    may still own a negative edge escaping into ZP (dually a Min vertex in Z
    and ZP may own a positive edge into ZN), in which case its zone does not
    pin its winner and the game is not reduced.
    """
    out, ew, edst, owners = g.out, g.eweight, g.edst, g.owners
    zn = z.ZN
    for v in range(g.n):
        if v in zn:
            if owners[v] is Player.MIN:
                ok = any(ew[e] <= 0 and edst[e] in zn for e in out[v])
            else:
                ok = all(ew[e] <= 0 and edst[e] in zn for e in out[v])
        else:
            if owners[v] is Player.MAX:
                ok = any(ew[e] >= 0 and edst[e] not in zn for e in out[v])
            else:
                ok = all(ew[e] >= 0 and edst[e] not in zn for e in out[v])
        if not ok:
            return False
    return True
