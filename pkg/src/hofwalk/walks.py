"""Ground-truth walk counting: brute-force enumeration, the last-step
recursion, and a closed-walk dynamic program.

Area convention: a Right step at height y contributes -y, a Left step +y,
vertical steps nothing.  Closing an open walk vertically first and then
horizontally along y = 0 adds nothing, so the area of any walk is the sum
over its own horizontal steps.  A counterclockwise unit square has area +1.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Mapping

from .cyclo import CyclotomicNumber, FluxContext

DEFAULT_MAX_LENGTH = 12


class Step(Enum):
    RIGHT = "R"
    LEFT = "L"
    UP = "U"
    DOWN = "D"


_MOVES = {Step.RIGHT: (1, 0), Step.LEFT: (-1, 0), Step.UP: (0, 1), Step.DOWN: (0, -1)}


@dataclass(frozen=True)
class Walk:
    steps: tuple[Step, ...]

    @classmethod
    def parse(cls, text: str) -> Walk:
        return cls(tuple(Step(c) for c in text.upper() if not c.isspace()))

    def counts(self) -> tuple[int, int, int, int]:
        c = Counter(self.steps)
        return c[Step.RIGHT], c[Step.LEFT], c[Step.UP], c[Step.DOWN]

    def endpoint(self) -> tuple[int, int]:
        m1, m2, l1, l2 = self.counts()
        return m1 - m2, l1 - l2

    def closure(self) -> tuple[Step, ...]:
        """Minimal closing steps toward the origin: vertical first, then horizontal."""
        x, y = self.endpoint()
        vert = (Step.DOWN if y > 0 else Step.UP,) * abs(y)
        horiz = (Step.LEFT if x > 0 else Step.RIGHT,) * abs(x)
        return vert + horiz


def algebraic_area(walk: Walk | Iterable[Step] | str) -> int:
    """Signed area of the walk closed by its minimal vertical-then-horizontal closure."""
    if isinstance(walk, str):
        walk = Walk.parse(walk)
    elif not isinstance(walk, Walk):
        walk = Walk(tuple(walk))
    y = 0
    area = 0
    for step in walk.steps + walk.closure():
        if step is Step.RIGHT:
            area -= y
        elif step is Step.LEFT:
            area += y
        else:
            y += _MOVES[step][1]
    return area


@lru_cache(maxsize=4096)
def _area_counts(m1: int, m2: int, l1: int, l2: int) -> tuple[tuple[int, int], ...]:
    """Histogram {area: #walks} over all orderings of the step multiset, by DFS."""
    hist: Counter[int] = Counter()

    def dfs(r: int, l: int, u: int, d: int, y: int, area: int) -> None:
        if not (r or l or u or d):
            hist[area] += 1
            return
        if r:
            dfs(r - 1, l, u, d, y, area - y)
        if l:
            dfs(r, l - 1, u, d, y, area + y)
        if u:
            dfs(r, l, u - 1, d, y + 1, area)
        if d:
            dfs(r, l, u, d - 1, y - 1, area)

    dfs(m1, m2, l1, l2, 0, 0)
    return tuple(sorted(hist.items()))


def evaluate_area_counts(counts: Iterable[tuple[int, int]], ctx: FluxContext) -> CyclotomicNumber:
    """sum_A C(A) w**A, folding areas modulo q before touching the field."""
    folded = [0] * ctx.q
    for area, c in counts:
        folded[area % ctx.q] += c
    return CyclotomicNumber.from_coeffs(ctx, folded)


def enumerate_Z(
    m1: int, m2: int, l1: int, l2: int, ctx: FluxContext, max_length: int = DEFAULT_MAX_LENGTH
) -> CyclotomicNumber:
    """Z_{m1,m2,l1,l2}(w) by visiting every ordering of the steps."""
    if min(m1, m2, l1, l2) < 0:
        raise ValueError("step counts must be non-negative")
    total = m1 + m2 + l1 + l2
    if total > max_length:
        raise ValueError(
            f"walk length {total} exceeds the enumeration cap {max_length}; "
            "use recursion_Z or closed_Zn_dp instead, or raise max_length"
        )
    return evaluate_area_counts(_area_counts(m1, m2, l1, l2), ctx)


@dataclass
class WalkCountTable:
    ctx: FluxContext
    table: dict[tuple[int, int, int, int], CyclotomicNumber] = field(default_factory=dict)

    def __getitem__(self, key: tuple[int, int, int, int]) -> CyclotomicNumber:
        if min(key) < 0:
            return self.ctx.zero()
        return self.table[key]

    def __contains__(self, key: tuple[int, int, int, int]) -> bool:
        return key in self.table

    def keys(self):
        return self.table.keys()

    def items(self):
        return self.table.items()

    def __len__(self) -> int:
        return len(self.table)


def recursion_Z(
    bounds: tuple[int, int, int, int], ctx: FluxContext, max_total: int | None = None
) -> WalkCountTable:
    """Fill Z_{m1,m2,l1,l2} for 0 <= m1 <= M1 etc. with the last-step recursion.

    Optionally keep only entries with m1+m2+l1+l2 <= max_total.
    """
    M1, M2, L1, L2 = bounds
    if min(bounds) < 0:
        raise ValueError("bounds must be non-negative")
    if max_total is None:
        max_total = M1 + M2 + L1 + L2
    out = WalkCountTable(ctx)
    tab = out.table
    zero = ctx.zero()
    for total in range(max_total + 1):
        for m1 in range(min(M1, total) + 1):
            for m2 in range(min(M2, total - m1) + 1):
                for l1 in range(min(L1, total - m1 - m2) + 1):
                    l2 = total - m1 - m2 - l1
                    if l2 > L2:
                        continue
                    if total == 0:
                        tab[(0, 0, 0, 0)] = ctx.one()
                        continue
                    acc = zero
                    if l1:
                        acc = acc + tab[(m1, m2, l1 - 1, l2)]
                    if l2:
                        acc = acc + tab[(m1, m2, l1, l2 - 1)]
                    if m1:
                        acc = acc + tab[(m1 - 1, m2, l1, l2)].mul_zeta(l2 - l1)
                    if m2:
                        acc = acc + tab[(m1, m2 - 1, l1, l2)].mul_zeta(l1 - l2)
                    tab[(m1, m2, l1, l2)] = acc
    return out


@lru_cache(maxsize=64)
def closed_walk_area_counts(n: int) -> tuple[tuple[int, int], ...]:
    """Histogram of algebraic areas over all closed walks of length n.

    Dynamic program over (x, y, area); states that cannot return to the
    origin in the remaining steps are pruned.
    """
    if n < 0 or n % 2:
        raise ValueError(f"closed walks need even n >= 0, got {n}")
    states: dict[tuple[int, int, int], int] = {(0, 0, 0): 1}
    for t in range(n):
        left = n - t - 1
        nxt: defaultdict[tuple[int, int, int], int] = defaultdict(int)
        for (x, y, a), c in states.items():
            for nx, ny, na in ((x + 1, y, a - y), (x - 1, y, a + y), (x, y + 1, a), (x, y - 1, a)):
                if abs(nx) + abs(ny) <= left:
                    nxt[(nx, ny, na)] += c
        states = nxt
    hist: Counter[int] = Counter()
    for (_, _, a), c in states.items():
        hist[a] += c
    return tuple(sorted(hist.items()))


def closed_Zn_dp(n: int, ctx: FluxContext) -> CyclotomicNumber:
    """Z_n(w) = sum over closed walks of length n of w**area."""
    if n % 2:
        raise ValueError(f"Z_n is only defined here for even n, got {n}")
    return evaluate_area_counts(closed_walk_area_counts(n), ctx)


def Zn_from_table(n: int, table: Mapping[tuple[int, int, int, int], CyclotomicNumber] | WalkCountTable) -> CyclotomicNumber:
    """sum_m Z_{m,m,n/2-m,n/2-m} read off a filled table."""
    h = n // 2
    total = None
    for m in range(h + 1):
        v = table[(m, m, h - m, h - m)]
        total = v if total is None else total + v
    return total
