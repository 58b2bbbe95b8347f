"""Integer partitions and the box statistics used throughout."""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from math import factorial, prod

from .algebra import RatFunc, t1, t2, ZERO


class BoxOutsideDiagram(ValueError):
    pass


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    def __new__(cls, parts=()):
        if isinstance(parts, str):
            return parse_partition(parts)
        parts = tuple(int(p) for p in parts)
        if any(p < 1 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"not a partition: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def multiplicities(self) -> Counter:
        return Counter(self)

    def boxes(self):
        """1-based (row, column) pairs."""
        for i, row in enumerate(self, start=1):
            for j in range(1, row + 1):
                yield i, j

    def add_part(self, m: int) -> "Partition":
        return Partition(sorted(self + (m,), reverse=True))

    def remove_part(self, m: int) -> "Partition":
        parts = list(self)
        parts.remove(m)
        return Partition(parts)

    def __str__(self):
        return ",".join(map(str, self)) if self else "-"

    def __repr__(self):
        return f"Partition({tuple(self)})"


def parse_partition(s: str) -> Partition:
    s = s.strip()
    if s in ("-", ""):
        return Partition(())
    try:
        parts = [int(x) for x in s.split(",")]
    except ValueError:
        raise ValueError(f"bad partition string {s!r}") from None
    return Partition(sorted(parts, reverse=True))


def _gen(n: int, maxpart: int):
    if n == 0:
        yield ()
        return
    for first in range(min(n, maxpart), 0, -1):
        for rest in _gen(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def enumerate_partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of n in decreasing lexicographic order."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return tuple(Partition(p) for p in _gen(n, n))


@lru_cache(maxsize=None)
def index_of(n: int) -> dict:
    return {p: i for i, p in enumerate(enumerate_partitions(n))}


def zmu(mu) -> int:
    """|Aut(mu)| * prod(mu_i)."""
    return prod(factorial(m) for m in Counter(mu).values()) * prod(mu)


def transpose(lam) -> Partition:
    if not lam:
        return Partition(())
    return Partition(sum(1 for r in lam if r >= j) for j in range(1, lam[0] + 1))


def arm_leg(lam, box) -> tuple[int, int]:
    i, j = box
    if i < 1 or j < 1 or i > len(lam) or j > lam[i - 1]:
        raise BoxOutsideDiagram(f"box {box} not in {tuple(lam)}")
    conj = transpose(lam)
    return lam[i - 1] - j, conj[j - 1] - i


def content_sum(lam) -> RatFunc:
    """Sum over boxes of (j-1) t1 + (i-1) t2."""
    a = sum(j - 1 for i, j in Partition(lam).boxes())
    b = sum(i - 1 for i, j in Partition(lam).boxes())
    return a * t1 + b * t2 if lam else ZERO


def content_sum_numeric(lam, s1, s2):
    a = sum(j - 1 for i, j in Partition(lam).boxes())
    b = sum(i - 1 for i, j in Partition(lam).boxes())
    return a * s1 + b * s2


def tangent_weight_pairs(lam) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Integer coefficient pairs (c1, c2) of the weights c1*t1 + c2*t2, two per box."""
    out = []
    for box in Partition(lam).boxes():
        a, l = arm_leg(lam, box)
        out.append(((a + 1, -l), (-a, l + 1)))
    return out


def tangent_weights(lam) -> list[RatFunc]:
    ws = []
    for w1, w2 in tangent_weight_pairs(lam):
        for c1, c2 in (w1, w2):
            ws.append(c1 * t1 + c2 * t2)
    return ws


def hook_product(lam) -> int:
    return prod(sum(arm_leg(lam, b)) + 1 for b in Partition(lam).boxes())


def nstat(lam) -> int:
    return sum(i * p for i, p in enumerate(lam))


def f2(lam) -> int:
    return sum(j - i for i, j in Partition(lam).boxes())


def dominance_leq(lam, mu):
    """True if lam <= mu in dominance, False if mu < lam, None if incomparable."""
    if sum(lam) != sum(mu):
        raise ValueError("dominance compares partitions of equal size")
    a = b = 0
    le = ge = True
    for k in range(max(len(lam), len(mu))):
        a += lam[k] if k < len(lam) else 0
        b += mu[k] if k < len(mu) else 0
        le = le and a <= b
        ge = ge and a >= b
    if le:
        return True
    if ge:
        return False
    return None


def dominates_strictly(mu, lam) -> bool:
    return tuple(mu) != tuple(lam) and dominance_leq(lam, mu) is True


def content_order_lt(lam, mu) -> bool:
    return f2(lam) < f2(mu)
