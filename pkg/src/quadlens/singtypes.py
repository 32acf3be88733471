"""Singularity types: four lens-space pairs, canonically normalized.

A type is a set of four cyclic quotient singularities, recorded as lens
pairs ``(p_i, q_i)`` with pairwise coprime orders.  ``L(p, q)`` and
``L(p, q')`` are orientation-preserving homeomorphic exactly when
``q' = q`` or ``q' = q^{-1} (mod p)``, so each pair is stored with the
smaller of ``q`` and its inverse and the four pairs are kept sorted by
order.  Enumeration helpers generate the candidate families scanned by
the pipeline, and ``plumbing_of`` converts a type into the disjoint
union of weighted linear chains bounding its link.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exact import factorize, mod_inverse
from .hjcf import hj_expand


class InvalidType(ValueError):
    """Pairs violating coprimality or range requirements."""


@dataclass(frozen=True, order=True)
class LensPair:
    p: int
    q: int

    def __post_init__(self):
        if not (self.p > 1 and 0 < self.q < self.p):
            raise InvalidType(f"need p > 1 and 0 < q < p, got ({self.p}, {self.q})")
        if math.gcd(self.p, self.q) != 1:
            raise InvalidType(f"({self.p}, {self.q}) not coprime")

    def canonical(self) -> "LensPair":
        qi = mod_inverse(self.q, self.p) if self.p > 2 else self.q
        return LensPair(self.p, min(self.q, qi))


@dataclass(frozen=True)
class SingularityType:
    pairs: tuple[LensPair, LensPair, LensPair, LensPair]

    @property
    def orders(self) -> tuple[int, int, int, int]:
        return tuple(lp.p for lp in self.pairs)

    @property
    def order_product(self) -> int:
        return math.prod(self.orders)

    def __str__(self) -> str:
        return ",".join(f"{lp.p}/{lp.q}" for lp in self.pairs)


def normalize(raw_pairs) -> SingularityType:
    """Canonical type from four raw ``(p, q)`` pairs.

    Sorts by order, replaces each ``q`` by ``min(q, q^{-1} mod p)``, and
    validates pairwise coprimality of the orders.  Idempotent.
    """
    pairs = sorted(LensPair(int(p), int(q)).canonical() for p, q in raw_pairs)
    if len(pairs) != 4:
        raise InvalidType(f"need exactly 4 pairs, got {len(pairs)}")
    for i in range(4):
        for j in range(i + 1, 4):
            if math.gcd(pairs[i].p, pairs[j].p) != 1:
                raise InvalidType(
                    f"orders {pairs[i].p} and {pairs[j].p} share a factor"
                )
    return SingularityType(tuple(pairs))


def parse_type_literal(text: str) -> SingularityType:
    """Parse the CLI literal form ``"2/1,3/2,5/1,9409/5519"``."""
    try:
        raw = [part.split("/") for part in text.split(",")]
        pairs = [(int(p), int(q)) for p, q in raw]
    except (ValueError, TypeError) as exc:
        raise InvalidType(f"cannot parse type literal {text!r}") from exc
    return normalize(pairs)


# --------------------------------------------------------------------------
# enumeration

def unit_square_root_count(n: int) -> int:
    """#{x mod n : x^2 = 1}; for odd n this is 2^(number of prime factors)."""
    count = 1
    for p, e in factorize(n).factors:
        if p == 2:
            count *= 1 if e == 1 else (2 if e == 2 else 4)
        else:
            count *= 2
    return count


def euler_phi(n: int) -> int:
    if n == 1:
        return 1
    phi = n
    for p, _ in factorize(n).factors:
        phi -= phi // p
    return phi


def inversion_class_count(p: int) -> int:
    """Number of lens spaces of order ``p``: pairs {q, q^{-1}} mod p."""
    if p == 2:
        return 1
    return (euler_phi(p) + unit_square_root_count(p)) // 2


def canonical_q_values(p: int):
    """Ascending canonical representatives q <= q^{-1} mod p."""
    if p == 2:
        yield 1
        return
    for q in range(1, p):
        if math.gcd(q, p) == 1 and q <= mod_inverse(q, p):
            yield q


def enumerate_case1(p4_min: int, p4_max: int, q3_values=(1, 2, 4)):
    """Types ``(2,1), (3,2), (5,q3), (p4,q4)`` with ``gcd(p4, 30) = 1``.

    Streams canonical types ordered by (p4, q3, q4); q4 runs over the
    inversion-class representatives.  The second pair is pinned to
    ``(3, 2)`` — a rational homology projective plane with these first
    three orders cannot carry ``(3, 1)``.
    """
    if p4_min < 7:
        p4_min = 7
    for p4 in range(p4_min, p4_max + 1):
        if math.gcd(p4, 30) != 1:
            continue
        for q3 in q3_values:
            for q4 in canonical_q_values(p4):
                yield SingularityType(
                    (LensPair(2, 1), LensPair(3, 2), LensPair(5, q3), LensPair(p4, q4))
                )


def count_case1(p4_min: int, p4_max: int, q3_count: int = 3) -> int:
    """Closed-form count of the stream above (phi + #unit-roots)/2 per p4."""
    total = 0
    for p4 in range(max(p4_min, 7), p4_max + 1):
        if math.gcd(p4, 30) == 1:
            total += inversion_class_count(p4)
    return q3_count * total


CASE2_FOURTH_ORDERS = (11, 13, 17, 19, 23, 25, 29, 31, 37, 41)


def enumerate_cases23():
    """The 1092 candidate types with orders (2,3,7,n) and (2,3,11,13).

    The fourth order in the (2,3,7,n) family ranges over primes 11..41
    plus 25; 27 is excluded because it shares a factor with 3, which the
    pairwise-coprimality requirement rules out.
    """
    for n in CASE2_FOURTH_ORDERS:
        for q2 in (1, 2):
            for q3 in canonical_q_values(7):
                for q4 in canonical_q_values(n):
                    yield SingularityType(
                        (LensPair(2, 1), LensPair(3, q2), LensPair(7, q3), LensPair(n, q4))
                    )
    for q2 in (1, 2):
        for q3 in canonical_q_values(11):
            for q4 in canonical_q_values(13):
                yield SingularityType(
                    (LensPair(2, 1), LensPair(3, q2), LensPair(11, q3), LensPair(13, q4))
                )


# --------------------------------------------------------------------------
# plumbings

@dataclass(frozen=True)
class Plumbing:
    """Disjoint union of linear chains; weights are integers <= -2.

    Vertices are indexed globally: chain 0 first, left to right, then
    chain 1, and so on.  Adjacency holds exactly between consecutive
    vertices of one chain.
    """

    chains: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return sum(len(c) for c in self.chains)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(w for c in self.chains for w in c)

    def vertex_chain_ids(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.chains) for _ in c)

    def adjacent_pairs(self):
        """Global index pairs (i, i+1) joined by a plumbing edge."""
        start = 0
        for chain in self.chains:
            for k in range(len(chain) - 1):
                yield start + k, start + k + 1
            start += len(chain)

    def is_adjacent(self, i: int, j: int) -> bool:
        if abs(i - j) != 1:
            return False
        lo = min(i, j)
        start = 0
        for chain in self.chains:
            if start <= lo < start + len(chain) - 1:
                return True
            start += len(chain)
        return False


def plumbing_from_words(words) -> Plumbing:
    chains = []
    for word in words:
        if not word or any(a < 2 for a in word):
            raise InvalidType(f"chain word must have all entries >= 2, got {word}")
        chains.append(tuple(-a for a in word))
    return Plumbing(tuple(chains))


def plumbing_of(stype: SingularityType, orientation: str = "standard") -> Plumbing:
    """Chains bounding the link (standard) or its reverse (reversed).

    Standard chains carry the negated expansion of ``p_i/q_i``; the
    reversed orientation uses ``p_i/(p_i - q_i)``.
    """
    if orientation not in ("standard", "reversed"):
        raise ValueError(f"unknown orientation {orientation!r}")
    words = []
    for lp in stype.pairs:
        q = lp.q if orientation == "standard" else lp.p - lp.q
        words.append(hj_expand(lp.p, q))
    return plumbing_from_words(words)
