"""Additive character group of a finite ring, with exact exponent arithmetic.

Character values are never floats: a character is a table of exponents
``e(a)`` in Z/m with value exp(2*pi*i*e(a)/m), where m is the exponent of
the additive group.  Products of character values are exponent additions
mod m, so every downstream computation stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd

from . import parallel
from .errors import ConsistencyError
from .ring_core import FiniteRing


@dataclass(frozen=True)
class AdditiveCharacter:
    """Additive character of (R,+), stored as an exponent table mod `modulus`."""

    ring: FiniteRing
    modulus: int
    value_table: tuple[int, ...]
    canonical_index: int

    def exponent(self, element: int) -> int:
        return self.value_table[element]

    def kernel(self) -> frozenset[int]:
        return frozenset(a for a, e in enumerate(self.value_table) if e == 0)

    @property
    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.value_table)

    def verify_homomorphism(self) -> None:
        add = self.ring.add
        m = self.modulus
        vt = self.value_table
        if vt[0] != 0:
            raise ConsistencyError("character does not send 0 to exponent 0")
        for a in range(self.ring.order):
            for b in range(self.ring.order):
                if vt[add[a][b]] != (vt[a] + vt[b]) % m:
                    raise ConsistencyError(f"character fails additivity at ({a},{b})")

    def __repr__(self) -> str:
        return f"AdditiveCharacter(#{self.canonical_index} of {self.ring.spec}, m={self.modulus})"


@dataclass(frozen=True)
class FrobeniusResult:
    """Outcome of the generating-character search."""

    ring_spec: str
    is_frobenius: bool
    character: AdditiveCharacter | None
    characters_checked: int


def additive_exponent(ring: FiniteRing) -> int:
    """Exponent of (R,+): least m annihilating every element."""
    return reduce(lambda m, a: m * a // gcd(m, a), (ring.additive_order(a) for a in ring.elements()), 1)


def character_group(ring: FiniteRing) -> list[AdditiveCharacter]:
    """All |R| additive characters of (R,+), sorted by exponent table.

    Characters are built by extending partial homomorphisms one coset at a
    time; at each step an element of order d relative to the current
    subgroup admits exactly d compatible exponent choices, so the final
    count is |R| with no search.
    """
    m = additive_exponent(ring)
    add = ring.add
    covered: set[int] = {0}
    partials: list[dict[int, int]] = [{0: 0}]
    while len(covered) < ring.order:
        g = min(a for a in range(ring.order) if a not in covered)
        d = 1
        mult = g
        while mult not in covered:
            mult = add[mult][g]
            d += 1
        offsets = [0]
        cur = 0
        for _ in range(d - 1):
            cur = add[cur][g]
            offsets.append(cur)
        extended: list[dict[int, int]] = []
        for psi in partials:
            c = psi[mult]
            if c % d != 0:
                raise ConsistencyError("inconsistent partial character extension")
            base = (c // d) % m
            step = m // d
            for j in range(d):
                t = (base + j * step) % m
                ext = dict(psi)
                for s, es in psi.items():
                    point = s
                    for i in range(1, d):
                        point = add[point][offsets[1]]
                        ext[point] = (es + i * t) % m
                extended.append(ext)
        partials = extended
        covered = set(partials[0])
    if len(partials) != ring.order:
        raise ConsistencyError(f"expected {ring.order} characters, built {len(partials)}")
    tables = sorted(tuple(psi[a] for a in range(ring.order)) for psi in partials)
    return [AdditiveCharacter(ring, m, table, idx) for idx, table in enumerate(tables)]


def is_generating(chi: AdditiveCharacter) -> bool:
    """True iff no nonzero principal ideal lies inside ker(chi).

    The ring is commutative, so checking principal ideals rR covers every
    nonzero ideal (any nonzero ideal contains a nonzero principal one).
    """
    ring = chi.ring
    kernel = chi.kernel()
    for r in range(1, ring.order):
        if all(ring.mul[r][s] in kernel for s in range(ring.order)):
            return False
    return True


def find_generating_character(ring: FiniteRing, workers: int = 1) -> FrobeniusResult:
    """First generating character in canonical order, if any.

    The scan may be split across workers; the merge takes the minimum
    canonical index, so the result does not depend on the worker count.
    """
    chars = character_group(ring)

    def scan(chunk: range) -> int | None:
        for i in chunk:
            if is_generating(chars[i]):
                return i
        return None

    hits = parallel.map_chunks(parallel.partition_range(len(chars), workers), scan, workers)
    found = min((h for h in hits if h is not None), default=None)
    if found is None:
        return FrobeniusResult(ring.spec, False, None, len(chars))
    return FrobeniusResult(ring.spec, True, chars[found], len(chars))
