"""Free modules R^n with packed-index elements and matrix homomorphisms.

Elements are packed integers in [0, |R|^n) under little-endian mixed-radix
encoding of their coordinate vectors (coordinate 0 is least significant).
Hot paths work directly on packed ints; `ModuleElement` is the ergonomic
decoded view.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import CapacityError, ConstructionError
from .ring_core import FiniteRing

ENUMERATION_CAP = 1 << 20
PAIR_TABLE_CAP = 4096


class ModuleSpace:
    """The free module R^n over a table ring."""

    def __init__(self, ring: FiniteRing, rank: int) -> None:
        if rank < 1:
            raise ConstructionError(f"module rank must be >= 1, got {rank}")
        self.ring = ring
        self.rank = rank
        self.size = ring.order**rank
        self._translations: dict[int, tuple[int, ...]] = {}
        self._pair_add: tuple[tuple[int, ...], ...] | None = None
        self._additive_gens: tuple[int, ...] | None = None

    # -- encoding ---------------------------------------------------------

    def encode(self, coords: Sequence[int]) -> int:
        if len(coords) != self.rank:
            raise ConstructionError(f"expected {self.rank} coordinates, got {len(coords)}")
        packed = 0
        for c in reversed(coords):
            if not 0 <= c < self.ring.order:
                raise ConstructionError(f"coordinate {c} out of range")
            packed = packed * self.ring.order + c
        return packed

    def decode(self, packed: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.rank):
            out.append(packed % self.ring.order)
            packed //= self.ring.order
        return tuple(out)

    def element(self, packed: int) -> "ModuleElement":
        return ModuleElement(self, packed, self.decode(packed))

    def elements(self) -> range:
        """All packed indices in canonical order."""
        self._check_enumerable("element iteration")
        return range(self.size)

    def _check_enumerable(self, what: str) -> None:
        if self.size > ENUMERATION_CAP:
            raise CapacityError(
                f"{what} needs {self.size} elements, above the cap {ENUMERATION_CAP}"
            )

    # -- arithmetic ---------------------------------------------------------

    def add_packed(self, x: int, y: int) -> int:
        add = self.ring.add
        order = self.ring.order
        packed = 0
        scale = 1
        for _ in range(self.rank):
            packed += add[x % order][y % order] * scale
            x //= order
            y //= order
            scale *= order
        return packed

    def neg_packed(self, x: int) -> int:
        neg = self.ring.neg
        order = self.ring.order
        packed = 0
        scale = 1
        for _ in range(self.rank):
            packed += neg[x % order] * scale
            x //= order
            scale *= order
        return packed

    def translation(self, h: int) -> tuple[int, ...]:
        """Permutation table x -> x + h over all packed indices."""
        cached = self._translations.get(h)
        if cached is None:
            self._check_enumerable("translation table")
            cached = tuple(self.add_packed(x, h) for x in range(self.size))
            self._translations[h] = cached
        return cached

    def pair_add(self) -> tuple[tuple[int, ...], ...]:
        """Full size x size addition table on packed indices."""
        if self._pair_add is None:
            if self.size > PAIR_TABLE_CAP:
                raise CapacityError(
                    f"pairwise table needs {self.size}^2 cells, above cap {PAIR_TABLE_CAP}^2"
                )
            self._pair_add = tuple(self.translation(x) for x in range(self.size))
        return self._pair_add

    def basis_element(self, position: int, coefficient: int | None = None) -> int:
        if not 0 <= position < self.rank:
            raise ConstructionError(f"position {position} out of range for rank {self.rank}")
        c = self.ring.one_index if coefficient is None else coefficient
        coords = [0] * self.rank
        coords[position] = c
        return self.encode(coords)

    def additive_generators(self) -> tuple[int, ...]:
        """Generators of (A,+): the ring's additive generators in each slot."""
        if self._additive_gens is None:
            ring_gens = self.ring.additive_generators()
            self._additive_gens = tuple(
                self.basis_element(i, g) for i in range(self.rank) for g in ring_gens
            )
        return self._additive_gens

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ModuleSpace)
            and other.ring.spec == self.ring.spec
            and other.rank == self.rank
        )

    def __hash__(self) -> int:
        return hash((self.ring.spec, self.rank))

    def __repr__(self) -> str:
        return f"ModuleSpace({self.ring.spec}, n={self.rank})"


@dataclass(frozen=True)
class ModuleElement:
    space: ModuleSpace
    packed: int
    coords: tuple[int, ...]

    def __repr__(self) -> str:
        names = ",".join(self.space.ring.element_name(c) for c in self.coords)
        return f"({names})"


class ModuleHom:
    """R-linear map between free modules, stored as a target_rank x source_rank matrix."""

    def __init__(self, source: ModuleSpace, target: ModuleSpace, matrix: Sequence[Sequence[int]]) -> None:
        if source.ring.spec != target.ring.spec:
            raise ConstructionError("source and target must share a ring")
        rows = tuple(tuple(int(v) for v in row) for row in matrix)
        if len(rows) != target.rank or any(len(r) != source.rank for r in rows):
            raise ConstructionError(
                f"matrix must be {target.rank}x{source.rank}, got {len(rows)} rows"
            )
        for row in rows:
            for v in row:
                if not 0 <= v < source.ring.order:
                    raise ConstructionError(f"matrix entry {v} out of range")
        self.source = source
        self.target = target
        self.matrix = rows
        self._map_table: tuple[int, ...] | None = None

    def apply(self, x: int) -> int:
        ring = self.source.ring
        coords = self.source.decode(x)
        out = []
        for row in self.matrix:
            acc = 0
            for m, c in zip(row, coords):
                acc = ring.add[acc][ring.mul[m][c]]
            out.append(acc)
        return self.target.encode(out)

    def map_table(self) -> tuple[int, ...]:
        if self._map_table is None:
            self.source._check_enumerable("homomorphism table")
            self._map_table = tuple(self.apply(x) for x in range(self.source.size))
        return self._map_table

    def compose(self, inner: "ModuleHom") -> "ModuleHom":
        """self after inner: (self . inner)(x) = self(inner(x))."""
        if inner.target != self.source:
            raise ConstructionError("homomorphisms are not composable")
        ring = self.source.ring
        product = []
        for row in self.matrix:
            out_row = []
            for j in range(inner.source.rank):
                acc = 0
                for k in range(inner.target.rank):
                    acc = ring.add[acc][ring.mul[row[k]][inner.matrix[k][j]]]
                out_row.append(acc)
            product.append(out_row)
        return ModuleHom(inner.source, self.target, product)

    @classmethod
    def identity(cls, space: ModuleSpace) -> "ModuleHom":
        one = space.ring.one_index
        return cls(space, space, [[one if i == j else 0 for j in range(space.rank)] for i in range(space.rank)])

    @classmethod
    def zero(cls, source: ModuleSpace, target: ModuleSpace) -> "ModuleHom":
        return cls(source, target, [[0] * source.rank for _ in range(target.rank)])

    @classmethod
    def random(cls, rng: random.Random, source: ModuleSpace, target: ModuleSpace) -> "ModuleHom":
        order = source.ring.order
        return cls(
            source,
            target,
            [[rng.randrange(order) for _ in range(source.rank)] for _ in range(target.rank)],
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ModuleHom)
            and other.source == self.source
            and other.target == self.target
            and other.matrix == self.matrix
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.matrix))

    def __repr__(self) -> str:
        return f"ModuleHom({self.source!r} -> {self.target!r}, {self.matrix})"


def hom_apply(f: ModuleHom, x: int) -> int:
    """Matrix-vector product over the ring, on packed indices."""
    return f.apply(x)


def pullback_phase(f: ModuleHom, phi_prime):
    """Pull a phase on the target back along f: (f* phi')(x) = phi'(f(x))."""
    from .phase_calculus import PhaseFunction

    if phi_prime.space != f.target:
        raise ConstructionError("phase domain does not match the homomorphism target")
    mapping = f.map_table()
    return PhaseFunction(f.source, tuple(phi_prime.table[m] for m in mapping))
