"""Symbolic group generated by phase-multiplication and translation operators.

An element (psi, a) denotes the operator f -> chi(psi(x)) * f(x + a) on the
function space of the module.  Composition is exact and character-free:

    (psi1, a1) . (psi2, a2) = (psi1 + psi2 . tau_{a1}, a1 + a2)

The character enters only at matrix export and scalar classification.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .char_dual import AdditiveCharacter
from .errors import CapacityError, ConstructionError
from .module_space import ModuleSpace
from .phase_calculus import PhaseFunction, additive_degree, defect_degree

DEFAULT_CLOSURE_CAP = 1_000_000
MATRIX_SIZE_CAP = 4096
SHIFT_KEY_BYTES = 4


class PhaseGroupElement:
    """Exact pair (phase component, translation component)."""

    __slots__ = ("psi", "shift", "key")

    def __init__(self, psi: PhaseFunction, shift: int) -> None:
        if not 0 <= shift < psi.space.size:
            raise ConstructionError(f"translation {shift} outside the module")
        self.psi = psi
        self.shift = shift
        self.key = psi.key + shift.to_bytes(SHIFT_KEY_BYTES, "little")

    @property
    def space(self) -> ModuleSpace:
        return self.psi.space

    @property
    def is_identity(self) -> bool:
        return self.shift == 0 and all(v == 0 for v in self.psi.table)

    @property
    def is_scalar(self) -> bool:
        """Constant phase with no translation: acts as a root-of-unity multiple."""
        first = self.psi.table[0]
        return self.shift == 0 and all(v == first for v in self.psi.table)

    def scalar_exponent(self, chi: AdditiveCharacter) -> int:
        if not self.is_scalar:
            raise ConstructionError("element is not scalar")
        return chi.exponent(self.psi.table[0])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PhaseGroupElement) and other.key == self.key and other.space == self.space

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"PhaseGroupElement(shift={self.shift}, psi={self.psi.table})"


def element_from_key(space: ModuleSpace, key: bytes) -> PhaseGroupElement:
    table = tuple(key[: space.size])
    shift = int.from_bytes(key[space.size : space.size + SHIFT_KEY_BYTES], "little")
    return PhaseGroupElement(PhaseFunction(space, table), shift)


def identity(space: ModuleSpace) -> PhaseGroupElement:
    return PhaseGroupElement(PhaseFunction.zero(space), 0)


def phase_operator(psi: PhaseFunction) -> PhaseGroupElement:
    return PhaseGroupElement(psi, 0)


def translation_operator(space: ModuleSpace, a: int) -> PhaseGroupElement:
    return PhaseGroupElement(PhaseFunction.zero(space), a)


def compose(g1: PhaseGroupElement, g2: PhaseGroupElement) -> PhaseGroupElement:
    if g1.space != g2.space:
        raise ConstructionError("elements live on different modules")
    space = g1.space
    add = space.ring.add
    tr = space.translation(g1.shift)
    t1 = g1.psi.table
    t2 = g2.psi.table
    table = tuple(add[v1][t2[tx]] for v1, tx in zip(t1, tr))
    return PhaseGroupElement(PhaseFunction(space, table), space.add_packed(g1.shift, g2.shift))


def invert(g: PhaseGroupElement) -> PhaseGroupElement:
    """Inverse (-psi . tau_{-a}, -a); g . invert(g) is the identity."""
    space = g.space
    minus_a = space.neg_packed(g.shift)
    shifted = g.psi.translate(minus_a)
    return PhaseGroupElement(-shifted, minus_a)


def translation_commutator(g: PhaseGroupElement, h: int) -> PhaseGroupElement:
    """[g, T_h] = g T_h g^-1 T_h^-1 = (-difference_h(psi), 0)."""
    space = g.space
    ring = space.ring
    tr = space.translation(h)
    t = g.psi.table
    table = tuple(ring.sub(t[x], t[tr[x]]) for x in range(space.size))
    return PhaseGroupElement(PhaseFunction(space, table), 0)


def iterated_translation_commutator(g: PhaseGroupElement, hs: list[int]) -> PhaseGroupElement:
    out = g
    for h in hs:
        out = translation_commutator(out, h)
    return out


@dataclass
class ClosureResult:
    """Everything reachable from the generators under compose and invert."""

    space: ModuleSpace
    elements: dict[bytes, PhaseGroupElement]
    generator_count: int
    reached_fixpoint: bool
    cap_hit: bool
    max_phase_degree: int
    stratum_census: dict[int, int]
    strategy: str

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, item) -> bool:
        key = item.key if isinstance(item, PhaseGroupElement) else item
        return key in self.elements

    def sorted_keys(self) -> list[bytes]:
        return sorted(self.elements)


def closure(
    generators: list[PhaseGroupElement],
    cap: int = DEFAULT_CLOSURE_CAP,
    strategy: str = "default",
) -> ClosureResult:
    """Breadth-first closure with canonical-key dedup.

    Stepping uses the generators and their inverses, seeded with the
    identity, so the fixpoint is the generated subgroup.  The element set
    of a completed closure is traversal-order independent; a cap hit stops
    the walk deterministically for a fixed generator list.
    """
    if not generators:
        raise ConstructionError("closure needs at least one generator")
    space = generators[0].space
    if any(g.space != space for g in generators):
        raise ConstructionError("generators live on different modules")

    steppers: dict[bytes, PhaseGroupElement] = {}
    for g in generators:
        steppers.setdefault(g.key, g)
    for g in list(steppers.values()):
        inv = invert(g)
        steppers.setdefault(inv.key, inv)

    ident = identity(space)
    elements: dict[bytes, PhaseGroupElement] = {ident.key: ident}
    for g in generators:
        elements.setdefault(g.key, g)
    frontier = list(elements.values())
    cap_hit = False
    while frontier and not cap_hit:
        fresh: list[PhaseGroupElement] = []
        for g in steppers.values():
            for b in frontier:
                c = compose(g, b)
                if c.key not in elements:
                    if len(elements) >= cap:
                        cap_hit = True
                        break
                    elements[c.key] = c
                    fresh.append(c)
            if cap_hit:
                break
        frontier = fresh

    degree_memo: dict[bytes, int] = {}
    stratum_memo: dict[bytes, int] = {}
    census: dict[int, int] = {}
    max_degree = 0
    for el in elements.values():
        pk = el.psi.key
        if pk not in degree_memo:
            degree_memo[pk] = additive_degree(el.psi)
            stratum_memo[pk] = defect_degree(el.psi, strategy)
        max_degree = max(max_degree, degree_memo[pk])
        level = stratum_memo[pk]
        census[level] = census.get(level, 0) + 1
    return ClosureResult(
        space=space,
        elements=elements,
        generator_count=len(generators),
        reached_fixpoint=not cap_hit,
        cap_hit=cap_hit,
        max_phase_degree=max_degree,
        stratum_census=dict(sorted(census.items())),
        strategy=strategy,
    )


class OperatorMatrix:
    """Monomial matrix of character exponents: one entry per row, others absent."""

    __slots__ = ("size", "modulus", "cols", "exps")

    def __init__(self, size: int, modulus: int, cols: tuple[int, ...], exps: tuple[int, ...]) -> None:
        self.size = size
        self.modulus = modulus
        self.cols = cols
        self.exps = exps

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if other.size != self.size or other.modulus != self.modulus:
            raise ConstructionError("matrices are not composable")
        cols = tuple(other.cols[c] for c in self.cols)
        exps = tuple((e + other.exps[c]) % self.modulus for e, c in zip(self.exps, self.cols))
        return OperatorMatrix(self.size, self.modulus, cols, exps)

    def to_dense(self) -> np.ndarray:
        """Dense exponent matrix; -1 marks absent entries."""
        dense = np.full((self.size, self.size), -1, dtype=np.int32)
        for row, (col, e) in enumerate(zip(self.cols, self.exps)):
            dense[row, col] = e
        return dense

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, OperatorMatrix)
            and other.size == self.size
            and other.modulus == self.modulus
            and other.cols == self.cols
            and other.exps == self.exps
        )

    def __hash__(self) -> int:
        return hash((self.size, self.modulus, self.cols, self.exps))

    @property
    def is_identity(self) -> bool:
        return all(c == i for i, c in enumerate(self.cols)) and all(e == 0 for e in self.exps)


def operator_matrix(g: PhaseGroupElement, chi: AdditiveCharacter) -> OperatorMatrix:
    """Exponent matrix with entry at (x, x+a) equal to the exponent of chi(psi(x))."""
    space = g.space
    if space.size > MATRIX_SIZE_CAP:
        raise CapacityError(f"matrix export needs {space.size}^2 cells, above cap")
    if chi.ring.spec != space.ring.spec:
        raise ConstructionError("character belongs to a different ring")
    tr = space.translation(g.shift)
    exps = tuple(chi.exponent(v) for v in g.psi.table)
    return OperatorMatrix(space.size, chi.modulus, tuple(tr), exps)
