"""Phase functions and their additive difference calculus.

A phase is a dense table A -> R over a free module.  Everything here is
table-level and exact: iterated differences, additive degree, polarization,
and the pluggable defect-degree strategies used to stratify phases.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .errors import CapacityError, ConsistencyError, ConstructionError, StrategyDomainError
from .module_space import ModuleSpace
from .ring_core import build_ring

DIFFERENCE_ORDER_CAP = 6
DEGREE_ORDER_CAP = 8
DEGREE_CELL_BUDGET = 50_000_000
POLARIZATION_CAP = 4096
TENSOR_CELL_CAP = 1 << 22


@dataclass(frozen=True)
class PhaseFunction:
    """Dense table of ring values over a module, indexed by packed element."""

    space: ModuleSpace
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.table) != self.space.size:
            raise ConstructionError(
                f"table length {len(self.table)} does not match module size {self.space.size}"
            )
        order = self.space.ring.order
        if any(not 0 <= v < order for v in self.table):
            raise ConstructionError("table contains values outside the ring")

    @property
    def key(self) -> bytes:
        return bytes(self.table)

    def value(self, x: int) -> int:
        return self.table[x]

    def translate(self, b: int) -> "PhaseFunction":
        """x -> phi(x + b)."""
        tr = self.space.translation(b)
        return PhaseFunction(self.space, tuple(self.table[t] for t in tr))

    def __add__(self, other: "PhaseFunction") -> "PhaseFunction":
        add = self.space.ring.add
        return PhaseFunction(self.space, tuple(add[a][b] for a, b in zip(self.table, other.table)))

    def __neg__(self) -> "PhaseFunction":
        neg = self.space.ring.neg
        return PhaseFunction(self.space, tuple(neg[v] for v in self.table))

    def __sub__(self, other: "PhaseFunction") -> "PhaseFunction":
        return self + (-other)

    @classmethod
    def constant(cls, space: ModuleSpace, value: int) -> "PhaseFunction":
        return cls(space, (value,) * space.size)

    @classmethod
    def zero(cls, space: ModuleSpace) -> "PhaseFunction":
        return cls.constant(space, 0)

    def __repr__(self) -> str:
        head = ",".join(str(v) for v in self.table[:8])
        tail = ",..." if len(self.table) > 8 else ""
        return f"PhaseFunction({self.space!r}, [{head}{tail}])"


@dataclass(frozen=True)
class PolynomialSpec:
    """Sum of coefficient * monomial terms; monomials are coordinate multisets."""

    terms: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self) -> None:
        for monomial, _coeff in self.terms:
            if len(monomial) > 3:
                raise ConstructionError(f"monomial size {len(monomial)} exceeds the cap 3")
            if tuple(sorted(monomial)) != monomial:
                raise ConstructionError("monomial positions must be sorted")

    @property
    def degree(self) -> int:
        return max((len(m) for m, _ in self.terms), default=0)

    @classmethod
    def build(cls, terms: Sequence[tuple[Sequence[int], int]]) -> "PolynomialSpec":
        return cls(tuple((tuple(sorted(m)), int(c)) for m, c in terms))


def phase_from_poly(spec: PolynomialSpec, domain: ModuleSpace) -> PhaseFunction:
    """Evaluate a polynomial spec to a dense phase table."""
    ring = domain.ring
    for monomial, coeff in spec.terms:
        if any(p >= domain.rank for p in monomial):
            raise ConstructionError(f"monomial position out of range for rank {domain.rank}")
        if not 0 <= coeff < ring.order:
            raise ConstructionError(f"coefficient {coeff} outside the ring")
    table = []
    for x in domain.elements():
        coords = domain.decode(x)
        acc = 0
        for monomial, coeff in spec.terms:
            val = coeff
            for pos in monomial:
                val = ring.mul[val][coords[pos]]
            acc = ring.add[acc][val]
        table.append(acc)
    return PhaseFunction(domain, tuple(table))


# -- difference calculus -------------------------------------------------------


def _single_difference(phi: PhaseFunction, h: int) -> PhaseFunction:
    space = phi.space
    ring = space.ring
    tr = space.translation(h)
    t = phi.table
    return PhaseFunction(space, tuple(ring.sub(t[tr[x]], t[x]) for x in range(space.size)))


def difference(phi: PhaseFunction, h: int) -> PhaseFunction:
    """First difference: x -> phi(x+h) - phi(x)."""
    return _single_difference(phi, h)


def iterated_difference(
    phi: PhaseFunction, hs: Sequence[int], method: str = "recursive"
) -> PhaseFunction:
    """Iterated difference with the given increments.

    `recursive` folds single differences; `alternating` evaluates the
    inclusion-exclusion sum over increment subsets.  The two must agree
    exactly and are kept as independent routes for cross-checking.
    """
    if len(hs) > DIFFERENCE_ORDER_CAP:
        raise CapacityError(f"{len(hs)} increments exceed the difference-order cap {DIFFERENCE_ORDER_CAP}")
    space = phi.space
    for h in hs:
        if not 0 <= h < space.size:
            raise ConstructionError(f"increment {h} outside the module")
    if method == "recursive":
        out = phi
        for h in hs:
            out = _single_difference(out, h)
        return out
    if method == "alternating":
        ring = space.ring
        k = len(hs)
        offsets = []
        for mask in range(1 << k):
            off = 0
            for i in range(k):
                if mask >> i & 1:
                    off = space.add_packed(off, hs[i])
            sign_minus = (k - bin(mask).count("1")) % 2 == 1
            offsets.append((space.translation(off), sign_minus))
        t = phi.table
        table = []
        for x in range(space.size):
            acc = 0
            for tr, minus in offsets:
                v = t[tr[x]]
                acc = ring.sub(acc, v) if minus else ring.add[acc][v]
            table.append(acc)
        return PhaseFunction(space, tuple(table))
    raise ConstructionError(f"unknown difference method {method!r}")


def _is_constant(table: Sequence[int]) -> bool:
    first = table[0]
    return all(v == first for v in table)


def additive_degree(
    phi: PhaseFunction,
    *,
    budget: int = DEGREE_CELL_BUDGET,
    order_cap: int = DEGREE_ORDER_CAP,
) -> int:
    """Least d such that every (d+1)-fold difference vanishes identically.

    Ascends d and tests the equivalent condition that all d-fold differences
    are constant in x.  Increments range over a generating set of (A,+):
    the set of increments with identically-vanishing differences is closed
    under addition (cocycle identity), and a table invariant under every
    generator translation is constant, so the restriction loses nothing.
    """
    space = phi.space
    ring = space.ring
    size = space.size
    if _is_constant(phi.table):
        return 0
    gens = space.additive_generators()
    gen_translations = [space.translation(g) for g in gens]
    # frontier: sorted generator-index tuple -> non-constant difference table
    frontier: dict[tuple[int, ...], tuple[int, ...]] = {(): phi.table}
    spent = 0
    d = 0
    while True:
        d += 1
        if d > order_cap:
            raise CapacityError(f"degree exceeds the scan cap {order_cap}")
        spent += len(frontier) * len(gens) * size
        if spent > budget:
            raise CapacityError(
                "degree scan budget exceeded; analyze a smaller module or sample increments"
            )
        nxt: dict[tuple[int, ...], tuple[int, ...]] = {}
        for ms, table in frontier.items():
            start = ms[-1] if ms else 0
            for gi in range(start, len(gens)):
                tr = gen_translations[gi]
                der = tuple(ring.sub(table[tr[x]], table[x]) for x in range(size))
                if not _is_constant(der):
                    nxt[ms + (gi,)] = der
        if not nxt:
            return d
        frontier = nxt


def is_additive(phi: PhaseFunction) -> bool:
    """True iff phi(0) = 0 and phi(x+y) = phi(x) + phi(y) everywhere.

    For large modules the pairwise check is reduced to generator shifts,
    which is equivalent by induction on word length.
    """
    t = phi.table
    space = phi.space
    ring = space.ring
    if t[0] != 0:
        return False
    size = space.size
    if size * size <= 1 << 22:
        for x in range(size):
            tr = space.translation(x)
            tx = t[x]
            row_ok = all(t[tr[y]] == ring.add[tx][t[y]] for y in range(size))
            if not row_ok:
                return False
        return True
    for s in space.additive_generators():
        tr = space.translation(s)
        ts = t[s]
        if any(t[tr[x]] != ring.add[t[x]][ts] for x in range(size)):
            return False
    return True


@dataclass(frozen=True)
class Polarization:
    """Symmetric table B(x,y) of second differences at the origin."""

    space: ModuleSpace
    table: tuple[tuple[int, ...], ...]
    biadditive: bool

    def value(self, x: int, y: int) -> int:
        return self.table[x][y]

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for row in self.table for v in row)

    def values(self) -> frozenset[int]:
        return frozenset(v for row in self.table for v in row)


def polarization(phi: PhaseFunction) -> Polarization:
    """B(x,y) = phi(x+y) - phi(x) - phi(y) + phi(0).

    The origin correction makes the table invariant under adding constants
    to phi; for phases with phi(0) = 0 it is the plain three-term form.
    The biadditivity flag is exact: additivity in one slot is checked
    against every generator shift for every (x,y).
    """
    space = phi.space
    if space.size > POLARIZATION_CAP:
        raise CapacityError(f"polarization table needs {space.size}^2 cells, above cap")
    ring = space.ring
    t = phi.table
    t0 = t[0]
    rows = []
    for x in range(space.size):
        tr = space.translation(x)
        tx = t[x]
        row = tuple(
            ring.add[ring.sub(ring.sub(t[tr[y]], tx), t[y])][t0] for y in range(space.size)
        )
        rows.append(row)
    table = tuple(rows)
    for x in range(space.size):
        for y in range(x):
            if table[x][y] != table[y][x]:
                raise ConsistencyError("polarization table is not symmetric")
    biadditive = True
    gens = space.additive_generators()
    for x in range(space.size):
        row = table[x]
        if row[0] != 0:
            biadditive = False
            break
        for s in gens:
            tr = space.translation(s)
            rs = row[s]
            if any(row[tr[y]] != ring.add[row[y]][rs] for y in range(space.size)):
                biadditive = False
                break
        if not biadditive:
            break
    return Polarization(space, table, biadditive)


# -- defect strategies ---------------------------------------------------------


def _strategy_default(phi: PhaseFunction) -> int:
    if is_additive(phi):
        return 0
    return max(1, additive_degree(phi))


def _strategy_literal(phi: PhaseFunction) -> int:
    """Least k >= 1 with some nonvanishing k-fold difference; 0 if additive.

    A nonzero constant has every difference vanishing, so the minimum is
    over an empty set and the convention assigns 0.  Any non-constant
    table already has a nonzero first difference, so the scan stops at 1.
    """
    if is_additive(phi):
        return 0
    if _is_constant(phi.table):
        return 0
    space = phi.space
    for h in range(1, space.size):
        if any(v != 0 for v in difference(phi, h).table):
            return 1
    raise ConsistencyError("non-constant phase with all first differences zero")


def _strategy_commutator(phi: PhaseFunction) -> int:
    """Least k with every k-fold translation commutator of the operator scalar.

    A k-fold commutator has phase component +-(k-fold difference), which is
    constant for all increments exactly when the additive degree is <= k.
    """
    return additive_degree(phi)


def _strategy_radical_depth(phi: PhaseFunction) -> int:
    """Radical layer count above the deepest layer containing the polarization.

    0 when the polarization vanishes.  Otherwise, with radical chain
    R = J^0 > J^1 > ... > J^ell = 0, the value is ell - k where J^k is the
    deepest layer containing every polarization value.  Over the length-2
    chain this is 1 for radical-valued and 2 for unit-reaching tables; over
    a reduced ring every nonzero polarization sits at depth 1.
    """
    if additive_degree(phi) > 2:
        raise StrategyDomainError("radical-depth is defined for phases of degree <= 2 only")
    pol = polarization(phi)
    if pol.is_zero:
        return 0
    chain = phi.space.ring.radical_chain
    values = pol.values()
    k = 0
    while k + 1 < len(chain) and values <= chain[k + 1]:
        k += 1
    return (len(chain) - 1) - k


STRATEGIES: dict[str, Callable[[PhaseFunction], int]] = {
    "default": _strategy_default,
    "literal": _strategy_literal,
    "commutator": _strategy_commutator,
    "radical-depth": _strategy_radical_depth,
}


def register_strategy(name: str, fn: Callable[[PhaseFunction], int]) -> None:
    STRATEGIES[name] = fn


def defect_degree(phi: PhaseFunction, strategy: str = "default") -> int:
    try:
        fn = STRATEGIES[strategy]
    except KeyError:
        raise StrategyDomainError(f"unknown strategy {strategy!r}") from None
    return fn(phi)


# -- defect tensors --------------------------------------------------------------


class DefectTensor:
    """Dense order-k tensor of k-fold differences at the origin."""

    def __init__(self, space: ModuleSpace, order: int, flat: bytes) -> None:
        self.space = space
        self.order = order
        self.flat = flat

    def at(self, *hs: int) -> int:
        if len(hs) != self.order:
            raise ConstructionError(f"tensor has order {self.order}, got {len(hs)} increments")
        idx = 0
        for h in hs:
            idx = idx * self.space.size + h
        return self.flat[idx]

    def entries(self) -> Iterator[tuple[tuple[int, ...], int]]:
        size = self.space.size
        for idx, v in enumerate(self.flat):
            hs = []
            rem = idx
            for _ in range(self.order):
                hs.append(rem % size)
                rem //= size
            yield tuple(reversed(hs)), v

    @property
    def nonzero_count(self) -> int:
        return sum(1 for v in self.flat if v != 0)

    @property
    def is_zero(self) -> bool:
        return self.nonzero_count == 0

    def __repr__(self) -> str:
        return f"DefectTensor(order={self.order}, cells={len(self.flat)})"


def _tensor_at_origin(phi: PhaseFunction, order: int) -> DefectTensor:
    space = phi.space
    size = space.size
    cells = size**order
    if cells > TENSOR_CELL_CAP:
        raise CapacityError(f"order-{order} tensor needs {cells} cells, above cap")
    ring = space.ring
    t = phi.table
    if order == 1:
        flat = bytes(ring.sub(t[h], t[0]) for h in range(size))
        return DefectTensor(space, 1, flat)
    if order == 2:
        pol = polarization(phi)
        flat = bytes(v for row in pol.table for v in row)
        return DefectTensor(space, 2, flat)
    # generic inclusion-exclusion at the origin, one cell at a time
    masks = []
    for mask in range(1 << order):
        minus = (order - bin(mask).count("1")) % 2 == 1
        masks.append((mask, minus))
    out = bytearray(cells)
    idx = 0
    stack_hs = [0] * order

    def fill(depth: int) -> None:
        nonlocal idx
        if depth == order:
            acc = 0
            for mask, minus in masks:
                off = 0
                for i in range(order):
                    if mask >> i & 1:
                        off = space.add_packed(off, stack_hs[i])
                v = t[off]
                acc = ring.sub(acc, v) if minus else ring.add[acc][v]
            out[idx] = acc
            idx += 1
            return
        for h in range(size):
            stack_hs[depth] = h
            fill(depth + 1)

    fill(0)
    return DefectTensor(space, order, bytes(out))


@dataclass(frozen=True)
class DefectProfile:
    """Degree, per-strategy defect degrees, and the top-order tensor of a phase."""

    phi: PhaseFunction
    additive_degree: int
    is_additive: bool
    strategy: str
    degrees: dict[str, int]
    tensor: DefectTensor | None
    polarization: Polarization | None


def defect_tensor(phi: PhaseFunction, strategy: str = "default") -> DefectProfile:
    """Profile a phase: defect degree per strategy plus the tensor at the
    requested strategy's order (empty when that order is 0)."""
    deg = additive_degree(phi)
    additive = is_additive(phi)
    k = defect_degree(phi, strategy)
    degrees: dict[str, int] = {}
    for name, fn in STRATEGIES.items():
        try:
            degrees[name] = fn(phi)
        except StrategyDomainError:
            continue
    tensor = _tensor_at_origin(phi, k) if k >= 1 else None
    pol = None
    if deg <= 2 and phi.space.size <= POLARIZATION_CAP:
        pol = polarization(phi)
    return DefectProfile(phi, deg, additive, strategy, degrees, tensor, pol)


# -- phase table text format ----------------------------------------------------


def write_phase_table(phi: PhaseFunction, stream) -> None:
    """Header `ring=<spec> n=<rank>`, then one ring index per line in packed order."""
    stream.write(f"ring={phi.space.ring.spec} n={phi.space.rank}\n")
    for v in phi.table:
        stream.write(f"{v}\n")


def phase_table_text(phi: PhaseFunction) -> str:
    buf = io.StringIO()
    write_phase_table(phi, buf)
    return buf.getvalue()


def read_phase_table(stream) -> PhaseFunction:
    header = stream.readline().strip()
    parts = dict(kv.split("=", 1) for kv in header.split() if "=" in kv)
    if "ring" not in parts or "n" not in parts:
        raise ConstructionError(f"bad phase table header {header!r}")
    ring = build_ring(parts["ring"])
    space = ModuleSpace(ring, int(parts["n"]))
    values = []
    for line in stream:
        line = line.strip()
        if line:
            values.append(int(line))
    if len(values) != space.size:
        raise ConstructionError(
            f"phase table has {len(values)} entries, expected {space.size}"
        )
    return PhaseFunction(space, tuple(values))
