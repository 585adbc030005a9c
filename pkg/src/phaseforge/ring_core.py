"""Exact finite commutative ring kernel backed by Cayley tables.

Rings are built from a small spec grammar (``zmod:<n>``, ``chain:<p>:<k>``,
``fatpoint:<p>``, ``prod:(<spec>,<spec>)``), validated exhaustively at
construction, and carry their full radical chain.  Elements are plain
integer indices; the indexing is mixed-radix over the defining basis of
each family, so serialized tables are reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConstructionError, ConsistencyError

MAX_RING_ORDER = 256


class FiniteRing:
    """Finite commutative ring with elements 0..order-1 and table arithmetic."""

    def __init__(
        self,
        spec: str,
        name: str,
        add_table: Sequence[Sequence[int]],
        mul_table: Sequence[Sequence[int]],
        one_index: int,
        element_names: Sequence[str],
    ) -> None:
        self.spec = spec
        self.name = name
        self.order = len(add_table)
        self.add = tuple(tuple(int(v) for v in row) for row in add_table)
        self.mul = tuple(tuple(int(v) for v in row) for row in mul_table)
        self.zero_index = 0
        self.one_index = int(one_index)
        self.element_names = tuple(str(s) for s in element_names)
        self._validate()
        self.neg = tuple(row.index(0) for row in self.add)
        self.radical_chain = self._compute_radical_chain()
        self._additive_gens: tuple[int, ...] | None = None

    # -- arithmetic helpers ------------------------------------------------

    def sub(self, a: int, b: int) -> int:
        return self.add[a][self.neg[b]]

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            raise ConstructionError("negative exponents are not supported")
        result = self.one_index
        base = a
        while k:
            if k & 1:
                result = self.mul[result][base]
            base = self.mul[base][base]
            k >>= 1
        return result

    def is_nilpotent(self, a: int) -> bool:
        return self.pow(a, self.order) == 0

    def additive_order(self, a: int) -> int:
        n = 1
        cur = a
        while cur != 0:
            cur = self.add[cur][a]
            n += 1
        return n

    def elements(self) -> range:
        return range(self.order)

    def element(self, index: int) -> "RingElement":
        return RingElement(self, index)

    def element_name(self, index: int) -> str:
        return self.element_names[index]

    @property
    def is_reduced(self) -> bool:
        return len(self.radical_chain) == 2 and self.radical_chain[1] == frozenset({0})

    @property
    def nilpotency_length(self) -> int:
        """Number of nontrivial radical layers; 1 for reduced rings."""
        return len(self.radical_chain) - 1

    def additive_generators(self) -> tuple[int, ...]:
        """Greedily chosen set of elements generating (R,+)."""
        if self._additive_gens is None:
            gens: list[int] = []
            span = frozenset({0})
            for a in range(1, self.order):
                if a not in span:
                    gens.append(a)
                    span = _additive_span(self.add, span | {a})
            self._additive_gens = tuple(gens)
        return self._additive_gens

    def __repr__(self) -> str:
        return f"FiniteRing({self.spec!r}, order={self.order})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteRing) and other.spec == self.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    # -- construction-time checks -------------------------------------------

    def _validate(self) -> None:
        n = self.order
        if not 2 <= n <= MAX_RING_ORDER:
            raise ConstructionError(f"ring order must be between 2 and {MAX_RING_ORDER}, got {n}")
        add = np.array(self.add, dtype=np.int64)
        mul = np.array(self.mul, dtype=np.int64)
        for label, table in (("add", add), ("mul", mul)):
            if table.shape != (n, n):
                raise ConsistencyError(f"{label} table has shape {table.shape}, expected {(n, n)}")
            if table.min() < 0 or table.max() >= n:
                raise ConsistencyError(f"{label} table entries out of range")
        if not np.array_equal(add, add.T):
            raise ConsistencyError("addition is not commutative")
        if not np.array_equal(add[0], np.arange(n)):
            raise ConsistencyError("index 0 is not the additive identity")
        rows_sorted = np.sort(add, axis=1)
        if not np.array_equal(rows_sorted, np.tile(np.arange(n), (n, 1))):
            raise ConsistencyError("addition rows are not permutations; inverses missing")
        if not np.array_equal(add[add], add[:, add]):
            raise ConsistencyError("addition is not associative")
        if not np.array_equal(mul, mul.T):
            raise ConsistencyError("multiplication is not commutative")
        if not np.array_equal(mul[self.one_index], np.arange(n)):
            raise ConsistencyError("one_index is not a multiplicative identity")
        if not np.array_equal(mul[mul], mul[:, mul]):
            raise ConsistencyError("multiplication is not associative")
        if not np.array_equal(mul[:, add], add[mul[:, :, None], mul[:, None, :]]):
            raise ConsistencyError("multiplication does not distribute over addition")

    def _compute_radical_chain(self) -> tuple[frozenset[int], ...]:
        everything = frozenset(range(self.order))
        nil = frozenset(a for a in range(self.order) if self.is_nilpotent(a))
        if _additive_span(self.add, nil) != nil:
            raise ConsistencyError("nilradical is not additively closed")
        chain = [everything, nil]
        while chain[-1] != frozenset({0}):
            products = {self.mul[a][b] for a in chain[-1] for b in nil}
            nxt = _additive_span(self.add, products)
            if not nxt < chain[-1]:
                raise ConsistencyError("radical chain failed to decrease strictly")
            chain.append(nxt)
        return tuple(chain)


@dataclass(frozen=True)
class RingElement:
    """Convenience wrapper around an element index with operator sugar."""

    ring: FiniteRing
    index: int

    def __post_init__(self) -> None:
        if not 0 <= self.index < self.ring.order:
            raise ConstructionError(f"element index {self.index} out of range for {self.ring.spec}")

    def __add__(self, other: "RingElement") -> "RingElement":
        return RingElement(self.ring, self.ring.add[self.index][other.index])

    def __mul__(self, other: "RingElement") -> "RingElement":
        return RingElement(self.ring, self.ring.mul[self.index][other.index])

    def __neg__(self) -> "RingElement":
        return RingElement(self.ring, self.ring.neg[self.index])

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + (-other)

    def __pow__(self, k: int) -> "RingElement":
        return RingElement(self.ring, self.ring.pow(self.index, k))

    @property
    def name(self) -> str:
        return self.ring.element_name(self.index)

    def __repr__(self) -> str:
        return f"<{self.name} in {self.ring.spec}>"


def _additive_span(add: Sequence[Sequence[int]], seed: Iterable[int]) -> frozenset[int]:
    """Closure of a seed set under addition (contains 0)."""
    gens = sorted(set(seed) | {0})
    span = {0}
    frontier = [0]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = add[x][g]
                if y not in span:
                    span.add(y)
                    new.append(y)
        frontier = new
    return frozenset(span)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# -- ring family builders ----------------------------------------------------


def build_zmod(n: int) -> FiniteRing:
    if not 2 <= n <= MAX_RING_ORDER:
        raise ConstructionError(f"zmod order must be between 2 and {MAX_RING_ORDER}, got {n}")
    add = [[(i + j) % n for j in range(n)] for i in range(n)]
    mul = [[(i * j) % n for j in range(n)] for i in range(n)]
    names = [str(i) for i in range(n)]
    return FiniteRing(f"zmod:{n}", f"Z/{n}", add, mul, 1, names)


def _poly_name(coeffs: Sequence[int], symbols: Sequence[str]) -> str:
    terms = []
    for c, sym in zip(coeffs, symbols):
        if c == 0:
            continue
        if sym == "":
            terms.append(str(c))
        elif c == 1:
            terms.append(sym)
        else:
            terms.append(f"{c}{sym}")
    return "+".join(terms) if terms else "0"


def build_chain(p: int, k: int) -> FiniteRing:
    """Truncated polynomial ring over a prime field with one nilpotent generator."""
    if not _is_prime(p):
        raise ConstructionError(f"chain ring base must be prime, got {p}")
    if k < 1:
        raise ConstructionError(f"chain ring length must be >= 1, got {k}")
    order = p**k
    if order > MAX_RING_ORDER:
        raise ConstructionError(f"chain ring order {order} exceeds cap {MAX_RING_ORDER}")

    def decode(i: int) -> tuple[int, ...]:
        out = []
        for _ in range(k):
            out.append(i % p)
            i //= p
        return tuple(out)

    def encode(cs: Sequence[int]) -> int:
        idx = 0
        for c in reversed(cs):
            idx = idx * p + (c % p)
        return idx

    add = [[encode([a + b for a, b in zip(decode(i), decode(j))]) for j in range(order)] for i in range(order)]

    def mul_coeffs(x: tuple[int, ...], y: tuple[int, ...]) -> list[int]:
        out = [0] * k
        for a, xa in enumerate(x):
            if xa == 0:
                continue
            for b, yb in enumerate(y):
                if a + b < k:
                    out[a + b] = (out[a + b] + xa * yb) % p
        return out

    mul = [[encode(mul_coeffs(decode(i), decode(j))) for j in range(order)] for i in range(order)]
    symbols = [""] + ["u" if e == 1 else f"u^{e}" for e in range(1, k)]
    names = [_poly_name(decode(i), symbols) for i in range(order)]
    return FiniteRing(f"chain:{p}:{k}", f"F{p}[u]/(u^{k})", add, mul, 1, names)


def build_fatpoint(p: int) -> FiniteRing:
    """Two-variable square-zero extension of a prime field."""
    if not _is_prime(p):
        raise ConstructionError(f"fatpoint base must be prime, got {p}")
    order = p**3
    if order > MAX_RING_ORDER:
        raise ConstructionError(f"fatpoint order {order} exceeds cap {MAX_RING_ORDER}")

    def decode(i: int) -> tuple[int, int, int]:
        return (i % p, (i // p) % p, i // (p * p))

    def encode(a: int, b: int, c: int) -> int:
        return (a % p) + (b % p) * p + (c % p) * p * p

    add = [
        [encode(*(x + y for x, y in zip(decode(i), decode(j)))) for j in range(order)]
        for i in range(order)
    ]
    # (a + bx + cy)(a' + b'x + c'y) = aa' + (ab' + a'b)x + (ac' + a'c)y
    mul = []
    for i in range(order):
        a, b, c = decode(i)
        row = []
        for j in range(order):
            a2, b2, c2 = decode(j)
            row.append(encode(a * a2, a * b2 + a2 * b, a * c2 + a2 * c))
        mul.append(row)
    names = [_poly_name(decode(i), ["", "x", "y"]) for i in range(order)]
    return FiniteRing(f"fatpoint:{p}", f"F{p}[x,y]/(x2,xy,y2)", add, mul, 1, names)


def build_product(r1: FiniteRing, r2: FiniteRing) -> FiniteRing:
    order = r1.order * r2.order
    if order > MAX_RING_ORDER:
        raise ConstructionError(f"product order {order} exceeds cap {MAX_RING_ORDER}")

    def encode(i1: int, i2: int) -> int:
        return i1 + r1.order * i2

    add = []
    mul = []
    names = []
    for idx in range(order):
        i1, i2 = idx % r1.order, idx // r1.order
        add.append(
            [encode(r1.add[i1][j % r1.order], r2.add[i2][j // r1.order]) for j in range(order)]
        )
        mul.append(
            [encode(r1.mul[i1][j % r1.order], r2.mul[i2][j // r1.order]) for j in range(order)]
        )
        names.append(f"({r1.element_name(i1)},{r2.element_name(i2)})")
    spec = f"prod:({r1.spec},{r2.spec})"
    one = encode(r1.one_index, r2.one_index)
    return FiniteRing(spec, f"{r1.name}x{r2.name}", add, mul, one, names)


def _split_product_args(body: str) -> tuple[str, str]:
    depth = 0
    for pos, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return body[:pos], body[pos + 1 :]
    raise ConstructionError(f"product spec needs two comma-separated factors, got {body!r}")


def build_ring(spec: str) -> FiniteRing:
    """Build a ring from its spec string; see the module docstring for the grammar."""
    spec = spec.strip()
    try:
        if spec.startswith("zmod:"):
            return build_zmod(int(spec[5:]))
        if spec.startswith("chain:"):
            p_str, _, k_str = spec[6:].partition(":")
            if not k_str:
                raise ConstructionError(f"chain spec needs chain:<p>:<k>, got {spec!r}")
            return build_chain(int(p_str), int(k_str))
        if spec.startswith("fatpoint:"):
            return build_fatpoint(int(spec[9:]))
        if spec.startswith("prod:(") and spec.endswith(")"):
            left, right = _split_product_args(spec[6:-1])
            return build_product(build_ring(left), build_ring(right))
    except ValueError as exc:
        if isinstance(exc, ConstructionError):
            raise
        raise ConstructionError(f"malformed ring spec {spec!r}: {exc}") from exc
    raise ConstructionError(f"unrecognized ring spec {spec!r}")


def radical_chain(ring: FiniteRing) -> tuple[frozenset[int], ...]:
    """Descending chain of radical powers, from the whole ring down to {0}."""
    return ring.radical_chain
