"""Exact arithmetic for the group-element carriers used throughout the package.

Carriers: permutations on up to 12 points, 3x3 integer matrices of
determinant one, small square matrices over Z/pZ with determinant one, and
direct-sum pairs.  Every value is immutable and hashable, and the operations
here are pure functions, so elements can be shared freely between workers.

Each element has a canonical byte key (`element_key`); keys are equal exactly
when elements are equal, and their byte order gives the deterministic element
order used for dedup and file output.

Permutation composition applies the right factor first (function
composition): ``compose(x, y)`` maps ``i`` to ``x(y(i))``.
"""

from __future__ import annotations

import struct
from typing import Iterable, Union

MAX_PERM_POINTS = 12

# Integer-matrix entries must stay strictly below this magnitude (62-bit).
# Arithmetic whose *stored* result would leave the range raises
# OverflowBoundError rather than silently producing an out-of-contract value.
# Pure predicates (edge tests, order checks) compute exactly and are not
# subject to the bound.
DEFAULT_ENTRY_LIMIT = 1 << 62

_TAG_PERMUTATION = 0x01
_TAG_INT_MATRIX = 0x02
_TAG_MOD_MATRIX = 0x03
_TAG_DIRECT_SUM = 0x04


class CarrierMismatchError(TypeError):
    """Two elements from incompatible carriers were combined."""


class OverflowBoundError(OverflowError):
    """A stored matrix entry would exceed the configured entry bound."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# raw 3x3 helpers on row-major 9-tuples (exact, unbounded)

def mat3_mul(a, b):
    a0, a1, a2, a3, a4, a5, a6, a7, a8 = a
    b0, b1, b2, b3, b4, b5, b6, b7, b8 = b
    return (
        a0 * b0 + a1 * b3 + a2 * b6,
        a0 * b1 + a1 * b4 + a2 * b7,
        a0 * b2 + a1 * b5 + a2 * b8,
        a3 * b0 + a4 * b3 + a5 * b6,
        a3 * b1 + a4 * b4 + a5 * b7,
        a3 * b2 + a4 * b5 + a5 * b8,
        a6 * b0 + a7 * b3 + a8 * b6,
        a6 * b1 + a7 * b4 + a8 * b7,
        a6 * b2 + a7 * b5 + a8 * b8,
    )


def mat3_det(m):
    m0, m1, m2, m3, m4, m5, m6, m7, m8 = m
    return m0 * (m4 * m8 - m5 * m7) - m1 * (m3 * m8 - m5 * m6) + m2 * (m3 * m7 - m4 * m6)


def mat3_adjugate(m):
    m0, m1, m2, m3, m4, m5, m6, m7, m8 = m
    return (
        m4 * m8 - m5 * m7,
        -(m1 * m8 - m2 * m7),
        m1 * m5 - m2 * m4,
        -(m3 * m8 - m5 * m6),
        m0 * m8 - m2 * m6,
        -(m0 * m5 - m2 * m3),
        m3 * m7 - m4 * m6,
        -(m0 * m7 - m1 * m6),
        m0 * m4 - m1 * m3,
    )


MAT3_IDENTITY = (1, 0, 0, 0, 1, 0, 0, 0, 1)


# ---------------------------------------------------------------------------
# carriers

class Permutation:
    """A permutation of [0, n) with n <= 12, stored as its image tuple."""

    __slots__ = ("images", "_key")

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        n = len(images)
        if n > MAX_PERM_POINTS:
            raise ValueError(f"permutations support at most {MAX_PERM_POINTS} points, got {n}")
        if sorted(images) != list(range(n)):
            raise ValueError(f"images must be a bijection on [0, {n}): {images!r}")
        self.images = images
        self._key = bytes([_TAG_PERMUTATION, n]) + bytes(images)

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @classmethod
    def from_cycles(cls, cycles: str, n: int | None = None) -> "Permutation":
        """Parse 1-based cycle notation, e.g. ``"(123)"`` or ``"(1 10 2)(3 4)"``.

        Within a cycle, points are either contiguous single digits or
        whitespace/comma separated numbers.
        """
        parts = []
        text = cycles.strip()
        while text:
            if not text.startswith("("):
                raise ValueError(f"bad cycle notation: {cycles!r}")
            end = text.index(")")
            body = text[1:end]
            if "," in body or " " in body:
                points = [int(tok) for tok in body.replace(",", " ").split()]
            else:
                points = [int(ch) for ch in body]
            parts.append(points)
            text = text[end + 1:].strip()
        top = max((p for cyc in parts for p in cyc), default=0)
        if n is None:
            n = top
        if top > n:
            raise ValueError(f"cycle point {top} exceeds n={n}")
        images = list(range(n))
        for cyc in parts:
            if len(set(cyc)) != len(cyc):
                raise ValueError(f"repeated point in cycle {cyc}")
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a - 1] = b - 1
        return cls(images)

    def cycles(self) -> str:
        """1-based cycle notation; identity renders as ``"e"``."""
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start] or self.images[start] == start:
                seen[start] = True
                continue
            cyc = [start]
            seen[start] = True
            nxt = self.images[start]
            while nxt != start:
                cyc.append(nxt)
                seen[nxt] = True
                nxt = self.images[nxt]
            out.append(cyc)
        if not out:
            return "e"
        sep = "" if self.n <= 9 else " "
        return "".join("(" + sep.join(str(p + 1) for p in cyc) + ")" for cyc in out)

    def is_identity(self) -> bool:
        return all(img == i for i, img in enumerate(self.images))

    def parity(self) -> int:
        """0 for even permutations, 1 for odd."""
        seen = [False] * self.n
        transpositions = 0
        for start in range(self.n):
            if seen[start]:
                continue
            length = 0
            v = start
            while not seen[v]:
                seen[v] = True
                v = self.images[v]
                length += 1
            transpositions += length - 1
        return transpositions % 2

    def __repr__(self) -> str:
        return f"Permutation[{self.cycles()}; n={self.n}]"

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self._key)


class IntMatrix3:
    """A 3x3 integer matrix with determinant one (an element of SL3(Z)).

    Entries are stored row-major.  Construction and every stored arithmetic
    result are checked against ``entry_limit``.
    """

    __slots__ = ("entries", "det", "_key")

    def __init__(self, entries: Iterable[int], entry_limit: int = DEFAULT_ENTRY_LIMIT):
        entries = tuple(entries)
        if len(entries) == 3 and all(isinstance(r, (tuple, list)) for r in entries):
            entries = tuple(e for row in entries for e in row)
        entries = tuple(int(e) for e in entries)
        if len(entries) != 9:
            raise ValueError("IntMatrix3 needs 9 row-major entries or 3 rows")
        for e in entries:
            if abs(e) >= entry_limit:
                raise OverflowBoundError(f"entry {e} exceeds bound {entry_limit}")
        det = mat3_det(entries)
        if det != 1:
            raise ValueError(f"determinant must be 1, got {det}")
        self.entries = entries
        self.det = det
        self._key = bytes([_TAG_INT_MATRIX]) + b"".join(
            e.to_bytes(8, "little", signed=True) for e in entries
        )

    @classmethod
    def from_rows(cls, rows) -> "IntMatrix3":
        return cls(tuple(e for row in rows for e in row))

    @classmethod
    def identity(cls) -> "IntMatrix3":
        return cls(MAT3_IDENTITY)

    def rows(self):
        e = self.entries
        return ((e[0], e[1], e[2]), (e[3], e[4], e[5]), (e[6], e[7], e[8]))

    def is_identity(self) -> bool:
        return self.entries == MAT3_IDENTITY

    def max_abs_entry(self) -> int:
        return max(abs(e) for e in self.entries)

    def __repr__(self) -> str:
        return f"IntMatrix3{list(map(list, self.rows()))!r}"

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix3) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self._key)


class ModMatrix:
    """A dim x dim matrix over Z/pZ with determinant 1, dim in {2, 3}.

    dim 3 carries SL3(Z/pZ); the dim-2 variant carries SL2(Z/pZ) elements,
    which only ever need composition, inversion, and order computation.
    """

    __slots__ = ("entries", "p", "dim", "_key")

    def __init__(self, entries: Iterable[int], p: int, dim: int = 3):
        if dim not in (2, 3):
            raise ValueError(f"dim must be 2 or 3, got {dim}")
        if not is_prime(p):
            raise ValueError(f"modulus must be prime, got {p}")
        entries = tuple(int(e) % p for e in entries)
        if len(entries) != dim * dim:
            raise ValueError(f"expected {dim * dim} entries, got {len(entries)}")
        if dim == 3:
            det = mat3_det(entries) % p
        else:
            det = (entries[0] * entries[3] - entries[1] * entries[2]) % p
        if det != 1:
            raise ValueError(f"determinant must be 1 mod {p}, got {det}")
        self.entries = entries
        self.p = p
        self.dim = dim
        self._key = (
            bytes([_TAG_MOD_MATRIX, dim])
            + p.to_bytes(4, "little")
            + b"".join(e.to_bytes(8, "little") for e in entries)
        )

    @classmethod
    def identity(cls, p: int, dim: int = 3) -> "ModMatrix":
        ent = MAT3_IDENTITY if dim == 3 else (1, 0, 0, 1)
        return cls(ent, p, dim)

    def rows(self):
        d = self.dim
        return tuple(self.entries[i * d:(i + 1) * d] for i in range(d))

    def is_identity(self) -> bool:
        ident = MAT3_IDENTITY if self.dim == 3 else (1, 0, 0, 1)
        return self.entries == ident

    def __repr__(self) -> str:
        return f"ModMatrix{list(map(list, self.rows()))!r} mod {self.p}"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ModMatrix)
            and self.p == other.p
            and self.dim == other.dim
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash(self._key)


class DirectSumElement:
    """A pair (left, right) composing and inverting componentwise."""

    __slots__ = ("left", "right", "_key")

    def __init__(self, left: "GroupElement", right: "GroupElement"):
        self.left = left
        self.right = right
        lk = element_key(left)
        rk = element_key(right)
        self._key = (
            bytes([_TAG_DIRECT_SUM])
            + struct.pack("<I", len(lk)) + lk
            + struct.pack("<I", len(rk)) + rk
        )

    def is_identity(self) -> bool:
        return self.left.is_identity() and self.right.is_identity()

    def __repr__(self) -> str:
        return f"({self.left!r}, {self.right!r})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DirectSumElement)
            and self.left == other.left
            and self.right == other.right
        )

    def __hash__(self) -> int:
        return hash(self._key)


GroupElement = Union[Permutation, IntMatrix3, ModMatrix, DirectSumElement]


# ---------------------------------------------------------------------------
# generic operations

def element_key(x: GroupElement) -> bytes:
    """Canonical byte serialization; equal exactly when elements are equal."""
    return x._key


def compose(x: GroupElement, y: GroupElement,
            entry_limit: int = DEFAULT_ENTRY_LIMIT) -> GroupElement:
    """Group product x*y.  For permutations the right factor applies first."""
    if type(x) is not type(y):
        raise CarrierMismatchError(f"cannot compose {type(x).__name__} with {type(y).__name__}")
    if isinstance(x, Permutation):
        if x.n != y.n:
            raise CarrierMismatchError(f"permutation sizes differ: {x.n} vs {y.n}")
        xi = x.images
        return Permutation(tuple(xi[j] for j in y.images))
    if isinstance(x, IntMatrix3):
        return IntMatrix3(mat3_mul(x.entries, y.entries), entry_limit=entry_limit)
    if isinstance(x, ModMatrix):
        if x.p != y.p or x.dim != y.dim:
            raise CarrierMismatchError(
                f"mod-matrix shapes differ: dim {x.dim} mod {x.p} vs dim {y.dim} mod {y.p}")
        p = x.p
        if x.dim == 3:
            return ModMatrix(tuple(e % p for e in mat3_mul(x.entries, y.entries)), p, 3)
        a0, a1, a2, a3 = x.entries
        b0, b1, b2, b3 = y.entries
        return ModMatrix(
            ((a0 * b0 + a1 * b2) % p, (a0 * b1 + a1 * b3) % p,
             (a2 * b0 + a3 * b2) % p, (a2 * b1 + a3 * b3) % p), p, 2)
    if isinstance(x, DirectSumElement):
        return DirectSumElement(compose(x.left, y.left, entry_limit),
                                compose(x.right, y.right, entry_limit))
    raise CarrierMismatchError(f"unsupported carrier {type(x).__name__}")


def inverse(x: GroupElement, entry_limit: int = DEFAULT_ENTRY_LIMIT) -> GroupElement:
    if isinstance(x, Permutation):
        inv = [0] * x.n
        for i, img in enumerate(x.images):
            inv[img] = i
        return Permutation(inv)
    if isinstance(x, IntMatrix3):
        # det = 1, so the adjugate is the exact integer inverse
        return IntMatrix3(mat3_adjugate(x.entries), entry_limit=entry_limit)
    if isinstance(x, ModMatrix):
        p = x.p
        if x.dim == 3:
            return ModMatrix(tuple(e % p for e in mat3_adjugate(x.entries)), p, 3)
        a, b, c, d = x.entries
        return ModMatrix((d % p, -b % p, -c % p, a % p), p, 2)
    if isinstance(x, DirectSumElement):
        return DirectSumElement(inverse(x.left, entry_limit), inverse(x.right, entry_limit))
    raise CarrierMismatchError(f"unsupported carrier {type(x).__name__}")


def identity_like(x: GroupElement) -> GroupElement:
    if isinstance(x, Permutation):
        return Permutation.identity(x.n)
    if isinstance(x, IntMatrix3):
        return IntMatrix3.identity()
    if isinstance(x, ModMatrix):
        return ModMatrix.identity(x.p, x.dim)
    if isinstance(x, DirectSumElement):
        return DirectSumElement(identity_like(x.left), identity_like(x.right))
    raise CarrierMismatchError(f"unsupported carrier {type(x).__name__}")


def element_order(x: GroupElement, cap: int) -> int | None:
    """Smallest k <= cap with x^k = e, or None if every k <= cap fails.

    Repeated composition goes through `compose`, so integer-matrix powers
    that leave the entry bound raise OverflowBoundError.
    """
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    acc = x
    for k in range(1, cap + 1):
        if acc.is_identity():
            return k
        if k < cap:
            acc = compose(acc, x)
    return None


def has_order_dividing_3(x: GroupElement) -> bool:
    return compose(compose(x, x), x).is_identity()


def reduce_mod(a: IntMatrix3, p: int) -> ModMatrix:
    """Entrywise reduction of an SL3(Z) matrix into SL3(Z/pZ)."""
    if not isinstance(a, IntMatrix3):
        raise CarrierMismatchError("reduce_mod expects an IntMatrix3")
    if not is_prime(p):
        raise ValueError(f"modulus must be prime, got {p}")
    return ModMatrix(tuple(e % p for e in a.entries), p, 3)


def parametric_order3(a: int, b: int, c: int,
                      entry_limit: int = DEFAULT_ENTRY_LIMIT) -> IntMatrix3:
    """A three-parameter family of order-3 matrices in SL3(Z).

    Every member has integer entries, determinant one, and order exactly
    three; distinct parameter triples give distinct matrices.
    """
    return IntMatrix3(
        (1, 3 * a, 3 * b,
         0, -2 - 3 * c, -1 - 3 * c - 3 * c * c,
         0, 3, 1 + 3 * c),
        entry_limit=entry_limit,
    )


def serialize_element(x: GroupElement):
    """JSON-ready label: image array for permutations, row-major entry array
    for matrices, [left, right] for direct sums."""
    if isinstance(x, Permutation):
        return list(x.images)
    if isinstance(x, (IntMatrix3, ModMatrix)):
        return list(x.entries)
    if isinstance(x, DirectSumElement):
        return [serialize_element(x.left), serialize_element(x.right)]
    raise CarrierMismatchError(f"unsupported carrier {type(x).__name__}")


def element_label(x: GroupElement) -> str:
    """Short human-readable form (cycle notation / row list)."""
    if isinstance(x, Permutation):
        return x.cycles()
    if isinstance(x, (IntMatrix3, ModMatrix)):
        return str([list(r) for r in x.rows()])
    if isinstance(x, DirectSumElement):
        return f"({element_label(x.left)}, {element_label(x.right)})"
    return repr(x)
