"""Enumeration of the supported finite groups and their order-3 elements.

Supported specs: symmetric and alternating groups on up to 6 points,
SL3(Z/pZ) and SL2(Z/pZ) for p in {2, 3, 5}, cyclic groups Z_m (m <= 12,
carried as m-cycles on m points), and nested direct sums of these.

Enumeration is deterministic: element sets are deduplicated and sorted by
canonical key, so two runs produce byte-identical results regardless of
construction order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .elements import (
    DirectSumElement,
    GroupElement,
    ModMatrix,
    Permutation,
    compose,
    element_key,
    has_order_dividing_3,
    identity_like,
    inverse,
)

MAX_GROUP_ORDER = 10 ** 6
_SL_PRIMES = (2, 3, 5)


class GuardExceededError(RuntimeError):
    """An enumeration or closure would exceed its configured size guard."""


@dataclass(frozen=True)
class GroupSpec:
    """One of: S<n>, A<n>, SL3(p), SL2(p), Z<m>, sum(spec, spec)."""

    kind: str               # "S" | "A" | "SL3" | "SL2" | "Z" | "sum"
    n: int = 0              # point count / modulus for scalar kinds
    left: "GroupSpec | None" = None
    right: "GroupSpec | None" = None

    def __post_init__(self):
        if self.kind in ("S", "A"):
            if not 1 <= self.n <= 6:
                raise ValueError(f"{self.kind}{self.n}: point count must be in [1, 6]")
        elif self.kind in ("SL3", "SL2"):
            if self.n not in _SL_PRIMES:
                raise ValueError(f"{self.kind}({self.n}): modulus must be one of {_SL_PRIMES}")
        elif self.kind == "Z":
            if not 1 <= self.n <= 12:
                raise ValueError(f"Z{self.n}: cyclic order must be in [1, 12]")
        elif self.kind == "sum":
            if self.left is None or self.right is None:
                raise ValueError("sum spec needs two component specs")
        else:
            raise ValueError(f"unknown group kind {self.kind!r}")

    def order(self) -> int:
        if self.kind == "S":
            return _factorial(self.n)
        if self.kind == "A":
            return max(1, _factorial(self.n) // 2)
        if self.kind == "SL3":
            p = self.n
            return p ** 3 * (p ** 3 - 1) * (p ** 2 - 1)
        if self.kind == "SL2":
            p = self.n
            return p * (p ** 2 - 1)
        if self.kind == "Z":
            return self.n
        return self.left.order() * self.right.order()

    def __str__(self) -> str:
        if self.kind == "sum":
            return f"sum({self.left},{self.right})"
        if self.kind in ("SL3", "SL2"):
            return f"{self.kind}({self.n})"
        return f"{self.kind}{self.n}"


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def parse_group_spec(text: str) -> GroupSpec:
    """Parse the CLI grammar: ``S4``, ``A5``, ``SL3(2)``, ``SL2(3)``, ``Z3``,
    ``sum(S4,Z3)`` with nested sums allowed."""
    spec, rest = _parse_spec(text.strip())
    if rest:
        raise ValueError(f"trailing input {rest!r} in group spec {text!r}")
    return spec


def _parse_spec(text: str) -> tuple[GroupSpec, str]:
    text = text.lstrip()
    if text.startswith("sum("):
        left, rest = _parse_spec(text[4:])
        rest = rest.lstrip()
        if not rest.startswith(","):
            raise ValueError(f"expected ',' in sum(...), got {rest!r}")
        right, rest = _parse_spec(rest[1:])
        rest = rest.lstrip()
        if not rest.startswith(")"):
            raise ValueError(f"expected ')' closing sum(...), got {rest!r}")
        return GroupSpec("sum", left=left, right=right), rest[1:]
    for kind in ("SL3", "SL2"):
        if text.startswith(kind + "("):
            body = text[len(kind) + 1:]
            num, rest = _read_int(body)
            if not rest.startswith(")"):
                raise ValueError(f"expected ')' in {kind}(p), got {rest!r}")
            return GroupSpec(kind, num), rest[1:]
    for kind in ("S", "A", "Z"):
        if text.startswith(kind):
            num, rest = _read_int(text[1:])
            return GroupSpec(kind, num), rest
    raise ValueError(f"cannot parse group spec at {text!r}")


def _read_int(text: str) -> tuple[int, str]:
    i = 0
    while i < len(text) and text[i].isdigit():
        i += 1
    if i == 0:
        raise ValueError(f"expected a number at {text!r}")
    return int(text[:i]), text[i:]


class ElementSet:
    """Deduplicated group elements in canonical key order."""

    __slots__ = ("elements", "keys", "includes_identity", "_index")

    def __init__(self, elements: Iterable[GroupElement]):
        keyed = {}
        for e in elements:
            keyed[element_key(e)] = e
        self.keys = tuple(sorted(keyed))
        self.elements = tuple(keyed[k] for k in self.keys)
        self.includes_identity = any(e.is_identity() for e in self.elements)
        self._index = {k: i for i, k in enumerate(self.keys)}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.elements)

    def __getitem__(self, i: int) -> GroupElement:
        return self.elements[i]

    def __contains__(self, e: GroupElement) -> bool:
        return element_key(e) in self._index

    def index_of(self, e: GroupElement) -> int:
        return self._index[element_key(e)]

    def __eq__(self, other) -> bool:
        return isinstance(other, ElementSet) and self.keys == other.keys

    def __repr__(self) -> str:
        return f"ElementSet({len(self)} elements, identity={self.includes_identity})"


def enumerate_group(spec: GroupSpec) -> ElementSet:
    """All elements of the group, each exactly once, sorted by key."""
    expected = spec.order()
    if expected > MAX_GROUP_ORDER:
        raise GuardExceededError(
            f"{spec} has order {expected} > guard {MAX_GROUP_ORDER}")
    out = ElementSet(_enumerate(spec))
    if len(out) != expected:
        raise AssertionError(
            f"enumeration bug: {spec} produced {len(out)} elements, expected {expected}")
    return out


def _enumerate(spec: GroupSpec) -> Iterator[GroupElement]:
    if spec.kind == "S":
        for images in itertools.permutations(range(spec.n)):
            yield Permutation(images)
    elif spec.kind == "A":
        for images in itertools.permutations(range(spec.n)):
            perm = Permutation(images)
            if perm.parity() == 0:
                yield perm
    elif spec.kind == "SL3":
        yield from _enumerate_sl3(spec.n)
    elif spec.kind == "SL2":
        p = spec.n
        for entries in itertools.product(range(p), repeat=4):
            if (entries[0] * entries[3] - entries[1] * entries[2]) % p == 1:
                yield ModMatrix(entries, p, 2)
    elif spec.kind == "Z":
        m = spec.n
        shift = Permutation(tuple((i + 1) % m for i in range(m)))
        acc = Permutation.identity(m)
        for _ in range(m):
            yield acc
            acc = compose(acc, shift)
    else:
        for le in _enumerate(spec.left):
            for ri in _enumerate(spec.right):
                yield DirectSumElement(le, ri)


def _enumerate_sl3(p: int) -> Iterator[ModMatrix]:
    if p <= 3:
        for entries in itertools.product(range(p), repeat=9):
            m0, m1, m2, m3, m4, m5, m6, m7, m8 = entries
            det = (m0 * (m4 * m8 - m5 * m7) - m1 * (m3 * m8 - m5 * m6)
                   + m2 * (m3 * m7 - m4 * m6)) % p
            if det == 1:
                yield ModMatrix(entries, p, 3)
        return
    # p = 5: build row by row; det([r1;r2;r3]) = r3 . (r1 x r2), so for each
    # independent (r1, r2) the valid third rows form an affine plane.
    vectors = list(itertools.product(range(p), repeat=3))
    nonzero = [v for v in vectors if any(v)]
    for r1 in nonzero:
        for r2 in nonzero:
            c = (
                (r1[1] * r2[2] - r1[2] * r2[1]) % p,
                (r1[2] * r2[0] - r1[0] * r2[2]) % p,
                (r1[0] * r2[1] - r1[1] * r2[0]) % p,
            )
            if c == (0, 0, 0):
                continue  # r2 parallel to r1
            pivot = next(i for i in range(3) if c[i])
            inv_piv = pow(c[pivot], p - 2, p)
            free = [i for i in range(3) if i != pivot]
            for a in range(p):
                for b in range(p):
                    r3 = [0, 0, 0]
                    r3[free[0]] = a
                    r3[free[1]] = b
                    r3[pivot] = (1 - a * c[free[0]] - b * c[free[1]]) * inv_piv % p
                    yield ModMatrix(r1 + r2 + tuple(r3), p, 3)


def order3_vertices(spec: GroupSpec, include_identity: bool = False) -> ElementSet:
    """The elements with x^3 = e; the identity is dropped unless asked for."""
    elems = []
    for x in enumerate_group(spec):
        if has_order_dividing_3(x):
            if x.is_identity() and not include_identity:
                continue
            elems.append(x)
    return ElementSet(elems)


def group_generators(spec: GroupSpec) -> list[GroupElement]:
    """A small generating set (used for conjugation orbits)."""
    if spec.kind == "S":
        n = spec.n
        if n <= 1:
            return [Permutation.identity(max(n, 1))]
        gens = [Permutation((1, 0) + tuple(range(2, n)))]
        if n >= 3:
            gens.append(Permutation(tuple(range(1, n)) + (0,)))
        return gens
    if spec.kind == "A":
        n = spec.n
        if n <= 2:
            return [Permutation.identity(max(n, 1))]
        gens = []
        for k in range(2, n):  # 3-cycles (0 1 k) generate A_n
            images = list(range(n))
            images[0], images[1], images[k] = images[1], images[k], images[0]
            gens.append(Permutation(images))
        return gens
    if spec.kind == "SL3":
        p = spec.n
        gens = []
        for i in range(3):
            for j in range(3):
                if i == j:
                    continue
                ent = list((1, 0, 0, 0, 1, 0, 0, 0, 1))
                ent[3 * i + j] = 1
                gens.append(ModMatrix(ent, p, 3))
        return gens
    if spec.kind == "SL2":
        p = spec.n
        return [ModMatrix((1, 1, 0, 1), p, 2), ModMatrix((1, 0, 1, 1), p, 2)]
    if spec.kind == "Z":
        m = spec.n
        return [Permutation(tuple((i + 1) % m for i in range(m)))]
    left_id = identity_like(group_generators(spec.left)[0])
    right_id = identity_like(group_generators(spec.right)[0])
    return (
        [DirectSumElement(g, right_id) for g in group_generators(spec.left)]
        + [DirectSumElement(left_id, h) for h in group_generators(spec.right)]
    )


def conjugacy_classes(spec: GroupSpec, subset: ElementSet) -> list[ElementSet]:
    """Partition of ``subset`` under conjugation by the full group.

    Orbits are computed under conjugation by a generating set, which yields
    the same classes; parts are returned in order of their smallest key.
    """
    gens = group_generators(spec)
    gens = gens + [inverse(g) for g in gens]
    assigned: dict[bytes, int] = {}
    parts: list[list[GroupElement]] = []
    for x in subset:
        kx = element_key(x)
        if kx in assigned:
            continue
        orbit = {kx: x}
        frontier = [x]
        while frontier:
            v = frontier.pop()
            for g in gens:
                w = compose(compose(g, v), inverse(g))
                kw = element_key(w)
                if kw not in orbit:
                    orbit[kw] = w
                    frontier.append(w)
        part = [e for k, e in orbit.items() if k in subset._index]
        idx = len(parts)
        parts.append(part)
        for e in part:
            assigned[element_key(e)] = idx
    out = [ElementSet(part) for part in parts]
    out.sort(key=lambda es: es.keys[0])
    return out


def generated_subgroup(generators: Iterable[GroupElement], cap: int) -> ElementSet:
    """Closure of the generators under composition (a subgroup for finite
    carriers since generator inverses are included); errors past ``cap``."""
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    gens = list(generators)
    if not gens:
        raise ValueError("generated_subgroup needs at least one generator")
    gens = gens + [inverse(g) for g in gens]
    ident = identity_like(gens[0])
    known = {element_key(ident): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = compose(v, g)
                kw = element_key(w)
                if kw not in known:
                    known[kw] = w
                    nxt.append(w)
                    if len(known) > cap:
                        raise GuardExceededError(
                            f"generated subgroup exceeds cap {cap}")
        frontier = nxt
    return ElementSet(known.values())
