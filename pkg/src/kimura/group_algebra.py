"""Elements and idempotents of the rational group algebra Q[Σn]."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial, lcm
from typing import Iterable, Mapping

import numpy as np

from . import config
from .errors import DegreeMismatch
from .linalg import as_rational, format_rational
from .symgroup import (
    Partition,
    Permutation,
    character,
    enumerate_group,
    hook_dimension,
    partitions_of,
    sign,
)

# Cayley tables are n!×n! int32; above this degree products fall back to the sparse loop.
_TABLE_MAX_N = 6
_INT64_SAFE = 2**62


class GroupAlgebraElement:
    """A sparse formal Q-linear combination of permutations of a fixed degree."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Permutation, object] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Permutation, Fraction] = {}
        for sigma, c in items:
            if sigma.n != n:
                raise DegreeMismatch(f"permutation of degree {sigma.n} in Q[S_{n}]")
            c = as_rational(c)
            if c:
                clean[sigma] = clean.get(sigma, Fraction(0)) + c
                if not clean[sigma]:
                    del clean[sigma]
        self.n = n
        self.terms = clean

    @classmethod
    def one(cls, n: int) -> "GroupAlgebraElement":
        return cls(n, {Permutation.identity(n): 1})

    @classmethod
    def zero(cls, n: int) -> "GroupAlgebraElement":
        return cls(n)

    @classmethod
    def of(cls, sigma: Permutation, c=1) -> "GroupAlgebraElement":
        return cls(sigma.n, {sigma: c})

    def coefficient(self, sigma: Permutation) -> Fraction:
        return self.terms.get(sigma, Fraction(0))

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        body = " + ".join(f"{format_rational(c)}*{list(s.images)}" for s, c in sorted(self.terms.items(), key=lambda t: t[0].images))
        return f"GroupAlgebraElement(n={self.n}, {body or '0'})"

    def _check(self, other: "GroupAlgebraElement") -> None:
        if self.n != other.n:
            raise DegreeMismatch(f"degrees {self.n} and {other.n}")

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        self._check(other)
        return GroupAlgebraElement(self.n, list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "GroupAlgebraElement":
        return GroupAlgebraElement(self.n, {s: -c for s, c in self.terms.items()})

    def __sub__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return self + (-other)

    def scale(self, c) -> "GroupAlgebraElement":
        c = as_rational(c)
        return GroupAlgebraElement(self.n, {s: c * v for s, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, GroupAlgebraElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def is_zero(self) -> bool:
        return not self.terms

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [{"perm": list(s.images), "coeff": format_rational(c)}
                      for s, c in sorted(self.terms.items(), key=lambda t: t[0].images)],
        }


@lru_cache(maxsize=None)
def _cayley(n: int):
    elems = enumerate_group(n)
    index = {s.images: k for k, s in enumerate(elems)}
    table = np.empty((len(elems), len(elems)), dtype=np.int32)
    for a, s in enumerate(elems):
        im = s.images
        for b, t in enumerate(elems):
            table[a, b] = index[tuple(im[j] for j in t.images)]
    return elems, index, table


def _dense(x: GroupAlgebraElement, index) -> tuple[np.ndarray, int] | None:
    den = lcm(*(c.denominator for c in x.terms.values())) if x.terms else 1
    vec = np.zeros(len(index), dtype=np.int64)
    for s, c in x.terms.items():
        num = c.numerator * (den // c.denominator)
        if abs(num) >= _INT64_SAFE:
            return None
        vec[index[s.images]] = num
    return vec, den


def _multiply_table(a: GroupAlgebraElement, b: GroupAlgebraElement):
    elems, index, table = _cayley(a.n)
    da, db = _dense(a, index), _dense(b, index)
    if da is None or db is None:
        return None
    va, dena = da
    vb, denb = db
    bound = int(np.abs(va).max(initial=0)) * int(np.abs(vb).sum())
    if bound >= _INT64_SAFE:
        return None
    out = np.zeros(len(elems), dtype=np.int64)
    for k in np.nonzero(va)[0]:
        # left multiplication by a fixed permutation permutes indices bijectively
        out[table[k]] += va[k] * vb
    den = dena * denb
    return GroupAlgebraElement(
        a.n, {elems[k]: Fraction(int(out[k]), den) for k in np.nonzero(out)[0]}
    )


def multiply(a: GroupAlgebraElement, b: GroupAlgebraElement) -> GroupAlgebraElement:
    """Convolution product (Σ a_σ σ)(Σ b_τ τ) = Σ a_σ b_τ (σ∘τ)."""
    a._check(b)
    if a.n <= _TABLE_MAX_N and len(a) * len(b) > 256:
        prod = _multiply_table(a, b)
        if prod is not None:
            return prod
    acc: dict[Permutation, Fraction] = {}
    for s, x in a.terms.items():
        for t, y in b.terms.items():
            st = s * t
            acc[st] = acc.get(st, Fraction(0)) + x * y
    return GroupAlgebraElement(a.n, acc)


def antisymmetrizer(n: int) -> GroupAlgebraElement:
    """(1/n!) Σ sgn(σ) σ."""
    c = Fraction(1, factorial(n))
    return GroupAlgebraElement(n, {s: sign(s) * c for s in enumerate_group(n)})


def symmetrizer(n: int) -> GroupAlgebraElement:
    """(1/n!) Σ σ."""
    c = Fraction(1, factorial(n))
    return GroupAlgebraElement(n, {s: c for s in enumerate_group(n)})


def central_idempotent(lam: Partition) -> GroupAlgebraElement:
    """e_λ = (f_λ / n!) Σ_σ χ_λ(σ) σ, with χ_λ real so χ(σ⁻¹) = χ(σ)."""
    n = lam.n
    config.check_group(n)
    c = Fraction(hook_dimension(lam), factorial(n))
    chars: dict[Partition, int] = {}
    terms = {}
    for s in enumerate_group(n):
        ct = s.cycle_type()
        if ct not in chars:
            chars[ct] = character(lam, ct)
        if chars[ct]:
            terms[s] = c * chars[ct]
    return GroupAlgebraElement(n, terms)


def idempotent_system(n: int) -> list[tuple[Partition, GroupAlgebraElement]]:
    config.check_group(n)
    return [(lam, central_idempotent(lam)) for lam in partitions_of(n)]


def young_symmetrizer_product(m: int, i: int, antisym: bool) -> GroupAlgebraElement:
    """d^±_{m−i} ⊗ d^±_i as an element of Q[Σ_m], averaging over Σ_{m−i}×Σ_i."""
    from .symgroup import young_subgroup

    group = young_subgroup(m, i)
    c = Fraction(1, len(group))
    return GroupAlgebraElement(m, {s: (sign(s) if antisym else 1) * c for s in group})
