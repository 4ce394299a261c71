"""Permutations, partitions, characters and shuffle coset representatives.

Permutations act on positions ``0..n-1`` and compose right to left:
``(s * t)(j) == s(t(j))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial, prod
from typing import Iterator, Sequence

from . import config
from .errors import RangeError, SizeMismatch


@dataclass(frozen=True, slots=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def transposition(cls, n: int, a: int, b: int) -> "Permutation":
        im = list(range(n))
        im[a], im[b] = im[b], im[a]
        return cls(tuple(im))

    @classmethod
    def from_cycles(cls, n: int, cycles: Sequence[Sequence[int]]) -> "Permutation":
        im = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                im[a] = b
        return cls(tuple(im))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, j: int) -> int:
        return self.images[j]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.n != self.n:
            raise SizeMismatch(f"cannot compose degrees {self.n} and {other.n}")
        im = self.images
        return Permutation(tuple(im[j] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for j, k in enumerate(self.images):
            inv[k] = j
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(j == k for j, k in enumerate(self.images))

    def inversions(self) -> Iterator[tuple[int, int]]:
        """Pairs j < k with σ(j) > σ(k)."""
        im = self.images
        for j in range(len(im)):
            for k in range(j + 1, len(im)):
                if im[j] > im[k]:
                    yield j, k

    def sign(self) -> int:
        return sign(self)

    def cycle_type(self) -> "Partition":
        seen = [False] * self.n
        lengths = []
        for start in range(self.n):
            if seen[start]:
                continue
            length, j = 0, start
            while not seen[j]:
                seen[j] = True
                j = self.images[j]
                length += 1
            lengths.append(length)
        return Partition(tuple(sorted(lengths, reverse=True)))

    def to_json(self) -> list[int]:
        return list(self.images)


def sign(sigma: Permutation) -> int:
    """Parity of the inversion count, as ±1."""
    return -1 if sum(1 for _ in sigma.inversions()) % 2 else 1


def enumerate_group(n: int) -> list[Permutation]:
    """All n! permutations of degree n in lexicographic order (identity first)."""
    config.check_group(n)
    return [Permutation(p) for p in itertools.permutations(range(n))]


@dataclass(frozen=True, slots=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        p = self.parts
        if any(x < 1 for x in p) or any(a < b for a, b in zip(p, p[1:])):
            raise ValueError(f"not a partition: {p}")

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(parts))

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    def class_size(self) -> int:
        """Number of permutations with this cycle type."""
        mult = {}
        for p in self.parts:
            mult[p] = mult.get(p, 0) + 1
        z = prod(k**c * factorial(c) for k, c in mult.items())
        return factorial(self.n) // z

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"

    def to_json(self) -> list[int]:
        return list(self.parts)


@dataclass(frozen=True, slots=True)
class Subset:
    """A subset of {0,…,m−1} with members listed increasingly."""

    members: tuple[int, ...]
    m: int

    def __post_init__(self):
        mem = self.members
        if any(a >= b for a, b in zip(mem, mem[1:])) or any(x < 0 or x >= self.m for x in mem):
            raise ValueError(f"bad subset {mem} of range({self.m})")

    def __contains__(self, j: int) -> bool:
        return j in self.members

    def __len__(self) -> int:
        return len(self.members)

    def complement(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.m) if j not in self.members)

    def image(self, sigma: Permutation) -> "Subset":
        return Subset(tuple(sorted(sigma(j) for j in self.members)), self.m)


def partitions_of(n: int) -> list[Partition]:
    """All partitions of n, largest first part first: (3), (2,1), (1,1,1)."""
    if n < 0:
        raise ValueError("negative n")

    def gen(rest: int, cap: int):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail

    return [Partition(p) for p in gen(n, n)]


def hook_lengths(lam: Partition) -> list[list[int]]:
    conj = lam.conjugate().parts
    return [[lam.parts[r] - c + conj[c] - r - 1 for c in range(lam.parts[r])] for r in range(len(lam))]


def hook_dimension(lam: Partition) -> int:
    """Number of standard Young tableaux of shape lam."""
    return factorial(lam.n) // prod(h for row in hook_lengths(lam) for h in row)


def _beta_set(parts: tuple[int, ...]) -> tuple[int, ...]:
    k = len(parts)
    return tuple(parts[r] + (k - 1 - r) for r in range(k))


def _from_beta(beta: Sequence[int]) -> tuple[int, ...]:
    b = sorted(beta, reverse=True)
    k = len(b)
    return tuple(x for x in (b[r] - (k - 1 - r) for r in range(k)) if x > 0)


@lru_cache(maxsize=None)
def _mn(lam: tuple[int, ...], mu: tuple[int, ...]) -> int:
    if not mu:
        return 1 if not lam else 0
    r, rest = mu[0], mu[1:]
    beta = _beta_set(lam)
    occupied = set(beta)
    total = 0
    # removing an r-rim hook = sliding one bead down r places onto an empty spot
    for b in beta:
        if b - r >= 0 and b - r not in occupied:
            height = sum(1 for x in beta if b - r < x < b)
            new = [x for x in beta if x != b] + [b - r]
            total += (-1) ** height * _mn(_from_beta(new), rest)
    return total


def character(lam: Partition, mu: Partition) -> int:
    """χ_lam evaluated on the class of cycle type mu (Murnaghan–Nakayama)."""
    if lam.n != mu.n:
        raise SizeMismatch(f"|{lam}| = {lam.n} but |{mu}| = {mu.n}")
    return _mn(lam.parts, mu.parts)


def shuffles(m: int, i: int) -> list[tuple[Subset, Permutation]]:
    """One shuffle representative ς_S for each i-subset S of {0,…,m−1}.

    ς_S sends positions 0..m−i−1 increasingly onto the complement of S and
    positions m−i..m−1 increasingly onto S.  Subsets come in lexicographic order.
    """
    if not 0 <= i <= m:
        raise RangeError(f"need 0 <= i <= m, got m={m}, i={i}")
    out = []
    for members in itertools.combinations(range(m), i):
        S = Subset(tuple(members), m)
        out.append((S, Permutation(S.complement() + S.members)))
    assert len(out) == comb(m, i)
    return out


def young_subgroup(m: int, i: int) -> list[Permutation]:
    """Σ_{m−i} × Σ_i: permutations preserving {0..m−i−1} and {m−i..m−1}."""
    config.check_group(m)
    k = m - i
    out = []
    for a in itertools.permutations(range(k)):
        for b in itertools.permutations(range(k, m)):
            out.append(Permutation(a + b))
    return out
