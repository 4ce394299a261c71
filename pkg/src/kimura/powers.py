"""Symmetric-group actions on tensor powers and the powers they cut out.

``Γ_σ`` sends ``v_1⊗…⊗v_m`` to ``±v_{σ⁻¹(1)}⊗…⊗v_{σ⁻¹(m)}``: the factor in
position j lands in position σ(j), and every pair of odd-degree factors that
trade places contributes −1.  Wedge powers are images of the antisymmetrizer,
symmetric powers of the symmetrizer, Schur powers of the central idempotents.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from flint import fmpq

from . import config
from .checks import Verdict
from .complexes import (
    ChainMap,
    Complex,
    Dims,
    ImageSplit,
    TensorProduct,
    add_dims,
    graded,
    homology,
    image_subcomplex,
    koszul_sign,
    permute_factors,
    shift,
    shift_dims,
    tensor,
)
from .errors import CapExceeded, DegreeMismatch, MixedParity
from .group_algebra import GroupAlgebraElement, antisymmetrizer, central_idempotent, symmetrizer
from .linalg import Matrix
from .symgroup import Partition, Permutation


class PowerContext:
    """The m-th tensor power of ``base`` together with its basis indexing."""

    def __init__(self, base: Complex, m: int, check_caps: bool = True):
        if check_caps:
            config.check_power(base.total_dim(), m)
        self.base = base
        self.m = m
        self.product = TensorProduct((base,) * m)
        self._signed: dict[Permutation, dict[int, list[tuple[int, int]]]] = {}

    @property
    def complex(self) -> Complex:
        return self.product.complex

    def signed_permutation(self, sigma: Permutation) -> dict[int, list[tuple[int, int]]]:
        """Per degree, column → (row, ±1) describing Γ_σ."""
        cached = self._signed.get(sigma)
        if cached is not None:
            return cached
        if sigma.n != self.m:
            raise DegreeMismatch(f"permutation of degree {sigma.n} acting on an {self.m}-fold power")
        inv = list(sigma.inversions())
        idx = self.product.index
        table = {}
        for n, vecs in self.product.basis.items():
            col_map = []
            for t in vecs:
                w = [None] * self.m
                for j in range(self.m):
                    w[sigma(j)] = t[j]
                col_map.append((idx[tuple(w)], koszul_sign(sigma, t, inv)))
            table[n] = col_map
        self._signed[sigma] = table
        return table


def _context(C: Complex, m: int) -> PowerContext:
    return PowerContext(C, m)


def gamma_action(sigma: Permutation, ctx: PowerContext) -> ChainMap:
    """Γ_σ as an automorphism of base^(m)."""
    if sigma.n != ctx.m:
        raise DegreeMismatch(f"permutation of degree {sigma.n} acting on an {ctx.m}-fold power")
    return permute_factors(sigma, ctx.product)


def algebra_action(a: GroupAlgebraElement, ctx: PowerContext) -> ChainMap:
    """Linear extension Γ(Σ c_σ σ) = Σ c_σ Γ_σ."""
    if a.n != ctx.m:
        raise DegreeMismatch(f"element of Q[S_{a.n}] acting on an {ctx.m}-fold power")
    P = ctx.complex
    acc: dict[int, dict[tuple[int, int], fmpq]] = {n: {} for n in P.degrees}
    for sigma, c in a.terms.items():
        c = fmpq(c.numerator, c.denominator)
        neg = -c
        for n, col_map in ctx.signed_permutation(sigma).items():
            entries = acc[n]
            for col, (row, sgn) in enumerate(col_map):
                key = (row, col)
                entries[key] = entries.get(key, fmpq(0)) + (c if sgn > 0 else neg)
    blocks = {n: Matrix.from_sparse(P.dim(n), P.dim(n), e) for n, e in acc.items()}
    return ChainMap(P, P, blocks, check=False)


def power_image(C: Complex, element: GroupAlgebraElement) -> ImageSplit:
    """Image of Γ(element) on C^(m), m = element.n."""
    return image_subcomplex(algebra_action(element, _context(C, element.n)))


def wedge_power(C: Complex, n: int) -> Complex:
    """Image of the antisymmetrizer on C^(n)."""
    config.check_power(C.total_dim(), n)
    return power_image(C, antisymmetrizer(n)).complex


def sym_power(C: Complex, n: int) -> Complex:
    """Image of the symmetrizer on C^(n)."""
    config.check_power(C.total_dim(), n)
    return power_image(C, symmetrizer(n)).complex


def signed_power(C: Complex, n: int, sign: str) -> Complex:
    """``sign='+'`` gives the wedge power, ``'-'`` the symmetric power."""
    return wedge_power(C, n) if _is_wedge(sign) else sym_power(C, n)


def schur_power(C: Complex, lam: Partition) -> Complex:
    config.check_power(C.total_dim(), lam.n)
    return power_image(C, central_idempotent(lam)).complex


def _is_wedge(sign: str) -> bool:
    if sign in ("+", "wedge"):
        return True
    if sign in ("-", "sym"):
        return False
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def graded_power_dims(dims: Mapping[int, int], n: int, sign: str) -> Dims:
    """Graded dimensions of the wedge (+) or symmetric (−) n-th power of a
    graded space, by counting Σ_n-orbits of basis tuples.

    An orbit survives the antisymmetrizer unless an even basis vector repeats,
    and survives the symmetrizer unless an odd one repeats (a repeated vector
    of degree p is fixed by a transposition acting by (−1)^p).
    """
    wedge = _is_wedge(sign)
    # poly[k][deg] = number of admissible multisets of size k and total degree deg
    poly: list[dict[int, int]] = [{0: 1}] + [{} for _ in range(n)]
    for p, count in sorted(dims.items()):
        for _ in range(count):
            repeat = (p % 2 == 1) if wedge else (p % 2 == 0)
            max_mult = n if repeat else 1
            new = [dict() for _ in range(n + 1)]
            for k in range(n + 1):
                for deg, c in poly[k].items():
                    for mult in range(0, min(max_mult, n - k) + 1):
                        tgt = new[k + mult]
                        tgt[deg + mult * p] = tgt.get(deg + mult * p, 0) + c
            poly = new
    return {k: v for k, v in sorted(poly[n].items()) if v}


def _parity_parts(C: Complex) -> tuple[Dims, Dims]:
    H = homology(C)
    return ({k: v for k, v in H.items() if k % 2 == 0}, {k: v for k, v in H.items() if k % 2})


def _power_dims(dims: Dims, n: int, sign: str) -> tuple[Dims, str]:
    """Graded dims of a power of the zero-differential space ``dims``."""
    total = sum(dims.values())
    try:
        config.check_power(total, n)
    except CapExceeded:
        return graded_power_dims(dims, n, sign), "orbit-count"
    return signed_power(graded(dims), n, sign).dims, "matrix"


@dataclass
class KimuraProfile:
    even_dimension: int
    odd_dimension: int
    even_witness: int
    odd_witness: int
    witness_method: str
    verified: bool

    @property
    def dimension(self) -> int:
        return self.even_dimension + self.odd_dimension

    @property
    def is_zero(self) -> bool:
        return self.dimension == 0

    def to_json(self) -> dict:
        return {
            "even_dimension": self.even_dimension,
            "odd_dimension": self.odd_dimension,
            "dimension": self.dimension,
            "even_witness": self.even_witness,
            "odd_witness": self.odd_witness,
            "witness_method": self.witness_method,
            "verified": self.verified,
        }


def kimura_profile(C: Complex) -> KimuraProfile:
    """Even/odd dimensions from the homology, with the vanishing exponents
    confirmed on the zero-differential homology parts.

    The dimension is the largest exponent whose power is nonzero, so the
    smallest vanishing exponent is dimension + 1 and dimensions add over
    direct sums.
    """
    even, odd = _parity_parts(C)
    e, o = sum(even.values()), sum(odd.values())
    methods = set()
    ok = True
    for dims, d, sign in ((even, e, "+"), (odd, o, "-")):
        below, m1 = _power_dims(dims, d, sign)
        at, m2 = _power_dims(dims, d + 1, sign)
        if dims:
            methods |= {m1, m2}
        ok &= bool(below) and not at
    method = "matrix" if methods <= {"matrix"} else "orbit-count" if methods == {"orbit-count"} else "mixed"
    return KimuraProfile(e, o, e + 1, o + 1, method, ok)


def parity_flip_check(C: Complex, n: int) -> Verdict:
    """Λ^n(ΣC) ≅ Σ^n Sym^n(C) and Sym^n(ΣC) ≅ Σ^n Λ^n(C), compared on graded
    dimensions and on homology."""
    config.check_power(C.total_dim(), n)
    SC = shift(C)
    w_shift, s_plain = wedge_power(SC, n), sym_power(C, n)
    s_shift, w_plain = sym_power(SC, n), wedge_power(C, n)
    details = {
        "n": n,
        "wedge_of_shift": w_shift.dims,
        "shifted_sym": shift_dims(s_plain.dims, n),
        "sym_of_shift": s_shift.dims,
        "shifted_wedge": shift_dims(w_plain.dims, n),
        "wedge_of_shift_total": w_shift.total_dim(),
        "sym_total": s_plain.total_dim(),
    }
    passed = (
        details["wedge_of_shift"] == details["shifted_sym"]
        and details["sym_of_shift"] == details["shifted_wedge"]
        and homology(w_shift) == shift_dims(homology(s_plain), n)
        and homology(s_shift) == shift_dims(homology(w_plain), n)
    )
    return Verdict("parity_flip", passed, details)


def _pure_parity(p: KimuraProfile) -> str:
    if p.odd_dimension == 0:
        return "even"
    if p.even_dimension == 0:
        return "odd"
    raise MixedParity(f"homology has even part {p.even_dimension} and odd part {p.odd_dimension}")


def tensor_parity_check(C: Complex, D: Complex) -> Verdict:
    """Pure objects of equal parity tensor to an even object, of different
    parity to an odd one, with multiplicative dimension."""
    pc, pd = kimura_profile(C), kimura_profile(D)
    a, b = _pure_parity(pc), _pure_parity(pd)
    pt = kimura_profile(tensor(C, D).complex)
    expected = "even" if a == b else "odd"
    if pt.is_zero:
        got = expected
    else:
        got = "even" if pt.odd_dimension == 0 else "odd" if pt.even_dimension == 0 else "mixed"
    passed = got == expected and pt.dimension == pc.dimension * pd.dimension and pt.verified
    return Verdict(
        "tensor_parity",
        passed,
        {"parities": [a, b], "expected": expected, "got": got, "dimension": pt.dimension,
         "expected_dimension": pc.dimension * pd.dimension},
    )


def schur_completeness(C: Complex, n: int) -> Verdict:
    """Σ_λ graded dims of the Schur powers equal those of C^(n)."""
    from .symgroup import partitions_of

    ctx = _context(C, n)
    pieces = {str(lam): power_image(C, central_idempotent(lam)).complex.dims for lam in partitions_of(n)}
    total = add_dims(*pieces.values())
    return Verdict("schur_completeness", total == ctx.complex.dims, {"pieces": pieces, "power": ctx.complex.dims})
