"""Bounded chain complexes of finite-dimensional Q-vector spaces.

Differentials have degree −1: ``d(k)`` maps ``C_k`` to ``C_{k-1}`` and is
stored as a ``dim C_{k-1} × dim C_k`` matrix.  Tensor products follow the
Koszul rule ``d(x⊗y) = dx⊗y + (−1)^{|x|} x⊗dy`` and the symmetry picks up
``(−1)^{|x||y|}`` when homogeneous factors pass each other.

Over a field a bounded complex is contractible iff it is acyclic, so the
zero test in the homotopy category is just ``homology() == {}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from flint import fmpq

from .errors import (
    DegreeMismatch,
    NotAComplex,
    NotChainMap,
    NotClosed,
    NotIdempotent,
    NotInjective,
    NotInvertible,
    SizeMismatch,
)
from .linalg import (
    Matrix,
    block_diag,
    block_matrix,
    complement_columns,
    hstack,
    image_basis,
    inverse,
    rref,
    solve,
    split_idempotent,
)
from .symgroup import Permutation

Dims = dict[int, int]


class Complex:
    """A bounded complex; immutable after construction."""

    __slots__ = ("_dims", "_diffs", "_hash")

    def __init__(self, dims: Mapping[int, int], diffs: Mapping[int, Matrix] | None = None, check: bool = True):
        self._dims: Dims = {int(k): int(v) for k, v in sorted(dims.items()) if v}
        if any(v < 0 for v in self._dims.values()):
            raise NotAComplex("negative dimension")
        self._diffs: dict[int, Matrix] = {}
        for k, M in sorted((diffs or {}).items()):
            k = int(k)
            if M.shape != (self.dim(k - 1), self.dim(k)):
                raise NotAComplex(
                    f"d_{k} has shape {M.shape}, expected {(self.dim(k - 1), self.dim(k))}"
                )
            if not M.is_zero():
                self._diffs[k] = M
        self._hash = None
        if check:
            for k in self._diffs:
                if k - 1 in self._diffs and not (self._diffs[k - 1] @ self._diffs[k]).is_zero():
                    raise NotAComplex(f"d_{k - 1}∘d_{k} ≠ 0")

    def dim(self, k: int) -> int:
        return self._dims.get(k, 0)

    def d(self, k: int) -> Matrix:
        M = self._diffs.get(k)
        if M is None:
            return Matrix.zeros(self.dim(k - 1), self.dim(k))
        return M

    @property
    def dims(self) -> Dims:
        return dict(self._dims)

    @property
    def differentials(self) -> dict[int, Matrix]:
        return dict(self._diffs)

    @property
    def degrees(self) -> list[int]:
        return list(self._dims)

    def total_dim(self) -> int:
        return sum(self._dims.values())

    def is_zero(self) -> bool:
        return not self._dims

    def has_zero_differential(self) -> bool:
        return not self._diffs

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * v for k, v in self._dims.items())

    def homology(self) -> Dims:
        return homology(self)

    def is_acyclic(self) -> bool:
        return not homology(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Complex):
            return NotImplemented
        return self._dims == other._dims and self._diffs == other._diffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((tuple(self._dims.items()), tuple(self._diffs.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Complex(dims={self._dims}, nonzero_d={sorted(self._diffs)})"


def graded(dims: Mapping[int, int]) -> Complex:
    """A graded space viewed as a complex with zero differential."""
    return Complex(dims)


def unit() -> Complex:
    """Q concentrated in degree 0."""
    return Complex({0: 1})


def zero_complex() -> Complex:
    return Complex({})


def homology(C: Complex) -> Dims:
    """dim H_k = dim C_k − rank d_k − rank d_{k+1}; zero entries omitted."""
    out = {}
    for k in C.degrees:
        h = C.dim(k) - C.d(k).rank() - C.d(k + 1).rank()
        if h:
            out[k] = h
    return out


def add_dims(*ds: Mapping[int, int]) -> Dims:
    out: Dims = {}
    for d in ds:
        for k, v in d.items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in sorted(out.items()) if v}


def scale_dims(d: Mapping[int, int], c: int) -> Dims:
    return {k: c * v for k, v in d.items() if c * v}


def convolve_dims(a: Mapping[int, int], b: Mapping[int, int]) -> Dims:
    """Graded dimensions of a tensor product."""
    out: Dims = {}
    for p, x in a.items():
        for q, y in b.items():
            out[p + q] = out.get(p + q, 0) + x * y
    return {k: v for k, v in sorted(out.items()) if v}


def shift_dims(d: Mapping[int, int], r: int = 1) -> Dims:
    return {k + r: v for k, v in d.items()}


class ChainMap:
    """A degree-0 map of complexes, one block per degree."""

    __slots__ = ("source", "target", "_blocks")

    def __init__(self, source: Complex, target: Complex, blocks: Mapping[int, Matrix], check: bool = True):
        self.source = source
        self.target = target
        self._blocks: dict[int, Matrix] = {}
        for k, M in blocks.items():
            k = int(k)
            if M.shape != (target.dim(k), source.dim(k)):
                raise SizeMismatch(f"block {k} has shape {M.shape}, expected {(target.dim(k), source.dim(k))}")
            if not M.is_zero():
                self._blocks[k] = M
        if check:
            self.verify()

    def block(self, k: int) -> Matrix:
        M = self._blocks.get(k)
        if M is None:
            return Matrix.zeros(self.target.dim(k), self.source.dim(k))
        return M

    @property
    def blocks(self) -> dict[int, Matrix]:
        return dict(self._blocks)

    def degrees(self) -> list[int]:
        return sorted(set(self.source.degrees) | set(self.target.degrees))

    def verify(self) -> None:
        for k in set(self.source.degrees) | set(self.target.degrees):
            if self.target.d(k) @ self.block(k) != self.block(k - 1) @ self.source.d(k):
                raise NotChainMap(f"square at degree {k} does not commute")

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        if other.target != self.source:
            raise NotChainMap("composition of incompatible maps")
        ks = set(self._blocks) & set(other._blocks)
        return ChainMap(other.source, self.target, {k: self._blocks[k] @ other._blocks[k] for k in ks}, check=False)

    def _same_ends(self, other: "ChainMap") -> None:
        if self.source != other.source or self.target != other.target:
            raise NotChainMap("maps have different source or target")

    def __add__(self, other: "ChainMap") -> "ChainMap":
        self._same_ends(other)
        return ChainMap(self.source, self.target, {k: self.block(k) + other.block(k) for k in self.degrees()}, check=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        self._same_ends(other)
        return ChainMap(self.source, self.target, {k: self.block(k) - other.block(k) for k in self.degrees()}, check=False)

    def __neg__(self) -> "ChainMap":
        return self.scale(-1)

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target, {k: M.scale(c) for k, M in self._blocks.items()}, check=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self._blocks == other._blocks

    __hash__ = None

    def is_injective(self) -> bool:
        return all(self.block(k).rank() == self.source.dim(k) for k in self.source.degrees)

    def is_isomorphism(self) -> bool:
        return all(
            self.source.dim(k) == self.target.dim(k) and self.block(k).rank() == self.source.dim(k)
            for k in self.degrees()
        )

    def inverse(self) -> "ChainMap":
        blocks = {}
        for k in self.degrees():
            if self.source.dim(k) != self.target.dim(k):
                raise NotInvertible(f"dimensions differ in degree {k}")
            blocks[k] = inverse(self.block(k))
        return ChainMap(self.target, self.source, blocks, check=False)

    def is_idempotent(self) -> bool:
        return all(M @ M == M for M in self._blocks.values())

    def __repr__(self) -> str:
        return f"ChainMap({self.source.dims} -> {self.target.dims})"


def identity(C: Complex) -> ChainMap:
    return ChainMap(C, C, {k: Matrix.identity(C.dim(k)) for k in C.degrees}, check=False)


def zero_map(source: Complex, target: Complex) -> ChainMap:
    return ChainMap(source, target, {}, check=False)


# ---------------------------------------------------------------- direct sums


def direct_sum(*Cs: Complex) -> Complex:
    degrees = sorted(set().union(*(C.degrees for C in Cs))) if Cs else []
    dims = {k: sum(C.dim(k) for C in Cs) for k in degrees}
    diffs = {k: block_diag([C.d(k) for C in Cs]) for k in degrees}
    return Complex(dims, diffs, check=False)


def direct_sum_maps(*fs: ChainMap) -> ChainMap:
    S = direct_sum(*(f.source for f in fs))
    T = direct_sum(*(f.target for f in fs))
    ks = sorted(set(S.degrees) | set(T.degrees))
    return ChainMap(S, T, {k: block_diag([f.block(k) for f in fs]) for k in ks}, check=False)


def block_chain_map(grid: Sequence[Sequence[ChainMap]]) -> ChainMap:
    """The map ⊕_j S_j → ⊕_i T_i whose (i, j) component is grid[i][j]."""
    sources = [f.source for f in grid[0]]
    targets = [row[0].target for row in grid]
    for i, row in enumerate(grid):
        for j, f in enumerate(row):
            if f.source != sources[j] or f.target != targets[i]:
                raise NotChainMap(f"block ({i},{j}) has the wrong source or target")
    S, T = direct_sum(*sources), direct_sum(*targets)
    ks = sorted(set(S.degrees) | set(T.degrees))
    return ChainMap(S, T, {k: block_matrix([[f.block(k) for f in row] for row in grid]) for k in ks}, check=False)


# ---------------------------------------------------------------- tensor products

BasisVector = tuple[int, int]  # (degree, index within that degree)


def _basis_vectors(C: Complex) -> list[BasisVector]:
    return [(p, i) for p in C.degrees for i in range(C.dim(p))]


def _sparse_columns(M: Matrix) -> dict[int, list[tuple[int, fmpq]]]:
    cols: dict[int, list[tuple[int, fmpq]]] = {}
    for (r, c), v in M._raw_nonzero():
        cols.setdefault(c, []).append((r, v))
    return cols


class TensorProduct:
    """F_0 ⊗ … ⊗ F_{m−1} with its basis bookkeeping.

    A basis vector of degree n is a tuple of factor basis vectors
    ``((p_0, i_0), …, (p_{m−1}, i_{m−1}))`` with Σ p_j = n; within a degree
    they are ordered lexicographically.  The empty product is the unit.
    """

    def __init__(self, factors: Sequence[Complex]):
        self.factors = tuple(factors)
        self.basis: dict[int, list[tuple[BasisVector, ...]]] = {}
        for t in itertools.product(*(_basis_vectors(F) for F in self.factors)):
            n = sum(p for p, _ in t)
            self.basis.setdefault(n, []).append(t)
        self.basis = dict(sorted(self.basis.items()))
        self.index: dict[tuple[BasisVector, ...], int] = {}
        for vecs in self.basis.values():
            for pos, t in enumerate(vecs):
                self.index[t] = pos
        self.complex = Complex({n: len(v) for n, v in self.basis.items()}, self._differentials(), check=False)

    def __len__(self) -> int:
        return len(self.factors)

    def _differentials(self) -> dict[int, Matrix]:
        dcols = [{p: _sparse_columns(F.d(p)) for p in F.degrees} for F in self.factors]
        if not any(any(c for c in dc.values()) for dc in dcols):
            return {}
        diffs = {}
        for n, vecs in self.basis.items():
            entries: dict[tuple[int, int], fmpq] = {}
            for col, t in enumerate(vecs):
                prefix = 0
                for j, (p, i) in enumerate(t):
                    sgn = -1 if prefix % 2 else 1
                    for r, c in dcols[j].get(p, {}).get(i, ()):
                        new = t[:j] + ((p - 1, r),) + t[j + 1:]
                        key = (self.index[new], col)
                        entries[key] = entries.get(key, fmpq(0)) + sgn * c
                    prefix += p
            if entries:
                diffs[n] = Matrix.from_sparse(len(self.basis.get(n - 1, ())), len(vecs), entries)
        return diffs

    def dims(self) -> Dims:
        return self.complex.dims


def tensor(C: Complex, D: Complex) -> TensorProduct:
    """C ⊗ D with Koszul differential; ``.complex`` is the tensor complex."""
    return TensorProduct((C, D))


def tensor_power(C: Complex, m: int) -> TensorProduct:
    return TensorProduct((C,) * m)


def koszul_sign(sigma: Permutation, t: Sequence[BasisVector], inversions=None) -> int:
    inv = inversions if inversions is not None else sigma.inversions()
    odd = sum(t[j][0] * t[k][0] for j, k in inv) % 2
    return -1 if odd else 1


def permute_factors(sigma: Permutation, src: TensorProduct, tgt: TensorProduct | None = None) -> ChainMap:
    """Γ_σ: the factor in position j moves to position σ(j), with Koszul sign.

    ``tgt`` must have factor σ(j) equal to factor j of ``src``; it is built
    when omitted.
    """
    m = len(src)
    if sigma.n != m:
        raise DegreeMismatch(f"permutation of degree {sigma.n} on a {m}-fold product")
    moved = [None] * m
    for j in range(m):
        moved[sigma(j)] = src.factors[j]
    if tgt is None:
        tgt = src if tuple(moved) == src.factors else TensorProduct(moved)
    elif tuple(tgt.factors) != tuple(moved):
        raise DegreeMismatch("target factors do not match the permuted source")
    inv = list(sigma.inversions())
    blocks = {}
    for n, vecs in src.basis.items():
        entries = {}
        for col, t in enumerate(vecs):
            w = [None] * m
            for j in range(m):
                w[sigma(j)] = t[j]
            entries[(tgt.index[tuple(w)], col)] = koszul_sign(sigma, t, inv)
        blocks[n] = Matrix.from_sparse(len(tgt.basis[n]), len(vecs), entries)
    return ChainMap(src.complex, tgt.complex, blocks, check=False)


def tensor_maps(maps: Sequence[ChainMap], src: TensorProduct, tgt: TensorProduct) -> ChainMap:
    """f_0 ⊗ … ⊗ f_{m−1}; degree-0 maps carry no Koszul sign."""
    if len(maps) != len(src) or len(maps) != len(tgt):
        raise SizeMismatch("number of maps differs from number of factors")
    for f, F, G in zip(maps, src.factors, tgt.factors):
        if f.source != F or f.target != G:
            raise NotChainMap("map does not match its tensor factor")
    cols = [{p: _sparse_columns(f.block(p)) for p in f.source.degrees} for f in maps]
    blocks = {}
    for n, vecs in src.basis.items():
        entries: dict[tuple[int, int], fmpq] = {}
        for col, t in enumerate(vecs):
            choices = [cols[j].get(p, {}).get(i, ()) for j, (p, i) in enumerate(t)]
            for combo in itertools.product(*choices):
                coef = fmpq(1)
                img = []
                for (p, _), (r, c) in zip(t, combo):
                    coef *= c
                    img.append((p, r))
                key = (tgt.index[tuple(img)], col)
                entries[key] = entries.get(key, fmpq(0)) + coef
        blocks[n] = Matrix.from_sparse(len(tgt.basis.get(n, ())), len(vecs), entries)
    return ChainMap(src.complex, tgt.complex, blocks, check=False)


def braiding(C: Complex, D: Complex) -> ChainMap:
    """x⊗y ↦ (−1)^{|x||y|} y⊗x from C⊗D to D⊗C."""
    return permute_factors(Permutation((1, 0)), tensor(C, D), tensor(D, C))


# ---------------------------------------------------------------- shift and cone


def shift(C: Complex, times: int = 1) -> Complex:
    """(ΣC)_k = C_{k−1} with the differential negated."""
    sgn = -1 if times % 2 else 1
    return Complex(
        {k + times: v for k, v in C.dims.items()},
        {k + times: M.scale(sgn) for k, M in C.differentials.items()},
        check=False,
    )


def shift_map(f: ChainMap, times: int = 1) -> ChainMap:
    return ChainMap(shift(f.source, times), shift(f.target, times), {k + times: M for k, M in f.blocks.items()}, check=False)


@dataclass(frozen=True)
class Cone:
    """cone(f) with the triangle maps Y → cone(f) → ΣX."""

    complex: Complex
    inclusion: ChainMap
    projection: ChainMap


def cone_triangle(f: ChainMap) -> Cone:
    X, Y = f.source, f.target
    degrees = sorted(set(Y.degrees) | {k + 1 for k in X.degrees})
    dims = {k: Y.dim(k) + X.dim(k - 1) for k in degrees}
    diffs = {}
    for k in degrees:
        # cone_k = Y_k ⊕ X_{k−1};  d = [[d_Y, f], [0, −d_X]]
        diffs[k] = block_matrix([
            [Y.d(k), f.block(k - 1)],
            [Matrix.zeros(X.dim(k - 2), Y.dim(k)), -X.d(k - 1)],
        ])
    C = Complex(dims, diffs)
    incl = {k: block_matrix([[Matrix.identity(Y.dim(k))], [Matrix.zeros(X.dim(k - 1), Y.dim(k))]]) for k in Y.degrees}
    SX = shift(X)
    proj = {k: hstack([Matrix.zeros(X.dim(k - 1), Y.dim(k)), Matrix.identity(X.dim(k - 1))]) for k in SX.degrees}
    return Cone(C, ChainMap(Y, C, incl, check=False), ChainMap(C, SX, proj, check=False))


def cone(f: ChainMap) -> Complex:
    """cone(f)_k = Y_k ⊕ X_{k−1} with differential [[d_Y, f], [0, −d_X]]."""
    return cone_triangle(f).complex


# ---------------------------------------------------------------- sub- and quotient complexes


class Subcomplex:
    """Degreewise subspaces of ``ambient`` stable under its differential."""

    __slots__ = ("ambient", "basis")

    def __init__(self, ambient: Complex, basis: Mapping[int, Matrix], check: bool = True, reduce: bool = True):
        self.ambient = ambient
        clean = {}
        for k, B in basis.items():
            if B.rows != ambient.dim(k):
                raise SizeMismatch(f"basis in degree {k} has {B.rows} rows, ambient has {ambient.dim(k)}")
            if reduce:
                B = image_basis(B)
            if B.cols:
                clean[int(k)] = B
        self.basis = dict(sorted(clean.items()))
        if check:
            self.verify()

    def span(self, k: int) -> Matrix:
        return self.basis.get(k, Matrix.zeros(self.ambient.dim(k), 0))

    def dims(self) -> Dims:
        return {k: B.cols for k, B in self.basis.items()}

    def verify(self) -> None:
        for k, B in self.basis.items():
            image = self.ambient.d(k) @ B
            if image.is_zero():
                continue
            below = self.span(k - 1)
            if hstack([below, image]).rank() != below.cols:
                raise NotClosed(f"d maps the degree-{k} span outside the subspace")

    def as_complex(self) -> tuple[Complex, ChainMap]:
        """The subcomplex with the restricted differential, and its inclusion."""
        diffs = {}
        for k, B in self.basis.items():
            image = self.ambient.d(k) @ B
            if not image.is_zero():
                diffs[k] = solve(self.span(k - 1), image)
        S = Complex(self.dims(), diffs, check=False)
        return S, ChainMap(S, self.ambient, self.basis, check=False)


def image_of(f: ChainMap) -> Subcomplex:
    return Subcomplex(f.target, {k: f.block(k) for k in f.source.degrees}, check=False)


@dataclass(frozen=True)
class ImageSplit:
    """The image of an idempotent P = inclusion∘projection."""

    complex: Complex
    inclusion: ChainMap
    projection: ChainMap


def image_subcomplex(P: ChainMap) -> ImageSplit:
    if P.source != P.target:
        raise NotIdempotent("not an endomorphism")
    P.verify()
    C = P.source
    splits = {}
    for k in C.degrees:
        try:
            splits[k] = split_idempotent(P.block(k))
        except NotIdempotent as exc:
            raise NotIdempotent(f"degree {k}: {exc}") from None
    dims = {k: s.rank for k, s in splits.items()}
    diffs = {}
    for k, s in splits.items():
        if k - 1 in splits and s.rank and splits[k - 1].rank:
            diffs[k] = splits[k - 1].projection @ C.d(k) @ s.inclusion
    I = Complex(dims, diffs, check=False)
    incl = ChainMap(I, C, {k: s.inclusion for k, s in splits.items()}, check=False)
    proj = ChainMap(C, I, {k: s.projection for k, s in splits.items()}, check=False)
    return ImageSplit(I, incl, proj)


def quotient(C: Complex, S: Subcomplex) -> tuple[Complex, ChainMap]:
    """C/S with the induced differential and the projection C → C/S."""
    if S.ambient != C:
        raise NotClosed("subcomplex lives in a different complex")
    S.verify()
    proj = {}
    lift = {}
    for k in C.degrees:
        B = S.span(k)
        comp = complement_columns(B)
        E = Matrix.identity(C.dim(k)).take_columns(comp)
        # coordinates in the basis [B | E]; the quotient keeps the E part
        coords = inverse(hstack([B, E]))
        proj[k] = coords.take_rows(range(B.cols, C.dim(k)))
        lift[k] = E
    dims = {k: M.rows for k, M in proj.items()}
    diffs = {}
    for k in C.degrees:
        if k - 1 in proj and dims[k] and dims[k - 1]:
            diffs[k] = proj[k - 1] @ C.d(k) @ lift[k]
    Q = Complex(dims, diffs, check=False)
    return Q, ChainMap(C, Q, proj, check=False)


def cokernel(f: ChainMap) -> tuple[Complex, ChainMap]:
    """Y / image(f) for a degreewise-injective f."""
    if not f.is_injective():
        raise NotInjective("cokernel is only taken along injective maps")
    return quotient(f.target, image_of(f))


# ---------------------------------------------------------------- triangle splitting


@dataclass(frozen=True)
class BlockTriangleInput:
    """The block map [[a, b], [c, d]]: A ⊕ B → A ⊕ C with a an automorphism of A."""

    a: ChainMap
    b: ChainMap
    c: ChainMap
    d: ChainMap

    def __post_init__(self):
        A, B, C = self.a.source, self.b.source, self.c.target
        if self.a.target != A:
            raise NotChainMap("a must be an endomorphism of A")
        if self.b.target != A:
            raise NotChainMap("b must map B to A")
        if self.c.source != A:
            raise NotChainMap("c must map A to C")
        if self.d.source != B or self.d.target != C:
            raise NotChainMap("d must map B to C")

    def full_map(self) -> ChainMap:
        return block_chain_map([[self.a, self.b], [self.c, self.d]])


@dataclass
class SplitReport:
    t: ChainMap
    cone_full: Dims
    cone_t: Dims
    cone_a: Dims
    block_identity: bool
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = self.cone_full == self.cone_t and not self.cone_a and self.block_identity


def schur_split(data: BlockTriangleInput) -> tuple[ChainMap, SplitReport]:
    """Reduce the triangle over [[a, b], [c, d]] to the one over t = d − c·a⁻¹·b."""
    a, b, c, d = data.a, data.b, data.c, data.d
    for k in a.source.degrees:
        if a.block(k).rank() != a.source.dim(k):
            raise NotInvertible(f"block a is singular in degree {k}")
    a_inv = a.inverse()
    t = d - c @ a_inv @ b
    full = data.full_map()
    # [[1, 0], [−c a⁻¹, 1]] · [[a, b], [c, d]] · [[1, −a⁻¹ b], [0, 1]] = [[a, 0], [0, t]]
    A, B, C = a.source, b.source, c.target
    left = block_chain_map([[identity(A), zero_map(C, A)], [-(c @ a_inv), identity(C)]])
    right = block_chain_map([[identity(A), -(a_inv @ b)], [zero_map(A, B), identity(B)]])
    diag = direct_sum_maps(a, t)
    block_ok = all((left @ full @ right).block(k) == diag.block(k) for k in diag.degrees())
    report = SplitReport(
        t=t,
        cone_full=homology(cone(full)),
        cone_t=homology(cone(t)),
        cone_a=homology(cone(a)),
        block_identity=block_ok,
    )
    return t, report
