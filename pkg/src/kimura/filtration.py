"""Cube objects, mixed idempotents and the filtration on powers of the
middle term of a short exact sequence 0 → X → Y → Z → 0.

Here f: X → Y is a degreewise injection of complexes and Z = Y/f(X).  The
cube object (Y,X,m−i,i) is the subcomplex of Y^(m) spanned by all tensors
with f(X) in the slots of some i-subset S; it is stable under Σ_m, so the
(anti)symmetrizer restricts to it.  Its image I_i gives the decreasing
filtration

    Y^[m) = I_0 ⊇ I_1 ⊇ … ⊇ I_m ⊇ I_{m+1} = 0,

whose graded pieces J_i = I_i / I_{i+1} match Z^[m−i) ⊗ X^[i).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Any

from flint import fmpq

from . import config
from .checks import Verdict, jsonable
from .complexes import (
    ChainMap,
    Complex,
    Dims,
    Subcomplex,
    TensorProduct,
    add_dims,
    block_chain_map,
    cokernel,
    convolve_dims,
    direct_sum,
    homology,
    identity,
    image_subcomplex,
    permute_factors,
    quotient,
    scale_dims,
    tensor,
    tensor_maps,
)
from .errors import InapplicableError, NotInjective, NotIdempotent, RangeError
from .group_algebra import antisymmetrizer, symmetrizer, young_symmetrizer_product
from .linalg import Matrix, hstack, solve
from .powers import PowerContext, _is_wedge, algebra_action, kimura_profile, signed_power
from .symgroup import Permutation, enumerate_group, shuffles, sign as perm_sign


def _sign_label(sign: str) -> str:
    return "+" if _is_wedge(sign) else "-"


class ShortExactSequence:
    """0 → X → Y → Z → 0 determined by an injective chain map f: X → Y."""

    def __init__(self, f: ChainMap):
        if not f.is_injective():
            raise NotInjective("the map X → Y must be injective in every degree")
        self.f = f
        self.X = f.source
        self.Y = f.target
        self.Z, self.q = cokernel(f)


@dataclass
class CubeObject:
    f: ChainMap
    m: int
    i: int
    subcomplex: Subcomplex

    def dims(self) -> Dims:
        return self.subcomplex.dims()

    def is_stable(self, ctx: PowerContext) -> bool:
        """Stability under the adjacent transpositions, which generate Σ_m."""
        from .powers import gamma_action

        for j in range(self.m - 1):
            g = gamma_action(Permutation.transposition(self.m, j, j + 1), ctx)
            for k, B in self.subcomplex.basis.items():
                if hstack([B, g.block(k) @ B]).rank() != B.cols:
                    return False
        return True


@dataclass
class MixedImage:
    """I^±_{m,i}: the image of the (anti)symmetrizer restricted to a cube object."""

    complex: Complex
    inclusion: ChainMap  # into the cube complex
    projection: ChainMap  # from the cube complex
    cube_complex: Complex
    ambient_inclusion: ChainMap  # into Y^(m)


def _check_range(m: int, i: int) -> None:
    if m < 0 or not 0 <= i <= m:
        raise RangeError(f"need 0 <= i <= m, got m={m}, i={i}")


class TriangleFiltration:
    """All levels of the filtration on the m-th powers of Y, computed lazily."""

    def __init__(self, f: ChainMap, m: int):
        _check_range(m, 0)
        self.ses = ShortExactSequence(f)
        self.m = m
        self.ctx = PowerContext(self.ses.Y, m)
        self._cubes: dict[int, CubeObject] = {}
        self._idem: dict[str, ChainMap] = {}
        self._images: dict[tuple[int, str], MixedImage] = {}

    @property
    def X(self) -> Complex:
        return self.ses.X

    @property
    def Y(self) -> Complex:
        return self.ses.Y

    @property
    def Z(self) -> Complex:
        return self.ses.Z

    # ------------------------------------------------------------ cube objects

    def cube(self, i: int) -> CubeObject:
        _check_range(self.m, i)
        if i not in self._cubes:
            self._cubes[i] = self._build_cube(i)
        return self._cubes[i]

    def _build_cube(self, i: int) -> CubeObject:
        f, Y, m = self.ses.f, self.Y, self.m
        P = self.ctx.complex
        if i == 0:
            basis = {k: Matrix.identity(P.dim(k)) for k in P.degrees}
            return CubeObject(f, m, i, Subcomplex(P, basis, check=False, reduce=False))
        idY = identity(Y)
        spans: dict[int, list[Matrix]] = {k: [] for k in P.degrees}
        for S, _ in shuffles(m, i):
            src = TensorProduct([self.X if j in S else Y for j in range(m)])
            g = tensor_maps([f if j in S else idY for j in range(m)], src, self.ctx.product)
            for k in src.complex.degrees:
                spans[k].append(g.block(k))
        basis = {k: hstack(bl) for k, bl in spans.items() if bl}
        return CubeObject(f, m, i, Subcomplex(P, basis))

    def cube_complex(self, i: int) -> tuple[Complex, ChainMap]:
        return self.cube(i).subcomplex.as_complex()

    # ------------------------------------------------------------ mixed idempotents

    def idempotent(self, sign: str) -> ChainMap:
        s = _sign_label(sign)
        if s not in self._idem:
            elem = antisymmetrizer(self.m) if s == "+" else symmetrizer(self.m)
            self._idem[s] = algebra_action(elem, self.ctx)
        return self._idem[s]

    def mixed_image(self, i: int, sign: str) -> MixedImage:
        s = _sign_label(sign)
        key = (i, s)
        if key not in self._images:
            self._images[key] = self._build_mixed_image(i, s)
        return self._images[key]

    def _build_mixed_image(self, i: int, sign: str) -> MixedImage:
        cube = self.cube(i)
        K, incl = cube.subcomplex.as_complex()
        P = self.idempotent(sign)
        blocks = {}
        for k, B in cube.subcomplex.basis.items():
            # P maps the cube into itself, so P·B = B·R for a unique R
            blocks[k] = solve(B, P.block(k) @ B)
        R = ChainMap(K, K, blocks, check=False)
        if not R.is_idempotent():
            raise NotIdempotent(f"restricted idempotent fails at level {i}")
        split = image_subcomplex(R)
        return MixedImage(split.complex, split.inclusion, split.projection, K, incl @ split.inclusion)

    def level_dims(self, i: int, sign: str) -> Dims:
        if i == self.m + 1:
            return {}
        return self.mixed_image(i, sign).complex.dims

    # ------------------------------------------------------------ graded pieces

    def graded_piece(self, i: int, sign: str) -> Complex:
        """J_i = I_i / I_{i+1}; J_m = I_m."""
        _check_range(self.m, i)
        upper = self.mixed_image(i, sign)
        if i == self.m:
            return upper.complex
        lower = self.mixed_image(i + 1, sign)
        A = upper.ambient_inclusion
        Bl = lower.ambient_inclusion
        basis = {k: solve(A.block(k), Bl.block(k)) for k in lower.complex.degrees}
        sub = Subcomplex(upper.complex, basis, check=True, reduce=False)
        J, _ = quotient(upper.complex, sub)
        return J

    def expected_piece(self, i: int, sign: str) -> Complex:
        """Z^[m−i) ⊗ X^[i) (or the symmetric variant)."""
        return tensor(signed_power(self.Z, self.m - i, sign), signed_power(self.X, i, sign)).complex


# ---------------------------------------------------------------- public operations


def cube_object(f: ChainMap, m: int, i: int) -> CubeObject:
    """(Y,X,m−i,i) ⊂ Y^(m): the internal sum of the images of the (Y,X)_S."""
    _check_range(m, i)
    return TriangleFiltration(f, m).cube(i)


def mixed_part_complex(Z: Complex, X: Complex, m: int, i: int) -> Complex:
    """[Z,X,m−i,i] = ⊕_{S ∈ 𝒮_i} (Z,X)_S with X in the slots of S."""
    return direct_sum(*(TensorProduct([X if j in S else Z for j in range(m)]).complex for S, _ in shuffles(m, i)))


def cube_dims_formula(X: Complex, Z: Complex, m: int, i: int) -> Dims:
    """Σ_{j ≥ i} C(m, j) · dims(X^(j) ⊗ Z^(m−j)), using Y ≅ X ⊕ Z degreewise."""
    total: Dims = {}
    for j in range(i, m + 1):
        xj = TensorProduct([X] * j).dims()
        zj = TensorProduct([Z] * (m - j)).dims()
        total = add_dims(total, scale_dims(convolve_dims(xj, zj), comb(m, j)))
    return total


def cube_quotient_check(f: ChainMap, m: int, i: int, filt: TriangleFiltration | None = None) -> Verdict:
    """(Y,X,m−i+1,i−1) / (Y,X,m−i,i) ≅ [Z,X,m−i+1,i−1], checked on graded
    dimensions and homology, together with the dimension count of the cube."""
    _check_range(m, i)
    filt = filt or TriangleFiltration(f, m)
    cube = filt.cube(i)
    details: dict[str, Any] = {"m": m, "i": i, "cube_dims": cube.dims()}
    formula = cube_dims_formula(filt.X, filt.Z, m, i)
    details["cube_dims_formula"] = formula
    ok = cube.dims() == formula and cube.is_stable(filt.ctx)
    if i == 0:
        details.update(quotient_dims={}, expected_dims={})
        return Verdict("cube_quotient", ok, details)
    upper = filt.cube(i - 1)
    K, incl = upper.subcomplex.as_complex()
    basis = {k: solve(incl.block(k), B) for k, B in cube.subcomplex.basis.items()}
    Q, _ = quotient(K, Subcomplex(K, basis, reduce=False))
    expected = mixed_part_complex(filt.Z, filt.X, m, i - 1)
    details.update(
        quotient_dims=Q.dims,
        expected_dims=expected.dims,
        quotient_homology=homology(Q),
        expected_homology=homology(expected),
    )
    ok = ok and Q.dims == expected.dims and details["quotient_homology"] == details["expected_homology"]
    return Verdict("cube_quotient", ok, details)


def mixed_idempotent_image(f: ChainMap, m: int, i: int, sign: str) -> MixedImage:
    _check_range(m, i)
    return TriangleFiltration(f, m).mixed_image(i, sign)


def shuffle_scalar_check(Z: Complex, X: Complex, m: int, i: int, sign: str) -> Verdict:
    """Explicit u, d between [Z,X,m−i,i] and Z^(m−i) ⊗ X^(i) from shuffle
    representatives: u∘d = C(m,i)·1 and C(m,i)·e^± = d∘(d^±_{m−i} ⊗ d^±_i)∘u,
    where e^± averages the Σ_m action on the direct sum of the (Z,X)_S."""
    _check_range(m, i)
    wedge = _is_wedge(sign)
    reps = shuffles(m, i)
    subsets = [S for S, _ in reps]
    patterns = {S: TensorProduct([X if j in S else Z for j in range(m)]) for S in subsets}
    T = TensorProduct([Z] * (m - i) + [X] * i)
    # for the antisymmetrizer u_S carries sgn(ς_S): writing σ = ς_T τ ς_S⁻¹
    # splits sgn(σ) into the two shuffle signs and the Young-subgroup sign
    twist = {S: (perm_sign(rep) if wedge else 1) for S, rep in reps}
    d_maps = [permute_factors(rep, T, patterns[S]).scale(twist[S]) for S, rep in reps]
    u_maps = [permute_factors(rep.inverse(), patterns[S], T).scale(twist[S]) for S, rep in reps]
    u = block_chain_map([u_maps])
    d = block_chain_map([[g] for g in d_maps])
    scalar = comb(m, i)
    W = d.target
    ud_ok = all((u @ d).block(k) == Matrix.scalar(T.complex.dim(k), scalar) for k in T.complex.degrees)

    # e^± on W, assembled block by block: Ξ_σ sends (Z,X)_S to (Z,X)_{σ(S)}
    offsets: dict[int, dict] = {}
    for k in W.degrees:
        off, acc = 0, {}
        for S in subsets:
            acc[S] = off
            off += patterns[S].complex.dim(k)
        offsets[k] = acc
    entries: dict[int, dict[tuple[int, int], fmpq]] = {k: {} for k in W.degrees}
    weight = fmpq(1, factorial(m))
    for sigma in enumerate_group(m):
        c = weight * (perm_sign(sigma) if wedge else 1)
        for S in subsets:
            TS = S.image(sigma)
            g = permute_factors(sigma, patterns[S], patterns[TS])
            for k, M in g.blocks.items():
                ro, co = offsets[k][TS], offsets[k][S]
                acc = entries[k]
                for (r, col), v in M._raw_nonzero():
                    key = (ro + r, co + col)
                    acc[key] = acc.get(key, fmpq(0)) + c * v
    e = ChainMap(W, W, {k: Matrix.from_sparse(W.dim(k), W.dim(k), acc) for k, acc in entries.items()}, check=False)

    young = young_symmetrizer_product(m, i, wedge)
    y_blocks: dict[int, dict[tuple[int, int], fmpq]] = {k: {} for k in T.complex.degrees}
    for tau, c in young.terms.items():
        cq = fmpq(c.numerator, c.denominator)
        for k, M in permute_factors(tau, T).blocks.items():
            acc = y_blocks[k]
            for key, v in M._raw_nonzero():
                acc[key] = acc.get(key, fmpq(0)) + cq * v
    y = ChainMap(T.complex, T.complex,
                 {k: Matrix.from_sparse(T.complex.dim(k), T.complex.dim(k), acc) for k, acc in y_blocks.items()},
                 check=False)
    lhs = e.scale(scalar)
    rhs = d @ y @ u
    inter_ok = all(lhs.block(k) == rhs.block(k) for k in W.degrees)
    idem_ok = e.is_idempotent()
    e_rank = {k: r for k in W.degrees if (r := e.block(k).rank())}
    return Verdict(
        "shuffle_scalar",
        ud_ok and inter_ok and idem_ok,
        {"m": m, "i": i, "sign": _sign_label(sign), "scalar": scalar, "u_d": ud_ok,
         "intertwining": inter_ok, "e_idempotent": idem_ok, "e_rank": e_rank},
    )


@dataclass
class PieceResult:
    complex: Complex
    verdict: Verdict


def graded_piece(f: ChainMap, m: int, i: int, sign: str, filt: TriangleFiltration | None = None) -> PieceResult:
    """J^±_{m,i} = I^±_{m,i} / I^±_{m,i+1}, compared with Z^[m−i) ⊗ X^[i)."""
    _check_range(m, i)
    filt = filt or TriangleFiltration(f, m)
    J = filt.graded_piece(i, sign)
    E = filt.expected_piece(i, sign)
    scalar = shuffle_scalar_check(filt.Z, filt.X, m, i, sign)
    hj, he = homology(J), homology(E)
    passed = J.dims == E.dims and hj == he and scalar.passed and scalar.details["e_rank"] == J.dims
    return PieceResult(J, Verdict("graded_piece", passed, {
        "m": m, "i": i, "sign": _sign_label(sign), "dims": J.dims, "expected_dims": E.dims,
        "homology": hj, "expected_homology": he, "scalar_check": scalar.details,
    }))


@dataclass
class LevelRecord:
    i: int
    sign: str
    dims_I: Dims
    dims_J: Dims
    expected_dims: Dims
    homology_J: Dims
    expected_homology: Dims
    scalar_check: dict | None
    verdict: bool

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "sign": self.sign,
            "dims_I": jsonable(self.dims_I),
            "dims_J": jsonable(self.dims_J),
            "expected_dims": jsonable(self.expected_dims),
            "homology_J": jsonable(self.homology_J),
            "expected_homology": jsonable(self.expected_homology),
            "scalar_check": jsonable(self.scalar_check),
            "verdict": "pass" if self.verdict else "fail",
        }


@dataclass
class FiltrationReport:
    m: int
    sign: str
    dims_X: Dims
    dims_Y: Dims
    dims_Z: Dims
    levels: list[LevelRecord]
    power_dims: Dims
    telescoping: bool
    vandermonde: bool
    boundary: bool
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = self.telescoping and self.vandermonde and self.boundary and all(l.verdict for l in self.levels)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "sign": self.sign,
            "dims_X": jsonable(self.dims_X),
            "dims_Y": jsonable(self.dims_Y),
            "dims_Z": jsonable(self.dims_Z),
            "power_dims": jsonable(self.power_dims),
            "levels": [l.to_json() for l in self.levels],
            "telescoping": self.telescoping,
            "vandermonde": self.vandermonde,
            "boundary": self.boundary,
            "verdict": "pass" if self.passed else "fail",
        }


def filtration_report(f: ChainMap, m: int, sign: str, threads: int = 1,
                      filt: TriangleFiltration | None = None) -> FiltrationReport:
    """One level per i = 0..m: the image I_i of the mixed idempotent on cube(i)
    and the graded piece J_i = I_i / I_{i+1}, compared with Z^(m−i) ⊗ X^(i).

    Levels stop at the first zero cube object (so X = 0 gives a single level);
    the omitted pieces are zero on both sides.
    """
    s = _sign_label(sign)
    filt = filt or TriangleFiltration(f, m)
    top = m if filt.X.total_dim() else 0
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda j: filt.mixed_image(j, s), range(top + 1)))
    power = signed_power(filt.Y, m, s)
    levels = []
    for i in range(top + 1):
        v = graded_piece(f, m, i, s, filt=filt).verdict
        levels.append(LevelRecord(
            i, s, filt.level_dims(i, s), v.details["dims"], v.details["expected_dims"],
            v.details["homology"], v.details["expected_homology"], v.details["scalar_check"], v.passed,
        ))
    telescoping = add_dims(*(l.dims_J for l in levels)) == filt.level_dims(0, s)
    vandermonde = add_dims(*(l.expected_dims for l in levels)) == power.dims
    boundary = (
        filt.level_dims(0, s) == power.dims
        and homology(filt.mixed_image(0, s).complex) == homology(power)
        and filt.mixed_image(m, s).complex.dims == signed_power(filt.X, m, s).dims
        and levels[0].expected_dims == signed_power(filt.Z, m, s).dims
        and all(_dims_le(filt.level_dims(j + 1, s), filt.level_dims(j, s)) for j in range(m))
    )
    return FiltrationReport(m, s, filt.X.dims, filt.Y.dims, filt.Z.dims, levels, power.dims,
                            telescoping, vandermonde, boundary)


def _dims_le(a: Dims, b: Dims) -> bool:
    return all(v <= b.get(k, 0) for k, v in a.items())


def vanishing_exponent(C: Complex, sign: str) -> int | None:
    """Smallest n with the wedge (+) or symmetric (−) n-th power of C acyclic,
    or None when no power vanishes (C not evenly resp. oddly finite dimensional)."""
    p = kimura_profile(C)
    if _is_wedge(sign):
        return None if p.odd_dimension else p.even_dimension + 1
    return None if p.even_dimension else p.odd_dimension + 1


def verify_main_theorem(f: ChainMap, a_X: int, b_Z: int, sign: str, threads: int = 1) -> Verdict:
    """If the a_X-th power of X and the b_Z-th power of Z are acyclic, the
    (a_X + b_Z − 1)-th power of Y is acyclic: every graded piece of the
    filtration contains an acyclic tensor factor."""
    s = _sign_label(sign)
    ses = ShortExactSequence(f)
    if a_X < 0 or b_Z < 0 or a_X + b_Z < 1:
        raise InapplicableError("exponents must be non-negative with a_X + b_Z ≥ 1")
    px = signed_power(ses.X, a_X, s)
    pz = signed_power(ses.Z, b_Z, s)
    if not px.is_acyclic() or not pz.is_acyclic():
        raise InapplicableError(
            f"hypotheses fail: H(power {a_X} of X) = {homology(px)}, H(power {b_Z} of Z) = {homology(pz)}"
        )
    m = a_X + b_Z - 1
    config.check_power(ses.Y.total_dim(), m)
    report = filtration_report(f, m, s, threads=threads)
    killed = []
    for lvl in report.levels:
        i = lvl.i
        killed.append("X" if i >= a_X else "Z" if m - i >= b_Z else None)
    pieces_acyclic = all(not lvl.homology_J for lvl in report.levels)
    y_power = signed_power(ses.Y, m, s)
    direct = y_power.is_acyclic()
    passed = report.passed and pieces_acyclic and direct and None not in killed
    return Verdict("main_theorem", passed, {
        "sign": s, "a_X": a_X, "b_Z": b_Z, "m": m,
        "pieces_acyclic": pieces_acyclic, "killing_factor": killed,
        "power_of_Y_homology": homology(y_power), "power_of_Y_acyclic": direct,
        "filtration_verdict": report.passed,
    })
