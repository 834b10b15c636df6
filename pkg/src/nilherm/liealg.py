"""Lie theory at the level of structure constants.

An algebra is given by ``d a_i`` for a (1,0) co-frame ``a_1..a_n``; brackets
are recovered through ``da(X, Y) = -a([X, Y])``.  The real basis used for
brackets is ``E_0, E_1, ...`` dual to ``x_1, y_1, x_2, y_2, ...`` where
``a_j = x_j + i y_j``, so ``J E_{x_j} = E_{y_j}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Tuple

from . import linalg
from .exterior import (
    Differential, Form, _bits, alpha, alpha_bar, bigraded_parts, conjugate,
    substitute,
)
from .scalar import I, ONE, ZERO, Scalar

__all__ = [
    "StructureEquations", "InvalidAlgebraError", "NotNilpotentError", "HypothesisError",
    "Failure", "ValidationReport", "AlgebraInvariants", "JClassification",
    "validate_algebra", "brackets_from_d", "bracket", "algebra_invariants",
    "classify_complex_structure", "adapted_coframe", "change_coframe",
    "is_adapted", "adapted_k", "structure_constants", "nn_monomial",
]


class InvalidAlgebraError(ValueError):
    def __init__(self, report):
        self.report = report
        super().__init__("invalid algebra: " + "; ".join(f.message for f in report.failures))


class NotNilpotentError(ValueError):
    pass


class HypothesisError(ValueError):
    """An operation's structural hypothesis (2-step, J-invariant center, ...) fails."""


@dataclass(frozen=True)
class StructureEquations:
    n: int
    d_alpha: Tuple[Form, ...]
    name: str = field(default="algebra", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "d_alpha", tuple(self.d_alpha))
        if len(self.d_alpha) != self.n:
            raise ValueError(f"expected {self.n} structure equations, got {len(self.d_alpha)}")

    @cached_property
    def differential(self) -> Differential:
        return Differential(self.n, self.d_alpha)

    @cached_property
    def validation(self) -> "ValidationReport":
        return validate_algebra(self)

    def require_valid(self):
        if not self.validation.valid:
            raise InvalidAlgebraError(self.validation)

    def closed_generators(self) -> List[int]:
        """1-based indices ``i`` with ``d a_i = 0``."""
        return [i for i, f in enumerate(self.d_alpha, start=1) if not f]

    def __str__(self):
        lines = [f"{self.name} (n={self.n})"]
        for i, f in enumerate(self.d_alpha, start=1):
            lines.append(f"  d a{i} = {f}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Failure:
    generator: int
    kind: str  # "degree" | "integrability" | "jacobi" | "ambient"
    message: str


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    failures: Tuple[Failure, ...] = ()


def validate_algebra(alg: StructureEquations) -> ValidationReport:
    failures = []
    for i, f in enumerate(alg.d_alpha, start=1):
        if f.n != alg.n:
            failures.append(Failure(i, "ambient", f"d a{i} lives in dimension {f.n}"))
    if failures:
        return ValidationReport(False, tuple(failures))
    d = Differential(alg.n, alg.d_alpha)
    for i, f in enumerate(alg.d_alpha, start=1):
        if f and f.degrees() != {2}:
            failures.append(Failure(i, "degree", f"d a{i} is not a 2-form"))
            continue
        bad = bigraded_parts(f).get((0, 2))
        if bad:
            failures.append(Failure(i, "integrability", f"d a{i} has a (0,2) part: {bad}"))
        if d(f):
            failures.append(Failure(i, "jacobi", f"d(d a{i}) != 0"))
    return ValidationReport(not failures, tuple(failures))


# -- real brackets ----------------------------------------------------------

def _real_images(n: int) -> List[Form]:
    """Images of ``a_j``/``~a_j`` when generator slots are reread as ``x_j``/``y_j``."""
    out = []
    for j in range(1, n + 1):
        x, y = alpha(n, j), alpha_bar(n, j)
        out.append(x + y * I)
        out.append(x - y * I)
    return out


def brackets_from_d(alg: StructureEquations) -> List[List[List[Scalar]]]:
    """``br[a][b]`` is the coordinate vector of ``[E_a, E_b]`` (real rationals)."""
    alg.require_valid()
    return _brackets(alg)


def _brackets(alg: StructureEquations):
    cache = alg.__dict__.get("_bracket_cache")
    if cache is not None:
        return cache
    n, dim = alg.n, 2 * alg.n
    images = _real_images(n)
    half = Scalar(1, 0) / 2
    # de_c for the real co-frame, written in the reread slots
    d_real = []
    for f in alg.d_alpha:
        fb = conjugate(f)
        d_real.append(substitute((f + fb) * half, images))          # d x_j
        d_real.append(substitute((f - fb) * (half / I), images))    # d y_j
    br = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
    for c, form in enumerate(d_real):
        for m, coeff in form.terms.items():
            a, b = _bits(m)
            if not coeff.is_real():
                raise AssertionError("real structure constants came out complex")
            br[a][b][c] = br[a][b][c] - coeff
            br[b][a][c] = br[b][a][c] + coeff
    alg.__dict__["_bracket_cache"] = br
    return br


def bracket(br, u, v) -> List[Scalar]:
    dim = len(br)
    out = [ZERO] * dim
    for a in range(dim):
        if u[a].is_zero():
            continue
        for b in range(dim):
            if v[b].is_zero():
                continue
            s = u[a] * v[b]
            row = br[a][b]
            for c in range(dim):
                if not row[c].is_zero():
                    out[c] = out[c] + s * row[c]
    return out


def _basis(dim: int) -> List[List[Scalar]]:
    return linalg.identity(dim)


def _real_J(dim: int) -> List[List[Scalar]]:
    J = linalg.zeros(dim, dim)
    for s in range(0, dim, 2):
        J[s + 1][s] = ONE    # J E_x = E_y
        J[s][s + 1] = -ONE   # J E_y = -E_x
    return J


def _apply(M, v):
    return linalg.matvec(M, v)


# -- invariants -------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraInvariants:
    step: int
    center_dim: int
    center_J_invariant: bool
    two_step: bool
    k: Optional[int]
    derived_dims: Tuple[int, ...]


def _span_brackets(br, us, dim):
    vecs = []
    basis = _basis(dim)
    for u in us:
        for e in basis:
            w = bracket(br, u, e)
            if any(not x.is_zero() for x in w):
                vecs.append(w)
    return linalg.row_space(vecs)


def center_basis(alg: StructureEquations) -> List[List[Scalar]]:
    br = _brackets(alg)
    dim = 2 * alg.n
    rows = []
    for b in range(dim):
        for c in range(dim):
            rows.append([br[a][b][c] for a in range(dim)])
    return linalg.row_space(linalg.nullspace(rows, dim))


def _contains(space, vectors) -> bool:
    r = len(space)
    return linalg.rank(list(space) + list(vectors)) == r


def algebra_invariants(alg: StructureEquations) -> AlgebraInvariants:
    alg.require_valid()
    br = _brackets(alg)
    dim = 2 * alg.n
    dims = [dim]
    current = _basis(dim)
    while current:
        nxt = _span_brackets(br, current, dim)
        if len(nxt) == len(current):
            raise NotNilpotentError(f"lower central series of {alg.name} stalls at dimension {len(nxt)}")
        dims.append(len(nxt))
        current = nxt
    step = len(dims) - 1
    center = center_basis(alg)
    J = _real_J(dim)
    j_inv = _contains(center, [_apply(J, v) for v in center])
    two_step = step == 2
    k = None
    if two_step and j_inv:
        k = alg.n - len(center) // 2
    return AlgebraInvariants(step, len(center), j_inv, two_step, k, tuple(dims))


# -- complex structure --------------------------------------------------------

@dataclass(frozen=True)
class JClassification:
    nilpotent_J: bool
    bi_invariant: bool
    abelian_J: bool
    prop44_all_nn_closed: bool


def _ascending_series_reaches_top(br, dim) -> bool:
    J = _real_J(dim)
    basis = _basis(dim)
    prev: List[List[Scalar]] = []
    while True:
        annihilator = linalg.nullspace(prev, dim) if prev else basis
        rows = []
        for phi in annihilator:
            for b in range(dim):
                # phi([X, E_b]) and phi([J X, E_b]) as functionals of X
                plain = [sum((phi[c] * br[a][b][c] for c in range(dim)), ZERO) for a in range(dim)]
                twisted = [sum((J[a][a2] * plain[a] for a in range(dim)), ZERO) for a2 in range(dim)]
                rows.append(plain)
                rows.append(twisted)
        nxt = linalg.row_space(linalg.nullspace(rows, dim)) if rows else basis
        if len(nxt) == dim:
            return True
        if len(nxt) == len(prev):
            return False
        prev = nxt


def nn_monomial(n: int, i: int, j: int) -> int:
    """Mask of ``m_{i jbar}``: the top monomial without ``a_i`` and ``~a_j``."""
    top = (1 << (2 * n)) - 1
    return top ^ (1 << (2 * (i - 1))) ^ (1 << (2 * (j - 1) + 1))


def classify_complex_structure(alg: StructureEquations) -> JClassification:
    alg.require_valid()
    br = _brackets(alg)
    dim = 2 * alg.n
    J = _real_J(dim)
    basis = _basis(dim)
    Jb = [_apply(J, e) for e in basis]
    bi = True
    ab = True
    for a in range(dim):
        for b in range(dim):
            xy = br[a][b]
            # J[X,Y] = [JX,Y] is not symmetric in X, Y: check every ordered pair
            if bi and _apply(J, xy) != bracket(br, Jb[a], basis[b]):
                bi = False
            if ab and b > a and bracket(br, Jb[a], Jb[b]) != xy:
                ab = False
    d = alg.differential
    nn_closed = all(
        not d.monomial(nn_monomial(alg.n, i, j))
        for i in range(1, alg.n + 1) for j in range(1, alg.n + 1)
    )
    return JClassification(_ascending_series_reaches_top(br, dim), bi, ab, nn_closed)


def d_lambda10_bidegrees(alg: StructureEquations) -> set:
    """Bidegrees occurring in the ``d a_i``."""
    out = set()
    for f in alg.d_alpha:
        out.update(bigraded_parts(f))
    return out


# -- adapted co-frames --------------------------------------------------------

def structure_constants(alg: StructureEquations):
    """``(c2, c11)`` with ``d a_i = sum_{r<s} c2[i][r][s] a_r^a_s + sum c11[i][r][s] a_r^~a_s``.

    Indices are 0-based; ``c2`` is antisymmetric in ``r, s``.
    """
    n = alg.n
    c2 = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    c11 = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for i, f in enumerate(alg.d_alpha):
        for m, c in f.terms.items():
            g1, g2 = _bits(m)
            if g1 % 2 == 0 and g2 % 2 == 0:
                r, s = g1 // 2, g2 // 2
                c2[i][r][s] = c
                c2[i][s][r] = -c
            elif g1 % 2 == 0:
                c11[i][g1 // 2][g2 // 2] = c           # a_r ^ ~a_s with r <= s
            elif g2 % 2 == 0:
                c11[i][g2 // 2][g1 // 2] = -c          # ~a_s ^ a_r = -a_r ^ ~a_s
            else:
                raise InvalidAlgebraError(validate_algebra(alg))
    return c2, c11


def is_adapted(alg: StructureEquations, k: int) -> bool:
    """Shape check: ``d a_i = 0`` for ``i <= k``, else ``d a_i`` only involves generators ``<= k``."""
    allowed = (1 << (2 * k)) - 1
    for i, f in enumerate(alg.d_alpha, start=1):
        if i <= k:
            if f:
                return False
        elif any(m & ~allowed for m in f.terms):
            return False
    return True


def adapted_k(alg: StructureEquations) -> Optional[int]:
    """Smallest ``k`` for which the co-frame is already adapted, or ``None``."""
    for k in range(alg.n + 1):
        if is_adapted(alg, k):
            return k
    return None


def change_coframe(alg: StructureEquations, M, name: str = None) -> StructureEquations:
    """Structure equations in the co-frame ``a'_a = sum_j M[a][j] a_j``."""
    n = alg.n
    M = linalg.to_matrix(M)
    P = linalg.inverse(M)
    images = []
    for j in range(n):
        images.append(sum((alpha(n, a + 1) * P[j][a] for a in range(n)), Form(n)))
        images.append(sum((alpha_bar(n, a + 1) * P[j][a].conjugate() for a in range(n)), Form(n)))
    new_d = []
    for a in range(n):
        combo = sum((alg.d_alpha[j] * M[a][j] for j in range(n)), Form(n))
        new_d.append(substitute(combo, images))
    return StructureEquations(n, tuple(new_d), name or alg.name)


def adapted_coframe(alg: StructureEquations):
    """Return ``(M, adapted)`` with ``a'_a = sum_j M[a][j] a_j`` in adapted shape.

    The complement of the (1,0)-center is chosen greedily from the standard
    basis, lowest index first.
    """
    inv = algebra_invariants(alg)
    if inv.step > 2:
        raise HypothesisError(f"{alg.name} is {inv.step}-step; an adapted co-frame needs step <= 2")
    if not inv.center_J_invariant:
        raise HypothesisError(f"the center of {alg.name} is not J-invariant")
    n = alg.n
    center = center_basis(alg)
    c10 = linalg.row_space([[v[2 * j] + v[2 * j + 1] * I for j in range(n)] for v in center])
    chosen: List[List[Scalar]] = []
    for j in range(n):
        e = [ONE if t == j else ZERO for t in range(n)]
        if linalg.rank(c10 + chosen + [e]) > len(c10) + len(chosen):
            chosen.append(e)
    cols = chosen + c10
    P = linalg.transpose(cols)
    M = linalg.inverse(P)
    adapted = change_coframe(alg, M, name=f"{alg.name}-adapted")
    k = len(chosen)
    assert is_adapted(adapted, k), "adapted co-frame construction failed its own shape check"
    return M, adapted
