"""Invariant Hermitian metrics, Lee forms and the special metric classes.

A metric is stored through its coefficient matrix ``H``:
``omega = i sum_{j,l} H[j][l] a_j ^ ~a_l``.  A positive ``(n-1, n-1)``-form is
stored through ``a[i][j]``, the coefficient of ``i^{n-1} m_{i jbar}``, and the
Hermitian matrix ``Atilde`` obtained by flipping the sign below the diagonal.

Everything is exact except :func:`michelsohn_root`, which needs a real
``(n-1)``-th root and falls back to floating point when it is irrational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import linalg
from .exterior import (
    Form, alpha, alpha_bar, apply_J, beta, dc, exterior_d, power, top_coefficient, wedge,
)
from .liealg import StructureEquations, adapted_k, nn_monomial, structure_constants
from .scalar import I, ONE, ZERO, Scalar, as_scalar

__all__ = [
    "HermitianMatrix", "PositiveNNForm", "ClassificationReport", "TwoStepLee", "RootResult",
    "NotHermitianError", "NotPositiveError", "RealityError", "NotAdaptedError",
    "metric_form", "matrix_of_metric", "nn_form", "nn_form_from_atilde", "nn_form_of",
    "lee_form_general", "lee_form_of_power", "lee_form_two_step", "classify_metric",
    "k_gauduchon_profile", "check_prop31", "star_one_form", "michelsohn_root",
    "lee_on_closed_generators_only",
]


class NotHermitianError(ValueError):
    pass


class NotPositiveError(ValueError):
    pass


class RealityError(ValueError):
    pass


class NotAdaptedError(ValueError):
    pass


@dataclass(frozen=True)
class HermitianMatrix:
    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(as_scalar(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square")
        if not linalg.is_hermitian([list(r) for r in rows]):
            raise NotHermitianError("matrix is not Hermitian")

    @classmethod
    def identity(cls, n: int) -> "HermitianMatrix":
        return cls(tuple(linalg.identity(n)))

    @property
    def n(self) -> int:
        return len(self.entries)

    def rows(self) -> List[List[Scalar]]:
        return [list(r) for r in self.entries]

    def leading_minors(self) -> List[Scalar]:
        return linalg.leading_minors(self.rows())

    def is_positive(self) -> bool:
        return linalg.is_positive_definite(self.rows())

    def __str__(self):
        return linalg.mat_str(self.rows())


def _as_hermitian(H) -> HermitianMatrix:
    return H if isinstance(H, HermitianMatrix) else HermitianMatrix(tuple(map(tuple, H)))


def metric_form(H) -> Form:
    """``i sum H_jl a_j ^ ~a_l``; real whenever ``H`` is Hermitian."""
    H = _as_hermitian(H)
    n = H.n
    terms = {}
    for j in range(n):
        for l in range(n):
            c = H.entries[j][l]
            if c:
                wj = wedge(alpha(n, j + 1), alpha_bar(n, l + 1))
                (mask, sign), = wj.terms.items()
                terms[mask] = c * sign * I
    return Form(n, terms)


def matrix_of_metric(omega: Form) -> HermitianMatrix:
    """Inverse of :func:`metric_form` for a real (1,1)-form."""
    n = omega.n
    rows = []
    for j in range(n):
        row = []
        for l in range(n):
            wj = wedge(alpha(n, j + 1), alpha_bar(n, l + 1))
            (mask, sign), = wj.terms.items()
            row.append(omega.coefficient(mask) * sign / I)
        rows.append(tuple(row))
    return HermitianMatrix(tuple(rows))


# -- positive (n-1, n-1)-forms -------------------------------------------------

@dataclass(frozen=True)
class PositiveNNForm:
    n: int
    a: tuple  # a[i][j] = a_{i jbar}

    def __post_init__(self):
        a = tuple(tuple(as_scalar(x) for x in row) for row in self.a)
        object.__setattr__(self, "a", a)
        n = self.n
        for i in range(n):
            if not a[i][i].is_real():
                raise RealityError(f"a_{{{i + 1} {i + 1}bar}} must be real")
            for j in range(i + 1, n):
                if a[i][j] != -a[j][i].conjugate():
                    raise RealityError(f"a_{{{i + 1} {j + 1}bar}} != -conj(a_{{{j + 1} {i + 1}bar}})")

    @property
    def atilde(self) -> List[List[Scalar]]:
        n = self.n
        return [[self.a[i][j] if i <= j else -self.a[i][j] for j in range(n)] for i in range(n)]

    def is_positive(self) -> bool:
        return linalg.is_positive_definite(self.atilde)

    def form(self) -> Form:
        n = self.n
        unit = I ** (n - 1)
        return Form(n, {nn_monomial(n, i + 1, j + 1): self.a[i][j] * unit
                        for i in range(n) for j in range(n)})

    def star(self) -> Form:
        """Hodge star against the standard metric, written as ``i sum Atilde_ij a_i ^ ~a_j``."""
        return metric_form(self.atilde)


def nn_form(a) -> PositiveNNForm:
    a = [list(row) for row in a]
    return PositiveNNForm(len(a), tuple(map(tuple, a)))


def nn_form_from_atilde(At) -> PositiveNNForm:
    At = linalg.to_matrix(At)
    n = len(At)
    if not linalg.is_hermitian(At):
        raise NotHermitianError("Atilde must be Hermitian")
    return nn_form([[At[i][j] if i <= j else -At[i][j] for j in range(n)] for i in range(n)])


def nn_form_of(W: Form) -> PositiveNNForm:
    """Read the coefficients of an ``(n-1, n-1)``-form written in the ``m_{i jbar}``."""
    n = W.n
    unit = I ** (n - 1)
    index = {nn_monomial(n, i + 1, j + 1): (i, j) for i in range(n) for j in range(n)}
    if any(m not in index for m in W.terms):
        raise ValueError("form is not of type (n-1, n-1)")
    a = [[W.coefficient(nn_monomial(n, i + 1, j + 1)) / unit for j in range(n)] for i in range(n)]
    return nn_form(a)


# -- Lee forms ----------------------------------------------------------------

def lee_form_of_power(alg: StructureEquations, W: Form) -> Form:
    """The 1-form ``theta`` with ``theta ^ W = dW`` for ``W = omega^{n-1}``.

    The wedge map from 1-forms to ``(2n-1)``-forms is bijective for a
    positive ``W``; a singular system raises :class:`NotPositiveError`.
    """
    n = alg.n
    dW = exterior_d(alg, W)
    cols = [wedge(Form(n, {1 << g: 1}), W) for g in range(2 * n)]
    rows = sorted({m for c in cols for m in c.terms} | set(dW.terms))
    A = [[c.coefficient(m) for c in cols] for m in rows]
    if linalg.rank(A) < 2 * n:
        raise NotPositiveError("wedge with W is not injective on 1-forms")
    u = linalg.solve(A, [dW.coefficient(m) for m in rows])
    if u is None:
        raise NotPositiveError("no 1-form solves theta ^ W = dW")
    return Form(n, {1 << g: c for g, c in enumerate(u)})


def lee_form_general(alg: StructureEquations, omega: Form) -> Form:
    """Lee form of ``omega`` from ``d omega^{n-1} = theta ^ omega^{n-1}``."""
    return lee_form_of_power(alg, power(omega, alg.n - 1))


@dataclass(frozen=True)
class TwoStepLee:
    theta: Form
    coefficients: tuple   # x with Atilde x = b
    b: tuple
    k: int
    balanced: bool        # b == 0
    lcb: bool             # closedness conditions on x
    real_coefficients: bool


def lee_form_two_step(alg: StructureEquations, a: PositiveNNForm) -> TwoStepLee:
    """Lee form of the metric whose ``(n-1)``-th power is ``a`` on an adapted 2-step algebra.

    Solves ``Atilde x = b`` with ``b_l = sum_ij Atilde_ij c^l_{i jbar}``.  The
    Lee form is ``sum (conj(x_i) a_i + x_i ~a_i)``, which is
    ``sum x_i (a_i + ~a_i)`` when ``x`` is real.
    """
    alg.require_valid()
    k = adapted_k(alg)
    if k is None:
        raise NotAdaptedError(f"{alg.name} is not written in an adapted co-frame")
    if a.n != alg.n:
        raise ValueError("dimension mismatch")
    At = a.atilde
    if not linalg.is_positive_definite(At):
        raise NotPositiveError("Atilde is not positive definite")
    n = alg.n
    c2, c11 = structure_constants(alg)
    b = [sum((At[i][j] * c11[l][i][j] for i in range(n) for j in range(n)), ZERO) for l in range(n)]
    x = linalg.solve(At, b)
    theta = Form(n, {})
    for i in range(n):
        theta = theta + alpha(n, i + 1) * x[i].conjugate() + alpha_bar(n, i + 1) * x[i]
    z = [xi.conjugate() for xi in x]   # coefficient of a_i
    lcb = True
    for r in range(n):
        for s in range(n):
            hol = sum((z[i] * c2[i][r][s] for i in range(n)), ZERO)
            mixed = sum((z[i] * c11[i][r][s] - x[i] * c11[i][s][r].conjugate() for i in range(n)), ZERO)
            if hol or mixed:
                lcb = False
    return TwoStepLee(theta, tuple(x), tuple(b), k, all(v.is_zero() for v in b), lcb,
                    all(v.is_real() for v in x))


def lee_on_closed_generators_only(alg: StructureEquations, theta: Form) -> bool:
    """True when ``theta`` only involves ``a_i, ~a_i`` with ``d a_i = 0``."""
    closed = set()
    for i in alg.closed_generators():
        closed.update((2 * (i - 1), 2 * (i - 1) + 1))
    return theta.support() <= closed


# -- classification -------------------------------------------------------------

def _ddc(alg, f):
    return exterior_d(alg, dc(alg, f))


@dataclass
class ClassificationReport:
    kahler: bool
    lck: bool
    strictly_lck: bool
    lcb: bool
    strictly_lcb: bool
    balanced: bool
    pluriclosed: bool
    gauduchon: bool
    astheno_kahler: bool
    k_gauduchon: Optional[Dict[int, bool]]
    lee: Form
    gauduchon_scalar: Optional[Scalar]

    def flags(self) -> Dict[str, bool]:
        names = ("kahler", "lck", "strictly_lck", "lcb", "strictly_lcb", "balanced",
                 "pluriclosed", "gauduchon", "astheno_kahler")
        return {k: getattr(self, k) for k in names}


def classify_metric(alg: StructureEquations, H) -> ClassificationReport:
    H = _as_hermitian(H)
    if not H.is_positive():
        raise NotPositiveError("metric matrix is not positive definite")
    n = alg.n
    omega = metric_form(H)
    powers = [power(omega, 0), omega]
    for _ in range(2, n):
        powers.append(wedge(powers[-1], omega))
    theta = lee_form_of_power(alg, powers[n - 1])
    d_omega = exterior_d(alg, omega)
    d_theta = exterior_d(alg, theta)
    kahler = not d_omega
    lcb = not d_theta
    lck = lcb and d_omega == wedge(theta, omega)
    balanced = not exterior_d(alg, powers[n - 1])
    pluriclosed = not _ddc(alg, omega)
    gauduchon = not _ddc(alg, powers[n - 1])
    astheno = not _ddc(alg, powers[n - 2]) if n >= 2 else True
    profile = None
    scalar = None
    if n >= 3:
        scalar, profile = _profile(alg, powers)
    return ClassificationReport(
        kahler=kahler, lck=lck, strictly_lck=lck and bool(theta), lcb=lcb,
        strictly_lcb=lcb and bool(theta), balanced=balanced, pluriclosed=pluriclosed,
        gauduchon=gauduchon, astheno_kahler=astheno, k_gauduchon=profile, lee=theta,
        gauduchon_scalar=scalar,
    )


def _profile(alg, powers):
    n = alg.n
    scalar = top_coefficient(wedge(_ddc(alg, powers[1]), powers[n - 2]))
    profile = {}
    for k in range(1, n):
        profile[k] = not wedge(_ddc(alg, powers[k]), powers[n - k - 1])
    return scalar, profile


def k_gauduchon_profile(alg: StructureEquations, H):
    """``(top coefficient of dd^c omega ^ omega^{n-2}, {k: k-Gauduchon})``.

    On an invariant metric the answers for ``1 <= k <= n-2`` all coincide with
    the vanishing of the scalar; that collapse is asserted here.
    """
    H = _as_hermitian(H)
    n = alg.n
    if n < 3:
        raise ValueError("the k-Gauduchon profile needs n >= 3")
    omega = metric_form(H)
    powers = [power(omega, 0), omega]
    for _ in range(2, n):
        powers.append(wedge(powers[-1], omega))
    scalar, profile = _profile(alg, powers)
    low = {profile[k] for k in range(1, n - 1)}
    if low != {scalar.is_zero()}:
        raise AssertionError(f"k-Gauduchon profile {profile} disagrees with scalar {scalar}")
    return scalar, profile


def star_one_form(omega: Form, theta: Form) -> Form:
    """``J theta ^ omega^{n-1} / (n-1)!``."""
    n = omega.n
    return wedge(apply_J(theta), power(omega, n - 1)) / math.factorial(n - 1)


def check_prop31(alg: StructureEquations, H, k: int, detail: bool = False):
    """Check the two k-Gauduchon identities for the metric ``H`` at level ``k``.

    (a) ``dd^c(omega^k) ^ omega^{n-k-1}
         = k dJd omega ^ omega^{n-2} - k(k-1) Jd omega ^ d omega ^ omega^{n-3}``;
    (b) k-Gauduchon iff ``(n-k-1) dJd omega ^ omega^{n-2} + (k-1) d(star theta) = 0``.
    The left side of (a) goes through ``dc``; the right side only uses ``d`` and ``J``.
    """
    H = _as_hermitian(H)
    n = alg.n
    if n < 3 or not 1 <= k <= n - 1:
        raise ValueError("need n >= 3 and 1 <= k <= n-1")
    omega = metric_form(H)
    d = lambda f: exterior_d(alg, f)  # noqa: E731
    lhs = wedge(_ddc(alg, power(omega, k)), power(omega, n - k - 1))
    d_omega = d(omega)
    j_d_omega = apply_J(d_omega)
    dJd = d(j_d_omega)
    rhs = wedge(dJd, power(omega, n - 2)) * k
    if k >= 2:
        rhs = rhs - wedge(wedge(j_d_omega, d_omega), power(omega, n - 3)) * (k * (k - 1))
    identity_a = lhs == rhs
    theta = lee_form_general(alg, omega)
    criterion = wedge(dJd, power(omega, n - 2)) * (n - k - 1) + d(star_one_form(omega, theta)) * (k - 1)
    identity_b = (not lhs) == (not criterion)
    if detail:
        return identity_a, identity_b
    return identity_a and identity_b


# -- Michelsohn root --------------------------------------------------------------

@dataclass(frozen=True)
class RootResult:
    H: object          # tuple of tuples of Scalar (exact) or numpy array (float)
    exact: bool
    residual: float


def _rational_root(q: Fraction, k: int) -> Optional[Fraction]:
    if q <= 0:
        return None
    num, den = q.numerator, q.denominator

    def iroot(x):
        try:
            r = round(x ** (1.0 / k))
        except OverflowError:
            r = -2
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** k == x:
                return cand
        lo, hi = 0, 1
        while hi ** k <= x:
            hi *= 2
        while lo < hi - 1:
            mid = (lo + hi) // 2
            if mid ** k <= x:
                lo = mid
            else:
                hi = mid
        return lo if lo ** k == x else None

    a, b = iroot(num), iroot(den)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def michelsohn_root(a: PositiveNNForm) -> RootResult:
    """The positive ``H`` with ``(i sum H a_j ^ ~a_l)^{n-1}`` equal to the given form.

    Uses ``Atilde = (n-1)! det(H) H^{-T}``.  Exact when
    ``det(Atilde) / ((n-1)!)^n`` has a rational ``(n-1)``-th root, otherwise
    float64 with the max-norm residual of the re-expanded power reported.
    """
    if not a.is_positive():
        raise NotPositiveError("Atilde is not positive definite")
    n = a.n
    At = a.atilde
    fact = math.factorial(n - 1)
    ratio = linalg.det(At).real / Fraction(fact) ** n
    root = _rational_root(ratio, n - 1)
    target = a.form()
    if root is not None:
        inv_t = linalg.transpose(linalg.inverse(At))
        H = tuple(tuple(x * (fact * root) for x in row) for row in inv_t)
        residual = power(metric_form(H), n - 1) - target
        res = max((abs(complex(c)) for c in residual.terms.values()), default=0.0)
        return RootResult(H, True, res)
    A = np.array([[complex(x) for x in row] for row in At])
    det_h = float(ratio) ** (1.0 / (n - 1))
    H = fact * det_h * np.linalg.inv(A).T
    H = (H + H.conj().T) / 2
    exact_h = [[Scalar(Fraction(z.real), Fraction(z.imag)) for z in row] for row in H]
    residual = power(metric_form(HermitianMatrix(tuple(map(tuple, exact_h)))), n - 1) - target
    res = max((abs(complex(c)) for c in residual.terms.values()), default=0.0)
    return RootResult(H, False, res)
