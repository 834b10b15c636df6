"""Feasibility searches and randomized rigidity experiments.

Randomness always comes from ``numpy.random.Generator`` objects; experiments
spawn one child stream per trial from a ``SeedSequence`` so results depend
only on the seed and the trial index.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.optimize import linprog

from . import linalg
from .exterior import Form, alpha, apply_J, conjugate, exterior_d, wedge
from .liealg import StructureEquations, adapted_k, structure_constants
from .metrics import (
    HermitianMatrix, NotAdaptedError, PositiveNNForm, classify_metric, lee_form_of_power,
    lee_form_two_step, metric_form, nn_form_from_atilde,
)
from .scalar import I, ONE, ZERO, Scalar

__all__ = [
    "FeasibilityResult", "ObstructionReport", "RigidityReport",
    "sample_metric", "metric_from_factor", "random_scalar", "random_adapted_algebra",
    "find_balanced", "find_lcb", "two_zero_obstruction", "rigidity_experiment", "pfaffian",
    "trial_rngs",
]


# -- sampling -----------------------------------------------------------------

def random_scalar(rng: np.random.Generator, bound: int = 2, dens=(1, 2), complex_: bool = True) -> Scalar:
    re = Fraction(int(rng.integers(-bound, bound + 1)), int(rng.choice(dens)))
    im = Fraction(int(rng.integers(-bound, bound + 1)), int(rng.choice(dens))) if complex_ else 0
    return Scalar(re, im)


def metric_from_factor(M) -> HermitianMatrix:
    """``Id + M^* M``, positive definite for any square ``M``."""
    M = linalg.to_matrix(M)
    n = len(M)
    G = linalg.matmul(linalg.conj_transpose(M), M)
    return HermitianMatrix(tuple(tuple(G[i][j] + (ONE if i == j else ZERO) for j in range(n))
                                 for i in range(n)))


def sample_metric(n: int, rng: np.random.Generator) -> HermitianMatrix:
    M = [[random_scalar(rng) for _ in range(n)] for _ in range(n)]
    return metric_from_factor(M)


def trial_rngs(seed: int, trials: int) -> List[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(trials)]


def random_adapted_algebra(n: int, rng: np.random.Generator, k: Optional[int] = None,
                           complex_: bool = False, kind: str = "mixed") -> StructureEquations:
    """Random 2-step algebra already in adapted shape.

    Each ``d a_i`` for ``i > k`` only involves ``a_1..a_k`` and their
    conjugates, all of which are closed, so ``d^2 = 0`` holds automatically.
    ``kind`` selects the bidegrees used: ``"mixed"``, ``"holomorphic"`` (only
    (2,0) terms) or ``"abelian"`` (only (1,1) terms).
    """
    if kind not in ("mixed", "holomorphic", "abelian"):
        raise ValueError(f"unknown kind {kind!r}")
    if k is None:
        k = int(rng.integers(1, n))
    use20, use11 = kind != "abelian", kind != "holomorphic"
    d = [Form(n) for _ in range(k)]
    for _ in range(k, n):
        f = Form(n)
        for r in range(1, k + 1):
            for s in range(1, k + 1):
                if use20 and r < s and rng.random() < 0.5:
                    f = f + wedge(alpha(n, r), alpha(n, s)) * random_scalar(rng, complex_=complex_)
                if use11 and rng.random() < 0.6:
                    f = f + wedge(alpha(n, r), conjugate(alpha(n, s))) * random_scalar(rng, complex_=complex_)
        d.append(f)
    return StructureEquations(n, tuple(d), f"random_{kind}_n{n}_k{k}")


def random_positive_atilde(n: int, rng: np.random.Generator) -> PositiveNNForm:
    H = sample_metric(n, rng)
    return nn_form_from_atilde(H.rows())


# -- feasibility ----------------------------------------------------------------

@dataclass
class FeasibilityResult:
    status: str                      # "found" | "infeasible_linear" | "no_positive_point_found"
    witness: Optional[PositiveNNForm]
    solution_space_dim: Optional[int]
    lee: Optional[Form] = None
    certificate: Optional[str] = None
    trials_used: int = 0


def _hermitian_params(n: int):
    """Real coordinates of a Hermitian matrix: diagonals, then (Re, Im) above it."""
    params = [("d", i, i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            params.append(("re", i, j))
            params.append(("im", i, j))
    return params


def _matrix_from_params(n: int, params, t) -> List[List[Scalar]]:
    A = linalg.zeros(n, n)
    for (kind, i, j), v in zip(params, t):
        if kind == "d":
            A[i][i] = A[i][i] + v
        elif kind == "re":
            A[i][j] = A[i][j] + v
            A[j][i] = A[j][i] + v
        else:
            A[i][j] = A[i][j] + v * I
            A[j][i] = A[j][i] - v * I
    return A


def _require_adapted(alg: StructureEquations) -> int:
    alg.require_valid()
    k = adapted_k(alg)
    if k is None:
        raise NotAdaptedError(f"{alg.name} is not written in an adapted co-frame")
    return k


def _balanced_constraints(alg: StructureEquations):
    """Real linear functionals on the Hermitian parameters whose vanishing is ``b = 0``."""
    n = alg.n
    params = _hermitian_params(n)
    _, c11 = structure_constants(alg)
    rows = []
    for l in range(n):
        coeffs = []
        for idx in range(len(params)):
            unit = [ZERO] * len(params)
            unit[idx] = ONE
            A = _matrix_from_params(n, params, unit)
            coeffs.append(sum((A[i][j] * c11[l][i][j] for i in range(n) for j in range(n)), ZERO))
        rows.append([c.real for c in coeffs])
        rows.append([c.imag for c in coeffs])
    rows = [[Scalar(x) for x in row] for row in rows if any(row)]
    return params, rows


def _to_fraction(x: float, limit: int = 10 ** 6) -> Fraction:
    return Fraction(x).limit_denominator(limit)


def _float_pd(A) -> bool:
    M = np.array([[complex(x) for x in row] for row in A])
    try:
        return bool(np.linalg.eigvalsh(M).min() > 1e-12)
    except np.linalg.LinAlgError:
        return False


def _diagonal_lp(basis_diag: List[List[Scalar]], n: int) -> Optional[List[Fraction]]:
    """Coefficients ``t`` making ``sum t_r v_r`` entrywise positive, or ``None``.

    Stage one maximizes the smallest entry subject to entries <= 1; stage two
    maximizes the entry sum with the smallest entry held at its optimum.
    """
    if not basis_diag:
        return None
    B = np.array([[float(v[i]) for v in basis_diag] for i in range(n)])
    r = B.shape[1]
    # variables: t (r), s
    c = np.zeros(r + 1)
    c[-1] = -1.0
    A_ub = np.vstack([np.hstack([-B, np.ones((n, 1))]), np.hstack([B, np.zeros((n, 1))])])
    b_ub = np.concatenate([np.zeros(n), np.ones(n)])
    bounds = [(None, None)] * r + [(None, 1.0)]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status != 0 or res.x[-1] <= 1e-9:
        return None
    s_opt = res.x[-1]
    c2 = np.concatenate([-B.sum(axis=0), [0.0]])
    bounds2 = [(None, None)] * r + [(s_opt * (1 - 1e-9), 1.0)]
    res2 = linprog(c2, A_ub=A_ub, b_ub=b_ub, bounds=bounds2, method="highs")
    x = res2.x if res2.status == 0 else res.x
    return [_to_fraction(v) for v in x[:r]]


def _diagonal_certificate(rows, params, n) -> Optional[str]:
    """Look for a combination of constraints that is a nonnegative, nonzero diagonal functional.

    Such a functional is strictly positive on every positive definite matrix,
    so the constraints cannot meet the open cone.
    """
    if not rows:
        return None
    off = [idx for idx, p in enumerate(params) if p[0] != "d"]
    diag = [idx for idx, p in enumerate(params) if p[0] == "d"]
    # combinations y with y.rows vanishing on the off-diagonal coordinates
    kill = [[row[idx] for row in rows] for idx in off]
    combos = linalg.nullspace(kill, len(rows)) if kill else linalg.identity(len(rows))
    if not combos:
        return None
    funcs = []
    for y in combos:
        funcs.append([sum((y[r] * rows[r][idx] for r in range(len(rows))), ZERO) for idx in diag])
    funcs = [f for f in funcs if any(not x.is_zero() for x in f)]
    if not funcs:
        return None
    F = np.array([[float(x) for x in f] for f in funcs]).T   # n x q
    q = F.shape[1]
    res = linprog(np.zeros(q), A_ub=-F, b_ub=np.zeros(n), A_eq=F.sum(axis=0, keepdims=True),
                  b_eq=[1.0], bounds=[(None, None)] * q, method="highs")
    if res.status != 0:
        return None
    y = [_to_fraction(v) for v in res.x]
    w = [sum((Scalar(y[c]) * funcs[c][i] for c in range(q)), ZERO) for i in range(n)]
    if all(x.sign() >= 0 for x in w) and any(x.sign() > 0 for x in w):
        terms = " + ".join(f"{x}*A[{i + 1}{i + 1}]" for i, x in enumerate(w) if not x.is_zero())
        return f"constraints imply {terms} = 0 with nonnegative weights"
    return None


def find_balanced(alg: StructureEquations, rng: Optional[np.random.Generator] = None,
                  trials: int = 10_000) -> FeasibilityResult:
    """Search for a positive ``Atilde`` with ``b(Atilde) = 0``."""
    _require_adapted(alg)
    n = alg.n
    params, rows = _balanced_constraints(alg)
    space = linalg.nullspace(rows, len(params)) if rows else linalg.identity(len(params))
    dim = len(space)
    if dim == 0:
        return FeasibilityResult("infeasible_linear", None, 0, certificate="solution space is {0}")
    cert = _diagonal_certificate(rows, params, n)
    if cert is not None:
        return FeasibilityResult("infeasible_linear", None, dim, certificate=cert)

    def accept(A, used):
        if _float_pd(A) and linalg.is_positive_definite(A):
            w = nn_form_from_atilde(A)
            sol = lee_form_two_step(alg, w)
            assert sol.balanced, "witness violates b = 0"
            return FeasibilityResult("found", w, dim, lee=sol.theta, trials_used=used)
        return None

    # diagonal-only part of the solution space
    diag_idx = [i for i, p in enumerate(params) if p[0] == "d"]
    off_idx = [i for i, p in enumerate(params) if p[0] != "d"]
    kill = [[v[i] for v in space] for i in off_idx]
    diag_coeffs = linalg.nullspace(kill, dim) if kill else linalg.identity(dim)
    diag_vectors = [[sum((c[r] * space[r][i] for r in range(dim)), ZERO) for i in diag_idx]
                    for c in diag_coeffs]
    t = _diagonal_lp(diag_vectors, n)
    if t is not None:
        diag = [sum((Scalar(t[r]) * diag_vectors[r][i] for r in range(len(t))), ZERO) for i in range(n)]
        found = accept([[diag[i] if i == j else ZERO for j in range(n)] for i in range(n)], 0)
        if found:
            return found
    rng = rng if rng is not None else np.random.default_rng(0)
    for trial in range(1, trials + 1):
        coeffs = [Scalar(int(rng.integers(-3, 4))) for _ in range(dim)]
        vec = [sum((coeffs[r] * space[r][i] for r in range(dim)), ZERO) for i in range(len(params))]
        found = accept(_matrix_from_params(n, params, vec), trial)
        if found:
            return found
    return FeasibilityResult("no_positive_point_found", None, dim, trials_used=trials)


def find_lcb(alg: StructureEquations, rng: Optional[np.random.Generator] = None,
             trials: int = 2_000) -> FeasibilityResult:
    """Sampling search for a positive ``Atilde`` whose Lee form is closed.

    The closedness condition is rational in ``Atilde``, so a failed search only
    means nothing was found.
    """
    _require_adapted(alg)
    n = alg.n
    candidates = [linalg.identity(n)]
    for i in range(n):
        A = linalg.identity(n)
        A[i][i] = Scalar(2)
        candidates.append(A)
    rng = rng if rng is not None else np.random.default_rng(0)

    def check(A, used):
        w = nn_form_from_atilde(A)
        sol = lee_form_two_step(alg, w)
        if not exterior_d(alg, sol.theta):
            return FeasibilityResult("found", w, None, lee=sol.theta, trials_used=used)
        return None

    for A in candidates:
        found = check(A, 0)
        if found:
            return found
    for trial in range(1, trials + 1):
        found = check(sample_metric(n, rng).rows(), trial)
        if found:
            return found
    return FeasibilityResult("no_positive_point_found", None, None, trials_used=trials)


# -- (2,0)-forms ---------------------------------------------------------------------

@dataclass
class ObstructionReport:
    theta: Form
    kernel_dim: int
    kernel_basis: List[Form]
    nondegenerate_solution_exists: bool
    certificate: str


def pfaffian(A):
    """Pfaffian by expansion along the first row; entries need ``+``, ``-``, ``*``."""
    n = len(A)
    if n == 0:
        return 1
    if n % 2:
        return 0
    total = 0
    for j in range(1, n):
        a = A[0][j]
        if isinstance(a, Scalar) and a.is_zero():
            continue
        keep = [r for r in range(1, n) if r != j]
        minor = [[A[r][c] for c in keep] for r in keep]
        term = a * pfaffian(minor)
        total = total + term if j % 2 == 1 else total - term
    return total


class _Poly:
    """Sparse multivariate polynomial over the Gaussian rationals."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {e: c for e, c in (terms or {}).items() if not c.is_zero()}

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) + c
        return _Poly(out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + _Poly({e: -c for e, c in other.terms.items()})

    def __rsub__(self, other):
        return _Poly({e: -c for e, c in self.terms.items()}) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return _Poly({e: c * other for e, c in self.terms.items()})
        out: Dict[tuple, Scalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, ZERO) + c1 * c2
        return _Poly(out)

    __rmul__ = __mul__

    def is_zero(self):
        return not self.terms


def _two_zero_basis(n: int):
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def two_zero_obstruction(alg: StructureEquations, theta: Form) -> ObstructionReport:
    """Decide whether some nondegenerate (2,0)-form ``w`` satisfies ``dw = theta ^ w``.

    The solution space is the exact kernel of ``w -> dw - theta ^ w``.  A
    solution is nondegenerate when its Pfaffian is nonzero, so existence
    amounts to the Pfaffian not vanishing identically on the kernel.
    """
    alg.require_valid()
    n = alg.n
    if theta.n != n or theta.degrees() - {1}:
        raise ValueError("theta must be a 1-form on the same algebra")
    if not theta.is_real():
        raise ValueError("theta must be real")
    if exterior_d(alg, theta):
        raise ValueError("theta must be closed")
    pairs = _two_zero_basis(n)
    images = []
    for i, j in pairs:
        w = wedge(alpha(n, i), alpha(n, j))
        images.append(exterior_d(alg, w) - wedge(theta, w))
    rows = sorted({m for f in images for m in f.terms})
    A = [[f.coefficient(m) for f in images] for m in rows]
    kernel = linalg.nullspace(A, len(pairs)) if rows else linalg.identity(len(pairs))
    basis = [sum((wedge(alpha(n, i), alpha(n, j)) * v[p] for p, (i, j) in enumerate(pairs)), Form(n))
             for v in kernel]
    K = len(kernel)
    if n % 2:
        return ObstructionReport(theta, K, basis, False,
                                 f"odd complex dimension {n}: no nondegenerate (2,0)-form exists")
    if K == 0:
        return ObstructionReport(theta, 0, [], False, "kernel is {0}")

    def matrix_of(coeffs, zero):
        M = [[zero] * n for _ in range(n)]
        for p, (i, j) in enumerate(pairs):
            M[i - 1][j - 1] = coeffs[p]
            M[j - 1][i - 1] = -coeffs[p] if not isinstance(coeffs[p], _Poly) else _Poly() - coeffs[p]
        return M

    deg = n // 2
    if K <= 4:
        vars_ = []
        for r in range(K):
            e = tuple(1 if s == r else 0 for s in range(K))
            vars_.append(_Poly({e: ONE}))
        coeffs = []
        for p in range(len(pairs)):
            acc = _Poly()
            for r in range(K):
                if not kernel[r][p].is_zero():
                    acc = acc + vars_[r] * _Poly({(0,) * K: kernel[r][p]})
            coeffs.append(acc)
        pf = pfaffian(matrix_of(coeffs, _Poly()))
        pf = pf if isinstance(pf, _Poly) else _Poly({(0,) * K: Scalar(pf)})
        if pf.is_zero():
            return ObstructionReport(theta, K, basis, False,
                                     f"Pfaffian expanded symbolically in {K} kernel coordinates is identically 0")
        return ObstructionReport(theta, K, basis, True,
                                 f"symbolic Pfaffian has {len(pf.terms)} nonzero terms")
    # a polynomial of degree <= deg in each variable vanishing on {0..deg}^K is zero
    for point in itertools.product(range(deg + 1), repeat=K):
        coeffs = [sum((Scalar(point[r]) * kernel[r][p] for r in range(K)), ZERO) for p in range(len(pairs))]
        value = pfaffian(matrix_of(coeffs, ZERO))
        value = value if isinstance(value, Scalar) else Scalar(value)
        if not value.is_zero():
            return ObstructionReport(theta, K, basis, True,
                                     f"Pfaffian {value} != 0 at kernel point {point}")
    return ObstructionReport(theta, K, basis, False,
                             f"Pfaffian vanishes on the grid {{0..{deg}}}^{K}; degree <= {deg} per coordinate")


# -- rigidity ----------------------------------------------------------------------------

@dataclass
class RigidityReport:
    algebra: str
    trials: int
    balanced_fraction: Fraction
    gauduchon_zero_fraction: Fraction
    pluriclosed_fraction: Fraction
    scalar_signs: List[int]
    scalars: List[Scalar] = field(repr=False, default_factory=list)
    lee_forms: List[Form] = field(repr=False, default_factory=list)
    vaisman_ok: Optional[bool] = None

    @property
    def sign_constant(self) -> bool:
        return len(set(self.scalar_signs)) <= 1

    @property
    def rigid(self) -> bool:
        """All fractions zero and one sign: what the Heisenberg theorems predict."""
        return (self.balanced_fraction == 0 and self.gauduchon_zero_fraction == 0
                and self.pluriclosed_fraction == 0 and self.sign_constant)


def rigidity_experiment(alg: StructureEquations, trials: int, seed: int = 0) -> RigidityReport:
    """Sample ``trials`` metrics and record which special classes they fall into."""
    from .catalog import heisenberg, vaisman_candidate

    alg.require_valid()
    n = alg.n
    balanced = pluri = gzero = 0
    signs, scalars, lees = [], [], []
    for rng in trial_rngs(seed, trials):
        H = sample_metric(n, rng)
        rep = classify_metric(alg, H)
        balanced += rep.balanced
        pluri += rep.pluriclosed
        if rep.gauduchon_scalar is not None:
            scalars.append(rep.gauduchon_scalar)
            gzero += rep.gauduchon_scalar.is_zero()
            signs.append(rep.gauduchon_scalar.sign())
        lees.append(rep.lee)
    vaisman_ok = None
    if n % 2 == 0 and alg == heisenberg(n // 2):
        cand = vaisman_candidate(n // 2)
        omega = cand.metric
        vaisman_ok = (HermitianMatrix(cand.matrix).is_positive()
                      and metric_form(cand.matrix) == omega
                      and exterior_d(alg, omega) == wedge(cand.beta, omega))
    return RigidityReport(alg.name, trials, Fraction(balanced, trials), Fraction(gzero, trials),
                          Fraction(pluri, trials), signs, scalars, lees, vaisman_ok)
