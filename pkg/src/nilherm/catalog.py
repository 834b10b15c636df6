"""Named algebras used throughout the test and verification suites."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exterior import Form, alpha, alpha_bar, apply_J, beta, wedge
from .liealg import StructureEquations
from .scalar import I, as_scalar

__all__ = [
    "CatalogError", "abelian", "heisenberg", "example_a", "example_b",
    "vaisman_candidate", "VaismanCandidate", "catalog_get", "CATALOG_NAMES",
    "standard_metric",
]


class CatalogError(ValueError):
    pass


def _zero(n):
    return Form(n)


def abelian(n: int) -> StructureEquations:
    if n < 1:
        raise CatalogError("abelian(n) needs n >= 1")
    return StructureEquations(n, tuple(_zero(n) for _ in range(n)), f"abelian{n}")


def heisenberg(m: int) -> StructureEquations:
    """Complex dimension ``2m``: ``d a_{2m} = 1/2 sum_{i<2m} a_i ^ ~a_i``."""
    if m < 1:
        raise CatalogError("heisenberg(m) needs m >= 1")
    n = 2 * m
    top = sum((wedge(alpha(n, i), alpha_bar(n, i)) for i in range(1, n)), Form(n)) * Fraction(1, 2)
    d = [_zero(n) for _ in range(n - 1)] + [top]
    return StructureEquations(n, tuple(d), f"heisenberg{m}")


def example_a(q, n: int) -> StructureEquations:
    """``d a_n = q a_1 ^ ~a_1``, all other generators closed."""
    q = Fraction(q)
    if q == 0:
        raise CatalogError("example_a needs q != 0")
    if n < 2:
        raise CatalogError("example_a needs n >= 2")
    d = [_zero(n) for _ in range(n - 1)] + [wedge(alpha(n, 1), alpha_bar(n, 1)) * q]
    return StructureEquations(n, tuple(d), f"exampleA_{_tag(q)}_{n}")


def example_b(n: int, cs: Sequence) -> StructureEquations:
    """``d a_n = sum_r c_r a_r ^ ~a_r`` with ``c_r > 0`` for ``r <= n-2``, ``c_{n-1} < 0``."""
    cs = [Fraction(c) for c in cs]
    if n < 3:
        raise CatalogError("example_b needs n >= 3")
    if len(cs) != n - 1:
        raise CatalogError(f"example_b({n}) needs {n - 1} constants, got {len(cs)}")
    if any(c <= 0 for c in cs[:-1]) or cs[-1] >= 0:
        raise CatalogError("example_b needs c_r > 0 for r <= n-2 and c_{n-1} < 0")
    if sum(cs) == 0:
        raise CatalogError("example_b needs sum of constants != 0")
    top = sum((wedge(alpha(n, r), alpha_bar(n, r)) * c for r, c in enumerate(cs, start=1)), Form(n))
    d = [_zero(n) for _ in range(n - 1)] + [top]
    return StructureEquations(n, tuple(d), f"exampleB_{n}_" + "_".join(_tag(c) for c in cs))


def _tag(q: Fraction) -> str:
    s = str(q).replace("/", "o").replace("-", "m")
    return s


def standard_metric(n: int) -> Form:
    """``i sum_j a_j ^ ~a_j``."""
    return sum((wedge(alpha(n, j), alpha_bar(n, j)) for j in range(1, n + 1)), Form(n)) * I


@dataclass(frozen=True)
class VaismanCandidate:
    algebra: StructureEquations
    metric: Form     # beta ^ J beta - d J beta
    beta: Form       # a_n + ~a_n
    matrix: tuple    # H with metric = i sum H_jl a_j ^ ~a_l


def vaisman_candidate(m: int) -> VaismanCandidate:
    alg = heisenberg(m)
    n = alg.n
    b = beta(n, n)
    jb = apply_J(b)
    omega = wedge(b, jb) - alg.differential(jb)
    H = tuple(tuple(as_scalar((2 if j == n - 1 else 1) if j == l else 0) for l in range(n)) for j in range(n))
    return VaismanCandidate(alg, omega, b, H)


CATALOG_NAMES = ("abelian", "heisenberg", "exampleA", "exampleB", "vaisman_candidate")


def catalog_get(name: str, *params):
    """Look up a catalog entry by name; parameters may be strings."""
    try:
        if name == "abelian":
            (n,) = params
            return abelian(int(n))
        if name == "heisenberg":
            (m,) = params
            return heisenberg(int(m))
        if name == "exampleA":
            q, n = params
            return example_a(Fraction(q), int(n))
        if name == "exampleB":
            n, *cs = params
            return example_b(int(n), [Fraction(c) for c in cs])
        if name == "vaisman_candidate":
            (m,) = params
            return vaisman_candidate(int(m))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, CatalogError):
            raise
        raise CatalogError(f"bad parameters for {name}: {params!r} ({exc})") from exc
    raise CatalogError(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG_NAMES)}")
