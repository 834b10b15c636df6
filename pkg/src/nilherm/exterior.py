"""Constant-coefficient exterior algebra on a (1,0) co-frame and its conjugate.

Generators are indexed ``0 .. 2n-1`` in the interleaved order
``a1 < ~a1 < a2 < ~a2 < ... < an < ~an``: the co-frame form ``a_j`` has index
``2(j-1)`` and its conjugate ``~a_j`` has index ``2(j-1)+1``.  A monomial is
the bitmask of its generators, read in increasing order, so the top monomial
``a1^~a1^...^an^~an`` needs no sign bookkeeping.

A :class:`Form` is a sparse map from bitmask to :class:`~nilherm.scalar.Scalar`
with zero coefficients purged.  Forms are treated as immutable values.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Mapping, Tuple

from .scalar import I, ONE, ZERO, Scalar, as_scalar

__all__ = [
    "Form", "AmbientMismatch", "alpha", "alpha_bar", "beta", "constant",
    "wedge", "power", "conjugate", "bigraded_parts", "apply_J", "apply_J_inverse",
    "Differential", "exterior_d", "dc", "top_coefficient", "dvol0",
    "substitute", "mask_bidegree",
]

# i^k for k mod 4, as raw (re, im) integer pairs
_I_POW = ((1, 0), (0, 1), (-1, 0), (0, -1))


class AmbientMismatch(ValueError):
    pass


@lru_cache(maxsize=None)
def _masks(n: int) -> Tuple[int, int]:
    even = sum(1 << (2 * j) for j in range(n))
    return even, even << 1


def mask_bidegree(mask: int, n: int) -> Tuple[int, int]:
    even, odd = _masks(n)
    return (mask & even).bit_count(), (mask & odd).bit_count()


@lru_cache(maxsize=1 << 20)
def _wedge_sign(m1: int, m2: int) -> int:
    """Sign of sorting ``m1`` followed by ``m2`` into increasing order."""
    inversions = 0
    m = m2
    while m:
        low = m & -m
        inversions += (m1 >> low.bit_length()).bit_count()
        m ^= low
    return -1 if inversions & 1 else 1


def _bits(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _gen_name(g: int) -> str:
    j = g // 2 + 1
    return f"~a{j}" if g % 2 else f"a{j}"


class Form:
    """Element of the complexified exterior algebra in complex dimension ``n``."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[int, object] = None):
        self.n = n
        clean: Dict[int, Scalar] = {}
        if terms:
            limit = 1 << (2 * n)
            for m, c in terms.items():
                if m < 0 or m >= limit:
                    raise ValueError(f"monomial {m:b} outside ambient dimension {n}")
                s = as_scalar(c)
                if not s.is_zero():
                    clean[m] = s
        self.terms = clean

    @classmethod
    def _from_raw(cls, n: int, raw: Dict[int, Tuple[int, int, int]]) -> "Form":
        f = object.__new__(cls)
        f.n = n
        f.terms = {m: Scalar.raw(*t) for m, t in raw.items() if t[0] or t[1]}
        return f

    @classmethod
    def _trusted(cls, n: int, terms: Dict[int, Scalar]) -> "Form":
        f = object.__new__(cls)
        f.n = n
        f.terms = terms
        return f

    # -- basic protocol -------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Form):
            if isinstance(other, int) and other == 0:
                return not self.terms
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self) -> Iterator[Tuple[int, Scalar]]:
        return iter(sorted(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def _check(self, other: "Form"):
        if self.n != other.n:
            raise AmbientMismatch(f"ambient dimensions differ: {self.n} vs {other.n}")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, Form):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return Form._trusted(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Form._trusted(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        s = as_scalar(scalar, strict=False)
        if s is None:
            return NotImplemented
        if s.is_zero():
            return Form(self.n)
        return Form._trusted(self.n, {m: c * s for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (ONE / as_scalar(scalar))

    def __xor__(self, other):
        return wedge(self, other)

    # -- structure --------------------------------------------------------

    def degrees(self) -> set:
        return {m.bit_count() for m in self.terms}

    def degree(self) -> int:
        """Degree of a homogeneous form (0 for the zero form)."""
        degs = self.degrees()
        if len(degs) > 1:
            raise ValueError(f"form is not homogeneous: degrees {sorted(degs)}")
        return degs.pop() if degs else 0

    def coefficient(self, mask: int) -> Scalar:
        return self.terms.get(mask, ZERO)

    def is_real(self) -> bool:
        return conjugate(self) == self

    def support(self) -> set:
        """Generator indices occurring in some monomial."""
        out = 0
        for m in self.terms:
            out |= m
        return set(_bits(out))

    def __repr__(self):
        if not self.terms:
            return f"Form(n={self.n}, 0)"
        return f"Form(n={self.n}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            mono = "^".join(_gen_name(g) for g in _bits(m)) or "1"
            parts.append(f"({c})*{mono}")
        return " + ".join(parts)


# -- constructors -----------------------------------------------------------

def constant(n: int, c=1) -> Form:
    return Form(n, {0: c})


def alpha(n: int, j: int) -> Form:
    """The co-frame form ``a_j`` (1-based)."""
    if not 1 <= j <= n:
        raise IndexError(f"generator a{j} outside 1..{n}")
    return Form._trusted(n, {1 << (2 * (j - 1)): ONE})


def alpha_bar(n: int, j: int) -> Form:
    if not 1 <= j <= n:
        raise IndexError(f"generator ~a{j} outside 1..{n}")
    return Form._trusted(n, {1 << (2 * (j - 1) + 1): ONE})


def beta(n: int, j: int) -> Form:
    """The real 1-form ``a_j + ~a_j``."""
    return alpha(n, j) + alpha_bar(n, j)


# -- algebra ----------------------------------------------------------------

def wedge(f: Form, g: Form) -> Form:
    if f.n != g.n:
        raise AmbientMismatch(f"ambient dimensions differ: {f.n} vs {g.n}")
    acc: Dict[int, List[int]] = {}
    gcd = math.gcd
    g_items = list(g.terms.items())
    for m1, c1 in f.terms.items():
        a, b, d1 = c1.re_num, c1.im_num, c1.den
        for m2, c2 in g_items:
            if m1 & m2:
                continue
            c, e, d2 = c2.re_num, c2.im_num, c2.den
            re = a * c - b * e
            im = a * e + b * c
            d = d1 * d2
            if _wedge_sign(m1, m2) < 0:
                re, im = -re, -im
            m = m1 | m2
            slot = acc.get(m)
            if slot is None:
                acc[m] = [re, im, d]
            else:
                sr, si, sd = slot
                if sd == d:
                    nr, ni, nd = sr + re, si + im, d
                else:
                    nr, ni, nd = sr * d + re * sd, si * d + im * sd, sd * d
                q = gcd(nr, ni, nd)
                if q != 1:
                    nr //= q
                    ni //= q
                    nd //= q
                slot[0], slot[1], slot[2] = nr, ni, nd
    return Form._from_raw(f.n, acc)


def power(f: Form, k: int) -> Form:
    if k < 0:
        raise ValueError("negative exterior power")
    out = constant(f.n)
    for _ in range(k):
        out = wedge(out, f)
    return out


def _conj_mask(mask: int, n: int) -> Tuple[int, int]:
    even, odd = _masks(n)
    swapped = ((mask & even) << 1) | ((mask & odd) >> 1)
    full_pairs = (mask & even & (mask >> 1)).bit_count()
    return swapped, (-1 if full_pairs & 1 else 1)


def conjugate(f: Form) -> Form:
    """Swap ``a_j`` and ``~a_j`` everywhere and conjugate the coefficients."""
    out = {}
    for m, c in f.terms.items():
        m2, sign = _conj_mask(m, f.n)
        out[m2] = Scalar.raw(sign * c.re_num, -sign * c.im_num, c.den)
    return Form._trusted(f.n, out)


def bigraded_parts(f: Form) -> Dict[Tuple[int, int], Form]:
    parts: Dict[Tuple[int, int], Dict[int, Scalar]] = {}
    for m, c in f.terms.items():
        parts.setdefault(mask_bidegree(m, f.n), {})[m] = c
    return {pq: Form._trusted(f.n, t) for pq, t in sorted(parts.items())}


def _scale_by_i_power(f: Form, exponent_of) -> Form:
    out = {}
    for m, c in f.terms.items():
        ur, ui = _I_POW[exponent_of(m) % 4]
        a, b = c.re_num, c.im_num
        out[m] = Scalar.raw(a * ur - b * ui, a * ui + b * ur, c.den)
    return Form._trusted(f.n, out)


def apply_J(f: Form) -> Form:
    """Multiply each (p,q) part by ``i**(q-p)``."""
    n = f.n

    def exponent(m):
        p, q = mask_bidegree(m, n)
        return q - p

    return _scale_by_i_power(f, exponent)


def apply_J_inverse(f: Form) -> Form:
    """``(-1)**deg * J`` on each homogeneous piece."""
    n = f.n

    def exponent(m):
        p, q = mask_bidegree(m, n)
        return q - p + 2 * (p + q)

    return _scale_by_i_power(f, exponent)


class Differential:
    """The anti-derivation determined by ``d a_j`` and ``d ~a_j = conj(d a_j)``.

    Values on monomials are memoised; instances are cheap to share.
    """

    def __init__(self, n: int, d_alpha: Iterable[Form]):
        self.n = n
        gens = []
        for j, df in enumerate(d_alpha, start=1):
            if df.n != n:
                raise AmbientMismatch(f"d a{j} lives in dimension {df.n}, expected {n}")
            gens.append(df)
            gens.append(conjugate(df))
        if len(gens) != 2 * n:
            raise ValueError(f"expected {n} structure equations, got {len(gens) // 2}")
        self.on_generator = gens
        self._cache: Dict[int, Form] = {}

    def monomial(self, mask: int) -> Form:
        hit = self._cache.get(mask)
        if hit is not None:
            return hit
        out = Form(self.n)
        for pos, g in enumerate(_bits(mask)):
            dg = self.on_generator[g]
            if not dg:
                continue
            rest = Form._trusted(self.n, {mask ^ (1 << g): ONE if pos % 2 == 0 else -ONE})
            # d g has even degree, so it commutes past the generators before g
            out = out + wedge(dg, rest)
        self._cache[mask] = out
        return out

    def __call__(self, f: Form) -> Form:
        if f.n != self.n:
            raise AmbientMismatch(f"form in dimension {f.n}, algebra in dimension {self.n}")
        acc: Dict[int, Scalar] = {}
        for m, c in f.terms.items():
            for m2, c2 in self.monomial(m).terms.items():
                v = c * c2
                s = acc.get(m2)
                acc[m2] = v if s is None else s + v
        return Form(self.n, acc)


def exterior_d(alg, f: Form) -> Form:
    """Exterior derivative induced by the structure equations of ``alg``.

    ``alg`` must validate; an invalid algebra raises
    :class:`nilherm.liealg.InvalidAlgebraError`.
    """
    alg.require_valid()
    return alg.differential(f)


def dc(alg, f: Form) -> Form:
    """``-J^{-1} d J f``; on a (1,1)-form this is ``J d f``."""
    return -apply_J_inverse(exterior_d(alg, apply_J(f)))


def dvol0(n: int) -> Form:
    """``(i a1^~a1) ^ ... ^ (i an^~an)``."""
    return Form(n, {(1 << (2 * n)) - 1: I ** n})


def top_coefficient(f: Form) -> Scalar:
    """The ``c`` with ``f = c * dvol0``; ``f`` must be of top degree."""
    top = (1 << (2 * f.n)) - 1
    extra = [m for m in f.terms if m != top]
    if extra:
        raise ValueError(f"form has terms below top degree {2 * f.n}")
    return f.coefficient(top) / (I ** f.n)


def substitute(f: Form, images: List[Form]) -> Form:
    """Pull back along the algebra map sending generator ``g`` to ``images[g]``.

    Each image must be a 1-form in the same ambient dimension.
    """
    if len(images) != 2 * f.n:
        raise ValueError("need one image per generator")
    out = Form(f.n)
    for m, c in f.terms.items():
        term = constant(f.n, c)
        for g in _bits(m):
            term = wedge(term, images[g])
        out = out + term
    return out
