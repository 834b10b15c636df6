"""Slow, independent reference implementation used to freeze and cross-check values.

Shares no code with the package.  Generators are ordered a1 < ... < an <
~a1 < ... < ~an (a different order from the engine's), monomials are sorted
tuples, and coefficients are pairs of Fractions.
"""

from fractions import Fraction
from itertools import combinations
from math import factorial


class G:
    """Gaussian rational ``re + im i``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re, self.im = Fraction(re), Fraction(im)

    def __add__(self, o):
        o = _g(o)
        return G(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return G(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-_g(o))

    def __mul__(self, o):
        o = _g(o)
        return G(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _g(o)
        n = o.re * o.re + o.im * o.im
        return self * G(o.re / n, -o.im / n)

    def conj(self):
        return G(self.re, -self.im)

    def __eq__(self, o):
        o = _g(o)
        return self.re == o.re and self.im == o.im

    def __bool__(self):
        return bool(self.re or self.im)

    def __repr__(self):
        return f"G({self.re}, {self.im})"


def _g(x):
    return x if isinstance(x, G) else G(x)


IU = G(0, 1)


# generator labels: ("a", j) -> j - 1, ("b", j) -> n + j - 1

def gen_a(n, j):
    return j - 1


def gen_b(n, j):
    return n + j - 1


def is_barred(n, g):
    return g >= n


def index(n, g):
    return g % n + 1


def sort_sign(seq):
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, ()
    sign = 1
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                sign = -sign
    return sign, tuple(seq)


def clean(f):
    return {m: c for m, c in f.items() if c}


def add(*fs):
    out = {}
    for f in fs:
        for m, c in f.items():
            out[m] = out.get(m, G()) + c
    return clean(out)


def scale(f, s):
    return clean({m: c * s for m, c in f.items()})


def wedge(f, g):
    out = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            sign, m = sort_sign(m1 + m2)
            if sign:
                out[m] = out.get(m, G()) + c1 * c2 * sign
    return clean(out)


def gen(g):
    return {(g,): G(1)}


def conj(f, n):
    out = {}
    for m, c in f.items():
        swapped = [g + n if g < n else g - n for g in m]
        sign, mm = sort_sign(swapped)
        out[mm] = out.get(mm, G()) + c.conj() * sign
    return clean(out)


def bidegree(m, n):
    q = sum(1 for g in m if g >= n)
    return len(m) - q, q


def J(f, n):
    out = {}
    for m, c in f.items():
        p, q = bidegree(m, n)
        out[m] = c * _ipow(q - p)
    return clean(out)


def _ipow(k):
    return [G(1), G(0, 1), G(-1), G(0, -1)][k % 4]


def d(f, dgen, n):
    """Anti-derivation from ``dgen[g]`` (2-forms on every generator)."""
    out = {}
    for m, c in f.items():
        for pos, g in enumerate(m):
            # d(x1...xk) = sum (-1)^pos x1..d(x_pos)..xk
            left = {m[:pos]: G(1)}
            right = {m[pos + 1:]: G(1)}
            term = wedge(wedge(left, dgen[g]), right)
            out = add(out, scale(term, c * (-1) ** pos))
    return out


def structure(n, d_alpha):
    """``d_alpha[j]`` in oracle form for j = 0..n-1; extends to barred generators by conjugation."""
    dgen = {}
    for j in range(n):
        dgen[j] = d_alpha[j]
        dgen[n + j] = conj(d_alpha[j], n)
    return dgen


def dc(f, dgen, n):
    jf = J(f, n)
    djf = d(jf, dgen, n)
    # J^{-1} = (-1)^deg J, applied per degree
    out = {}
    for m, c in djf.items():
        p, q = bidegree(m, n)
        out[m] = c * _ipow(q - p) * (-1) ** len(m)
    return scale(clean(out), -1)


def power(f, k, n):
    out = {(): G(1)}
    for _ in range(k):
        out = wedge(out, f)
    return out


def dvol(n):
    out = {(): G(1)}
    for j in range(1, n + 1):
        out = wedge(out, scale(wedge(gen(gen_a(n, j)), gen(gen_b(n, j))), IU))
    return out


def top_coefficient(f, n):
    top = tuple(range(2 * n))
    if any(m != top for m in f):
        raise ValueError("not a top form")
    return f.get(top, G()) / dvol(n)[top]


def metric(H, n):
    """``i sum H[j][l] a_j ^ ~a_l`` with H entries given as G."""
    out = {}
    for j in range(n):
        for l in range(n):
            out = add(out, scale(wedge(gen(gen_a(n, j + 1)), gen(gen_b(n, l + 1))), IU * H[j][l]))
    return out


# -- conversion from the engine (through its public data only) --------------------------------

def from_engine(form):
    """Rebuild an engine Form by wedging single generators in the oracle's own algebra."""
    n = form.n
    out = {}
    for mask, c in form.terms.items():
        piece = {(): G(c.real, c.imag)}
        g = 0
        while mask >> g:
            if mask >> g & 1:
                j, barred = g // 2 + 1, g % 2
                piece = wedge(piece, gen(gen_b(n, j) if barred else gen_a(n, j)))
            g += 1
        out = add(out, piece)
    return out


def algebra_from_engine(alg):
    n = alg.n
    return structure(n, [from_engine(f) for f in alg.d_alpha])


def lee_float(alg_dgen, H, n):
    """Lee form by a float least-squares solve of theta ^ w^{n-1} = d w^{n-1}; returns 2n complex coefficients."""
    import numpy as np

    w = metric(H, n)
    W = power(w, n - 1, n)
    dW = d(W, alg_dgen, n)
    cols = [wedge(gen(g), W) for g in range(2 * n)]
    keys = sorted({m for c in cols for m in c} | set(dW))
    A = np.array([[complex(float(c.get(k, G()).re), float(c.get(k, G()).im)) for c in cols] for k in keys])
    b = np.array([complex(float(dW.get(k, G()).re), float(dW.get(k, G()).im)) for k in keys])
    x, *_ = np.linalg.lstsq(A, b, rcond=None)
    return x


def all_monomials(n):
    for k in range(2 * n + 1):
        for m in combinations(range(2 * n), k):
            yield m


def fact(k):
    return factorial(k)
