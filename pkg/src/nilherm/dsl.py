"""Text formats: the structure-equation language and metric files.

Structure equations::

    algebra h3 {
      dim 2
      d a1 = 0
      d a2 = (1/2) a1 ^ ~a1     # comments run to end of line
    }

Coefficients are ``3``, ``-2/5``, ``3i``, ``(1/2 - 3/4 i)``.  Whitespace is
insignificant everywhere, so ``da2=(1/2)a1^~a1`` is the same statement.
Omitted generators are closed.

Metric files start with ``H`` (full Hermitian matrix, one row per line) or
``Atilde`` (upper triangle including the real diagonal, row ``i`` holding
``n - i + 1`` entries).  Entries are scalars such as ``1/2+3/4i``, separated
by whitespace, or by commas when they contain spaces.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .exterior import Form, _bits
from .liealg import StructureEquations
from .metrics import HermitianMatrix, PositiveNNForm, nn_form_from_atilde
from .scalar import ONE, ZERO, Scalar

__all__ = [
    "DSLError", "ParseError", "SemanticError", "parse_algebra", "print_algebra",
    "parse_metric", "MetricInput", "print_metric",
]


class DSLError(ValueError):
    exit_code = 2

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col, self.bare = line, col, message
        loc = f"{line}:{col}: " if line else ""
        super().__init__(loc + message)


class ParseError(DSLError):
    exit_code = 2


class SemanticError(DSLError):
    exit_code = 3


# -- lexer ------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str    # KW, IDENT, INT, SYM, D, A, I, EOF
    text: str
    line: int
    col: int


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT = re.compile(r"[0-9]+")
_SYMS = set("{}=+-^~()/")


def _tokenize(text: str) -> List[Token]:
    toks: List[Token] = []
    line, col, pos = 1, 1, 0
    in_body = False

    def emit(kind, s):
        toks.append(Token(kind, s, line, col))

    while pos < len(text):
        ch = text[pos]
        if ch == "\n":
            line, col, pos = line + 1, 1, pos + 1
            continue
        if ch.isspace():
            pos, col = pos + 1, col + 1
            continue
        if ch == "#":
            while pos < len(text) and text[pos] != "\n":
                pos += 1
            continue
        m = _INT.match(text, pos)
        step = 1
        if m:
            emit("INT", m.group())
            step = len(m.group())
        elif ch in _SYMS:
            emit("SYM", ch)
            in_body = in_body or ch == "{"
        elif not in_body:
            m = _IDENT.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {ch!r}", line, col)
            emit("KW" if m.group() == "algebra" else "IDENT", m.group())
            step = len(m.group())
        elif text.startswith("dim", pos):
            emit("KW", "dim")
            step = 3
        elif ch in "dai":
            emit(ch.upper(), ch)
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
        pos, col = pos + step, col + step
    toks.append(Token("EOF", "", line, col))
    return toks


# -- parser -------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def fail(self, what: str, tok: Token = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "EOF" else repr(tok.text)
        raise ParseError(f"expected {what}, found {found}", tok.line, tok.col)

    def accept(self, kind, text=None) -> Optional[Token]:
        t = self.tok
        if t.kind == kind and (text is None or t.text == text):
            self.i += 1
            return t
        return None

    def expect(self, kind, text=None, what=None) -> Token:
        t = self.accept(kind, text)
        if t is None:
            self.fail(what or (repr(text) if text else kind))
        return t

    # program := "algebra" IDENT "{" "dim" INT stmt* "}"
    def program(self):
        self.expect("KW", "algebra", "'algebra'")
        name = self.expect("IDENT", what="algebra name").text
        self.expect("SYM", "{", "'{'")
        self.expect("KW", "dim", "'dim'")
        dt = self.expect("INT", what="dimension")
        n = int(dt.text)
        if n < 1:
            raise SemanticError("dimension must be at least 1", dt.line, dt.col)
        stmts = []
        while self.tok.kind == "D":
            stmts.append(self.stmt())
        self.expect("SYM", "}", "'d' or '}'")
        if self.tok.kind != "EOF":
            self.fail("end of input")
        return name, (n, dt), stmts

    def gen(self):
        """GEN := "a" INT, optionally preceded by "~"; returns (index, barred, token)."""
        start = self.tok
        barred = bool(self.accept("SYM", "~"))
        if self.tok.kind != "A":
            self.fail("generator 'a<k>'")
        self.i += 1
        k = self.expect("INT", what="generator index")
        return int(k.text), barred, start

    def stmt(self):
        self.expect("D")
        idx, barred, gtok = self.gen()
        if barred:
            raise ParseError("left-hand side must be an unbarred generator", gtok.line, gtok.col)
        self.expect("SYM", "=", "'='")
        return idx, gtok, self.expr()

    def rat(self, allow_sign=True) -> Fraction:
        sign = 1
        if allow_sign:
            while self.tok.kind == "SYM" and self.tok.text in "+-":
                if self.tok.text == "-":
                    sign = -sign
                self.i += 1
        num = self.expect("INT", what="number")
        value = Fraction(int(num.text))
        if self.accept("SYM", "/"):
            den = self.expect("INT", what="denominator")
            if int(den.text) == 0:
                raise ParseError("zero denominator", den.line, den.col)
            value /= int(den.text)
        return sign * value

    def coeff(self) -> Scalar:
        if self.accept("SYM", "("):
            re_, im_ = self.rat(), Fraction(0)
            if self.accept("I"):
                re_, im_ = Fraction(0), re_
            elif self.tok.kind == "SYM" and self.tok.text in "+-":
                sign = -1 if self.tok.text == "-" else 1
                self.i += 1
                im_ = sign * self.rat()
                self.expect("I", what="'i'")
            self.expect("SYM", ")", "')'")
            return Scalar(re_, im_)
        value = self.rat()
        if self.accept("I"):
            return Scalar(0, value)
        return Scalar(value)

    def starts_coeff(self) -> bool:
        t = self.tok
        return t.kind == "INT" or (t.kind == "SYM" and t.text in "(+-")

    # term := coeff? factor ("^" factor)*   (degree is checked afterwards)
    def term(self, sign: int):
        t0 = self.tok
        c = self.coeff() if self.starts_coeff() else ONE
        if sign < 0:
            c = -c
        factors = [self.gen()]
        while self.accept("SYM", "^"):
            factors.append(self.gen())
        return c, factors, t0

    def expr(self):
        # "0" alone means the zero form
        nxt = self.peek()
        if self.tok.kind == "INT" and self.tok.text == "0" and (nxt.kind in ("D", "EOF") or
                                                                 (nxt.kind == "SYM" and nxt.text == "}")):
            self.i += 1
            return []
        terms = [self.term(1)]
        while self.tok.kind == "SYM" and self.tok.text in "+-":
            sign = -1 if self.tok.text == "-" else 1
            self.i += 1
            terms.append(self.term(sign))
        return terms


def _gen_mask(idx: int, barred: bool) -> int:
    return 1 << (2 * (idx - 1) + barred)


def parse_algebra(text: str) -> StructureEquations:
    """Parse structure equations; raises ``ParseError`` or ``SemanticError``."""
    name, (n, dtok), stmts = _Parser(text).program()
    d = [Form(n) for _ in range(n)]
    seen = {}
    for idx, gtok, terms in stmts:
        if not 1 <= idx <= n:
            raise SemanticError(f"generator a{idx} out of range 1..{n}", gtok.line, gtok.col)
        if idx in seen:
            raise SemanticError(f"duplicate equation for d a{idx} (first at line {seen[idx]})",
                                gtok.line, gtok.col)
        seen[idx] = gtok.line
        f = Form(n)
        for c, factors, t0 in terms:
            if len(factors) != 2:
                raise SemanticError(f"right-hand side of d a{idx} must have degree 2, "
                                    f"found a degree-{len(factors)} term", t0.line, t0.col)
            mono = Form(n, {0: c})
            for fidx, barred, ftok in factors:
                if not 1 <= fidx <= n:
                    raise SemanticError(f"generator a{fidx} out of range 1..{n}", ftok.line, ftok.col)
                mono = mono ^ Form(n, {_gen_mask(fidx, barred): ONE})
            f = f + mono
        d[idx - 1] = f
    return StructureEquations(n, tuple(d), name)


# -- printer --------------------------------------------------------------------

def _rat(q: Fraction) -> str:
    return str(q)


def _coeff_str(c: Scalar) -> str:
    re_, im_ = c.real, c.imag
    if im_ == 0:
        return f"({_rat(re_)})"
    sign = "-" if im_ < 0 else "+"
    return f"({_rat(re_)} {sign} {_rat(abs(im_))} i)"


def _factor_str(g: int) -> str:
    return ("~" if g % 2 else "") + f"a{g // 2 + 1}"


def _ident(name: str) -> str:
    s = re.sub(r"[^A-Za-z0-9_]", "_", name or "algebra")
    return s if _IDENT.fullmatch(s) else "alg_" + s


def print_algebra(alg: StructureEquations) -> str:
    lines = [f"algebra {_ident(alg.name)} {{", f"  dim {alg.n}"]
    for i, f in enumerate(alg.d_alpha, start=1):
        if not f:
            lines.append(f"  d a{i} = 0")
            continue
        parts = []
        for mask, c in f:
            gens = _bits(mask)
            parts.append(f"{_coeff_str(c)} " + " ^ ".join(_factor_str(g) for g in gens))
        lines.append(f"  d a{i} = " + " + ".join(parts))
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- metric files -------------------------------------------------------------------

@dataclass(frozen=True)
class MetricInput:
    kind: str                      # "H" or "Atilde"
    matrix: Tuple[Tuple[Scalar, ...], ...]

    @property
    def n(self) -> int:
        return len(self.matrix)

    def hermitian(self) -> HermitianMatrix:
        if self.kind != "H":
            raise SemanticError("metric file holds Atilde, not H")
        return HermitianMatrix(self.matrix)

    def nn_form(self) -> PositiveNNForm:
        if self.kind != "Atilde":
            raise SemanticError("metric file holds H, not Atilde")
        return nn_form_from_atilde([list(r) for r in self.matrix])


def _split_entries(body: str) -> List[str]:
    if "," in body:
        return [e.strip() for e in body.split(",") if e.strip()]
    return body.split()


def parse_metric(text: str) -> MetricInput:
    rows: List[Tuple[int, List[Scalar]]] = []
    kind = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if kind is None:
            if body not in ("H", "Atilde"):
                raise ParseError("metric file must start with 'H' or 'Atilde'", lineno, 1)
            kind = body
            continue
        entries = []
        for e in _split_entries(body):
            try:
                entries.append(Scalar.parse(e))
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"malformed entry {e!r}", lineno, raw.find(e) + 1) from None
        rows.append((lineno, entries))
    if kind is None:
        raise ParseError("empty metric file", 1, 1)
    if not rows:
        raise SemanticError("metric file has no rows", 1, 1)
    n = len(rows[0][1])
    if kind == "H" or all(len(r) == n for _, r in rows) and len(rows) == n:
        if len(rows) != n or any(len(r) != n for _, r in rows):
            bad = next((ln for ln, r in rows if len(r) != n), rows[-1][0])
            raise SemanticError(f"H must be a square {n}x{n} matrix", bad, 1)
        M = [r for _, r in rows]
        for i in range(n):
            for j in range(n):
                if M[j][i] != M[i][j].conjugate():
                    raise SemanticError(f"matrix is not Hermitian at ({i + 1},{j + 1})", rows[i][0], 1)
        return MetricInput(kind, tuple(tuple(r) for r in M))
    # upper triangle
    if len(rows) != n:
        raise SemanticError(f"Atilde triangle needs {n} rows, found {len(rows)}", rows[-1][0], 1)
    M = [[ZERO] * n for _ in range(n)]
    for i, (ln, r) in enumerate(rows):
        if len(r) != n - i:
            raise SemanticError(f"row {i + 1} of the Atilde triangle needs {n - i} entries", ln, 1)
        if not r[0].is_real():
            raise SemanticError(f"diagonal entry {i + 1} must be real", ln, 1)
        for off, v in enumerate(r):
            M[i][i + off] = v
            M[i + off][i] = v.conjugate()
    return MetricInput(kind, tuple(tuple(r) for r in M))


def print_metric(kind: str, M) -> str:
    lines = [kind]
    for i, row in enumerate(M):
        lines.append("  ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"
