"""Text front end: defining equations and map components.

Grammar::

    program  := equation ((';' | newline) equation)*
    equation := expr ['=' expr]
    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := ('+' | '-') unary | power
    power    := atom ['^' INT]
    atom     := INT | 'i' | VAR | FUNC '(' expr ')' | '(' expr ')'

``VAR`` is ``z1..zn``, ``w1..wd`` (``z`` and ``w`` when ``n = d = 1``);
``FUNC`` is ``conj``, ``Im``, ``Re`` or ``abs2`` (``abs2(e) = e*conj(e)``).
Division is only by nonzero constants, so ``p/q`` literals are ordinary
expressions.

If every equation reads ``wk = expr`` the input is a ``Q``-form graph
``w = Q(z, conj z, conj w)``.  Otherwise each equation ``lhs = rhs`` gives
``rho = lhs - rhs``, which must be real; an anti-real ``rho`` (for example
``w - conj(w)``) is divided by ``2i``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence

from .coeff import Coeff, I
from .errors import DomainError, ParseError
from .manifold import ManifoldGerm, manifold_from_Q, manifold_from_rho, reality_violations, swap_conjugate
from .series import MultiSeries, SeriesVec

FUNCS = ("conj", "Im", "Re", "abs2")

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()=;,])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, nl, end
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            out.append(Token("nl", s, line, col))
            line, col = line + 1, 1
        else:
            if kind != "ws":
                out.append(Token(kind, s, line, col))
            col += len(s)
        pos = m.end()
    out.append(Token("end", "", line, col))
    return out


_VAR = re.compile(r"^([zw])(\d*)$")


def _scan_dims(tokens: Sequence[Token]) -> tuple[int, int, bool]:
    """Largest ``z`` and ``w`` indices used and whether bare aliases occur."""
    nz = nw = 0
    alias = False
    for t in tokens:
        if t.kind != "name":
            continue
        m = _VAR.match(t.text)
        if not m:
            continue
        if not m.group(2):
            alias = True
            idx = 1
        else:
            idx = int(m.group(2))
            if idx < 1:
                raise ParseError(f"variable index must start at 1: {t.text}", t.line, t.col)
        if m.group(1) == "z":
            nz = max(nz, idx)
        else:
            nw = max(nw, idx)
    return nz, nw, alias


class _Parser:
    def __init__(self, tokens: list[Token], n: int, d: int, K: int, allow_conj: bool = True):
        self.toks = tokens
        self.pos = 0
        self.n, self.d, self.K = n, d, K
        self.N = n + d
        self.arity = 2 * self.N if allow_conj else self.N
        self.allow_conj = allow_conj

    # token helpers
    def peek(self) -> Token:
        return self.toks[self.pos]

    def take(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.take()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return t

    def const(self, c) -> MultiSeries:
        return MultiSeries.constant(c, self.arity, self.K)

    # grammar
    def program(self) -> list[tuple[Optional[Token], MultiSeries, MultiSeries, Token]]:
        eqs = []
        while True:
            while self.peek().kind == "nl" or self.peek().text == ";":
                self.take()
            if self.peek().kind == "end":
                break
            start = self.peek()
            lhs = self.expr()
            rhs = None
            if self.peek().text == "=":
                self.take()
                rhs = self.expr()
            t = self.peek()
            if t.kind not in ("nl", "end") and t.text != ";":
                raise ParseError(f"unexpected {t.text!r}", t.line, t.col)
            eqs.append((start, lhs, rhs, t))
        return eqs

    def expr(self) -> MultiSeries:
        v = self.term()
        while self.peek().text in ("+", "-"):
            op = self.take().text
            r = self.term()
            v = v + r if op == "+" else v - r
        return v

    def term(self) -> MultiSeries:
        v = self.unary()
        while self.peek().text in ("*", "/"):
            t = self.take()
            r = self.unary()
            if t.text == "*":
                v = v * r
            else:
                if r.degree() not in (None, 0) or not r.constant_term():
                    raise ParseError("division only by nonzero constants", t.line, t.col)
                v = v.scale(1 / r.constant_term())
        return v

    def unary(self) -> MultiSeries:
        t = self.peek()
        if t.text == "-":
            self.take()
            return -self.unary()
        if t.text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> MultiSeries:
        base = self.atom()
        if self.peek().text == "^":
            self.take()
            t = self.take()
            if t.kind != "num":
                raise ParseError("exponent must be a nonnegative integer", t.line, t.col)
            return base ** int(t.text)
        return base

    def atom(self) -> MultiSeries:
        t = self.take()
        if t.kind == "num":
            return self.const(int(t.text))
        if t.text == "(":
            v = self.expr()
            self.expect(")")
            return v
        if t.kind == "name":
            if t.text == "i":
                return self.const(I)
            if t.text in FUNCS:
                if not self.allow_conj:
                    raise ParseError(f"{t.text} is not allowed in a holomorphic expression", t.line, t.col)
                self.expect("(")
                v = self.expr()
                self.expect(")")
                cv = swap_conjugate(v, self.N)
                if t.text == "conj":
                    return cv
                if t.text == "Re":
                    return (v + cv).scale(Coeff.of("1/2"))
                if t.text == "Im":
                    return (v - cv).scale(1 / Coeff.of(2j))
                return v * cv
            m = _VAR.match(t.text)
            if m:
                idx = int(m.group(2)) if m.group(2) else 1
                if not m.group(2) and m.group(1) == "z" and self.n != 1:
                    raise ParseError("bare 'z' needs n = 1", t.line, t.col)
                if not m.group(2) and m.group(1) == "w" and self.d != 1:
                    raise ParseError("bare 'w' needs d = 1", t.line, t.col)
                if m.group(1) == "z":
                    if idx > self.n:
                        raise ParseError(f"{t.text} exceeds n = {self.n}", t.line, t.col)
                    return MultiSeries.variable(idx - 1, self.arity, self.K)
                if idx > self.d:
                    raise ParseError(f"{t.text} exceeds d = {self.d}", t.line, t.col)
                return MultiSeries.variable(self.n + idx - 1, self.arity, self.K)
            raise ParseError(f"unknown name {t.text!r}", t.line, t.col)
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.line, t.col)


def _dims(tokens, n: Optional[int], d: Optional[int], neqs: Optional[int]) -> tuple[int, int]:
    nz, nw, _ = _scan_dims(tokens)
    if n is None:
        n = max(nz, 1)
    if d is None:
        d = max(nw, neqs or 0, 1)
    if nz > n:
        raise ParseError(f"z index {nz} exceeds n = {n}")
    if nw > d:
        raise ParseError(f"w index {nw} exceeds d = {d}")
    return n, d


def _count_equations(tokens) -> int:
    count, seen = 0, False
    for t in tokens:
        if t.kind in ("nl", "end") or t.text == ";":
            if seen:
                count += 1
            seen = False
        else:
            seen = True
    return count


def _is_w_token(tok: Token, lhs: MultiSeries, n: int) -> Optional[int]:
    m = _VAR.match(tok.text)
    if not m or m.group(1) != "w":
        return None
    terms = dict(lhs.terms)
    if len(terms) != 1:
        return None
    (k, c), = terms.items()
    if c != Coeff.of(1) or sum(k) != 1:
        return None
    idx = k.index(1)
    return idx - n if idx >= n else None


def parse_manifold(text: str, order: int = 6, n: Optional[int] = None, d: Optional[int] = None) -> ManifoldGerm:
    """Parse defining equations into a :class:`ManifoldGerm` truncated at ``order``."""
    tokens = tokenize(text)
    neqs = _count_equations(tokens)
    if neqs == 0:
        raise ParseError("no equations", 1, 1)
    n, d = _dims(tokens, n, d, neqs)
    if neqs != d:
        raise ParseError(f"expected {d} equations, found {neqs}")
    p = _Parser(tokens, n, d, order)
    eqs = p.program()
    N = n + d
    qform = {}
    for start, lhs, rhs, _ in eqs:
        if rhs is None:
            qform = None
            break
        k = _is_w_token(start, lhs, n)
        if k is None or k in qform:
            qform = None
            break
        qform[k] = rhs
    if qform is not None and sorted(qform) == list(range(d)):
        # dropping the holomorphic w block leaves (z, chi, tau)
        Q = []
        wv = [n + j for j in range(d)]
        for k in range(d):
            q = qform[k]
            if any(any(key[v] for v in wv) for key in q.terms):
                raise ParseError(f"Q for w{k + 1} may not depend on w (only on conj(w))")
            Q.append(q.drop_variables(wv))
        try:
            return manifold_from_Q(Q, n, d)
        except DomainError as e:
            raise DomainError(f"Q-form rejected: {e}") from None
    rho = []
    for start, lhs, rhs, _ in eqs:
        r = lhs if rhs is None else lhs - rhs
        if r.is_zero():
            raise ParseError("equation is identically zero", start.line, start.col)
        sw = swap_conjugate(r, N)
        if sw == r:
            rho.append(r)
        elif sw == -r:
            rho.append(r.scale(1 / Coeff.of(2j)))
        else:
            bad = reality_violations([r], N)
            pair = bad[0] if bad else None
            raise DomainError(
                f"equation at {start.line}:{start.col} is not real: "
                f"coefficient {pair[2]} at {pair[1]} vs conjugate partner {pair[3]}" if pair else "equation is not real"
            )
    return manifold_from_rho(rho, N, d)


def parse_map(text: str, n: int, d: int, order: int = 6) -> SeriesVec:
    """Holomorphic components ``f_1; f_2; ...`` in the variables ``(z, w)`` of ``C^n x C^d``."""
    tokens = tokenize(text)
    p = _Parser(tokens, n, d, order, allow_conj=False)
    eqs = p.program()
    out = []
    for start, lhs, rhs, _ in eqs:
        if rhs is not None:
            raise ParseError("map components are expressions, not equations", start.line, start.col)
        out.append(lhs)
    return SeriesVec(out)


def parse_constants(text: str) -> list[Coeff]:
    """Comma-separated Gaussian rationals such as ``0, 1/2 + i``."""
    out = []
    for part in text.split(","):
        tokens = tokenize(part)
        if any(t.kind == "name" and t.text != "i" for t in tokens):
            raise ParseError(f"constant expected, got {part.strip()!r}")
        p = _Parser(tokens, 0, 0, 0, allow_conj=False)
        eqs = p.program()
        if len(eqs) != 1 or eqs[0][2] is not None:
            raise ParseError(f"constant expected, got {part.strip()!r}")
        out.append(eqs[0][1].constant_term())
    return out


# ---------------------------------------------------------------------------
# pretty printing (inverse of the parser)


def _q(x) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _imag(x) -> str:
    return "i" if x == 1 else f"{_q(x)}*i"


def format_coeff(c: Coeff) -> str:
    c = Coeff.of(c)
    if not c.im:
        return _q(c.re)
    if not c.re:
        return "-i" if c.im == -1 else _imag(c.im)
    sign = "-" if c.im < 0 else "+"
    return f"({_q(c.re)} {sign} {_imag(abs(c.im))})"


def _names(n: int, d: int) -> tuple[list[str], list[str]]:
    if n == 1 and d == 1:
        return ["z"], ["w"]
    return [f"z{j + 1}" for j in range(n)], [f"w{k + 1}" for k in range(d)]


def format_series(s: MultiSeries, names: Sequence[str]) -> str:
    """Parseable text for a polynomial jet; ``names`` gives one token per variable."""
    parts = []
    for key, c in s.sorted_terms():
        factors = []
        for name, e in zip(names, key):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        coeff = format_coeff(c)
        if not factors:
            parts.append(coeff)
        elif coeff == "1":
            parts.append("*".join(factors))
        elif coeff == "-1":
            parts.append("-" + "*".join(factors))
        else:
            parts.append("*".join([coeff] + factors))
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def format_manifold(M: ManifoldGerm) -> str:
    """Text that :func:`parse_manifold` maps back to ``M``."""
    n, d = M.n, M.d
    zs, ws = _names(n, d)
    if M.kind == "Q":
        qn = zs + [f"conj({z})" for z in zs] + [f"conj({w})" for w in ws]
        return "\n".join(f"{w} = {format_series(q, qn)}" for w, q in zip(ws, M.graph.Q))
    names = zs + ws + [f"conj({v})" for v in zs + ws]
    return "\n".join(format_series(r, names) for r in M.rho)


def format_map(F: Sequence[MultiSeries], n: int, d: int) -> str:
    zs, ws = _names(n, d)
    return "; ".join(format_series(c, zs + ws) for c in F)
