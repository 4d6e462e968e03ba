"""Truncated multivariate power series with exact Gaussian-rational coefficients.

A :class:`MultiSeries` stores the K-jet (total degree ``<= trunc``) of a germ at
the origin as a sparse ``{exponent tuple: Coeff}`` map.  Equality is equality
of K-jets: two series compare equal iff arity, truncation order and the
pruned term maps agree.  "Zero" verdicts therefore always mean "zero up to
order K".

Composition comes in two flavours.  ``compose`` is the germ operation and
requires the inner map to vanish at 0.  ``substitute`` treats the outer
series as an exact polynomial and accepts inner series with constant terms;
this is what evaluation at points and re-expansion about a base point use.
"""

from __future__ import annotations

import operator
from bisect import bisect_right
from types import MappingProxyType
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

from gmpy2 import mpq

from . import linalg
from .coeff import ONE, ZERO, Coeff, Number
from .errors import DomainError, SingularJacobian, StructuralError, TruncationExhausted

Key = Tuple[int, ...]
Terms = Dict[Key, Coeff]

_Q0 = mpq(0)
_add = operator.add


def _deg(key: Key) -> int:
    return sum(key)


# ---------------------------------------------------------------------------
# raw term kernels (no validation, explicit truncation)


def _mul_terms(a: Terms, b: Terms, K: int) -> Terms:
    """Product of two term maps keeping total degree <= K."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    bl = sorted(((sum(k), k, c.re, c.im) for k, c in b.items()), key=operator.itemgetter(0))
    bdeg = [t[0] for t in bl]
    acc: dict = {}
    get = acc.get
    for ka, ca in a.items():
        da = sum(ka)
        room = K - da
        if room < 0:
            continue
        stop = bisect_right(bdeg, room)
        if not stop:
            continue
        ar, ai = ca.re, ca.im
        for i in range(stop):
            _, kb, br, bi = bl[i]
            key = tuple(map(_add, ka, kb))
            if ai:
                if bi:
                    re = ar * br - ai * bi
                    im = ar * bi + ai * br
                else:
                    re = ar * br
                    im = ai * br
            else:
                re = ar * br
                im = ar * bi
            cur = get(key)
            if cur is None:
                acc[key] = [re, im]
            else:
                cur[0] += re
                cur[1] += im
    return {k: Coeff._fast(v[0], v[1]) for k, v in acc.items() if v[0] or v[1]}


def _add_into(acc: dict, terms: Terms, scale: Optional[Coeff] = None, K: Optional[int] = None) -> None:
    for k, c in terms.items():
        if K is not None and sum(k) > K:
            continue
        if scale is not None:
            c = c * scale
        cur = acc.get(k)
        acc[k] = c if cur is None else cur + c


def _prune(acc: dict) -> Terms:
    return {k: c for k, c in acc.items() if c}


def _truncate_terms(terms: Terms, K: int) -> Terms:
    return {k: c for k, c in terms.items() if sum(k) <= K}


def _order(terms: Terms) -> Optional[int]:
    return min((sum(k) for k in terms), default=None)


def _compose_terms(f: Terms, nvars: int, g: Sequence[Terms], arity: int, K: int, with_constants: bool) -> Terms:
    """Terms of f(g_0, ..., g_{nvars-1}) up to degree K (Horner by variable)."""
    if not f:
        return {}
    if nvars == 0:
        return {(0,) * arity: c for c in f.values()} if K >= 0 else {}
    orders = []
    for gi in g:
        o = _order(gi)
        if o is None:
            orders.append(None)
        else:
            orders.append(0 if with_constants else o)
    powers: list[list[Terms]] = [[{(0,) * arity: ONE}] for _ in range(nvars)]

    def power(var: int, e: int) -> Terms:
        pw = powers[var]
        while len(pw) <= e:
            pw.append(_mul_terms(pw[-1], g[var], K))
        return pw[e]

    def rec(items: list, var: int, k: int) -> Terms:
        # items: (key, coeff) with exponents before `var` already consumed
        if k < 0:
            return {}
        if var == nvars - 1:
            acc: dict = {}
            for key, c in items:
                e = key[var]
                if e == 0:
                    _add_into(acc, {(0,) * arity: c}, K=k)
                    continue
                o = orders[var]
                if o is None or o * e > k:
                    continue
                _add_into(acc, power(var, e), scale=c, K=k)
            return _prune(acc)
        groups: dict[int, list] = {}
        for key, c in items:
            groups.setdefault(key[var], []).append((key, c))
        acc = {}
        for e, sub in groups.items():
            if e == 0:
                _add_into(acc, rec(sub, var + 1, k))
                continue
            o = orders[var]
            if o is None or o * e > k:
                continue
            inner = rec(sub, var + 1, k - o * e)
            if inner:
                _add_into(acc, _mul_terms(power(var, e), inner, k))
        return _prune(acc)

    return rec(list(f.items()), 0, K)


# ---------------------------------------------------------------------------


class MultiSeries:
    """K-jet of a scalar germ in ``arity`` formal variables.

    >>> z = MultiSeries.variable(0, 1, 2)
    >>> (1 + z) * (1 - z)
    MultiSeries(arity=1, trunc=2, {(0,): 1, (2,): -1})
    """

    __slots__ = ("arity", "trunc", "_terms", "_hash")

    def __init__(self, arity: int, trunc: int, terms: Optional[Mapping[Key, Number]] = None):
        if arity < 0 or trunc < 0:
            raise StructuralError("arity and trunc must be non-negative")
        clean: Terms = {}
        for k, c in (terms or {}).items():
            k = tuple(int(e) for e in k)
            if len(k) != arity or any(e < 0 for e in k):
                raise StructuralError(f"bad multi-index {k} for arity {arity}")
            if sum(k) > trunc:
                continue
            c = Coeff.of(c)
            if c:
                clean[k] = clean[k] + c if k in clean else c
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "_terms", {k: c for k, c in clean.items() if c})
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, arity: int, trunc: int, terms: Terms) -> "MultiSeries":
        s = object.__new__(cls)
        object.__setattr__(s, "arity", arity)
        object.__setattr__(s, "trunc", trunc)
        object.__setattr__(s, "_terms", terms)
        object.__setattr__(s, "_hash", None)
        return s

    def __setattr__(self, name, value):
        raise AttributeError("MultiSeries is immutable")

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, arity: int, trunc: int) -> "MultiSeries":
        return cls._raw(arity, trunc, {})

    @classmethod
    def constant(cls, c: Number, arity: int, trunc: int) -> "MultiSeries":
        c = Coeff.of(c)
        return cls._raw(arity, trunc, {(0,) * arity: c} if c else {})

    @classmethod
    def variable(cls, i: int, arity: int, trunc: int) -> "MultiSeries":
        if not 0 <= i < arity:
            raise StructuralError(f"variable index {i} out of range for arity {arity}")
        if trunc < 1:
            return cls._raw(arity, trunc, {})
        key = tuple(1 if j == i else 0 for j in range(arity))
        return cls._raw(arity, trunc, {key: ONE})

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff: Number, trunc: int) -> "MultiSeries":
        return cls(len(exponents), trunc, {tuple(exponents): coeff})

    # access -----------------------------------------------------------------
    @property
    def terms(self) -> Mapping[Key, Coeff]:
        return MappingProxyType(self._terms)

    def coefficient(self, key: Sequence[int]) -> Coeff:
        return self._terms.get(tuple(key), ZERO)

    def constant_term(self) -> Coeff:
        return self._terms.get((0,) * self.arity, ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def order(self) -> Optional[int]:
        """Lowest total degree of a nonzero term, ``None`` for the zero jet."""
        return _order(self._terms)

    def degree(self) -> Optional[int]:
        return max((sum(k) for k in self._terms), default=None)

    def lowest_terms(self) -> Dict[Key, Coeff]:
        o = self.order()
        return {} if o is None else {k: c for k, c in self._terms.items() if sum(k) == o}

    def homogeneous(self, j: int) -> "MultiSeries":
        return MultiSeries._raw(self.arity, self.trunc, {k: c for k, c in self._terms.items() if sum(k) == j})

    def truncate(self, k: int) -> "MultiSeries":
        k = min(k, self.trunc)
        return MultiSeries._raw(self.arity, k, _truncate_terms(self._terms, k))

    def with_trunc(self, k: int) -> "MultiSeries":
        """Reinterpret at order ``k``; raising ``k`` asserts the jet is exact (a polynomial)."""
        return MultiSeries._raw(self.arity, k, _truncate_terms(self._terms, k))

    def sorted_terms(self) -> list[tuple[Key, Coeff]]:
        return sorted(self._terms.items(), key=lambda kv: (sum(kv[0]), tuple(-e for e in kv[0])))

    def __iter__(self) -> Iterator[tuple[Key, Coeff]]:
        return iter(self.sorted_terms())

    def __len__(self) -> int:
        return len(self._terms)

    # ring operations --------------------------------------------------------
    def _check(self, other: "MultiSeries") -> None:
        if self.arity != other.arity:
            raise StructuralError(f"arity mismatch: {self.arity} vs {other.arity}")
        if self.trunc != other.trunc:
            raise StructuralError(f"trunc mismatch: {self.trunc} vs {other.trunc}")

    def _lift(self, other) -> Optional["MultiSeries"]:
        if isinstance(other, MultiSeries):
            self._check(other)
            return other
        try:
            return MultiSeries.constant(other, self.arity, self.trunc)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        acc = dict(self._terms)
        _add_into(acc, o._terms)
        return MultiSeries._raw(self.arity, self.trunc, _prune(acc))

    __radd__ = __add__

    def __neg__(self):
        return MultiSeries._raw(self.arity, self.trunc, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, MultiSeries):
            self._check(other)
            return MultiSeries._raw(self.arity, self.trunc, _mul_terms(self._terms, other._terms, self.trunc))
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MultiSeries):
            return self * other.reciprocal()
        return self.scale(Coeff.of(other).inverse())

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        out = MultiSeries.constant(1, self.arity, self.trunc)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def scale(self, c: Number) -> "MultiSeries":
        c = Coeff.of(c)
        if not c:
            return MultiSeries.zero(self.arity, self.trunc)
        return MultiSeries._raw(self.arity, self.trunc, {k: v * c for k, v in self._terms.items()})

    def reciprocal(self) -> "MultiSeries":
        """Multiplicative inverse; needs a nonzero constant term."""
        c0 = self.constant_term()
        if not c0:
            raise DomainError("reciprocal of a series without constant term")
        inv0 = c0.inverse()
        nil = (self - c0).scale(inv0)  # 1/(c0 (1 + nil)) = inv0 * sum (-nil)^k
        out = MultiSeries.constant(1, self.arity, self.trunc)
        term = out
        for _ in range(self.trunc):
            term = -(term * nil)
            if term.is_zero():
                break
            out = out + term
        return out.scale(inv0)

    # bar, derivative --------------------------------------------------------
    def conjugate(self) -> "MultiSeries":
        """Conjugate every coefficient, keeping the formal variables."""
        return MultiSeries._raw(self.arity, self.trunc, {k: c.conjugate() for k, c in self._terms.items()})

    def diff(self, var: int) -> "MultiSeries":
        """Formal partial derivative; the truncation order drops by one."""
        if not 0 <= var < self.arity:
            raise StructuralError(f"variable index {var} out of range")
        if self.trunc == 0:
            raise TruncationExhausted("derivative of a 0-jet is undetermined")
        out: Terms = {}
        for k, c in self._terms.items():
            e = k[var]
            if e:
                nk = k[:var] + (e - 1,) + k[var + 1:]
                out[nk] = c * e
        return MultiSeries._raw(self.arity, self.trunc - 1, out)

    # substitution -------------------------------------------------------------
    def compose(self, g: Sequence["MultiSeries"]) -> "MultiSeries":
        """Germ composition ``f(g_1, ..., g_k)``; every ``g_i`` must vanish at 0."""
        g = list(g)
        _check_inner(self, g)
        for gi in g:
            if gi.constant_term():
                raise DomainError("compose needs inner series with zero constant term")
        K = min([self.trunc] + [gi.trunc for gi in g])
        arity = g[0].arity if g else 0
        terms = _compose_terms(self._terms, self.arity, [gi._terms for gi in g], arity, K, False)
        return MultiSeries._raw(arity, K, terms)

    def substitute(self, g: Sequence["MultiSeries"]) -> "MultiSeries":
        """Polynomial substitution ``f(g_1, ..., g_k)`` allowing constant terms.

        ``f`` is read as the exact polynomial given by its stored terms; the
        result is the true jet whenever that reading is correct.
        """
        g = list(g)
        _check_inner(self, g)
        if not any(gi.constant_term() for gi in g):
            return self.compose(g)
        K = min([self.trunc] + [gi.trunc for gi in g])
        arity = g[0].arity if g else 0
        terms = _compose_terms(self._terms, self.arity, [gi._terms for gi in g], arity, K, True)
        return MultiSeries._raw(arity, K, terms)

    def evaluate(self, point: Sequence[Number]) -> Coeff:
        """Value of the stored polynomial at an exact point."""
        if len(point) != self.arity:
            raise StructuralError("point has wrong dimension")
        pt = [Coeff.of(p) for p in point]
        cache: list[dict[int, Coeff]] = [{0: ONE, 1: p} for p in pt]

        def pw(i: int, e: int) -> Coeff:
            c = cache[i]
            if e not in c:
                c[e] = pt[i] ** e
            return c[e]

        total = ZERO
        for k, c in self._terms.items():
            v = c
            for i, e in enumerate(k):
                if e:
                    v = v * pw(i, e)
            total = total + v
        return total

    def shift(self, point: Sequence[Number]) -> "MultiSeries":
        """Re-expansion ``f(p + delta)`` in the delta variables (polynomial reading)."""
        if len(point) != self.arity:
            raise StructuralError("point has wrong dimension")
        g = [MultiSeries.variable(i, self.arity, self.trunc) + Coeff.of(p) for i, p in enumerate(point)]
        return self.substitute(g)

    def embed(self, arity: int, positions: Sequence[int]) -> "MultiSeries":
        """Rename variable ``i`` to ``positions[i]`` inside a larger variable set."""
        if len(positions) != self.arity:
            raise StructuralError("positions must list one slot per variable")
        out: Terms = {}
        for k, c in self._terms.items():
            nk = [0] * arity
            for e, p in zip(k, positions):
                nk[p] += e
            out[tuple(nk)] = c
        return MultiSeries._raw(arity, self.trunc, out)

    def set_zero(self, variables: Iterable[int]) -> "MultiSeries":
        """Restriction to ``x_v = 0`` for the listed variables (arity kept)."""
        vs = list(variables)
        return MultiSeries._raw(self.arity, self.trunc, {k: c for k, c in self._terms.items() if all(k[v] == 0 for v in vs)})

    def drop_variables(self, variables: Iterable[int]) -> "MultiSeries":
        """Restrict to ``x_v = 0`` and remove those variables from the arity."""
        vs = set(variables)
        keep = [i for i in range(self.arity) if i not in vs]
        out: Terms = {}
        for k, c in self._terms.items():
            if any(k[v] for v in vs):
                continue
            out[tuple(k[i] for i in keep)] = c
        return MultiSeries._raw(len(keep), self.trunc, out)

    # comparison, display ------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return self.arity == other.arity and self.trunc == other.trunc and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.arity, self.trunc, frozenset(self._terms.items()))))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{k}: {c}" for k, c in self.sorted_terms())
        return f"MultiSeries(arity={self.arity}, trunc={self.trunc}, {{{body}}})"

    def format(self, names: Optional[Sequence[str]] = None) -> str:
        if names is None:
            names = [f"x{i}" for i in range(self.arity)]
        if not self._terms:
            return "0"
        parts = []
        for k, c in self.sorted_terms():
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, k) if e)
            if not mono:
                parts.append(str(c))
            elif c == ONE:
                parts.append(mono)
            elif c == -ONE:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __str__(self):
        return self.format()


def _check_inner(f: MultiSeries, g: Sequence[MultiSeries]) -> None:
    if len(g) != f.arity:
        raise StructuralError(f"need {f.arity} inner series, got {len(g)}")
    if g:
        a = g[0].arity
        if any(gi.arity != a for gi in g):
            raise StructuralError("inner series must share arity")


# ---------------------------------------------------------------------------


class SeriesVec:
    """Ordered tuple of :class:`MultiSeries` sharing arity (a vector germ)."""

    __slots__ = ("comps",)

    def __init__(self, comps: Iterable[MultiSeries]):
        comps = tuple(comps)
        if comps:
            a = comps[0].arity
            if any(c.arity != a for c in comps):
                raise StructuralError("components must share arity")
        object.__setattr__(self, "comps", comps)

    def __setattr__(self, name, value):
        raise AttributeError("SeriesVec is immutable")

    @classmethod
    def identity(cls, k: int, trunc: int) -> "SeriesVec":
        return cls(MultiSeries.variable(i, k, trunc) for i in range(k))

    @classmethod
    def variables(cls, indices: Sequence[int], arity: int, trunc: int) -> "SeriesVec":
        return cls(MultiSeries.variable(i, arity, trunc) for i in indices)

    @property
    def arity(self) -> int:
        return self.comps[0].arity if self.comps else 0

    @property
    def trunc(self) -> int:
        return min((c.trunc for c in self.comps), default=0)

    def __len__(self):
        return len(self.comps)

    def __iter__(self):
        return iter(self.comps)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return SeriesVec(self.comps[i])
        return self.comps[i]

    def __add__(self, other: "SeriesVec") -> "SeriesVec":
        return SeriesVec(a + b for a, b in zip(self.comps, other.comps, strict=True))

    def __sub__(self, other: "SeriesVec") -> "SeriesVec":
        return SeriesVec(a - b for a, b in zip(self.comps, other.comps, strict=True))

    def __neg__(self):
        return SeriesVec(-a for a in self.comps)

    def scale(self, c: Number) -> "SeriesVec":
        return SeriesVec(a.scale(c) for a in self.comps)

    def __eq__(self, other):
        if not isinstance(other, SeriesVec):
            return NotImplemented
        return self.comps == other.comps

    def __hash__(self):
        return hash(self.comps)

    def __repr__(self):
        return f"SeriesVec({list(self.comps)!r})"

    def concat(self, other: Iterable[MultiSeries]) -> "SeriesVec":
        return SeriesVec(self.comps + tuple(other))

    def conjugate(self) -> "SeriesVec":
        return SeriesVec(c.conjugate() for c in self.comps)

    def compose(self, g: Sequence[MultiSeries]) -> "SeriesVec":
        return SeriesVec(c.compose(g) for c in self.comps)

    def substitute(self, g: Sequence[MultiSeries]) -> "SeriesVec":
        return SeriesVec(c.substitute(g) for c in self.comps)

    def truncate(self, k: int) -> "SeriesVec":
        return SeriesVec(c.truncate(k) for c in self.comps)

    def with_trunc(self, k: int) -> "SeriesVec":
        return SeriesVec(c.with_trunc(k) for c in self.comps)

    def embed(self, arity: int, positions: Sequence[int]) -> "SeriesVec":
        return SeriesVec(c.embed(arity, positions) for c in self.comps)

    def diff(self, var: int) -> "SeriesVec":
        return SeriesVec(c.diff(var) for c in self.comps)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def constant_terms(self) -> list[Coeff]:
        return [c.constant_term() for c in self.comps]

    def evaluate(self, point: Sequence[Number]) -> list[Coeff]:
        return [c.evaluate(point) for c in self.comps]

    def jacobian_at_zero(self, variables: Optional[Sequence[int]] = None) -> list[list[Coeff]]:
        """Rows: components; columns: the listed variables (default all)."""
        if variables is None:
            variables = range(self.arity)
        out = []
        for c in self.comps:
            row = []
            for v in variables:
                key = tuple(1 if j == v else 0 for j in range(c.arity))
                row.append(c.coefficient(key))
            out.append(row)
        return out

    def jacobian_at(self, point: Sequence[Number], variables: Optional[Sequence[int]] = None) -> list[list[Coeff]]:
        if variables is None:
            variables = range(self.arity)
        return [[c.diff(v).evaluate(point) for v in variables] for c in self.comps]

    def order(self) -> Optional[int]:
        orders = [o for o in (c.order() for c in self.comps) if o is not None]
        return min(orders, default=None)


# ---------------------------------------------------------------------------
# implicit functions and inverses


def _matvec_series(mat: Sequence[Sequence[Coeff]], vec: Sequence[MultiSeries]) -> list[MultiSeries]:
    out = []
    for row in mat:
        acc = MultiSeries.zero(vec[0].arity, vec[0].trunc)
        for a, s in zip(row, vec):
            if a:
                acc = acc + s.scale(a)
        out.append(acc)
    return out


def solve_ift(F: Sequence[MultiSeries], x_vars: Sequence[int], y_vars: Sequence[int]) -> SeriesVec:
    """Jet-level implicit function theorem.

    Solves ``F(x, y(x)) = 0`` for ``y`` with ``y(0) = 0``.  ``x_vars`` and
    ``y_vars`` partition the variables of ``F``; the result has arity
    ``len(x_vars)`` (in that order) and one component per ``y`` variable.
    Each homogeneous degree of ``y`` is fixed by the lower ones, so the loop
    runs once per degree up to ``F``'s truncation order.
    """
    F = list(F)
    if not F:
        return SeriesVec(())
    arity = F[0].arity
    x_vars, y_vars = list(x_vars), list(y_vars)
    if sorted(x_vars + y_vars) != list(range(arity)):
        raise StructuralError("x_vars and y_vars must partition the variables")
    if len(y_vars) != len(F):
        raise StructuralError("need as many equations as unknowns")
    if any(f.arity != arity for f in F):
        raise StructuralError("equations must share arity")
    if any(f.constant_term() for f in F):
        raise DomainError("F(0) must vanish")
    K = min(f.trunc for f in F)
    jac = SeriesVec(F).jacobian_at_zero(y_vars)
    try:
        binv = linalg.inverse(jac)
    except SingularJacobian:
        raise SingularJacobian("Jacobian block dF/dy at 0 is singular") from None
    nx = len(x_vars)
    y = [MultiSeries.zero(nx, K) for _ in y_vars]
    xs = {v: MultiSeries.variable(i, nx, K) for i, v in enumerate(x_vars)}
    for j in range(1, K + 1):
        inner = [None] * arity
        for v, s in xs.items():
            inner[v] = s.truncate(j)
        for b, v in enumerate(y_vars):
            inner[v] = y[b].truncate(j)
        resid = [f.truncate(j).compose(inner) for f in F]
        corr = _matvec_series(binv, resid)
        y = [(yb.truncate(j) - cb).with_trunc(K) for yb, cb in zip(y, corr)]
    return SeriesVec(y)


def invert_map(g: Sequence[MultiSeries]) -> SeriesVec:
    """Compositional inverse of a square map germ with invertible linear part."""
    g = list(g)
    k = len(g)
    if any(c.arity != k for c in g):
        raise StructuralError("invert_map needs a square map")
    if any(c.constant_term() for c in g):
        raise DomainError("invert_map needs g(0) = 0")
    # F(x, y) = g(y) - x in variables (x_0..x_{k-1}, y_0..y_{k-1})
    F = []
    for i, c in enumerate(g):
        gy = c.embed(2 * k, list(range(k, 2 * k)))
        F.append(gy - MultiSeries.variable(i, 2 * k, c.trunc))
    try:
        return solve_ift(F, list(range(k)), list(range(k, 2 * k)))
    except SingularJacobian:
        raise SingularJacobian("map has singular Jacobian at 0") from None


def shift_expansion(f: MultiSeries, point: Sequence[Number]) -> MultiSeries:
    """``f(p + delta)`` as a series in delta (``f`` read as a polynomial)."""
    return f.shift(point)


def series_matrix_det(mat: Sequence[Sequence[MultiSeries]]) -> MultiSeries:
    """Determinant of a small square matrix of series (Laplace expansion)."""
    n = len(mat)
    if n == 1:
        return mat[0][0]
    if n == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    total = None
    for j in range(n):
        if mat[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = mat[0][j] * series_matrix_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return MultiSeries.zero(mat[0][0].arity, mat[0][0].trunc)
    return total


def vars_vec(arity: int, trunc: int) -> list[MultiSeries]:
    return [MultiSeries.variable(i, arity, trunc) for i in range(arity)]
