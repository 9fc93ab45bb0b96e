"""Sparse multivariate Laurent polynomials with integer coefficients.

A :class:`LaurentPoly` is a map from monomials to nonzero Python ints over a
shared :class:`VarTable`.  Monomials are tuples of ``(position, exponent)``
pairs sorted by position with zero exponents omitted, so two polynomials over
the same table are equal exactly when their term maps are equal.

Values are immutable; every operation returns a new polynomial.
"""

from __future__ import annotations

import heapq
import json
from operator import add, sub
from typing import Callable, Iterable, Iterator, Mapping

Mono = tuple  # tuple[tuple[int, int], ...]

ONE: Mono = ()


class LaurentError(ValueError):
    """Raised on incompatible tables, inexact division and bad substitutions."""


class VarTable:
    """Ordered list of distinct variable names."""

    __slots__ = ("names", "index", "_hash")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        index = {name: i for i, name in enumerate(names)}
        if len(index) != len(names):
            raise LaurentError(f"duplicate variable names in {names!r}")
        self.names = names
        self.index = index
        self._hash = hash(names)

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name) -> bool:
        return name in self.index

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return isinstance(other, VarTable) and self.names == other.names

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"VarTable({list(self.names)!r})"

    def var(self, name: str) -> "LaurentPoly":
        return LaurentPoly.var(self, name)

    def gens(self) -> tuple["LaurentPoly", ...]:
        return tuple(LaurentPoly.var(self, name) for name in self.names)

    def zero(self) -> "LaurentPoly":
        return LaurentPoly(self, {})

    def one(self) -> "LaurentPoly":
        return LaurentPoly(self, {ONE: 1})

    def const(self, c: int) -> "LaurentPoly":
        return LaurentPoly.const(self, c)

    def monomial(self, exps: Mapping[str, int], coef: int = 1) -> "LaurentPoly":
        return LaurentPoly(self, {mono_from_exps(self, exps): coef}) if coef else self.zero()


# --------------------------------------------------------------------------
# monomial helpers


def mono_from_exps(table: VarTable, exps: Mapping[str, int]) -> Mono:
    return tuple(sorted((table.index[name], e) for name, e in exps.items() if e))


def mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for i, e in b:
        s = d.get(i, 0) + e
        if s:
            d[i] = s
        else:
            del d[i]
    return tuple(sorted(d.items()))


def mono_inv(a: Mono) -> Mono:
    return tuple((i, -e) for i, e in a)


def mono_pow(a: Mono, k: int) -> Mono:
    if k == 0:
        return ONE
    return tuple((i, e * k) for i, e in a)


def mono_degree(a: Mono) -> int:
    return sum(e for _, e in a)


def mono_dense(a: Mono, nvars: int) -> tuple[int, ...]:
    v = [0] * nvars
    for i, e in a:
        v[i] = e
    return tuple(v)


def grlex_key(nvars: int) -> Callable[[Mono], tuple]:
    """Graded lexicographic key: total degree first, then dense exponents."""

    def key(a: Mono):
        return (mono_degree(a), mono_dense(a, nvars))

    return key


def is_dominant(a: Mono) -> bool:
    return all(e > 0 for _, e in a)


# --------------------------------------------------------------------------


class LaurentPoly:
    """Immutable Laurent polynomial over the integers."""

    __slots__ = ("table", "_terms", "_hash")

    def __init__(self, table: VarTable, terms: dict):
        # trusted constructor: terms must already be canonical
        self.table = table
        self._terms = terms
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_terms(cls, table: VarTable, terms: Iterable[tuple[Mono, int]]) -> "LaurentPoly":
        acc: dict = {}
        for m, c in terms:
            m = tuple(sorted((i, e) for i, e in m if e))
            acc[m] = acc.get(m, 0) + int(c)
        return cls(table, {m: c for m, c in acc.items() if c})

    @classmethod
    def from_dict(cls, table: VarTable, data: Mapping) -> "LaurentPoly":
        """Build from ``{exps: coef}`` where ``exps`` is a name->exponent
        mapping given as a tuple of pairs (or a frozenset)."""
        return cls.from_terms(table, ((mono_from_exps(table, dict(k)), c) for k, c in data.items()))

    @classmethod
    def const(cls, table: VarTable, c: int) -> "LaurentPoly":
        return cls(table, {ONE: int(c)} if c else {})

    @classmethod
    def var(cls, table: VarTable, name: str, power: int = 1) -> "LaurentPoly":
        if name not in table.index:
            raise LaurentError(f"unknown variable {name!r}")
        return cls(table, {((table.index[name], power),) if power else ONE: 1})

    # -- basic protocol ---------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE in self._terms)

    def constant_term(self) -> int:
        return self._terms.get(ONE, 0)

    def coefficient(self, mono: Mono) -> int:
        return self._terms.get(mono, 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self._terms == ({ONE: other} if other else {})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.table == other.table and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.table, frozenset(self._terms.items())))
        return self._hash

    def _check(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly.const(self.table, other)
        if not isinstance(other, LaurentPoly):
            raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")
        if other.table != self.table:
            raise LaurentError("incompatible variable tables")
        return other

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> "LaurentPoly":
        other = self._check(other)
        acc = dict(self._terms)
        for m, c in other._terms.items():
            s = acc.get(m, 0) + c
            if s:
                acc[m] = s
            else:
                del acc[m]
        return LaurentPoly(self.table, acc)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.table, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._check(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._check(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            if not other:
                return LaurentPoly(self.table, {})
            return LaurentPoly(self.table, {m: c * other for m, c in self._terms.items()})
        other = self._check(other)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        acc: dict = {}
        if not b:
            return LaurentPoly(self.table, acc)
        if len(b) == 1:
            (mb, cb), = b.items()
            for ma, ca in a.items():
                acc[mono_mul(ma, mb)] = ca * cb
            return LaurentPoly(self.table, acc)
        # pack exponent vectors into ints so the inner loop adds integers
        used = sorted({i for m in a for i, _ in m} | {i for m in b for i, _ in m})
        da = [dict(m) for m in a]
        db = [dict(m) for m in b]
        lo_a = [min(d.get(i, 0) for d in da) for i in used]
        lo_b = [min(d.get(i, 0) for d in db) for i in used]
        hi = [max(d.get(i, 0) for d in da) + max(d.get(i, 0) for d in db) for i in used]
        lows = [x + y for x, y in zip(lo_a, lo_b)]
        shifts = _field_shifts([h - l for h, l in zip(hi, lows)])
        pa = [(_pack(d, used, lo_a, shifts), c) for d, c in zip(da, a.values())]
        get = acc.get
        for d, cb in zip(db, b.values()):
            kb = _pack(d, used, lo_b, shifts)
            for ka, ca in pa:
                k = ka + kb
                acc[k] = get(k, 0) + ca * cb
        return LaurentPoly(
            self.table,
            {_unpack(k, used, lows, shifts): c for k, c in acc.items() if c},
        )

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if not self.is_monomial():
                raise LaurentError("negative power of a non-monomial")
            (m, c), = self._terms.items()
            if c not in (1, -1):
                raise LaurentError("negative power of a non-unit coefficient")
            return LaurentPoly(self.table, {mono_pow(m, k): c ** (-k)})
        result = LaurentPoly.const(self.table, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_mono(self, mono: Mono, coef: int = 1) -> "LaurentPoly":
        return LaurentPoly(self.table, {mono_mul(m, mono): c * coef for m, c in self._terms.items()})

    # -- orders and inspection -------------------------------------------

    def degree(self) -> int:
        """Maximal total degree of a term."""
        if not self._terms:
            raise LaurentError("zero polynomial")
        return max(mono_degree(m) for m in self._terms)

    def sorted_terms(self, order: Callable[[Mono], tuple] | None = None, reverse: bool = True):
        key = order or grlex_key(len(self.table))
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=reverse)

    def exps(self, mono: Mono) -> dict[str, int]:
        return {self.table.names[i]: e for i, e in mono}

    def variables(self) -> set[str]:
        return {self.table.names[i] for m in self._terms for i, _ in m}

    def map_coefficients(self, f: Callable[[int], int]) -> "LaurentPoly":
        return LaurentPoly.from_terms(self.table, ((m, f(c)) for m, c in self._terms.items()))

    # -- printing / serialization ----------------------------------------

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        names = self.table.names
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for i, e in m:
                factors.append(names[i] if e == 1 else f"{names[i]}^{e}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def to_json_obj(self) -> dict:
        return {
            "vars": list(self.table.names),
            "terms": [{"exps": self.exps(m), "coef": str(c)} for m, c in self.sorted_terms()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=False)

    @classmethod
    def from_json_obj(cls, obj: Mapping, table: VarTable | None = None) -> "LaurentPoly":
        table = table or VarTable(obj["vars"])
        if list(table.names) != list(obj["vars"]):
            raise LaurentError("incompatible variable tables")
        return cls.from_terms(
            table, ((mono_from_exps(table, t["exps"]), int(t["coef"])) for t in obj["terms"])
        )

    @classmethod
    def from_json(cls, text: str) -> "LaurentPoly":
        return cls.from_json_obj(json.loads(text))


# --------------------------------------------------------------------------
# operations


def arith(op: str, p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


def leading_monomial(p: LaurentPoly, order: Callable[[Mono], tuple] | None = None) -> tuple[Mono, int]:
    """Maximal term of ``p`` under ``order`` (graded lex by default)."""
    if p.is_zero():
        raise LaurentError("zero polynomial")
    key = order or grlex_key(len(p.table))
    m = max(p._terms, key=key)
    return m, p._terms[m]


def _shift_to_polynomial(p: LaurentPoly) -> tuple[LaurentPoly, Mono]:
    """Return ``(P, s)`` with ``P = p * x^s`` a polynomial and ``s`` minimal."""
    dense = [dict(m) for m in p._terms]
    allvars = {i for m in p._terms for i, _ in m}
    mins = {i: min(d.get(i, 0) for d in dense) for i in allvars}
    shift = tuple(sorted((i, -e) for i, e in mins.items() if e))
    return p.mul_mono(shift), shift


def _field_layout(spans: list[int]) -> list[tuple[int, int]]:
    """(shift, width) per field, first field most significant; each field
    gets one spare bit above its span to act as a guard."""
    out = []
    shift = 0
    for span in reversed(spans):
        w = max(span, 0).bit_length() + 1
        out.append((shift, w))
        shift += w
    return out[::-1]


def _field_shifts(spans: list[int]) -> list[int]:
    return [sh for sh, _ in _field_layout(spans)]


def _pack(d: Mapping[int, int], fields, lows, shifts) -> int:
    k = 0
    for i, lo, sh in zip(fields, lows, shifts):
        k |= (d.get(i, 0) - lo) << sh
    return k


def _unpack(k: int, fields, lows, shifts) -> Mono:
    out = []
    upper = None
    for i, lo, sh in zip(fields, lows, shifts):
        v = k >> sh
        if upper is not None:
            v &= (1 << (upper - sh)) - 1
        upper = sh
        if v + lo:
            out.append((i, v + lo))
    return tuple(out)


def divide_exact(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Return ``r`` with ``r * q == p``; raise if ``p/q`` is not Laurent."""
    q = p._check(q)
    if q.is_zero():
        raise LaurentError("division by zero polynomial")
    if p.is_zero():
        return p
    if q.is_monomial():
        (m, c), = q._terms.items()
        inv = mono_inv(m)
        out = {}
        for mp, cp in p._terms.items():
            if cp % c:
                raise LaurentError("not Laurent-divisible")
            out[mono_mul(mp, inv)] = cp // c
        return LaurentPoly(p.table, out)
    # A Laurent quotient exists iff the shifted polynomial P is divisible by the
    # shifted Q in Z[x]; Q has no monomial factor so no extra shift can help.
    P, sp = _shift_to_polynomial(p)
    Q, sq = _shift_to_polynomial(q)
    used = sorted({i for m in P._terms for i, _ in m} | {i for m in Q._terms for i, _ in m})
    dp = [dict(m) for m in P._terms]
    dq = [dict(m) for m in Q._terms]
    top_p = [max(d.get(i, 0) for d in dp) for i in used]
    top_q = [max(d.get(i, 0) for d in dq) for i in used]
    if any(x < y for x, y in zip(top_p, top_q)):
        raise LaurentError("not Laurent-divisible")
    # fields: total degree on top, then variables in index order, so integer
    # comparison of packed keys is the graded lex order
    zeros = [0] * (len(used) + 1)
    shifts = _field_shifts([sum(top_p)] + top_p)
    guard = sum(1 << (sh + w - 1) for sh, w in _field_layout([sum(top_p)] + top_p))

    def pack(d):
        return _pack({0: sum(d.values()), **{j + 1: d.get(i, 0) for j, i in enumerate(used)}},
                     range(len(used) + 1), zeros, shifts)

    box = [sum(top_p) - sum(top_q)] + [x - y for x, y in zip(top_p, top_q)]
    limit = _pack(dict(enumerate(box)), range(len(box)), zeros, shifts)
    kq = sorted(((pack(d), c) for d, c in zip(dq, Q._terms.values())), reverse=True)
    lq, cq = kq[0]
    rest_q = kq[1:]
    rem = {pack(d): c for d, c in zip(dp, P._terms.values())}
    heap = [-k for k in rem]
    heapq.heapify(heap)
    queued = set(rem)
    quot: dict = {}
    while heap:
        lr = -heapq.heappop(heap)
        queued.discard(lr)
        cr = rem.pop(lr, 0)
        if not cr:
            continue
        # guard bits detect a borrow: lq must divide lr, and the quotient
        # term must fit the degree box an exact quotient would have
        if cr % cq or ((lr | guard) - lq) & guard != guard:
            raise LaurentError("not Laurent-divisible")
        tm = lr - lq
        if ((limit | guard) - tm) & guard != guard:
            raise LaurentError("not Laurent-divisible")
        tc = cr // cq
        quot[tm] = tc
        for m, c in rest_q:
            mm = m + tm
            v = rem.get(mm, 0) - c * tc
            if v:
                rem[mm] = v
                if mm not in queued:
                    queued.add(mm)
                    heapq.heappush(heap, -mm)
            else:
                rem.pop(mm, None)
    idx = [None] + used
    quot = {
        tuple((idx[j], e) for j, e in _unpack(k, range(len(idx)), zeros, shifts) if j): c
        for k, c in quot.items()
    }
    r = LaurentPoly(p.table, quot).mul_mono(mono_mul(sq, mono_inv(sp)))
    if r * q != p:  # multiply-back check
        raise LaurentError("not Laurent-divisible")
    return r


def substitute(p: LaurentPoly, bindings: Mapping[str, LaurentPoly], table: VarTable | None = None) -> LaurentPoly:
    """Replace variables of ``p`` by Laurent polynomials and expand.

    ``table`` is the target table; it defaults to the common table of the
    bindings (or ``p.table`` when nothing is bound).  Unbound variables of
    ``p`` are carried over by name.  Negative powers of non-monomial bindings
    are cleared by a common denominator followed by exact division.
    """
    if table is None:
        tables = {b.table for b in bindings.values()}
        if len(tables) > 1:
            raise LaurentError("incompatible variable tables")
        table = tables.pop() if tables else p.table
    for name, b in bindings.items():
        if b.table != table:
            raise LaurentError("incompatible variable tables")
    names = p.table.names
    images: list[LaurentPoly | None] = []
    for name in names:
        if name in bindings:
            images.append(bindings[name])
        elif name in table.index:
            images.append(LaurentPoly.var(table, name))
        else:
            images.append(None)

    # largest negative exponent per position for non-monomial images
    need: dict[int, int] = {}
    for m in p._terms:
        for i, e in m:
            if images[i] is None:
                raise LaurentError(f"variable {names[i]!r} has no image in the target table")
            if e < 0 and not images[i].is_monomial():
                need[i] = max(need.get(i, 0), -e)

    powers: dict[tuple[int, int], LaurentPoly] = {}

    def power(i: int, e: int) -> LaurentPoly:
        key = (i, e)
        if key not in powers:
            if e == 0:
                powers[key] = LaurentPoly.const(table, 1)
            elif e == 1:
                powers[key] = images[i]
            elif e > 1 and (i, e - 1) in powers:
                powers[key] = powers[(i, e - 1)] * images[i]
            else:
                powers[key] = images[i] ** e
        return powers[key]

    acc = LaurentPoly(table, {})
    for m, c in p._terms.items():
        term = LaurentPoly.const(table, c)
        exps = dict(need)
        for i, e in m:
            exps[i] = exps.get(i, 0) + e
        for i, e in exps.items():
            term = term * power(i, e)
        acc = acc + term
    if not need:
        return acc
    denom = LaurentPoly.const(table, 1)
    for i, e in need.items():
        denom = denom * power(i, e)
    try:
        return divide_exact(acc, denom)
    except LaurentError as exc:
        raise LaurentError("non-Laurent substitution") from exc


def rename(p: LaurentPoly, table: VarTable, mapping: Mapping[str, str] | None = None) -> LaurentPoly:
    """Re-embed ``p`` into ``table`` (optionally renaming variables)."""
    mapping = mapping or {}
    idx = []
    for name in p.table.names:
        target = mapping.get(name, name)
        idx.append(table.index.get(target))
    terms = []
    for m, c in p._terms.items():
        new = []
        for i, e in m:
            if idx[i] is None:
                raise LaurentError(f"variable {p.table.names[i]!r} missing from target table")
            new.append((idx[i], e))
        terms.append((tuple(new), c))
    return LaurentPoly.from_terms(table, terms)
