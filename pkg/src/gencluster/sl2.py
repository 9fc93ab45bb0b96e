"""Epsilon-characters for sl2 at a root of unity.

``l`` is the order of eps^2.  The variables are ``Y0, Y2, ..., Y{2l-2}``; any
index is read modulo 2l.  A string ``(d, k)`` stands for the module
``L(Y_{2d} Y_{2d+2} ... Y_{2(d+k-1)})``; it is attached to the diagonal
``[2d-2, 2d+2k]`` of the 2l-gon.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .laurent import LaurentError, LaurentPoly, VarTable, grlex_key, is_dominant
from .typec import Orbit, crossing, cyclic_runs


class CharacterError(ValueError):
    pass


@lru_cache(maxsize=None)
def y_table(l: int) -> VarTable:
    if l < 2:
        raise CharacterError("l must be at least 2")
    return VarTable([f"Y{2 * i}" for i in range(l)])


def Y(l: int, index: int, power: int = 1) -> LaurentPoly:
    """``Y_index`` with the index reduced mod 2l (index must be even)."""
    if index % 2:
        raise CharacterError("sl2 variables carry even indices")
    return LaurentPoly.var(y_table(l), f"Y{index % (2 * l)}", power)


def y_monomial(l: int, exps) -> LaurentPoly:
    """Monomial from exponents indexed by i for ``Y_{2i}``."""
    return y_table(l).monomial({f"Y{2 * i}": e for i, e in enumerate(exps)})


@dataclass(frozen=True, order=True)
class KRString:
    d: int
    k: int

    def normalized(self, l: int) -> "KRString":
        return KRString(self.d % l, self.k)

    def orbit(self, l: int) -> Orbit | None:
        """Diagonal of the 2l-gon attached to the string."""
        if self.k == 0:
            return None
        return Orbit(l - 1, self.d, self.k)

    def monomial(self, l: int) -> LaurentPoly:
        out = y_table(l).one()
        for i in range(self.k):
            out = out * Y(l, 2 * (self.d + i))
        return out


def ladder_character(d: int, k: int, l: int) -> LaurentPoly:
    """The (k+1)-term ladder sum with indices read mod 2l, for any k."""
    if k < 0:
        raise CharacterError("string length must be nonnegative")
    total = y_table(l).zero()
    for j in range(k + 1):
        term = y_table(l).one()
        for i in range(k - j):
            term = term * Y(l, 2 * (d + i))
        for i in range(k - j + 1, k + 1):
            term = term * Y(l, 2 * (d + i), -1)
        total = total + term
    return total


@lru_cache(maxsize=None)
def kr_character(d: int, k: int, l: int) -> LaurentPoly:
    """Character of the simple string module ``(d, k)``; needs ``k < l``."""
    if k >= l:
        raise CharacterError(f"string length {k} must be below l={l}")
    return ladder_character(d % l, k, l)


def bold_Y(l: int) -> LaurentPoly:
    return y_monomial(l, [1] * l)


def z_character(l: int) -> LaurentPoly:
    return bold_Y(l) + bold_Y(l) ** -1


@lru_cache(maxsize=None)
def frobenius_character(a: int, l: int) -> LaurentPoly:
    if a < 0:
        raise CharacterError("Frobenius power must be nonnegative")
    b = bold_Y(l)
    total = y_table(l).zero()
    for j in range(a + 1):
        total = total + b ** (a - 2 * j)
    return total


# --------------------------------------------------------------------------
# simple labels


@dataclass(frozen=True)
class SimpleLabelA1:
    """Multiset of pairwise non-crossing strings plus a Frobenius power."""

    strings: tuple  # sorted tuple of (KRString, multiplicity)
    a: int = 0

    @classmethod
    def make(cls, strings, a: int = 0, l: int | None = None) -> "SimpleLabelA1":
        c: Counter = Counter()
        items = strings.items() if hasattr(strings, "items") else strings
        for s, m in items:
            if not isinstance(s, KRString):
                s = KRString(*s)
            if l is not None:
                s = s.normalized(l)
            if s.k and m:
                c[s] += m
        if a < 0 or any(m < 0 for m in c.values()):
            raise CharacterError("multiplicities must be nonnegative")
        return cls(tuple(sorted(c.items())), a)

    def check(self, l: int):
        for s, _ in self.strings:
            if not 0 < s.k < l:
                raise CharacterError(f"string length {s.k} out of range for l={l}")
        orbs = [s.orbit(l) for s, _ in self.strings]
        for i in range(len(orbs)):
            for j in range(i + 1, len(orbs)):
                if crossing(orbs[i], orbs[j]):
                    raise CharacterError(f"strings {self.strings[i][0]} and {self.strings[j][0]} cross")

    def highest_monomial(self, l: int) -> LaurentPoly:
        out = bold_Y(l) ** self.a
        for s, m in self.strings:
            out = out * s.monomial(l) ** m
        return out

    def shifted(self, l: int, by: int = 1) -> "SimpleLabelA1":
        return SimpleLabelA1.make({KRString(s.d + by, s.k): m for s, m in self.strings}, self.a, l)

    def to_json_obj(self, l: int) -> dict:
        return {
            "l": l,
            "strings": [{"d": s.d, "k": s.k, "mult": m} for s, m in self.strings],
            "frobenius": self.a,
        }

    def __str__(self) -> str:
        parts = [f"W({s.d},{s.k})" + (f"^{m}" if m > 1 else "") for s, m in self.strings]
        if self.a:
            parts.append("z" + (f"^{self.a}" if self.a > 1 else ""))
        return "*".join(parts) or "1"


def label_from_json_obj(obj: dict, l: int | None = None) -> tuple[SimpleLabelA1, int]:
    try:
        lv = int(obj.get("l", l))
        strings = {KRString(int(s["d"]), int(s["k"])): int(s.get("mult", 1)) for s in obj.get("strings", [])}
        a = int(obj.get("frobenius", 0))
    except (KeyError, TypeError, ValueError) as exc:
        raise CharacterError(f"malformed label: {exc}") from None
    lab = SimpleLabelA1.make(strings, a, lv)
    lab.check(lv)
    return lab, lv


def factor_dominant(m: LaurentPoly, l: int) -> SimpleLabelA1:
    """Label of the simple module with highest monomial ``m``."""
    if not m.is_monomial():
        raise CharacterError("expected a dominant monomial")
    (mono, _), = m.items()
    if not is_dominant(mono):
        raise CharacterError("expected a dominant monomial")
    exps = [0] * l
    for pos, e in mono:
        exps[pos] = e
    a, runs = cyclic_runs(exps)
    lab = SimpleLabelA1.make({KRString(j, c): k for (j, c), k in runs.items()}, a, l)
    lab.check(l)  # a crossing here would contradict the classification
    return lab


@lru_cache(maxsize=None)
def simple_character(lab: SimpleLabelA1, l: int) -> LaurentPoly:
    out = frobenius_character(lab.a, l)
    for s, m in lab.strings:
        out = out * kr_character(s.d, s.k, l) ** m
    return out


def leading_dominant(p: LaurentPoly):
    """Graded-lex largest dominant term of ``p`` (or ``None``)."""
    key = grlex_key(len(p.table))
    best = None
    for mono, c in p.items():
        if is_dominant(mono) and (best is None or key(mono) > key(best[0])):
            best = (mono, c)
    return best


def dominant_part(p: LaurentPoly) -> dict:
    return {mono: c for mono, c in p.items() if is_dominant(mono)}


def peel(chi: LaurentPoly, classify, character) -> Counter:
    """Write ``chi`` as a nonnegative combination of simple characters.

    ``classify`` maps a dominant monomial to a label; ``character`` maps a
    label to its character.  Every A^{-1} step lowers the total degree, so the
    graded-lex largest dominant monomial is always a highest weight.  Only the
    dominant terms steer the loop, so only they are tracked; the full sum is
    compared with ``chi`` once at the end.
    """
    key = grlex_key(len(chi.table))
    out: Counter = Counter()
    rest = dominant_part(chi)
    dom_cache: dict = {}
    while rest:
        mono = max(rest, key=key)
        c = rest[mono]
        if c <= 0:
            raise CharacterError("negative multiplicity while peeling")
        lab = classify(LaurentPoly(chi.table, {mono: 1}))
        out[lab] += c
        if lab not in dom_cache:
            dom_cache[lab] = dominant_part(character(lab))
        for m, v in dom_cache[lab].items():
            w = rest.get(m, 0) - c * v
            if w:
                rest[m] = w
            else:
                rest.pop(m, None)
    total = chi.table.zero()
    for lab, c in out.items():
        total = total + character(lab) * c
    if total != chi:
        raise CharacterError("remainder has no dominant monomial")
    return out


def decompose(labels, l: int) -> Counter:
    """Multiplicities of simple classes in a tensor product of simples."""
    chi = y_table(l).one()
    for lab in labels:
        lab.check(l)
        chi = chi * simple_character(lab, l)
    return peel(chi, lambda m: factor_dominant(m, l), lambda lab: simple_character(lab, l))


def shift_poly(p: LaurentPoly, l: int, by: int = 1) -> LaurentPoly:
    """Rotate indices: ``Y_n -> Y_{n+2*by}``."""
    table = y_table(l)
    terms = {}
    for mono, c in p.items():
        new = tuple(sorted(((pos + by) % l, e) for pos, e in mono))
        terms[new] = c
    return LaurentPoly(table, terms)


def labels_from_file(path) -> tuple[list[SimpleLabelA1], int]:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CharacterError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    items = data if isinstance(data, list) else data.get("labels", [data])
    labels = []
    l = data.get("l") if isinstance(data, dict) else None
    for obj in items:
        lab, lv = label_from_json_obj(obj, l)
        if l is not None and lv != l:
            raise CharacterError("all labels must share the same l")
        l = lv
        labels.append(lab)
    if l is None:
        raise CharacterError("labels file does not specify l")
    return labels, int(l)


__all__ = [
    "CharacterError",
    "KRString",
    "SimpleLabelA1",
    "Y",
    "decompose",
    "factor_dominant",
    "frobenius_character",
    "kr_character",
    "ladder_character",
    "LaurentError",
    "simple_character",
    "z_character",
]
