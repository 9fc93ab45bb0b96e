"""sl3 at l = 2: epsilon-characters, labels, the G2 seed and the rank 2l-2 seeds.

Variables are ``Y1_0, Y1_2, Y2_1, Y2_3`` (second index mod 4).  Two
symmetries act on the character ring: the rotation ``n -> n+2`` and the
diagram map exchanging the two nodes (``Y1_0 -> Y2_1 -> Y1_2 -> Y2_3 -> Y1_0``).
Only five characters are entered by hand; the rest are images under these maps.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .laurent import LaurentPoly, VarTable, is_dominant, rename, substitute
from .seeds import ExchangeMatrix, GenSeed, SeedError, validate
from .sl2 import CharacterError, leading_dominant, peel

NAMES = ("Y1_0", "Y1_2", "Y2_1", "Y2_3")
TABLE = VarTable(NAMES)
ROTATION = {"Y1_0": "Y1_2", "Y1_2": "Y1_0", "Y2_1": "Y2_3", "Y2_3": "Y2_1"}
DIAGRAM = {"Y1_0": "Y2_1", "Y1_2": "Y2_3", "Y2_1": "Y1_2", "Y2_3": "Y1_0"}
LAMBDAS = ("lam1", "lam2")


def ym(**exps) -> LaurentPoly:
    return TABLE.monomial(exps)


def apply_map(p: LaurentPoly, mapping: dict) -> LaurentPoly:
    return rename(p, TABLE, mapping)


def _printed() -> dict[str, LaurentPoly]:
    m = ym
    return {
        "Y1_0": m(Y1_0=1) + m(Y2_1=1, Y1_2=-1) + m(Y2_3=-1),
        "Y1_0*Y2_1": (
            m(Y1_0=1, Y2_1=1)
            + m(Y1_0=1, Y1_2=1, Y2_3=-1)
            + m(Y2_1=2, Y1_2=-1)
            + 2 * m(Y2_1=1, Y2_3=-1)
            + m(Y2_1=1, Y1_0=-1, Y1_2=-1)
            + m(Y1_2=1, Y2_3=-2)
            + m(Y1_0=-1, Y2_3=-1)
        ),
        "Y2_1": m(Y2_1=1) + m(Y1_2=1, Y2_3=-1) + m(Y1_0=-1),
        "bold1": m(Y1_0=1, Y1_2=1) + m(Y2_1=1, Y2_3=1, Y1_0=-1, Y1_2=-1) + m(Y2_1=-1, Y2_3=-1),
        "bold2": m(Y2_1=1, Y2_3=1) + m(Y1_0=1, Y1_2=1, Y2_1=-1, Y2_3=-1) + m(Y1_0=-1, Y1_2=-1),
    }


@lru_cache(maxsize=None)
def fundamental_characters_l2() -> dict[str, LaurentPoly]:
    """Characters of the fundamental-type simples, keyed by highest monomial.

    Keys: ``Y1_0``, ``Y1_2``, ``Y2_1``, ``Y2_3``, the four two-factor products
    ``Y1_i*Y2_j``, and ``bold1``/``bold2`` for the Frobenius fundamentals.
    """
    p = _printed()
    chars = dict(p)
    chars["Y1_2"] = apply_map(p["Y1_0"], ROTATION)
    chars["Y2_3"] = apply_map(p["Y2_1"], ROTATION)
    chars["Y1_2*Y2_3"] = apply_map(p["Y1_0*Y2_1"], ROTATION)
    chars["Y1_2*Y2_1"] = apply_map(p["Y1_0*Y2_1"], DIAGRAM)
    chars["Y1_0*Y2_3"] = apply_map(chars["Y1_2*Y2_1"], ROTATION)
    for key, chi in chars.items():
        top = highest_dominant(chi)
        if top != key_monomial(key):
            raise CharacterError(f"generated character {key} has the wrong highest monomial")
    return chars


def key_monomial(key: str) -> LaurentPoly:
    if key == "bold1":
        return ym(Y1_0=1, Y1_2=1)
    if key == "bold2":
        return ym(Y2_1=1, Y2_3=1)
    return TABLE.monomial({name: 1 for name in key.split("*")})


def highest_dominant(chi: LaurentPoly) -> LaurentPoly:
    mono, _ = leading_dominant(chi)
    return LaurentPoly(TABLE, {mono: 1})


def chi(key: str) -> LaurentPoly:
    return fundamental_characters_l2()[key]


# --------------------------------------------------------------------------
# classical sl3 characters


def gt_patterns(a1: int, a2: int):
    """Gelfand-Tsetlin patterns for the highest weight (a1+a2, a2, 0)."""
    l1, l2, l3 = a1 + a2, a2, 0
    for m1 in range(l2, l1 + 1):
        for m2 in range(l3, l2 + 1):
            for nu in range(m2, m1 + 1):
                yield (l1, l2, l3), (m1, m2), nu


@lru_cache(maxsize=None)
def _classical_table() -> VarTable:
    return VarTable(["y1", "y2"])


def sl3_character(a1: int, a2: int) -> LaurentPoly:
    """Character of V(a1 w1 + a2 w2) in fundamental-weight coordinates."""
    if a1 < 0 or a2 < 0:
        raise CharacterError("weights must be nonnegative")
    table = _classical_table()
    terms: Counter = Counter()
    for lam, (m1, m2), nu in gt_patterns(a1, a2):
        c = (nu, m1 + m2 - nu, sum(lam) - m1 - m2)
        terms[(c[0] - c[1], c[1] - c[2])] += 1
    out = table.zero()
    for (u, v), k in terms.items():
        out = out + table.monomial({"y1": u, "y2": v}, k)
    return out


@lru_cache(maxsize=None)
def pieri_polynomial(k: int, ell: int) -> LaurentPoly:
    """``S_{k,l}(X1, X2)``: class of V(k w1 + l w2) in the fundamentals."""
    table = VarTable(["X1", "X2"])
    X1, X2 = table.gens()
    if k < 0 or ell < 0:
        return table.zero()
    if k == 0 and ell == 0:
        return table.one()
    if k > 0:
        # V(w1) x V((k-1)w1 + l w2) = V(k w1 + l w2) + V((k-2) w1 + (l+1) w2) + V((k-1) w1 + (l-1) w2)
        return X1 * pieri_polynomial(k - 1, ell) - pieri_polynomial(k - 2, ell + 1) - pieri_polynomial(k - 1, ell - 1)
    # V(w2) x V((l-1) w2) = V(l w2) + V(w1 + (l-2) w2)
    return X2 * pieri_polynomial(0, ell - 1) - pieri_polynomial(1, ell - 2)


def frobenius_character_sl3(k: int, ell: int) -> LaurentPoly:
    return _frob(k, ell)


@lru_cache(maxsize=None)
def _frob(k: int, ell: int) -> LaurentPoly:
    ch = sl3_character(k, ell)
    return substitute(ch, {"y1": ym(Y1_0=1, Y1_2=1), "y2": ym(Y2_1=1, Y2_3=1)}, TABLE)


# --------------------------------------------------------------------------
# simple labels at l = 2

CASES = {
    "i": ("Y1_0", "Y1_0*Y2_1"),
    "ii": ("Y2_1", "Y1_0*Y2_1"),
    "iii": ("Y1_0", "Y1_0*Y2_3"),
    "iv": ("Y2_3", "Y1_0*Y2_3"),
    "v": ("Y1_2", "Y1_2*Y2_1"),
    "vi": ("Y2_1", "Y1_2*Y2_1"),
    "vii": ("Y1_2", "Y1_2*Y2_3"),
    "viii": ("Y2_3", "Y1_2*Y2_3"),
}
CASE_ORDER = tuple(CASES)


@dataclass(frozen=True, order=True)
class SimpleLabelA2L2:
    case: str
    a: int = 0
    b: int = 0
    k: int = 0
    ell: int = 0

    def __post_init__(self):
        if self.case not in CASES:
            raise CharacterError(f"unknown case {self.case!r}")
        if min(self.a, self.b, self.k, self.ell) < 0:
            raise CharacterError("label entries must be nonnegative")

    def highest_monomial(self) -> LaurentPoly:
        single, pair = CASES[self.case]
        return (
            key_monomial(single) ** self.a
            * key_monomial(pair) ** self.b
            * ym(Y1_0=self.k, Y1_2=self.k, Y2_1=self.ell, Y2_3=self.ell)
        )

    def canonical(self) -> "SimpleLabelA2L2":
        return classify_dominant(self.highest_monomial())

    def __str__(self) -> str:
        single, pair = CASES[self.case]
        parts = []
        if self.a:
            parts.append(f"L({single})" + (f"^{self.a}" if self.a > 1 else ""))
        if self.b:
            parts.append(f"L({pair})" + (f"^{self.b}" if self.b > 1 else ""))
        if self.k or self.ell:
            parts.append(f"F({self.k},{self.ell})")
        if not parts:
            return "1"
        return f"({self.case}) " + "*".join(parts)


def classify_dominant(m: LaurentPoly) -> SimpleLabelA2L2:
    """Canonical label of the simple module with highest monomial ``m``."""
    if not m.is_monomial():
        raise CharacterError("expected a monomial")
    (mono, _), = m.items()
    if not is_dominant(mono):
        raise CharacterError("expected a dominant monomial")
    e = m.exps(mono)
    a10, a12, a21, a23 = (e.get(n, 0) for n in NAMES)
    k, ell = min(a10, a12), min(a21, a23)
    a10, a12, a21, a23 = a10 - k, a12 - k, a21 - ell, a23 - ell
    i = 2 if a12 else 0
    j = 3 if a23 else 1
    p, q = a10 + a12, a21 + a23
    pair = f"Y1_{i}*Y2_{j}"
    single = f"Y1_{i}" if p >= q else f"Y2_{j}"
    case = next(c for c in CASE_ORDER if CASES[c] == (single, pair))
    lab = SimpleLabelA2L2(case, abs(p - q), min(p, q), k, ell)
    if lab.highest_monomial() != m:
        raise CharacterError("acyclic part matches none of the eight cases")
    return lab


@lru_cache(maxsize=None)
def simple_character_l2(lab: SimpleLabelA2L2) -> LaurentPoly:
    single, pair = CASES[lab.case]
    return _chi_power(single, lab.a) * _chi_power(pair, lab.b) * frobenius_character_sl3(lab.k, lab.ell)


@lru_cache(maxsize=None)
def _chi_power(key: str, n: int) -> LaurentPoly:
    if n == 0:
        return TABLE.one()
    return _chi_power(key, n - 1) * chi(key)


def decompose_l2(labels) -> Counter:
    prod = TABLE.one()
    for lab in labels:
        prod = prod * simple_character_l2(lab)
    return peel(prod, classify_dominant, simple_character_l2)


def label_from_json_obj(obj: dict) -> SimpleLabelA2L2:
    try:
        lab = SimpleLabelA2L2(
            str(obj["case"]), int(obj.get("a", 0)), int(obj.get("b", 0)), int(obj.get("k", 0)), int(obj.get("ell", 0))
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CharacterError(f"malformed label: {exc}") from None
    return lab


# --------------------------------------------------------------------------
# seeds


def _cubic_coeffs():
    # theta(u, v) = u^3 + lam1 u^2 v + lam2 u v^2 + v^3; entry r multiplies u^r v^(3-r)
    return [[0, 0], [0, 1], [1, 0], [0, 0]]


def g2_initial_seed() -> GenSeed:
    B = [[0, 3], [-1, 0]]
    return GenSeed.initial(B, [1, 3], [[[0, 0], [0, 0]], _cubic_coeffs()], ["x1", "x2"], LAMBDAS)


def conjecture_matrix(l: int) -> list[list[int]]:
    """Banded rank 2l-2 matrix with the cubic tail in the last three rows."""
    if l < 2:
        raise SeedError("l must be at least 2")
    N = 2 * l - 2
    b = [[0] * N for _ in range(N)]

    def put(i, j, v):  # 1-based
        if 1 <= i <= N and 1 <= j <= N:
            b[i - 1][j - 1] = v

    for i in range(1, N + 1):
        for off, v in ((-2, -1), (-1, 1), (1, -1), (2, 1)):
            put(i, i + off, v)
    for i, j, v in (
        (N - 2, N - 1, -2),
        (N - 2, N, 3),
        (N - 1, N - 2, 2),
        (N - 1, N, -3),
        (N, N - 2, -1),
        (N, N - 1, 1),
        (N, N - 3, 0),
        (N - 3, N, 0),
    ):
        put(i, j, v)
    return b


def conjecture_seed(l: int, matrix=None) -> GenSeed:
    """Rank 2l-2 seed: theta_r = u+v for r < 2l-2, the cubic for the last one."""
    B = matrix if matrix is not None else conjecture_matrix(l)
    N = len(B)
    if matrix is None and N != 2 * l - 2:
        raise SeedError("rank mismatch")
    d = [1] * (N - 1) + [3]
    report = validate(ExchangeMatrix(tuple(map(tuple, B)), tuple(d)))
    if not report.ok:
        raise SeedError("conjecture matrix fails validation: " + "; ".join(report.messages))
    coeffs = [[[0, 0], [0, 0]] for _ in range(N - 1)] + [_cubic_coeffs()]
    return GenSeed.initial(B, d, coeffs, [f"x{i}" for i in range(1, N + 1)], LAMBDAS)
