"""The type C_n generalized cluster algebra and its polygon model.

Vertices of the (2n+2)-gon are the even residues mod 4n+4; ``bar(v) = v + 2n + 2``.
Internally a vertex is its *position* ``v // 2`` mod 2n+2.  A centrally
symmetric pair of diagonals (or a diameter) is stored through the cyclic run
of vertex orbits on its short side: ``Orbit(n, j, c)`` has orbit residues
``2j, 2j+2, ..., 2(j+c-1)`` mod 2n+2, with ``1 <= c <= n``; ``c == n`` is a
diameter.  The two diagonals are ``[2j-2, 2j+2c]`` and their bars.

Small variables ``s_j = x_{2j-2, 2j+2}`` (j = 0..n) generate the algebra as a
polynomial ring; they live in their own variable table ``s0, ..., sn``.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .laurent import LaurentPoly, VarTable, divide_exact, substitute
from .seeds import GenSeed, mutate

LAMBDA = "lam"


class TypeCError(ValueError):
    pass


# --------------------------------------------------------------------------
# vertices and orbits


def bar(v: int, n: int) -> int:
    return (v + 2 * n + 2) % (4 * n + 4)


def vertex_label(v: int, n: int) -> str:
    v %= 4 * n + 4
    if v <= 2 * n:
        return str(v)
    return f"{v - 2 * n - 2}~"


def parse_vertex(text: str, n: int) -> int:
    text = text.strip()
    barred = text.endswith("~")
    v = int(text[:-1] if barred else text)
    if v % 2:
        raise TypeCError(f"vertex {text!r} must be even")
    return (v + (2 * n + 2 if barred else 0)) % (4 * n + 4)


@dataclass(frozen=True, order=True)
class Orbit:
    """Theta-orbit of a diagonal, or a diameter."""

    n: int
    j: int
    c: int

    def __post_init__(self):
        if not 1 <= self.c <= self.n:
            raise TypeCError(f"orbit size {self.c} out of range 1..{self.n}")
        object.__setattr__(self, "j", self.j % (self.n + 1))

    @property
    def is_diameter(self) -> bool:
        return self.c == self.n

    @property
    def card(self) -> int:
        return self.c

    def residues(self) -> tuple[int, ...]:
        """Indices ``i`` of the vertex orbits ``2i`` on the short side."""
        m = self.n + 1
        return tuple((self.j + t) % m for t in range(self.c))

    def vertices(self) -> tuple[int, int]:
        """Representative diagonal ``[2j-2, 2j+2c]`` as vertex labels."""
        mod = 4 * self.n + 4
        return ((2 * self.j - 2) % mod, (2 * self.j + 2 * self.c) % mod)

    def chords(self) -> list[tuple[int, int]]:
        """Diagonals of the orbit as position pairs mod 2n+2."""
        m = 2 * self.n + 2
        p, q = (self.j - 1) % m, (self.j + self.c) % m
        if self.is_diameter:
            return [(p, q)]
        return [(p, q), ((p + self.n + 1) % m, (q + self.n + 1) % m)]

    def label(self) -> str:
        a, b = self.vertices()
        return f"x:{vertex_label(a, self.n)},{vertex_label(b, self.n)}"

    def __str__(self) -> str:
        return self.label()


def orbit_of(a: int, b: int, n: int) -> Orbit | None:
    """Orbit of the diagonal between vertices ``a`` and ``b``; ``None`` for a side."""
    m = 2 * n + 2
    if a % 2 or b % 2:
        raise TypeCError("vertices must be even")
    p, q = (a // 2) % m, (b // 2) % m
    if p == q:
        raise TypeCError("a diagonal needs two distinct vertices")
    forward = (q - p) % m - 1
    backward = m - 2 - forward
    if forward == 0 or backward == 0:
        return None
    if forward <= backward:
        return Orbit(n, (p + 1) % (n + 1), forward)
    return Orbit(n, (q + 1) % (n + 1), backward)


def parse_orbit(text: str, n: int) -> Orbit | None:
    body = text.strip()
    if body.startswith("x:"):
        body = body[2:]
    try:
        a, b = body.split(",")
    except ValueError:
        raise TypeCError(f"orbit syntax is x:a,b, got {text!r}") from None
    return orbit_of(parse_vertex(a, n), parse_vertex(b, n), n)


def all_orbits(n: int) -> list[Orbit]:
    return [Orbit(n, j, c) for c in range(1, n + 1) for j in range(n + 1)]


def diameter(a_pos: int, n: int) -> Orbit:
    """Diameter through the vertex at position ``a_pos``."""
    return Orbit(n, a_pos + 1, n)


def small_orbit(j: int, n: int) -> Orbit:
    return Orbit(n, j, 1)


def _chords_cross(c1, c2, m) -> bool:
    p, q = c1
    r, s = c2
    if len({p, q, r, s}) < 4:
        return False

    def inside(x):
        return 0 < (x - p) % m < (q - p) % m

    return inside(r) != inside(s)


def crossing(o1: Orbit, o2: Orbit) -> bool:
    """True iff some diagonal of ``o1`` meets some diagonal of ``o2`` inside."""
    if o1 == o2:
        return False
    m = 2 * o1.n + 2
    return any(_chords_cross(a, b, m) for a in o1.chords() for b in o2.chords())


# --------------------------------------------------------------------------
# triangulations


@dataclass(frozen=True)
class CSTriangulation:
    n: int
    orbits: frozenset

    def __post_init__(self):
        if len(self.orbits) != self.n:
            raise TypeCError(f"a triangulation has {self.n} orbits")
        if sum(o.is_diameter for o in self.orbits) != 1:
            raise TypeCError("a triangulation has exactly one diameter")
        for o1, o2 in itertools.combinations(self.orbits, 2):
            if crossing(o1, o2):
                raise TypeCError(f"{o1} and {o2} cross")

    def sorted(self) -> list[Orbit]:
        return sorted(self.orbits, key=lambda o: (o.c, o.j))


def initial_orbits(n: int) -> list[Orbit]:
    """``x_k = x_{2n-bar, 2k}`` for k = 1..n, in seed order."""
    top = 4 * n + 2
    return [orbit_of(top, 2 * k, n) for k in range(1, n + 1)]


def initial_triangulation(n: int) -> CSTriangulation:
    return CSTriangulation(n, frozenset(initial_orbits(n)))


def flip(t: CSTriangulation, orb: Orbit) -> CSTriangulation:
    if orb not in t.orbits:
        raise TypeCError(f"{orb} is not in the triangulation")
    rest = t.orbits - {orb}
    found = [
        o
        for o in all_orbits(t.n)
        if o != orb
        and o not in rest
        and o.is_diameter == orb.is_diameter
        and not any(crossing(o, r) for r in rest)
    ]
    if len(found) != 1:
        raise TypeCError(f"flip of {orb} is not unique ({len(found)} candidates)")
    return CSTriangulation(t.n, rest | {found[0]})


def flip_closure(n: int) -> set[CSTriangulation]:
    start = initial_triangulation(n)
    seen = {start}
    queue = deque([start])
    while queue:
        t = queue.popleft()
        for o in t.orbits:
            u = flip(t, o)
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return seen


# --------------------------------------------------------------------------
# the algebra


def initial_matrix(n: int) -> list[list[int]]:
    if n < 1:
        raise TypeCError("rank must be at least 1")
    b = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        b[i][i + 1] = 1
        b[i + 1][i] = -1
    if n >= 2:
        b[n - 2][n - 1] = 2
    return b


def initial_seed(n: int) -> GenSeed:
    """Seed with theta_i = u + v (i < n) and theta_n = u^2 + lam*u*v + v^2."""
    B = initial_matrix(n)
    d = [1] * (n - 1) + [2]
    coeffs = [[[0], [0]] for _ in range(n - 1)] + [[[0], [1], [0]]]
    return GenSeed.initial(B, d, coeffs, [f"x{k}" for k in range(1, n + 1)], [LAMBDA])


class TypeC:
    """Cached data for one rank: expansions, relations and bases."""

    def __init__(self, n: int):
        if n < 1:
            raise TypeCError("rank must be at least 1")
        self.n = n
        self.seed = initial_seed(n)
        self.table = self.seed.table
        self.small_table = VarTable([f"s{j}" for j in range(n + 1)])
        self._expansions: dict[Orbit, LaurentPoly] | None = None
        self._graph = None

    # -- expansions ---------------------------------------------------------

    def _explore(self):
        """Walk seeds and triangulations together, labelling variables."""
        start_orbits = tuple(initial_orbits(self.n))
        expansions = {o: x for o, x in zip(start_orbits, self.seed.x)}
        start = (self.seed, start_orbits)
        seen = {frozenset(start_orbits)}
        queue = deque([start])
        edges = set()
        while queue:
            seed, orbs = queue.popleft()
            t = CSTriangulation(self.n, frozenset(orbs))
            for k in range(1, self.n + 1):
                new_seed = mutate(seed, k)
                new_orb = next(iter(flip(t, orbs[k - 1]).orbits - t.orbits))
                x = new_seed.x[k - 1]
                old = expansions.setdefault(new_orb, x)
                if old != x:
                    raise TypeCError(f"inconsistent expansion for {new_orb}")
                new_orbs = orbs[: k - 1] + (new_orb,) + orbs[k:]
                key = frozenset(new_orbs)
                edges.add(frozenset((frozenset(orbs), key)))
                if key not in seen:
                    seen.add(key)
                    queue.append((new_seed, new_orbs))
        self._expansions = expansions
        self._graph = (seen, edges)

    @property
    def expansions(self) -> dict[Orbit, LaurentPoly]:
        if self._expansions is None:
            self._explore()
        return self._expansions

    def clusters(self) -> set[frozenset]:
        if self._graph is None:
            self._explore()
        return self._graph[0]

    def lam(self) -> LaurentPoly:
        return LaurentPoly.var(self.table, LAMBDA)

    def x(self, orb: Orbit | None) -> LaurentPoly:
        """Cluster variable of an orbit in the initial variables (1 for a side)."""
        if orb is None:
            return self.table.one()
        return self.expansions[orb]

    def xv(self, a: int, b: int) -> LaurentPoly:
        """Cluster variable of the diagonal between two vertex labels."""
        return self.x(orbit_of(a, b, self.n))

    def variable_expansion(self, orb: Orbit | None) -> LaurentPoly:
        return self.x(orb)

    # -- relations ------------------------------------------------------------

    def exchange_relation(self, t: CSTriangulation, orb: Orbit) -> "Relation":
        """The exchange relation for flipping ``orb`` in ``t``; asserted to hold."""
        new = next(iter(flip(t, orb).orbits - t.orbits))
        n = self.n
        if orb.is_diameter:
            a = orb.chords()[0][0]
            b = new.chords()[0][0]
            rel = diameter_relation(n, a, b)
        else:
            m = 2 * n + 2
            pairs = [(c1, c2) for c1 in orb.chords() for c2 in new.chords() if _chords_cross(c1, c2, m)]
            (p, q), (r, s) = pairs[0]
            rel = ptolemy_relation(n, p, r, q, s)
        if not self.holds(rel):
            raise TypeCError(f"exchange relation fails for {orb}")
        return rel

    def evaluate(self, side) -> LaurentPoly:
        total = self.table.zero()
        for coef, e, orbs in side:
            term = self.table.const(coef) * self.lam() ** e
            for o in orbs:
                term = term * self.x(o)
            total = total + term
        return total

    def holds(self, rel: "Relation") -> bool:
        return self.evaluate(rel.lhs) == self.evaluate(rel.rhs)

    def relations(self) -> Iterator["Relation"]:
        """Every Ptolemy, two-diameter and diagonal-by-diameter instance."""
        yield from ptolemy_relations(self.n)
        yield from diameter_relations(self.n)
        yield from rel2_relations(self.n)

    # -- small variables ------------------------------------------------------

    def s(self, j: int) -> LaurentPoly:
        return LaurentPoly.var(self.small_table, f"s{j % (self.n + 1)}")

    def continuant(self, j: int, c: int) -> LaurentPoly:
        """Polynomial in small variables of the orbit with run ``(j, c)``."""
        return _continuant(self.n, j % (self.n + 1), c, self.small_table)

    def lambda_in_small(self) -> LaurentPoly:
        n = self.n
        return self.continuant(0, n) * self.s(n) - self.continuant(1, n - 1) - self.continuant(0, n - 1)

    def orbit_in_small(self, orb: Orbit | None) -> LaurentPoly:
        if orb is None:
            return self.small_table.one()
        return self.continuant(orb.j, orb.c)

    def small_expansion(self, j: int) -> LaurentPoly:
        """Small variable ``s_j`` in the initial variables."""
        return self.x(small_orbit(j, self.n))

    def small_bindings(self) -> dict[str, LaurentPoly]:
        return {f"s{j}": self.small_expansion(j) for j in range(self.n + 1)}

    def express_in_small(self, p: "LaurentPoly | Orbit | None") -> LaurentPoly:
        """Rewrite an element of the algebra as a polynomial in small variables."""
        if p is None or isinstance(p, Orbit):
            return self.orbit_in_small(p)
        bindings = {f"x{k}": self.continuant(0, k) for k in range(1, self.n + 1)}
        bindings[LAMBDA] = self.lambda_in_small()
        out = substitute(p, bindings, self.small_table)
        if any(e < 0 for m in out.terms for _, e in m):
            raise TypeCError("element is not a polynomial in the small variables")
        return out

    def from_small(self, q: LaurentPoly) -> LaurentPoly:
        return substitute(q, self.small_bindings(), self.table)

    # -- monomial bases -------------------------------------------------------

    def degree(self, m: "ClusterMonomial") -> int:
        return (self.n + 1) * m.e + sum(o.card * k for o, k in m.orbits)

    def phi(self, m: "ClusterMonomial") -> tuple[int, ...]:
        """Exponent vector over ``s0..sn`` of the image small monomial."""
        m.check_compatible()
        a = [m.e] * (self.n + 1)
        for o, k in m.orbits:
            for r in o.residues():
                a[r] += k
        return tuple(a)

    def psi(self, a: Iterable[int]) -> "ClusterMonomial":
        """Inverse of ``phi``: peel full cycles, then maximal cyclic runs."""
        a = list(a)
        n = self.n
        if len(a) != n + 1 or any(v < 0 for v in a):
            raise TypeCError("need n+1 nonnegative exponents")
        e, runs = cyclic_runs(a)
        orbits = Counter({Orbit(n, j, c): k for (j, c), k in runs.items()})
        return ClusterMonomial.make(e, orbits)

    def small_monomial(self, a: Iterable[int]) -> LaurentPoly:
        return self.small_table.monomial(dict(zip(self.small_table.names, a)))

    def monomial_value(self, m: "ClusterMonomial") -> LaurentPoly:
        out = self.lam() ** m.e
        for o, k in m.orbits:
            out = out * self.x(o) ** k
        return out

    def cluster_monomials(self, degree_bound: int) -> list["ClusterMonomial"]:
        """All lambda-free cluster monomials up to the degree bound."""
        return [m for m in _compatible_multisets(self.n, degree_bound)]

    def basis_M(self, degree_bound: int) -> list["ClusterMonomial"]:
        out = []
        for m in self.cluster_monomials(degree_bound):
            room = degree_bound - self.degree(m)
            for e in range(room // (self.n + 1) + 1):
                out.append(ClusterMonomial(e, m.orbits))
        return sorted(out, key=self.order_key)

    def basis_B(self, degree_bound: int) -> list[tuple[int, "ClusterMonomial", LaurentPoly]]:
        """``S_k(lam) * m`` up to the degree bound, as (k, m, value)."""
        out = []
        lam = self.lam()
        for m in self.basis_M(degree_bound):
            k = m.e
            value = chebyshev_S(k, lam) * self.monomial_value(ClusterMonomial(0, m.orbits))
            out.append((k, ClusterMonomial(0, m.orbits), value))
        return out

    def small_value(self, m: "ClusterMonomial", k: int | None = None) -> LaurentPoly:
        """``S_k(lam) * m`` written in the small variables, built multiplicatively.

        ``k`` defaults to ``m.e``, with ``m`` read as lambda-free.
        """
        k = m.e if k is None else k
        out = chebyshev_S(k, self.lambda_in_small())
        for o, mult in m.orbits:
            out = out * self.orbit_in_small(o) ** mult
        return out

    def order_key(self, m: "ClusterMonomial"):
        return (self.degree(m), self.phi(m))

    def transition_matrix(self, degree_bound: int):
        """Rows: elements of M; columns: small monomials; via phi to index both."""
        rows = self.basis_M(degree_bound)
        index = {self.phi(m): i for i, m in enumerate(rows)}
        U = []
        for m in rows:
            q = self.lambda_in_small() ** m.e
            for o, mult in m.orbits:
                q = q * self.orbit_in_small(o) ** mult
            row = {}
            for mono, coef in q.items():
                dense = [0] * (self.n + 1)
                for pos, e in mono:
                    dense[pos] = e
                row[index[tuple(dense)]] = coef
            U.append(row)
        return rows, U


def is_lower_unitriangular(U) -> bool:
    for i, row in enumerate(U):
        if row.get(i) != 1:
            return False
        if any(j > i for j in row):
            return False
    return True


# --------------------------------------------------------------------------
# helpers shared with the character side


def cyclic_runs(a: list[int]) -> tuple[int, Counter]:
    """Split a multiplicity vector on Z/m into full cycles and cyclic runs.

    Returns ``(r, runs)`` where ``r`` is the number of full cycles and ``runs``
    counts ``(start, length)`` pairs.  Runs found in one layer are disjoint and
    not adjacent; runs in later layers sit inside earlier ones, so the family
    is nested or disjoint.
    """
    a = list(a)
    m = len(a)
    r = min(a) if a else 0
    a = [v - r for v in a]
    runs: Counter = Counter()
    while any(a):
        support = [v > 0 for v in a]
        zero = support.index(False)
        i = 0
        while i < m:
            pos = (zero + i) % m
            if not support[pos]:
                i += 1
                continue
            length = 0
            while i + length < m and support[(zero + i + length) % m]:
                length += 1
            runs[(pos, length)] += 1
            for t in range(length):
                a[(pos + t) % m] -= 1
            i += length
    return r, runs


def chebyshev_S(k: int, u):
    """Second-kind Chebyshev polynomial evaluated at ``u`` (ring element)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    prev, cur = u * 0 + 1, u
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, u * cur - prev
    return cur


@lru_cache(maxsize=None)
def _continuant_cached(n: int, j: int, c: int, table: VarTable) -> LaurentPoly:
    if c == 0:
        return table.one()
    s = [LaurentPoly.var(table, f"s{i}") for i in range(n + 1)]
    if c == 1:
        return s[j]
    return s[(j + c - 1) % (n + 1)] * _continuant_cached(n, j, c - 1, table) - _continuant_cached(n, j, c - 2, table)


def _continuant(n, j, c, table):
    return _continuant_cached(n, j, c, table)


# --------------------------------------------------------------------------
# cluster monomials


@dataclass(frozen=True)
class ClusterMonomial:
    """``lam^e`` times a product of pairwise compatible cluster variables."""

    e: int
    orbits: tuple  # sorted tuple of (Orbit, multiplicity)

    @classmethod
    def make(cls, e: int, orbits) -> "ClusterMonomial":
        items = orbits.items() if hasattr(orbits, "items") else orbits
        merged: Counter = Counter()
        for o, k in items:
            if o is not None and k:
                merged[o] += k
        return cls(e, tuple(sorted(merged.items())))

    def check_compatible(self):
        os = [o for o, _ in self.orbits]
        for o1, o2 in itertools.combinations(os, 2):
            if crossing(o1, o2):
                raise TypeCError(f"{o1} and {o2} cross; not a cluster monomial")

    def __mul__(self, other: "ClusterMonomial") -> "ClusterMonomial":
        c = Counter(dict(self.orbits))
        c.update(dict(other.orbits))
        return ClusterMonomial.make(self.e + other.e, c)

    def __str__(self) -> str:
        parts = []
        if self.e:
            parts.append(LAMBDA if self.e == 1 else f"{LAMBDA}^{self.e}")
        for o, k in self.orbits:
            parts.append(str(o) if k == 1 else f"{o}^{k}")
        return "*".join(parts) or "1"


def _compatible_multisets(n: int, degree_bound: int) -> list[ClusterMonomial]:
    orbits = sorted(all_orbits(n))
    out = []

    def rec(i, chosen, budget):
        if i == len(orbits):
            out.append(ClusterMonomial.make(0, chosen))
            return
        rec(i + 1, chosen, budget)
        o = orbits[i]
        if o.card > budget or any(crossing(o, p) for p, _ in chosen):
            return
        for k in range(1, budget // o.card + 1):
            rec(i + 1, chosen + [(o, k)], budget - k * o.card)

    rec(0, [], degree_bound)
    return out


# --------------------------------------------------------------------------
# relation families


@dataclass(frozen=True)
class Relation:
    """``sum lhs == sum rhs``; each side lists (coef, lam power, orbits)."""

    name: str
    lhs: tuple
    rhs: tuple

    def describe(self) -> str:
        def side(terms):
            out = []
            for coef, e, orbs in terms:
                f = [str(o) for o in orbs if o is not None]
                if e:
                    f.insert(0, LAMBDA if e == 1 else f"{LAMBDA}^{e}")
                body = "*".join(f) or "1"
                out.append(body if coef == 1 else f"{coef}*{body}")
            return " + ".join(out)

        return f"{self.name}: {side(self.lhs)} = {side(self.rhs)}"


def _o(n, p, q):
    """Orbit between positions (None for a side)."""
    return orbit_of(2 * p, 2 * q, n)


def ptolemy_relation(n, A, B, C, D) -> Relation:
    """Quadrilateral A, B, C, D (positions in cyclic order)."""
    o = lambda p, q: _o(n, p, q)
    return Relation(
        f"ptolemy({A},{B},{C},{D})",
        ((1, 0, (o(A, C), o(B, D))),),
        ((1, 0, (o(A, B), o(C, D))), (1, 0, (o(A, D), o(B, C)))),
    )


def diameter_relation(n, a, b) -> Relation:
    """Two distinct diameters through positions a and b."""
    m = 2 * n + 2
    o = lambda p, q: _o(n, p % m, q % m)
    abar = a + n + 1
    return Relation(
        f"diameters({a},{b})",
        ((1, 0, (o(a, abar), o(b, b + n + 1))),),
        ((1, 0, (o(a, b), o(a, b))), (1, 0, (o(abar, b), o(abar, b))), (1, 1, (o(a, b), o(abar, b)))),
    )


def rel2_relation(n, A, B, D) -> Relation:
    """Chord AB times the diameter through D, with D strictly inside the short arc AB."""
    m = 2 * n + 2
    o = lambda p, q: _o(n, p % m, q % m)
    Dbar = D + n + 1
    return Relation(
        f"chord-diameter({A},{B};{D})",
        ((1, 0, (o(A, B), o(D, Dbar))),),
        ((1, 1, (o(A, D), o(D, B))), (1, 0, (o(A, D), o(B, Dbar))), (1, 0, (o(D, B), o(Dbar, A)))),
    )


def ptolemy_relations(n) -> Iterator[Relation]:
    m = 2 * n + 2
    for A in range(m):
        for gaps in itertools.combinations(range(1, n + 2), 3):
            B, C, D = ((A + g) % m for g in gaps)
            yield ptolemy_relation(n, A, B, C, D)


def diameter_relations(n) -> Iterator[Relation]:
    for a in range(n + 1):
        for b in range(n + 1):
            if a != b:
                yield diameter_relation(n, a, b)


def rel2_relations(n) -> Iterator[Relation]:
    m = 2 * n + 2
    for A in range(m):
        for length in range(2, n + 1):
            B = (A + length) % m
            for t in range(1, length):
                yield rel2_relation(n, A, B, (A + t) % m)


@lru_cache(maxsize=None)
def typec(n: int) -> TypeC:
    return TypeC(n)
