import itertools
import math
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gencluster.seeds import enumerate_graph
from gencluster.typec import (
    ClusterMonomial,
    CSTriangulation,
    Orbit,
    TypeCError,
    all_orbits,
    chebyshev_S,
    crossing,
    cyclic_runs,
    flip,
    flip_closure,
    initial_matrix,
    initial_orbits,
    initial_seed,
    initial_triangulation,
    is_lower_unitriangular,
    orbit_of,
    parse_orbit,
    rel2_relation,
    typec,
)
from gencluster.laurent import VarTable


def segments_cross(p1, p2, q1, q2) -> bool:
    """Open-interior intersection of two plane segments."""

    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return 0 if abs(v) < 1e-9 else (1 if v > 0 else -1)

    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    return o1 * o2 < 0 and o3 * o4 < 0


def geometric_crossing(o1: Orbit, o2: Orbit) -> bool:
    m = 2 * o1.n + 2
    pt = lambda p: (math.cos(2 * math.pi * p / m), math.sin(2 * math.pi * p / m))
    if o1 == o2:
        return False
    return any(
        segments_cross(pt(a), pt(b), pt(c), pt(d)) for a, b in o1.chords() for c, d in o2.chords()
    )


# -- seeds and orbits -----------------------------------------------------------


def test_initial_matrices():
    assert initial_matrix(3) == [[0, 1, 0], [-1, 0, 2], [0, -1, 0]]
    s = initial_seed(2)
    assert s.B.to_list() == [[0, 2], [-1, 0]] and s.B.d == (1, 2)
    s = initial_seed(1)
    assert s.B.to_list() == [[0]] and s.p == (((0,), (1,), (0,)),)
    with pytest.raises(TypeCError):
        initial_seed(0)


def test_orbit_labels_are_symmetric():
    n = 3
    mod = 4 * n + 4
    for a in range(0, mod, 2):
        for b in range(0, mod, 2):
            if a == b:
                continue
            o = orbit_of(a, b, n)
            assert o == orbit_of(b, a, n)
            assert o == orbit_of((a + 2 * n + 2) % mod, (b + 2 * n + 2) % mod, n)
    assert orbit_of(0, 2, n) is None


def test_orbit_parsing():
    assert parse_orbit("x:2,0~", 3) == orbit_of(2, 8, 3)
    assert parse_orbit("6~,6", 3).is_diameter
    with pytest.raises(TypeCError):
        parse_orbit("1,4", 3)


def test_crossing_examples():
    n = 3
    assert crossing(orbit_of(2, 8, n), orbit_of(4, 0, n))
    d0, d2 = orbit_of(0, 8, n), orbit_of(2, 10, n)
    assert d0.is_diameter and crossing(d0, d2)
    for o in all_orbits(n):
        assert not crossing(o, o)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_crossing_matches_geometry(n):
    for o1, o2 in itertools.product(all_orbits(n), repeat=2):
        assert crossing(o1, o2) == geometric_crossing(o1, o2)
        assert crossing(o1, o2) == crossing(o2, o1)


# -- triangulations -------------------------------------------------------------


@pytest.mark.parametrize("n,count", [(1, 2), (2, 6), (3, 20), (4, 70)])
def test_flip_closure_counts(n, count):
    assert len(flip_closure(n)) == count == math.comb(2 * n, n)


def test_flip_is_an_involution():
    for t in flip_closure(3):
        for o in t.orbits:
            u = flip(t, o)
            new = next(iter(u.orbits - t.orbits))
            assert flip(u, new) == t


def test_diameter_flip_in_octagon():
    t = initial_triangulation(3)
    d = orbit_of(14, 6, 3)
    assert d in t.orbits and d.is_diameter
    u = flip(t, d)
    assert u.orbits - t.orbits == {orbit_of(4, 12, 3)}


def test_flip_of_missing_orbit():
    with pytest.raises(TypeCError):
        flip(initial_triangulation(3), orbit_of(0, 4, 3))


def test_triangulation_invariants_checked():
    with pytest.raises(TypeCError):
        CSTriangulation(3, frozenset(initial_orbits(3)[:2]))


# -- expansions and relations ---------------------------------------------------


def test_side_and_initial_expansions():
    C = typec(3)
    assert C.x(None) == C.table.one()
    for o, x in zip(initial_orbits(3), C.seed.x):
        assert C.x(o) == x


def test_n2_expansion_of_x04():
    C = typec(2)
    x1, x2 = C.seed.x
    assert C.xv(0, 4) * x1 == 1 + x2


@pytest.mark.parametrize("n", [2, 3, 4])
def test_bfs_and_flip_counts_agree(n):
    C = typec(n)
    g = enumerate_graph(initial_seed(n))
    assert g.num_nodes == len(C.clusters()) == len(flip_closure(n))
    assert len(g.cluster_variables()) == len(C.expansions) == n * (n + 1)


def test_octagon_lambda_relation():
    C = typec(2)
    lam = C.lam()
    # x_{4~,4} x_{2~,2} = x_{4~,2}^2 + lam x_{4~,2} + 1
    a = C.xv(10, 2)
    assert C.xv(10, 4) * C.xv(8, 2) == a ** 2 + lam * a + 1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_all_relations_hold(n):
    C = typec(n)
    rels = list(C.relations())
    for rel in rels:
        assert C.holds(rel), rel.describe()


@pytest.mark.parametrize("n", [2, 3])
def test_exchange_relations_of_every_flip(n):
    C = typec(n)
    for t in flip_closure(n):
        for o in t.orbits:
            C.exchange_relation(t, o)


def test_chord_by_diameter_instance():
    # the diameter vertex 2d lies on the short side of the chord, 0 <= d < k
    n, k, d = 3, 2, 1
    C = typec(n)
    top = 4 * n + 2
    dbar = 2 * d + 2 * n + 2
    lhs = C.xv(top, 2 * k) * C.xv(2 * d, dbar)
    rhs = (
        C.lam() * C.xv(top, 2 * d) * C.xv(2 * d, 2 * k)
        + C.xv(top, 2 * d) * C.xv(2 * k, dbar)
        + C.xv(2 * d, 2 * k) * C.xv(dbar, top)
    )
    assert lhs == rhs
    assert C.holds(rel2_relation(n, 2 * n + 1, k, d))


# -- small variables ------------------------------------------------------------


def test_small_variables_are_fixed():
    C = typec(3)
    for j in range(4):
        assert C.express_in_small(C.small_expansion(j)) == C.s(j)
        assert C.orbit_in_small(Orbit(3, j, 1)) == C.s(j)


def test_lambda_in_small_variables():
    n = 3
    C = typec(n)
    top = 4 * n + 2
    zbar = 2 * n + 2
    rhs = C.xv(top, 2 * n) * C.xv(2 * n - 2, zbar) - C.xv(zbar, top) - C.xv(top, 2 * n - 2)
    assert rhs == C.lam()
    assert C.express_in_small(C.lam()) == C.lambda_in_small()
    assert C.from_small(C.lambda_in_small()) == C.lam()


def test_length_three_recurrence():
    C = typec(3)
    mod = 16
    for k in range(8):
        a = 2 * k
        assert C.xv(a, (a + 6) % mod) == C.xv(a, (a + 4) % mod) * C.xv(a + 2, (a + 6) % mod) - 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_every_variable_is_polynomial_in_small(n):
    C = typec(n)
    for o, x in C.expansions.items():
        q = C.express_in_small(x)
        assert q == C.orbit_in_small(o)
        assert C.from_small(q) == x


def test_non_polynomial_rejected():
    C = typec(2)
    with pytest.raises(TypeCError):
        C.express_in_small(C.seed.x[0] ** -1)


# -- Phi, Psi and bases ---------------------------------------------------------


def test_phi_examples():
    C = typec(3)
    x04 = orbit_of(0, 4, 3)
    x06 = orbit_of(0, 6, 3)
    assert C.phi(ClusterMonomial.make(0, {x04: 1})) == (0, 1, 0, 0)
    assert C.phi(ClusterMonomial.make(1, {})) == (1, 1, 1, 1)
    assert C.phi(ClusterMonomial.make(0, {x06: 1})) == (0, 1, 1, 0)


def test_psi_examples():
    C = typec(3)
    assert C.psi((0, 0, 0, 0)) == ClusterMonomial.make(0, {})
    assert C.psi((0, 2, 1, 0)) == ClusterMonomial.make(0, {orbit_of(0, 6, 3): 1, orbit_of(0, 4, 3): 1})
    assert C.psi((1, 1, 1, 1)) == ClusterMonomial.make(1, {})


def test_phi_rejects_crossing():
    C = typec(3)
    m = ClusterMonomial.make(0, {orbit_of(2, 8, 3): 1, orbit_of(4, 0, 3): 1})
    with pytest.raises(TypeCError):
        C.phi(m)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_phi_psi_bijection_exhaustive(n):
    C = typec(n)
    seen = set()
    for m in C.basis_M(6):
        a = C.phi(m)
        assert sum(a) == C.degree(m)
        assert C.psi(a) == m
        seen.add(a)
    for a in itertools.product(range(7), repeat=n + 1):
        if sum(a) <= 6:
            assert C.phi(C.psi(a)) == a
            assert a in seen


@given(st.lists(st.integers(0, 6), min_size=4, max_size=4))
def test_cyclic_runs_are_nested_or_disjoint(a):
    r, runs = cyclic_runs(a)
    n = 3
    cover = [r] * (n + 1)
    orbs = [Orbit(n, j, c) for (j, c) in runs]
    for (j, c), k in runs.items():
        for t in range(c):
            cover[(j + t) % (n + 1)] += k
    assert cover == a
    for o1, o2 in itertools.combinations(orbs, 2):
        assert not crossing(o1, o2)


def test_phi_is_multiplicative():
    C = typec(3)
    ms = C.basis_M(3)
    for m1, m2 in itertools.product(ms, repeat=2):
        prod = m1 * m2
        try:
            prod.check_compatible()
        except TypeCError:
            continue
        assert C.phi(prod) == tuple(x + y for x, y in zip(C.phi(m1), C.phi(m2)))


def test_chebyshev_examples():
    T = VarTable(["u"])
    u = T.var("u")
    assert chebyshev_S(0, u) == T.one()
    assert chebyshev_S(1, u) == u
    assert chebyshev_S(2, u) == u ** 2 - 1
    assert chebyshev_S(3, u) == u ** 3 - 2 * u
    for k in range(1, 9):
        assert chebyshev_S(k, u) ** 2 == chebyshev_S(k - 1, u) * chebyshev_S(k + 1, u) + 1


def brute_force_m0(n, bound):
    """Multisets of pairwise non-crossing orbits of total size <= bound."""
    orbs = all_orbits(n)
    out = set()
    for r in range(bound + 1):
        for combo in itertools.combinations_with_replacement(orbs, r):
            if sum(o.card for o in combo) > bound:
                continue
            if any(geometric_crossing(a, b) for a, b in itertools.combinations(set(combo), 2)):
                continue
            out.add(tuple(sorted(Counter(combo).items())))
    return out


@pytest.mark.parametrize("n,bound", [(2, 2), (2, 4), (3, 4)])
def test_cluster_monomial_count_matches_brute_force(n, bound):
    C = typec(n)
    got = {m.orbits for m in C.cluster_monomials(bound)}
    assert got == brute_force_m0(n, bound)


def test_basis_b_small_cases():
    C = typec(2)
    assert [v for _, _, v in C.basis_B(0)] == [C.table.one()]
    values = [v for _, _, v in C.basis_B(6)]
    assert len(values) == len(set(values))


@pytest.mark.parametrize("n", [2, 3])
def test_transition_matrix_lower_unitriangular(n):
    rows, U = typec(n).transition_matrix(6)
    assert len(rows) == len(U)
    assert is_lower_unitriangular(U)


def test_small_value_matches_initial_variables():
    C = typec(2)
    for k, m, value in C.basis_B(4):
        assert C.from_small(C.small_value(m, k)) == value
