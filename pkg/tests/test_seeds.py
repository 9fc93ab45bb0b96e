import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gencluster.laurent import divide_exact
from gencluster.seeds import (
    ExchangeMatrix,
    GenSeed,
    SeedError,
    check_laurent,
    cluster_key,
    enumerate_graph,
    mutate,
    mutate_coeffs,
    mutate_matrix,
    mutate_sequence,
    random_sequence,
    relation_class,
    seed_from_json_obj,
    seed_to_json_obj,
    validate,
)
from gencluster.sl3 import g2_initial_seed
from gencluster.typec import initial_seed

C3 = ExchangeMatrix(((0, 1, 0), (-1, 0, 2), (0, -1, 0)), (1, 1, 2))
G2 = ExchangeMatrix(((0, 3), (-1, 0)), (1, 3))


@st.composite
def valid_matrices(draw):
    """b_ij = s_ij * w_j with s skew; symmetrizer w, divisors d_k | w_k."""
    n = draw(st.integers(1, 4))
    s = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = draw(st.integers(-2, 2))
            s[i][j], s[j][i] = v, -v
    d = [draw(st.integers(1, 3)) for _ in range(n)]
    w = [dk * draw(st.integers(1, 2)) for dk in d]
    b = [[s[i][j] * w[j] for j in range(n)] for i in range(n)]
    return ExchangeMatrix(tuple(map(tuple, b)), tuple(d))


def is_skew_symmetrizable(B: ExchangeMatrix, D) -> bool:
    n = B.n
    return all(D[i] * B.b[i][j] == -D[j] * B.b[j][i] for i in range(n) for j in range(n))


# -- validation ---------------------------------------------------------------


def test_c3_matrix_valid_with_symmetrizer():
    report = validate(C3)
    assert report.ok
    assert report.symmetrizer == (1, 1, 2)


def test_g2_matrix_valid():
    assert validate(G2).ok


def test_symmetric_matrix_invalid():
    report = validate(ExchangeMatrix(((0, 1), (1, 0)), (1, 1)))
    assert not report.ok
    assert not report.skew_symmetrizable
    assert report.messages


def test_divisibility_failure_reported():
    report = validate(ExchangeMatrix(((0, 1), (-1, 0)), (1, 2)))
    assert report.skew_symmetrizable and not report.divisible


def test_bad_shapes_rejected():
    with pytest.raises(SeedError):
        ExchangeMatrix(((0, 1),), (1,))
    with pytest.raises(SeedError):
        ExchangeMatrix(((0,),), (0,))


# -- matrix mutation ------------------------------------------------------------


def test_mutate_c3_direction_one():
    assert mutate_matrix(C3, 1).to_list() == [[0, -1, 0], [1, 0, 2], [0, -1, 0]]


def test_mutate_g2_direction_two():
    assert mutate_matrix(G2, 2).to_list() == [[0, -3], [1, 0]]


def test_direction_out_of_range():
    with pytest.raises(SeedError):
        mutate_matrix(C3, 0)
    with pytest.raises(SeedError):
        mutate_matrix(C3, 4)


@given(valid_matrices(), st.lists(st.integers(1, 4), max_size=8))
def test_mutation_preserves_validity_and_symmetrizer(B, seq):
    D = validate(B).symmetrizer
    assert D is not None
    for k in seq:
        if k > B.n:
            continue
        B2 = mutate_matrix(B, k)
        assert mutate_matrix(B2, k) == B
        B = B2
        assert is_skew_symmetrizable(B, D)
        assert validate(B).ok


# -- coefficient mutation -------------------------------------------------------


def test_double_mutation_restores_coefficients():
    seed = g2_initial_seed()
    for k in (1, 2):
        once = mutate_coeffs(seed.p, seed.B, k)
        twice = mutate_coeffs(once, mutate_matrix(seed.B, k), k)
        assert twice == seed.p
        assert once[k - 1] == tuple(reversed(seed.p[k - 1]))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_type_c_coefficients_fixed_under_mutation(n):
    seed = initial_seed(n)
    rng = random.Random(n)
    for _ in range(20):
        s = mutate_sequence(seed, random_sequence(n, 10, rng))
        assert s.p == seed.p


def test_g2_relations_fixed_up_to_reversal():
    seed = g2_initial_seed()
    start = [relation_class(pk) for pk in seed.p]
    for s in enumerate_graph(seed).nodes.values():
        assert [relation_class(pk) for pk in s.p] == start


# -- cluster mutation -----------------------------------------------------------


def test_c2_mutation_two():
    seed = initial_seed(2)
    x1, x2 = seed.x
    lam = seed.table.var("lam")
    new = mutate(seed, 2)
    assert new.x[1] == divide_exact(x1 ** 2 + lam * x1 + 1, x2)
    assert new.x[1] * x2 == x1 ** 2 + lam * x1 + 1
    assert new.x[0] == x1


def test_c2_mutation_one():
    seed = initial_seed(2)
    x1, x2 = seed.x
    new = mutate(seed, 1)
    assert new.x[0] * x1 == 1 + x2


@given(st.lists(st.integers(1, 3), max_size=8), st.integers(1, 3))
def test_mutation_is_an_involution(seq, k):
    s = mutate_sequence(initial_seed(3), seq)
    back = mutate(mutate(s, k), k)
    assert back.x == s.x and back.B == s.B and back.p == s.p


def test_initial_seed_rejects_bad_coefficients():
    with pytest.raises(SeedError):
        GenSeed.initial([[0, 3], [-1, 0]], [1, 3], [[[0], [0]], [[0], [0]]], lambda_vars=["a"])
    with pytest.raises(SeedError):
        GenSeed.initial([[0, 1], [1, 0]], [1, 1], [[[], []], [[], []]])


# -- enumeration ----------------------------------------------------------------


@pytest.mark.parametrize(
    "seed,clusters,variables",
    [(initial_seed(2), 6, 6), (initial_seed(3), 20, 12), (g2_initial_seed(), 8, 8)],
    ids=["C2", "C3", "G2"],
)
def test_enumeration_counts(seed, clusters, variables):
    g = enumerate_graph(seed)
    assert g.complete
    assert g.num_nodes == clusters
    assert len(g.cluster_variables()) == variables
    assert set(g.degrees().values()) == {seed.n}


def test_g2_eight_cycle_returns_home():
    seed = g2_initial_seed()
    keys = []
    s = seed
    for k in [1, 2] * 4:
        s = mutate(s, k)
        keys.append(cluster_key(s))
    assert keys[-1] == cluster_key(seed)
    assert len(set(keys)) == 8


def test_truncation_flag():
    g = enumerate_graph(initial_seed(3), max_nodes=5)
    assert not g.complete and g.num_nodes == 5
    g = enumerate_graph(initial_seed(3), max_depth=1)
    assert not g.complete and g.num_nodes == 4


def test_graph_json_and_dot_are_deterministic():
    a = enumerate_graph(initial_seed(3))
    b = enumerate_graph(initial_seed(3))
    assert json.dumps(a.to_json_obj()) == json.dumps(b.to_json_obj())
    assert a.to_dot() == b.to_dot()
    assert a.to_dot().count(" -- ") == 30


# -- Laurent checks and JSON ----------------------------------------------------


def test_empty_sequence_is_laurent():
    report = check_laurent(initial_seed(3), [])
    assert report.ok and report.support_sizes == []


def test_random_sequences_are_laurent():
    rng = random.Random(7)
    for seed in (initial_seed(3), g2_initial_seed()):
        for _ in range(20):
            assert check_laurent(seed, random_sequence(seed.n, 12, rng)).ok


def test_random_sequence_has_no_immediate_repeats():
    seq = random_sequence(3, 50, random.Random(1))
    assert all(a != b for a, b in zip(seq, seq[1:]))


def test_seed_json_round_trip():
    for seed in (initial_seed(3), g2_initial_seed()):
        again = seed_from_json_obj(json.loads(json.dumps(seed_to_json_obj(seed))))
        assert again.B == seed.B and again.p == seed.p
        assert [str(x) for x in again.x] == [str(x) for x in seed.x]


def test_seed_json_missing_field():
    with pytest.raises(SeedError, match="rank"):
        seed_from_json_obj({"B": [[0]]})
