import pytest

from src.config.caps import Caps
from src.functions.mfunc import check_m_convex_fn
from src.functions.quotients import is_sparse_paving, quotient_C
from src.generator.random_instances import (
    child_seeds,
    gen_function_chain,
    gen_function_pair,
    gen_m_func,
    gen_bipartite,
    gen_m_set,
    gen_non_quotient_pair,
    gen_nonneg_m_set,
    gen_quotient_pair,
    gen_quotient_triple,
    gen_sparse_paving,
    gen_submodular,
    perturb_m_func,
)
from src.linking.bipartite import edge_list, sides
from src.lattice.errors import CapExceeded, UsageError
from src.msets.mconvex import check_m_convex, check_submodular
from src.quotient.characterizations import check_compliant


def test_same_seed_same_instance():
    assert gen_submodular(11, 3) == gen_submodular(11, 3)
    assert gen_m_set(11, 3) == gen_m_set(11, 3)
    assert gen_function_pair(4, 2) == gen_function_pair(4, 2)


def test_child_seeds_are_stable_and_distinct():
    seeds = child_seeds(42, 5)
    assert seeds == child_seeds(42, 5)
    assert len(set(seeds)) == 5


def test_zero_scale_is_the_zero_function():
    p = gen_submodular(3, 3, 0)
    assert set(p.table) == {0}


def test_size_validation():
    with pytest.raises(UsageError):
        gen_submodular(0, 0)
    with pytest.raises(UsageError):
        gen_submodular(0, 2, -1)
    with pytest.raises(UsageError):
        gen_function_chain(0, 2, length=0)
    with pytest.raises(UsageError):
        gen_sparse_paving(0, 4, 4)


@pytest.mark.parametrize("seed", range(5))
def test_pairs_are_labelled_correctly(seed):
    p, q = gen_quotient_pair(seed, 3)
    assert check_submodular(p.table) and check_submodular(q.table)
    assert check_compliant(p, q)
    p, q = gen_non_quotient_pair(seed, 3)
    assert p.rank > q.rank
    assert not check_compliant(p, q)


def test_rejection_sampling_gives_up():
    with pytest.raises(CapExceeded) as info:
        gen_non_quotient_pair(0, 1, 1, Caps(rejection_draws=0))
    assert info.value.cap == "rejection_draws"


@pytest.mark.parametrize("seed", range(4))
def test_functions_are_certified(seed):
    f = gen_m_func(seed, gen_m_set(seed, 3, 1))
    assert check_m_convex_fn(f)
    chain = gen_function_chain(seed, 2, length=3)
    assert [g.rank for g in chain] == [chain[0].rank + i for i in range(3)]
    assert quotient_C(chain[2], chain[1])


def test_zero_curvature_is_flat():
    f = gen_m_func(1, gen_m_set(1, 3, 1), curvature=0)
    assert {v for _, v in f.values} == {0}


@pytest.mark.parametrize("seed", range(4))
def test_sparse_paving(seed):
    assert is_sparse_paving(gen_sparse_paving(seed, 4, 2))


def test_bipartite_density():
    G = gen_bipartite(5, 3, 2)
    assert sides(G) == (3, 2)
    assert G.number_of_nodes() == 5
    assert edge_list(gen_bipartite(5, 3, 2, density=0)) == []
    assert len(edge_list(gen_bipartite(5, 3, 2, density=1))) == 6
    assert edge_list(G) == edge_list(gen_bipartite(5, 3, 2))
    with pytest.raises(UsageError):
        gen_bipartite(5, 3, 2, density=1.5)


@pytest.mark.parametrize("seed", range(4))
def test_nonneg_sets_touch_the_origin_box(seed):
    S = gen_nonneg_m_set(seed, 3)
    assert check_m_convex(S)
    assert all(min(x[i] for x in S.points) == 0 for i in range(3))


@pytest.mark.parametrize("seed", range(4))
def test_quotient_triples_chain(seed):
    p, q, r = gen_quotient_triple(seed, 3)
    assert check_compliant(p, q) and check_compliant(q, r)
    assert p.rank >= q.rank >= r.rank
    assert p.n == q.n == r.n == 3


def test_perturbed_functions_are_not_certified():
    fs = [perturb_m_func(s, 2) for s in range(20)]
    assert all(f.n == 2 and len(f.values) >= 1 for f in fs)
    # unperturbed draws pass, so a mix of verdicts is expected
    assert {check_m_convex_fn(f) for f in fs} == {True, False}
