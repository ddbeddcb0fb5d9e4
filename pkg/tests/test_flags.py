import pytest

from src.flags.flags import check_flag, complete_flag, is_consecutive, is_mnat_flag, mnat_completion
from src.lattice.errors import UsageError


@pytest.fixture
def chain(fx):
    return list(fx("flag_chain"))


def test_shipped_chain_is_a_flag(chain, fx):
    assert [S.rank for S in chain] == [2, 4, 6]
    assert chain == [fx("flag_R"), fx("flag_Q"), fx("flag_P")]
    assert check_flag(chain)
    assert not is_consecutive(chain)


def test_reversed_chain_is_not_a_flag(chain):
    assert not check_flag(list(reversed(chain)))


def test_completion_fills_missing_ranks(chain, fx):
    full = complete_flag(chain)
    expected = ["flag_R", "flag_Q_prime", "flag_Q", "flag_P_prime", "flag_P"]
    assert [S.points for S in full] == [fx(name).points for name in expected]
    assert is_consecutive(full)
    assert check_flag(full)
    assert not is_mnat_flag(full)


def test_mnat_completion(chain, fx):
    canonical = mnat_completion(complete_flag(chain))
    expected = ["flag_R", "flag_Q_prime", "flag_Q_tilde", "flag_P_prime", "flag_P"]
    assert [S.points for S in canonical] == [fx(name).points for name in expected]
    assert is_mnat_flag(canonical)


def test_layers_of_an_mnat_set_form_a_flag(fx):
    layers = fx("running_projection").layers()
    assert check_flag(layers)
    assert is_consecutive(layers)
    assert is_mnat_flag(layers)
    assert mnat_completion(layers) == layers


def test_errors(chain):
    with pytest.raises(UsageError):
        check_flag([])
    with pytest.raises(UsageError, match="consecutive"):
        mnat_completion(chain)
    with pytest.raises(UsageError, match="not a flag"):
        complete_flag(list(reversed(chain)))
