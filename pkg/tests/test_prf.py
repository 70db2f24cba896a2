import pytest
from hypothesis import given
from hypothesis import strategies as st

from idchain.crypto.groups import G1, ORDER, Scalar
from idchain.crypto.rand import SeededRng
from idchain.errors import DegenerateKey
from idchain.prf import check_index, prf_eval, sample_key

keys = st.integers(min_value=1, max_value=2**128 - 1)


@given(keys, st.integers(1, 64))
def test_regid_is_inverse_exponent(k, x):
    rid = prf_eval(k, x)
    # defining relation (K + x) * RegID = g1, checked without calling the inverse
    assert rid * (k + x) == G1.generator()


@given(keys)
def test_indices_give_distinct_regids(k):
    rids = {prf_eval(k, x).encode() for x in range(1, 6)}
    assert len(rids) == 5


def test_different_keys_differ():
    assert prf_eval(1000, 1) != prf_eval(1001, 1)


def test_degenerate_key_rejected():
    with pytest.raises(DegenerateKey):
        prf_eval(ORDER - 3, 3)


def test_accepts_scalar_keys():
    assert prf_eval(Scalar(77), 2) == prf_eval(77, 2)


def test_sample_key_bits():
    rng = SeededRng(9)
    for _ in range(50):
        k = int(sample_key(rng))
        assert 0 < k < 2**128


@pytest.mark.parametrize("x,ok", [(0, False), (1, True), (3, True), (4, False), (-1, False)])
def test_check_index(x, ok):
    assert check_index(x, 3) is ok
