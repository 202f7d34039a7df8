import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from primecorr.weights import (
    POINTWISE,
    WeightKind,
    build_weight_table,
    master_weight,
    truncated_von_mangoldt,
    von_mangoldt,
)


@pytest.mark.parametrize(
    "n, expected", [(8, math.log(2)), (6, 0.0), (1, 0.0), (9, math.log(3)), (7, math.log(7))]
)
def test_von_mangoldt(small, n, expected):
    assert von_mangoldt(small[0], n) == pytest.approx(expected, abs=1e-15)


def test_von_mangoldt_value_at_8(small):
    assert von_mangoldt(small[0], 8) == pytest.approx(0.693147, abs=1e-6)


@pytest.mark.parametrize("n, expected", [(7, 1.945910), (8, 0.0), (1, 0.0), (2, 0.693147)])
def test_truncated(small, n, expected):
    assert truncated_von_mangoldt(small[0], n) == pytest.approx(expected, abs=1e-6)


@pytest.mark.parametrize(
    "n, expected",
    [(9, 1.098612), (6, 1.791759), (8, 0.0), (4, 0.693147), (1, 0.0), (30, 0.0), (49, math.log(7))],
)
def test_master_weight(small, n, expected):
    assert master_weight(small[0], n) == pytest.approx(expected, abs=1e-6)


def test_master_weight_prime_square_is_log_p_not_log_n(small):
    t, _ = small
    for p in (2, 3, 5, 7, 97):
        assert master_weight(t, p * p) == pytest.approx(math.log(p))
        assert master_weight(t, p * p) != pytest.approx(math.log(p * p))


@pytest.mark.parametrize("fn", [von_mangoldt, truncated_von_mangoldt, master_weight])
def test_pointwise_range(small, fn):
    with pytest.raises(ValueError):
        fn(small[0], 0)
    with pytest.raises(ValueError):
        fn(small[0], small[0].limit + 1)


@pytest.mark.parametrize(
    "kind, support",
    [
        (WeightKind.MASTER, [4, 6, 9, 10]),
        (WeightKind.TRUNCATED, [2, 3, 5, 7]),
        (WeightKind.VON_MANGOLDT, [2, 3, 4, 5, 7, 8, 9]),
    ],
)
def test_table_support_up_to_10(small, kind, support):
    f = build_weight_table(small[0], kind, 10)
    assert f.support.tolist() == support
    assert f.values[0] == f.values[1] == 0.0
    assert f.limit == 10


def test_table_limit_checked(small):
    with pytest.raises(ValueError):
        build_weight_table(small[0], WeightKind.MASTER, small[0].limit + 1)


@pytest.mark.parametrize("kind", list(WeightKind))
def test_table_matches_pointwise_exhaustively(t6, w6, kind):
    values = w6[kind].values
    fn = POINTWISE[kind]
    for n in range(1, 10**5 + 1):
        assert values[n] == fn(t6, n)


@pytest.mark.parametrize(
    "kind, fn", [(WeightKind.VON_MANGOLDT, oracles.lam), (WeightKind.TRUNCATED, oracles.lam0), (WeightKind.MASTER, oracles.ups)]
)
def test_table_matches_trial_division(small, kind, fn):
    t, w = small
    assert w[kind].values.tolist() == pytest.approx([fn(n) for n in range(t.limit + 1)], abs=0)


def test_support_characterisation(t6, w6):
    n = np.arange(10**5 + 1)
    omega = t6.omega[: n.size]
    lam = w6[WeightKind.VON_MANGOLDT].values[: n.size]
    lam0 = w6[WeightKind.TRUNCATED].values[: n.size]
    ups = w6[WeightKind.MASTER].values[: n.size]
    spf = t6.spf[: n.size].astype(np.int64)
    prime_power = np.zeros(n.size, dtype=bool)
    for k in range(1, 18):
        prime_power |= (spf**k == n) & (n >= 2)
    assert np.array_equal(lam > 0, prime_power)
    assert np.array_equal(lam0 > 0, t6.is_prime[: n.size])
    assert np.array_equal(ups > 0, omega == 2)
    assert np.all(lam >= lam0)
    assert np.all(lam0 * ups == 0)
    assert np.all(ups >= 0)


def test_chebyshev_sanity(w6):
    psi = math.fsum(w6[WeightKind.VON_MANGOLDT].values.tolist())
    assert 0.8 <= psi / 10**6 <= 1.2


@given(st.integers(2, 10**6))
def test_omega2_support_property(t6, w6, n):
    assert (w6[WeightKind.MASTER].values[n] > 0) == (t6.omega[n] == 2)
