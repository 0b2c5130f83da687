import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as O
from moran2locus import model as M
from moran2locus.model import Parameters, PopulationState, SimplexPoint, SubtypeLedger

warnings.filterwarnings("ignore", message="N=.* is odd")

PARAM_SETS = [(0.01, 0.1, 0.3), (0.2, 0.5, 0.9), (0.0, 0.25, 0.0), (1e-4, 0.05, 0.5)]


def params(n, mu=0.01, s=0.1, r=0.3):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return Parameters(n, mu, s, r)


@st.composite
def states(draw, nmax=10_000):
    n = draw(st.integers(2, nmax))
    cuts = sorted(draw(st.lists(st.integers(0, n), min_size=3, max_size=3)))
    x = (cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], n - cuts[2])
    return PopulationState(*x)


model_params = st.tuples(
    st.floats(0.0, 0.5, exclude_max=True),
    st.floats(1e-6, 0.5),
    st.floats(0.0, 0.99),
)


# ---------------------------------------------------------------------------
# Parameters and states


def test_parameter_validation():
    with pytest.raises(ValueError):
        Parameters(1, 0.1, 0.1)
    with pytest.raises(ValueError):
        Parameters(10, 1.0, 0.1)
    with pytest.raises(ValueError):
        Parameters(10, 0.1, 0.6)
    with pytest.raises(ValueError):
        Parameters(10, 0.1, 0.0)
    with pytest.raises(ValueError):
        Parameters(10, 0.1, 0.1, 1.0)
    with pytest.raises(ValueError):
        Parameters(10.5, 0.1, 0.1)


def test_odd_n_warns_but_is_accepted():
    with pytest.warns(UserWarning):
        p = Parameters(7, 0.1, 0.1)
    assert p.N == 7


def test_power_law_parameters():
    p = Parameters.from_power_law(10 ** 6, 0.8, 0.5, 0.2)
    assert p.mu == pytest.approx(10 ** -4.8)
    assert p.r == pytest.approx(10 ** -3)
    assert p.s == pytest.approx(10 ** -1.2)


def test_population_state_invariants():
    with pytest.raises(ValueError):
        PopulationState(-1, 2, 0, 0)
    state = PopulationState(5, 3, 1, 1)
    with pytest.raises(ValueError):
        state.check(params(12))
    xi = state.fractions()
    assert (xi.xi0, xi.xi1, xi.xi2, xi.xi3) == pytest.approx((0.5, 0.3, 0.1, 0.1))
    assert xi.is_valid()


# ---------------------------------------------------------------------------
# channel rates


def test_rates_match_individual_oracle_exhaustively():
    for n, counts in O.all_states_up_to(6):
        for mu, s, r in PARAM_SETS:
            got = M.channel_rates(PopulationState(*counts), params(n, mu, s, r)).as_array()
            ref = O.individual_rates(counts, mu, s, r)
            want = np.array([ref[ch] for ch in O.CHANNELS])
            np.testing.assert_allclose(got, want, rtol=1e-12, atol=0.0)


def test_channel_order_matches_jumps():
    for k, (src, dst) in enumerate(O.CHANNELS):
        jump = np.zeros(4, dtype=int)
        jump[src] -= 1
        jump[dst] += 1
        np.testing.assert_array_equal(M.CHANNEL_JUMPS[k], jump)


def test_all_type0_rates():
    n, mu = 100, 0.01
    rates = M.channel_rates(PopulationState.all_type(0, n), params(n, mu, 0.1, 0.3))
    arr = rates.as_array()
    assert arr[0] == pytest.approx(mu * n) and arr[1] == pytest.approx(mu * n)
    assert np.all(arr[2:] == 0.0)
    assert rates.total == pytest.approx(2 * mu * n)


def test_all_type1_rates():
    n, mu = 100, 0.01
    arr = M.channel_rates(PopulationState.all_type(1, n), params(n, mu, 0.1, 0.3)).as_array()
    assert arr[5] == pytest.approx(mu * n)
    assert np.count_nonzero(arr) == 1


def test_all_type3_is_absorbing():
    rates = M.channel_rates(PopulationState.all_type(3, 50), params(50, 0.1, 0.2, 0.5))
    assert rates.total == 0.0


@settings(max_examples=300, deadline=None)
@given(states(), model_params)
def test_rates_nonnegative_and_total(state, mps):
    mu, s, r = mps
    rates = M.channel_rates(state, params(state.n, mu, s, r))
    arr = rates.as_array()
    assert np.all(arr >= 0) and np.all(np.isfinite(arr))
    assert rates.total == pytest.approx(arr.sum(), rel=1e-15, abs=0)
    for k, (src, _) in enumerate(O.CHANNELS):
        if state.counts[src] == 0:
            assert arr[k] == 0.0


@settings(max_examples=200, deadline=None)
@given(states(), st.floats(0.0, 0.99))
def test_replacement_probabilities_sum_to_one(state, r):
    f = M.replacement_probabilities(state.fractions(), r)
    assert np.all(f >= -1e-15)
    assert f.sum() == pytest.approx(1.0, abs=1e-14)


# ---------------------------------------------------------------------------
# drift and noise


def _net_rates(state, p):
    rates = M.channel_rates(state, p).as_array()
    return M.CHANNEL_JUMPS.T @ rates, rates.sum()


def test_drift_identity_exhaustive_small_n():
    for n, counts in O.all_states_up_to(6):
        for mu, s, r in PARAM_SETS:
            p = params(n, mu, s, r)
            state = PopulationState(*counts)
            net, total = _net_rates(state, p)
            beta = M.drift(state.fractions(), p)
            np.testing.assert_allclose(n * beta, net[1:], rtol=1e-12, atol=1e-12 * max(total, 1))


@settings(max_examples=1000, deadline=None)
@given(states(), model_params)
def test_drift_identity_random_states(state, mps):
    mu, s, r = mps
    p = params(state.n, mu, s, r)
    net, total = _net_rates(state, p)
    beta = M.drift(state.fractions(), p)
    np.testing.assert_allclose(state.n * beta, net[1:], rtol=1e-12, atol=1e-12 * max(total, 1))


def test_drift_at_vertices():
    p0 = params(10, 0.0, 0.2, 0.5)
    np.testing.assert_array_equal(M.drift(SimplexPoint(0, 0, 0), p0), 0.0)
    p = params(10, 0.05, 0.2, 0.5)
    np.testing.assert_allclose(M.drift(SimplexPoint(0, 0, 0), p), [0.05, 0.05, 0.0])
    np.testing.assert_array_equal(M.drift(SimplexPoint(0, 0, 1), p), 0.0)


def test_noise_bound_value():
    assert M.noise_bound(params(48)) == 1.0


def test_noise_exhaustive_below_bound():
    for n, counts in O.all_states_up_to(6):
        for mu, s, r in PARAM_SETS:
            p = params(n, mu, s, r)
            assert M.noise(PopulationState(*counts), p) <= M.noise_bound(p)


@settings(max_examples=300, deadline=None)
@given(states(), model_params)
def test_noise_below_bound(state, mps):
    p = params(state.n, *mps)
    assert M.noise(state, p) <= M.noise_bound(p)


def test_noise_all_type0():
    # two channels of rate mu*N each, jump norm^2 = 1/N^2
    n, mu = 40, 0.01
    assert M.noise(PopulationState.all_type(0, n), params(n, mu)) == pytest.approx(2 * mu / n)


# ---------------------------------------------------------------------------
# growth rates


def test_growth_rates_all_type0():
    s, r, mu = 0.1, 0.01, 0.001
    g0, g1, g2, g3 = M.growth_rates(PopulationState.all_type(0, 100), params(100, mu, s, r))
    assert g1 == pytest.approx(s - mu) and g2 == pytest.approx(s - mu)
    # the recombination loss r * xi0 is present at xi0 = 1
    assert g3 == pytest.approx(2 * s - r)
    assert M.growth_rates(PopulationState.all_type(0, 100), params(100, mu, s, 0.0))[3] == \
        pytest.approx(2 * s)


def test_growth_rate_g0_all_type3():
    s, r, mu = 0.1, 0.02, 0.001
    g0 = M.growth_rates(PopulationState.all_type(3, 100), params(100, mu, s, r))[0]
    assert g0 == pytest.approx(-2 * s - r * (1 - 2 * s) - 2 * mu)


def test_growth_rates_match_subtype_birth_minus_death():
    # G1 = B1m - D1m evaluated on a 1m lineage of vanishing size
    n = 1000
    state = PopulationState(600, 200, 150, 50)
    mu, s, r = 0.002, 0.1, 0.05
    ledger = SubtypeLedger(600, 0, 200, 0, 150, 0, 50, 0)
    ref = O.closed_form_subtype_rates(state.counts, {"1m": 0, "3m": 0, "1r": 0, "2r": 0, "3r": 0,
                                               "0r": 0}, mu, s, r)
    g = M.growth_rates(state, params(n, mu, s, r))
    assert g[1] == pytest.approx(ref["B1m"] - ref["D1m"], rel=1e-12)
    assert g[3] == pytest.approx(ref["B3m"] - ref["D3m"], rel=1e-12)
    assert ledger.type_counts() == state.counts


@settings(max_examples=300, deadline=None)
@given(st.integers(100, 10 ** 6), st.floats(1e-4, 1 / 16), st.floats(0, 1), st.floats(0, 1),
       st.floats(0, 1), model_params)
def test_growth_lemma_bounds(n, eta, u1, u2, u3, mps):
    mu, s, r = mps
    x1, x2, x3 = (int(u * eta * n) for u in (u1, u2, u3))
    state = PopulationState(n - x1 - x2 - x3, x1, x2, x3)
    _, g1, g2, g3 = M.growth_rates(state, params(n, mu, s, r))
    tol = 1e-12
    assert s - 4 * eta * s - r - mu - tol <= g1 <= s + tol
    assert s - 4 * eta * s - r - mu - tol <= g2 <= s + tol
    assert 2 * s - 4 * eta * s - r - tol <= g3 <= 2 * s + tol


# ---------------------------------------------------------------------------
# subtype rates


@st.composite
def ledgers(draw, nmax=60):
    n = draw(st.integers(2, nmax))
    cuts = sorted(draw(st.lists(st.integers(0, n), min_size=7, max_size=7)))
    parts = np.diff([0, *cuts, n])
    ledger = SubtypeLedger(*(int(v) for v in parts))
    return PopulationState(*ledger.type_counts()), ledger


@settings(max_examples=300, deadline=None)
@given(ledgers(), model_params)
def test_subtype_rates_collapse(pair, mps):
    state, ledger = pair
    p = params(state.n, *mps)
    collapsed = M.subtype_channel_rates(state, ledger, p).collapse().as_array()
    direct = M.channel_rates(state, p).as_array()
    np.testing.assert_allclose(collapsed, direct, rtol=1e-12, atol=1e-13)


@settings(max_examples=300, deadline=None)
@given(ledgers(), model_params)
def test_subtype_rates_match_closed_forms(pair, mps):
    state, ledger = pair
    mu, s, r = mps
    n = state.n
    p = params(n, mu, s, r)
    rates = M.subtype_channel_rates(state, ledger, p)
    cls = dict(zip(M.CLASS_NAMES, ledger.as_array().tolist()))
    ref = O.closed_form_subtype_rates(state.counts, cls, mu, s, r)
    i1m, i3m = M.CLASS_NAMES.index("1m"), M.CLASS_NAMES.index("3m")
    for name in ("M1", "M3", "R0", "R1", "R2", "R3"):
        assert rates.founders[name] == pytest.approx(ref[name], rel=1e-12, abs=1e-12)
    # births of 1m: mutation founders plus per-capita reproduction
    assert rates.births[i1m] == pytest.approx(ref["M1"] + ref["B1m"] * cls["1m"], rel=1e-12,
                                              abs=1e-12)
    assert rates.deaths[i1m] == pytest.approx(ref["D1m"] * cls["1m"], rel=1e-12, abs=1e-12)
    assert rates.births[i3m] == pytest.approx(ref["M3"] + ref["B3m"] * cls["3m"], rel=1e-12,
                                              abs=1e-12)
    assert rates.deaths[i3m] == pytest.approx(ref["D3m"] * cls["3m"], rel=1e-12, abs=1e-12)


def test_no_type3_means_no_1r_2r_founders():
    state = PopulationState(5, 3, 2, 0)
    ledger = SubtypeLedger.from_state(state)
    f = M.subtype_channel_rates(state, ledger, params(10, 0.01, 0.1, 0.5)).founders
    assert f["R1"] == 0.0 and f["R2"] == 0.0


def test_no_type1_or_2_means_no_3r_0r_founders():
    state = PopulationState(5, 0, 0, 5)
    ledger = SubtypeLedger.from_state(state)
    f = M.subtype_channel_rates(state, ledger, params(10, 0.01, 0.1, 0.5)).founders
    assert f["R3"] == 0.0 and f["R0"] == 0.0


def test_inconsistent_ledger_rejected():
    state = PopulationState(5, 3, 2, 0)
    with pytest.raises(M.InvalidLedgerError):
        M.subtype_channel_rates(state, SubtypeLedger(5, 0, 2, 0, 2, 0, 1, 0), params(10))
    with pytest.raises(M.InvalidLedgerError):
        SubtypeLedger(6, -1, 3, 0, 2, 0, 0, 0).check(state)


def test_channel_rates_thread_safe():
    from concurrent.futures import ThreadPoolExecutor

    p = params(1000, 0.001, 0.1, 0.2)
    sts = [PopulationState(1000 - 3 * k, k, k, k) for k in range(200)]
    serial = [M.channel_rates(x, p).as_array() for x in sts]
    with ThreadPoolExecutor(4) as pool:
        par = list(pool.map(lambda x: M.channel_rates(x, p).as_array(), sts))
    for a, b in zip(serial, par):
        np.testing.assert_array_equal(a, b)


def test_ln_plus():
    assert M.ln_plus(0.5) == 0.0 and M.ln_plus(1.0) == 0.0
    assert M.ln_plus(math.e) == pytest.approx(1.0)
