"""The brute-force oracles: grid argmax, Monte Carlo votes, peak scans."""

import math

import pytest

from polarsolve import (
    ModelParams,
    PlatformPair,
    SpanTooSmallError,
    expected_utility_L,
    grid_best_response,
    mc_win_probability,
    peak_scan,
    solve_symmetric,
    win_probability_L,
)

# A genuinely bimodal instance found by random search below the
# unimodality bound; frozen so the scan keeps something real to detect.
BIMODAL_PARAMS = ModelParams(
    w=0.4398517433402567,
    V=2.136124282546395,
    sigma_i=0.1438368691369653,
    sigma_v=0.012536064968401543,
    mu_i=0.39365526822529884,
    mu_v=0.24990415967877477,
)
BIMODAL_OPPONENT = 0.19196101690418765


def binom_se(p: float, n: int) -> float:
    return math.sqrt(p * (1.0 - p) / n)


@pytest.mark.parametrize("grid_step", [0.0, -1e-4])
def test_grid_rejects_bad_step(baseline, grid_step):
    with pytest.raises(ValueError):
        grid_best_response(0.75, "L", baseline, grid_step=grid_step)


def test_grid_rejects_empty_span(baseline):
    with pytest.raises(ValueError):
        grid_best_response(0.75, "L", baseline, span=(1.0, 1.0))
    with pytest.raises(ValueError):
        grid_best_response(0.75, "L", baseline, span=(1.5, -0.5))


def test_grid_rejects_unknown_party(baseline):
    with pytest.raises(ValueError):
        grid_best_response(0.75, "X", baseline)  # type: ignore[arg-type]


def test_grid_finds_the_symmetric_best_response(baseline):
    p_star = solve_symmetric(baseline).platforms.p_L
    got = grid_best_response(1.0 - p_star, "L", baseline, grid_step=1e-4)
    assert abs(got - p_star) <= 1e-4


def test_grid_refinement_converges(baseline):
    coarse = grid_best_response(0.75, "L", baseline, grid_step=1e-3)
    fine = grid_best_response(0.75, "L", baseline, grid_step=1e-4)
    assert abs(coarse - fine) <= 1e-3


def test_grid_argmax_is_interior_maximum(baseline):
    step = 1e-4
    x = grid_best_response(0.9, "L", baseline, grid_step=step)
    mid = expected_utility_L(PlatformPair(x, 0.9), baseline)
    assert mid >= expected_utility_L(PlatformPair(x - step, 0.9), baseline)
    assert mid >= expected_utility_L(PlatformPair(x + step, 0.9), baseline)


def test_grid_edge_argmax_raises(baseline):
    # the true best response to 0.9 is near 0.23, outside this window,
    # so the windowed scan must refuse rather than clip
    with pytest.raises(SpanTooSmallError):
        grid_best_response(0.9, "L", baseline, grid_step=1e-3, span=(0.9, 1.1))


def test_mc_rejects_small_samples(baseline):
    with pytest.raises(ValueError):
        mc_win_probability(PlatformPair(0.3, 0.7), baseline, 9_999, seed=1)


def test_mc_is_bit_reproducible(baseline):
    pp = PlatformPair(0.3, 0.7)
    a = mc_win_probability(pp, baseline, 50_000, seed=7)
    b = mc_win_probability(pp, baseline, 50_000, seed=7)
    assert a == b
    c = mc_win_probability(pp, baseline, 50_000, seed=8)
    assert c != a  # different stream, almost surely a different count


def test_mc_batching_is_invisible(baseline):
    # 600_000 spans three internal batches; the count must not depend on
    # whether the caller could have drawn it in one go
    pp = PlatformPair(0.2, 0.9)
    est = mc_win_probability(pp, baseline, 600_000, seed=11)
    exact = win_probability_L(pp, baseline)
    assert abs(est - exact) <= 3.0 * binom_se(exact, 600_000)


def test_mc_even_odds_at_symmetric_profile(baseline):
    est = mc_win_probability(PlatformPair(0.25, 0.75), baseline, 200_000, seed=3)
    assert abs(est - 0.5) <= 3.0 * binom_se(0.5, 200_000)


def test_mc_matches_reduced_form_without_ideology():
    # w=0 silences the ideology channel; the margin is 0.25 sigma and
    # the win probability is the normal CDF there, about 0.5987
    params = ModelParams(w=0.0)
    pp = PlatformPair(0.5, 1.0)
    exact = win_probability_L(pp, params)
    assert exact == pytest.approx(0.5987063256829237, rel=1e-12)
    est = mc_win_probability(pp, params, 400_000, seed=5)
    assert abs(est - exact) <= 3.0 * binom_se(exact, 400_000)


def test_mc_matches_reduced_form_in_heavy_ideology_tail():
    params = ModelParams(w=1000.0, mu_i=0.6, sigma_i=0.02, sigma_v=1.0)
    pp = PlatformPair(0.3, 0.7)
    exact = win_probability_L(pp, params)  # ~2.9e-7: a 5-sigma election
    est = mc_win_probability(pp, params, 1_000_000, seed=13)
    assert abs(est - exact) <= 3.0 * binom_se(exact, 1_000_000)


def test_peak_scan_rejects_coarse_grids(baseline):
    with pytest.raises(ValueError):
        peak_scan(0.75, "L", baseline, grid_step=2e-3)


def test_peak_scan_unimodal_at_baseline(baseline, rng):
    for _ in range(50):
        opp = float(rng.uniform(0.0, 1.0))
        party = "L" if rng.uniform() < 0.5 else "R"
        verdict = peak_scan(opp, party, baseline)
        assert verdict.unimodal, (opp, party, verdict)
        assert verdict.n_local_maxima == 1


def test_peak_scan_unimodal_just_above_the_bound():
    params = ModelParams(w=1.0, sigma_v=0.15)
    for opp in (0.2, 0.5, 0.8):
        assert peak_scan(opp, "L", params).unimodal
        assert peak_scan(opp, "R", params).unimodal


def test_peak_scan_detects_bimodality_below_the_bound():
    verdict = peak_scan(BIMODAL_OPPONENT, "L", BIMODAL_PARAMS)
    assert not verdict.unimodal
    assert verdict.n_local_maxima >= 2


def test_peak_scan_finer_grid_confirms_the_fixture():
    verdict = peak_scan(BIMODAL_OPPONENT, "L", BIMODAL_PARAMS, grid_step=5e-4)
    assert verdict.n_local_maxima >= 2
