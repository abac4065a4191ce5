"""Lead-chain tests: hand-computed rows, path enumeration, Monte Carlo cross-checks."""

import itertools
import math

import numpy as np
import pytest

import scoredyn as sd

NBA_PMF = {1: 0.0941, 2: 0.7373, 3: 0.1647, 4: 0.0029, 5: 0.0009, 6: 0.0001}


def fair_phi(cap):
    return np.full(2 * cap + 1, 0.5)


def enumerate_unit_walk(start: int, n_steps: int, cap: int):
    """Exhaustive path enumeration for a fair unit-step walk with clamping.

    Independent oracle for chain forecasts: iterates all 2^n equally
    likely sign sequences and tallies final-lead outcomes.
    """
    win = tie = loss = 0.0
    weight = 0.5**n_steps
    for signs in itertools.product((1, -1), repeat=n_steps):
        lead = start
        for s in signs:
            lead = max(min(lead + s, cap), -cap)
        if lead > 0:
            win += weight
        elif lead == 0:
            tie += weight
        else:
            loss += weight
    return win, tie, loss


class TestBuildChain:
    def test_fair_unit_chain_rows(self):
        chain = sd.build_chain(fair_phi(5), {1: 1.0}, 5)
        P = chain.transition
        for lead in range(-4, 5):
            row = lead + 5
            assert P[row, row + 1] == 0.5
            assert P[row, row - 1] == 0.5
        assert np.allclose(P.sum(axis=1), 1.0, atol=1e-12)

    def test_single_value_pmf_is_bidiagonal(self):
        cap = 15
        chain = sd.build_chain(fair_phi(cap), {1: 1.0}, cap)
        P = chain.transition
        for i in range(2 * cap + 1):
            for j in range(2 * cap + 1):
                if abs(i - j) != 1 and not (i == j and i in (0, 2 * cap)):
                    assert P[i, j] == 0.0

    def test_nba_row_at_zero_splits_mass_evenly(self):
        # hand computation: P[0, +-k] = 0.5 * Pr(value = k)
        cap = 100
        chain = sd.build_chain(fair_phi(cap), NBA_PMF, cap)
        row = chain.transition[cap]
        for value, q in NBA_PMF.items():
            assert row[cap + value] == pytest.approx(0.5 * q, abs=1e-15)
            assert row[cap - value] == pytest.approx(0.5 * q, abs=1e-15)
        assert row[cap] == 0.0

    def test_boundary_mass_deposits_at_cap(self):
        cap = 3
        chain = sd.build_chain(fair_phi(cap), {2: 0.5, 3: 0.5}, cap)
        P = chain.transition
        # from lead 2, both +2 and +3 land at the cap
        assert P[cap + 2, 2 * cap] == 0.5
        assert P[cap + 2, cap] == 0.25  # 2 - 2
        assert np.allclose(P.sum(axis=1), 1.0, atol=1e-12)

    def test_cap_below_max_point_value_rejected(self):
        with pytest.raises(ValueError, match="below the maximum point value"):
            sd.build_chain(fair_phi(5), {7: 1.0}, 5)

    def test_reflection_consistency_for_antisymmetric_phi(self):
        cap = 8
        upper = np.linspace(0.5, 0.9, cap + 1)
        phi = np.concatenate([1.0 - upper[:0:-1], upper])
        chain = sd.build_chain(phi, {1: 0.75, 2: 0.25}, cap)
        assert chain.antisymmetric
        P = chain.transition
        for L in range(-cap, cap + 1):
            for Lp in range(-cap, cap + 1):
                assert P[cap - L, cap - Lp] == P[cap + L, cap + Lp]

    def test_general_phi_rows_follow_formula(self):
        cap = 4
        rng = np.random.default_rng(3)
        phi = rng.uniform(0.2, 0.8, 2 * cap + 1)  # not antisymmetric
        chain = sd.build_chain(phi, {1: 1.0}, cap)
        assert not chain.antisymmetric
        for lead in range(-cap + 1, cap):
            row = lead + cap
            assert chain.transition[row, row + 1] == phi[row]
        assert np.allclose(chain.transition.sum(axis=1), 1.0, atol=1e-12)


class TestExpectedRemainingEvents:
    def test_final_second_only(self):
        profile = np.linspace(0, 0.1, 11)
        assert sd.expected_remaining_events(profile, 10) == profile[10]

    def test_flat_profile_from_start(self):
        profile = np.full(11, 0.25)
        assert sd.expected_remaining_events(profile, 0) == pytest.approx(0.25 * 11)

    def test_out_of_range(self):
        profile = np.full(11, 0.25)
        for t in (-1, 11):
            with pytest.raises(ValueError, match="outside"):
                sd.expected_remaining_events(profile, t)

    def test_full_sum_equals_mean_events_for_merged_games(self):
        games = sd.ideal_corpus(sd.builtin_config("nhl"), 0.001, 500, seed=21)
        profile = sd.tempo_profile(games)
        mean_events = np.mean([g.n_events for g in games])
        total = sd.expected_remaining_events(profile, 0)
        assert abs(total - mean_events) <= 1e-12 * max(mean_events, 1.0)


class TestForecast:
    def test_zero_steps_is_indicator(self):
        chain = sd.build_chain(fair_phi(5), {1: 1.0}, 5)
        f = sd.forecast_after_events(chain, 3, 0)
        assert (f.p_win_r, f.p_tie, f.p_win_b) == (1.0, 0.0, 0.0)

    def test_two_steps_from_tie(self):
        # enumeration: 4 equally likely paths from 0 -> {+2, 0, 0, -2}
        chain = sd.build_chain(fair_phi(5), {1: 1.0}, 5)
        f = sd.forecast_after_events(chain, 0, 2)
        assert f.p_win_r == pytest.approx(0.25, abs=1e-15)
        assert f.p_tie == pytest.approx(0.5, abs=1e-15)
        assert f.p_win_b == pytest.approx(0.25, abs=1e-15)

    def test_one_step_from_lead_one(self):
        chain = sd.build_chain(fair_phi(5), {1: 1.0}, 5)
        f = sd.forecast_after_events(chain, 1, 1)
        assert (f.p_win_r, f.p_tie, f.p_win_b) == (0.5, 0.5, 0.0)

    def test_matches_exhaustive_enumeration_up_to_six_steps(self):
        cap = 10
        chain = sd.build_chain(fair_phi(cap), {1: 1.0}, cap)
        for start in (0, 1, -2, 3):
            for n in range(7):
                f = sd.forecast_after_events(chain, start, n)
                win, tie, loss = enumerate_unit_walk(start, n, cap)
                assert abs(f.p_win_r - win) <= 1e-12, (start, n)
                assert abs(f.p_tie - tie) <= 1e-12, (start, n)
                assert abs(f.p_win_b - loss) <= 1e-12, (start, n)

    def test_real_event_counts_round(self):
        chain = sd.build_chain(fair_phi(5), {1: 1.0}, 5)
        f_rounded = sd.forecast_after_events(chain, 0, 2.4)
        f_two = sd.forecast_after_events(chain, 0, 2)
        assert f_rounded == f_two

    def test_forecast_from_profile_time(self):
        cap = 5
        chain = sd.build_chain(fair_phi(cap), {1: 1.0}, cap)
        profile = np.zeros(101)
        profile[50] = 1.0
        profile[80] = 1.0
        f = sd.forecast(chain, 0, 40, profile)  # two events remain
        assert f.p_tie == pytest.approx(0.5, abs=1e-15)

    def test_invalid_inputs(self):
        chain = sd.build_chain(fair_phi(5), {1: 1.0}, 5)
        with pytest.raises(ValueError, match="outside truncation"):
            sd.forecast_after_events(chain, 6, 1)
        with pytest.raises(ValueError, match="finite"):
            sd.forecast_after_events(chain, 0, float("nan"))

    def test_probabilities_sum_to_one_deep(self):
        cap = 20
        upper = 0.5 + 0.4 * np.tanh(np.arange(cap + 1) / 6.0)
        phi = np.concatenate([1.0 - upper[:0:-1], upper])
        chain = sd.build_chain(phi, {1: 0.6, 2: 0.3, 3: 0.1}, cap)
        for lead in (-20, -3, 0, 5, 20):
            for n in (0, 1, 7, 50, 200):
                f = sd.forecast_after_events(chain, lead, n)
                assert abs(f.p_win_r + f.p_tie + f.p_win_b - 1.0) <= 1e-9

    def test_mirror_symmetry_exact(self):
        rng = np.random.default_rng(8)
        cap = 9
        upper = np.concatenate([[0.5], np.clip(0.5 + np.cumsum(rng.uniform(0, 0.04, cap)), 0, 1)])
        phi = np.concatenate([1.0 - upper[:0:-1], upper])
        chain = sd.build_chain(phi, {1: 0.7, 3: 0.3}, cap)
        for lead in range(0, cap + 1):
            for n in (0, 1, 4, 9):
                f_pos = sd.forecast_after_events(chain, lead, n)
                f_neg = sd.forecast_after_events(chain, -lead, n)
                assert f_pos.p_win_r == f_neg.p_win_b
                assert f_pos.p_win_b == f_neg.p_win_r
                assert f_pos.p_tie == f_neg.p_tie

    def test_win_probability_monotone_in_lead_for_monotone_phi(self):
        cap = 6
        phi = np.clip(0.5 + 0.05 * np.arange(-cap, cap + 1), 0.0, 1.0)
        chain = sd.build_chain(phi, {1: 1.0}, cap)
        for n in (1, 4, 8):
            values = [sd.forecast_after_events(chain, L, n).p_win_r for L in range(-cap, cap + 1)]
            assert np.all(np.diff(values) >= -1e-12)

    def test_chain_matches_monte_carlo_for_nba_like_model(self):
        # independent MC oracle for the same truncated process
        cap = 100
        leads_grid = np.arange(-cap, cap + 1)
        phi = 0.5 - 0.002 * leads_grid
        chain = sd.build_chain(phi, NBA_PMF, cap)
        start, steps, n_runs = 5, 30, 100_000
        f = sd.forecast_after_events(chain, start, steps)

        rng = np.random.default_rng(77)
        support = np.array(sorted(NBA_PMF))
        probs = np.array([NBA_PMF[v] for v in support])
        lead = np.full(n_runs, start)
        for _ in range(steps):
            p_up = phi[lead + cap]
            sign = np.where(rng.random(n_runs) < p_up, 1, -1)
            values = rng.choice(support, size=n_runs, p=probs)
            lead = np.clip(lead + sign * values, -cap, cap)
        for observed, exact in (
            ((lead > 0).mean(), f.p_win_r),
            ((lead == 0).mean(), f.p_tie),
            ((lead < 0).mean(), f.p_win_b),
        ):
            assert abs(observed - exact) < 3 * math.sqrt(exact * (1 - exact) / n_runs)


class TestLeaderWins:
    def test_positive_lead(self):
        assert sd.leader_wins(3) == "r"

    def test_negative_lead(self):
        assert sd.leader_wins(-1) == "b"

    def test_tie_abstains(self):
        assert sd.leader_wins(0) is None


def fixed_time_game(game_id, signs, times, points=None):
    points = points if points is not None else np.ones(len(signs), dtype=int)
    return sd.GameLog(game_id, "custom", times, signs, points)


class TestEvaluatePredictability:
    def test_first_scorer_always_wins(self):
        cfg = sd.SportConfig("custom", 600, (600,), {1: 1.0}, 10)
        games = []
        for i in range(100):
            sign = 1 if i % 2 == 0 else -1
            games.append(fixed_time_game(f"g{i}", [sign] * 3, [50, 150, 250]))
        curve = sd.evaluate_predictability(games, cfg, n_splits=4, seed=3, min_fit_samples=1)
        assert curve.auc_chain[0] == 1.0
        assert curve.auc_leader[0] == 1.0

    def test_fair_unit_corpus_accuracy_matches_enumeration(self):
        # oracle: after event 1 the leader is +-1 with 4 fair unit steps
        # remaining; P(leader holds on) enumerates to 11/16
        win, tie, loss = enumerate_unit_walk(1, 4, cap=50)
        assert tie == 0.0
        expected = win
        assert expected == pytest.approx(11 / 16)

        cfg = sd.SportConfig("custom", 600, (600,), {1: 1.0}, 50)
        rng = np.random.default_rng(12)
        games = [
            fixed_time_game(
                f"g{i}", np.where(rng.random(5) < 0.5, 1, -1), [100, 200, 300, 400, 500]
            )
            for i in range(800)
        ]
        curve = sd.evaluate_predictability(games, cfg, n_splits=4, seed=5, min_fit_samples=20)
        n_scored = curve.n_games_scored[0]
        se = math.sqrt(expected * (1 - expected) / n_scored)
        assert abs(curve.auc_chain[0] - expected) < 3 * se

    def test_all_test_games_tied_rejected(self):
        cfg = sd.SportConfig("custom", 600, (600,), {1: 1.0}, 10)
        games = [fixed_time_game(f"g{i}", [1, -1], [100, 200]) for i in range(40)]
        with pytest.raises(ValueError, match="tied"):
            sd.evaluate_predictability(games, cfg, n_splits=2, seed=1, min_fit_samples=1)

    def test_half_credit_mode_keeps_ties(self):
        cfg = sd.SportConfig("custom", 600, (600,), {1: 1.0}, 10)
        games = [fixed_time_game(f"g{i}", [1, -1], [100, 200]) for i in range(40)]
        curve = sd.evaluate_predictability(
            games, cfg, n_splits=2, seed=1, min_fit_samples=1, tie_mode="half"
        )
        assert np.all(curve.auc_chain == 0.5)
        assert np.all(curve.auc_leader == 0.5)

    def test_chain_dominates_leader_on_skill_league(self):
        spec = sd.default_league(n_teams=10, n_games=600, regulation_length=1200,
                                 rate=0.006, skill_sigma=1.2, seed=31)
        games = sd.generate_league(spec)
        cfg = sd.league_config(spec, lead_cap=25)
        curve = sd.evaluate_predictability(games, cfg, n_splits=5, seed=7)
        assert np.all(curve.auc_chain >= curve.auc_leader - 1e-12)
        assert curve.auc_chain[-1] >= 0.9
