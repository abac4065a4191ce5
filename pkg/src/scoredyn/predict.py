"""Outcome prediction via an explicit Markov chain on the lead size.

The chain's states are the integer leads -cap..+cap (relative to team
r). A scoring event worth k points moves lead L to L + k when r wins it
and to L - k otherwise, so with winner and value independent,

    P[L, L+k] = phi(L) * Pr(value = k)
    P[L, L-k] = (1 - phi(L)) * Pr(value = k),

with transitions past the boundary depositing at +-cap. Forecasts
propagate an indicator vector at the current lead through P once per
expected remaining event, where the expected remaining events from
clock second t is the sum of the per-second tempo profile over [t, T].

Prediction quality is evaluated out of sample: on each random split the
model is refitted on 3/4 of the games, and on the held-out quarter the
winner is predicted after every scoring event. The mean fraction of
correct predictions per cumulative event index (the AUC in the sense
used throughout this package, 0.5 = chance) is compared against the
leader-wins heuristic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import (
    PMF_TOLERANCE,
    TEAM_B,
    TEAM_R,
    GameLog,
    SportConfig,
    config_for_games,
)
from .estimate import (
    lead_scoring_function,
    point_value_distribution,
    tempo_profile,
)


@dataclass(frozen=True, eq=False)
class LeadChain:
    """Row-stochastic transition matrix over integer lead sizes.

    `antisymmetric` records whether phi satisfied phi(-L) = 1 - phi(L)
    exactly at build time; such chains are mirror-symmetric
    (P[-L, -L'] = P[L, L']) bit for bit by construction.
    """

    cap: int
    transition: np.ndarray
    phi: np.ndarray
    point_values: Mapping[int, float]
    antisymmetric: bool

    def __post_init__(self) -> None:
        for name in ("transition", "phi"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def states(self) -> np.ndarray:
        return np.arange(-self.cap, self.cap + 1)

    def state_index(self, lead: int) -> int:
        if abs(lead) > self.cap:
            raise ValueError(f"lead {lead} outside truncation +-{self.cap}")
        return int(lead) + self.cap


@dataclass(frozen=True)
class OutcomeForecast:
    """Probabilities that r wins, the game ties, and b wins."""

    p_win_r: float
    p_tie: float
    p_win_b: float

    def __post_init__(self) -> None:
        total = self.p_win_r + self.p_tie + self.p_win_b
        if min(self.p_win_r, self.p_tie, self.p_win_b) < -PMF_TOLERANCE:
            raise ValueError("forecast probabilities must be nonnegative")
        if abs(total - 1.0) > PMF_TOLERANCE:
            raise ValueError(f"forecast probabilities sum to {total}, expected 1")

    def as_array(self) -> np.ndarray:
        return np.array([self.p_win_r, self.p_tie, self.p_win_b])

    def swapped(self) -> OutcomeForecast:
        return OutcomeForecast(self.p_win_b, self.p_tie, self.p_win_r)


def _validated_pmf(point_values: Mapping[int, float]) -> list[tuple[int, float]]:
    items = sorted((int(v), float(p)) for v, p in point_values.items())
    if not items or any(v < 1 for v, _ in items):
        raise ValueError("point values must be positive integers")
    if any(p < 0 for _, p in items):
        raise ValueError("point value probabilities must be nonnegative")
    total = sum(p for _, p in items)
    if abs(total - 1.0) > PMF_TOLERANCE:
        raise ValueError(f"point value probabilities sum to {total}, expected 1")
    return items


def build_chain(
    phi: np.ndarray | Sequence[float],
    point_values: Mapping[int, float],
    cap: int,
) -> LeadChain:
    """Build the lead-size transition matrix from phi and the value pmf.

    `phi` must cover the grid -cap..+cap (length 2*cap + 1). When phi is
    exactly antisymmetric, rows for negative leads are constructed by
    reflecting the positive rows, which makes the chain's mirror
    symmetry hold to the last bit.
    """
    phi = np.asarray(phi, dtype=float)
    if len(phi) != 2 * cap + 1:
        raise ValueError(f"phi must have {2 * cap + 1} entries for cap {cap}")
    if np.any(phi < 0) or np.any(phi > 1):
        raise ValueError("phi entries must be probabilities")
    items = _validated_pmf(point_values)
    max_value = items[-1][0]
    if cap < max_value:
        raise ValueError(f"cap {cap} is below the maximum point value {max_value}")

    m = 2 * cap + 1
    P = np.zeros((m, m))

    def fill_row(lead: int) -> None:
        row = lead + cap
        up = phi[row]
        down = 1.0 - up
        for value, q in items:
            P[row, min(lead + value, cap) + cap] += up * q
            P[row, max(lead - value, -cap) + cap] += down * q

    antisymmetric = bool(np.all(phi + phi[::-1] == 1.0))
    if antisymmetric:
        for lead in range(0, cap + 1):
            fill_row(lead)
        for lead in range(1, cap + 1):
            P[cap - lead, :] = P[cap + lead, ::-1]
    else:
        for lead in range(-cap, cap + 1):
            fill_row(lead)
    return LeadChain(
        cap=cap,
        transition=P,
        phi=phi,
        point_values=dict(items),
        antisymmetric=antisymmetric,
    )


def expected_remaining_events(profile: np.ndarray, t: int) -> float:
    """Expected number of scoring events from second t through T."""
    profile = np.asarray(profile, dtype=float)
    T = len(profile) - 1
    if not 0 <= t <= T:
        raise ValueError(f"time {t} outside [0, {T}]")
    return float(profile[int(t) :].sum())


def forecast_after_events(chain: LeadChain, lead: int, n_events: float) -> OutcomeForecast:
    """Win/tie/loss probabilities after round(n_events) chain steps.

    The number of transitions is real-valued (an expected event count)
    and is rounded to the nearest integer number of applications of P.
    """
    if not np.isfinite(n_events) or n_events < 0:
        raise ValueError(f"n_events must be finite and nonnegative, got {n_events}")
    steps = int(round(float(n_events)))
    if chain.antisymmetric and lead < 0:
        # Mirror-symmetric chain: forecast from |lead| and swap outcomes,
        # which keeps the mirror identity exact in floating point.
        return forecast_after_events(chain, -lead, n_events).swapped()
    idx = chain.state_index(lead)
    v = np.zeros(2 * chain.cap + 1)
    v[idx] = 1.0
    for _ in range(steps):
        v = v @ chain.transition
    cap = chain.cap
    p_tie = float(v[cap])
    if chain.antisymmetric and lead == 0:
        # Win probabilities are equal by symmetry; evaluate them as such
        # so the equality survives floating point.
        half = (1.0 - p_tie) / 2.0
        return OutcomeForecast(p_win_r=half, p_tie=p_tie, p_win_b=half)
    return OutcomeForecast(
        p_win_r=float(v[cap + 1 :].sum()),
        p_tie=float(v[cap]),
        p_win_b=float(v[:cap].sum()),
    )


def forecast(
    chain: LeadChain, lead: int, t: int, profile: np.ndarray
) -> OutcomeForecast:
    """Forecast the outcome from lead `lead` at clock second `t`."""
    return forecast_after_events(chain, lead, expected_remaining_events(profile, t))


def leader_wins(lead: int) -> str | None:
    """Baseline prediction: the current leader wins; abstain at a tie.

    Abstentions are scored 1/2 in the evaluation, so the heuristic
    scores exactly 1/2 on symmetric inputs.
    """
    if lead > 0:
        return TEAM_R
    if lead < 0:
        return TEAM_B
    return None


@dataclass(frozen=True, eq=False)
class PredictabilityCurve:
    """Mean correct-prediction fraction per cumulative event index."""

    event_index: np.ndarray
    auc_chain: np.ndarray
    auc_leader: np.ndarray
    n_games_scored: np.ndarray


def _chain_score(p_win_r: float, p_win_b: float, winner_sign: int) -> float:
    # Exactly tied win probabilities carry no information; credit 1/2,
    # mirroring the baseline's abstain rule.
    if p_win_r == p_win_b:
        return 0.5
    predicted = 1 if p_win_r > p_win_b else -1
    return 1.0 if predicted == winner_sign else 0.0


def _leader_score(lead: int, winner_sign: int) -> float:
    if lead == 0:
        return 0.5
    return 1.0 if (1 if lead > 0 else -1) == winner_sign else 0.0


def evaluate_predictability(
    games: Sequence[GameLog],
    config: SportConfig | None = None,
    n_splits: int = 20,
    train_fraction: float = 0.75,
    seed: int = 0,
    min_fit_samples: int = 50,
    tie_mode: str = "exclude",
) -> PredictabilityCurve:
    """Out-of-sample winner-prediction accuracy per cumulative event index.

    For each split, phi, the point-value pmf, and the tempo profile are
    fitted on a random `train_fraction` of games and every held-out game
    is forecast at the clock time and lead immediately after each of its
    events. Chain and leader-wins scores are averaged per event index
    over the split's games, then averaged across splits.

    `tie_mode` controls regulation ties in the test set: "exclude" drops
    them from scoring (default) and "half" keeps them, crediting every
    prediction on them 1/2.
    """
    if tie_mode not in ("exclude", "half"):
        raise ValueError("tie_mode must be 'exclude' or 'half'")
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    cfg = config_for_games(games, config)
    if len(games) < 2:
        raise ValueError("need at least two games to split")
    cap = cfg.lead_truncation
    rng = np.random.default_rng(seed)
    n_train = int(round(train_fraction * len(games)))
    n_train = min(max(n_train, 1), len(games) - 1)

    max_events = max(g.n_events for g in games)
    chain_sums = np.zeros((n_splits, max_events))
    leader_sums = np.zeros((n_splits, max_events))
    counts = np.zeros((n_splits, max_events), dtype=np.int64)

    for split in range(n_splits):
        order = rng.permutation(len(games))
        train = [games[i] for i in order[:n_train]]
        test = [games[i] for i in order[n_train:]]

        scoring = lead_scoring_function(train, cap, min_fit_samples)
        pmf = point_value_distribution(train)
        profile = tempo_profile(train, cfg)
        suffix = np.concatenate((np.cumsum(profile[::-1])[::-1], [0.0]))
        chain = build_chain(scoring.phi, pmf, cap)
        cache: dict[tuple[int, int], tuple[float, float]] = {}

        scored_any = False
        for game in test:
            if game.n_events == 0:
                continue
            winner_sign = np.sign(game.final_lead())
            if winner_sign == 0 and tie_mode == "exclude":
                continue
            scored_any = True
            leads = np.cumsum(game.signed_points)
            for ell in range(game.n_events):
                counts[split, ell] += 1
                if winner_sign == 0:  # tie_mode == "half"
                    chain_sums[split, ell] += 0.5
                    leader_sums[split, ell] += 0.5
                    continue
                lead = int(np.clip(leads[ell], -cap, cap))
                t = int(game.times[ell])
                steps = int(round(suffix[t]))
                key = (lead, steps)
                if key not in cache:
                    f = forecast_after_events(chain, lead, steps)
                    cache[key] = (f.p_win_r, f.p_win_b)
                p_r, p_b = cache[key]
                chain_sums[split, ell] += _chain_score(p_r, p_b, winner_sign)
                leader_sums[split, ell] += _leader_score(int(leads[ell]), winner_sign)
        if not scored_any:
            raise ValueError(f"split {split}: every test game tied at regulation")

    any_scores = counts.sum(axis=0) > 0
    last = int(np.nonzero(any_scores)[0][-1]) + 1
    with np.errstate(invalid="ignore", divide="ignore"):
        per_split_chain = np.where(counts > 0, chain_sums / np.maximum(counts, 1), np.nan)
        per_split_leader = np.where(counts > 0, leader_sums / np.maximum(counts, 1), np.nan)
    auc_chain = np.nanmean(per_split_chain[:, :last], axis=0)
    auc_leader = np.nanmean(per_split_leader[:, :last], axis=0)
    return PredictabilityCurve(
        event_index=np.arange(1, last + 1),
        auc_chain=auc_chain,
        auc_leader=auc_leader,
        n_games_scored=counts.sum(axis=0)[:last],
    )
