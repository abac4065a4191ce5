"""Generative game models: the 2x2 grid of tempo and balance processes.

Tempo variants:
  * bernoulli: each second t hosts an event independently with the
    fitted per-second probability profile[t] (no memory),
  * markov: inter-arrival times are drawn iid from the fitted empirical
    gap distribution and the clock advances gap by gap; the event that
    overshoots regulation is discarded.

Balance variants:
  * bernoulli: one bias c is drawn per game, uniformly from the fitted
    per-game balance fractions, and every event goes to r with
    probability c,
  * markov: each event goes to r with probability phi(L) for the lead L
    held immediately before the event (phi clamped beyond the fitted
    range).

Event point values are always drawn iid from the fitted distribution.
Games are generated on independent Philox substreams keyed by
(seed, game index), so corpora are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .core import GameLog, SportConfig
from .estimate import BalanceModel, LeadScoring, LinearFit, TempoModel
from .rng import substream


class TempoKind(str, Enum):
    BERNOULLI = "bernoulli"
    MARKOV = "markov"


class BalanceKind(str, Enum):
    BERNOULLI = "bernoulli"
    MARKOV = "markov"


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """One cell of the tempo x balance model grid, plus its random seed."""

    tempo_kind: TempoKind
    balance_kind: BalanceKind
    tempo: TempoModel
    balance: BalanceModel
    config: SportConfig
    seed: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "tempo_kind", TempoKind(self.tempo_kind))
        object.__setattr__(self, "balance_kind", BalanceKind(self.balance_kind))
        if self.tempo.regulation_length != self.config.regulation_length:
            raise ValueError("tempo model and sport config disagree on regulation length")
        if len(self.balance.phi) != 2 * self.config.lead_truncation + 1:
            raise ValueError("balance model and sport config disagree on lead truncation")
        if self.tempo_kind is TempoKind.MARKOV and not len(self.tempo.interarrival_gaps):
            raise ValueError("markov tempo needs a non-empty inter-arrival distribution")
        if self.balance_kind is BalanceKind.BERNOULLI and not len(self.balance.c_hat_samples):
            raise ValueError("bernoulli balance needs at least one fitted balance fraction")


def bernoulli_event_times(rng: np.random.Generator, profile: np.ndarray) -> np.ndarray:
    """Event seconds under per-second independent scoring probabilities."""
    return np.nonzero(rng.random(len(profile)) < profile)[0].astype(np.int64)


def resampled_gap_times(
    rng: np.random.Generator,
    gaps: np.ndarray,
    probs: np.ndarray,
    horizon: int,
) -> np.ndarray:
    """Event seconds from iid resampled gaps, first gap anchored at t = 0.

    Times exceeding `horizon` are discarded (the overshooting event is
    dropped, not clipped). Gaps are >= 1, so times are strictly
    increasing.
    """
    mean_gap = float(np.dot(gaps, probs))
    times: list[np.ndarray] = []
    t = 0
    while True:
        size = max(16, int((horizon - t) / mean_gap * 1.25) + 8)
        cs = t + np.cumsum(rng.choice(gaps, size=size, p=probs))
        cut = int(np.searchsorted(cs, horizon, side="right"))
        times.append(cs[:cut])
        if cut < size:
            return np.concatenate(times).astype(np.int64)
        t = int(cs[-1])


def _draw_points(rng: np.random.Generator, point_values, n: int) -> np.ndarray:
    support = np.array(sorted(point_values), dtype=np.int64)
    probs = np.array([point_values[int(v)] for v in support])
    return rng.choice(support, size=n, p=probs)


def _markov_winners(
    rng: np.random.Generator, phi: np.ndarray, cap: int, points: np.ndarray
) -> np.ndarray:
    u = rng.random(len(points))
    signs = np.empty(len(points), dtype=np.int8)
    lead = 0
    for i in range(len(points)):
        clamped = min(max(lead, -cap), cap)
        s = 1 if u[i] < phi[clamped + cap] else -1
        signs[i] = s
        lead += s * int(points[i])
    return signs


def simulate_game(spec: ModelSpec, game_index: int = 0) -> GameLog:
    """Generate one game on substream (spec.seed, game_index).

    Draw order is fixed (times, then point values, then winners) so
    corpora are reproducible across model kinds.
    """
    rng = substream(spec.seed, game_index)
    if spec.tempo_kind is TempoKind.BERNOULLI:
        times = bernoulli_event_times(rng, spec.tempo.profile)
    else:
        times = resampled_gap_times(
            rng,
            spec.tempo.interarrival_gaps,
            spec.tempo.interarrival_probs,
            spec.config.regulation_length,
        )
    n = len(times)
    points = _draw_points(rng, spec.balance.point_values, n)
    if spec.balance_kind is BalanceKind.BERNOULLI:
        c = float(rng.choice(spec.balance.c_hat_samples))
        signs = np.where(rng.random(n) < c, 1, -1).astype(np.int8)
    else:
        signs = _markov_winners(rng, spec.balance.phi, spec.config.lead_truncation, points)
    return GameLog(
        game_id=f"sim-{game_index:06d}",
        sport_id=spec.config.sport_id,
        times=times,
        teams=signs,
        points=points,
    )


def simulate_corpus(spec: ModelSpec, n_games: int) -> list[GameLog]:
    """Generate `n_games` independent games (substreams 0..n_games-1)."""
    return [simulate_game(spec, i) for i in range(n_games)]


def flat_profile(regulation_length: int, rate: float) -> np.ndarray:
    """Constant per-second event probability over seconds 1..T.

    Second 0 is the opening tick: games start tied at t = 0, so no event
    can have resolved there and the profile's first entry is zero (as in
    any fitted profile).
    """
    profile = np.full(regulation_length + 1, float(rate))
    profile[0] = 0.0
    return profile


def ideal_model(config: SportConfig, rate: float, seed: int = 0) -> ModelSpec:
    """Spec for an ideal competition at the given per-second event rate.

    Events arrive with constant probability `rate` per second, each is
    won by either team with probability 1/2, and values are iid from the
    sport's point distribution.
    """
    if not 0.0 < rate <= 1.0:
        raise ValueError("rate must be in (0, 1]")
    T = config.regulation_length
    cap = config.lead_truncation
    tempo = TempoModel(
        lambda_hat=rate,
        regulation_length=T,
        profile=flat_profile(T, rate),
        interarrival_gaps=np.array([], dtype=np.int64),
        interarrival_probs=np.array([]),
    )
    scoring = LeadScoring(
        leads=np.arange(-cap, cap + 1),
        phi=np.full(2 * cap + 1, 0.5),
        counts=np.zeros(2 * cap + 1, dtype=np.int64),
        fit=LinearFit(slope=0.0, intercept=0.5, slope_stderr=None, n_states=0),
    )
    balance = BalanceModel(
        c_hat_samples=np.array([0.5]),
        scoring=scoring,
        point_values=dict(config.point_values),
    )
    return ModelSpec(
        tempo_kind=TempoKind.BERNOULLI,
        balance_kind=BalanceKind.BERNOULLI,
        tempo=tempo,
        balance=balance,
        config=config,
        seed=seed,
    )


def ideal_game(config: SportConfig, rate: float, seed: int = 0, game_index: int = 0) -> GameLog:
    """One ideal-competition game; rate 0 yields an empty game."""
    if rate == 0.0:
        return GameLog(f"sim-{game_index:06d}", config.sport_id, [], [], [])
    return simulate_game(ideal_model(config, rate, seed), game_index)


def ideal_corpus(config: SportConfig, rate: float, n_games: int, seed: int = 0) -> list[GameLog]:
    if rate == 0.0:
        return [ideal_game(config, 0.0, seed, i) for i in range(n_games)]
    spec = ideal_model(config, rate, seed)
    return simulate_corpus(spec, n_games)


@dataclass(frozen=True, eq=False)
class LeadDispersionCurve:
    """Standard deviation and mean absolute lead across games over time."""

    times: np.ndarray
    sd: np.ndarray
    mean_abs: np.ndarray
    sd_empirical: np.ndarray | None = None
    mean_abs_empirical: np.ndarray | None = None


def lead_dispersion(
    games: Sequence[GameLog], regulation_length: int, sample_every: int = 60
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(times, sd of lead, mean |lead|) sampled on a regular grid."""
    grid = np.arange(0, regulation_length + 1, sample_every, dtype=np.int64)
    total = np.zeros(len(grid))
    total_sq = np.zeros(len(grid))
    total_abs = np.zeros(len(grid))
    for game in games:
        if game.n_events == 0:
            continue  # lead is 0 throughout; still counts in the denominator
        cum = np.cumsum(game.signed_points)
        idx = np.searchsorted(game.times, grid, side="right")
        leads = np.where(idx > 0, cum[np.maximum(idx - 1, 0)], 0).astype(float)
        total += leads
        total_sq += leads**2
        total_abs += np.abs(leads)
    n = len(games)
    mean = total / n
    var = np.maximum(total_sq / n - mean**2, 0.0)
    return grid, np.sqrt(var), total_abs / n


def lead_variance_curve(
    spec: ModelSpec,
    n_games: int = 100_000,
    sample_every: int = 60,
    empirical_games: Sequence[GameLog] | None = None,
) -> LeadDispersionCurve:
    """Lead-size dispersion over the clock for a simulated corpus.

    Simulates `n_games` under `spec` and samples the cross-game standard
    deviation (and mean absolute value) of the lead every
    `sample_every` seconds. When `empirical_games` is given, the same
    curve is computed from it for overlay.
    """
    if n_games < 1_000:
        raise ValueError("n_games must be >= 1000 for a stable dispersion estimate")
    T = spec.config.regulation_length
    games = simulate_corpus(spec, n_games)
    times, sd, mean_abs = lead_dispersion(games, T, sample_every)
    sd_emp = mean_abs_emp = None
    if empirical_games is not None:
        _, sd_emp, mean_abs_emp = lead_dispersion(empirical_games, T, sample_every)
    return LeadDispersionCurve(
        times=times, sd=sd, mean_abs=mean_abs, sd_empirical=sd_emp, mean_abs_empirical=mean_abs_emp
    )
