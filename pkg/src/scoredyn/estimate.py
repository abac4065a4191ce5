"""Estimators for scoring tempo, balance, and point values.

Tempo is treated as a discrete-time Poisson process: each second hosts a
scoring event independently with a small per-second probability. The
maximum-likelihood rate is

    lambda_hat = (total events / number of games) / T,

the per-game event count is then Poisson(lambda*T) and the gap between
consecutive events is geometric with mean 1/lambda.

Balance is treated as a Bernoulli process per scoring event. The
per-game bias estimate is c = E_r / (E_r + E_b), and the lead-size
scoring function phi(L) estimates the probability that team r wins the
next event given it currently leads by L. phi is antisymmetric about
L = 0 (phi(-L) = 1 - phi(L)) and is estimated by pooling each lead state
with its mirror image, which pins phi(0) = 1/2 exactly.
"""

from __future__ import annotations

import json
import math
import os
import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from .core import (
    PMF_TOLERANCE,
    GameLog,
    SportConfig,
    atomic_write_text,
    config_for_games,
    config_from_dict,
    config_to_dict,
    require_schema_major,
)

MODEL_SCHEMA_VERSION = "1.0"


# --------------------------------------------------------------------------
# Model containers
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TempoModel:
    """Fitted timing model for one sport.

    Attributes:
        lambda_hat: Events per second.
        regulation_length: Clock length T; `profile` has T + 1 entries,
            one per second of the closed interval [0, T].
        profile: Per-second probability that a game has an event at
            second t (fraction of games scoring at t).
        interarrival_gaps / interarrival_probs: Empirical distribution
            of the positive integer gaps between consecutive events.
    """

    lambda_hat: float
    regulation_length: int
    profile: np.ndarray
    interarrival_gaps: np.ndarray
    interarrival_probs: np.ndarray

    def __post_init__(self) -> None:
        profile = np.asarray(self.profile, dtype=float).copy()
        gaps = np.asarray(self.interarrival_gaps, dtype=np.int64).copy()
        probs = np.asarray(self.interarrival_probs, dtype=float).copy()
        if self.lambda_hat <= 0:
            raise ValueError("lambda_hat must be positive (degenerate corpus?)")
        if len(profile) != self.regulation_length + 1:
            raise ValueError("profile must have regulation_length + 1 entries")
        if np.any(profile < 0) or np.any(profile > 1):
            raise ValueError("profile entries must be probabilities")
        if len(gaps) != len(probs):
            raise ValueError("interarrival support and probabilities differ in length")
        if len(gaps):
            if np.any(gaps < 1) or np.any(np.diff(gaps) <= 0):
                raise ValueError("interarrival gaps must be ascending positive integers")
            if abs(probs.sum() - 1.0) > PMF_TOLERANCE:
                raise ValueError("interarrival probabilities must sum to 1")
        for name, arr in (("profile", profile), ("interarrival_gaps", gaps),
                          ("interarrival_probs", probs)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def mean_gap(self) -> float:
        if not len(self.interarrival_gaps):
            raise ValueError("no inter-arrival gaps observed")
        return float(np.dot(self.interarrival_gaps, self.interarrival_probs))


@dataclass(frozen=True)
class LinearFit:
    """Ordinary least-squares line through the lead-scoring estimates.

    `slope_stderr` is the slope's standard error from propagating each
    state's binomial variance phi(1-phi)/n through the least-squares
    weights (mirror-pooled states counted once), which stays calibrated
    when far states are much noisier than near ones.
    """

    slope: float | None
    intercept: float | None
    slope_stderr: float | None
    n_states: int


@dataclass(frozen=True, eq=False)
class LeadScoring:
    """Lead-size scoring function phi on the integer grid [-cap, cap].

    `counts[i]` is the number of observed transitions informing
    `phi[i]` (mirror states pooled; the L = 0 state reports its own
    count). Unobserved interior leads are filled by linear
    interpolation between observed ones and the tails are clamped.
    """

    leads: np.ndarray
    phi: np.ndarray
    counts: np.ndarray
    fit: LinearFit

    def __post_init__(self) -> None:
        for name in ("leads", "phi", "counts"):
            arr = np.asarray(getattr(self, name)).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def cap(self) -> int:
        return int(self.leads[-1])


@dataclass(frozen=True, eq=False)
class BalanceModel:
    """Fitted balance model: per-game biases, phi, and point values."""

    c_hat_samples: np.ndarray
    scoring: LeadScoring
    point_values: Mapping[int, float]

    def __post_init__(self) -> None:
        samples = np.asarray(self.c_hat_samples, dtype=float).copy()
        if len(samples) and (samples.min() < 0 or samples.max() > 1):
            raise ValueError("balance fractions must lie in [0, 1]")
        samples.flags.writeable = False
        object.__setattr__(self, "c_hat_samples", samples)
        phi = self.scoring.phi
        if phi[len(phi) // 2] != 0.5:
            raise ValueError("phi(0) must equal 1/2 exactly")
        if not np.all(phi + phi[::-1] == 1.0):
            raise ValueError("phi must be antisymmetric about L = 0")

    @property
    def phi(self) -> np.ndarray:
        return self.scoring.phi


# --------------------------------------------------------------------------
# Tempo
# --------------------------------------------------------------------------

def poisson_rate_from_counts(n_events: int, n_games: int, regulation_length: int) -> float:
    """Rate estimate from corpus totals: (events per game) / T."""
    if n_games < 1:
        raise ValueError("need at least one game")
    if regulation_length < 1:
        raise ValueError("regulation_length must be positive")
    if n_events == 0:
        warnings.warn("corpus has zero events; rate estimate is degenerate", stacklevel=2)
    return (n_events / n_games) / regulation_length


def fit_poisson_rate(games: Sequence[GameLog], config: SportConfig | None = None) -> float:
    """Maximum-likelihood events-per-second rate for a corpus."""
    cfg = config_for_games(games, config)
    if not games:
        raise ValueError("need at least one game")
    total = sum(g.n_events for g in games)
    return poisson_rate_from_counts(total, len(games), cfg.regulation_length)


@dataclass(frozen=True, eq=False)
class EventCountDistribution:
    """Empirical events-per-game pmf next to its Poisson reference."""

    counts: np.ndarray
    empirical_pmf: np.ndarray
    reference_pmf: np.ndarray
    reference_mean: float


def events_per_game_distribution(
    games: Sequence[GameLog], config: SportConfig | None = None
) -> EventCountDistribution:
    """Aligned empirical and Poisson(lambda*T) pmfs over event counts."""
    cfg = config_for_games(games, config)
    if not games:
        raise ValueError("need at least one game")
    observed = np.array([g.n_events for g in games])
    lam = fit_poisson_rate(games, cfg)
    mean = lam * cfg.regulation_length
    hi = int(max(observed.max(), stats.poisson.ppf(1 - 1e-6, mean) if mean > 0 else 0))
    counts = np.arange(hi + 1)
    empirical = np.bincount(observed, minlength=hi + 1)[: hi + 1] / len(games)
    reference = stats.poisson.pmf(counts, mean)
    return EventCountDistribution(
        counts=counts, empirical_pmf=empirical, reference_pmf=reference, reference_mean=mean
    )


@dataclass(frozen=True, eq=False)
class InterarrivalDistribution:
    """Empirical gap distribution next to its geometric reference.

    Both pmfs (and complementary cdfs, P(gap > g)) are aligned on the
    dense support 1..max observed gap. The reference is geometric on
    {1, 2, ...} with success probability lambda, so `reference_mean`
    is exactly 1 / lambda.
    """

    gaps: np.ndarray
    empirical_pmf: np.ndarray
    empirical_ccdf: np.ndarray
    reference_pmf: np.ndarray
    reference_ccdf: np.ndarray
    geometric_p: float
    reference_mean: float

    @property
    def empirical_mean(self) -> float:
        return float(np.dot(self.gaps, self.empirical_pmf))


def _pooled_gaps(games: Sequence[GameLog]) -> np.ndarray:
    diffs = [np.diff(g.times) for g in games if g.n_events >= 2]
    if not diffs:
        raise ValueError("no inter-arrival gaps: need a game with at least two events")
    return np.concatenate(diffs)


def interarrival_distribution(
    games: Sequence[GameLog], config: SportConfig | None = None
) -> InterarrivalDistribution:
    """Empirical inter-arrival law with its geometric(lambda) reference."""
    cfg = config_for_games(games, config)
    all_gaps = _pooled_gaps(games)
    p = fit_poisson_rate(games, cfg)
    if not 0.0 < p < 1.0:
        raise ValueError(f"rate {p} is outside (0, 1); geometric reference undefined")
    hi = int(all_gaps.max())
    gaps = np.arange(1, hi + 1)
    empirical = np.bincount(all_gaps, minlength=hi + 1)[1:] / len(all_gaps)
    empirical_ccdf = 1.0 - np.cumsum(empirical)
    reference = p * (1 - p) ** (gaps - 1.0)
    reference_ccdf = (1 - p) ** gaps.astype(float)
    return InterarrivalDistribution(
        gaps=gaps,
        empirical_pmf=empirical,
        empirical_ccdf=empirical_ccdf,
        reference_pmf=reference,
        reference_ccdf=reference_ccdf,
        geometric_p=p,
        reference_mean=1.0 / p,
    )


def gap_correlation(gaps: Sequence[int] | np.ndarray, n_max: int) -> np.ndarray:
    """Two-point correlation of one gap sequence, for lags 1..n_max.

    C(n) = sum_k (t_k - m)(t_{k+n} - m) / sum_k (t_k - m)^2 with m the
    sequence mean. Values lie in [-1, 1]; lags with no usable pair are
    NaN. A constant sequence has no defined correlation and raises.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    x = np.asarray(gaps, dtype=float)
    d = x - x.mean()
    denom = float(np.dot(d, d))
    if denom == 0.0:
        raise ValueError("constant gap sequence: correlation undefined")
    out = np.full(n_max, np.nan)
    for n in range(1, min(n_max, len(x) - 1) + 1):
        out[n - 1] = float(np.dot(d[:-n], d[n:])) / denom
    return out


def correlation_function(games: Sequence[GameLog], n_max: int) -> np.ndarray:
    """Pooled gap correlation C(1..n_max) across a corpus.

    Each game's sequence of inter-arrival gaps is correlated separately
    and the per-game values are averaged with weights equal to the
    number of usable pairs, which avoids artificial correlations across
    game boundaries. Games with constant gaps are excluded; if every
    game is excluded this raises.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    num = np.zeros(n_max)
    weight = np.zeros(n_max)
    usable = 0
    for game in games:
        if game.n_events < 2:
            continue
        x = np.diff(game.times).astype(float)
        d = x - x.mean()
        denom = float(np.dot(d, d))
        if denom == 0.0:
            continue
        usable += 1
        for n in range(1, min(n_max, len(x) - 1) + 1):
            pairs = len(x) - n
            num[n - 1] += pairs * (float(np.dot(d[:-n], d[n:])) / denom)
            weight[n - 1] += pairs
    if usable == 0:
        raise ValueError("no usable games: all gap sequences constant or too short")
    with np.errstate(invalid="ignore"):
        return np.where(weight > 0, num / np.where(weight > 0, weight, 1.0), np.nan)


def tempo_profile(
    games: Sequence[GameLog],
    config: SportConfig | None = None,
    smooth_window: int = 1,
) -> np.ndarray:
    """Fraction of games with a scoring event at each second t in [0, T].

    `smooth_window` applies a centered moving average of that odd width
    (1 means no smoothing); edge seconds average over the available
    in-range neighbors only.
    """
    cfg = config_for_games(games, config)
    if not games:
        raise ValueError("need at least one game")
    T = cfg.regulation_length
    counts = np.zeros(T + 1)
    for game in games:
        inside = game.times[game.times <= T]
        counts[inside] += 1.0
    profile = counts / len(games)
    if smooth_window > 1:
        if smooth_window % 2 == 0:
            raise ValueError("smooth_window must be odd")
        kernel = np.ones(smooth_window)
        profile = np.convolve(profile, kernel, mode="same") / np.convolve(
            np.ones_like(profile), kernel, mode="same"
        )
    return profile


def fit_tempo(games: Sequence[GameLog], config: SportConfig | None = None) -> TempoModel:
    """Fit the rate, per-second profile, and inter-arrival law together."""
    cfg = config_for_games(games, config)
    lam = fit_poisson_rate(games, cfg)
    profile = tempo_profile(games, cfg)
    try:
        pooled = _pooled_gaps(games)
        hi = int(pooled.max())
        support = np.arange(1, hi + 1)
        probs = np.bincount(pooled, minlength=hi + 1)[1:] / len(pooled)
        keep = probs > 0
        support, probs = support[keep], probs[keep]
    except ValueError:
        support, probs = np.array([], dtype=np.int64), np.array([])
    return TempoModel(
        lambda_hat=lam,
        regulation_length=cfg.regulation_length,
        profile=profile,
        interarrival_gaps=support,
        interarrival_probs=probs,
    )


# --------------------------------------------------------------------------
# Balance
# --------------------------------------------------------------------------

def balance_fraction(game: GameLog) -> float:
    """Fraction of the game's scoring events won by team r."""
    if game.n_events == 0:
        raise ValueError("balance fraction undefined for a game with no events")
    return float(np.count_nonzero(game.teams > 0) / game.n_events)


def balance_fractions(games: Sequence[GameLog]) -> np.ndarray:
    """Per-game balance fractions; games without events are excluded."""
    return np.array([balance_fraction(g) for g in games if g.n_events > 0])


def balance_null_distribution(
    games: Sequence[GameLog],
    n_sims: int = 100_000,
    seed: int = 0,
) -> np.ndarray:
    """Simulated balance fractions for perfectly balanced play.

    Each simulated game draws its event count from the corpus's
    empirical events-per-game distribution and assigns every event to r
    or b with probability 1/2. Zero-event draws are excluded, matching
    the treatment of real games.
    """
    if n_sims < 1:
        raise ValueError("n_sims must be >= 1")
    observed = np.array([g.n_events for g in games])
    if not len(observed):
        raise ValueError("need at least one game")
    rng = np.random.default_rng(seed)
    counts = rng.choice(observed, size=n_sims)
    wins = rng.binomial(counts, 0.5)
    keep = counts > 0
    return wins[keep] / counts[keep]


def _transition_counts(games: Sequence[GameLog], cap: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-lead-state counts of (transitions, transitions won by r).

    The lead is sampled immediately before each event; the first event
    of a game is conditioned on L = 0. Leads beyond +-cap pool into the
    boundary states.
    """
    totals = np.zeros(2 * cap + 1, dtype=np.int64)
    wins = np.zeros(2 * cap + 1, dtype=np.int64)
    for game in games:
        if game.n_events == 0:
            continue
        cum = np.cumsum(game.signed_points)
        before = np.concatenate(([0], cum[:-1]))
        idx = np.clip(before, -cap, cap) + cap
        np.add.at(totals, idx, 1)
        np.add.at(wins, idx, (game.teams > 0).astype(np.int64))
    return totals, wins


def lead_scoring_function(
    games: Sequence[GameLog],
    cap: int,
    min_samples: int = 50,
) -> LeadScoring:
    """Estimate phi(L), the chance r wins the next event from lead L.

    Observations at L and -L are pooled through the antisymmetry
    phi(-L) = 1 - phi(L): a transition observed at -L contributes its
    complement at +L. Estimates are made for L >= 0 and reflected, so
    phi(0) = 1/2 holds exactly. A line is fitted by ordinary least
    squares over the states with at least `min_samples` pooled
    observations; with fewer than two such states the slope is None.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    totals, wins = _transition_counts(games, cap)
    if totals.sum() == 0:
        raise ValueError("no event transitions observed")

    leads = np.arange(-cap, cap + 1)
    pooled_totals = np.zeros(cap + 1, dtype=np.int64)
    pooled_wins = np.zeros(cap + 1, dtype=np.int64)
    for L in range(cap + 1):
        plus, minus = totals[cap + L], totals[cap - L]
        if L == 0:
            pooled_totals[0] = 2 * plus
            pooled_wins[0] = plus
        else:
            pooled_totals[L] = plus + minus
            pooled_wins[L] = wins[cap + L] + (minus - wins[cap - L])

    observed = np.nonzero(pooled_totals)[0]
    est = pooled_wins[observed] / pooled_totals[observed]
    # Fill the nonnegative grid (linear between observed states, clamped
    # tails), then reflect so antisymmetry is exact by construction.
    upper = np.interp(np.arange(cap + 1), observed, est)
    phi = np.empty(2 * cap + 1)
    phi[cap:] = upper
    phi[:cap] = 1.0 - upper[:0:-1]

    pooled_counts = np.empty(2 * cap + 1, dtype=np.int64)
    pooled_counts[cap] = pooled_totals[0] // 2
    pooled_counts[cap + 1 :] = pooled_totals[1:]
    pooled_counts[:cap] = pooled_totals[:0:-1]

    fit = _fit_line(leads, phi, pooled_counts, min_samples)
    return LeadScoring(leads=leads, phi=phi, counts=pooled_counts, fit=fit)


def _fit_line(
    leads: np.ndarray, phi: np.ndarray, counts: np.ndarray, min_samples: int
) -> LinearFit:
    mask = counts >= min_samples
    x = leads[mask].astype(float)
    y = phi[mask]
    n = len(x)
    if n < 2 or np.ptp(x) == 0:
        return LinearFit(slope=None, intercept=None, slope_stderr=None, n_states=n)
    design = np.column_stack([x, np.ones(n)])
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    slope, intercept = float(coef[0]), float(coef[1])
    # Slope uncertainty by propagating per-state binomial variance.
    # Mirrored states carry the same observations (phi(-L) = 1 - phi(L)),
    # so each +-L pair counts once, through its positive member.
    pos = x > 0
    stderr = None
    if np.any(pos):
        sxx_half = float(np.sum(x[pos] ** 2))
        var = float(np.sum(x[pos] ** 2 * (y[pos] * (1 - y[pos])) / counts[mask][pos]))
        stderr = math.sqrt(var) / sxx_half
    return LinearFit(slope=slope, intercept=intercept, slope_stderr=stderr, n_states=n)


def point_value_distribution(games: Sequence[GameLog]) -> dict[int, float]:
    """Relative frequency of each event point value across a corpus."""
    all_points = np.concatenate([g.points for g in games if g.n_events]) if games else np.array([])
    if not len(all_points):
        raise ValueError("no events: point value distribution undefined")
    values, counts = np.unique(all_points, return_counts=True)
    total = counts.sum()
    return {int(v): float(c / total) for v, c in zip(values, counts)}


def points_fraction_distribution(
    games: Sequence[GameLog],
) -> tuple[np.ndarray, np.ndarray]:
    """Per-game fraction of total points won by r, next to the events-based fraction.

    Returns (points_fraction, events_fraction), aligned game-for-game
    over games with at least one event.
    """
    points_frac = []
    events_frac = []
    for game in games:
        if game.n_events == 0:
            continue
        total = float(game.points.sum())
        r_points = float(game.points[game.teams > 0].sum())
        points_frac.append(r_points / total)
        events_frac.append(balance_fraction(game))
    if not points_frac:
        raise ValueError("no games with events")
    return np.array(points_frac), np.array(events_frac)


def fit_balance(
    games: Sequence[GameLog],
    config: SportConfig | None = None,
    min_samples: int = 50,
) -> BalanceModel:
    """Fit per-game biases, the lead-scoring function, and point values."""
    cfg = config_for_games(games, config)
    scoring = lead_scoring_function(games, cfg.lead_truncation, min_samples)
    return BalanceModel(
        c_hat_samples=balance_fractions(games),
        scoring=scoring,
        point_values=point_value_distribution(games),
    )


# --------------------------------------------------------------------------
# Model artifact (versioned JSON)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelArtifact:
    config: SportConfig
    tempo: TempoModel
    balance: BalanceModel


def model_to_dict(config: SportConfig, tempo: TempoModel, balance: BalanceModel) -> dict:
    fit = balance.scoring.fit
    return {
        "schema_version": MODEL_SCHEMA_VERSION,
        "sport": config_to_dict(config),
        "tempo": {
            "lambda_hat": tempo.lambda_hat,
            "regulation_length_seconds": tempo.regulation_length,
            "profile": tempo.profile.tolist(),
            "interarrival": {
                "gaps": tempo.interarrival_gaps.tolist(),
                "probs": tempo.interarrival_probs.tolist(),
            },
        },
        "balance": {
            "c_hat_samples": balance.c_hat_samples.tolist(),
            "phi": balance.phi.tolist(),
            "phi_counts": balance.scoring.counts.tolist(),
            "phi_fit": {
                "slope": fit.slope,
                "intercept": fit.intercept,
                "slope_stderr": fit.slope_stderr,
                "n_states": fit.n_states,
            },
            "point_values": {str(v): p for v, p in balance.point_values.items()},
        },
    }


def model_from_dict(data: Mapping) -> ModelArtifact:
    require_schema_major(data.get("schema_version", "0"), MODEL_SCHEMA_VERSION, "model artifact")
    config = config_from_dict(data["sport"])
    t = data["tempo"]
    tempo = TempoModel(
        lambda_hat=float(t["lambda_hat"]),
        regulation_length=int(t["regulation_length_seconds"]),
        profile=t["profile"],
        interarrival_gaps=t["interarrival"]["gaps"],
        interarrival_probs=t["interarrival"]["probs"],
    )
    b = data["balance"]
    phi = np.asarray(b["phi"], dtype=float)
    cap = (len(phi) - 1) // 2
    fit_d = b["phi_fit"]
    scoring = LeadScoring(
        leads=np.arange(-cap, cap + 1),
        phi=phi,
        counts=np.asarray(b["phi_counts"], dtype=np.int64),
        fit=LinearFit(
            slope=fit_d["slope"],
            intercept=fit_d["intercept"],
            slope_stderr=fit_d["slope_stderr"],
            n_states=int(fit_d["n_states"]),
        ),
    )
    balance = BalanceModel(
        c_hat_samples=b["c_hat_samples"],
        scoring=scoring,
        point_values={int(v): float(p) for v, p in b["point_values"].items()},
    )
    return ModelArtifact(config=config, tempo=tempo, balance=balance)


def save_model(
    path: str | os.PathLike, config: SportConfig, tempo: TempoModel, balance: BalanceModel
) -> None:
    atomic_write_text(
        path, json.dumps(model_to_dict(config, tempo, balance), sort_keys=True) + "\n"
    )


def load_model(path: str | os.PathLike) -> ModelArtifact:
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
