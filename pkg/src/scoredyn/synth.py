"""Ground-truth synthetic leagues for validating estimators end to end.

Teams carry latent positive skills pi_i, and each scoring event in a
matchup (i, j) is won by team i with probability pi_i / (pi_i + pi_j),
independently of everything else. A second generator replaces the skill
rule with a lead-dependent one, p(r scores | lead L) = 1/2 + slope * L,
to produce corpora with a built-in restoring force (negative slope) for
exercising the negative-slope regime.

Every game runs on its own Philox substream keyed by (seed, game
index), so corpora are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import PMF_TOLERANCE, GameLog, SportConfig
from .rng import substream
from .simulate import bernoulli_event_times, flat_profile

PROB_CLAMP = 1e-6


@dataclass(frozen=True, eq=False)
class LeagueSpec:
    """A synthetic league: skills, schedule, tempo law, point values, seed.

    `tempo` is either a flat per-second event probability (float) or a
    per-second profile of length regulation_length + 1. In each
    scheduled matchup (i, j), team i plays as r and team j as b.
    """

    skills: np.ndarray
    schedule: tuple[tuple[int, int], ...]
    regulation_length: int
    tempo: float | np.ndarray
    point_values: Mapping[int, float]
    seed: int

    def __post_init__(self) -> None:
        skills = np.asarray(self.skills, dtype=float).copy()
        if len(skills) == 0 or np.any(skills <= 0):
            raise ValueError("skills must be positive")
        skills.flags.writeable = False
        object.__setattr__(self, "skills", skills)
        schedule = tuple((int(i), int(j)) for i, j in self.schedule)
        if not schedule:
            raise ValueError("schedule must be non-empty")
        n = len(skills)
        for i, j in schedule:
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise ValueError(f"invalid matchup ({i}, {j}) for {n} teams")
        object.__setattr__(self, "schedule", schedule)
        T = int(self.regulation_length)
        if T <= 0:
            raise ValueError("regulation_length must be positive")
        object.__setattr__(self, "regulation_length", T)
        profile = self.profile
        if len(profile) != T + 1 or np.any(profile < 0) or np.any(profile > 1):
            raise ValueError("tempo must be a probability, or a profile of length T + 1")
        total = sum(self.point_values.values())
        if abs(total - 1.0) > PMF_TOLERANCE:
            raise ValueError(f"point value probabilities sum to {total}, expected 1")

    @property
    def n_teams(self) -> int:
        return len(self.skills)

    @property
    def profile(self) -> np.ndarray:
        if np.ndim(self.tempo) == 0:
            return flat_profile(self.regulation_length, float(self.tempo))
        return np.asarray(self.tempo, dtype=float)


def _draw_points(rng: np.random.Generator, point_values: Mapping[int, float], n: int):
    support = np.array(sorted(point_values), dtype=np.int64)
    probs = np.array([point_values[int(v)] for v in support])
    return rng.choice(support, size=n, p=probs)


def generate_league(spec: LeagueSpec, prefix: str = "league") -> list[GameLog]:
    """Generate one game per scheduled matchup under the skill rule."""
    profile = spec.profile
    games = []
    for g, (i, j) in enumerate(spec.schedule):
        rng = substream(spec.seed, g)
        times = bernoulli_event_times(rng, profile)
        n = len(times)
        points = _draw_points(rng, spec.point_values, n)
        p_r = spec.skills[i] / (spec.skills[i] + spec.skills[j])
        signs = np.where(rng.random(n) < p_r, 1, -1).astype(np.int8)
        games.append(
            GameLog(
                game_id=f"{prefix}-{g:06d}",
                sport_id="custom",
                times=times,
                teams=signs,
                points=points,
            )
        )
    return games


def generate_restoring_league(
    spec: LeagueSpec,
    restoring_slope: float,
    prefix: str = "restoring",
) -> list[GameLog]:
    """Generate games where p(r scores | lead L) = 1/2 + slope * L.

    The probability is clamped into [PROB_CLAMP, 1 - PROB_CLAMP] for
    extreme leads. A |slope| >= 1/2 would leave the open interval at the
    first point of lead and is rejected.
    """
    if abs(restoring_slope) >= 0.5:
        raise ValueError("|slope| must be < 1/2 to keep probabilities in (0, 1)")
    profile = spec.profile
    games = []
    for g in range(len(spec.schedule)):
        rng = substream(spec.seed, g)
        times = bernoulli_event_times(rng, profile)
        n = len(times)
        points = _draw_points(rng, spec.point_values, n)
        u = rng.random(n)
        signs = np.empty(n, dtype=np.int8)
        lead = 0
        for k in range(n):
            p = min(max(0.5 + restoring_slope * lead, PROB_CLAMP), 1.0 - PROB_CLAMP)
            s = 1 if u[k] < p else -1
            signs[k] = s
            lead += s * int(points[k])
        games.append(
            GameLog(
                game_id=f"{prefix}-{g:06d}",
                sport_id="custom",
                times=times,
                teams=signs,
                points=points,
            )
        )
    return games


def default_league(
    n_teams: int = 20,
    n_games: int = 1_000,
    regulation_length: int = 3600,
    rate: float = 0.002,
    point_values: Mapping[int, float] | None = None,
    skill_sigma: float = 1.0,
    seed: int = 0,
) -> LeagueSpec:
    """Desk-scale league: log-normal skills, uniform random schedule."""
    rng = np.random.default_rng(seed)
    skills = rng.lognormal(mean=0.0, sigma=skill_sigma, size=n_teams)
    schedule = []
    for _ in range(n_games):
        i, j = rng.choice(n_teams, size=2, replace=False)
        schedule.append((int(i), int(j)))
    if point_values is None:
        point_values = {1: 1.0}
    return LeagueSpec(
        skills=skills,
        schedule=tuple(schedule),
        regulation_length=regulation_length,
        tempo=rate,
        point_values=dict(point_values),
        seed=seed,
    )


def league_config(
    spec: LeagueSpec,
    lead_cap: int = 100,
    period_ends: Sequence[int] | None = None,
) -> SportConfig:
    """SportConfig matching a synthetic league, for use with estimators."""
    ends = tuple(period_ends) if period_ends else (spec.regulation_length,)
    return SportConfig(
        sport_id="custom",
        regulation_length=spec.regulation_length,
        period_ends=ends,
        point_values=dict(spec.point_values),
        lead_truncation=lead_cap,
    )


def league_truth(spec: LeagueSpec) -> dict:
    """Ground-truth sidecar describing exactly what was generated."""
    tempo = spec.tempo
    return {
        "n_teams": spec.n_teams,
        "skills": spec.skills.tolist(),
        "schedule": [list(m) for m in spec.schedule],
        "regulation_length_seconds": spec.regulation_length,
        "tempo": float(tempo) if np.ndim(tempo) == 0 else np.asarray(tempo).tolist(),
        "point_values": {str(v): float(p) for v, p in spec.point_values.items()},
        "seed": spec.seed,
    }
