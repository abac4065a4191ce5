"""Core domain types: sport configuration, scoring events, game logs.

A game is reduced to its ordered scoring events during regulation time.
Each event carries a game-clock second, the winning team tag ("r" or
"b"), and a positive integer point value. The lead is always measured
relative to team r, so a negative lead means b is ahead.

All types are immutable after construction and safe to share across
workers.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

TEAM_R = "r"
TEAM_B = "b"

_TEAM_SIGNS = {TEAM_R: 1, TEAM_B: -1}

#: Probability mass of a pmf may deviate from 1 by at most this much.
PMF_TOLERANCE = 1e-9

CONFIG_SCHEMA_VERSION = "1.0"

SPORT_IDS = ("CFB", "NFL", "NHL", "NBA", "custom")


def team_sign(team: str) -> int:
    """Map a team tag to its lead contribution (+1 for r, -1 for b)."""
    try:
        return _TEAM_SIGNS[team]
    except KeyError:
        raise ValueError(f"unknown team tag {team!r}, expected 'r' or 'b'") from None


def require_schema_major(version: str, expected: str, context: str) -> None:
    """Reject serialized artifacts whose schema major version is unknown."""
    major = str(version).split(".", 1)[0]
    expected_major = expected.split(".", 1)[0]
    if major != expected_major:
        raise ValueError(
            f"{context}: unsupported schema version {version!r} "
            f"(supported major: {expected_major})"
        )


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write text to `path` via a temp file in the same directory, then rename."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _validated_point_values(point_values: Mapping[int, float]) -> Mapping[int, float]:
    if not point_values:
        raise ValueError("point_values must be non-empty")
    cleaned: dict[int, float] = {}
    for value, prob in point_values.items():
        v = int(value)
        if v != value or v < 1:
            raise ValueError(f"point value {value!r} is not a positive integer")
        p = float(prob)
        if p < 0.0:
            raise ValueError(f"point value {v} has negative probability {p}")
        cleaned[v] = p
    total = sum(cleaned.values())
    if abs(total - 1.0) > PMF_TOLERANCE:
        raise ValueError(f"point value probabilities sum to {total}, expected 1")
    return MappingProxyType(dict(sorted(cleaned.items())))


@dataclass(frozen=True)
class SportConfig:
    """Static description of one sport's scoring rules.

    Attributes:
        sport_id: One of CFB, NFL, NHL, NBA, or "custom".
        regulation_length: Regulation clock length T in seconds. Game
            time is the closed interval of seconds [0, T]; events at
            exactly T (buzzer events) count, events beyond T are
            overtime and are never modeled.
        period_ends: Ascending second marks partitioning [0, T] into
            quarters or periods; the last entry equals T.
        point_values: Probability distribution over the positive integer
            point values a single scoring event can be worth.
        lead_truncation: Bound Lmax for the lead-size state space used
            by the prediction chain; must cover at least one event
            (Lmax >= max point value).
    """

    sport_id: str
    regulation_length: int
    period_ends: tuple[int, ...]
    point_values: Mapping[int, float]
    lead_truncation: int

    def __post_init__(self) -> None:
        if self.sport_id not in SPORT_IDS:
            raise ValueError(f"sport_id must be one of {SPORT_IDS}, got {self.sport_id!r}")
        T = int(self.regulation_length)
        if T <= 0:
            raise ValueError("regulation_length must be positive")
        object.__setattr__(self, "regulation_length", T)
        ends = tuple(int(e) for e in self.period_ends)
        if not ends or any(b <= a for a, b in zip((0,) + ends, ends)):
            raise ValueError("period_ends must be strictly ascending and positive")
        if ends[-1] != T:
            raise ValueError("last period end must equal regulation_length")
        object.__setattr__(self, "period_ends", ends)
        object.__setattr__(self, "point_values", _validated_point_values(self.point_values))
        cap = int(self.lead_truncation)
        if cap < max(self.point_values):
            raise ValueError(
                f"lead_truncation {cap} is below the maximum point value "
                f"{max(self.point_values)}"
            )
        object.__setattr__(self, "lead_truncation", cap)

    @property
    def point_support(self) -> np.ndarray:
        return np.array(sorted(self.point_values), dtype=np.int64)

    @property
    def point_probs(self) -> np.ndarray:
        return np.array([self.point_values[v] for v in sorted(self.point_values)])


def _as_readonly(values, dtype) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype).copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class ScoringEvent:
    """One scoring event: game-clock second, winning team tag, point value."""

    t: int
    team: str
    points: int

    def __post_init__(self) -> None:
        if int(self.t) != self.t or self.t < 0:
            raise ValueError(f"event time must be a nonnegative integer second, got {self.t!r}")
        team_sign(self.team)
        if int(self.points) != self.points or self.points < 1:
            raise ValueError(f"points must be a positive integer, got {self.points!r}")
        object.__setattr__(self, "t", int(self.t))
        object.__setattr__(self, "points", int(self.points))

    @property
    def sign(self) -> int:
        return team_sign(self.team)


@dataclass(frozen=True, eq=False)
class GameLog:
    """One game's time-ordered, same-second-merged regulation scoring events.

    Events are stored as parallel arrays for fast aggregation:
    `times` (strictly increasing seconds), `teams` (+1 for r, -1 for b),
    and `points` (positive values). At most one event per second; the
    ingest layer performs the same-second merge.
    """

    game_id: str
    sport_id: str
    times: np.ndarray
    teams: np.ndarray
    points: np.ndarray

    def __post_init__(self) -> None:
        times = _as_readonly(self.times, np.int64)
        teams = _as_readonly(self.teams, np.int8)
        points = _as_readonly(self.points, np.int64)
        if not (len(times) == len(teams) == len(points)):
            raise ValueError("times, teams, and points must have equal length")
        if len(times) and times[0] < 0:
            raise ValueError("event times must be nonnegative")
        if np.any(np.diff(times) <= 0):
            raise ValueError("event times must be strictly increasing (merge same-second events)")
        if np.any(np.abs(teams) != 1):
            raise ValueError("teams must be encoded as +1 (r) or -1 (b)")
        if np.any(points < 1):
            raise ValueError("points must be positive integers")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "teams", teams)
        object.__setattr__(self, "points", points)

    @classmethod
    def from_events(cls, game_id: str, sport_id: str, events: Iterable[ScoringEvent]) -> GameLog:
        evs = list(events)
        return cls(
            game_id=game_id,
            sport_id=sport_id,
            times=[e.t for e in evs],
            teams=[e.sign for e in evs],
            points=[e.points for e in evs],
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GameLog):
            return NotImplemented
        return (
            self.game_id == other.game_id
            and self.sport_id == other.sport_id
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.teams, other.teams)
            and np.array_equal(self.points, other.points)
        )

    def __len__(self) -> int:
        return len(self.times)

    @property
    def n_events(self) -> int:
        return len(self.times)

    @property
    def signed_points(self) -> np.ndarray:
        """Lead increments per event: +points for r, -points for b."""
        return self.teams.astype(np.int64) * self.points

    def events(self) -> Iterator[ScoringEvent]:
        for t, s, p in zip(self.times, self.teams, self.points):
            yield ScoringEvent(int(t), TEAM_R if s > 0 else TEAM_B, int(p))

    def final_lead(self) -> int:
        return int(self.signed_points.sum())

    def winner(self) -> str | None:
        """Regulation winner tag, or None for a tie."""
        lead = self.final_lead()
        if lead > 0:
            return TEAM_R
        if lead < 0:
            return TEAM_B
        return None

    def swap_teams(self) -> GameLog:
        """Relabel r as b and vice versa; negates the lead everywhere."""
        return GameLog(self.game_id, self.sport_id, self.times, -self.teams, self.points)


@dataclass(frozen=True, eq=False)
class LeadTrajectory:
    """Lead size sampled on a regular clock grid.

    The lead starts at 0, changes only at event seconds, and each jump
    equals the event's signed point value.
    """

    times: np.ndarray
    leads: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "times", _as_readonly(self.times, np.int64))
        object.__setattr__(self, "leads", _as_readonly(self.leads, np.int64))
        if len(self.times) != len(self.leads):
            raise ValueError("times and leads must have equal length")


_BUILTIN_SPECS: dict[str, dict] = {
    "CFB": {
        "regulation_length": 3600,
        "period_ends": (900, 1800, 2700, 3600),
        "point_values": {2: 0.0113, 3: 0.1702, 6: 0.0708, 7: 0.7058, 8: 0.0419},
        "lead_truncation": 100,
    },
    "NFL": {
        "regulation_length": 3600,
        "period_ends": (900, 1800, 2700, 3600),
        "point_values": {2: 0.0083, 3: 0.3055, 6: 0.0308, 7: 0.6222, 8: 0.0332},
        "lead_truncation": 100,
    },
    "NHL": {
        "regulation_length": 3600,
        "period_ends": (1200, 2400, 3600),
        "point_values": {1: 1.0},
        "lead_truncation": 15,
    },
    "NBA": {
        "regulation_length": 2880,
        "period_ends": (720, 1440, 2160, 2880),
        "point_values": {1: 0.0941, 2: 0.7373, 3: 0.1647, 4: 0.0029, 5: 0.0009, 6: 0.0001},
        "lead_truncation": 100,
    },
}

BUILTIN_SPORTS = tuple(_BUILTIN_SPECS)


def builtin_config(sport_id: str) -> SportConfig:
    """Return the built-in configuration for CFB, NFL, NHL, or NBA."""
    key = str(sport_id).upper()
    if key not in _BUILTIN_SPECS:
        raise ValueError(f"no built-in sport {sport_id!r}; known: {BUILTIN_SPORTS}")
    return SportConfig(sport_id=key, **_BUILTIN_SPECS[key])


def config_for_games(games: Sequence[GameLog], config: SportConfig | None = None) -> SportConfig:
    """Resolve the configuration shared by a corpus.

    An explicit `config` wins. Otherwise the corpus must be non-empty,
    single-sport, and use a built-in sport id.
    """
    if config is not None:
        return config
    if not games:
        raise ValueError("empty corpus and no explicit SportConfig given")
    sport_ids = {g.sport_id for g in games}
    if len(sport_ids) != 1:
        raise ValueError(f"corpus mixes sports {sorted(sport_ids)}; pass an explicit config")
    (sport_id,) = sport_ids
    if sport_id.upper() not in _BUILTIN_SPECS:
        raise ValueError(f"sport {sport_id!r} has no built-in config; pass one explicitly")
    return builtin_config(sport_id)


def lead_at(game: GameLog, t: int, regulation_length: int | None = None) -> int:
    """Lead of team r at second `t`, counting all events with time <= t.

    This is a right-continuous step function of t. The upper bound is
    checked against `regulation_length` when given, or against the
    built-in config when the game's sport id has one.
    """
    if regulation_length is None and game.sport_id.upper() in _BUILTIN_SPECS:
        regulation_length = _BUILTIN_SPECS[game.sport_id.upper()]["regulation_length"]
    if t < 0 or (regulation_length is not None and t > regulation_length):
        raise ValueError(f"time {t} outside regulation [0, {regulation_length}]")
    idx = int(np.searchsorted(game.times, t, side="right"))
    return int(game.signed_points[:idx].sum())


def lead_trajectory(
    game: GameLog,
    regulation_length: int | None = None,
    sample_every: int = 1,
) -> LeadTrajectory:
    """Sample the lead on a regular grid 0, step, 2*step, ..., T."""
    config_T = regulation_length
    if config_T is None:
        config_T = config_for_games([game]).regulation_length
    if sample_every < 1:
        raise ValueError("sample_every must be >= 1")
    grid = np.arange(0, config_T + 1, sample_every, dtype=np.int64)
    if game.n_events == 0:
        return LeadTrajectory(times=grid, leads=np.zeros(len(grid), dtype=np.int64))
    cum = np.cumsum(game.signed_points)
    idx = np.searchsorted(game.times, grid, side="right")
    leads = np.where(idx > 0, cum[np.maximum(idx - 1, 0)], 0)
    return LeadTrajectory(times=grid, leads=leads)


# --------------------------------------------------------------------------
# Sport config JSON interchange
# --------------------------------------------------------------------------

def config_to_dict(config: SportConfig) -> dict:
    return {
        "schema_version": CONFIG_SCHEMA_VERSION,
        "sport_id": config.sport_id,
        "regulation_length_seconds": config.regulation_length,
        "period_ends": list(config.period_ends),
        "point_values": {str(v): p for v, p in config.point_values.items()},
        "lead_truncation": config.lead_truncation,
    }


def config_from_dict(data: Mapping) -> SportConfig:
    require_schema_major(data.get("schema_version", "0"), CONFIG_SCHEMA_VERSION, "sport config")
    return SportConfig(
        sport_id=data["sport_id"],
        regulation_length=data["regulation_length_seconds"],
        period_ends=tuple(data["period_ends"]),
        point_values={int(v): float(p) for v, p in data["point_values"].items()},
        lead_truncation=data["lead_truncation"],
    )


def save_config(config: SportConfig, path: str | os.PathLike) -> None:
    atomic_write_text(path, json.dumps(config_to_dict(config), indent=2, sort_keys=True) + "\n")


def load_config(path: str | os.PathLike) -> SportConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))
