"""Parsing, preprocessing (overtime filter, same-second merge), round trips."""

import numpy as np
import pytest

import scoredyn as sd
from scoredyn.ingest import IngestError, render_event_file

HEADER = "sport,game_id,team,t,points\n"


def write_csv(tmp_path, rows, name="games.csv"):
    path = tmp_path / name
    path.write_text(HEADER + "".join(f"{r}\n" for r in rows), encoding="utf-8")
    return path


class TestParsing:
    def test_single_row(self, tmp_path):
        path = write_csv(tmp_path, ["nfl,g1,r,10,7"])
        games = sd.parse_event_file(path)
        assert len(games) == 1
        assert games[0].game_id == "g1"
        assert games[0].n_events == 1
        assert list(games[0].times) == [10]
        assert list(games[0].points) == [7]

    def test_overtime_filtered(self, tmp_path):
        path = write_csv(tmp_path, ["nfl,g1,r,3610,7"])
        games = sd.parse_event_file(path)
        assert len(games) == 1
        assert games[0].n_events == 0

    def test_buzzer_event_retained(self, tmp_path):
        path = write_csv(tmp_path, ["nfl,g1,r,3600,7"])
        games = sd.parse_event_file(path)
        assert games[0].n_events == 1

    def test_same_second_same_team_merged(self, tmp_path):
        path = write_csv(tmp_path, ["nfl,g1,r,10,2", "nfl,g1,r,10,1"])
        games = sd.parse_event_file(path)
        assert games[0].n_events == 1
        assert list(games[0].times) == [10]
        assert list(games[0].points) == [3]

    def test_same_second_cross_team_netted(self, tmp_path):
        path = write_csv(tmp_path, ["nfl,g1,r,10,7", "nfl,g1,b,10,3"])
        games = sd.parse_event_file(path)
        assert games[0].n_events == 1
        assert list(games[0].teams) == [1]
        assert list(games[0].points) == [4]

    def test_same_second_net_zero_dropped(self, tmp_path):
        path = write_csv(tmp_path, ["nhl,g1,r,10,1", "nhl,g1,b,10,1"])
        games = sd.parse_event_file(path)
        assert games[0].n_events == 0

    def test_home_away_mapped(self, tmp_path):
        path = write_csv(tmp_path, ["nfl,g1,home,10,7", "nfl,g1,away,20,3"])
        games = sd.parse_event_file(path)
        assert list(games[0].teams) == [1, -1]

    def test_events_sorted_by_time(self, tmp_path):
        path = write_csv(tmp_path, ["nfl,g1,r,500,3", "nfl,g1,b,10,7"])
        games = sd.parse_event_file(path)
        assert list(games[0].times) == [10, 500]

    def test_multiple_games_grouped(self, tmp_path):
        path = write_csv(tmp_path, ["nfl,g1,r,10,7", "nfl,g2,b,20,3", "nfl,g1,b,30,3"])
        games = sd.parse_event_file(path)
        assert [g.game_id for g in games] == ["g1", "g2"]
        assert games[0].n_events == 2

    def test_jsonl_matches_csv(self, tmp_path):
        csv_path = write_csv(tmp_path, ["nfl,g1,r,10,7", "nfl,g1,b,500,3"])
        jsonl_path = tmp_path / "games.jsonl"
        jsonl_path.write_text(
            '{"sport": "nfl", "game_id": "g1", "team": "r", "t": 10, "points": 7}\n'
            '{"sport": "nfl", "game_id": "g1", "team": "b", "t": 500, "points": 3}\n',
            encoding="utf-8",
        )
        assert sd.parse_event_file(csv_path) == sd.parse_event_file(jsonl_path)

    def test_custom_sport_config(self, tmp_path):
        cfg = sd.SportConfig("custom", 100, (100,), {1: 1.0}, 10)
        path = write_csv(tmp_path, ["tiny,g1,r,50,1", "tiny,g1,b,150,1"])
        games = sd.parse_event_file(path, configs={"tiny": cfg})
        assert games[0].n_events == 1  # t=150 is overtime for T=100


class TestParseErrors:
    def test_malformed_row_names_line_and_field(self, tmp_path):
        path = write_csv(tmp_path, ["nfl,g1,r,10,7", "nfl,g2,r,abc,7"])
        with pytest.raises(IngestError, match=r"line 3: field 't'"):
            sd.parse_event_file(path)

    def test_unknown_sport_tag(self, tmp_path):
        path = write_csv(tmp_path, ["curling,g1,r,10,1"])
        with pytest.raises(IngestError, match="unknown sport tag"):
            sd.parse_event_file(path)

    def test_negative_points(self, tmp_path):
        path = write_csv(tmp_path, ["nfl,g1,r,10,-3"])
        with pytest.raises(IngestError, match="points must be positive"):
            sd.parse_event_file(path)

    def test_negative_time(self, tmp_path):
        path = write_csv(tmp_path, ["nfl,g1,r,-5,3"])
        with pytest.raises(IngestError, match="negative time"):
            sd.parse_event_file(path)

    def test_bad_team_tag(self, tmp_path):
        path = write_csv(tmp_path, ["nfl,g1,visitor,10,3"])
        with pytest.raises(IngestError, match="unknown team tag"):
            sd.parse_event_file(path)

    def test_wrong_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n", encoding="utf-8")
        with pytest.raises(IngestError, match="expected columns"):
            sd.parse_event_file(path)


class TestRoundTrip:
    def test_parse_write_parse_identical(self, tmp_path):
        path = write_csv(
            tmp_path,
            ["nfl,g1,r,10,7", "nfl,g1,b,500,3", "nfl,g2,home,20,2", "nhl,g3,away,100,1"],
        )
        games = sd.parse_event_file(path)
        out = tmp_path / "out.csv"
        sd.write_event_file(games, out)
        assert sd.parse_event_file(out) == games

    def test_canonical_form_is_idempotent(self, tmp_path):
        path = write_csv(tmp_path, ["nfl,g1,b,500,3", "nfl,g1,r,10,7"])
        games = sd.parse_event_file(path)
        out = tmp_path / "canon.csv"
        sd.write_event_file(games, out)
        again = sd.parse_event_file(out)
        out2 = tmp_path / "canon2.csv"
        sd.write_event_file(again, out2)
        assert out.read_bytes() == out2.read_bytes()
        assert render_event_file(again) == out.read_text(encoding="utf-8")

    def test_jsonl_round_trip(self, tmp_path):
        path = write_csv(tmp_path, ["nba,g1,r,10,2", "nba,g1,b,20,3"])
        games = sd.parse_event_file(path)
        out = tmp_path / "out.jsonl"
        sd.write_event_file(games, out)
        assert sd.parse_event_file(out) == games

    def test_output_events_never_exceed_input_records(self, tmp_path):
        rows = ["nfl,g1,r,10,7", "nfl,g1,r,10,3", "nfl,g1,b,20,2", "nfl,g1,r,9999,7"]
        path = write_csv(tmp_path, rows)
        games = sd.parse_event_file(path)
        assert sum(g.n_events for g in games) <= len(rows)


class TestValidateCorpus:
    def test_empty_corpus_zero_counts(self):
        report = sd.validate_corpus([])
        assert report.n_games == 0
        assert report.n_events == 0
        assert report.events_per_game == 0.0

    def test_counts_and_mean(self):
        games = [
            sd.GameLog("g1", "NFL", [10, 20], [1, -1], [7, 3]),
            sd.GameLog("g2", "NFL", [15], [1], [7]),
        ]
        report = sd.validate_corpus(games)
        assert report.n_games == 2
        assert report.n_events == 3
        assert report.events_per_game == pytest.approx(1.5)
        assert report.per_sport["NFL"].n_games == 2

    def test_corpus_totals_give_published_events_per_game(self):
        # 2,654 games holding 19,476 events average 7.34 events per game.
        mean = 19476 / 2654
        assert mean == pytest.approx(7.34, abs=0.005)

    def test_out_of_support_points_reported(self):
        games = [sd.GameLog("g1", "NHL", [10], [1], [5])]
        report = sd.validate_corpus(games)
        assert any("outside configured support" in f for f in report.failures)

    def test_synthetic_corpus_mean_events(self):
        # Monte Carlo oracle: flat tempo at rate 0.002 over seconds
        # 1..3600 gives mean events per game 0.002 * 3600 = 7.2.
        spec = sd.default_league(
            n_teams=4, n_games=1000, regulation_length=3600, rate=0.002, seed=5
        )
        games = sd.generate_league(spec)
        report = sd.validate_corpus(games, configs={"custom": sd.league_config(spec)})
        se = np.sqrt(7.2 / 1000)
        assert abs(report.events_per_game - 7.2) < 3 * se
