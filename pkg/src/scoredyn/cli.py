"""Command-line pipeline: validate, fit, simulate, predict, eval, synth, report.

Every subcommand prints a one-line machine-parsable summary (key=value
tokens) on success and exits 0; data errors exit 1 with a diagnostic on
stderr; usage errors exit 2. All randomness flows from --seed, so runs
with identical flags produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import (
    IngestError,
    ModelSpec,
    balance_fractions,
    balance_null_distribution,
    build_chain,
    builtin_config,
    correlation_function,
    evaluate_predictability,
    events_per_game_distribution,
    fit_balance,
    fit_tempo,
    forecast,
    interarrival_distribution,
    lead_variance_curve,
    load_config,
    load_model,
    parse_event_file,
    save_model,
    validate_corpus,
    write_event_file,
)
from .core import atomic_write_text
from .synth import (
    default_league,
    generate_league,
    generate_restoring_league,
    league_truth,
)


def _write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _corpus_config(args, games):
    if getattr(args, "config", None):
        return load_config(args.config)
    if getattr(args, "sport", None):
        return builtin_config(args.sport)
    from .core import config_for_games

    return config_for_games(games)


def _cmd_validate(args) -> int:
    games = parse_event_file(args.infile, args.format)
    report = validate_corpus(games)
    for sport, summary in report.per_sport.items():
        print(
            f"sport={sport} games={summary.n_games} events={summary.n_events} "
            f"events_per_game={summary.events_per_game:.4f}"
        )
    for failure in report.failures:
        print(f"failure: {failure}", file=sys.stderr)
    print(f"validate ok {report.summary_line()}")
    return 0


def _cmd_fit(args) -> int:
    games = parse_event_file(args.infile, args.format)
    config = _corpus_config(args, games)
    tempo = fit_tempo(games, config)
    balance = fit_balance(games, config, min_samples=args.min_samples)
    save_model(args.out, config, tempo, balance)
    slope = balance.scoring.fit.slope
    print(
        f"fit ok sport={config.sport_id} games={len(games)} "
        f"lambda_hat={tempo.lambda_hat:.6g} "
        f"phi_slope={'none' if slope is None else f'{slope:.6g}'} out={args.out}"
    )
    return 0


def _cmd_simulate(args) -> int:
    artifact = load_model(args.model)
    spec = ModelSpec(
        tempo_kind=args.tempo,
        balance_kind=args.balance,
        tempo=artifact.tempo,
        balance=artifact.balance,
        config=artifact.config,
        seed=args.seed,
    )
    from .simulate import simulate_corpus

    games = simulate_corpus(spec, args.n_games)
    write_event_file(games, args.out, args.format)
    n_events = sum(g.n_events for g in games)
    print(
        f"simulate ok tempo={args.tempo} balance={args.balance} games={args.n_games} "
        f"events={n_events} seed={args.seed} out={args.out}"
    )
    return 0


def _cmd_predict(args) -> int:
    artifact = load_model(args.model)
    chain = build_chain(
        artifact.balance.phi, artifact.balance.point_values, artifact.config.lead_truncation
    )
    result = forecast(chain, args.lead, args.t, artifact.tempo.profile)
    print(
        f"predict ok lead={args.lead} t={args.t} "
        f"p_win_r={result.p_win_r:.6f} p_tie={result.p_tie:.6f} p_win_b={result.p_win_b:.6f}"
    )
    return 0


def _cmd_eval(args) -> int:
    games = parse_event_file(args.infile, args.format)
    config = _corpus_config(args, games)
    curve = evaluate_predictability(
        games,
        config,
        n_splits=args.splits,
        seed=args.seed,
        tie_mode=args.tie_mode,
    )
    _write_csv(
        Path(args.out),
        ["event_index", "auc_chain", "auc_leader", "n_games_scored"],
        zip(
            curve.event_index.tolist(),
            curve.auc_chain.tolist(),
            curve.auc_leader.tolist(),
            curve.n_games_scored.tolist(),
        ),
    )
    print(
        f"eval ok games={len(games)} splits={args.splits} "
        f"auc_chain_final={curve.auc_chain[-1]:.4f} out={args.out}"
    )
    return 0


def _cmd_synth(args) -> int:
    points = dict(builtin_config(args.points_sport).point_values)
    if args.kind == "league":
        spec = default_league(
            n_teams=args.n_teams,
            n_games=args.n_games,
            regulation_length=args.regulation,
            rate=args.rate,
            point_values=points,
            skill_sigma=args.skill_sigma,
            seed=args.seed,
        )
        games = generate_league(spec)
    else:
        spec = default_league(
            n_teams=2,
            n_games=args.n_games,
            regulation_length=args.regulation,
            rate=args.rate,
            point_values=points,
            seed=args.seed,
        )
        games = generate_restoring_league(spec, args.slope)
    write_event_file(games, args.out, args.format)
    if args.truth:
        truth = league_truth(spec)
        if args.kind == "restoring":
            truth["restoring_slope"] = args.slope
        atomic_write_text(args.truth, json.dumps(truth, sort_keys=True) + "\n")
    n_events = sum(g.n_events for g in games)
    print(
        f"synth ok kind={args.kind} games={args.n_games} events={n_events} "
        f"seed={args.seed} out={args.out}"
    )
    return 0


def _cmd_report(args) -> int:
    games = parse_event_file(args.infile, args.format)
    config = _corpus_config(args, games)
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)

    tempo = fit_tempo(games, config)
    balance = fit_balance(games, config, min_samples=args.min_samples)
    save_model(outdir / "model.json", config, tempo, balance)

    counts = events_per_game_distribution(games, config)
    _write_csv(
        outdir / "events_per_game.csv",
        ["events", "empirical_pmf", "poisson_pmf"],
        zip(counts.counts.tolist(), counts.empirical_pmf.tolist(), counts.reference_pmf.tolist()),
    )

    gaps = interarrival_distribution(games, config)
    _write_csv(
        outdir / "interarrival.csv",
        ["gap_seconds", "empirical_ccdf", "geometric_ccdf"],
        zip(gaps.gaps.tolist(), gaps.empirical_ccdf.tolist(), gaps.reference_ccdf.tolist()),
    )

    corr = correlation_function(games, args.correlation_lags)
    _write_csv(
        outdir / "gap_correlation.csv",
        ["lag", "correlation"],
        zip(range(1, len(corr) + 1), corr.tolist()),
    )

    _write_csv(
        outdir / "tempo_profile.csv",
        ["t", "event_probability"],
        zip(range(len(tempo.profile)), tempo.profile.tolist()),
    )

    c_hat = balance_fractions(games)
    null = balance_null_distribution(games, n_sims=args.null_sims, seed=args.seed)
    bins = np.linspace(0.0, 1.0, args.balance_bins + 1)
    emp_hist, _ = np.histogram(c_hat, bins=bins, density=True)
    null_hist, _ = np.histogram(null, bins=bins, density=True)
    centers = (bins[:-1] + bins[1:]) / 2
    _write_csv(
        outdir / "balance.csv",
        ["c_hat_bin", "empirical_density", "null_density"],
        zip(centers.tolist(), emp_hist.tolist(), null_hist.tolist()),
    )

    scoring = balance.scoring
    _write_csv(
        outdir / "lead_scoring.csv",
        ["lead", "phi", "n_observations"],
        zip(scoring.leads.tolist(), scoring.phi.tolist(), scoring.counts.tolist()),
    )

    grid_cols: dict[str, np.ndarray] = {}
    times = None
    for tempo_kind in ("bernoulli", "markov"):
        for balance_kind in ("bernoulli", "markov"):
            spec = ModelSpec(
                tempo_kind=tempo_kind,
                balance_kind=balance_kind,
                tempo=tempo,
                balance=balance,
                config=config,
                seed=args.seed,
            )
            curve = lead_variance_curve(
                spec, n_games=args.sim_games, sample_every=args.sample_every
            )
            grid_cols[f"sd_{tempo_kind[0]}{balance_kind[0]}"] = curve.sd
            times = curve.times
    from .simulate import lead_dispersion

    _, sd_emp, _ = lead_dispersion(games, config.regulation_length, args.sample_every)
    _write_csv(
        outdir / "lead_variance.csv",
        ["t", "sd_empirical", "sd_bb", "sd_bm", "sd_mb", "sd_mm"],
        zip(
            times.tolist(),
            sd_emp.tolist(),
            grid_cols["sd_bb"].tolist(),
            grid_cols["sd_bm"].tolist(),
            grid_cols["sd_mb"].tolist(),
            grid_cols["sd_mm"].tolist(),
        ),
    )

    curve = evaluate_predictability(
        games, config, n_splits=args.splits, seed=args.seed, tie_mode=args.tie_mode
    )
    _write_csv(
        outdir / "predictability.csv",
        ["event_index", "auc_chain", "auc_leader", "n_games_scored"],
        zip(
            curve.event_index.tolist(),
            curve.auc_chain.tolist(),
            curve.auc_leader.tolist(),
            curve.n_games_scored.tolist(),
        ),
    )
    print(f"report ok games={len(games)} sport={config.sport_id} out_dir={outdir}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scoredyn",
        description="Scoring-dynamics pipeline: fit, simulate, and predict game outcomes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, needs_out=True):
        p.add_argument("--in", dest="infile", required=True, help="input event-log file")
        p.add_argument("--format", choices=["csv", "jsonl"], default=None)
        p.add_argument("--sport", default=None, help="built-in sport id (cfb/nfl/nhl/nba)")
        p.add_argument("--config", default=None, help="path to a sport config JSON")
        if needs_out:
            p.add_argument("--out", required=True)

    p = sub.add_parser("validate", help="parse a corpus and report counts and failures")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--format", choices=["csv", "jsonl"], default=None)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("fit", help="fit tempo and balance models to a corpus")
    add_io(p)
    p.add_argument("--min-samples", type=int, default=50)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("simulate", help="simulate a corpus from a fitted model")
    p.add_argument("--model", required=True)
    p.add_argument("--tempo", choices=["bernoulli", "markov"], default="bernoulli")
    p.add_argument("--balance", choices=["bernoulli", "markov"], default="markov")
    p.add_argument("--n-games", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["csv", "jsonl"], default=None)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("predict", help="forecast win/tie/loss from a game state")
    p.add_argument("--model", required=True)
    p.add_argument("--lead", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("eval", help="out-of-sample predictability curves")
    add_io(p)
    p.add_argument("--splits", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tie-mode", choices=["exclude", "half"], default="exclude")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("synth", help="generate a ground-truth synthetic corpus")
    p.add_argument("--kind", choices=["league", "restoring"], default="league")
    p.add_argument("--n-teams", type=int, default=20)
    p.add_argument("--n-games", type=int, default=1000)
    p.add_argument("--regulation", type=int, default=3600)
    p.add_argument("--rate", type=float, default=0.002)
    p.add_argument("--skill-sigma", type=float, default=1.0)
    p.add_argument("--slope", type=float, default=-0.002)
    p.add_argument("--points-sport", default="nfl")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--truth", default=None, help="write ground-truth sidecar JSON here")
    p.add_argument("--format", choices=["csv", "jsonl"], default=None)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("report", help="regenerate every fitted curve from a corpus")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--format", choices=["csv", "jsonl"], default=None)
    p.add_argument("--sport", default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--splits", type=int, default=20)
    p.add_argument("--sim-games", type=int, default=100_000)
    p.add_argument("--sample-every", type=int, default=60)
    p.add_argument("--null-sims", type=int, default=100_000)
    p.add_argument("--balance-bins", type=int, default=51)
    p.add_argument("--correlation-lags", type=int, default=50)
    p.add_argument("--min-samples", type=int, default=50)
    p.add_argument("--tie-mode", choices=["exclude", "half"], default="exclude")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (IngestError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
