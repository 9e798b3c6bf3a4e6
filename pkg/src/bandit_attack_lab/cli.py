"""``bandit-attack-lab`` command line.

Every configuration field can be overridden with a flag of the same dotted
name, e.g. ``--instance.sigma 0.2 --delta0 0.7``.

Exit codes: 0 success, 2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import copy
import csv
import logging
import sys
from pathlib import Path

from . import output
from .bounds import bound_report, f_grid
from .config import apply_overrides, episode_config, get_dotted, load_config, parse_grid, set_dotted
from .errors import ConfigurationError
from .harness import run_campaign, run_episode, summarize

log = logging.getLogger("bandit_attack_lab")

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 2, 3
RECORD_LIMIT = 2_000_000


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bandit-attack-lab", description=__doc__.split("\n")[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="evaluate every closed-form bound for a configuration")
    b.add_argument("--config")
    b.add_argument("--t-star", action="store_true", help="fail unless the sample-complexity round exists")
    b.add_argument("--f-table", type=int, default=0, metavar="N", help="include N log-spaced f(t) values")
    b.add_argument("--out")

    s = sub.add_parser("simulate", help="run one episode, write rounds CSV and summary JSON")
    s.add_argument("--config")
    s.add_argument("--seed", type=int)
    s.add_argument("--out-dir", required=True)

    m = sub.add_parser("montecarlo", help="run a seeded campaign of episodes")
    m.add_argument("--config")
    m.add_argument("--trials", type=int)
    m.add_argument("--campaign-seed", type=int)
    m.add_argument("--out-dir", required=True)

    w = sub.add_parser("sweep", help="campaign per grid value of one parameter, one CSV row each")
    w.add_argument("--config")
    w.add_argument("--param", required=True)
    w.add_argument("--grid", required=True, help="start:stop:step (inclusive) or a comma list")
    w.add_argument("--trials", type=int)
    w.add_argument("--campaign-seed", type=int)
    w.add_argument("--out", required=True)
    return p


def _resolve(args, extra) -> dict:
    doc = load_config(args.config)
    apply_overrides(doc, extra)
    for flag, key in (("seed", "seed"), ("trials", "trials"), ("campaign_seed", "campaign_seed")):
        value = getattr(args, flag, None)
        if value is not None:
            doc[key] = value
    return doc


def cmd_bounds(args, doc) -> int:
    cfg = episode_config(doc)
    bc = cfg.bound_config()
    horizon = cfg.horizon if cfg.horizon is not None else cfg.rounds_cap
    report = bound_report(horizon, bc, f_grid(horizon, args.f_table) if args.f_table else ())
    if args.t_star and report.sample_complexity_round is None:
        print(
            f"error: sample-complexity round undefined: delta0={bc.delta0} does not exceed "
            f"3*sigma*sqrt((K-1)(1+alpha)) = {report.delta0_threshold:.6g}",
            file=sys.stderr,
        )
        return EXIT_CONFIG
    doc_out = {"config": cfg.to_dict(), "bounds": report.to_dict()}
    text = output.dumps(doc_out)
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text)
    return EXIT_OK


def cmd_simulate(args, doc) -> int:
    cfg = episode_config(doc)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "episode.csv"
    record = cfg.rounds_cap <= RECORD_LIMIT
    with output.CsvRoundWriter(csv_path) as sink:
        ep = run_episode(cfg, record=record, on_chunk=sink)
    stops_itself = cfg.victim.value == "ucb_bai" and cfg.use_stopping_rule
    horizon = ep.rounds if stops_itself else cfg.horizon
    summary = {
        "config": cfg.to_dict(),
        "summary": summarize(ep).to_dict(),
        "bounds": bound_report(max(horizon, 1), cfg.bound_config()).to_dict(),
        "csv": csv_path.name,
    }
    output.write_json(out_dir / "summary.json", summary)
    log.info("wrote %s rounds to %s", ep.rounds, csv_path)
    return EXIT_OK


def cmd_montecarlo(args, doc) -> int:
    cfg = episode_config(doc)
    result = run_campaign(cfg, int(doc["trials"]), int(doc["campaign_seed"]))
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = result.to_dict()
    output.validate(payload, "campaign")
    output.write_json(out_dir / "campaign.json", payload)
    return EXIT_OK


SWEEP_COLUMNS = [
    "param", "value", "trials", "delta0_threshold", "t_star", "lemma1_cap",
    "thm1_target_pulls_lb", "thm1_cost_ub", "mean_target_pulls", "mean_total_cost",
    "mean_stop_round", "event_E", "pull_bound", "cost_bound", "lemma1_clean_given_E",
    "winner_is_target", "winner_is_best", "target_stop_by_t_star", "ratio_bound", "error",
]


def cmd_sweep(args, doc) -> int:
    name = args.param.replace("-", "_")
    get_dotted(doc, name)
    grid = parse_grid(args.grid)
    rows = []
    for value in grid:
        point = copy.deepcopy(doc)
        current = get_dotted(doc, name)
        if isinstance(current, int) and not isinstance(current, bool) and float(value).is_integer():
            value = int(value)
        set_dotted(point, name, value)
        row = dict.fromkeys(SWEEP_COLUMNS, "")
        row.update(param=name, value=value, trials=point["trials"])
        try:
            cfg = episode_config(point)
            res = run_campaign(cfg, int(point["trials"]), int(point["campaign_seed"]))
        except ConfigurationError as exc:
            row["error"] = str(exc)
            rows.append(row)
            continue
        n = res.num_trials
        row["mean_target_pulls"] = sum(t.target_pulls for t in res.trials) / n
        row["mean_total_cost"] = sum(t.total_cost for t in res.trials) / n
        stops = [t.stop_round for t in res.trials if t.stop_round is not None]
        if stops:
            row["mean_stop_round"] = sum(stops) / len(stops)
        for key in ("delta0_threshold", "lemma1_cap", "thm1_target_pulls_lb", "thm1_cost_ub"):
            row[key] = res.bounds.get(key, "")
        row["t_star"] = res.bounds.get("sample_complexity_round", "")
        for key, rate in res.rates.items():
            if key in row:
                row[key] = rate
        rows.append({k: ("" if v is None else v) for k, v in row.items()})
    with open(args.out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    return EXIT_OK


COMMANDS = {
    "bounds": cmd_bounds,
    "simulate": cmd_simulate,
    "montecarlo": cmd_montecarlo,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    args, extra = _parser().parse_known_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        doc = _resolve(args, extra)
        return COMMANDS[args.command](args, doc)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
