"""CSV round logs, JSON documents and the shipped JSON schemas."""

from __future__ import annotations

import json
from importlib import resources

import numpy as np
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

CSV_HEADER = "t,arm,pre_reward,alpha,post_reward"
CSV_FMT = ["%d", "%d", "%.17g", "%.17g", "%.17g"]

SCHEMAS = {
    "config": "config.schema.json",
    "trial_summary": "trial_summary.schema.json",
    "bound_report": "bound_report.schema.json",
    "episode_summary": "episode_summary.schema.json",
    "campaign": "campaign.schema.json",
}


class CsvRoundWriter:
    """Streams per-round records; usable as ``run_episode(on_chunk=...)``."""

    def __init__(self, path):
        self._fh = open(path, "w", newline="")
        self._fh.write(CSV_HEADER + "\n")

    def __call__(self, first_round, arms, pre, alpha, post):
        if arms.size == 0:
            return
        t = np.arange(first_round, first_round + arms.size)
        rows = np.empty((arms.size, 5), dtype=object)
        rows[:, 0] = t
        rows[:, 1] = arms
        rows[:, 2] = pre
        rows[:, 3] = alpha
        rows[:, 4] = post
        np.savetxt(self._fh, rows, fmt=CSV_FMT, delimiter=",")

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_rounds_csv(path) -> dict[str, np.ndarray]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {
        "t": data[:, 0].astype(np.int64),
        "arm": data[:, 1].astype(np.int64),
        "pre_reward": data[:, 2],
        "alpha": data[:, 3],
        "post_reward": data[:, 4],
    }


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def write_json(path, doc) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(doc))


def _load_schemas() -> dict[str, dict]:
    root = resources.files("bandit_attack_lab") / "schemas"
    return {name: json.loads((root / fname).read_text()) for name, fname in SCHEMAS.items()}


def validator(kind: str) -> Draft202012Validator:
    schemas = _load_schemas()
    registry = Registry().with_resources(
        (s["$id"], Resource.from_contents(s)) for s in schemas.values()
    )
    return Draft202012Validator(schemas[kind], registry=registry)


def validate(doc, kind: str) -> None:
    """Raise ``jsonschema.ValidationError`` if ``doc`` does not match schema ``kind``."""
    validator(kind).validate(doc)
