"""JSON configuration documents and dotted-name overrides."""

from __future__ import annotations

import copy
import json
from typing import Any, Iterable

from .errors import ConfigurationError
from .harness import EpisodeConfig
from .model import BanditInstance

DEFAULTS: dict[str, Any] = {
    "instance": {
        "means": [0.9, 0.8, 0.7, 0.6, 0.5],
        "sigma": 0.1,
        "reward_family": "gaussian",
    },
    "victim": "ucb_regret",
    "attack_enabled": True,
    "delta0": 0.2,
    "delta": 0.05,
    "bai_beta": 2.0,
    "stop_ratio_override": None,
    "horizon": 10000,
    "max_rounds": None,
    "use_stopping_rule": True,
    "seed": 0,
    "trials": 200,
    "campaign_seed": 0,
}

_EPISODE_KEYS = (
    "victim", "attack_enabled", "delta0", "delta", "bai_beta",
    "stop_ratio_override", "horizon", "max_rounds", "use_stopping_rule", "seed",
)


def load_config(path=None) -> dict:
    doc = copy.deepcopy(DEFAULTS)
    if path is None:
        return doc
    with open(path) as fh:
        try:
            user = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(user, dict):
        raise ConfigurationError("config file must hold a JSON object")
    for key, value in _flatten(user):
        set_dotted(doc, key, value)
    return doc


def _flatten(d: dict, prefix: str = "") -> Iterable[tuple[str, Any]]:
    for key, value in d.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            yield from _flatten(value, name + ".")
        else:
            yield name, value


def set_dotted(doc: dict, name: str, value: Any) -> None:
    """Set ``doc['a']['b'] = value`` for ``name='a.b'``; unknown keys are rejected."""
    parts = name.split(".")
    node = doc
    for part in parts[:-1]:
        if not isinstance(node.get(part), dict):
            raise ConfigurationError(f"{name}: unknown configuration field")
        node = node[part]
    if parts[-1] not in node:
        raise ConfigurationError(f"{name}: unknown configuration field")
    node[parts[-1]] = value


def get_dotted(doc: dict, name: str) -> Any:
    node = doc
    for part in name.split("."):
        if not isinstance(node, dict) or part not in node:
            raise ConfigurationError(f"{name}: unknown configuration field")
        node = node[part]
    return node


def parse_value(text: str) -> Any:
    """JSON literal if it parses, comma list of numbers, else the raw string."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    if "," in text:
        try:
            return [float(x) for x in text.split(",")]
        except ValueError:
            pass
    return text


def apply_overrides(doc: dict, extra_args: list[str]) -> dict:
    """Apply ``--dotted.name value`` / ``--dotted.name=value`` pairs."""
    i = 0
    while i < len(extra_args):
        arg = extra_args[i]
        if not arg.startswith("--"):
            raise ConfigurationError(f"unexpected argument {arg!r}")
        name = arg[2:]
        if "=" in name:
            name, text = name.split("=", 1)
            i += 1
        else:
            if i + 1 >= len(extra_args):
                raise ConfigurationError(f"{name}: missing value")
            text = extra_args[i + 1]
            i += 2
        set_dotted(doc, name.replace("-", "_"), parse_value(text))
    return doc


def _field(name: str, fn, *args):
    try:
        return fn(*args)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"{name}: {exc}") from None


def episode_config(doc: dict) -> EpisodeConfig:
    """Build a validated :class:`EpisodeConfig`, naming the offending field on error."""
    inst_doc = doc["instance"]
    means = inst_doc.get("means")
    if not isinstance(means, list) or not all(isinstance(m, (int, float)) for m in means):
        raise ConfigurationError("instance.means: expected a list of numbers")
    instance = _field(
        "instance", BanditInstance,
        tuple(means), _num("instance.sigma", inst_doc.get("sigma")), inst_doc.get("reward_family"),
    )
    kwargs = {key: doc[key] for key in _EPISODE_KEYS}
    for key in ("delta0", "delta", "bai_beta"):
        kwargs[key] = _num(key, kwargs[key])
    for key in ("horizon", "max_rounds", "seed"):
        if kwargs[key] is not None:
            kwargs[key] = _int(key, kwargs[key])
    if kwargs["stop_ratio_override"] is not None:
        kwargs["stop_ratio_override"] = _num("stop_ratio_override", kwargs["stop_ratio_override"])
    for key in ("attack_enabled", "use_stopping_rule"):
        if not isinstance(kwargs[key], bool):
            raise ConfigurationError(f"{key}: expected true or false")
    if kwargs["victim"] not in ("ucb_regret", "ucb_bai"):
        raise ConfigurationError("victim: expected 'ucb_regret' or 'ucb_bai'")
    try:
        return EpisodeConfig(instance=instance, **kwargs)
    except ConfigurationError as exc:
        raise ConfigurationError(f"config: {exc}") from None


def _num(name: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"{name}: expected a number, got {value!r}")
    return float(value)


def _int(name: str, value) -> int:
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"{name}: expected an integer, got {value!r}")
    return value


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` with ``stop`` included, or a comma list."""
    if ":" not in text:
        try:
            return [float(x) for x in text.split(",")]
        except ValueError:
            raise ConfigurationError(f"grid: cannot parse {text!r}") from None
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise ConfigurationError(f"grid: expected start:stop:step, got {text!r}") from None
    if step <= 0 or stop < start:
        raise ConfigurationError("grid: need step > 0 and stop >= start")
    n = int(round((stop - start) / step)) + 1
    return [round(start + i * step, 12) for i in range(n)]
