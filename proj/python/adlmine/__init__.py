"""ADL rule mining and detection over home sensor logs."""

import json

from ._adlmine import (
    DomainError,
    EvalError,
    IngestError,
    MiningError,
    ScriptError,
    TimeError,
    counts_per_day,
    frequent_itemsets,
    match_events,
    prf,
    proportions,
)
from . import _adlmine


def default_params():
    return json.loads(_adlmine.default_params())


def synth(script, days):
    """Generate a synthetic participant. `script` is a dict or JSON text."""
    if not isinstance(script, str):
        script = json.dumps(script)
    return _adlmine.synth(script, days)


def mine(events, annotations_jsonl, params=None, sensor_map=None, format="csv", tz="UTC"):
    """Mine a participant rule set; returns the rule set as a dict."""
    text = _adlmine.mine(
        events,
        annotations_jsonl,
        None if params is None else json.dumps(params),
        None if sensor_map is None else _as_text(sensor_map),
        format,
        tz,
    )
    return json.loads(text)


def detect(events, ruleset, sensor_map=None, format="csv", tz="UTC"):
    """Detected ADL events as a list of dicts."""
    text = _adlmine.detect(events, _as_text(ruleset), None if sensor_map is None else _as_text(sensor_map), format, tz)
    return [json.loads(line) for line in text.splitlines() if line]


def timeline(events, ruleset=None, sensor_map=None, bucket_minutes=60, format="csv", tz="UTC"):
    text = _adlmine.timeline(
        events,
        None if ruleset is None else _as_text(ruleset),
        None if sensor_map is None else _as_text(sensor_map),
        bucket_minutes,
        format,
        tz,
    )
    return json.loads(text)


def _as_text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


__all__ = [
    "DomainError",
    "EvalError",
    "IngestError",
    "MiningError",
    "ScriptError",
    "TimeError",
    "counts_per_day",
    "default_params",
    "detect",
    "frequent_itemsets",
    "match_events",
    "mine",
    "prf",
    "proportions",
    "synth",
    "timeline",
]
