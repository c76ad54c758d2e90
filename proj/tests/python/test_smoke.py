import itertools
import json
import os
import subprocess

import pytest

import adlmine

SCRIPT = {
    "participant_id": "PY1",
    "start_date": "2022-03-01",
    "timezone": "UTC",
    "seed": 7,
    "noise_per_hour": 0.5,
    "noise_roles": ["HallMotion"],
    "activities": [
        {"adl": "Bathing", "start": "07:00", "jitter_minutes": 10, "duration_minutes": 20,
         "signature": ["BathroomHumidity", "BathroomMotion"]},
        {"adl": "EatingDrinking", "start": "12:30", "jitter_minutes": 15, "duration_minutes": 25,
         "signature": ["Fridge", "Kettle"]},
    ],
}


def annotations_from(truth_jsonl, before):
    lines = []
    for line in truth_jsonl.splitlines():
        t = json.loads(line)
        if t["start"] < before:
            lines.append(json.dumps({"participant_id": t["participant_id"], "adl": t["adl"],
                                     "from": t["start"], "to": t["end"], "verdict": "Confirmed"}))
    return "\n".join(lines) + "\n"


def test_frequent_itemsets_against_brute_force():
    tx = [["a", "b"], ["a", "c"], ["a", "b", "c"], ["b"], ["a", "b"]]
    got = {tuple(items): n for items, n in adlmine.frequent_itemsets(tx, 0.4)}
    universe = sorted({i for t in tx for i in t})
    want = {}
    for k in range(1, len(universe) + 1):
        for combo in itertools.combinations(universe, k):
            n = sum(1 for t in tx if set(combo) <= set(t))
            if n * 10 >= 4 * len(tx):
                want[combo] = n
    assert got == want
    assert adlmine.frequent_itemsets(tx, 0.4, jobs=4) == adlmine.frequent_itemsets(tx, 0.4)


def test_metrics_helpers():
    p, r, f = adlmine.prf(9, 1, 3)
    assert p == pytest.approx(0.9) and r == pytest.approx(0.75)
    assert f == pytest.approx(2 * p * r / (p + r))
    assert adlmine.prf(0, 0, 0) == (1.0, 1.0, 1.0)
    assert adlmine.proportions({"Bathing": 1, "Dressing": 3})["Dressing"] == 0.75
    assert adlmine.counts_per_day({"Bathing": 4}, 2.0)["Bathing"] == 2.0
    with pytest.raises(adlmine.EvalError):
        adlmine.proportions({"Bathing": 0})


def test_pipeline_round_trip():
    out = adlmine.synth(SCRIPT, 8)
    assert out == adlmine.synth(json.dumps(SCRIPT), 8)
    anns = annotations_from(out["truth_jsonl"], "2022-03-06")
    rules = adlmine.mine(out["events_csv"], anns, sensor_map=out["sensor_map_json"])
    assert rules["schema"] == "adlmine.ruleset/1"
    assert set(rules["rules"]) == {"Bathing", "EatingDrinking"}

    detected = adlmine.detect(out["events_csv"], rules, sensor_map=out["sensor_map_json"])
    assert {e["adl"] for e in detected} == {"Bathing", "EatingDrinking"}
    det_text = "".join(json.dumps(e) + "\n" for e in detected)
    tp, fp, fn = adlmine.match_events(det_text, out["truth_jsonl"], "Bathing", 60)
    assert (tp, fp, fn) == (8, 0, 0)

    doc = adlmine.timeline(out["events_csv"], rules, out["sensor_map_json"])
    assert doc["schema"] == "adlmine.timeline/1"
    assert doc["ruleset_id"] == rules["id"]
    assert len(doc["candidates"]) == len(detected)


def test_errors_surface_as_python_exceptions():
    bad = dict(SCRIPT, activities=[dict(SCRIPT["activities"][0], signature=["Toaster"])])
    with pytest.raises(adlmine.ScriptError):
        adlmine.synth(bad, 2)
    with pytest.raises(adlmine.IngestError):
        adlmine.detect("", json.dumps({"schema": "adlmine.ruleset/1"}))
    params = adlmine.default_params()
    assert params["min_support"] == 0.15


@pytest.mark.skipif("ADLMINE_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_help():
    r = subprocess.run([os.environ["ADLMINE_CLI"], "--help"], capture_output=True, text=True)
    assert r.returncode == 0
    assert "serve" in r.stdout
