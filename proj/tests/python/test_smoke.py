import json
import math
import os
from pathlib import Path

import pytest

import tlexplain

ROOT = Path(__file__).resolve().parents[2]
CORPUS = ROOT / "data" / "mini-flights"
AUC_CSV = ROOT / "tests" / "fixtures" / "mini-flights.auc.csv"


def test_statistics():
    r = tlexplain.pearson([1, 2, 3, 4, 5], [2, 1, 4, 3, 7])
    assert r == pytest.approx(12 / math.sqrt(212), abs=1e-12)
    assert tlexplain.p_value(0.444, 20) == pytest.approx(0.0498, abs=5e-4)
    assert tlexplain.auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]) == 0.75
    with pytest.raises(ValueError):
        tlexplain.p_value(0.5, 2)


def test_change_rates():
    rates = tlexplain.change_rates(["A(x)", "B(x)", "r(x,y)"], ["B(x)", "C(y)"])
    assert rates["d_new"] == pytest.approx(1 / 2)
    assert rates["d_obs"] == pytest.approx(2 / 3)
    assert rates["d_inv"] == pytest.approx(1 / 4)
    counted = tlexplain.change_rates_from_counts(25180, 13412, 11419, 23187, 1193, 38592)
    assert counted["d_obs"] == pytest.approx(23187 / 25180)


def test_materialize():
    text = "SubClassOf(A B)\nClassAssert(A x)\n"
    closure = tlexplain.materialize(text)
    assert not closure["inconsistent"]
    assert closure["atoms"] == ["A(x)", "B(x)"]


def test_pipeline_on_bundled_corpus(tmp_path):
    options = {"auc_csv": str(AUC_CSV), "kb": "none"}
    p = tlexplain.Pipeline(str(CORPUS), str(tmp_path / "out"), options)
    assert len(p.domains()) == 8
    closures = p.materialize()
    assert all(closures[d] for d in p.domains())
    roots = p.mine_roots()
    assert set(roots) == set(p.domains())
    transfers = p.fti()
    assert len(transfers) == 56
    general = p.explain("general")
    assert sorted(g["evidence"] for g in general) == ["d_inv", "d_new", "d_obs"]
    obs = next(g for g in general if g["evidence"] == "d_obs")
    assert obs["gamma"] < 0 and obs["valid"]
    doc = json.loads(p.report("general", source="ATL-LAX", limit=2, format="json"))
    assert {t["source"] for t in doc["transfers"]} == {"ATL-LAX"}
    assert all(len(t["evidence"]) <= 2 for t in doc["transfers"])


def test_bad_options(tmp_path):
    with pytest.raises(tlexplain.DataError):
        tlexplain.Pipeline(str(CORPUS), str(tmp_path), {"no_such_key": 1})
    with pytest.raises(tlexplain.DataError):
        tlexplain.Pipeline(str(CORPUS), str(tmp_path), {"sigma": 2.0})
