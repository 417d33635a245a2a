import json
import pathlib

import pytest

import natlog

ROOT = pathlib.Path(__file__).resolve().parents[2]
CORPUS = ROOT / "data" / "corpus"


def read(path):
    return path.read_text()


def test_normalize():
    assert natlog.normalize("(lam x:np. bark:vp x) john:np") == "bark:vp john:np"


def test_llf_first_reading():
    readings = natlog.llf(read(ROOT / "data" / "golden" / "rinse_derivation.json"), first=True)
    assert list(readings) == ["rinse"]
    assert len(readings["rinse"]) == 1
    assert readings["rinse"][0].startswith("no:q_dcl person:n")


def test_classify_corpus():
    records = natlog.classify(read(CORPUS / "problems.json"), read(CORPUS / "derivations.json"), parallel=4)
    assert len(records) == 30
    assert all(r["label"] == r["gold"] for r in records)
    assert records[10]["id"] == "c01" and records[10]["label"] == "C"


def test_classify_options():
    records = natlog.classify(read(CORPUS / "problems.json"), read(CORPUS / "derivations.json"), ral=2)
    pug = next(r for r in records if r["id"] == "c01")
    assert pug["label"] == "N" and pug["limit_hit"]


def test_prove_render():
    text = natlog.prove(["bark:vp john:np : T", "bark:vp john:np : F"])
    assert text.startswith("tableau closed, 1 rule applications")
    tree = natlog.prove(["bark:vp john:np : T"], format="json")
    assert tree["closed"] is False


def test_errors():
    with pytest.raises(natlog.NatlogError):
        natlog.prove(["bark:vp john:np : T"], ral=0)
    with pytest.raises(natlog.NatlogError):
        natlog.classify(json.dumps({"problems": [{"id": "x", "premises": ["missing"], "hypothesis": "missing"}]}))
