import json

import pytest

itlkit = pytest.importorskip("itlkit", reason="package not installed")

DOUBLE_NEG_NEXT = "(~ X p & X ~ ~ p) -> (X q | ~ X q)"


def test_normalize_and_closure():
    assert itlkit.normalize("p→q") == itlkit.normalize("p -> q")
    assert set(itlkit.closure("p -> q")) == {"p", "q", "p -> q"}


def test_parse_error_is_value_error():
    with pytest.raises(ValueError):
        itlkit.normalize("p &")


def test_decide_valid():
    assert itlkit.decide("p -> p")["status"] == "VALID"
    assert itlkit.decide("X (p -> q) -> X p -> X q")["certificate"] is None


def test_decide_example_certificate():
    v = itlkit.decide(DOUBLE_NEG_NEXT)
    assert v["status"] == "NOT VALID"
    cert = v["certificate"]
    assert json.loads(cert)
    assert itlkit.validate_quasimodel(cert) == []
    u = itlkit.unwind(cert, 3)
    assert u["worlds"] > 0 and u["violations"] == []


def test_satisfiability():
    assert itlkit.decide("F bot", "satisfiability")["status"] == "UNSATISFIABLE"
    assert itlkit.decide("F p & ~ p", "satisfiability")["status"] == "SATISFIABLE"


def test_countermodel_and_evaluate():
    m = itlkit.find_countermodel("F p -> p", 2)
    assert m is not None
    worlds = json.loads(m)
    assert itlkit.evaluate(m, "F p -> p") != list(range(len(worlds["worlds"])))
    assert itlkit.find_countermodel("p -> p", 2) is None


def test_check_proof():
    ok = itlkit.check_proof("1. p -> p ; IPC\n2. X (p -> p) ; NEC 1\n")
    assert ok["accepted"]
    bad = itlkit.check_proof("1. p ; IPC\n")
    assert not bad["accepted"] and bad["bad_line"] == 1


def test_translate():
    assert itlkit.translate("p -> q") == "I (I p -> I q)"
