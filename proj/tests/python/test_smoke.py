"""Smoke tests for the python bindings.

The heavy correctness checks live in the C++ suites; these verify that the
binding surface works end to end: parsing, evidence, queries, statuses, the
reference oracle, the structure report, and error mapping.
"""

import os
import pathlib

import pytest

import capax

FIXTURES = pathlib.Path(os.environ["CAPAX_FIXTURE_DIR"])

TOL = 1e-9


def load(name, **kwargs):
    return capax.load(FIXTURES / name, **kwargs)


def test_minimal_prior_interval():
    model = load("minimal.json")
    iv = model.query("x=0")
    assert iv.lower == pytest.approx(0.3, abs=TOL)
    assert iv.upper == pytest.approx(0.8, abs=TOL)
    assert iv.status == "normal"
    assert model.propagated
    assert model.status == "normal"
    assert repr(iv).startswith("Interval(lower=0.300000000")


def test_variables_mapping():
    model = load("figure1_sensors.json")
    assert list(model.variables) == ["x", "y", "z"]
    assert model.variables["z"] == ["quake", "none"]


def test_evidence_and_posterior():
    model = load("x_copy.json")
    assert model.evidence_count == 0
    model.enter_evidence("y=0")
    assert model.evidence_count == 1
    iv = model.query("x=0")
    assert iv.lower == pytest.approx(1.0, abs=TOL)
    assert iv.upper == pytest.approx(1.0, abs=TOL)
    assert iv.status == "normal"
    total = model.total_evidence_bounds()
    assert total.lower == pytest.approx(0.5, abs=TOL)
    assert total.upper == pytest.approx(0.5, abs=TOL)


def test_vacuous_conditioning():
    model = load("figure1_sensors.json")
    model.enter_evidence("x=sound")
    iv = model.query("z=quake")
    assert iv.status == "vacuous"
    assert iv.lower == pytest.approx(0.0, abs=TOL)
    assert iv.upper == pytest.approx(1.0, abs=TOL)
    assert model.status == "vacuous_conditioning"


def test_contradictory_evidence():
    model = load("y_never_one.json")
    model.enter_evidence("y=1")
    model.propagate()
    assert model.status == "contradiction"
    assert model.query("x=0").status == "contradiction"


def test_round_trip():
    model = load("minimal.json")
    text = model.to_json()
    again = capax.parse_model(text)
    assert again == model
    assert again.to_json() == text


def test_flat_posterior_matches_engine():
    model = load("minimal.json")
    ref = capax.flat_posterior(model, "x=0", "x=0|x=1")
    assert ref.lower == pytest.approx(0.3, abs=TOL)
    assert ref.upper == pytest.approx(0.8, abs=TOL)
    engine = load("minimal.json").query("x=0")
    assert engine.lower == pytest.approx(ref.lower, abs=TOL)
    assert engine.upper == pytest.approx(ref.upper, abs=TOL)


def test_check_markov_report():
    report = capax.check_markov(load("figure1_sensors.json"))
    assert report["all_ok"]
    assert report["rectangular_core_ok"]
    assert len(report["m_factorizations"]) == 1
    assert report["m_factorizations"][0]["separator"] == ["z"]
    assert report["separator_partitions"][0]["partitions"]


def test_schema_errors():
    with pytest.raises(capax.SchemaError):
        capax.parse_model("not json")
    with pytest.raises(capax.SchemaError) as err:
        capax.parse_model("{}")
    assert "variables" in str(err.value)
    assert issubclass(capax.SchemaError, capax.Error)


def test_expression_error_carries_position():
    model = load("minimal.json")
    with pytest.raises(capax.ExpressionError) as err:
        model.query("x=")
    assert "position 2" in str(err.value)


def test_empty_finding_rejected():
    model = load("x_copy.json")
    with pytest.raises(capax.EvidenceError) as err:
        model.enter_evidence("x=0&x=1")
    assert "empty" in str(err.value)


def test_size_guard():
    with pytest.raises(capax.SizeGuardError):
        load("figure1_sensors.json", derive_guard=1)


def test_mismatched_pair_fails_verification():
    model = load("mismatched_pair.json")
    with pytest.raises(capax.ModelError):
        capax.flat_posterior(model, "x=0", "x=0|x=1")
