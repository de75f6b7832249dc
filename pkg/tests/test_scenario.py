import json

import pytest

from chainalg.rings import GF
from chainalg import scenario as sc
from chainalg.fixtures import TruncationWindow, make_fixture
from chainalg.bialgebra import check_axioms


MINIMAL = {
    "schema_version": 1,
    "kind": "bialgebra",
    "ring": "Z",
    "module": {"basis": [{"name": "e", "degree": 0}]},
    "mu": {"degree": 0, "entries": [{"in": ["e", "e"], "out": [["1", "e"]]}]},
    "lambda": {"degree": -1, "entries": []},
    "eta": [["1", "e"]],
}


def test_minimal_scenario_passes_axioms():
    scn = sc.ingest(json.dumps(MINIMAL))
    assert scn.kind == "bialgebra"
    rep = check_axioms(scn.payload)
    assert rep.passed, rep.describe()


def test_default_checks_per_kind():
    scn = sc.ingest(dict(MINIMAL))
    assert scn.checks == ("axioms", "lambda-eta")


def test_unknown_check_rejected_with_path():
    doc = dict(MINIMAL)
    doc["checks"] = ["axioms", "nope"]
    with pytest.raises(sc.SchemaError) as ei:
        sc.ingest(doc)
    assert ei.value.path == "$.checks[1]"


def test_inhomogeneous_entry_rejected_with_path():
    doc = json.loads(json.dumps(MINIMAL))
    doc["module"]["basis"].append({"name": "x", "degree": 2})
    doc["mu"]["entries"].append({"in": ["x", "x"], "out": [["1", "e"]]})
    with pytest.raises(sc.SchemaError) as ei:
        sc.ingest(doc)
    assert "inhomogeneous" in ei.value.message
    assert ei.value.path == "$.mu.entries[1].out"


def test_unknown_basis_name_rejected():
    doc = json.loads(json.dumps(MINIMAL))
    doc["eta"] = [["1", "ghost"]]
    with pytest.raises(sc.SchemaError) as ei:
        sc.ingest(doc)
    assert "ghost" in ei.value.message


def test_bad_coefficient_rejected():
    doc = json.loads(json.dumps(MINIMAL))
    doc["eta"] = [["seven", "e"]]
    with pytest.raises(sc.SchemaError) as ei:
        sc.ingest(doc)
    assert ei.value.path.startswith("$.eta")


def test_bad_json_reports_position():
    with pytest.raises(sc.SchemaError) as ei:
        sc.ingest("{not json")
    assert "line" in ei.value.message


def test_version_gate():
    doc = dict(MINIMAL)
    doc["schema_version"] = 2
    with pytest.raises(sc.SchemaError):
        sc.ingest(doc)


def test_ring_parse():
    doc = json.loads(json.dumps(MINIMAL))
    doc["ring"] = "GF(5)"
    scn = sc.ingest(doc)
    assert scn.ring == GF(5)
    doc["ring"] = "GF(6)"
    with pytest.raises(sc.SchemaError):
        sc.ingest(doc)


def test_rational_coefficients_round_trip():
    doc = json.loads(json.dumps(MINIMAL))
    doc["ring"] = "Q"
    doc["mu"]["entries"][0]["out"] = [["3/4", "e"], ["1/4", "e"]]
    scn = sc.ingest(doc)
    assert check_axioms(scn.payload).passed  # 3/4 + 1/4 = 1


@pytest.mark.parametrize("name", ["lambda-s3", "omega-s1-minus"])
def test_fixture_export_round_trip(name):
    w = TruncationWindow(6)
    inst = make_fixture(name, w)
    doc = sc.export_bialgebra(inst)
    scn = sc.ingest(json.dumps(doc))
    assert sc.structurally_equal(inst, scn.payload)
    # and the re-ingested instance still passes its axioms
    assert check_axioms(scn.payload).passed


def test_export_json_stable():
    w = TruncationWindow(6)
    a = json.dumps(sc.export_bialgebra(make_fixture("lambda-s3", w)), sort_keys=True)
    b = json.dumps(sc.export_bialgebra(make_fixture("lambda-s3", w)), sort_keys=True)
    assert a == b


def test_cone_scenario():
    inst = make_fixture("lambda-s1-plus", TruncationWindow(4))
    doc = sc.export_bialgebra(inst)
    doc["kind"] = "cone"
    doc["n"] = 1
    doc["Q0"] = [["1", ["1", "A"]], ["-1", ["A", "1"]]]
    scn = sc.ingest(json.dumps(doc))
    assert scn.kind == "cone"
    assert scn.checks == ("components", "associativity", "assoc-infinitesimal")
    from chainalg.cone_product import derive_secondary_ops, cross_check_components

    assert cross_check_components(derive_secondary_ops(scn.payload)).passed


def test_complex_scenario_with_pair():
    doc = {
        "schema_version": 1,
        "kind": "complex",
        "ring": "Z",
        "module": {"basis": [{"name": "a", "degree": 0},
                             {"name": "b", "degree": 1}]},
        "differential": {"degree": -1,
                         "entries": [{"in": ["b"], "out": [["2", "a"]]}]},
        "top": 1,
        "pair": {
            "module": {"basis": [{"name": "m", "degree": 0}]},
            "differential": {"degree": -1, "entries": []},
            "map": {"degree": 0, "entries": [{"in": ["m"], "out": [["2", "a"]]}]},
        },
    }
    scn = sc.ingest(json.dumps(doc))
    bundle = scn.payload
    assert bundle.top == 1
    assert bundle.pair_map is not None
    from chainalg.complexes import homology

    assert homology(bundle.complex).torsion(0) == [2]


def test_non_chain_pair_map_rejected():
    doc = {
        "schema_version": 1,
        "kind": "complex",
        "ring": "Z",
        "module": {"basis": [{"name": "a", "degree": 0},
                             {"name": "b", "degree": 1}]},
        "differential": {"degree": -1,
                         "entries": [{"in": ["b"], "out": [["1", "a"]]}]},
        "pair": {
            "module": {"basis": [{"name": "m", "degree": 1}]},
            "differential": {"degree": -1, "entries": []},
            "map": {"degree": 0, "entries": [{"in": ["m"], "out": [["1", "b"]]}]},
        },
    }
    with pytest.raises(sc.SchemaError) as ei:
        sc.ingest(json.dumps(doc))
    assert ei.value.path == "$.pair.map"


def test_reverse_bivector_gate():
    from chainalg.fixtures import make_loop_circle

    inst = make_loop_circle(TruncationWindow(4), "minus")
    doc = sc.export_bialgebra(inst)
    doc["checks"] = ["axioms", "reverse-bivector-gate"]
    # lam_minus(eta) = 1(x)A - A(x)1
    doc["reverse_bivector"] = [["1", ["1", "A"]], ["-1", ["A", "1"]]]
    scn = sc.ingest(json.dumps(doc))
    assert scn.reverse_bivector is not None
    from chainalg.bialgebra import check_lemma_c_lambda_eta

    assert check_lemma_c_lambda_eta(scn.reverse_bivector, scn.payload).passed
    # requesting the gate without the field is a schema error
    doc2 = sc.export_bialgebra(inst)
    doc2["checks"] = ["reverse-bivector-gate"]
    with pytest.raises(sc.SchemaError, match="reverse_bivector"):
        sc.ingest(json.dumps(doc2))
