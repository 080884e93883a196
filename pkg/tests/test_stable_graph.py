import json
from pathlib import Path

import jsonschema
import pytest

from tropmorse import (StableGraph, are_isomorphic, contract,
                       edge_count_identity, enumerate_iso_classes, star,
                       total_genus, validate)

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "schemas"


def _schema(name):
    with open(SCHEMA_DIR / name) as fh:
        return json.load(fh)


def test_star_graphs_validate():
    g = star(3, 0)
    ok, bad = validate(g)
    assert ok, bad
    assert total_genus(g) == 0
    assert edge_count_identity(g)
    g = star(1, 0, loops=1)
    ok, bad = validate(g)
    assert ok, bad
    assert total_genus(g) == 1


def test_unstable_vertex_is_rejected():
    # a genus-0 vertex of valence 2 violates 2b(v) + n(v) - 2 > 0
    g = StableGraph([[1, 2]], {1: 1, 2: 2}, {0: 0}, {1: 1, 2: 2})
    ok, bad = validate(g)
    assert not ok
    assert any("unstable" in msg for msg in bad)


def test_disconnected_graph_is_rejected():
    g = StableGraph([[1], [2]], {1: 1, 2: 2}, {0: 1, 1: 1}, {1: 1, 2: 2})
    ok, bad = validate(g)
    assert not ok
    assert any("connected" in msg for msg in bad)


def test_leg_labels_must_be_a_bijection():
    g = StableGraph([[1, 2]], {1: 1, 2: 2}, {0: 1}, {1: 1, 2: 3})
    ok, bad = validate(g)
    assert not ok
    assert any("bijection" in msg for msg in bad)


def _theta_graph():
    """Two vertices joined by three edges, one leg each."""
    inv = {1: 4, 4: 1, 2: 5, 5: 2, 3: 6, 6: 3, 7: 7, 8: 8}
    return StableGraph([[1, 2, 3, 7], [4, 5, 6, 8]], inv, {0: 0, 1: 0},
                       {7: 1, 8: 2})


def test_contract_bridge_adds_genera():
    inv = {1: 2, 2: 1, 3: 3, 4: 4}
    g = StableGraph([[1, 3], [2, 4]], inv, {0: 1, 1: 2}, {3: 1, 4: 2})
    before = total_genus(g)
    c = contract(g, [(1, 2)])
    assert len(c.target.vertices) == 1
    assert c.target.genus[0] == 3
    assert total_genus(c.target) == before


def test_contract_loop_bumps_genus():
    g = star(1, 0, loops=1)
    c = contract(g, g.edges())
    assert len(c.target.edges()) == 0
    assert c.target.genus[0] == 1
    assert total_genus(c.target) == total_genus(g)


def test_contract_preserves_total_genus_on_theta():
    g = _theta_graph()
    assert total_genus(g) == 2
    for e in g.edges():
        c = contract(g, [e])
        assert total_genus(c.target) == 2
        assert edge_count_identity(c.target)


def test_contract_rejects_non_edges():
    g = star(3, 0)
    with pytest.raises(ValueError):
        contract(g, [(0, 1)])


def test_isomorphism_ignores_flag_names():
    g1 = _theta_graph()
    inv = {10: 40, 40: 10, 20: 50, 50: 20, 30: 60, 60: 30, 70: 70, 80: 80}
    g2 = StableGraph([[40, 50, 60, 80], [10, 20, 30, 70]], inv,
                     {0: 0, 1: 0}, {70: 1, 80: 2})
    assert are_isomorphic(g1, g2)


def test_isomorphism_respects_leg_labels():
    g1 = star(2, 1)
    inv = {1: 1, 2: 2}
    g2 = StableGraph([[1, 2]], inv, {0: 1}, {1: 2, 2: 1})
    # swapping which flag carries which label on one vertex is still the
    # same labeled graph; moving a label to another vertex is not
    assert are_isomorphic(g1, g2)
    inv3 = {1: 3, 3: 1, 2: 2, 4: 4}
    g3 = StableGraph([[1, 2], [3, 4]], inv3, {0: 1, 1: 1}, {2: 1, 4: 2})
    assert not are_isomorphic(g1, g3)


def test_enumerate_iso_classes_small_counts():
    classes = enumerate_iso_classes(3, 0)
    assert len(classes) == 1
    assert len(classes[0].vertices) == 1
    assert classes[0].genus[0] == 0


def test_enumerate_iso_classes_are_valid_and_distinct():
    classes = enumerate_iso_classes(2, 1)
    assert classes
    for g in classes:
        ok, bad = validate(g)
        assert ok, bad
        assert g.n_legs() == 2
        assert total_genus(g) == 1
        assert edge_count_identity(g)
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            assert not are_isomorphic(classes[i], classes[j])


def test_enumerate_rejects_unstable_input():
    with pytest.raises(ValueError):
        enumerate_iso_classes(1, 0)


def test_json_roundtrip_and_schema():
    schema = _schema("stable_graph.schema.json")
    for g in (star(3, 0), _theta_graph(), star(1, 1, loops=1)):
        data = g.to_json()
        jsonschema.validate(data, schema)
        back = StableGraph.from_json(json.loads(json.dumps(data)))
        assert are_isomorphic(g, back)
        assert total_genus(back) == total_genus(g)
