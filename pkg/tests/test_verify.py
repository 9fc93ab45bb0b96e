import json

import pytest

from gencluster.sl2 import z_character
from gencluster.typec import typec
from gencluster.verify import PhiMap, Report, g2_labelled_variables, verify_eta, verify_phi


@pytest.mark.parametrize("l", [2, 3])
def test_verify_phi_passes(l):
    rep = verify_phi(l, degree_bound=4)
    assert rep.ok, [c.name for c in rep.failures()][:5]
    groups = rep.summary()
    assert all(p == t for p, t in groups.values())
    assert len(groups) >= 4


def test_verify_eta_passes_small_bound():
    rep = verify_eta(degree_bound=3)
    assert rep.ok, [c.name for c in rep.failures()][:5]
    assert rep.summary()["dictionary"] == (8, 8)


def test_phi_map_on_variables_and_lambda():
    phi = PhiMap(3)
    C = typec(2)
    for o, x in C.expansions.items():
        assert phi(x) == phi.dictionary(o)
    assert phi(C.lam()) == z_character(3)


def test_g2_cycle_names_eight_distinct_variables():
    names = g2_labelled_variables()
    assert len(names) == 8
    assert len(set(names.values())) == 8


def test_report_json_structure():
    rep = Report("demo", params={"x": 1})
    rep.add("a:1", True)
    rep.add("a:2", False, "broken")
    obj = json.loads(json.dumps(rep.to_json_obj()))
    assert obj["ok"] is False
    assert obj["groups"] == {"a": {"passed": 1, "total": 2}}
    assert obj["checks"][1] == {"name": "a:2", "ok": False, "detail": "broken"}
    assert [c.name for c in rep.failures()] == ["a:2"]
