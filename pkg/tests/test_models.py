import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from clusterexp import (FP, IMPDOB, DOB, KP, PAPER_TRIANGULAR_POLYNOMIAL, SubsetPolymerFamily,
                        bounded_degree_phi, bounded_degree_radius, build_family_graph,
                        central_polymer, condition_holds, domino_family, gruber_kunz_condition,
                        homogeneous_radius, model_graph, model_phi, neighborhood_polynomial,
                        parse_model, phi, regular_tree_graph, subset_criteria_table3,
                        triangular_lattice_graph, triangular_site_family)
from clusterexp.models import family_from_json, family_to_json, load_family


def fam(*polys):
    sites = sorted(set().union(*map(set, polys)))
    return SubsetPolymerFamily(tuple(sites), tuple(frozenset(p) for p in polys))


def test_overlap_graph():
    assert build_family_graph(fam({1}, {2})).edges() == []
    assert build_family_graph(fam({1, 2}, {2, 3})).edges() == [(0, 1)]
    f = fam({(0, 0), (1, 0)}, {(1, 0), (2, 0)})
    assert build_family_graph(f).edges() == [(0, 1)]
    with pytest.raises(ValueError):
        fam({1}, set())


def test_domino_counts():
    assert len(domino_family(2, 1).polymers) == 1
    assert len(domino_family(2, 2).polymers) == 4
    assert len(domino_family(5, 5).polymers) == 40
    with pytest.raises(ValueError):
        domino_family(1, 1)


@pytest.mark.parametrize("w,h", [(5, 5), (6, 5), (7, 7), (6, 8)])
def test_central_domino_polynomial(w, h):
    f = domino_family(w, h)
    g = build_family_graph(f)
    assert neighborhood_polynomial(g, central_polymer(f)).coefficients == (1, 7, 9)


def test_small_window_has_no_interior_domino():
    with pytest.raises(ValueError):
        central_polymer(domino_family(2, 2))


def test_triangular_lattice():
    g = triangular_lattice_graph(1)
    assert g.n_polymers == 7
    assert g.degree(3) == 6 and g.labels[3] == "0,0"
    g2 = triangular_lattice_graph(2)
    labels = {v: k for k, v in g2.labels.items()}
    assert g2.adj[labels["0,0"]] >> labels["2,0"] & 1 == 0
    assert build_family_graph(triangular_site_family(2)).adj == g2.adj
    assert neighborhood_polynomial(g, 3).coefficients == (1, 7, 9, 2)
    assert PAPER_TRIANGULAR_POLYNOMIAL == (1, 7, 8, 2)


def test_complete_polynomial():
    g = model_graph(parse_model("complete:7"))
    assert neighborhood_polynomial(g, 0).coefficients == (1, 7)


def test_bounded_degree_phi_examples():
    for kind in (KP, DOB, IMPDOB):
        assert bounded_degree_phi(kind, 0, 0.3) == pytest.approx(phi(kind, model_graph(parse_model("selfx:1")), 0, [0.3]))
    assert bounded_degree_phi(IMPDOB, 6, 0.2) == pytest.approx(0.2 + 1.2 ** 6)
    assert bounded_degree_phi(IMPDOB, 6, 0.2) == pytest.approx(3.185984, abs=1e-6)
    assert bounded_degree_phi(DOB, 6, 1 / 6) == pytest.approx((7 / 6) ** 7)
    with pytest.raises(ValueError):
        bounded_degree_phi(DOB, -1, 0.1)


@pytest.mark.parametrize("delta", range(1, 6))
def test_tree_graph_matches_bounded_degree_form(delta):
    g = regular_tree_graph(delta, depth=2)
    for mu in (0.0, 0.13, 0.7, 2.0):
        assert phi(FP, g, 0, [mu] * g.n_polymers) == pytest.approx(bounded_degree_phi(IMPDOB, delta, mu))


@pytest.mark.parametrize("delta", range(0, 9))
def test_bounded_degree_radii(delta):
    for kind in (KP, DOB, IMPDOB):
        num = homogeneous_radius(lambda m: bounded_degree_phi(kind, delta, m)) \
            if kind is KP else homogeneous_radius(model_phi(parse_model(f"degree:{delta}"), kind))
        assert num.radius == pytest.approx(bounded_degree_radius(kind, delta).radius, abs=1e-10)


def test_parse_model():
    assert parse_model("domino:5x5").params == (5, 5)
    assert parse_model("tri:r2").name == "tri:r2"
    assert parse_model("tri:2").params == (2,)
    assert parse_model("degree:6").variant == "degree"
    for bad in ("square:3", "complete:0", "domino:5", ""):
        with pytest.raises(ValueError):
            parse_model(bad)
    with pytest.raises(ValueError):
        model_graph(parse_model("degree:3"))


def test_family_json_round_trip(tmp_path):
    f = domino_family(3, 2)
    obj = json.loads(json.dumps(family_to_json(f)))
    back = family_from_json(obj)
    assert set(back.polymers) == set(f.polymers)
    p = tmp_path / "f.json"
    p.write_text(json.dumps({"sites": ["a", "b", "c"], "polymers": [["a", "b"], ["c"]]}))
    assert build_family_graph(load_family(p)).edges() == []


def test_gruber_kunz_examples():
    single = fam({"x"})
    a = math.log(2)
    assert gruber_kunz_condition(single, [0.5], a).holds
    assert not gruber_kunz_condition(single, [0.51], a).holds
    rep = gruber_kunz_condition(domino_family(3, 3), np.zeros(12), 0.4)
    assert rep.holds and rep.margin == pytest.approx(math.expm1(0.4))
    rep = gruber_kunz_condition(single, [0.25], lambda p: 2 * a * len(p))
    assert rep.holds and rep.pi_bounds == [pytest.approx(4.0)]
    with pytest.raises(ValueError):
        gruber_kunz_condition(single, [-1.0], a)


def test_global_supremum_is_weaker():
    f = fam({1, 2}, {3})
    rho = [0.01, 0.3]
    a = {frozenset({1, 2}): 0.2, frozenset({3}): 2.0}.__getitem__
    assert gruber_kunz_condition(f, rho, a).holds is True
    rep = gruber_kunz_condition(f, rho, a, global_sup=True)
    assert rep.holds is False and rep.worst_polymer == 0


def test_table3_columns():
    single = fam({"x"})
    assert subset_criteria_table3(single, [0.0], 0.5) == {"kp": True, "dob": True, "gk": True}
    # e^a - 1 > a: a point in the Gruber-Kunz column outside the Kotecky-Preiss one
    res = subset_criteria_table3(single, [0.5], 1.0)
    assert res["gk"] and not res["kp"]


@given(st.floats(0, 0.5), st.floats(0.01, 3))
def test_kp_column_inside_gk_column(r, a):
    f = domino_family(3, 3)
    res = subset_criteria_table3(f, [r] * len(f.polymers), a)
    if res["kp"]:
        assert res["gk"]


@given(st.data())
def test_gruber_kunz_implies_fp_condition(data):
    w, h = data.draw(st.sampled_from([(2, 3), (3, 3), (3, 4)]))
    f = domino_family(w, h)
    g = build_family_graph(f)
    n = len(f.polymers)
    a = np.array(data.draw(st.lists(st.floats(0.05, 2.0), min_size=n, max_size=n)))
    base = np.array(data.draw(st.lists(st.floats(0, 1), min_size=n, max_size=n)))
    scale = data.draw(st.floats(0.0, 0.3))
    rho = base * scale
    rep = gruber_kunz_condition(f, rho, a)
    if rep.holds:
        assert condition_holds(FP, g, rho, rho * np.exp(a), rtol=1e-12)
