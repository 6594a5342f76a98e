import json

import pytest

import equimaps as eq


@pytest.fixture
def z2_reference():
    g = eq.FiniteGroup.from_permutation_generators(2, [[1, 0]])
    return eq.build_gset(g, [([0], 1), ([0, 1], 2)])


@pytest.fixture
def z2_case2():
    g = eq.FiniteGroup.from_permutation_generators(2, [[1, 0]])
    return eq.build_gset(g, [([0], None), ([0, 1], 2)])


def test_group_basics():
    g = eq.FiniteGroup.from_permutation_generators(3, [[1, 0, 2], [1, 2, 0]])
    assert g.order == 6
    assert len(eq.all_subgroups(g)) == 6
    assert len(eq.conj_classes_of_subgroups(g)) == 4
    assert eq.normalizer(g, [0]) == list(range(6))


def test_reference_instance_numbers(z2_reference):
    gs = z2_reference
    assert gs.case == "all-finite"
    assert gs.total_points() == 4
    assert eq.count_end(gs) == 16
    assert len(eq.enumerate_end(gs)) == 16
    assert len(eq.enumerate_aut(gs)) == 4
    assert eq.collapse_type_count(gs) == 2
    assert eq.relative_rank_bruteforce(gs) == 2
    assert eq.relative_rank_formula(gs) == 2


def test_action_and_maps(z2_reference):
    gs = z2_reference
    assert gs.act(1, (0, 0, 0)) == (0, 0, 1)
    assert gs.stabilizer_of((1, 0, 0)) == [0, 1]
    ident = eq.EquivariantMap.identity(gs)
    assert ident.is_identity()
    assert eq.compose(ident, ident) == ident
    m = eq.metrics(ident)
    assert m["range"] == 4 and m["defect"] == 0


def test_case2_analysis(z2_case2):
    gs = z2_case2
    assert gs.case == "case2"
    doc = eq.analyze(gs)
    assert doc["relative_rank"] == 4
    assert len(doc["generators"]) == 4
    assert "mu-hat" in doc["generators"] and "nu-hat" in doc["generators"]
    assert eq.kappa_classes(gs) == []
    assert eq.u_sizes(gs) == [2, 1]
    stab, classes = eq.stab_classes(gs)
    assert stab == [[0], [0, 1]] and len(classes) == 2


def test_factorize_and_verify(z2_case2):
    gs = z2_case2
    map_doc = {
        "finite": [[1, 0, 0], [1, 1, 0]],
        "tail": [{"patch": [[2, [1, 0, 0]], [5, [0, 3, 1]]]}],
    }
    report = eq.factorize(gs, map_doc)
    assert report["verified"] is True
    assert report["length"] == len(report["word"]["factors"])
    assert eq.verify(gs, map_doc, report["word"])

    f = eq.map_from_doc(gs, map_doc)
    back = eq.map_from_doc(gs, eq.map_to_doc(f))
    assert f == back
    assert eq.window_table(gs, map_doc, 4)[2] == (1, 0, 0)


def test_analyze_is_deterministic(z2_case2):
    a = json.dumps(eq.analyze(z2_case2), sort_keys=True)
    b = json.dumps(eq.analyze(z2_case2), sort_keys=True)
    assert a == b


def test_errors_surface_as_value_errors():
    g = eq.FiniteGroup.from_permutation_generators(2, [[1, 0]])
    with pytest.raises(ValueError):
        eq.build_gset(g, [([0, 1], 0)])
