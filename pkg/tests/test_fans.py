import json

import pytest

from toricmirror import (
    CurveClass,
    FanError,
    is_vertex,
    minimal_face,
    parse_fan,
    seidel_fan,
    semi_fano_check,
    validate,
    wall_classes,
)

P1 = {"dim": 1, "rays": [[1], [-1]], "max_cones": [[0], [1]]}
# Hirzebruch F3: the (-3)-section makes this fan *not* semi-Fano
F3 = {"dim": 2, "rays": [[1, 0], [0, 1], [-1, 3], [0, -1]],
      "max_cones": [[0, 1], [1, 2], [2, 3], [3, 0]]}


# ----------------------------------------------------------------- parsing

def test_parse_rejects_floats():
    with pytest.raises(FanError):
        parse_fan('{"dim": 2, "rays": [[1.0, 0], [0, 1]], "max_cones": [[0, 1]]}')


def test_parse_rejects_booleans():
    with pytest.raises(FanError):
        parse_fan({"dim": 2, "rays": [[True, 0], [0, 1], [-1, -1]],
                   "max_cones": [[0, 1], [1, 2], [2, 0]]})


def test_parse_rejects_imprimitive_ray():
    with pytest.raises(FanError):
        parse_fan({"dim": 2, "rays": [[2, 0], [0, 1], [-1, -1]],
                   "max_cones": [[0, 1], [1, 2], [2, 0]]})
    with pytest.raises(FanError):
        parse_fan({"dim": 1, "rays": [[0]], "max_cones": [[0]]})


def test_parse_rejects_duplicates():
    with pytest.raises(FanError):
        parse_fan({"dim": 1, "rays": [[1], [1]], "max_cones": [[0], [1]]})
    with pytest.raises(FanError):
        parse_fan({"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]],
                   "max_cones": [[0, 1], [1, 2], [2, 0], [1, 2]]})


def test_parse_rejects_bad_cone():
    with pytest.raises(FanError):
        parse_fan({"dim": 1, "rays": [[1], [-1]], "max_cones": [[0], [5]]})
    with pytest.raises(FanError):
        parse_fan({"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]],
                   "max_cones": [[0, 0], [1, 2], [2, 0]]})


def test_parse_checks_labels_and_basis_cone():
    doc = {"dim": 1, "rays": [[1], [-1]], "max_cones": [[0], [1]]}
    with pytest.raises(FanError):
        parse_fan(doc | {"labels": ["a"]})
    with pytest.raises(FanError):
        parse_fan(doc | {"basis_cone": [0, 1]})
    fan = parse_fan(doc | {"labels": ["a", "b"], "basis_cone": [1]})
    assert fan.labels == ("a", "b")
    assert fan.basis_cone == (1,)


def test_to_dict_roundtrip(fixture_text):
    fan = parse_fan(fixture_text("chain3"))
    again = parse_fan(json.dumps(fan.to_dict()))
    assert again == fan


# -------------------------------------------------------------- validation

def test_validate_rejects_incomplete_fan():
    with pytest.raises(FanError):
        validate(parse_fan({"dim": 2, "rays": [[1, 0], [0, 1]],
                            "max_cones": [[0, 1]]}))


def test_validate_rejects_unused_ray():
    with pytest.raises(FanError):
        validate(parse_fan({"dim": 1, "rays": [[1], [-1]],
                            "max_cones": [[0]]}))


def test_validate_rejects_non_unimodular_cone():
    doc = {"dim": 2, "rays": [[1, 0], [1, 2], [-1, 0], [0, -1]],
           "max_cones": [[0, 1], [1, 2], [2, 3], [3, 0]]}
    with pytest.raises(FanError):
        validate(parse_fan(doc))


def test_validate_rejects_overlapping_cones():
    # (1,0) and (-1,1) span a cone containing (0,1): walls cannot close up
    doc = {"dim": 2, "rays": [[1, 0], [0, 1], [-1, 1], [0, -1]],
           "max_cones": [[0, 2], [0, 1], [1, 2], [2, 3], [3, 0]]}
    with pytest.raises(FanError):
        validate(parse_fan(doc))


# ------------------------------------------------------------- derived data

def test_p2_context(p2):
    assert (p2.n, p2.m, p2.rank) == (2, 3, 1)
    assert p2.P == ((1,), (1,), (1,))
    assert p2.c1 == (3,)
    assert p2.ample_weight == (1,)
    assert [c.comps for c in wall_classes(p2)] == [(1,), (1,), (1,)]
    assert semi_fano_check(p2) == (True, None)


def test_p1xp1_context(p1xp1):
    assert p1xp1.P == ((1, 0), (0, 1), (1, 0), (0, 1))
    assert p1xp1.c1 == (2, 2)
    assert sorted(c.comps for c in wall_classes(p1xp1)) == [(0, 1), (0, 1), (1, 0), (1, 0)]


def test_f2_context(f2):
    assert f2.P == ((1, 0), (-2, 1), (1, 0), (0, 1))
    assert f2.c1 == (0, 2)
    assert f2.ample_weight == (1, 1)
    got = [(w.rays, w.cones, w.curve.comps, f2.degree(w.curve)) for w in f2.walls]
    assert got == [
        ((0,), (0, 3), (0, 1), 2),
        ((1,), (0, 1), (1, 0), 0),
        ((2,), (1, 2), (0, 1), 2),
        ((3,), (2, 3), (1, 2), 4),
    ]


def test_chain3_context(chain3):
    assert chain3.rank == 6
    assert chain3.c1 == (0, 0, 0, 1, 2, 1)
    assert chain3.ample_weight == (1, 3, 6, 4, 3, 1)
    assert chain3.label(1) == "D1" and chain3.label(7) == "r7"
    # the three -2-curves sit across the facets at rays 1, 2, 3
    by_facet = {w.rays: w.curve.comps for w in chain3.walls}
    assert by_facet[(1,)] == (1, 0, 0, 0, 0, 0)
    assert by_facet[(2,)] == (-2, 1, 0, 0, 0, 0)
    assert by_facet[(3,)] == (1, -2, 1, 0, 0, 0)
    assert sorted(chain3.degree(w.curve) for w in chain3.walls) == \
        [0, 0, 0, 0, 0, 1, 1, 2]
    assert semi_fano_check(chain3)[0]


def test_pairing_row_consistency(chain3):
    # D_l . d recomputed from the ray/dual-basis data must match P
    for wall in chain3.walls:
        for ray, pair in enumerate(wall.pairings):
            assert chain3.pairing(ray, wall.curve) == pair


def test_not_semi_fano_witness():
    ctx = validate(parse_fan(F3))
    ok, wall = semi_fano_check(ctx)
    assert not ok
    assert ctx.degree(wall.curve) == -1
    assert wall.rays == (1,)


def test_alternate_basis_cone(load):
    default = load("chain3")
    moved = load("chain3", basis_cone=[4, 5])
    assert moved.basis_perm == (4, 5, 0, 1, 2, 3, 6, 7)
    assert moved.label(1) == "D1"
    # intersection numbers are basis independent
    assert sorted(moved.degree(w.curve) for w in moved.walls) == \
        sorted(default.degree(w.curve) for w in default.walls)


def test_basis_cone_must_be_maximal(load):
    with pytest.raises(FanError):
        load("chain3", basis_cone=[0, 2])


def test_curve_class_arithmetic():
    a = CurveClass((1, -2))
    b = CurveClass((0, 1))
    assert (a + b).comps == (1, -1)
    assert a.scale(3).comps == (3, -6)
    assert CurveClass((0, 0)).is_zero() and not a.is_zero()


# ---------------------------------------------------- polytope faces

def test_is_vertex(f2, chain3):
    assert [is_vertex(f2, r) for r in range(4)] == [True, False, True, True]
    assert [r for r in range(8) if is_vertex(chain3, r)] == [0, 4, 6]


def test_minimal_face(f2, chain3):
    assert minimal_face(f2, 1) == (0, 1, 2)
    assert minimal_face(f2, 3) == (3,)
    faces = {r: minimal_face(chain3, r) for r in range(8)}
    assert faces == {
        0: (0,), 1: (0, 1, 2, 3, 4), 2: (0, 1, 2, 3, 4), 3: (0, 1, 2, 3, 4),
        4: (4,), 5: (4, 5, 6), 6: (6,), 7: (0, 6, 7),
    }


# ---------------------------------------------------------- Seidel fans

def test_seidel_fan_p1():
    ctx = validate(parse_fan(P1))
    plus = seidel_fan(ctx, 0, "plus")
    minus = seidel_fan(ctx, 0, "minus")
    assert plus.rays == ((1, 0), (-1, 1), (0, 1), (0, -1))
    assert minus.rays == ((1, 0), (-1, -1), (0, 1), (0, -1))
    assert plus.max_cones == ((2, 0), (2, 1), (3, 0), (3, 1))
    for fan in (plus, minus):
        total = validate(fan)
        assert total.rank == 2
        assert semi_fano_check(total)[0]


def test_seidel_fan_p2(p2):
    fan = seidel_fan(p2, 0, "plus")
    assert fan.dim == 3
    assert fan.rays == ((1, 0, 0), (-1, 1, 0), (0, 1, 0), (0, 0, 1), (0, -1, -1))
    assert len(fan.max_cones) == 6
    assert semi_fano_check(validate(fan))[0]


def test_seidel_fan_f2(f2):
    fan = seidel_fan(f2, 2, "minus")
    assert fan.rays == ((1, 0, 0), (-1, 1, -2), (0, 1, 0), (0, 0, 1),
                        (0, -1, 2), (0, 0, -1))
    assert len(fan.max_cones) == 8
    ctx = validate(fan)
    assert minimal_face(ctx, 0) == (0,)


def test_seidel_fan_bad_arguments(p2):
    with pytest.raises(FanError):
        seidel_fan(p2, 0, "sideways")
    with pytest.raises(FanError):
        seidel_fan(p2, 17)
