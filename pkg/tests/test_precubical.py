import itertools
import json
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from hda_pathlab.precubical import (
    Cube,
    ModelError,
    Point,
    PrecubicalSet,
    boundary_cube,
    canonical_point,
    coface,
    double_cube,
    expected_cube_counts,
    extreme_vertex,
    grid_complex,
    iterated_face,
    standard_cube,
    validate,
    wedge,
)


@pytest.mark.parametrize("n", range(0, 5))
def test_standard_cube_counts(n):
    K = standard_cube(n)
    assert K.counts() == expected_cube_counts(n)
    assert validate(K) == []


def test_small_generators():
    assert standard_cube(0).counts() == (1,)
    assert boundary_cube(1).counts() == (2,)
    assert boundary_cube(2).counts() == (4, 4)
    assert boundary_cube(3).counts() == (8, 12, 6)
    assert wedge([1, 1]).counts() == (3, 2)
    assert wedge([2]).counts() == standard_cube(2).counts()
    assert wedge([2, 1]).counts()[0] == 5
    assert double_cube().counts() == (8, 12, 6, 2)
    assert grid_complex((1, 1)).counts() == (4, 4, 1)
    assert grid_complex((2,)).counts() == (3, 2)


@pytest.mark.parametrize(
    "K",
    [standard_cube(3), boundary_cube(4), wedge([2, 1, 3]), double_cube(), grid_complex((3, 2, 2), [[[1, 2], [0, 1], [0, 2]]])],
    ids=["cube3", "boundary4", "wedge", "double", "grid"],
)
def test_generators_satisfy_identities(K):
    assert validate(K) == []
    assert K.dim(K.start) == 0 and K.dim(K.end) == 0


def test_double_cube_shares_extreme_vertices():
    K = double_cube()
    for c in ("c", "c'"):
        assert extreme_vertex(K, c, 0) == "000"
        assert extreme_vertex(K, c, 1) == "111"
        assert {K.face(c, i, e) for i in (1, 2, 3) for e in (0, 1)} == set(boundary_cube(3).cubes_of_dim(2))


def test_identity_violation_detected():
    # swapping the lower faces of the square breaks d0_1 d0_2 = d0_1 d0_1
    cubes = [Cube(v, 0, (), ()) for v in "abcd"]
    cubes += [Cube("ab", 1, ("a",), ("b",)), Cube("cd", 1, ("c",), ("d",)),
              Cube("ac", 1, ("a",), ("c",)), Cube("bd", 1, ("b",), ("d",))]
    good = Cube("s", 2, ("ac", "ab"), ("bd", "cd"))
    K = PrecubicalSet(cubes + [good], "a", "d")
    assert validate(K) == []
    bad = Cube("s", 2, ("ab", "ac"), ("bd", "cd"))
    problems = validate(PrecubicalSet(cubes + [bad], "a", "d"))
    assert problems and {p.kind for p in problems} == {"identity"}


def test_loader_rejects_structural_errors():
    doc = standard_cube(1).to_json_dict()
    assert PrecubicalSet.from_json_dict(doc).counts() == (2, 1)
    dangling = json.loads(json.dumps(doc))
    dangling["cubes"][-1]["d1"] = ["nowhere"]
    with pytest.raises(ModelError):
        PrecubicalSet.from_json_dict(dangling)
    wrong_dim = json.loads(json.dumps(doc))
    wrong_dim["cubes"][0]["dim"] = 1
    with pytest.raises(ModelError):
        PrecubicalSet.from_json_dict(wrong_dim)
    missing_start = json.loads(json.dumps(doc))
    missing_start["start"] = "zz"
    with pytest.raises(ModelError):
        PrecubicalSet.from_json_dict(missing_start)
    duplicate = json.loads(json.dumps(doc))
    duplicate["cubes"].append(duplicate["cubes"][0])
    with pytest.raises(ModelError):
        PrecubicalSet.from_json_dict(duplicate)
    with pytest.raises(ModelError):
        PrecubicalSet.loads("{not json")


def test_json_roundtrip():
    K = double_cube()
    L = PrecubicalSet.loads(K.dumps())
    assert L.to_json_dict() == K.to_json_dict()


def _faces_in_order(K, c, order, eps):
    """Apply single faces in the given order of original indices."""
    removed = []
    for a in order:
        shift = sum(1 for r in removed if r < a)
        c = K.face(c, a - shift, eps)
        removed.append(a)
    return c


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(1, n), max_size=3), st.sampled_from([0, 1]))))
def test_iterated_face_order_independent(args):
    n, A, eps = args
    K = standard_cube(n)
    top = "*" * n
    expected = "".join(str(eps) if j + 1 in A else "*" for j in range(n))
    assert iterated_face(K, top, A, eps) == (expected or "()")
    for order in itertools.permutations(sorted(A)):
        assert _faces_in_order(K, top, order, eps) == iterated_face(K, top, A, eps)


def test_iterated_face_examples():
    assert iterated_face(standard_cube(3), "***", [1, 3], 0) == "0*0"
    assert extreme_vertex(grid_complex((5, 6)), "2,4+01", 1) == "3,5"


coords = st.lists(st.sampled_from([F(0), F(1), F(1, 2), F(1, 3), F(3, 4)]), min_size=0, max_size=4)


@given(coords)
def test_canonical_point_idempotent(xs):
    K = standard_cube(len(xs))
    p = Point("*" * len(xs) if xs else "()", xs)
    q = canonical_point(K, p)
    assert canonical_point(K, q) == q
    assert all(0 < v < 1 for v in q.coords)
    # re-expanding along the stripped record gives back the original coordinates
    zeros = [j + 1 for j, v in enumerate(xs) if v == 0]
    nonzero = [v for v in xs if v != 0]
    ones = [k + 1 for k, v in enumerate(nonzero) if v == 1]
    y = coface(q.coords, ones, 1)
    assert coface(y, zeros, 0) == tuple(xs)
    assert K.face_word(p.cube, "".join("0" if v == 0 else "1" if v == 1 else "*" for v in xs)) == q.cube


def test_relabel_and_skeleton():
    K = standard_cube(2)
    L = K.relabeled({c: f"x{c}" for c in K.ids()})
    assert validate(L) == [] and L.start == "x00" and L.counts() == K.counts()
    assert standard_cube(3).skeleton(1).counts() == (8, 12)
