import itertools
import json
from fractions import Fraction as F

import pytest

from hda_pathlab.chains import (
    ChainMorphism,
    ChainType,
    CubeChain,
    InvalidChain,
    InvalidPartition,
    OrderedPartition,
    SourceTargetMismatch,
    StageMismatch,
    assemble_path,
    category,
    chain_face,
    compose,
    enumerate_chains,
    identity,
    morphisms_between,
    ordered_partitions,
)
from hda_pathlab.dpath import PLMap, is_tame, paths_equal
from hda_pathlab.precubical import boundary_cube, double_cube, standard_cube, wedge

from corpus import cube_word_chains, ordered_set_partition_count, refines

C2, C3, B2, B3, D = standard_cube(2), standard_cube(3), boundary_cube(2), boundary_cube(3), double_cube()


def test_chain_type_accessors():
    t = ChainType((2, 1, 3))
    assert t.length == 6 and t.count == 3
    assert t.vertices() == (0, 2, 3, 6)
    assert t.vert() == {0, 2, 3, 6} and t.free() == {1, 4, 5}
    with pytest.raises(InvalidChain):
        ChainType((1, 0))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_cube_chains_match_brute_force(n):
    chains = enumerate_chains(standard_cube(n), n)
    assert len(chains) == ordered_set_partition_count(n)
    assert {c.cubes for c in chains} == set(cube_word_chains(n))
    assert len({c.cubes for c in chains}) == len(chains)


def test_small_chain_lists():
    assert [c.cubes for c in enumerate_chains(C2, 2)] == [("**",), ("*0", "1*"), ("0*", "*1")]
    assert len(enumerate_chains(B2, 2)) == 2
    assert enumerate_chains(C2, 3) == []
    assert [c.dims for c in enumerate_chains(wedge([2, 1]), 3)] == [(2, 1), (1, 1, 1), (1, 1, 1)]


def test_invalid_chain():
    with pytest.raises(InvalidChain):
        CubeChain(C2, ["*0", "*1"])
    with pytest.raises(InvalidChain):
        CubeChain(C2, ["00"])


def test_chain_face_examples():
    u = CubeChain(C2, ["**"])
    assert chain_face(u, 1, {1}, {2}).cubes == ("*0", "1*")
    assert chain_face(u, 1, {2}, {1}).cubes == ("0*", "*1")
    with pytest.raises(InvalidPartition):
        chain_face(u, 1, {1, 2}, set())
    with pytest.raises(InvalidPartition):
        chain_face(u, 1, {1}, {1})


def _two_block_splits(m):
    for r in range(1, m):
        for A in itertools.combinations(range(1, m + 1), r):
            yield set(A), set(range(1, m + 1)) - set(A)


@pytest.mark.parametrize("K,n", [(C3, 3), (B3, 3), (D, 3), (standard_cube(4), 4)])
def test_chain_face_closure_and_elementary_morphisms(K, n):
    chains = enumerate_chains(K, n)
    known = {c.cubes for c in chains}
    for c in chains:
        for i, d in enumerate(c.dims, start=1):
            for A, B in _two_block_splits(d):
                f = chain_face(c, i, A, B)
                assert f.cubes in known
                parts = [OrderedPartition([range(1, e + 1)]) for e in c.dims]
                parts[i - 1] = OrderedPartition([A, B])
                assert ChainMorphism(f, c, tuple(parts)) in morphisms_between(f, c)


def test_morphisms_between_examples():
    edges, top = CubeChain(C2, ["*0", "1*"]), CubeChain(C2, ["**"])
    ms = morphisms_between(edges, top)
    assert len(ms) == 1 and ms[0].partitions[0].blocks == ((1,), (2,))
    assert morphisms_between(top, top) == [identity(top)]
    assert morphisms_between(top, edges) == []


def test_double_cube_morphisms():
    chains = enumerate_chains(D, 3)
    tops = [c for c in chains if len(c) == 1]
    assert [c.cubes for c in tops] == [("c",), ("c'",)]
    assert morphisms_between(tops[0], tops[1]) == []
    for top in tops:
        into = [m for c in chains if c not in tops for m in morphisms_between(c, top)]
        assert len(into) == 12
    edge = CubeChain(D, ["*00", "1*0", "11*"])
    assert len(morphisms_between(edge, tops[0])) == len(morphisms_between(edge, tops[1])) == 1


def test_ordered_partitions():
    assert [len(ordered_partitions(m)) for m in range(1, 6)] == [1, 3, 13, 75, 541]
    p = OrderedPartition([[1], [2, 3]])
    assert p.words() == ("*00", "1**")
    assert OrderedPartition([[1], [2]]).transport([2, 3]) == ((2,), (3,))
    with pytest.raises(InvalidPartition):
        OrderedPartition([[1], [3]])


def test_compose_refinement_example():
    K = C3
    top = CubeChain(K, ["***"])
    mid = CubeChain(K, ["*00", "1**"])
    low = CubeChain(K, ["*00", "1*0", "11*"])
    g = ChainMorphism(mid, top, (OrderedPartition([[1], [2, 3]]),))
    f = ChainMorphism(low, mid, (OrderedPartition([[1]]), OrderedPartition([[1], [2]])))
    h = compose(g, f)
    assert h.partitions[0].blocks == ((1,), (2,), (3,))
    assert h in morphisms_between(low, top)
    assert compose(identity(top), g) == g and compose(g, identity(mid)) == g
    with pytest.raises(SourceTargetMismatch):
        compose(f, g)


def test_compose_associative_exhaustively():
    cat = category(C3, 3)
    arrows = list(cat.morphisms) + [identity(c) for c in cat.objects]
    by_source = {}
    for f in arrows:
        by_source.setdefault(f.source.cubes, []).append(f)
    triples = 0
    for f in arrows:
        for g in by_source.get(f.target.cubes, []):
            gf = compose(g, f)
            assert gf in morphisms_between(f.source, g.target)
            for h in by_source.get(g.target.cubes, []):
                assert compose(h, gf) == compose(compose(h, g), f)
                triples += 1
    assert triples > 100


def test_category_examples():
    cat = category(C2, 2)
    assert (len(cat.objects), len(cat.morphisms)) == (3, 2)
    cat = category(B2, 2)
    assert (len(cat.objects), len(cat.morphisms), cat.components()) == (2, 0, 2)
    cat = category(C3, 3)
    words = [c.cubes for c in cat.objects]
    pairs = sum(1 for a in words for b in words if a != b and refines(a, b))
    assert len(cat.objects) == 13 and len(cat.morphisms) == pairs


@pytest.mark.parametrize("K,n", [(C3, 3), (standard_cube(4), 4), (boundary_cube(4), 4)])
def test_embedded_sets_give_posets(K, n):
    cat = category(K, n)
    assert len(set(zip(cat.src, cat.dst))) == len(cat.morphisms)


@pytest.mark.parametrize("K,n", [(C3, 3), (B3, 3), (D, 3), (wedge([2, 2]), 4)])
def test_category_agrees_with_pairwise_search(K, n):
    cat = category(K, n)
    pairwise = sorted(
        (cat.index[a.cubes], cat.index[b.cubes], f.partitions)
        for a in cat.objects for b in cat.objects for f in morphisms_between(a, b) if not f.is_identity()
    )
    assert pairwise == sorted(zip(cat.src, cat.dst, (f.partitions for f in cat.morphisms)))
    for f in cat.morphisms:
        assert len(f.source) > len(f.target)


def test_exports_are_deterministic():
    a, b = category(D, 3), category(double_cube(), 3)
    assert a.to_dot() == b.to_dot()
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())
    doc = a.to_json()
    assert len(doc["objects"]) == 14 and len(doc["morphisms"]) == 36
    assert a.to_dot().startswith("digraph")


def test_assemble_path():
    top = CubeChain(C2, ["**"])
    diag = assemble_path(top, [PLMap.linear(0, 2, (0, 0), (1, 1))])
    assert diag.cubes() == ("**",) and is_tame(diag)
    edges = chain_face(top, 1, {1}, {2})
    walk = assemble_path(edges, [PLMap.linear(0, 1, (0,), (1,)), PLMap.linear(1, 2, (0,), (1,))])
    hug = assemble_path(top, [PLMap.from_points([(0, (0, 0)), (1, (1, 0)), (2, (1, 1))])])
    assert paths_equal(walk, hug)
    with pytest.raises(StageMismatch):
        assemble_path(top, [PLMap.linear(0, 1, (0, 0), (1, 1))])
    with pytest.raises(StageMismatch):
        assemble_path(edges, [PLMap.linear(0, 1, (0,), (1,))])
    with pytest.raises(StageMismatch):
        assemble_path(top, [PLMap.from_points([(0, (0, 0)), (1, (F(1, 4), F(1, 4))), (2, (1, 1))])])
