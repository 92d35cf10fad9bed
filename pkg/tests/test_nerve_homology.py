import itertools
import random
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from hda_pathlab.chains import ChainCategory, ChainMorphism, CubeChain, OrderedPartition, category
from hda_pathlab.homology import homology, homology_of_boundaries, invariant_factors, smith_normal_form
from hda_pathlab.nerve import EndomorphismDetected, SparseMatrix, build_nerve
from hda_pathlab.precubical import boundary_cube, double_cube, standard_cube, wedge

from corpus import order_complex_betti, refines


def report(K, n):
    return homology(build_nerve(category(K, n)))


def test_nerve_examples():
    assert build_nerve(category(boundary_cube(2), 2)).counts() == [2]
    assert build_nerve(category(standard_cube(2), 2)).counts() == [3, 2]
    N = build_nerve(category(standard_cube(3), 3))
    assert N.euler() == 1 and N.counts() == [13, 24, 12]


@pytest.mark.parametrize("K,n", [(standard_cube(4), 4), (boundary_cube(4), 4), (double_cube(), 3), (wedge([3, 2]), 5)])
def test_boundary_squares_vanish_and_dimension_bound(K, n):
    N = build_nerve(category(K, n), check=False)
    N.check()
    for k in range(2, len(N.boundaries)):
        assert N.boundaries[k - 1].times(N.boundaries[k]).is_zero()
    assert N.top <= n - 1


def test_endomorphism_rejected():
    K = standard_cube(2)
    top = CubeChain(K, ["**"])
    fake = ChainMorphism(top, top, (OrderedPartition([[1], [2]]),))
    with pytest.raises(EndomorphismDetected):
        build_nerve(ChainCategory(K, 2, [top], [fake]))


def test_relabeling_invariance():
    K = boundary_cube(4)
    ids = K.ids()
    shuffled = ids[:]
    random.Random(3).shuffle(shuffled)
    L = K.relabeled({a: f"v{b}" for a, b in zip(ids, shuffled)})
    N, M = build_nerve(category(K, 4)), build_nerve(category(L, 4))
    assert N.counts() == M.counts()
    assert homology(N) == homology(M)


def test_triplet_export():
    N = build_nerve(category(standard_cube(2), 2))
    text = N.boundaries[1].to_triplets().splitlines()
    assert text[0] == "3 2 4"
    assert all(len(line.split()) == 3 for line in text[1:])


# ---------------------------------------------------------------------------
# Smith normal form


def test_snf_examples():
    assert smith_normal_form([[2, 0], [0, 3]]) == ([1, 6], 2)
    assert smith_normal_form([[0, 0], [0, 0]]) == ([], 0)
    assert smith_normal_form([[1]]) == ([1], 1)
    assert smith_normal_form([]) == ([], 0)
    assert smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == ([2, 6, 12], 3)


def _det(M):
    if len(M) == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * _det([row[:j] + row[j + 1:] for row in M[1:]]) for j in range(len(M)))


def determinantal_factors(M):
    """d_k = D_k / D_(k-1) with D_k the gcd of all k x k minors."""
    rows, cols = len(M), len(M[0])
    D = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for r in itertools.combinations(range(rows), k):
            for c in itertools.combinations(range(cols), k):
                g = gcd(g, _det([[M[i][j] for j in c] for i in r]))
        if g == 0:
            break
        D.append(g)
    return [D[k] // D[k - 1] for k in range(1, len(D))]


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_matches_determinantal_divisors(M):
    factors, rank = smith_normal_form(M)
    assert factors == determinantal_factors(M)
    assert all(b % a == 0 for a, b in zip(factors, factors[1:]))
    cols = [{i: M[i][j] for i in range(len(M)) if M[i][j]} for j in range(len(M[0]))]
    assert invariant_factors(SparseMatrix(len(M), len(M[0]), cols)) == factors


def test_torsion_is_reported():
    # a single 2-cell attached by degree 2 to a circle
    d1 = SparseMatrix(1, 1, [{}])
    d2 = SparseMatrix(1, 1, [{0: 2}])
    h = homology_of_boundaries([1, 1, 1], [None, d1, d2])
    assert h.betti == (1, 0, 0) and h.torsion == ((), (2,), ()) and h.euler == 1


# ---------------------------------------------------------------------------
# homology of cube chain categories


def test_homology_examples():
    assert report(boundary_cube(2), 2).betti == (2,)
    for n in range(1, 5):
        h = report(standard_cube(n), n)
        assert h.betti[0] == 1 and not any(h.betti[1:]) and not any(h.torsion)
    assert report(boundary_cube(3), 3).betti == (1, 1)


@pytest.mark.parametrize("n", [2, 3])
def test_spheres_against_order_complex(n):
    K = boundary_cube(n)
    cat = category(K, n)
    words = [c.cubes for c in cat.objects]
    oracle = order_complex_betti(words, lambda a, b: a != b and refines(a, b))
    assert list(homology(build_nerve(cat)).betti) == oracle


@pytest.mark.parametrize("K,n", [(boundary_cube(2), 2), (boundary_cube(3), 3), (double_cube(), 3), (wedge([1, 2]), 3)])
def test_betti0_counts_components(K, n):
    cat = category(K, n)
    assert homology(build_nerve(cat)).betti[0] == cat.components()
