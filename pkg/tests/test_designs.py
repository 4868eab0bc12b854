import itertools

import pytest
from hypothesis import given, strategies as st

from stoc.designs import (EXAMPLE_TRIANGLE_FAMILY, OrthogonalPartitionFamily, ResolvableDesign, affine_design,
                          builtin_family_3x5, canonical_family, design_from_family, family_from_design,
                          kirkman_design_15, verify_design, verify_family)
from stoc.errors import InputError


def orthogonal_by_definition(f) -> bool:
    full = set(range(1, f.k * f.s + 1))
    for m in f.matrices:
        if sorted(x for row in m for x in row) != sorted(full):
            return False
    cols = [[set(f.column(a, j)) for j in range(f.s)] for a in range(len(f.matrices))]
    for a, b in itertools.permutations(range(len(cols)), 2):
        for ca in cols[a]:
            sizes = [len(ca & cb) for cb in cols[b]]
            if max(sizes) > 1 or sum(sizes) != f.k:
                return False
    return True


def test_builtin_family():
    f = builtin_family_3x5()
    assert verify_family(f).ok
    assert (len(f), f.k, f.s) == (7, 3, 5)
    assert f.column(0, 0) == (1, 2, 3)
    second = set(f.column(0, 1))
    assert [j + 1 for j, c in enumerate(f.columns(1)) if second & set(c)] == [3, 4, 5]


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_affine_designs(q):
    d = affine_design(q)
    assert verify_design(d).ok
    assert (d.v, d.k, len(d.classes)) == (q * q, q, q + 1)
    f = family_from_design(d)
    assert verify_family(f).ok and orthogonal_by_definition(f)
    assert (len(f), f.k, f.s) == (q + 1, q, q)


def test_affine_2_is_the_one_factorisation_of_k4():
    classes = {frozenset(frozenset(b) for b in c) for c in affine_design(2).classes}
    assert classes == {
        frozenset({frozenset({1, 2}), frozenset({3, 4})}),
        frozenset({frozenset({1, 3}), frozenset({2, 4})}),
        frozenset({frozenset({1, 4}), frozenset({2, 3})}),
    }


def test_affine_requires_prime():
    with pytest.raises(InputError):
        affine_design(4)


def test_swapped_point_breaks_design():
    d = affine_design(3)
    classes = [list(map(list, c)) for c in d.classes]
    a, b = classes[0][0], classes[0][1]
    a[0], b[0] = b[0], a[0]
    v = verify_design(ResolvableDesign.make(9, 3, classes))
    assert not v.ok and "pair covered" in v.reason


def test_short_block_fails_block_size():
    d = affine_design(3)
    classes = [list(map(list, c)) for c in d.classes]
    classes[1][2] = classes[1][2][:2]
    assert verify_design(ResolvableDesign.make(9, 3, classes)).reason == "block size"


def test_kirkman_design():
    d = kirkman_design_15()
    assert verify_design(d).ok
    f = family_from_design(d)
    assert (len(f), f.k, f.s) == (7, 3, 5)
    assert canonical_family(f) == canonical_family(builtin_family_3x5())


def test_duplicate_matrix_names_condition_2():
    f = builtin_family_3x5()
    dup = OrthogonalPartitionFamily(3, 5, f.matrices + f.matrices[:1])
    v = verify_family(dup)
    assert not v.ok and v.reason.startswith("condition 2")
    assert len(v.witness) == 4


def test_single_matrix_passes_vacuously():
    f = OrthogonalPartitionFamily(2, 3, EXAMPLE_TRIANGLE_FAMILY.matrices[:1])
    assert verify_family(f).ok


def test_example_triangle_family():
    assert verify_family(EXAMPLE_TRIANGLE_FAMILY).ok


def test_non_partition_fails_condition_1():
    m = ((1, 2, 3), (1, 5, 6))
    assert verify_family(OrthogonalPartitionFamily(2, 3, (m,))).reason.startswith("condition 1")


@given(st.sampled_from([2, 3, 5]), st.randoms(use_true_random=False))
def test_relabelling_preserves_orthogonality(q, rnd):
    f = family_from_design(affine_design(q))
    perm = list(range(1, q * q + 1))
    rnd.shuffle(perm)
    mats = []
    for m in f.matrices:
        cols = [[perm[x - 1] for x in col] for col in zip(*m)]
        rnd.shuffle(cols)
        mats.append([list(r) for r in zip(*cols)])
    g = OrthogonalPartitionFamily.make(q, q, mats)
    assert verify_family(g).ok
    assert verify_design(design_from_family(g)).ok


@given(st.sampled_from([3, 5]), st.randoms(use_true_random=False))
def test_verifier_agrees_with_definition_after_mutation(q, rnd):
    f = family_from_design(affine_design(q))
    mats = [[list(r) for r in m] for m in f.matrices]
    a = rnd.randrange(len(mats))
    i, j = rnd.randrange(q), rnd.randrange(q)
    i2, j2 = rnd.randrange(q), rnd.randrange(q)
    mats[a][i][j], mats[a][i2][j2] = mats[a][i2][j2], mats[a][i][j]
    g = OrthogonalPartitionFamily.make(q, q, mats)
    assert verify_family(g).ok == orthogonal_by_definition(g)
