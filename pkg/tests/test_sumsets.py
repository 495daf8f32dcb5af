from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projent.errors import (
    CNotContained,
    InvalidInput,
    NonCommutative,
    NotInSumset,
    NotUniformCover,
    UnorderedContext,
)
from projent.families import SetFamily, all_subsets_of_size, full_mask, mask_of
from projent.groups import Cyclic, FreeAbelian, catalog_group
from projent.lattice import projection_size
from projent.sumsets import (
    SumsetInstance,
    conjecture_feasibility,
    embed_image,
    extreme_products,
    gymr_cover,
    marking_algorithm,
    phi_embed,
    product_set,
    random_integer_instance,
    sumset,
    sumset_sizes,
    verify_additive_cover,
    verify_cauchy_davenport,
    verify_gymr,
    verify_sumset_cover,
)

Z = FreeAbelian()
Z13 = SumsetInstance(Cyclic(13), ((0, 1, 3, 5),) * 3)
PAIRS3 = all_subsets_of_size(3, 2)


def brute_sum(group, sets):
    out = set()
    for tup in product(*sets):
        s = group.identity
        for x in tup:
            s = group.op(s, x)
        out.add(s)
    return out


def test_instance_normalizes_sets():
    inst = SumsetInstance(Z, ((3, 1, 3), (0,)))
    assert inst.sets == ((1, 3), (0,))
    assert inst.sizes() == (2, 1)
    with pytest.raises(InvalidInput):
        SumsetInstance(Z, ((),))
    with pytest.raises(InvalidInput):
        SumsetInstance(Z, ())


def test_small_sumsets():
    inst = SumsetInstance(Z, ((0, 1), (0, 2)))
    assert sorted(sumset(inst, mask_of([1, 2]))) == [0, 1, 2, 3]
    assert sumset(inst, 0) == frozenset({0})


def test_z13_sizes():
    sizes = sumset_sizes(Z13)
    for pair in ([1, 2], [1, 3], [2, 3]):
        assert sizes[mask_of(pair)] == 9
    assert sizes[mask_of([1, 2, 3])] == 12


def test_sumset_matches_brute_force(rng):
    for _ in range(200):
        inst = random_integer_instance(rng, rng.randint(1, 4), 4, -5, 5)
        for a in range(1, full_mask(inst.n) + 1):
            parts = [inst.sets[i - 1] for i in range(1, inst.n + 1) if (a >> (i - 1)) & 1]
            assert sumset(inst, a) == brute_sum(Z, parts)


def test_phi_examples():
    inst = SumsetInstance(Z, ((0, 1), (0, 1)))
    full = mask_of([1, 2])
    assert phi_embed(inst, full, 1) == (0, 1)
    assert phi_embed(inst, full, 0) == (0, 0)
    assert phi_embed(inst, full, 2) == (1, 1)
    with pytest.raises(NotInSumset):
        phi_embed(inst, full, 3)
    assert embed_image(inst).sorted_points() == [(0, 0), (0, 1), (1, 1)]


def test_phi_needs_commutativity():
    s3 = catalog_group("S3")
    with pytest.raises(NonCommutative):
        embed_image(SumsetInstance(s3, ((0, 1), (0, 2))))


def test_embedding_is_lexicographic_least(rng):
    for _ in range(100):
        inst = random_integer_instance(rng, rng.randint(1, 3), 4, 0, 6)
        full = full_mask(inst.n)
        for s in sumset(inst, full):
            decomps = [t for t in product(*inst.sets) if sum(t) == s]
            assert phi_embed(inst, full, s) == min(decomps)


def test_projection_containment(rng):
    # |pi_A(S')| <= |S_A| on 200 random integer instances
    for _ in range(200):
        inst = random_integer_instance(rng, rng.randint(1, 4), 4, 0, 12)
        image = embed_image(inst)
        sizes = sumset_sizes(inst)
        assert len(image) == sizes[full_mask(inst.n)]
        for a, v in sizes.items():
            if a:
                assert projection_size(image, a) <= v


def test_singletons_embed_to_a_point():
    inst = SumsetInstance(Z, ((4,), (7,), (-2,)))
    assert len(embed_image(inst)) == 1


def test_sumset_cover_examples():
    ap = SumsetInstance(Z, (tuple(range(3)), tuple(range(4)), tuple(range(2))))
    r = verify_sumset_cover(ap, PAIRS3, 2)
    assert (r.lhs, r.rhs) == (7**2, 6 * 4 * 5)
    assert r.holds and r.containment_ok and r.box.feasible and r.box.verified
    r = verify_sumset_cover(Z13, PAIRS3, 2)
    assert (r.lhs, r.rhs) == (144, 729) and r.holds
    r = verify_sumset_cover(SumsetInstance(Z, ((1,), (2,), (3,))), PAIRS3, 2)
    assert (r.lhs, r.rhs) == (1, 1)
    with pytest.raises(NotUniformCover):
        verify_sumset_cover(Z13, SetFamily.from_sets(3, [[1, 2], [2, 3]]), 1)


def test_sumset_cover_sweep(rng):
    for _ in range(150):
        n = rng.randint(2, 4)
        inst = random_integer_instance(rng, n, 4, 0, 15)
        fam = all_subsets_of_size(n, rng.randint(1, n))
        k = sum(1 for a in fam.members if a & 1)
        r = verify_sumset_cover(inst, fam, k)
        assert r.holds and r.embedded.holds and r.containment_ok
        assert r.box.feasible and r.box.verified


def test_gymr_cover():
    assert gymr_cover(2) == SetFamily.from_sets(3, [[1, 3], [2, 3], [1, 2]])
    assert gymr_cover(1) == SetFamily.from_sets(2, [[1, 2]])


def test_gymr_equality_case():
    r = verify_gymr([1, 2, 3], [[0, 3], [0]], [0, 3])
    assert (r.lhs, r.rhs) == (36, 36)
    assert r.sizes == {"A+C": 6, "C": 2, "A+B": [6, 3]}
    assert r.equality and r.holds and r.embedded.holds


def test_gymr_full_sumset_c():
    bs = [[0, 2], [0, 5, 6]]
    c = sorted({x + y for x in bs[0] for y in bs[1]})
    r = verify_gymr([0, 1, 4], bs, c)
    assert r.holds and r.bridge["head_within_C"]


def test_gymr_rejects_c_outside():
    with pytest.raises(CNotContained):
        verify_gymr([0], [[0, 1]], [5])


def test_gymr_sweep_against_direct_count(rng):
    for _ in range(200):
        k = rng.randint(1, 3)
        a = [rng.randint(0, 20) for _ in range(rng.randint(1, 5))]
        bs = [[rng.randint(0, 20) for _ in range(rng.randint(1, 5))] for _ in range(k)]
        total = brute_sum(Z, bs)
        c = rng.sample(sorted(total), rng.randint(1, min(5, len(total))))
        r = verify_gymr(a, bs, c)
        lhs = len(brute_sum(Z, [a, c])) ** k
        rhs = len(c) ** (k - 1)
        for b in bs:
            rhs *= len(brute_sum(Z, [a, b]))
        assert (r.lhs, r.rhs) == (lhs, rhs)
        assert r.holds
        assert r.bridge["embedded_size"] == len(brute_sum(Z, [a, c]))


def test_additive_cover_examples():
    inst = SumsetInstance(Z, ((0, 1), (0, 5)))
    r = verify_additive_cover(inst, SetFamily.from_sets(2, [[1], [2]]), 1)
    assert (r.lhs, r.rhs) == (3, 2) and r.holds
    r = verify_additive_cover(SumsetInstance(Z, ((3,), (1,), (2,))), PAIRS3, 2)
    assert (r.lhs, r.rhs) == (0, 0)


def test_z13_additive_cover_fails():
    r = verify_additive_cover(Z13, PAIRS3, 2)
    assert (r.lhs, r.rhs) == (22, 24)
    assert not r.holds
    assert r.as_dict()["relation"] == "<"


def test_marking_example():
    inst = SumsetInstance(Z, ((0, 1, 3), (2, 4), (0, 5, 7, 8)))
    w = marking_algorithm(inst, PAIRS3, 2)
    assert all(w.audit().values())
    assert w.two_point_sets == ((0, 3), (2, 4), (0, 8))
    top, mid, bottom = w.chain()
    assert top >= mid >= bottom


def test_marking_rejects_torsion():
    with pytest.raises(UnorderedContext):
        marking_algorithm(Z13, PAIRS3, 2)


def test_marking_sweep(rng):
    for _ in range(150):
        n = rng.randint(1, 4)
        inst = random_integer_instance(rng, n, 4, -10, 10)
        fam = all_subsets_of_size(n, rng.randint(1, n))
        k = sum(1 for a in fam.members if a & 1)
        w = marking_algorithm(inst, fam, k)
        audit = w.audit()
        assert all(audit.values()), audit
        assert verify_additive_cover(inst, fam, k).holds


def test_marking_in_z2(rng):
    for _ in range(60):
        inst = random_integer_instance(rng, 3, 3, -3, 3, d=2)
        w = marking_algorithm(inst, PAIRS3, 2)
        assert all(w.audit().values())


def test_cauchy_davenport_examples():
    r = verify_cauchy_davenport(SumsetInstance(Cyclic(5), ((0, 1), (0, 1))))
    assert (r.size, r.p, r.excess) == (3, 5, 2) and r.holds
    with pytest.raises(InvalidInput):
        verify_cauchy_davenport(SumsetInstance(Z, ((0,),)))


def test_cauchy_davenport_s3_exhaustive():
    g = catalog_group("S3")
    subsets = [tuple(x for x in range(6) if (m >> x) & 1) for m in range(1, 1 << 6)]
    for s1, s2 in product(subsets, repeat=2):
        r = verify_cauchy_davenport(SumsetInstance(g, (s1, s2)))
        assert r.p == 2 and r.holds


def test_extreme_products_abelian(rng):
    for _ in range(50):
        inst = random_integer_instance(rng, 3, 3, 0, 9)
        sizes = sumset_sizes(inst)
        for a in range(1, 8):
            assert extreme_products(inst, a) == (sizes[a], sizes[a])


def test_extreme_products_s3():
    g = catalog_group("S3")
    t = next(x for x in g.elements() if g.element_orders()[x] == 2)
    c = next(x for x in g.elements() if g.element_orders()[x] == 3)
    e = g.identity
    inst = SumsetInstance(g, ((e, t), (e, c), (e, t)))
    # A = {1,3}: sizes of S_1 * {y} * S_3 for y in S_2
    sizes = [len(brute_sum(g, [(e, t), (y,), (e, t)])) for y in (e, c)]
    assert sorted(sizes) == [2, 4]
    assert extreme_products(inst, mask_of([1, 3])) == (max(sizes), min(sizes))
    assert extreme_products(inst, 7) == (len(product_set(g, inst.sets)),) * 2
    two = SumsetInstance(g, ((e, t), (e, c)))
    assert extreme_products(two, mask_of([1])) == (2, 2)


def test_conjectures_on_single_set():
    inst = SumsetInstance(Z, ((0, 2, 9),))
    r1 = conjecture_feasibility(inst, "6.1")
    r2 = conjecture_feasibility(inst, "6.2")
    assert r1.feasible and r1.witness == pytest.approx((3,))
    assert r2.feasible and r2.witness == (2,)
    with pytest.raises(InvalidInput):
        conjecture_feasibility(inst, "7.1")


def test_additive_conjecture_in_torsion_free_groups(rng):
    for _ in range(80):
        inst = random_integer_instance(rng, rng.randint(2, 3), 3, 0, 10, d=rng.randint(1, 2))
        r = conjecture_feasibility(inst, "6.2")
        assert r.feasible and r.verified


def test_additive_conjecture_fails_with_torsion():
    # {0,2} + {0,2} in Z4 is a subgroup of size 2 < 2 + 2 - 1
    r = conjecture_feasibility(SumsetInstance(Cyclic(4), ((0, 2), (0, 2))), "6.2")
    assert not r.feasible and r.verified
    assert r.sizes == {1: 2, 2: 2, 3: 2}


@given(
    st.lists(st.lists(st.integers(-8, 8), min_size=1, max_size=4), min_size=1, max_size=3)
)
@settings(max_examples=150, deadline=None)
def test_cover_and_additive_bounds_hold_in_z(sets):
    inst = SumsetInstance(Z, tuple(map(tuple, sets)))
    n = inst.n
    fam = all_subsets_of_size(n, max(1, n - 1))
    k = sum(1 for a in fam.members if a & 1)
    assert verify_sumset_cover(inst, fam, k).holds
    assert verify_additive_cover(inst, fam, k).holds
    assert conjecture_feasibility(inst, "6.1").feasible
