import itertools

import pytest

from hsc.linalg import ONE, Q
from hsc.rootdata import RootSystemError, build_root_datum
from hsc.bk import (
    BKInstance,
    ParabolicDatum,
    bk_cohomology,
    build_bk_instance,
    kostant_table,
    verify_structure,
)


@pytest.fixture(scope="module")
def a2():
    return build_root_datum("A2")


@pytest.fixture(scope="module")
def a1():
    return build_root_datum("A1")


class TestParabolic:
    def test_support_mapping(self, a2):
        par = ParabolicDatum(a2, [2])
        assert par.m == 1
        assert par.support_to_simple([1]) == (0,)

    def test_support_out_of_range(self, a2):
        par = ParabolicDatum(a2, [2])
        with pytest.raises(RootSystemError):
            par.support_to_simple([2])

    def test_levi_out_of_range(self, a2):
        with pytest.raises(RootSystemError):
            ParabolicDatum(a2, [3])

    def test_levi_roots(self, a2):
        par = ParabolicDatum(a2, [1])
        assert par.levi_positive_roots(par.levi0) == [(1, 0)]
        assert len(par.levi_basis_indices(par.levi0)) == 4


class TestInstanceInvariants:
    def test_dimension_and_intersection(self, a2):
        par = ParabolicDatum(a2, [])
        for sup in [(), (1,), (2,), (1, 2)]:
            inst = build_bk_instance(par, sup)
            assert inst.algebra.dim == a2.dim
            assert inst.mixed_nilradical.intersect(inst.diag_levi).dim == 0
            # the ideal is an ideal and the subalgebra closed: both were
            # validated during construction; revalidate the full algebra
            assert inst.algebra.validate() == []

    def test_full_support_is_diagonal(self, a2):
        par = ParabolicDatum(a2, [])
        inst = build_bk_instance(par, (1, 2))
        assert inst.mixed_nilradical.dim == 0
        assert len(inst.diag_local) + len(inst.k_local) == a2.dim

    def test_empty_support_nilradical(self, a2):
        par = ParabolicDatum(a2, [])
        inst = build_bk_instance(par, ())
        assert inst.mixed_nilradical.dim == 2 * a2.npos


class TestCohomology:
    def test_a1_both_supports(self, a1):
        par = ParabolicDatum(a1, [])
        for sup in [(), (1,)]:
            ring = bk_cohomology(build_bk_instance(par, sup))
            assert ring.betti == [1, 0, 1]
            assert ring.total_dim() == 2

    def test_a1_diagonal_instance_is_flag_of_rank_one(self, a1):
        par = ParabolicDatum(a1, [])
        inst = build_bk_instance(par, (1,))
        assert inst.mixed_nilradical.dim == 0
        assert bk_cohomology(inst).betti == [1, 0, 1]

    def test_a2_full_flag_all_supports(self, a2):
        par = ParabolicDatum(a2, [])
        for sup in [(), (1,), (2,), (1, 2)]:
            ring = bk_cohomology(build_bk_instance(par, sup))
            assert ring.total_dim() == 6
            assert ring.betti == [1, 0, 2, 0, 2, 0, 1]

    def test_a2_projective_plane(self, a2):
        par = ParabolicDatum(a2, [1])  # m = 1, empty support
        ring = bk_cohomology(build_bk_instance(par, ()))
        assert ring.total_dim() == 3
        assert ring.betti == [1, 0, 1, 0, 1]

    def test_a2_partial_flag_with_support(self, a2):
        par = ParabolicDatum(a2, [1])
        ring = bk_cohomology(build_bk_instance(par, (1,)))
        assert ring.total_dim() == 3

    def test_even_degrees_only(self, a2):
        par = ParabolicDatum(a2, [])
        ring = bk_cohomology(build_bk_instance(par, (1,)))
        assert all(b == 0 for n, b in enumerate(ring.betti) if n % 2)


class TestVerifyStructure:
    def test_a2_showcase(self, a2):
        par = ParabolicDatum(a2, [])
        rep = verify_structure(build_bk_instance(par, (1,)))
        assert rep.ok
        assert rep.betti == {0: 1, 2: 2, 4: 2, 6: 1}
        assert rep.subalgebra_dims == {0: 1, 2: 1}
        assert rep.quotient_dims == {0: 1, 2: 1, 4: 1}
        assert rep.poincare_sub == [1, 1]
        assert rep.poincare_quotient == [1, 1, 1]
        assert rep.poincare_full == [1, 2, 2, 1]
        assert rep.degenerates_at_2
        assert rep.e2_total == 6

    def test_full_support_whole_ring(self, a2):
        par = ParabolicDatum(a2, [])
        rep = verify_structure(build_bk_instance(par, (1, 2)))
        assert rep.ok
        assert sum(rep.subalgebra_dims.values()) == 6
        assert rep.quotient_dims == {0: 1}

    def test_empty_support_scalar_subalgebra(self, a2):
        par = ParabolicDatum(a2, [])
        rep = verify_structure(build_bk_instance(par, ()))
        assert rep.ok
        assert rep.subalgebra_dims == {0: 1}
        assert sum(rep.quotient_dims.values()) == 6

    def test_partial_flag(self, a2):
        par = ParabolicDatum(a2, [1])
        for sup in [(), (1,)]:
            rep = verify_structure(build_bk_instance(par, sup))
            assert rep.ok

    def test_b2_instances(self):
        b2 = build_root_datum("B2")
        par = ParabolicDatum(b2, [])
        for sup in [(), (1,), (2,), (1, 2)]:
            rep = verify_structure(build_bk_instance(par, sup))
            assert rep.ok
            assert rep.total_dim == 8

    def test_total_dim_constant_across_supports(self, a2):
        par = ParabolicDatum(a2, [])
        wc = None
        for sup in [(), (1,), (2,), (1, 2)]:
            inst = build_bk_instance(par, sup)
            rep = verify_structure(inst)
            assert rep.total_dim == rep.flag_count == 6
            assert sum(rep.subalgebra_dims.values()) == rep.subalgebra_expected


class TestKostant:
    def test_full_extension_scalars(self, a2):
        par = ParabolicDatum(a2, [])
        kt = kostant_table(par, (0, 1))
        assert kt.invariant_dims == {0: 1}
        assert kt.coset_count == 1 and kt.matches_total

    def test_a2_flag_invariants(self, a2):
        par = ParabolicDatum(a2, [])
        kt = kostant_table(par, ())
        assert kt.total == 6 and kt.coset_count == 6
        assert kt.matches_total

    def test_a2_middle(self, a2):
        par = ParabolicDatum(a2, [])
        kt = kostant_table(par, (0,))
        assert kt.total == 3 and kt.matches_total

    def test_advisory_grading_matches_for_a2(self, a2):
        par = ParabolicDatum(a2, [])
        kt = kostant_table(par, (0,))
        assert all(same for (_, _, _, same) in kt.per_degree_advisory)

    def test_all_a2_subsets(self, a2):
        par = ParabolicDatum(a2, [])
        for k in range(3):
            for ext in itertools.combinations(range(2), k):
                kt = kostant_table(par, ext)
                assert kt.matches_total
