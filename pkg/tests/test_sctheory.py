import math

import numpy as np
import pytest

from heilbronn.modarith import InvalidInput, build_context
from heilbronn.sctheory import (UnitAction, build_T, build_U, ramanujan_sum,
                                structure_constants_enumerated,
                                structure_tensor_enumerated, superclasses,
                                supercharacter_value)
from heilbronn.spectra import heilbronn_partition


def heilbronn_partition_for(p):
    return heilbronn_partition(build_context(p))


class TestSuperclasses:
    def test_mod9_pth_power_action(self):
        part = superclasses(UnitAction(9, (8,)))
        assert set(part.classes) == {(1, 8), (2, 7), (4, 5), (3, 6), (0,)}

    def test_trivial_action_gives_singletons(self):
        part = superclasses(UnitAction(7, (1,)))
        assert all(len(c) == 1 for c in part.classes)
        assert part.num_classes == 7

    def test_full_unit_group_mod6(self):
        # Ramanujan-sum superclasses are the divisor classes
        part = superclasses(UnitAction(6, (5,)))
        assert set(part.classes) == {(1, 5), (2, 4), (3,), (0,)}

    def test_partition_covers_everything(self):
        for n, gens in [(9, (8,)), (25, (7,)), (12, (5, 7))]:
            part = superclasses(UnitAction(n, gens))
            members = sorted(x for c in part.classes for x in c)
            assert members == list(range(n))
            assert all(part.class_of[x] == i
                       for i, c in enumerate(part.classes, 1) for x in c)

    def test_rejects_non_unit_generator(self):
        with pytest.raises(InvalidInput):
            superclasses(UnitAction(9, (3,)))

    def test_zero_class_is_singleton(self):
        part = superclasses(UnitAction(10, (3,)))
        assert (0,) in part.classes


class TestSupercharacterValue:
    def test_value_at_zero_class_is_class_size(self):
        part = heilbronn_partition_for(5)
        zero = part.num_classes
        for i in range(1, part.num_classes + 1):
            v = supercharacter_value(part, i, zero)
            assert v == pytest.approx(part.size(i))

    def test_mod9_heilbronn_value(self):
        # sigma at (class of A, class of A): A = {1, 8} mod 9
        part = superclasses(UnitAction(9, (8,)))
        i = part.class_of[1]
        v = supercharacter_value(part, i, i)
        expected = sum(math.cos(2 * math.pi * x / 9) for x in (1, 8))
        assert v.real == pytest.approx(expected)
        assert abs(v.imag) < 1e-12

    def test_real_when_closed_under_negation(self):
        part = heilbronn_partition_for(7)
        for i in range(1, part.num_classes + 1):
            for j in range(1, part.num_classes + 1):
                assert abs(supercharacter_value(part, i, j).imag) < 1e-10

    def test_representative_independence_debug(self):
        part = heilbronn_partition_for(5)
        supercharacter_value(part, 2, 3, debug=True)

    def test_index_out_of_range(self):
        part = heilbronn_partition_for(3)
        with pytest.raises(IndexError):
            supercharacter_value(part, 0, 1)
        with pytest.raises(IndexError):
            supercharacter_value(part, 1, part.num_classes + 1)


class TestBuildU:
    def test_unitary_and_symmetric_p7(self):
        mats = build_U(heilbronn_partition_for(7))
        N = mats.U.shape[0]
        assert np.abs(mats.U @ mats.U.conj().T - np.eye(N)).max() < 1e-10
        assert np.abs(mats.U - mats.U.T).max() < 1e-10

    def test_zero_class_row(self):
        part = heilbronn_partition_for(5)
        mats = build_U(part)
        n = part.n
        expected = [math.sqrt(part.size(j)) / math.sqrt(n)
                    for j in range(1, part.num_classes + 1)]
        assert np.abs(mats.U[-1].real - np.array(expected)).max() < 1e-12

    def test_sigma_constant_on_superclasses(self):
        part = superclasses(UnitAction(10, (9,)))
        for i in range(1, part.num_classes + 1):
            for j in range(1, part.num_classes + 1):
                ref = supercharacter_value(part, i, j)
                for y in part.classes[j - 1]:
                    xs = np.array(part.classes[i - 1])
                    v = np.exp(2j * np.pi * ((xs * y) % 10) / 10).sum()
                    assert abs(v - ref) < 1e-10


class TestStructureConstants:
    def test_mod9_examples(self):
        part = superclasses(UnitAction(9, (8,)))
        a = part.class_of[1]       # class {1, 8}
        k27 = part.class_of[2]     # class {2, 7}
        k45 = part.class_of[4]     # class {4, 5}
        assert structure_constants_enumerated(part, a, a, k27) == 1
        assert structure_constants_enumerated(part, a, a, k45) == 0

    def test_adding_zero_class(self):
        part = heilbronn_partition_for(5)
        zero = part.num_classes
        for i in range(1, zero + 1):
            for k in range(1, zero + 1):
                c = structure_constants_enumerated(part, i, zero, k)
                assert c == (1 if k == i else 0)

    def test_representative_independence(self):
        for p in (3, 5, 7, 11):
            part = heilbronn_partition_for(p)
            N = part.num_classes
            for i in range(1, N + 1):
                for j in range(1, N + 1):
                    for k in range(1, N + 1):
                        structure_constants_enumerated(part, i, j, k, debug=True)

    def test_tensor_matches_per_triple_counts(self):
        part = heilbronn_partition_for(5)
        tensor = structure_tensor_enumerated(part)
        N = part.num_classes
        for i in range(1, N + 1):
            for j in range(1, N + 1):
                for k in range(1, N + 1):
                    assert tensor(i, j, k) == \
                        structure_constants_enumerated(part, i, j, k)

    def test_product_identity(self):
        # sigma_i sigma_j = sum_k c(i,j,k) sigma_k, entrywise
        for p in (3, 5, 7):
            part = heilbronn_partition_for(p)
            mats = build_U(part)
            tensor = structure_tensor_enumerated(part)
            N = part.num_classes
            prod = mats.sigma[:, None, :] * mats.sigma[None, :, :]
            recon = np.einsum("ijk,kl->ijl", tensor.c.astype(float), mats.sigma)
            assert np.abs(prod - recon).max() < 1e-8


class TestTMatrices:
    def test_diagonalization_law_p7(self):
        part = heilbronn_partition_for(7)
        mats = build_U(part)
        tensor = structure_tensor_enumerated(part)
        for i in range(1, part.num_classes + 1):
            T = build_T(part, tensor, i)
            assert np.abs(T @ mats.U - mats.U @ mats.D(i)).max() < 1e-8

    def test_zero_class_gives_identity(self):
        part = heilbronn_partition_for(5)
        tensor = structure_tensor_enumerated(part)
        T = build_T(part, tensor, part.num_classes)
        assert np.array_equal(T, np.eye(part.num_classes))

    def test_pairwise_commuting(self):
        part = heilbronn_partition_for(7)
        tensor = structure_tensor_enumerated(part)
        Ts = [build_T(part, tensor, i)
              for i in range(1, part.num_classes + 1)]
        for A in Ts:
            for B in Ts:
                assert np.abs(A @ B - B @ A).max() < 1e-8

    def test_normality(self):
        for n, gens in [(9, (8,)), (25, (7,)), (121, (3,))]:
            part = superclasses(UnitAction(n, gens))
            tensor = structure_tensor_enumerated(part)
            for i in range(1, part.num_classes + 1):
                T = build_T(part, tensor, i)
                assert np.abs(T.T @ T - T @ T.T).max() < 1e-9


class TestRamanujanCrossCheck:
    @pytest.mark.parametrize("n", [6, 10, 12])
    def test_values_match_direct_sums(self, n):
        # full unit group action: sigma values are classical Ramanujan sums
        gens = tuple(u for u in range(1, n) if math.gcd(u, n) == 1)
        part = superclasses(UnitAction(n, gens))
        # the unit-class row evaluates c_n at any representative of each class
        i = part.class_of[1]
        for j in range(1, part.num_classes + 1):
            x = part.representative(j)
            v = supercharacter_value(part, i, j)
            assert abs(v - ramanujan_sum(n, x)) < 1e-10
