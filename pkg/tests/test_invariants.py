"""Invariant tests: the complement-projection norm, the weaving threshold
witnesses and diameters, against the closed-form table and sampled bounds."""

import numpy as np
import pytest

from unicover.matcore import InvalidArgumentError
from unicover.groups import GroupSpec, HomSpace, SubgroupSpec
from unicover.invariants import (
    diameter_estimate,
    diameter_known,
    extrinsic_of_intrinsic,
    invariant_report,
    kappa_known,
    kappa_lower,
    theta_known,
    theta_units,
    theta_witness_upper,
)


def _grassmann(kind, n, k):
    return HomSpace(GroupSpec(kind, n), SubgroupSpec.grassmann(k))


class TestKappa:
    def test_trivial_subgroup_exact_one(self, rng):
        space = HomSpace(GroupSpec("U", 3), SubgroupSpec.trivial())
        assert kappa_lower(space, samples=20, rng=rng) == 1.0

    def test_grassmann_is_one_all_small_cases(self):
        for n in range(2, 7):
            for k in range(1, n):
                space = _grassmann("U", n, k)
                assert kappa_known(space) == 1.0
                kl = kappa_lower(space, samples=100, rng=0)
                assert abs(kl - 1.0) <= 1e-9

    def test_multiblock_between_one_and_two(self):
        space = HomSpace(GroupSpec("U", 3),
                         SubgroupSpec.block_diagonal([1, 1, 1]))
        assert kappa_known(space) is None
        kl = kappa_lower(space, samples=400, rng=0)
        assert 1.0 <= kl <= 2.0 + 1e-6

    def test_tensor_factor_exceeds_one(self):
        # the complement projection of the tensor-factor subalgebra is not
        # norm-one, so no closed-form value is tabulated
        space = HomSpace(GroupSpec("U", 4), SubgroupSpec.tensor_factor(2, 2))
        assert kappa_known(space) is None
        kl = kappa_lower(space, samples=400, rng=1)
        assert 1.1 < kl <= 2.0 + 1e-6

    def test_monotone_prefix(self):
        space = _grassmann("U", 4, 1)
        a = kappa_lower(space, samples=50, rng=5)
        b = kappa_lower(space, samples=200, rng=5)
        assert b >= a - 1e-9

    def test_invalid_samples(self):
        with pytest.raises(InvalidArgumentError):
            kappa_lower(_grassmann("U", 3, 1), samples=0)


class TestTheta:
    def test_known_table(self):
        assert theta_known(_grassmann("U", 4, 2)) == pytest.approx(np.pi)
        assert theta_known(
            HomSpace(GroupSpec("U", 2), SubgroupSpec.trivial())
        ) == pytest.approx(np.pi)
        three = HomSpace(GroupSpec("U", 3),
                         SubgroupSpec.block_diagonal([1, 1, 1]))
        assert theta_known(three) == 2.0
        assert theta_units(three) == "extrinsic"
        tensor = HomSpace(GroupSpec("U", 4), SubgroupSpec.tensor_factor(2, 2))
        assert theta_known(tensor) == 2.0
        circle = HomSpace(GroupSpec("U", 2), SubgroupSpec.special())
        assert theta_known(circle) is None

    def test_extrinsic_value_two_is_intrinsic_pi(self):
        assert extrinsic_of_intrinsic(np.pi) == pytest.approx(2.0)
        assert extrinsic_of_intrinsic(0.0) == 0.0

    def test_special_witness_upper(self):
        # determinant-one subgroup: scalar witnesses give theta <= 2 pi / n
        for n in range(2, 7):
            space = HomSpace(GroupSpec("U", n), SubgroupSpec.special())
            tw = theta_witness_upper(space, rng=0)
            assert tw is not None
            assert tw <= 2 * np.pi / n + 1e-6

    def test_block_witness_consistent_with_table(self):
        # the witness bound can never undercut the true (known) threshold
        space = HomSpace(GroupSpec("U", 3),
                         SubgroupSpec.block_diagonal([1, 1, 1]))
        tw = theta_witness_upper(space, rng=0)
        assert tw is not None
        # known extrinsic value 2 corresponds to intrinsic pi
        assert tw >= np.pi - 1e-9

    def test_trivial_no_witness(self):
        space = HomSpace(GroupSpec("U", 2), SubgroupSpec.trivial())
        assert theta_witness_upper(space) is None


class TestDiameter:
    def test_known_table(self):
        assert diameter_known(GroupSpec("U", 2)) == pytest.approx(np.pi)
        assert diameter_known(GroupSpec("SO", 3)) == pytest.approx(np.pi)
        assert diameter_known(_grassmann("U", 4, 2)) == pytest.approx(np.pi / 2)
        circle = HomSpace(GroupSpec("U", 3), SubgroupSpec.special())
        assert diameter_known(circle) == pytest.approx(np.pi / 3)

    def test_estimate_approaches_known_on_grassmann(self):
        space = _grassmann("U", 3, 1)
        est = diameter_estimate(space, samples=16, rng=0)
        assert est <= np.pi / 2 + 1e-9
        assert est >= np.pi / 2 - 0.05

    def test_estimate_circle(self):
        space = HomSpace(GroupSpec("U", 2), SubgroupSpec.special())
        est = diameter_estimate(space, samples=16, rng=0)
        assert est == pytest.approx(np.pi / 2, abs=0.01)

    def test_estimate_never_exceeds_pi(self):
        space = HomSpace(GroupSpec("U", 2), SubgroupSpec.trivial())
        est = diameter_estimate(space, samples=16, rng=0)
        assert est <= np.pi + 1e-6

    def test_invalid_samples(self):
        with pytest.raises(InvalidArgumentError):
            diameter_estimate(_grassmann("U", 3, 1), samples=1)


class TestReport:
    def test_report_consistency(self):
        space = _grassmann("U", 3, 1)
        rep = invariant_report(space, samples=40, rng=0)
        assert rep.dim_M == space.dim
        assert rep.kappa_known == 1.0
        assert rep.kappa_lower_bound >= 1.0
        assert abs(rep.kappa_lower_bound - 1.0) <= 1e-6
        assert rep.theta_known == pytest.approx(np.pi)
        assert rep.theta_units == "intrinsic"
        assert rep.diam_known == pytest.approx(np.pi / 2)
        assert rep.diam_lower_bound <= np.pi + 1e-9
        assert rep.diam_lower_bound <= rep.diam_known + 1e-6
