"""Closed-form perturbative oracle: frozen values, identities, poles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dcesim import AtomKind, BasisSpec, HamiltonianModel, SystemParams
from dcesim import dressed_spectrum
from dcesim import perturbation as pt
from dcesim.perturbation import PerturbationSingularity

# Valid qubit energies away from the formula poles at E1 = nu, 3 nu and from
# the hybridization degeneracy around 2.98.
E1_FAR = st.one_of(st.floats(1.3, 2.7), st.floats(3.3, 3.8))


class TestAux:
    def test_beta_closed_form(self):
        x = pt.aux(1.0, 2.5, 0.08, 3)
        assert x.beta == pytest.approx(math.hypot(-1.5, 2 * 0.08 * math.sqrt(3)))

    def test_k0_limits(self):
        assert pt.aux(1.0, 0.5, 0.08, 0).theta == pytest.approx(math.pi / 2)
        assert pt.aux(1.0, 2.5, 0.08, 0).theta == pytest.approx(0.0)

    def test_resonant_zero_coupling_singular(self):
        with pytest.raises(PerturbationSingularity):
            pt.aux(1.0, 1.0, 0.0, 2)

    @settings(max_examples=50, deadline=None)
    @given(E1_FAR, st.floats(0.01, 0.1), st.integers(0, 12))
    def test_angle_normalization(self, e1, g1, k):
        x = pt.aux(1.0, e1, g1, k)
        assert x.s == pytest.approx(math.sin(x.theta))
        assert x.c == pytest.approx(math.cos(x.theta))
        assert x.beta >= abs(1.0 - e1)


class TestFrozenValues:
    """Values frozen from an independent evaluation of the formulas."""

    def test_c4_far(self):
        assert pt.c4_far(1.0, 2.5, 0.08, 0) == pytest.approx(
            -1.0424010375521973e-4, rel=1e-12)

    def test_c_near(self):
        assert pt.c_near(1.0, 2.5, 0.08, 0) == pytest.approx(
            -1.7382772734066474e-4, rel=1e-12)

    def test_a_near(self):
        assert pt.a_near(1.0, 2.5, 0.08, 0) == pytest.approx(
            -2.070019353843824e-3, rel=1e-12)

    def test_theta_near(self):
        assert pt.theta_near(1.0, 2.5, 0.08, 0.03, 0) == pytest.approx(
            -3.849427522416265e-6, rel=1e-12)

    def test_theta_max_bound(self):
        assert pt.theta_max_bound(1.0, 0.08, 0.03, 0) == pytest.approx(
            5 * 0.03 * 0.08 / (8 * math.sqrt(2)), rel=1e-14)

    def test_degenerate_e1(self):
        assert pt.degenerate_e1(1.0, 0.08, 0) == pytest.approx(
            2.9807172842180174, abs=1e-10)
        # the degeneracy moves down with k (larger dressed shifts)
        assert pt.degenerate_e1(1.0, 0.08, 4) == pytest.approx(
            2.9546971530137345, abs=1e-10)

    def test_eta_k_polynomial(self):
        g1 = 0.08
        assert pt.eta_k_near3nu(1.0, g1, 0) == pytest.approx(
            4 * (1 - 3 * g1**2 / 4 + g1**4 / 2), rel=1e-14)


def test_zero_coupling_trivial():
    assert pt.c4_far(1.0, 2.5, 0.0, 0) == 0.0
    assert pt.theta_near(1.0, 2.5, 0.0, 0.03, 0) == 0.0
    assert pt.eta_k_near3nu(1.0, 0.0, 3) == pytest.approx(4.0)
    assert pt.lambda_dispersive(1.0, 0.0, 7) == pytest.approx(7.0)


def test_scaling_in_g1():
    # leading orders: C ~ g1^4, A ~ g1^3
    r_c = pt.c4_far(1.0, 2.5, 0.04, 0) / pt.c4_far(1.0, 2.5, 0.02, 0)
    assert r_c == pytest.approx(16.0, rel=1e-10)
    # the g1^3 prefactor carries a weak g1^2 correction via beta_{k+2,4}
    r_a = pt.a_near(1.0, 2.5, 0.04, 0) / pt.a_near(1.0, 2.5, 0.02, 0)
    assert r_a == pytest.approx(8.0, rel=2e-2)


def test_far_formula_poles():
    with pytest.raises(PerturbationSingularity):
        pt.c4_far(1.0, 1.0, 0.08, 0)
    with pytest.raises(PerturbationSingularity):
        pt.c4_far(1.0, 3.0, 0.08, 0)


def test_near_formula_degeneracy_pole():
    e1_deg = pt.degenerate_e1(1.0, 0.08, 0)
    with pytest.raises(PerturbationSingularity):
        pt.c_near(1.0, e1_deg, 0.08, 0)
    with pytest.raises(PerturbationSingularity):
        pt.theta_near(1.0, e1_deg, 0.08, 0.03, 0)


@settings(max_examples=80, deadline=None)
@given(E1_FAR, st.floats(0.01, 0.1), st.floats(0.005, 0.05),
       st.integers(0, 8))
def test_theta_identity(e1, g1, eps, k):
    # Theta = (eps/2)[C + (g1/2nu) A] for the standard dipole qubit
    lhs = pt.theta_near(1.0, e1, g1, eps, k)
    rhs = 0.5 * eps * (pt.c_near(1.0, e1, g1, k)
                       + g1 / 2.0 * pt.a_near(1.0, e1, g1, k))
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)


def test_degeneracy_offset_root_consistency():
    e1 = pt.degenerate_e1(1.0, 0.08, 0)
    assert abs(pt.degeneracy_offset(1.0, e1, 0.08, 0)) < 1e-12
    # strictly monotonic through the root
    assert pt.degeneracy_offset(1.0, e1 - 0.01, 0.08, 0) > 0
    assert pt.degeneracy_offset(1.0, e1 + 0.01, 0.08, 0) < 0


def test_degenerate_elements():
    e1 = pt.degenerate_e1(1.0, 0.08, 0)
    c_abs, a_abs = pt.degenerate_elements(1.0, e1, 0.08, 0)
    assert c_abs == pytest.approx(3 * 0.08 / (4 * math.sqrt(2)), rel=1e-12)
    assert a_abs == pytest.approx(1 / math.sqrt(2), rel=1e-12)
    with pytest.raises(ValueError, match="off the degeneracy"):
        pt.degenerate_elements(1.0, 2.5, 0.08, 0)


def test_dispersive_warning():
    with pytest.warns(UserWarning, match="dispersive"):
        pt.check_dispersive(1.0, 1.05, 0.08, 4)


def test_jc_branch_refuses_k12():
    for k in (1, 2):
        with pytest.raises(ValueError):
            pt.lambda_jc_branch(1.0, 2.5, 0.08, k)


@pytest.mark.parametrize("g1,tol", [(0.02, 1e-6), (0.08, 5e-5)])
def test_jc_branch_vs_diagonalization(g1, tol):
    # second-order closed form tracks the exact dressed frequencies with an
    # O(g1^6) error
    basis = BasisSpec(AtomKind.QUBIT, 40)
    for e1 in (2.5, 2.8, 3.2):
        spec = dressed_spectrum(
            HamiltonianModel(basis, SystemParams(E=(e1, 0.0),
                                                 g=(g1, 0.0, 0.0))))
        for k in (0, 3, 5):
            exact = spec.eigenfrequency((0, k))
            assert pt.lambda_jc_branch(1.0, e1, g1, k) == pytest.approx(
                exact, abs=tol)


def test_eta_spacing_is_kerr_slope():
    g1 = 0.08
    spacing = pt.eta_k_near3nu(1.0, g1, 4) - pt.eta_k_near3nu(1.0, g1, 0)
    assert spacing == pytest.approx(4 * g1**4, rel=1e-14)
