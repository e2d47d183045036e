"""Closed-form perturbative results for the qubit case.

Serves as the independent analytic oracle for the exact-diagonalization
module: four-photon cavity/dipole matrix elements far from and near the
three-photon resonance E1 ~ 3 nu, the degenerate-limit elements and rate
bound, and the approximate dressed eigenfrequencies with their effective
Kerr term.

Everything here is a pure stateless function of (nu, E1, g1, ...); no
resummation or regularization is attempted near the poles, which are
reported as explicit exceptions instead.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass


class PerturbationSingularity(ArithmeticError):
    """Input sits on (or too close to) a pole of the perturbative formula."""


@dataclass(frozen=True)
class JCAuxiliaries:
    """Jaynes-Cummings doublet auxiliaries for Fock index k."""

    beta: float          # [(nu-E1)² + 4 g1² k]^{1/2}
    theta: float
    s: float             # sin(theta)
    c: float             # cos(theta)


def aux(nu: float, e1: float, g1: float, k: int) -> JCAuxiliaries:
    """beta_k and the mixing angle theta_k = arctan[(nu-E1+beta_k)/(2 g1 √k)].

    The k = 0 limit is taken analytically: theta_0 = pi/2 for E1 < nu and
    0 for E1 > nu.
    """
    if k < 0:
        raise ValueError("Fock index k must be >= 0")
    delta = nu - e1
    beta = math.hypot(delta, 2.0 * g1 * math.sqrt(k))
    denom = 2.0 * g1 * math.sqrt(k)
    if denom == 0.0:
        if delta == 0.0 and k >= 1:
            raise PerturbationSingularity(
                "theta_k undefined: g1 = 0 and E1 = nu simultaneously")
        theta = math.pi / 2.0 if delta > 0.0 else 0.0
        if delta == 0.0:        # k = 0, resonant: convention theta = pi/2
            theta = math.pi / 2.0
    else:
        theta = math.atan((delta + beta) / denom)
    return JCAuxiliaries(beta=beta, theta=theta,
                         s=math.sin(theta), c=math.cos(theta))


def _rising_sqrt(k: int, q: int) -> float:
    """sqrt((k+q)!/k!)."""
    prod = 1.0
    for j in range(k + 1, k + q + 1):
        prod *= j
    return math.sqrt(prod)


def check_dispersive(nu, e1, g1, k_max):
    """Warn when |nu - E1| is not large against g1 sqrt(k_max)."""
    if abs(nu - e1) <= g1 * math.sqrt(max(k_max, 1)):
        warnings.warn(
            "outside the strong dispersive regime: |nu - E1| <= g1 sqrt(k)",
            stacklevel=2)


def c4_far(nu: float, e1: float, g1: float, k: int) -> float:
    """Fourth-order cavity element for the k -> k+4 transition, valid far
    from the three-photon resonance:

        3 g1^4 E1 sqrt[(k+1)(k+2)(k+3)(k+4)]
        / [nu (nu-E1)(nu+E1)(3nu-E1)(3nu+E1)]
    """
    if e1 in (nu, 3.0 * nu):
        raise PerturbationSingularity(f"exact pole at E1 = {e1}")
    num = 3.0 * g1**4 * e1 * _rising_sqrt(k, 4)
    den = nu * (nu - e1) * (nu + e1) * (3.0 * nu - e1) * (3.0 * nu + e1)
    return num / den


def _near_denominator(nu, e1, g1, k, tol=1e-9):
    b4 = aux(nu, e1, g1, k + 4).beta
    b2 = aux(nu, e1, g1, k + 2).beta
    den = 4.0 * nu - b4 - b2
    if abs(den) < tol * nu:
        raise PerturbationSingularity(
            "degeneracy 4 nu = beta_{k+4} + beta_{k+2}: switch to the "
            "degenerate branch")
    return den


def c_near(nu: float, e1: float, g1: float, k: int) -> float:
    """Cavity element near the three-photon resonance E1 ~ 3 nu."""
    den = _near_denominator(nu, e1, g1, k)
    pre = g1**4 / (4.0 * nu * (nu - e1) ** 2) * _rising_sqrt(k, 4)
    bracket = (2.0 * (1.0 + 8.0 * nu / (nu - e1)) / den
               - 3.0 / (nu - e1) - 2.0 / (3.0 * nu) - k / (4.0 * nu))
    return pre * bracket


def a_near(nu: float, e1: float, g1: float, k: int) -> float:
    """Dipole element (0,1 pair) near the three-photon resonance."""
    den = _near_denominator(nu, e1, g1, k)
    pre = g1**3 / (4.0 * nu * (nu - e1) ** 2) * _rising_sqrt(k, 4)
    return pre * (1.0 - 8.0 * nu / den)


def theta_near(nu: float, e1: float, g1: float, eps: float, k: int) -> float:
    """Total transition rate near resonance for the standard dipole qubit
    (coupling modulation eps_tilde1 = g1 eps / 2 nu, phi1 = 0)."""
    den = _near_denominator(nu, e1, g1, k)
    pre = eps * g1**4 / (8.0 * nu * (nu - e1) ** 2) * _rising_sqrt(k, 4)
    bracket = (2.0 * (8.0 * nu / (nu - e1) - 1.0) / den
               - 3.0 / (nu - e1) - 1.0 / (6.0 * nu) - k / (4.0 * nu))
    return pre * bracket


def degeneracy_offset(nu: float, e1: float, g1: float, k: int) -> float:
    """4 nu - beta_{k+4} - beta_{k+2}; zero at the exact degeneracy."""
    b4 = aux(nu, e1, g1, k + 4).beta
    b2 = aux(nu, e1, g1, k + 2).beta
    return 4.0 * nu - b4 - b2


def degenerate_e1(nu: float, g1: float, k: int) -> float:
    """E1 > nu solving the degeneracy condition 4 nu = beta_{k+4} + beta_{k+2}
    (bisection; the condition locates the three-photon resonance peak)."""
    lo, hi = nu * 1.5, nu * 3.0
    f = lambda e1: degeneracy_offset(nu, e1, g1, k)
    flo, fhi = f(lo), f(hi)
    if flo * fhi > 0:
        raise ValueError("degeneracy not bracketed in (1.5, 3.0) nu")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if flo * fm <= 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def degenerate_elements(nu: float, e1: float, g1: float, k: int,
                        tol: float = 1e-6) -> tuple[float, float]:
    """(|cavity element|, |dipole element|) at the exact degeneracy:

        3 g1 sqrt(k+1) / (4 sqrt(2) nu)   and   sqrt(k+1)/sqrt(2)

    Requires 4 nu = beta_{k+4} + beta_{k+2} within `tol`*nu.
    """
    if abs(degeneracy_offset(nu, e1, g1, k)) > tol * nu:
        raise ValueError(
            "degenerate_elements called off the degeneracy condition")
    root = math.sqrt(k + 1.0)
    return (3.0 * g1 * root / (4.0 * math.sqrt(2.0) * nu),
            root / math.sqrt(2.0))


def theta_max_bound(nu: float, g1: float, eps: float, k: int) -> float:
    """Upper bound 5 eps g1 sqrt(k+1) / (8 sqrt(2) nu) on |Theta_{0,k;0,k+4}|."""
    return 5.0 * eps * g1 * math.sqrt(k + 1.0) / (8.0 * math.sqrt(2.0) * nu)


def lambda_dispersive(nu: float, g1: float, k: int) -> float:
    """Dressed level lambda_{0,k} in the vicinity of E1 ~ 3 nu, with the
    effective Kerr term:

        -g1²/4nu + nu (1 - 3 g1²/4nu²) k + (g1^4/8nu³) k²
    """
    return (-(g1**2) / (4.0 * nu)
            + nu * (1.0 - 3.0 * g1**2 / (4.0 * nu**2)) * k
            + g1**4 / (8.0 * nu**3) * k**2)


def eta_k_near3nu(nu: float, g1: float, k: int) -> float:
    """Resonant modulation frequency for the k -> k+4 step near E1 ~ 3 nu:

        4 nu (1 - 3 g1²/4nu² + g1^4/2nu^4) + (g1^4/nu³) k
    """
    return (4.0 * nu * (1.0 - 3.0 * g1**2 / (4.0 * nu**2)
                        + g1**4 / (2.0 * nu**4))
            + g1**4 / nu**3 * k)


def lambda_jc_branch(nu: float, e1: float, g1: float, k: int) -> float:
    """Second-order dressed eigenfrequency lambda_{0,k} in the JC-doublet
    treatment near the three-photon resonance.

    Only k = 0 and k > 2 are given in closed form; k in {1, 2} is refused
    rather than interpolated.
    """
    if k in (1, 2):
        raise ValueError("no closed-form expression for k = 1, 2")
    if k == 0:
        x2 = aux(nu, e1, g1, 2)
        return -2.0 * g1**2 * (
            x2.c**2 / (3.0 * nu + e1 + x2.beta)
            + x2.s**2 / (3.0 * nu + e1 - x2.beta))
    xk = aux(nu, e1, g1, k)
    xm = aux(nu, e1, g1, k - 2)
    xp = aux(nu, e1, g1, k + 2)
    second = 2.0 * g1**2 * (
        xk.s**2 * (k - 1) * (
            xm.c**2 / (4.0 * nu - xk.beta + xm.beta)
            + xm.s**2 / (4.0 * nu - xk.beta - xm.beta))
        - xk.c**2 * (k + 1) * (
            xp.c**2 / (4.0 * nu + xk.beta + xp.beta)
            + xp.s**2 / (4.0 * nu + xk.beta - xp.beta)))
    return nu * (k - 0.5) + 0.5 * e1 - 0.5 * xk.beta + second
