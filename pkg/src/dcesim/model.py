"""Time-dependent Hamiltonian of the modulated cavity + detuned atom.

Units: nu = 1 and hbar = 1 throughout; every frequency/energy is expressed
in units of nu and time in units of 1/nu.

H(t) = omega(t) n + i chi(t) (a†² - a²) + sum_k E_k sigma_kk
       + sum_{k<l} G_{k,l}(t) D_{k,l}

with omega(t) = nu + eps sin(eta t), G_i(t) = g_i + eps_tilde_i sin(eta t + phi_i)
and chi either eps*eta*cos(eta t)/(4 omega(t)) ("exact") or the first-order
form eps*eta*cos(eta t)/(4 nu).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .hilbert import AtomKind, BasisSpec, OperatorSet, build_operators


class ChiMode(enum.Enum):
    EXACT = "exact"
    FIRST_ORDER = "first_order"


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of the cavity, modulation and atom.

    E = (E1, E2) are the excited atomic energies (E0 = 0); for a qubit E2 is
    unused.  g = (g1, g2, g3) are the static couplings of the level pairs
    (0,1), (1,2), (0,2); eps_tilde and phi the amplitudes/phases of an
    optional coupling modulation at the same frequency eta.
    """

    nu: float = 1.0
    eps: float = 0.0
    eta: float = 0.0
    E: tuple[float, float] = (0.0, 0.0)
    g: tuple[float, float, float] = (0.0, 0.0, 0.0)
    eps_tilde: tuple[float, float, float] = (0.0, 0.0, 0.0)
    phi: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "E", tuple(float(x) for x in self.E))
        object.__setattr__(self, "g", tuple(float(x) for x in self.g))
        object.__setattr__(self, "eps_tilde",
                           tuple(float(x) for x in self.eps_tilde))
        object.__setattr__(self, "phi", tuple(float(x) for x in self.phi))
        if self.nu <= 0:
            raise ValueError("nu must be positive")
        if any(gi < 0 for gi in self.g):
            raise ValueError("coupling strengths g_i must be non-negative")
        if self.eps / self.nu > 0.2:
            raise ValueError(
                f"eps/nu = {self.eps / self.nu:.3g} > 0.2 breaks the "
                "weak-modulation assumption"
            )
        if self.eps / self.nu > 0.05:
            warnings.warn(
                f"eps/nu = {self.eps / self.nu:.3g} > 0.05: weak-modulation "
                "expansion is getting strained", stacklevel=2)

    def validate_for(self, atom: AtomKind):
        if atom is AtomKind.QUBIT and (self.g[1] != 0 or self.g[2] != 0
                                       or self.eps_tilde[1] != 0
                                       or self.eps_tilde[2] != 0):
            raise ValueError("a qubit admits only the g1 (0<->1) coupling; "
                             "g2/g3 must vanish")


def omega_of_t(params: SystemParams, t: float) -> float:
    """Instantaneous cavity frequency nu + eps sin(eta t)."""
    return params.nu + params.eps * math.sin(params.eta * t)


def chi_of_t(params: SystemParams, t: float,
             chi_mode: ChiMode = ChiMode.EXACT) -> float:
    """Squeezing coefficient chi(t) = (d omega/dt) / (4 omega) or its
    first-order-in-eps approximation eps*eta*cos(eta t)/(4 nu)."""
    num = params.eps * params.eta * math.cos(params.eta * t)
    if chi_mode is ChiMode.FIRST_ORDER:
        return num / (4.0 * params.nu)
    return num / (4.0 * omega_of_t(params, t))


def coupling_of_t(params: SystemParams, i: int, t: float) -> float:
    """Coupling G_i(t) = g_i + eps_tilde_i sin(eta t + phi_i), i in {1,2,3}."""
    if i not in (1, 2, 3):
        raise ValueError("coupling index must be 1, 2 or 3")
    j = i - 1
    return params.g[j] + params.eps_tilde[j] * math.sin(
        params.eta * t + params.phi[j])


@dataclass(frozen=True)
class HamiltonianModel:
    """Assembled model: basis, precomputed operators and parameters.

    Immutable; hamiltonian_at is a pure function of (model, t).

    drop_counter_rotating is a test-only switch that replaces each dipole
    term with its excitation-conserving (rotating-wave) part; it exists to
    verify that the multi-photon generation vanishes without the
    counter-rotating terms and is never exposed through the CLI.
    """

    basis: BasisSpec
    params: SystemParams
    chi_mode: ChiMode = ChiMode.EXACT
    drop_counter_rotating: bool = False
    ops: OperatorSet = field(default=None)

    def __post_init__(self):
        self.params.validate_for(self.basis.atom)
        if self.ops is None:
            object.__setattr__(self, "ops", build_operators(self.basis))
        self._static_pieces()

    # -- internal precomputation -------------------------------------------

    def _coupling_matrix(self, pair) -> np.ndarray:
        """Dipole operator for one level pair, optionally RWA-truncated."""
        k, l = pair
        ops = self.ops
        if not self.drop_counter_rotating:
            return ops.d[pair]
        # rotating part only: a sigma_{l,k} + a† sigma_{k,l}
        m = ops.a @ ops.sigma[l][k] + ops.a_dagger @ ops.sigma[k][l]
        return m

    def _static_pieces(self):
        """Cache the time-independent matrices H(t) is assembled from."""
        ops = self.ops
        p = self.params
        squeeze = 1j * (ops.a_dagger @ ops.a_dagger - ops.a @ ops.a)
        atomic = np.zeros_like(ops.n_hat)
        for k in range(1, self.basis.atom.n_levels):
            atomic += p.E[k - 1] * ops.sigma[k][k]
        dipoles = [self._coupling_matrix(pair) for pair in self.basis.pairs()]
        h_bare = p.nu * ops.n_hat + atomic
        for gi, dm in zip(p.g, dipoles):
            h_bare = h_bare + gi * dm
        object.__setattr__(self, "_squeeze", squeeze)
        object.__setattr__(self, "_dipoles", dipoles)
        object.__setattr__(self, "_h_bare", h_bare)

    # -- public surface ----------------------------------------------------

    @property
    def dim(self) -> int:
        return self.basis.dim

    def bare_hamiltonian(self) -> np.ndarray:
        """H0 = H with eps = chi = eps_tilde_i = 0 (time-independent)."""
        return self._h_bare.copy()

    def hamiltonian_at(self, t: float, out: np.ndarray | None = None) -> np.ndarray:
        """Full H(t); Hermitian to machine precision.

        `out`, when given, is overwritten and returned (hot path of the
        integrators; avoids reallocating at every RHS evaluation).
        """
        p = self.params
        if out is None:
            out = np.empty_like(self._h_bare)
        np.copyto(out, self._h_bare)
        dw = omega_of_t(p, t) - p.nu
        if dw != 0.0:
            out += dw * self.ops.n_hat
        chi = chi_of_t(p, t, self.chi_mode)
        if chi != 0.0:
            out += chi * self._squeeze
        if any(p.eps_tilde):
            for j, dm in enumerate(self._dipoles):
                dg = p.eps_tilde[j] * math.sin(p.eta * t + p.phi[j])
                if dg != 0.0:
                    out += dg * dm
        return out

    @property
    def period(self) -> float:
        """One modulation period 2*pi/eta (inf when unmodulated)."""
        if self.eta == 0.0 or not self.is_modulated:
            return math.inf
        return 2.0 * math.pi / self.eta

    @property
    def eta(self) -> float:
        return self.params.eta

    @property
    def is_modulated(self) -> bool:
        return self.params.eps != 0.0 or any(self.params.eps_tilde)

    def with_n_max(self, n_max: int) -> "HamiltonianModel":
        """Same physics on a larger (or smaller) photon cutoff."""
        return HamiltonianModel(self.basis.with_n_max(n_max), self.params,
                                self.chi_mode, self.drop_counter_rotating)
