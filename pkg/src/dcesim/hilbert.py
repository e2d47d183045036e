"""Truncated Fock x atom Hilbert space and elementary operators.

Basis ordering is atom-major, photon-minor: the state |j, n> (atomic level j,
n photons) sits at index j*(n_max+1) + n.  All modules share this convention.
Matrices are dense complex arrays; the largest dimension used in practice is
~150, where diagonalization dominates and sparsity buys nothing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class AtomKind(enum.Enum):
    QUBIT = "qubit"
    CYCLIC_QUTRIT = "cyclic_qutrit"

    @property
    def n_levels(self) -> int:
        return 2 if self is AtomKind.QUBIT else 3


#: Atomic level pairs (k, l) with l > k that carry a dipole coupling,
#: in the order matching the coupling vector g = (g1, g2, g3).
COUPLING_PAIRS = ((0, 1), (1, 2), (0, 2))


@dataclass(frozen=True)
class BasisSpec:
    """Descriptor of the truncated composite Hilbert space."""

    atom: AtomKind
    n_max: int
    trunc_tol: float = 1e-8

    def __post_init__(self):
        if self.n_max < 4:
            raise ValueError(
                f"n_max={self.n_max} < 4: cannot represent a 4-photon transition"
            )

    @property
    def n_fock(self) -> int:
        return self.n_max + 1

    @property
    def dim(self) -> int:
        return self.atom.n_levels * self.n_fock

    def index(self, atom_level: int, photons: int) -> int:
        """Flat index of the bare state |atom_level, photons>."""
        if not 0 <= atom_level < self.atom.n_levels:
            raise ValueError(f"atomic level {atom_level} out of range")
        if not 0 <= photons <= self.n_max:
            raise ValueError(f"photon number {photons} out of range")
        return atom_level * self.n_fock + photons

    def bare_label(self, idx: int) -> tuple[int, int]:
        """Inverse of index(): (atom_level, photons) for a flat index."""
        return divmod(idx, self.n_fock)

    def pairs(self) -> tuple[tuple[int, int], ...]:
        """Dipole-coupled level pairs valid for this atom."""
        if self.atom is AtomKind.QUBIT:
            return COUPLING_PAIRS[:1]
        return COUPLING_PAIRS

    def with_n_max(self, n_max: int) -> "BasisSpec":
        return BasisSpec(self.atom, n_max, self.trunc_tol)


@dataclass(frozen=True)
class OperatorSet:
    """Elementary operators embedded in the full space.

    sigma[k][l] is |k><l| (atomic projector/transition operator) and
    d[(k, l)] = (a + a†)(sigma_{l,k} + sigma_{k,l}) for coupled pairs.
    Immutable after construction; safe to share across workers.
    """

    basis: BasisSpec
    a: np.ndarray
    a_dagger: np.ndarray
    n_hat: np.ndarray
    sigma: tuple  # sigma[k][l] -> ndarray
    d: dict = field(default_factory=dict)

    def __post_init__(self):
        for m in (self.a, self.a_dagger, self.n_hat):
            m.setflags(write=False)


def build_operators(basis: BasisSpec) -> OperatorSet:
    """Construct all elementary operators for the given basis.

    The annihilation operator acts on the photon index only, the atomic
    operators on the level index only; both are embedded via Kronecker
    products consistent with the atom-major ordering.
    """
    nf = basis.n_fock
    nl = basis.atom.n_levels

    a_fock = np.diag(np.sqrt(np.arange(1, nf)), k=1).astype(complex)
    eye_atom = np.eye(nl, dtype=complex)
    eye_fock = np.eye(nf, dtype=complex)

    a = np.kron(eye_atom, a_fock)
    a_dagger = a.conj().T
    n_hat = a_dagger @ a

    sigma = []
    for k in range(nl):
        row = []
        for l in range(nl):
            proj = np.zeros((nl, nl), dtype=complex)
            proj[k, l] = 1.0
            row.append(np.kron(proj, eye_fock))
        sigma.append(tuple(row))
    sigma = tuple(sigma)

    x = a + a_dagger
    d = {}
    for (k, l) in basis.pairs():
        d[(k, l)] = x @ (sigma[l][k] + sigma[k][l])

    return OperatorSet(basis=basis, a=a, a_dagger=a_dagger, n_hat=n_hat,
                       sigma=sigma, d=d)
