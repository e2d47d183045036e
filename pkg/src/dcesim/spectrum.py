"""Dressed spectrum of the bare Hamiltonian and exact transition elements.

Diagonalizes H0, labels each eigenstate by its dominant bare component
|atom j, n photons>, and evaluates the exact matrix elements driving the
multi-photon transitions:

    C_{m;n} = <phi_m| n + (eta/4nu)(a² - a†²) |phi_n>     (cavity part)
    A_{m;n}^{k,l} = <phi_m| D_{k,l} |phi_n>               (atom part)
    Theta_{m;n} = (eps/2)[C + sum (eps_tilde e^{i phi}/eps) A]

Parameter sweeps over an atomic energy produce a RateTable and its CSV
serialization.
"""

from __future__ import annotations

import cmath
import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .hilbert import BasisSpec
from .model import HamiltonianModel, SystemParams


class LabelingError(RuntimeError):
    """Raised when bare-state labels cannot be assigned one-to-one."""


#: A label drops below this dominant-bare-overlap and is flagged as
#: near-degenerate (a 1/2-1/2 hybridization sits at overlap ~0.5).
DEGENERACY_OVERLAP = 0.55


@dataclass
class DressedSpectrum:
    """Sorted eigenpairs of H0 with optional bare-state labels."""

    basis: BasisSpec
    lambdas: np.ndarray            # ascending eigenfrequencies
    states: np.ndarray             # states[:, n] = |phi_n>
    labels: dict = field(default_factory=dict)       # (j, k) -> eigenindex
    fidelity: dict = field(default_factory=dict)     # (j, k) -> |<j,k|phi>|²
    degenerate_flags: dict = field(default_factory=dict)

    def eigenindex(self, label: tuple[int, int]) -> int:
        if label not in self.labels:
            raise LabelingError(f"no eigenstate labeled {label}")
        return self.labels[label]

    def state(self, label: tuple[int, int]) -> np.ndarray:
        return self.states[:, self.eigenindex(label)]

    def eigenfrequency(self, label: tuple[int, int]) -> float:
        return float(self.lambdas[self.eigenindex(label)])


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    """Deterministic convention: largest-|component| made real positive."""
    idx = np.argmax(np.abs(vecs), axis=0)
    lead = vecs[idx, np.arange(vecs.shape[1])]
    phase = lead / np.abs(lead)
    return vecs / phase[np.newaxis, :]


def _rotate_degenerate_clusters(lambdas, vecs, basis, tol):
    """Align eigenvectors of (numerically) degenerate clusters with the bare
    basis by diagonalizing the photon-number operator inside each cluster.

    Exact crossings (e.g. parity-protected ones) otherwise leave LAPACK free
    to return arbitrary mixtures inside the degenerate subspace, which would
    wreck the labeling.
    """
    nf = basis.n_fock
    n_diag = np.tile(np.arange(nf, dtype=float), basis.atom.n_levels)
    i = 0
    d = len(lambdas)
    while i < d:
        j = i + 1
        while j < d and lambdas[j] - lambdas[j - 1] <= tol:
            j += 1
        if j - i > 1:
            block = vecs[:, i:j]
            n_sub = block.conj().T @ (n_diag[:, None] * block)
            n_sub = 0.5 * (n_sub + n_sub.conj().T)
            _, rot = np.linalg.eigh(n_sub)
            vecs[:, i:j] = block @ rot
        i = j
    return vecs


def diagonalize(h0: np.ndarray, basis: BasisSpec, *,
                hermiticity_tol: float = 1e-10,
                degeneracy_tol: float = 1e-9) -> DressedSpectrum:
    """Eigen-decompose a Hermitian H0 into an (unlabeled) DressedSpectrum."""
    asym = np.max(np.abs(h0 - h0.conj().T))
    if asym > hermiticity_tol:
        raise ValueError(f"input is not Hermitian (asymmetry {asym:.3g})")
    lambdas, vecs = np.linalg.eigh(h0)
    vecs = _rotate_degenerate_clusters(lambdas, vecs.astype(complex), basis,
                                       degeneracy_tol)
    vecs = _fix_phases(vecs)
    return DressedSpectrum(basis=basis, lambdas=lambdas, states=vecs)


def label_states(spectrum: DressedSpectrum) -> DressedSpectrum:
    """Assign each bare label (j, k) to the eigenindex it overlaps most.

    Greedy in decreasing-overlap order with uniqueness on both sides; in the
    dispersive regime overlaps sit near 0/1 so this is unambiguous, and
    genuine clashes surface as LabelingError rather than being resolved
    silently.
    """
    basis = spectrum.basis
    d = basis.dim
    # overlap[b, n] = |<bare b|phi_n>|², bare index = flat basis index
    overlap = np.abs(spectrum.states) ** 2
    order = np.argsort(overlap, axis=None)[::-1]
    labels, fidelity, flags = {}, {}, {}
    used_eig = set()
    used_label = set()
    for flat in order:
        if len(labels) == d:
            break
        b, n = divmod(int(flat), d)
        label = basis.bare_label(b)
        if label in used_label or n in used_eig:
            continue
        labels[label] = n
        fidelity[label] = float(overlap[b, n])
        used_label.add(label)
        used_eig.add(n)
    if len(labels) != d:
        missing = [basis.bare_label(b) for b in range(d)
                   if basis.bare_label(b) not in labels]
        raise LabelingError(f"could not resolve labels for {missing}")
    # flag labels whose best achievable overlap is below threshold
    for label, n in labels.items():
        flags[label] = fidelity[label] < DEGENERACY_OVERLAP
    return replace(spectrum, labels=labels, fidelity=fidelity,
                   degenerate_flags=flags)


def dressed_spectrum(model: HamiltonianModel) -> DressedSpectrum:
    """Diagonalize and label the model's bare Hamiltonian."""
    return label_states(diagonalize(model.bare_hamiltonian(), model.basis))


# -- matrix elements -------------------------------------------------------

def matrix_element_C(spectrum: DressedSpectrum, model: HamiltonianModel,
                     m_label, n_label, eta: float) -> complex:
    """Cavity contribution <phi_m|[n + (eta/4nu)(a² - a†²)]|phi_n>."""
    ops = model.ops
    op = ops.n_hat + (eta / (4.0 * model.params.nu)) * (
        ops.a @ ops.a - ops.a_dagger @ ops.a_dagger)
    vm = spectrum.state(m_label)
    vn = spectrum.state(n_label)
    return complex(vm.conj() @ op @ vn)


def matrix_element_A(spectrum: DressedSpectrum, model: HamiltonianModel,
                     m_label, n_label, pair: tuple[int, int]) -> complex:
    """Atomic contribution <phi_m|D_{k,l}|phi_n> for one coupled pair."""
    if pair not in model.ops.d:
        raise ValueError(f"level pair {pair} invalid for {model.basis.atom}")
    vm = spectrum.state(m_label)
    vn = spectrum.state(n_label)
    return complex(vm.conj() @ model.ops.d[pair] @ vn)


def transition_rate_theta(params: SystemParams, c_value: complex,
                          a_values: dict | None = None) -> complex:
    """Theta = (eps/2)[C + sum_{pairs} (eps_tilde e^{i phi}/eps) A]."""
    a_values = a_values or {}
    if params.eps == 0.0:
        if any(params.eps_tilde):
            raise ValueError("eps = 0 with eps_tilde != 0: the rate "
                             "normalization (eps/2)[...] is undefined")
        return 0.0 + 0.0j
    total = complex(c_value)
    from .hilbert import COUPLING_PAIRS
    for j, pair in enumerate(COUPLING_PAIRS):
        amp = params.eps_tilde[j]
        if amp != 0.0:
            if pair not in a_values:
                raise ValueError(f"missing A element for modulated pair {pair}")
            total += amp * cmath.exp(1j * params.phi[j]) / params.eps \
                * a_values[pair]
    return 0.5 * params.eps * total


def resonant_modulation_frequency(spectrum: DressedSpectrum, k: int,
                                  q: int) -> float:
    """Exact dressed-level spacing eta_k = lambda_{0,k+q} - lambda_{0,k}."""
    if q not in (4, 5):
        raise ValueError("photon step q must be 4 or 5")
    return spectrum.eigenfrequency((0, k + q)) - spectrum.eigenfrequency((0, k))


# -- sweeps ----------------------------------------------------------------

@dataclass(frozen=True)
class SweepConfig:
    """Grid sweep of one atomic energy at otherwise fixed parameters.

    For each grid point and each k in k_list the exact elements
    C_{0,k;0,k+q}, A_{0,k;0,k+q}^{pairs}, Theta and the fidelity of the
    upper label (0, k+q) are computed.  C is evaluated at the sweep-local
    resonant eta_k unless pin_eta fixes it.
    """

    basis: BasisSpec
    params: SystemParams
    sweep_param: str                  # "E1" or "E2"
    start: float
    stop: float
    points: int
    k_list: tuple[int, ...] = (0,)
    q: int = 4
    pin_eta: float | None = None
    #: extra grid values merged into the uniform grid, e.g. to resolve the
    #: narrow fidelity dips at the multi-photon resonances
    extra_points: tuple[float, ...] = ()

    def __post_init__(self):
        if self.sweep_param not in ("E1", "E2"):
            raise ValueError("sweep_param must be 'E1' or 'E2'")
        if self.points < 2:
            raise ValueError("a sweep needs at least 2 grid points")
        if self.q not in (4, 5):
            raise ValueError("photon step q must be 4 or 5")
        object.__setattr__(self, "extra_points",
                           tuple(float(x) for x in self.extra_points))

    def grid(self) -> np.ndarray:
        base = np.linspace(self.start, self.stop, self.points)
        if self.extra_points:
            base = np.unique(np.concatenate([base, self.extra_points]))
        return base

    def params_at(self, value: float) -> SystemParams:
        e1, e2 = self.params.E
        if self.sweep_param == "E1":
            return replace(self.params, E=(value, e2))
        return replace(self.params, E=(e1, value))


@dataclass
class SweepRow:
    grid_value: float
    entries: dict = field(default_factory=dict)   # m -> per-transition dict
    error: str | None = None


@dataclass
class RateTable:
    config: SweepConfig
    rows: list


def _sweep_point(config: SweepConfig, value: float,
                 drop_counter_rotating: bool = False) -> SweepRow:
    params = config.params_at(value)
    model = HamiltonianModel(config.basis, params,
                             drop_counter_rotating=drop_counter_rotating)
    try:
        spec = dressed_spectrum(model)
    except LabelingError as err:
        return SweepRow(grid_value=value, error=str(err))
    row = SweepRow(grid_value=value)
    for k in config.k_list:
        m = k + config.q
        lo, hi = (0, k), (0, m)
        try:
            eta = config.pin_eta
            if eta is None:
                eta = resonant_modulation_frequency(spec, k, config.q)
            c = matrix_element_C(spec, model, lo, hi, eta)
            a = {pair: matrix_element_A(spec, model, lo, hi, pair)
                 for pair in config.basis.pairs()}
            theta = transition_rate_theta(params, c, a)
            row.entries[m] = {
                "C": c, "A": a, "theta": theta,
                "fidelity": spec.fidelity[hi],
                "eta": eta,
                "degenerate": bool(spec.degenerate_flags[lo]
                                   or spec.degenerate_flags[hi]),
            }
        except LabelingError as err:
            row.entries[m] = {"error": str(err)}
    return row


def sweep(config: SweepConfig, *, max_workers: int | None = None,
          drop_counter_rotating: bool = False) -> RateTable:
    """Run the sweep; grid points are independent, ordering is by grid index.

    Per-point labeling failures become flagged rows instead of aborting the
    sweep.  CASIMIR_THREADS caps the worker pool.
    """
    if max_workers is None:
        env = os.environ.get("CASIMIR_THREADS")
        max_workers = int(env) if env else min(8, os.cpu_count() or 1)
    values = config.grid()
    if max_workers <= 1:
        rows = [_sweep_point(config, v, drop_counter_rotating) for v in values]
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(
                lambda v: _sweep_point(config, v, drop_counter_rotating),
                values))
    return RateTable(config=config, rows=rows)


def rate_table_header(config: SweepConfig) -> list[str]:
    cols = ["grid_value"]
    for k in config.k_list:
        m = k + config.q
        cols += [f"C{m}_re", f"C{m}_im", f"C{m}_abs"]
        for pair in config.basis.pairs():
            tag = f"A{m}_{pair[0]}{pair[1]}"
            cols += [f"{tag}_re", f"{tag}_im", f"{tag}_abs"]
        cols += [f"theta{m}_re", f"theta{m}_im", f"theta{m}_abs",
                 f"fidelity{m}", f"eta{m}", f"degenerate_flag{m}"]
    cols.append("row_error")
    return cols


def write_rate_table_csv(table: RateTable, path: str):
    """Serialize a RateTable; complex values as re/im pairs plus magnitude."""
    config = table.config
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(rate_table_header(config))
        for row in table.rows:
            rec = [f"{row.grid_value:.12g}"]
            for k in config.k_list:
                m = k + config.q
                e = row.entries.get(m)
                if e is None or "error" in e:
                    n_pair = len(config.basis.pairs())
                    rec += ["nan"] * (3 + 3 * n_pair + 5)
                    continue
                c = e["C"]
                rec += [f"{c.real:.12g}", f"{c.imag:.12g}", f"{abs(c):.12g}"]
                for pair in config.basis.pairs():
                    a = e["A"][pair]
                    rec += [f"{a.real:.12g}", f"{a.imag:.12g}", f"{abs(a):.12g}"]
                th = e["theta"]
                rec += [f"{th.real:.12g}", f"{th.imag:.12g}", f"{abs(th):.12g}",
                        f"{e['fidelity']:.12g}", f"{e['eta']:.12g}",
                        "1" if e["degenerate"] else "0"]
            point_err = row.error or ""
            for k in config.k_list:
                e = row.entries.get(k + config.q)
                if e is not None and "error" in e:
                    point_err = point_err or e["error"]
            rec.append(point_err)
            writer.writerow(rec)
