"""Time evolution: Schrödinger, zero-temperature Lindblad, reduced ladder model.

Two propagation strategies are used, selected automatically:

* direct -- adaptive explicit Runge-Kutta (DOP853, rtol 1e-9 / 1e-8) on the
  flattened state / density matrix.  Fine for short horizons, and the only
  mode that supports backward integration.
* floquet -- the Hamiltonian is periodic with the modulation period
  T = 2 pi / eta, so the propagator over one period is computed once (by the
  same adaptive RK on the matrix ODE, then projected back onto the unitary
  group) and long evolutions reduce to repeated matrix-vector products.
  Sample times are snapped to an intra-period grid of K points.

The multi-photon generation timescale is 1/|Theta| ~ 1e4..1e6 cavity
periods, which makes the direct mode hopeless there; the floquet mode is
exact up to the one-period integration tolerance.

For the Lindblad equation the dissipation rates are several orders below
every Hamiltonian scale, so the one-period superoperator is assembled as
(unitary part) x exp(Magnus average of the unitarily-rotated dissipator),
subdividing the period to keep the commutator remainder negligible.  Trace
preservation is restored exactly by a rank-one projection of the
propagator; hermiticity by projection of the state.  Both drifts are
measured before projection and reported in the trajectory metadata.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import solve_ivp
from scipy.linalg import polar

from .hilbert import BasisSpec
from .model import HamiltonianModel


class TruncationError(RuntimeError):
    """Photon population reached the Fock cutoff beyond tolerance."""


class PositivityError(RuntimeError):
    """Density matrix developed a negative eigenvalue beyond tolerance."""


@dataclass(frozen=True)
class DissipationParams:
    """Zero-temperature rates: cavity relaxation kappa, atomic relaxation
    gamma and pure dephasing gamma_phi (the latter two act on levels {0,1}
    only, also for the qutrit)."""

    kappa: float = 0.0
    gamma: float = 0.0
    gamma_phi: float = 0.0

    def __post_init__(self):
        if min(self.kappa, self.gamma, self.gamma_phi) < 0:
            raise ValueError("dissipation rates must be non-negative")

    @property
    def is_zero(self) -> bool:
        return self.kappa == 0 and self.gamma == 0 and self.gamma_phi == 0


# -- observables -----------------------------------------------------------

def fock_probs(state: np.ndarray, basis: BasisSpec) -> np.ndarray:
    """Photon-number distribution p(0..n_max) of a state vector or rho."""
    nl, nf = basis.atom.n_levels, basis.n_fock
    if state.ndim == 1:
        w = np.abs(state.reshape(nl, nf)) ** 2
    else:
        w = np.real(np.diag(state)).reshape(nl, nf)
    return w.sum(axis=0)


def atom_populations(state: np.ndarray, basis: BasisSpec) -> np.ndarray:
    """Populations of the atomic levels."""
    nl, nf = basis.atom.n_levels, basis.n_fock
    if state.ndim == 1:
        w = np.abs(state.reshape(nl, nf)) ** 2
    else:
        w = np.real(np.diag(state)).reshape(nl, nf)
    return w.sum(axis=1)


def mean_n(state: np.ndarray, basis: BasisSpec) -> float:
    p = fock_probs(state, basis)
    return float(np.arange(basis.n_fock) @ p)


def mandel_q(state: np.ndarray, basis: BasisSpec) -> float:
    """(<(dn)^2> - <n>)/<n>; NaN (signaled undefined) when <n> < 1e-12."""
    p = fock_probs(state, basis)
    ns = np.arange(basis.n_fock)
    n1 = float(ns @ p)
    if n1 < 1e-12:
        return math.nan
    n2 = float((ns**2) @ p)
    return (n2 - n1**2 - n1) / n1


@dataclass
class Trajectory:
    """Sampled time series of derived observables (and optionally states)."""

    basis: BasisSpec
    times: np.ndarray
    mean_n: np.ndarray
    mandel_q: np.ndarray
    atom_pops: np.ndarray        # (n_samples, n_levels)
    fock_probs: np.ndarray       # (n_samples, n_fock)
    states: np.ndarray | None = None
    rhos: np.ndarray | None = None
    meta: dict = field(default_factory=dict)


def bare_state(basis: BasisSpec, atom_level: int = 0,
               photons: int = 0) -> np.ndarray:
    psi = np.zeros(basis.dim, dtype=complex)
    psi[basis.index(atom_level, photons)] = 1.0
    return psi


def _embed(psi: np.ndarray, old: BasisSpec, new: BasisSpec) -> np.ndarray:
    """Zero-pad a state vector onto a larger photon cutoff."""
    nl = old.atom.n_levels
    out = np.zeros((nl, new.n_fock), dtype=complex)
    out[:, :old.n_fock] = psi.reshape(nl, old.n_fock)
    return out.ravel()


def _embed_rho(rho: np.ndarray, old: BasisSpec, new: BasisSpec) -> np.ndarray:
    nl = old.atom.n_levels
    out = np.zeros((nl, new.n_fock, nl, new.n_fock), dtype=complex)
    out[:, :old.n_fock, :, :old.n_fock] = rho.reshape(
        nl, old.n_fock, nl, old.n_fock)
    return out.reshape(new.dim, new.dim)


# -- unitary propagation ---------------------------------------------------

def integrate_state(model: HamiltonianModel, psi0: np.ndarray,
                    t0: float, t1: float, *, t_eval=None,
                    rtol: float = 1e-9, atol: float = 1e-12,
                    max_step: float | None = None) -> np.ndarray:
    """Direct integration of i psi' = H(t) psi from t0 to t1 (either
    direction).  Returns the state(s) at t_eval (default: just t1)."""
    buf = np.empty((model.dim, model.dim), dtype=complex)

    def rhs(t, y):
        h = model.hamiltonian_at(t, out=buf)
        return -1j * (h @ y)

    if max_step is None:
        max_step = _default_max_step(model)
    sol = solve_ivp(rhs, (t0, t1), psi0.astype(complex), method="DOP853",
                    t_eval=t_eval, rtol=rtol, atol=atol, max_step=max_step)
    if not sol.success:
        raise RuntimeError(f"state integration failed: {sol.message}")
    return sol.y[:, -1] if t_eval is None else sol.y.T


def _default_max_step(model: HamiltonianModel) -> float:
    # resolve the drive: at most 1/50th of the modulation period
    if model.is_modulated and model.eta > 0:
        return 2.0 * math.pi / (50.0 * model.eta)
    return np.inf


def _period_propagators(model: HamiltonianModel, t_nodes: np.ndarray,
                        rtol: float = 1e-12, atol: float = 1e-13
                        ) -> np.ndarray:
    """U(0 -> t) for each node in [0, T], via the matrix Schrödinger ODE."""
    d = model.dim
    buf = np.empty((d, d), dtype=complex)

    def rhs(t, y):
        h = model.hamiltonian_at(t, out=buf)
        return (-1j * (h @ y.reshape(d, d))).ravel()

    eye = np.eye(d, dtype=complex).ravel()
    t_end = float(t_nodes[-1])
    sol = solve_ivp(rhs, (0.0, t_end), eye, method="DOP853",
                    t_eval=t_nodes, rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(f"propagator integration failed: {sol.message}")
    return sol.y.T.reshape(len(t_nodes), d, d)


def _unitarize(u: np.ndarray) -> np.ndarray:
    w, _ = polar(u)
    return w


def _snap_times(times, dt):
    idx = np.unique(np.round(np.asarray(times, dtype=float) / dt).astype(np.int64))
    return idx, idx * dt


def _sample_grid(t_final: float, samples: int) -> np.ndarray:
    if t_final <= 0:
        raise ValueError("t_final must be positive")
    if samples < 2:
        raise ValueError("need at least 2 samples")
    return np.linspace(0.0, t_final, samples)


def _observe(basis, state, rec):
    rec["mean_n"].append(mean_n(state, basis))
    rec["mandel_q"].append(mandel_q(state, basis))
    rec["atom_pops"].append(atom_populations(state, basis))
    rec["fock_probs"].append(fock_probs(state, basis))


def _evolve_schrodinger_once(model, psi0, t_final, *, samples, rtol, atol,
                             method, store_states, subperiod_points):
    basis = model.basis
    grid = _sample_grid(t_final, samples)
    T = model.period

    if method == "auto":
        if not model.is_modulated:
            method = "static"
        elif t_final > 50.0 * T:
            method = "floquet"
        else:
            method = "direct"

    rec = {"mean_n": [], "mandel_q": [], "atom_pops": [], "fock_probs": []}
    states = [] if store_states else None

    if method == "static":
        h0 = model.bare_hamiltonian()
        lam, v = np.linalg.eigh(h0)
        coeff = v.conj().T @ psi0
        times = grid
        for t in times:
            psi = v @ (np.exp(-1j * lam * t) * coeff)
            _observe(basis, psi, rec)
            if states is not None:
                states.append(psi)
        psis_norm = 0.0
        trunc_pop = 0.0  # static evolution cannot move population outward
        for t in (times[0], times[-1]):
            pass
    elif method == "direct":
        ys = integrate_state(model, psi0, 0.0, t_final, t_eval=grid,
                             rtol=rtol, atol=atol)
        times = grid
        for psi in ys:
            _observe(basis, psi, rec)
            if states is not None:
                states.append(psi)
        norms = np.linalg.norm(ys, axis=1)
        psis_norm = float(np.max(np.abs(norms - 1.0)))
        trunc_pop = float(max(
            fock_probs(psi, basis)[-1] for psi in ys))
    elif method == "floquet":
        K = subperiod_points
        nodes = np.arange(K + 1) * (T / K)
        partials = _period_propagators(model, nodes)
        partials = np.stack([_unitarize(u) for u in partials])
        u_period = partials[-1]
        idx, times = _snap_times(grid, T / K)
        phi = psi0.astype(complex)
        cur_period = 0
        norms = []
        trunc_pop = 0.0
        for s_idx, t in zip(idx, times):
            m, j = divmod(int(s_idx), K)
            while cur_period < m:
                phi = u_period @ phi
                cur_period += 1
            psi = partials[j] @ phi if j else phi
            _observe(basis, psi, rec)
            if states is not None:
                states.append(psi)
            norms.append(np.linalg.norm(psi))
            trunc_pop = max(trunc_pop, rec["fock_probs"][-1][-1])
        psis_norm = float(np.max(np.abs(np.array(norms) - 1.0)))
    else:
        raise ValueError(f"unknown method {method!r}")

    if method == "static":
        norms = [np.linalg.norm(psi0)]
        psis_norm = float(abs(norms[0] - 1.0))
        trunc_pop = float(max(fp[-1] for fp in rec["fock_probs"]))

    traj = Trajectory(
        basis=basis, times=np.asarray(times),
        mean_n=np.asarray(rec["mean_n"]),
        mandel_q=np.asarray(rec["mandel_q"]),
        atom_pops=np.asarray(rec["atom_pops"]),
        fock_probs=np.asarray(rec["fock_probs"]),
        states=np.asarray(states) if states is not None else None,
        meta={
            "kind": "schrodinger", "method": method,
            "t_final": float(t_final), "samples": int(samples),
            "rtol": rtol, "atol": atol, "n_max": basis.n_max,
            "norm_drift": psis_norm, "max_cutoff_population": trunc_pop,
            "params": _params_dict(model),
        })
    return traj, trunc_pop


def _params_dict(model: HamiltonianModel) -> dict:
    p = model.params
    return {
        "atom": model.basis.atom.value, "nu": p.nu, "eps": p.eps,
        "eta": p.eta, "E": list(p.E), "g": list(p.g),
        "eps_tilde": list(p.eps_tilde), "phi": list(p.phi),
        "chi_mode": model.chi_mode.value,
    }


def evolve_schrodinger(model: HamiltonianModel, psi0: np.ndarray,
                       t_final: float, *, samples: int = 2000,
                       rtol: float = 1e-9, atol: float = 1e-12,
                       method: str = "auto", store_states: bool = False,
                       subperiod_points: int = 64,
                       escalate: bool = True) -> Trajectory:
    """Evolve |psi(t)> under H(t) and sample observables.

    If the population at the Fock cutoff exceeds the basis truncation
    tolerance at any sample, the run is repeated with n_max + 10 (twice at
    most) before giving up.
    """
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-10:
        raise ValueError("psi0 must be normalized")
    tries = 3 if escalate else 1
    cur_model, cur_psi = model, psi0
    for attempt in range(tries):
        traj, trunc_pop = _evolve_schrodinger_once(
            cur_model, cur_psi, t_final, samples=samples, rtol=rtol,
            atol=atol, method=method, store_states=store_states,
            subperiod_points=subperiod_points)
        if trunc_pop <= cur_model.basis.trunc_tol:
            return traj
        if attempt == tries - 1:
            break
        new_model = cur_model.with_n_max(cur_model.basis.n_max + 10)
        cur_psi = _embed(cur_psi, cur_model.basis, new_model.basis)
        cur_model = new_model
    raise TruncationError(
        f"population {trunc_pop:.3g} at the n_max={cur_model.basis.n_max} "
        f"cutoff exceeds tolerance {cur_model.basis.trunc_tol:.3g}")


def evolve_converged(model: HamiltonianModel, psi0_label: tuple[int, int],
                     t_final: float, *, rel_tol: float = 1e-4,
                     max_rounds: int = 5, **kwargs) -> Trajectory:
    """Rerun with n_max + 10 until the final-time <n> changes by less than
    rel_tol (relative); the cutoffs tried are recorded in the metadata."""
    cutoffs = []
    prev = None
    cur = model
    for _ in range(max_rounds):
        psi0 = bare_state(cur.basis, *psi0_label)
        traj = evolve_schrodinger(cur, psi0, t_final, **kwargs)
        n_used = traj.meta["n_max"]
        cutoffs.append(n_used)
        if prev is not None:
            ref = max(abs(prev.mean_n[-1]), 1e-30)
            if abs(traj.mean_n[-1] - prev.mean_n[-1]) / ref < rel_tol:
                traj.meta["convergence_cutoffs"] = cutoffs
                traj.meta["converged"] = True
                return traj
        prev = traj
        cur = cur.with_n_max(n_used + 10)
    prev.meta["convergence_cutoffs"] = cutoffs
    prev.meta["converged"] = False
    warnings.warn("cutoff escalation did not converge; returning last run")
    return prev


# -- Lindblad propagation --------------------------------------------------

def _jump_operators(model: HamiltonianModel, dissipation: DissipationParams):
    """(rate, operator) pairs of the zero-temperature master equation.
    Atomic channels act on the {0,1} pair, also for the qutrit."""
    ops = model.ops
    out = []
    if dissipation.kappa > 0:
        out.append((dissipation.kappa, ops.a))
    if dissipation.gamma > 0:
        out.append((dissipation.gamma, ops.sigma[0][1]))
    if dissipation.gamma_phi > 0:
        sz = ops.sigma[1][1] - ops.sigma[0][0]
        out.append((dissipation.gamma_phi / 2.0, sz))
    return out


def _lindblad_rhs_factory(model, dissipation):
    d = model.dim
    buf = np.empty((d, d), dtype=complex)
    jumps = _jump_operators(model, dissipation)
    pre = [(rate, op, op.conj().T, op.conj().T @ op) for rate, op in jumps]

    def rhs(t, y):
        rho = y.reshape(d, d)
        h = model.hamiltonian_at(t, out=buf)
        drho = -1j * (h @ rho - rho @ h)
        for rate, op, opd, opdo in pre:
            drho += rate * (op @ rho @ opd
                            - 0.5 * (opdo @ rho + rho @ opdo))
        return drho.ravel()

    return rhs


def _superop_unitary(u: np.ndarray) -> np.ndarray:
    """vec(U rho U†) = kron(U, conj(U)) vec(rho)  (row-major vec)."""
    return np.kron(u, u.conj())


def _averaged_dissipator(us, weights, jumps) -> np.ndarray:
    """Quadrature average of the dissipator conjugated into the frames of
    the given unitaries (rho -> U† D[U rho U†] U), as one superoperator.

    The jump-sandwich part is accumulated with a batched outer product;
    the anticommutator part only needs the averaged O†O, so the identity
    krons are assembled once.
    """
    d = us[0].shape[0]
    eye = np.eye(d, dtype=complex)
    out = np.zeros((d * d, d * d), dtype=complex)
    odo_avg = np.zeros((d, d), dtype=complex)
    for rate, op in jumps:
        o = np.einsum("sji,jk,skl->sil", np.stack(us).conj(), op,
                      np.stack(us))
        out += rate * np.einsum("s,sij,skl->ikjl", weights, o,
                                o.conj()).reshape(d * d, d * d)
        odo_avg += rate * np.einsum(
            "s,sji,sjk->ik", weights, o.conj(), o)
    out -= 0.5 * (np.kron(odo_avg, eye) + np.kron(eye, odo_avg.T))
    return out


def _lindblad_period_superop(model, dissipation, *, subintervals=4,
                             quad_points=6, rtol=1e-12, atol=1e-13):
    """One-period propagator of the master equation.

    The unitary part is exact (one-period propagator of H(t)); the weak
    dissipator is averaged in the interaction picture of that propagator
    with a first-order Magnus term per subinterval, which keeps the
    commutator remainder at the (rate * T / J)^2 level.
    """
    T = model.period
    J = subintervals
    jumps = _jump_operators(model, dissipation)
    x, w = leggauss(quad_points)
    bounds = np.arange(J + 1) * (T / J)
    nodes = [0.0]
    quad_nodes = []
    for j in range(J):
        a, b = bounds[j], bounds[j + 1]
        s = 0.5 * (b - a) * x + 0.5 * (a + b)
        quad_nodes.append((s, 0.5 * (b - a) * w))
        nodes.extend(s.tolist())
        nodes.append(b)
    nodes = np.array(sorted(set(nodes)))
    us = _period_propagators(model, nodes, rtol=rtol, atol=atol)
    u_at = {round(float(t), 15): u for t, u in zip(nodes, us)}

    d = model.dim
    n2 = d * d
    s_total = np.eye(n2, dtype=complex)
    for j in range(J):
        a, b = bounds[j], bounds[j + 1]
        ua = u_at[round(float(a), 15)]
        ub = u_at[round(float(b), 15)]
        s_nodes, s_weights = quad_nodes[j]
        # frames relative to the start of the subinterval
        us = [u_at[round(float(s), 15)] @ ua.conj().T for s in s_nodes]
        omega = _averaged_dissipator(us, s_weights, jumps)
        # ||omega|| ~ rate * T / J << 1: second-order Taylor is exact to
        # well below the trace-projection level
        exp_omega = np.eye(n2, dtype=complex) + omega + 0.5 * (omega @ omega)
        w_j = ub @ ua.conj().T
        s_sub = _superop_unitary(w_j) @ exp_omega
        s_total = s_sub @ s_total
    # restore exact trace preservation (rank-one projection)
    tr = np.eye(d, dtype=complex).ravel()
    resid = tr @ s_total - tr
    s_total -= np.outer(tr / d, resid)
    return s_total


def evolve_lindblad(model: HamiltonianModel, rho0: np.ndarray,
                    dissipation: DissipationParams, t_final: float, *,
                    samples: int = 2000, rtol: float = 1e-8,
                    atol: float = 1e-10, method: str = "auto",
                    subintervals: int = 4, store_states: bool = False,
                    escalate: bool = True) -> Trajectory:
    """Evolve rho under the zero-temperature master equation."""
    _check_density_matrix(rho0)
    tries = 3 if escalate else 1
    cur_model, cur_rho = model, rho0
    for attempt in range(tries):
        traj, trunc_pop = _evolve_lindblad_once(
            cur_model, cur_rho, dissipation, t_final, samples=samples,
            rtol=rtol, atol=atol, method=method, subintervals=subintervals,
            store_states=store_states)
        if trunc_pop <= cur_model.basis.trunc_tol:
            return traj
        if attempt == tries - 1:
            break
        new_model = cur_model.with_n_max(cur_model.basis.n_max + 10)
        cur_rho = _embed_rho(cur_rho, cur_model.basis, new_model.basis)
        cur_model = new_model
    raise TruncationError(
        f"population {trunc_pop:.3g} at the n_max={cur_model.basis.n_max} "
        f"cutoff exceeds tolerance {cur_model.basis.trunc_tol:.3g}")


def _check_density_matrix(rho, tol=1e-8):
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("rho0 is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ValueError("rho0 does not have unit trace")


def _evolve_lindblad_once(model, rho0, dissipation, t_final, *, samples,
                          rtol, atol, method, subintervals, store_states):
    basis = model.basis
    d = model.dim
    grid = _sample_grid(t_final, samples)
    T = model.period

    if method == "auto":
        if model.is_modulated and t_final > 50.0 * T and d * d <= 4096:
            method = "floquet"
        else:
            method = "direct"

    rec = {"mean_n": [], "mandel_q": [], "atom_pops": [], "fock_probs": []}
    rhos = [] if store_states else None
    herm_drift = 0.0
    trace_drift = 0.0
    min_eig = np.inf
    trunc_pop = 0.0

    def take(t, rho):
        nonlocal herm_drift, trace_drift, min_eig, trunc_pop
        herm_drift = max(herm_drift, float(np.max(np.abs(rho - rho.conj().T))))
        trace_drift = max(trace_drift, abs(float(np.trace(rho).real) - 1.0))
        rho_h = 0.5 * (rho + rho.conj().T)
        min_eig = min(min_eig, float(np.linalg.eigvalsh(rho_h)[0]))
        _observe(basis, rho_h, rec)
        trunc_pop = max(trunc_pop, rec["fock_probs"][-1][-1])
        if rhos is not None:
            rhos.append(rho_h)

    if method == "direct":
        rhs = _lindblad_rhs_factory(model, dissipation)
        sol = solve_ivp(rhs, (0.0, t_final), rho0.astype(complex).ravel(),
                        method="DOP853", t_eval=grid, rtol=rtol, atol=atol,
                        max_step=_default_max_step(model))
        if not sol.success:
            raise RuntimeError(f"Lindblad integration failed: {sol.message}")
        times = grid
        for col in sol.y.T:
            take(None, col.reshape(d, d))
    elif method == "floquet":
        s_period = _lindblad_period_superop(
            model, dissipation, subintervals=subintervals)
        spacing = t_final / (len(grid) - 1)
        stride = max(1, int(round(spacing / T)))
        n_steps = int(math.floor(t_final / (stride * T)))
        times = np.arange(n_steps + 1) * (stride * T)
        s_stride = np.linalg.matrix_power(s_period, stride)
        vec = rho0.astype(complex).ravel()
        take(0.0, vec.reshape(d, d))
        for _ in range(n_steps):
            vec = s_stride @ vec
            rho = vec.reshape(d, d)
            take(None, rho)
            # keep the propagated state exactly Hermitian (projection);
            # the pre-projection drift was recorded above
            rho_h = 0.5 * (rho + rho.conj().T)
            vec = rho_h.ravel()
    else:
        raise ValueError(f"unknown method {method!r}")

    if min_eig < -1e-6:
        raise PositivityError(
            f"min eigenvalue {min_eig:.3g} below the -1e-6 positivity floor")

    traj = Trajectory(
        basis=basis, times=np.asarray(times),
        mean_n=np.asarray(rec["mean_n"]),
        mandel_q=np.asarray(rec["mandel_q"]),
        atom_pops=np.asarray(rec["atom_pops"]),
        fock_probs=np.asarray(rec["fock_probs"]),
        rhos=np.asarray(rhos) if rhos is not None else None,
        meta={
            "kind": "lindblad", "method": method,
            "t_final": float(t_final), "samples": int(samples),
            "rtol": rtol, "atol": atol, "n_max": basis.n_max,
            "trace_drift": trace_drift, "hermiticity_drift": herm_drift,
            "min_eigenvalue": min_eig,
            "max_cutoff_population": trunc_pop,
            "dissipation": {"kappa": dissipation.kappa,
                            "gamma": dissipation.gamma,
                            "gamma_phi": dissipation.gamma_phi},
            "params": _params_dict(model),
        })
    return traj, trunc_pop


# -- serialization ---------------------------------------------------------

def trajectory_header(basis: BasisSpec) -> list[str]:
    cols = ["t", "mean_n", "mandel_q"]
    cols += [f"P_a_{j}" for j in range(basis.atom.n_levels)]
    cols += [f"p_{n}" for n in range(basis.n_fock)]
    return cols


def write_trajectory_csv(traj: Trajectory, path: str):
    """One row per sample; undefined Mandel Q serialized as nan.

    A metadata sidecar <path basename>.meta.json carries the resolved
    parameters and the integration quality metrics.
    """
    basis = traj.basis
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(trajectory_header(basis))
        for i, t in enumerate(traj.times):
            rec = [f"{t:.12g}", f"{traj.mean_n[i]:.12g}",
                   f"{traj.mandel_q[i]:.12g}"]
            rec += [f"{x:.12g}" for x in traj.atom_pops[i]]
            rec += [f"{x:.12g}" for x in traj.fock_probs[i]]
            writer.writerow(rec)
    meta = dict(traj.meta)
    meta["columns"] = trajectory_header(basis)
    meta["rows"] = int(len(traj.times))
    root, _ = path.rsplit(".", 1) if "." in path else (path, "")
    with open(root + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=2, default=float)
        fh.write("\n")


# -- reduced ladder (slow-amplitude) model ---------------------------------

@dataclass(frozen=True)
class EffectiveModelSpec:
    """Ladder of dressed levels coupled by nearest-neighbor rates.

    lambdas are the dressed eigenfrequencies of the ladder members and
    thetas[i] the transition rate between members i and i+1; eta is the
    modulation frequency driving the ladder.
    """

    lambdas: tuple[float, ...]
    thetas: tuple[complex, ...]
    eta: float

    def __post_init__(self):
        if len(self.lambdas) < 2:
            raise ValueError("ladder needs at least 2 levels")
        if len(self.thetas) != len(self.lambdas) - 1:
            raise ValueError("need one rate per adjacent level pair")


def evolve_effective(spec: EffectiveModelSpec, b0: np.ndarray,
                     t_final: float, *, samples: int = 1000,
                     rtol: float = 1e-10, atol: float = 1e-12):
    """Integrate the slow amplitudes b_m(t) of the ladder model.

    db_m/dt = sum_{n<m} conj(Theta_{n;m}) e^{+i(Delta_nm - eta) t} b_n
            - sum_{n>m} Theta_{m;n} e^{-i(Delta_nm - eta) t} b_n
    restricted to nearest neighbors.  Returns (times, b) with b of shape
    (samples, n_levels).
    """
    lam = np.asarray(spec.lambdas, dtype=float)
    th = np.asarray(spec.thetas, dtype=complex)
    n = len(lam)
    delta = np.abs(np.diff(lam)) - spec.eta   # Delta_{m,m+1} - eta

    def rhs(t, b):
        db = np.zeros(n, dtype=complex)
        phase = np.exp(1j * delta * t)
        db[1:] += th.conj() * phase * b[:-1]
        db[:-1] -= th * phase.conj() * b[1:]
        return db

    grid = _sample_grid(t_final, samples)
    sol = solve_ivp(rhs, (0.0, t_final), np.asarray(b0, dtype=complex),
                    method="DOP853", t_eval=grid, rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(f"effective-model integration failed: {sol.message}")
    return grid, sol.y.T
