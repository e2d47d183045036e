"""Command line front end: JSON configs, presets, CSV outputs.

Commands:

    spectrum         dressed levels and labels of H0
    sweep            rate table over an atomic-energy grid
    perturbative     closed-form overlay on the same grid (qubit)
    evolve           unitary trajectory
    evolve-lindblad  open-system trajectory
    preset           run a canned published working point end to end

Configuration comes from a JSON file (--config), a preset (--preset) or
flags; `--set key=value` overrides individual dotted keys, and --nmax /
--tol are shorthands for the basis fields.  Unknown keys are rejected.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import perturbation
from .dynamics import (DissipationParams, bare_state, evolve_lindblad,
                       evolve_schrodinger, write_trajectory_csv)
from .hilbert import AtomKind, BasisSpec
from .model import HamiltonianModel, SystemParams
from .presets import get_preset, basis_for, DISSIPATION, EvolvePreset
from .spectrum import (SweepConfig, dressed_spectrum, sweep,
                       write_rate_table_csv)

SCHEMA_VERSION = 1

COMMANDS = ("spectrum", "sweep", "perturbative", "evolve",
            "evolve-lindblad", "preset")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    param: str = "E1"
    start: float = 2.0
    stop: float = 3.6
    points: int = 181
    k_list: tuple = (0,)
    q: int = 4
    pin_eta: float | None = None
    extra_points: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "k_list", tuple(int(k) for k in self.k_list))
        object.__setattr__(self, "extra_points",
                           tuple(float(x) for x in self.extra_points))
        if self.points < 2:
            raise ConfigError("grid.points must be at least 2")


@dataclass(frozen=True)
class EvolutionSpec:
    t_final: float = 1e4
    samples: int = 2000
    rtol: float = 1e-9
    atol: float = 1e-12
    method: str = "auto"
    initial_level: int = 0
    initial_photons: int = 0

    def __post_init__(self):
        if self.t_final <= 0:
            raise ConfigError("evolution.t_final must be positive")
        if self.method not in ("auto", "static", "direct", "floquet"):
            raise ConfigError(f"unknown evolution.method {self.method!r}")


@dataclass(frozen=True)
class RunConfig:
    command: str
    atom: str = "qubit"
    n_max: int = 40
    trunc_tol: float = 1e-8
    params: SystemParams = field(default_factory=SystemParams)
    grid: GridSpec | None = None
    evolution: EvolutionSpec | None = None
    dissipation: DissipationParams | None = None
    output: str = "out"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.atom not in ("qubit", "cyclic_qutrit"):
            raise ConfigError(f"unknown atom {self.atom!r}")

    def basis(self) -> BasisSpec:
        return BasisSpec(AtomKind(self.atom), self.n_max, self.trunc_tol)

    def model(self) -> HamiltonianModel:
        return HamiltonianModel(self.basis(), self.params)


# -- (de)serialization -----------------------------------------------------

def _params_to_dict(p: SystemParams) -> dict:
    return {
        "nu": p.nu, "eps": p.eps, "eta": p.eta,
        "E1": p.E[0], "E2": p.E[1],
        "g1": p.g[0], "g2": p.g[1], "g3": p.g[2],
        "eps_tilde1": p.eps_tilde[0], "eps_tilde2": p.eps_tilde[1],
        "eps_tilde3": p.eps_tilde[2],
        "phi1": p.phi[0], "phi2": p.phi[1], "phi3": p.phi[2],
    }


def _params_from_dict(d: dict) -> SystemParams:
    allowed = set(_params_to_dict(SystemParams()))
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown params keys: {sorted(unknown)}")
    base = _params_to_dict(SystemParams())
    base.update(d)
    return SystemParams(
        nu=base["nu"], eps=base["eps"], eta=base["eta"],
        E=(base["E1"], base["E2"]),
        g=(base["g1"], base["g2"], base["g3"]),
        eps_tilde=(base["eps_tilde1"], base["eps_tilde2"], base["eps_tilde3"]),
        phi=(base["phi1"], base["phi2"], base["phi3"]),
    )


def serialize_config(cfg: RunConfig) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "command": cfg.command,
        "atom": cfg.atom,
        "n_max": cfg.n_max,
        "trunc_tol": cfg.trunc_tol,
        "params": _params_to_dict(cfg.params),
        "output": cfg.output,
    }
    if cfg.grid is not None:
        g = asdict(cfg.grid)
        g["k_list"] = list(cfg.grid.k_list)
        g["extra_points"] = list(cfg.grid.extra_points)
        out["grid"] = g
    if cfg.evolution is not None:
        out["evolution"] = asdict(cfg.evolution)
    if cfg.dissipation is not None:
        out["dissipation"] = asdict(cfg.dissipation)
    return out


def _build_section(cls, d: dict, section: str):
    allowed = {f for f in cls.__dataclass_fields__}
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown {section} keys: {sorted(unknown)}")
    try:
        return cls(**d)
    except TypeError as err:
        raise ConfigError(f"bad {section} section: {err}") from None


def parse_config(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    data = dict(data)
    version = data.pop("schema_version", None)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version!r} "
                          f"(expected {SCHEMA_VERSION})")
    known = {"command", "atom", "n_max", "trunc_tol", "params", "grid",
             "evolution", "dissipation", "output"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "command" not in data:
        raise ConfigError("config must name a command")
    params = _params_from_dict(data.get("params", {}))
    grid = evolution = dissipation = None
    if "grid" in data:
        grid = _build_section(GridSpec, data["grid"], "grid")
    if "evolution" in data:
        evolution = _build_section(EvolutionSpec, data["evolution"],
                                   "evolution")
    if "dissipation" in data:
        dissipation = _build_section(DissipationParams, data["dissipation"],
                                     "dissipation")
    cfg = RunConfig(
        command=data["command"], atom=data.get("atom", "qubit"),
        n_max=int(data.get("n_max", 40)),
        trunc_tol=float(data.get("trunc_tol", 1e-8)),
        params=params, grid=grid, evolution=evolution,
        dissipation=dissipation, output=data.get("output", "out"),
    )
    cfg.params.validate_for(AtomKind(cfg.atom))
    return cfg


def apply_overrides(cfg: RunConfig, overrides: list[str]) -> RunConfig:
    """Apply repeatable --set key=value entries on the serialized form."""
    data = serialize_config(cfg)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set needs key=value, got {item!r}")
        key, raw = item.split("=", 1)
        parts = key.split(".")
        node = data
        for p in parts[:-1]:
            if p not in node:
                node[p] = {}
            node = node[p]
        node[parts[-1]] = json.loads(raw) if _looks_like_json(raw) else raw
    return parse_config(data)


def _looks_like_json(raw: str) -> bool:
    try:
        json.loads(raw)
        return True
    except json.JSONDecodeError:
        return False


# -- command implementations ----------------------------------------------

def _write_spectrum_csv(cfg: RunConfig, path: str):
    model = cfg.model()
    spec = dressed_spectrum(model)
    by_eigenindex = {n: lab for lab, n in spec.labels.items()}
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["eigenindex", "lambda", "label_level",
                         "label_photons", "fidelity", "degenerate_flag"])
        for n, lam in enumerate(spec.lambdas):
            lab = by_eigenindex[n]
            writer.writerow([n, f"{lam:.12g}", lab[0], lab[1],
                             f"{spec.fidelity[lab]:.12g}",
                             "1" if spec.degenerate_flags[lab] else "0"])


def _sweep_config(cfg: RunConfig) -> SweepConfig:
    if cfg.grid is None:
        raise ConfigError("sweep needs a grid section")
    g = cfg.grid
    return SweepConfig(basis=cfg.basis(), params=cfg.params,
                       sweep_param=g.param, start=g.start, stop=g.stop,
                       points=g.points, k_list=g.k_list, q=g.q,
                       pin_eta=g.pin_eta, extra_points=g.extra_points)


def _write_perturbative_csv(cfg: RunConfig, path: str):
    """Closed-form qubit overlay for the k -> k+4 transitions on the grid."""
    if cfg.atom != "qubit":
        raise ConfigError("perturbative overlay covers the qubit case only")
    if cfg.grid is None or cfg.grid.param != "E1":
        raise ConfigError("perturbative overlay sweeps E1")
    g = cfg.grid
    nu = cfg.params.nu
    g1 = cfg.params.g[0]
    eps = cfg.params.eps
    sw = _sweep_config(cfg)
    header = ["grid_value"]
    for k in g.k_list:
        m = k + 4
        header += [f"c{m}_far", f"c{m}_near", f"a{m}_near", f"theta{m}_near",
                   f"degeneracy_offset{m}", f"eta{m}_kerr"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for e1 in sw.grid():
            rec = [f"{e1:.12g}"]
            for k in g.k_list:
                vals = []
                for fn in (
                    lambda: perturbation.c4_far(nu, e1, g1, k),
                    lambda: perturbation.c_near(nu, e1, g1, k),
                    lambda: perturbation.a_near(nu, e1, g1, k),
                    lambda: perturbation.theta_near(nu, e1, g1, eps, k),
                ):
                    try:
                        vals.append(fn())
                    except perturbation.PerturbationSingularity:
                        vals.append(math.nan)
                vals.append(perturbation.degeneracy_offset(nu, e1, g1, k))
                vals.append(perturbation.eta_k_near3nu(nu, g1, k))
                rec += [f"{v:.12g}" for v in vals]
            writer.writerow(rec)


def _run_evolve(cfg: RunConfig, path: str, dissipative: bool):
    if cfg.evolution is None:
        raise ConfigError("evolve needs an evolution section")
    ev = cfg.evolution
    model = cfg.model()
    psi0 = bare_state(model.basis, ev.initial_level, ev.initial_photons)
    if dissipative:
        dis = cfg.dissipation or DISSIPATION
        rho0 = np.outer(psi0, psi0.conj())
        traj = evolve_lindblad(model, rho0, dis, ev.t_final,
                               samples=ev.samples, method=ev.method)
    else:
        traj = evolve_schrodinger(model, psi0, ev.t_final,
                                  samples=ev.samples, rtol=ev.rtol,
                                  atol=ev.atol, method=ev.method)
    traj.meta["config"] = serialize_config(cfg)
    write_trajectory_csv(traj, path)


def run_command(cfg: RunConfig, out_dir) -> list:
    """Execute one command; returns the list of files written."""
    import os
    out_dir = str(out_dir)
    if os.path.exists(out_dir) and not os.path.isdir(out_dir):
        raise ConfigError(f"output path {out_dir!r} is not a directory")
    os.makedirs(out_dir, exist_ok=True)
    written = []

    def target(name):
        p = os.path.join(out_dir, name)
        written.append(p)
        return p

    if cfg.command == "spectrum":
        _write_spectrum_csv(cfg, target("spectrum.csv"))
    elif cfg.command == "sweep":
        table = sweep(_sweep_config(cfg))
        write_rate_table_csv(table, target("sweep.csv"))
    elif cfg.command == "perturbative":
        _write_perturbative_csv(cfg, target("perturbative.csv"))
    elif cfg.command == "evolve":
        _run_evolve(cfg, target("trajectory.csv"), dissipative=False)
        written.append(written[-1].rsplit(".", 1)[0] + ".meta.json")
    elif cfg.command == "evolve-lindblad":
        _run_evolve(cfg, target("trajectory.csv"), dissipative=True)
        written.append(written[-1].rsplit(".", 1)[0] + ".meta.json")
    else:
        raise ConfigError(f"command {cfg.command!r} needs a preset id")
    _write_config_sidecar(cfg, out_dir, written)
    return written


def _write_config_sidecar(cfg: RunConfig, out_dir, written,
                          name: str = "run_config.json"):
    import os
    path = os.path.join(out_dir, name)
    with open(path, "w") as fh:
        json.dump(serialize_config(cfg), fh, indent=2)
        fh.write("\n")
    written.append(path)


# -- preset expansion ------------------------------------------------------

def preset_config(name: str, n_max: int | None = None,
                  trunc_tol: float | None = None) -> RunConfig:
    """Expand a preset id into the RunConfig of its main run."""
    p = get_preset(name)
    atom = p.atom.value
    if isinstance(p, EvolvePreset):
        return RunConfig(
            command="evolve", atom=atom,
            n_max=n_max or p.n_max,
            trunc_tol=trunc_tol or 1e-8,
            params=p.params,
            evolution=EvolutionSpec(t_final=p.t_final, samples=p.samples,
                                    initial_level=p.initial_state[0],
                                    initial_photons=p.initial_state[1]),
            dissipation=p.dissipation,
        )
    return RunConfig(
        command="sweep", atom=atom,
        n_max=n_max or p.n_max,
        trunc_tol=trunc_tol or 1e-8,
        params=p.params,
        grid=GridSpec(param=p.sweep_param, start=p.start, stop=p.stop,
                      points=p.points, k_list=p.k_list, q=p.q,
                      extra_points=p.extra_points),
    )


def run_preset(name: str, out_dir, n_max: int | None = None,
               trunc_tol: float | None = None) -> list:
    """Run every artifact of a preset; file names are preset-prefixed."""
    import os
    p = get_preset(name)
    cfg = preset_config(name, n_max, trunc_tol)
    out_dir = str(out_dir)
    if os.path.exists(out_dir) and not os.path.isdir(out_dir):
        raise ConfigError(f"output path {out_dir!r} is not a directory")
    os.makedirs(out_dir, exist_ok=True)
    written = []

    def target(n):
        path = os.path.join(out_dir, n)
        written.append(path)
        return path

    if isinstance(p, EvolvePreset):
        _run_evolve(cfg, target(f"{name}_trajectory.csv"), dissipative=False)
        written.append(written[-1].rsplit(".", 1)[0] + ".meta.json")
        if p.dissipation is not None:
            dcfg = replace(
                cfg, command="evolve-lindblad",
                n_max=p.lindblad_n_max or p.n_max,
                trunc_tol=max(cfg.trunc_tol, 1e-6),
                dissipation=p.dissipation)
            _run_evolve(dcfg, target(f"{name}_trajectory_dissipative.csv"),
                        dissipative=True)
            written.append(written[-1].rsplit(".", 1)[0] + ".meta.json")
    else:
        table = sweep(_sweep_config(cfg))
        write_rate_table_csv(table, target(f"{name}_sweep.csv"))
        for i, (lo, hi, pts) in enumerate(p.zoom_windows):
            zoom_cfg = replace(cfg, grid=replace(
                cfg.grid, start=lo, stop=hi, points=pts, extra_points=()))
            ztab = sweep(_sweep_config(zoom_cfg))
            write_rate_table_csv(ztab, target(f"{name}_zoom{i}.csv"))
        if p.perturbative_overlay:
            pcfg = replace(cfg, command="perturbative")
            _write_perturbative_csv(pcfg, target(f"{name}_perturbative.csv"))
    _write_config_sidecar(cfg, out_dir, written, f"{name}_config.json")
    return written


# -- entry point -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dcesim",
        description="multi-photon cavity dynamics: spectra, rates, evolution")
    ap.add_argument("command", choices=COMMANDS, nargs="?",
                    help="what to run (omit when --config names it)")
    ap.add_argument("--config", help="JSON config file")
    ap.add_argument("--preset", help="canned working point id")
    ap.add_argument("--out", default="out", help="output directory")
    ap.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                    dest="overrides", help="override a dotted config key")
    ap.add_argument("--nmax", type=int, help="photon-number cutoff")
    ap.add_argument("--tol", type=float, help="basis truncation tolerance")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.preset is not None or args.command == "preset":
            if args.preset is None:
                raise ConfigError("the preset command needs --preset <id>")
            if args.overrides:
                raise ConfigError("--set applies to config runs, not presets")
            files = run_preset(args.preset, args.out, n_max=args.nmax,
                               trunc_tol=args.tol)
        else:
            if args.config is not None:
                with open(args.config) as fh:
                    cfg = parse_config(json.load(fh))
                if args.command is not None and args.command != cfg.command:
                    cfg = replace(cfg, command=args.command)
            elif args.command is not None:
                cfg = RunConfig(command=args.command)
            else:
                raise ConfigError("nothing to do: give a command, --config "
                                  "or --preset")
            if args.nmax is not None:
                cfg = replace(cfg, n_max=args.nmax)
            if args.tol is not None:
                cfg = replace(cfg, trunc_tol=args.tol)
            if args.overrides:
                cfg = apply_overrides(cfg, args.overrides)
            files = run_command(cfg, args.out)
    except (ConfigError, KeyError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    for f in files:
        print(f)
    return 0


if __name__ == "__main__":
    sys.exit(main())
