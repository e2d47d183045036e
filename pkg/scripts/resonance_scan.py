#!/usr/bin/env python3
"""Scan the modulation frequency around a working point and report photon
growth.

The multi-photon resonances are only a few 1e-5 nu wide, so the effective
modulation frequency must be placed with more precision than the dressed
level spacing of the static Hamiltonian suggests (the drive itself shifts
the levels).  This scan is how the preset frequencies were located.

Usage:
    python3 scripts/resonance_scan.py --preset fig2 \
        --center 3.9819 --span 2e-4 --points 21 --t-final 4e4
"""

import argparse
import sys
from dataclasses import replace

import numpy as np

from dcesim import (HamiltonianModel, bare_state, dressed_spectrum,
                    evolve_schrodinger, resonant_modulation_frequency)
from dcesim.presets import basis_for, get_preset


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--preset", default="fig2",
                    choices=["fig2", "fig3", "fig5a", "fig5b"])
    ap.add_argument("--center", type=float, default=None,
                    help="scan center (default: the preset frequency)")
    ap.add_argument("--span", type=float, default=2e-4,
                    help="full scan width")
    ap.add_argument("--points", type=int, default=21)
    ap.add_argument("--t-final", type=float, default=4e4,
                    help="horizon per scan point (shorter than the preset "
                    "run; enough to rank resonance quality)")
    ap.add_argument("--samples", type=int, default=400)
    args = ap.parse_args()

    preset = get_preset(args.preset)
    basis = basis_for(preset)
    center = args.center if args.center is not None else preset.params.eta

    q = 5 if basis.atom.n_levels == 3 else 4
    static = dressed_spectrum(
        HamiltonianModel(basis, replace(preset.params, eps=0.0, eta=0.0)))
    eta_static = resonant_modulation_frequency(static, 0, q)
    print(f"# static {q}-photon spacing: {eta_static:.6f}")
    print("# eta  max_mean_n  final_mean_n")

    for eta in np.linspace(center - args.span / 2, center + args.span / 2,
                           args.points):
        model = HamiltonianModel(basis, replace(preset.params, eta=eta))
        traj = evolve_schrodinger(model, bare_state(basis), args.t_final,
                                  samples=args.samples)
        print(f"{eta:.6f}  {traj.mean_n.max():9.4f}  {traj.mean_n[-1]:9.4f}",
              flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
