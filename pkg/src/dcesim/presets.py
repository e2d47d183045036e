"""Canned experiment configurations for the published working points.

Grid and horizon choices are tuned so each preset resolves the feature it
exists to show:

* fig1 refines the E1 grid around the two narrow (width ~ 5e-4 nu)
  hybridization dips so the fidelity minima are actually sampled.
* fig2/fig3/fig5 modulation frequencies carry one more digit than the
  quoted 5-digit working points.  The multi-photon resonances are narrower
  than the quoting precision (a rounding-level shift of 5e-5 nu suppresses
  the photon growth almost completely), so within each quoted value's
  rounding interval the frequency is placed on the measured resonance
  center.  Every value here rounds back to the quoted one.
* fig4 pairs a coarse sweep (the published resolution, on which the peak
  heights are read off) with zoom windows resolving the fidelity dips.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hilbert import AtomKind, BasisSpec
from .model import SystemParams
from .dynamics import DissipationParams

QUBIT_G1 = 0.08
QUTRIT_G = (0.06, 0.08, 0.04)
EPS = 0.03

#: standard dissipation rates relative to g1 (cavity much better than atom)
DISSIPATION = DissipationParams(kappa=1e-4 * QUBIT_G1,
                                gamma=5e-4 * QUBIT_G1,
                                gamma_phi=5e-4 * QUBIT_G1)


def _window(center: float, half_width: float, step: float) -> tuple:
    return tuple(np.arange(center - half_width, center + half_width + step / 2,
                           step))


@dataclass(frozen=True)
class SweepPreset:
    atom: AtomKind
    n_max: int
    params: SystemParams
    sweep_param: str
    start: float
    stop: float
    points: int
    k_list: tuple
    q: int
    extra_points: tuple = ()
    zoom_windows: tuple = ()      # ((start, stop, points), ...) extra CSV
    perturbative_overlay: bool = False


@dataclass(frozen=True)
class EvolvePreset:
    atom: AtomKind
    n_max: int
    params: SystemParams
    t_final: float
    samples: int = 2000
    initial_state: tuple = (0, 0)
    dissipation: DissipationParams | None = None   # adds a second, open run
    lindblad_n_max: int | None = None


_FIG1 = SweepPreset(
    atom=AtomKind.QUBIT, n_max=40,
    params=SystemParams(eps=EPS, E=(3.0, 0.0), g=(QUBIT_G1, 0.0, 0.0)),
    sweep_param="E1", start=2.0, stop=3.6, points=181,
    k_list=(0, 4), q=4,
    # hybridization dips of Phi_4 (E1 ~ 2.9710) and Phi_8 (E1 ~ 2.9322)
    extra_points=_window(2.9710, 0.0015, 1e-4) + _window(2.9322, 0.0015, 1e-4),
    perturbative_overlay=True,
)

_FIG2 = EvolvePreset(
    atom=AtomKind.QUBIT, n_max=40,
    params=SystemParams(eps=EPS, eta=3.98191, E=(2.968, 0.0),
                        g=(QUBIT_G1, 0.0, 0.0)),
    t_final=1.5e5,
    dissipation=DISSIPATION, lindblad_n_max=24,
)

_FIG3 = EvolvePreset(
    atom=AtomKind.QUBIT, n_max=40,
    params=SystemParams(eps=EPS, eta=3.98207, E=(2.99, 0.0),
                        g=(QUBIT_G1, 0.0, 0.0)),
    t_final=3.0e5,
)

def _fig4(e1: float, zooms: tuple) -> SweepPreset:
    return SweepPreset(
        atom=AtomKind.CYCLIC_QUTRIT, n_max=30,
        params=SystemParams(eps=EPS, E=(e1, 3.0), g=QUTRIT_G),
        sweep_param="E2", start=2.6, stop=4.4, points=180,
        k_list=(0, 5), q=5, zoom_windows=zooms,
    )

_FIG5A = EvolvePreset(
    atom=AtomKind.CYCLIC_QUTRIT, n_max=30,
    params=SystemParams(eps=EPS, eta=4.98416, E=(3.105, 4.08), g=QUTRIT_G),
    t_final=5.0e5,
)

_FIG5B = EvolvePreset(
    atom=AtomKind.CYCLIC_QUTRIT, n_max=30,
    params=SystemParams(eps=EPS, eta=4.97324, E=(2.2, 3.05), g=QUTRIT_G),
    t_final=4.0e5,
)

PRESETS = {
    "fig1": _FIG1,
    "fig2": _FIG2,
    "fig3": _FIG3,
    "fig4a": _fig4(3.105, ((2.96, 3.00, 401), (4.06, 4.10, 401))),
    "fig4b": _fig4(2.2, ((3.02, 3.06, 401), (3.93, 3.97, 401))),
    "fig5a": _FIG5A,
    "fig5b": _FIG5B,
}

#: working-point values as quoted (5 significant digits); preset frequencies
#: must round to these
QUOTED_ETA = {"fig2": 3.9819, "fig3": 3.9821, "fig5a": 4.9842,
              "fig5b": 4.9732}


def get_preset(name: str):
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; "
                       f"choose from {sorted(PRESETS)}") from None


def basis_for(preset) -> BasisSpec:
    return BasisSpec(preset.atom, preset.n_max)
