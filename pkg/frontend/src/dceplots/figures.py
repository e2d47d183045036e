"""Declarative figure specifications for each preset's CSV artifacts.

Every figure is described by a FigureSpec: which CSV files it reads, how
the panels are laid out, and which columns each panel draws. The renderer
never computes physics; it only plots columns that already exist in the
CSVs produced by the simulation command line tool.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SeriesSpec:
    """One curve or marker series inside a panel.

    table: key into FigureSpec.inputs naming the source CSV.
    x, y:  column names in that CSV.
    label: legend entry.
    fmt:   matplotlib format string ("-" line, "^" markers, ...).
    abs_value: plot |y| instead of y (for signed analytic overlays).
    """

    table: str
    x: str
    y: str
    label: str
    fmt: str = "-"
    abs_value: bool = False
    markevery: int = 1


@dataclass(frozen=True)
class PanelSpec:
    """One axes in the figure grid."""

    xlabel: str
    ylabel: str
    series: tuple[SeriesSpec, ...]
    yscale: str = "linear"
    title: str = ""


@dataclass(frozen=True)
class FigureSpec:
    """A complete preset figure: inputs, layout, and panel contents."""

    name: str
    inputs: dict[str, str] = field(default_factory=dict)
    panels: tuple[PanelSpec, ...] = ()
    ncols: int = 1

    def columns_used(self, table: str) -> set[str]:
        cols: set[str] = set()
        for panel in self.panels:
            for s in panel.series:
                if s.table == table:
                    cols.update((s.x, s.y))
        return cols


def _trajectory_panels(table: str, fock: tuple[int, ...], atoms: tuple[int, ...],
                       label: str = "") -> tuple[PanelSpec, ...]:
    suffix = f" ({label})" if label else ""
    return (
        PanelSpec(
            xlabel="nu t", ylabel="<n>, Q",
            series=(
                SeriesSpec(table, "t", "mean_n", "<n>" + suffix),
                SeriesSpec(table, "t", "mandel_q", "Mandel Q" + suffix),
            ),
        ),
        PanelSpec(
            xlabel="nu t", ylabel="atom populations",
            series=tuple(
                SeriesSpec(table, "t", f"P_a_{j}", f"P(level {j})" + suffix)
                for j in atoms
            ),
        ),
        PanelSpec(
            xlabel="nu t", ylabel="Fock probabilities",
            series=tuple(
                SeriesSpec(table, "t", f"p_{n}", f"p({n})" + suffix)
                for n in fock
            ),
        ),
    )


def _sweep_panels(k_lo: int, k_hi: int, xlabel: str) -> tuple[PanelSpec, ...]:
    return (
        PanelSpec(
            xlabel=xlabel, ylabel="|Theta|", yscale="log",
            series=(
                SeriesSpec("sweep", "grid_value", f"theta{k_lo}_abs",
                           f"|Theta| ({k_lo}-photon)"),
                SeriesSpec("sweep", "grid_value", f"theta{k_hi}_abs",
                           f"|Theta| ({k_hi}-photon)"),
            ),
        ),
        PanelSpec(
            xlabel=xlabel, ylabel="dressed-state fidelity",
            series=(
                SeriesSpec("sweep", "grid_value", f"fidelity{k_lo}",
                           f"Phi ({k_lo}-photon ladder)"),
                SeriesSpec("sweep", "grid_value", f"fidelity{k_hi}",
                           f"Phi ({k_hi}-photon ladder)"),
            ),
        ),
    )


def _fig1() -> FigureSpec:
    return FigureSpec(
        name="fig1",
        inputs={"sweep": "fig1_sweep.csv", "pert": "fig1_perturbative.csv"},
        ncols=1,
        panels=(
            PanelSpec(
                xlabel="E1 / nu", ylabel="|C|", yscale="log",
                series=(
                    SeriesSpec("sweep", "grid_value", "C4_abs",
                               "|C| exact (4-photon)"),
                    SeriesSpec("pert", "grid_value", "c4_far",
                               "far-detuned formula", fmt="^",
                               abs_value=True, markevery=6),
                    SeriesSpec("pert", "grid_value", "c4_near",
                               "near-degeneracy formula", fmt="s",
                               abs_value=True, markevery=6),
                ),
            ),
            PanelSpec(
                xlabel="E1 / nu", ylabel="dressed-state fidelity",
                series=(
                    SeriesSpec("sweep", "grid_value", "fidelity4",
                               "Phi (4-photon ladder)"),
                    SeriesSpec("sweep", "grid_value", "fidelity8",
                               "Phi (8-photon ladder)"),
                ),
            ),
        ),
    )


def _fig2() -> FigureSpec:
    unitary = _trajectory_panels("traj", (0, 4, 8, 12), (0, 1))
    # Overlay the dissipative run on the unitary <n>/Q panel.
    first = PanelSpec(
        xlabel=unitary[0].xlabel, ylabel=unitary[0].ylabel,
        series=unitary[0].series + (
            SeriesSpec("diss", "t", "mean_n", "<n> (dissipative)", fmt="--"),
        ),
    )
    return FigureSpec(
        name="fig2",
        inputs={"traj": "fig2_trajectory.csv",
                "diss": "fig2_trajectory_dissipative.csv"},
        ncols=3,
        panels=(first,) + unitary[1:],
    )


def _fig4(name: str) -> FigureSpec:
    zoom_panels = tuple(
        PanelSpec(
            xlabel="E2 / nu", ylabel="dressed-state fidelity",
            title=f"zoom window {i}",
            series=(
                SeriesSpec(f"zoom{i}", "grid_value", "fidelity5",
                           "Phi (5-photon ladder)"),
            ),
        )
        for i in (0, 1)
    )
    return FigureSpec(
        name=name,
        inputs={"sweep": f"{name}_sweep.csv",
                "zoom0": f"{name}_zoom0.csv",
                "zoom1": f"{name}_zoom1.csv"},
        ncols=2,
        panels=_sweep_panels(5, 10, "E2 / nu") + zoom_panels,
    )


FIGURES: dict[str, FigureSpec] = {
    "fig1": _fig1(),
    "fig2": _fig2(),
    "fig3": FigureSpec(
        name="fig3",
        inputs={"traj": "fig3_trajectory.csv"},
        ncols=3,
        panels=_trajectory_panels("traj", (0, 4), (0, 1)),
    ),
    "fig4a": _fig4("fig4a"),
    "fig4b": _fig4("fig4b"),
    "fig5a": FigureSpec(
        name="fig5a",
        inputs={"traj": "fig5a_trajectory.csv"},
        ncols=3,
        panels=_trajectory_panels("traj", (0, 5, 10, 15), (0, 1, 2)),
    ),
    "fig5b": FigureSpec(
        name="fig5b",
        inputs={"traj": "fig5b_trajectory.csv"},
        ncols=3,
        panels=_trajectory_panels("traj", (0, 5), (0, 1, 2)),
    ),
}
