"""Figure rendering for trajectories and robustness maps.

All functions draw with the Agg backend and write straight to files;
nothing here opens a window.  Data export lives with the scan/propagate
modules, these are the companion pictures the CLI drops next to the CSV
files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .propagate import Trajectory
from .robustness import Heatmap


def trajectory_figure(traj: Trajectory, path: str, title: str | None = None) -> None:
    """Plot the two spin-z expectation series against time."""
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(traj.times, 2 * traj.sz, label=r"$2\langle S_z\rangle$", lw=1.2)
    ax.plot(traj.times, 2 * traj.iz, label=r"$2\langle I_z\rangle$", lw=1.2, alpha=0.8)
    ax.set_xlabel("time")
    ax.set_ylabel("polarization")
    ax.set_ylim(-1.05, 1.05)
    ax.grid(alpha=0.3)
    ax.legend(loc="best")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _draw_heatmap(ax, hm: Heatmap, show_cbar: bool = True):
    d = np.asarray(hm.grid.delta_over_omega)
    r = np.asarray(hm.grid.rabi_rel)
    mesh = ax.pcolormesh(
        d, r, hm.values, cmap="RdBu_r", vmin=-1.0, vmax=1.0, shading="nearest"
    )
    ax.set_xlabel(r"$\Delta/\Omega$")
    ax.set_ylabel(r"$\Omega_{err}/\Omega$")
    if show_cbar:
        plt.colorbar(mesh, ax=ax, label="transferred polarization")
    return mesh


def heatmap_figure(hm: Heatmap, path: str, title: str | None = None) -> None:
    """Render one robustness map to a file."""
    fig, ax = plt.subplots(figsize=(6, 5))
    _draw_heatmap(ax, hm)
    meta = hm.metadata
    if title is None and meta:
        title = f"{meta.get('scheme', '')}  N={meta.get('n_reps', '?')}"
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def multiscan_figure(panels: list[list[Heatmap]], path: str) -> None:
    """Render a panel array of robustness maps (coupling x splitting)."""
    n_rows = len(panels[0])
    n_cols = len(panels)
    fig, axes = plt.subplots(
        n_rows, n_cols, figsize=(4.2 * n_cols, 3.6 * n_rows), squeeze=False
    )
    mesh = None
    for i, column in enumerate(panels):
        for j, hm in enumerate(column):
            ax = axes[j][i]
            mesh = _draw_heatmap(ax, hm, show_cbar=False)
            pars = hm.metadata.get("parameters", {})
            ratio = hm.metadata.get("t_fin_ratio")
            label = (
                f"a={pars.get('a_perp'):.3g}, w={pars.get('omega_i'):.3g}"
                + (f", t/t_ref={ratio:.2f}" if ratio is not None else "")
            )
            ax.set_title(label, fontsize=9)
    if mesh is not None:
        fig.colorbar(mesh, ax=[ax for col in axes for ax in col], shrink=0.8,
                     label="transferred polarization")
    fig.savefig(path, dpi=150)
    plt.close(fig)


__all__ = ["trajectory_figure", "heatmap_figure", "multiscan_figure"]
