"""Render trajectory figures to files alongside the delimited output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .witness import NonMarkovReport, Trajectory


def render_trajectory_figure(traj: Trajectory, report: NonMarkovReport, path) -> str:
    """Two-panel summary figure: entropy quantities and the loss rate.

    Detected decreasing intervals are shaded in both panels.  Returns the
    path written.
    """
    fig, (ax_top, ax_bottom) = plt.subplots(2, 1, sharex=True, figsize=(8, 6))
    t = traj.times

    ax_top.plot(t, traj.loss, color="crimson", lw=2, label="quantum loss $L_Q$")
    ax_top.plot(t, [s.s_exchange for s in traj.snapshots], color="steelblue", lw=1.5,
                label="entropy exchange $S_e$")
    ax_top.plot(t, [s.coherent_info for s in traj.snapshots], color="seagreen", lw=1.5,
                label="coherent information $I_c$")
    ax_top.plot(t, traj.mutual_info, color="gray", lw=1.5, ls="--", label="mutual information $I$")
    ax_top.set_ylabel("bits")
    ax_top.legend(loc="best", fontsize=9)
    ax_top.grid(True, alpha=0.3)

    ax_bottom.plot(t, traj.loss_rate, color="crimson", lw=1.5, label=r"$dL_Q/dt$")
    ax_bottom.axhline(0.0, color="black", lw=0.8)
    ax_bottom.set_xlabel("time (inverse-rate units)")
    ax_bottom.set_ylabel("bits / time")
    ax_bottom.legend(loc="best", fontsize=9)
    ax_bottom.grid(True, alpha=0.3)

    for interval in report.intervals:
        for ax in (ax_top, ax_bottom):
            ax.axvspan(interval.start, interval.end, color="orange", alpha=0.2)

    verdict = report.numeric_verdict
    ax_top.set_title(f"quantum-loss trajectory ({verdict}, measure {report.measure:.6g})")

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)
