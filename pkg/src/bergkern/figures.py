"""Static SVG renderings of scans, ratio traces, and tracking runs."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .expr import KernelExpr
from .zerolab import GridSpec, RatioTrace, TrackStep


def _domain_outline(ax, domain) -> None:
    theta = np.linspace(0.0, 2.0 * math.pi, 256)
    ax.plot(np.cos(theta), np.sin(theta), color="black", linewidth=0.8)
    if domain.kind == "annulus":
        r = domain.inner_radius
        ax.plot(r * np.cos(theta), r * np.sin(theta), color="black", linewidth=0.8)


def slice_heatmap(K: KernelExpr, w0: complex, grid: GridSpec, witnesses, path: str) -> None:
    """log10 |K(z, w0)| over the grid, NaN outside the evaluable region."""
    n = grid.resolution
    xs = np.linspace(grid.xmin, grid.xmax, n)
    ys = np.linspace(grid.ymin, grid.ymax, n)
    X, Y = np.meshgrid(xs, ys)
    Z = (X + 1j * Y).ravel()
    dom = K.domain
    margin = grid.boundary_margin
    ok = np.array([dom.contains(z) and dom.boundary_distance(z) > margin for z in Z])
    if dom.kind == "annulus":
        t = np.abs(Z) * abs(w0)
        ok &= (t > dom.inner_radius**2 + margin) & (t < 1.0 - margin)
    vals = np.full(Z.shape, np.nan)
    if ok.any():
        vals[ok] = np.log10(np.maximum(np.abs(K.values_z(Z[ok], w0)), 1e-300))
    fig, ax = plt.subplots(figsize=(5.4, 4.6))
    im = ax.imshow(
        vals.reshape(n, n),
        origin="lower",
        extent=(grid.xmin, grid.xmax, grid.ymin, grid.ymax),
        cmap="viridis",
    )
    fig.colorbar(im, ax=ax, label=r"$\log_{10} |K(z, w_0)|$")
    _domain_outline(ax, dom)
    for wit in witnesses:
        ax.plot(wit.z.real, wit.z.imag, "rx", markersize=9, markeredgewidth=2)
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_title(f"slice w0 = {w0.real:.4g}{w0.imag:+.4g}i, {len(witnesses)} zero(s)")
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def ratio_plot(trace: RatioTrace, path: str) -> None:
    """Boundary ratio decay on a log scale, indexed by center number."""
    fig, ax = plt.subplots(figsize=(5.4, 3.8))
    idx = np.arange(len(trace.values))
    ax.semilogy(idx, np.maximum(np.array(trace.values), 1e-300), "o-")
    ax.set_xlabel("center index")
    ax.set_ylabel(r"$|K(z, c_j)| / \sqrt{K(c_j, c_j)}$")
    ax.set_title(f"ratio trace at z = {trace.z.real:.4g}{trace.z.imag:+.4g}i")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def track_plot(steps: list[TrackStep], witness, domain, path: str) -> None:
    """Tracked zeros and their centers in the plane, witness starred."""
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    _domain_outline(ax, domain)
    cs = [s.center for s in steps]
    ax.plot([c.real for c in cs], [c.imag for c in cs], "k+", markersize=7, label="centers")
    acc = [s for s in steps if s.accepted]
    if acc:
        zs = [s.z1 for s in acc]
        ax.plot([z.real for z in zs], [z.imag for z in zs], "o-", color="tab:blue", label="tracked zeros")
    ax.plot(witness.z.real, witness.z.imag, "r*", markersize=13, label="witness")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_title(f"{len(acc)} accepted of {len(steps)} steps")
    ax.legend(loc="best", fontsize=8)
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
