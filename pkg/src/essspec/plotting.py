"""Static figures of point clouds and hull rasters.

Output is SVG written through matplotlib with a fixed hash salt and no
date stamp, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.colors as mcolors  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from .cplane import CompactSetEstimate, HullRegion  # noqa: E402
from .errors import InvalidParameterError  # noqa: E402

MAX_LAYERS = 10

MARKERS = {
    "exact-curve": dict(marker=".", s=6, linewidths=0),
    "eigenvalues": dict(marker="x", s=30, linewidths=1.2),
    "region-raster": dict(marker="s", s=1, linewidths=0, alpha=0.15),
    "empty": dict(marker="."),
}

RC = {
    "svg.hashsalt": "essspec",
    "svg.fonttype": "path",
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
}


def _hull_extent(H):
    rows, cols = H.shape
    x0, y0 = H.origin.real, H.origin.imag
    return (x0, x0 + cols * H.cell_size, y0, y0 + rows * H.cell_size)


def emit_svg(layers, path, labels=None, title=None):
    """Overlay point clouds and hull rasters in one SVG figure.

    ``layers`` mixes :class:`CompactSetEstimate` and :class:`HullRegion`
    values; hulls are drawn first so markers stay visible.
    """
    layers = list(layers)
    if len(layers) > MAX_LAYERS:
        raise InvalidParameterError(f"at most {MAX_LAYERS} layers, got {len(layers)}")
    labels = list(labels) if labels is not None else [None] * len(layers)
    if len(labels) != len(layers):
        raise InvalidParameterError("one label per layer")

    with matplotlib.rc_context(RC):
        fig = Figure(figsize=(5.0, 5.0))
        ax = fig.add_subplot()
        colors = matplotlib.rcParams["axes.prop_cycle"].by_key()["color"]
        order = sorted(range(len(layers)), key=lambda i: _depth(layers[i]))
        for n, i in enumerate(order):
            layer, color = layers[i], colors[n % len(colors)]
            if isinstance(layer, HullRegion):
                label = labels[i] or "hull"
                if layer.is_empty:
                    ax.plot([], [], "s", color=color, alpha=0.3, label=f"{label} (empty)")
                    continue
                cmap = mcolors.ListedColormap([(0, 0, 0, 0), mcolors.to_rgba(color, 0.3)])
                ax.imshow(layer.mask.astype(np.uint8), origin="lower", extent=_hull_extent(layer),
                          cmap=cmap, vmin=0, vmax=1, interpolation="nearest")
                ax.plot([], [], "s", color=color, alpha=0.3, label=label)
            elif isinstance(layer, CompactSetEstimate):
                label = labels[i] or layer.kind
                pts = layer.points
                ax.scatter(pts.real, pts.imag, color=color, label=f"{label} [{layer.kind}]",
                           rasterized=pts.size > 4000, **MARKERS[layer.kind])
            else:
                raise InvalidParameterError(f"cannot draw {type(layer).__name__}")
        ax.set_xlabel("Re")
        ax.set_ylabel("Im")
        ax.set_aspect("equal", adjustable="datalim")
        if not layers or all(_blank(layer) for layer in layers):
            ax.set_xlim(-1, 1)
            ax.set_ylim(-1, 1)
        if title:
            ax.set_title(title)
        if layers:
            ax.legend(loc="upper right", fontsize=7)
        fig.savefig(path, format="svg", metadata={"Date": None})
    return path


def _depth(layer):
    # filled areas first, then curves and isolated points on top
    if isinstance(layer, HullRegion):
        return 0
    return 1 if layer.kind == "region-raster" else 2


def _blank(layer):
    return layer.is_empty
