import copy

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.collections import LineCollection

from polyscar.skeleton import fold_diagonal


def plot_field(
    field,
    title=None,
    cbar=True,
    cmap="RdBu_r",
    vmin=None,
    vmax=None,
    cbar_label="",
    centre0=True,
    diagonals=(),
    figsize=(10, 8),
):
    """
    Plots a sampled wave function inside its billiard.

    :param field: real :class:`wavefunction.WaveField`, complex fields are shown by modulus
    :param string title: figure title
    :param bool cbar: if :code:`True`, plot the colour bar
    :param string cmap: name of a matplotlib colour map
    :param float vmin: minimum value, defaults to the lowest sample
    :param float vmax: maximum value, defaults to the highest sample
    :param string cbar_label: label of the colour bar
    :param bool centre0: centre the colour map at 0, overrides :code:`vmin, vmax`
    :param diagonals: :class:`skeleton.SingularDiagonal` objects drawn folded into the billiard
    :param tuple figsize: figure size

    :return: matplotlib figure
    """
    cmap = copy.copy(plt.get_cmap(cmap))
    cmap.set_bad(alpha=0)
    values = np.abs(field.values) if field.is_complex else np.array(field.values)
    values = np.where(field.mask, values, np.nan)

    if centre0 and np.isfinite(values).any():
        cbar_end = np.nanmax(np.abs(values))
        vmax = cbar_end
        vmin = -cbar_end

    fig = plt.figure(figsize=figsize)
    extent = (field.x[0], field.x[-1], field.y[0], field.y[-1])
    if not cbar:
        map_gs = fig.add_gridspec(1, 1)
        map_ax = map_gs.subplots()
    else:
        map_gs = fig.add_gridspec(nrows=1, ncols=2, width_ratios=[40, 1], wspace=0.05)
        map_ax = fig.add_subplot(map_gs[:, :-1])
        cbar_ax = fig.add_subplot(map_gs[:, -1])
    im = map_ax.imshow(
        values, origin="lower", extent=extent, cmap=cmap, vmin=vmin, vmax=vmax
    )
    if cbar:
        cbar = fig.colorbar(im, cax=cbar_ax)
        cbar.set_label(cbar_label)

    spec = field.mode.spec
    outline = np.vstack([spec.float_vertices(), spec.float_vertices()[:1]])
    map_ax.plot(outline[:, 0], outline[:, 1], c="k", lw=1)
    for sd in diagonals:
        segments = fold_diagonal(spec, sd)
        map_ax.add_collection(LineCollection(segments, colors="k", linestyles="--", lw=1))
    map_ax.set_aspect("equal")
    map_ax.axis("off")
    map_ax.set_title(title)
    return fig


def plot_skeleton(spec, pocs, figsize=(10, 8)):
    """
    Plots the folded cells of the orbit channels of a periodic skeleton, one colour per
    channel, with the singular diagonals bounding them.

    :param spec: :class:`geometry.BilliardSpec`
    :param pocs: list of :class:`skeleton.PocDescriptor`

    :return: matplotlib figure
    """
    fig, ax = plt.subplots(figsize=figsize)
    (x0, y0), (x1, y1) = spec.bounding_box()
    X, Y = np.meshgrid(np.linspace(x0, x1, 400), np.linspace(y0, y1, 400))
    points = np.column_stack([X.ravel(), Y.ravel()])
    labels = np.full(len(points), np.nan)
    for poc in pocs:
        for cell in poc.folded_cells:
            _, _, inside = cell.local(points)
            labels[inside] = poc.index
    labels[~spec.contains(points)] = np.nan
    cmap = copy.copy(plt.get_cmap("tab10"))
    cmap.set_bad(alpha=0)
    ax.imshow(
        labels.reshape(X.shape), origin="lower", extent=(x0, x1, y0, y1), cmap=cmap, alpha=0.6
    )
    outline = np.vstack([spec.float_vertices(), spec.float_vertices()[:1]])
    ax.plot(outline[:, 0], outline[:, 1], c="k", lw=1)
    for poc in pocs:
        for sd in poc.bounding_diagonals:
            if sd is not None:
                ax.add_collection(
                    LineCollection(fold_diagonal(spec, sd), colors="k", linestyles="--", lw=1)
                )
    ax.set_aspect("equal")
    ax.set_title(f"{len(pocs)} channels")
    return fig


def plot_level_ratios(ratios, reference=None, figsize=(10, 8)):
    """
    Plots ratios of successive levels against a reference sequence.

    :param ratios: computed ratios
    :param reference: ratios of reference levels, same length

    :return: matplotlib figure
    """
    fig = plt.figure(figsize=figsize)
    k = np.arange(1, len(ratios) + 1)
    plt.plot(k, ratios, "o-", label="semiclassical")
    if reference is not None:
        plt.plot(k, reference, "s--", label="reference")
    plt.xticks(k)
    plt.xlabel("k")
    plt.ylabel("E(k+1)/E(k)")
    plt.legend()
    return fig
