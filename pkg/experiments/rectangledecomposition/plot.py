"""
Plots the fields saved by main.py side by side
"""

import argparse

import matplotlib.pyplot as plt
import numpy as np

from polyscar.saving import load_field

parser = argparse.ArgumentParser()
parser.add_argument(
    "datafiles", type=str, nargs="+", help="Paths to .hdf5 files written by main.py."
)
parser.add_argument("directory", type=str, help="Directory in which to save plots.")
parser.add_argument(
    "--suffix", type=str, default="", help="Optional suffix to output filenames."
)
args = parser.parse_args()

fig, axes = plt.subplots(1, len(args.datafiles), figsize=(6 * len(args.datafiles), 6))
axes = np.atleast_1d(axes)
for ax, path in zip(axes, args.datafiles):
    data, attrs = load_field(path)
    values = np.ma.masked_invalid(data["values"])
    vmax = np.nanmax(np.abs(data["values"])) or 1
    extent = (data["x"][0], data["x"][-1], data["y"][0], data["y"][-1])
    ax.imshow(values, origin="lower", extent=extent, cmap="RdBu_r", vmin=-vmax, vmax=vmax)
    ax.set_title(attrs["component"])
    ax.set_aspect("equal")
    print(f"{path}: {attrs['check']} residual {attrs['residual']:.3e}")
plt.tight_layout()
fig.savefig(f"{args.directory}/decomposition{args.suffix}.png")
