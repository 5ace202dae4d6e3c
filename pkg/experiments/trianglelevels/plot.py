"""
Plots the wave function and the level ratios saved by main.py
"""

import argparse

import matplotlib.pyplot as plt
import numpy as np

from polyscar import plotting
from polyscar.geometry import BilliardSpec
from polyscar.saving import load_field
from polyscar.wavefunction import ModeKind, WaveField, WaveMode

parser = argparse.ArgumentParser()
parser.add_argument("datafile", type=str, help="Path to .hdf5 file written by main.py.")
parser.add_argument("directory", type=str, help="Directory in which to save plots.")
parser.add_argument(
    "--suffix", type=str, default="", help="Optional suffix to output filenames."
)
args = parser.parse_args()


def filename(name):
    return f"{args.directory}/{name}{args.suffix}.png"


data, attrs = load_field(args.datafile)
mode = WaveMode(
    BilliardSpec.triangle(),
    ModeKind(attrs["kind"]),
    (attrs["m"], attrs["n"]),
    approximation=attrs["approximation"],
)
field = WaveField(data["x"], data["y"], data["values"], data["mask"], mode)

psi = plotting.plot_field(field, title=f"(m, n) = ({attrs['m']}, {attrs['n']})")
psi.savefig(filename("psi"))

ratios = plotting.plot_level_ratios(attrs["computed"], reference=attrs["reference"])
ratios.savefig(filename("ratios"))

# Boundary residual on FH against its bound for every convergent
fig = plt.figure(figsize=(10, 8))
k = np.arange(len(attrs["residuals"]))
plt.semilogy(k, attrs["residuals"], "o-", label="max |psi| on FH")
plt.semilogy(k, attrs["bounds"], "s--", label="bound")
plt.xticks(k, attrs["approximations"].split(","), rotation=45)
plt.xlabel("u/q")
plt.legend()
fig.savefig(filename("residuals"))

print(f"Filename: {args.datafile}")
for attr in attrs:
    print(f"{attr}: {attrs[attr]}")
