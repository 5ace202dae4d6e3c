"""
Plots the channels and diagonals of both parallelograms in a file written by main.py
"""

import argparse
import json

from polyscar import plotting
from polyscar.geometry import BilliardSpec, period_lattice
from polyscar.skeleton import classify_direction, enumerate_pocs

parser = argparse.ArgumentParser()
parser.add_argument("datafile", type=str, help="Path to .json file written by main.py.")
parser.add_argument("directory", type=str, help="Directory in which to save plots.")
parser.add_argument(
    "--suffix", type=str, default="", help="Optional suffix to output filenames."
)
args = parser.parse_args()

with open(args.datafile) as f:
    data = json.load(f)

for result in data["skeletons"]:
    if not result["pocs"]:
        print(f"L = {result['L']}: no channels to plot")
        continue
    spec = BilliardSpec.parallelogram(result["L"])
    lattice = period_lattice(spec)
    pocs = enumerate_pocs(spec, lattice, classify_direction(lattice, data["direction"]))
    fig = plotting.plot_skeleton(spec, pocs)
    fig.savefig(f"{args.directory}/skeleton_L{result['L']}{args.suffix}.png")
