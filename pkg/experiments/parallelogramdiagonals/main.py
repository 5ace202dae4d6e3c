"""
Singular diagonals and orbit channels of the parallelogram with angles pi/3, 2pi/3
for side lengths L and L + 3, whose diagonal patterns are expected to repeat.
Input: side length L and a skeleton direction
Output: json file with the diagonals and channels of both parallelograms
"""

import argparse
import datetime
import os
from collections import Counter

from polyscar.geometry import BilliardSpec, period_lattice
from polyscar.saving import to_json
from polyscar.skeleton import (
    Kind,
    classify_direction,
    diagonal_set,
    enumerate_pocs,
    poc_pieces,
    poc_types,
)

parser = argparse.ArgumentParser()
parser.add_argument("--L", type=int, default=4, help="Length of the long side. Default 4.")
parser.add_argument(
    "--direction",
    type=str,
    default="3/2,sqrt(3)/2",
    help="Skeleton direction 'x,y'. Default '3/2,sqrt(3)/2'.",
)
parser.add_argument(
    "--outdir", type=str, default=".", help="Output directory. Default '.'."
)
parser.add_argument(
    "--jobid",
    type=str,
    default="0",
    help="Optional ID that will be added to the end of the output filename. Default '0'.",
)
args = parser.parse_args()


def point(v):
    return [float(v.x), float(v.y)]


def skeleton_of(L):
    spec = BilliardSpec.parallelogram(L)
    lattice = period_lattice(spec)
    dc = classify_direction(lattice, args.direction)
    result = {"L": L, "kind": dc.kind.value, "diagonals": [], "pocs": []}
    if dc.kind is not Kind.PERIODIC:
        return result
    for sd in diagonal_set(spec, dc.direction):
        result["diagonals"].append(
            {
                "anchor": sd.anchor_index,
                "terminal": sd.terminal_index,
                "side_bounces": list(sd.side_bounces),
                "points": [point(p) for p in sd.points],
            }
        )
    pocs = enumerate_pocs(spec, lattice, dc)
    types = {poc.index: k for k, group in enumerate(poc_types(pocs), 1) for poc in group}
    for poc in pocs:
        result["pocs"].append(
            {
                "index": poc.index,
                "type": types[poc.index],
                "pieces": len(poc_pieces(spec, poc)),
                "width": poc.width,
                "length": poc.length,
                "period": point(poc.period_vector),
            }
        )
    return result


def pattern(result):
    # vertex pairs and reflections per side, blind to the lengths
    return Counter(
        (d["anchor"], d["terminal"], tuple(d["side_bounces"])) for d in result["diagonals"]
    )


NOW = datetime.datetime.now()
results = [skeleton_of(args.L), skeleton_of(args.L + 3)]
for result in results:
    print(
        f"L = {result['L']}: {result['kind']}, {len(result['diagonals'])} diagonals, "
        f"{len(result['pocs'])} channels, "
        f"{sum(p['pieces'] for p in result['pocs'])} POCs on the EPP"
    )
same = pattern(results[0]) == pattern(results[1])
print(f"Same diagonal pattern: {same}")

data = {
    "direction": args.direction,
    "same_pattern": same,
    "skeletons": results,
    "time": str(datetime.datetime.now() - NOW),
}
filename = f"parallelogram_{args.L}_{NOW.strftime('%d%m%y_%H%M%S')}_{args.jobid}.json"
with open(os.path.join(args.outdir, filename), "w") as f:
    f.write(to_json(data))
