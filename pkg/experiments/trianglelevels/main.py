"""
Semiclassical levels of the pi/8 right triangle and how well the rational
approximation of sqrt(2) satisfies the boundary condition on the side x = 1+sqrt(2).
Input: number of continued fraction convergents of sqrt(2)
Output: sampled wave function of the chosen level, with the level ratios and the
boundary residual of every convergent stored as attributes
"""

import argparse
import datetime

import numpy as np

from polyscar.cli import level_ratios
from polyscar.exact import convergents
from polyscar.geometry import BilliardConfig, BilliardSpec, Boundary, period_lattice
from polyscar.quantization import spectrum_table
from polyscar.saving import save_field
from polyscar.wavefunction import ModeKind, WaveMode, boundary_residual, sample_field

parser = argparse.ArgumentParser()
parser.add_argument(
    "--convergents",
    type=int,
    default=10,
    help="Number of continued fraction convergents of sqrt(2). Default 10.",
)
parser.add_argument(
    "--variant", type=str, default="u", help="'u' or 'q' substitution. Default 'u'."
)
parser.add_argument("--m", type=int, default=121, help="First quantum number. Default 121.")
parser.add_argument("--n", type=int, default=1, help="Second quantum number. Default 1.")
parser.add_argument(
    "--max-m",
    dest="max_m",
    type=int,
    default=30,
    help="Largest quantum number of the tabulated spectrum. Default 30.",
)
parser.add_argument("--grid", type=int, default=800, help="Samples per axis. Default 800.")
parser.add_argument(
    "--samples", type=int, default=20000, help="Boundary samples per side. Default 20000."
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

spec = BilliardSpec.triangle()
cf = convergents("sqrt2", args.convergents)
kind = ModeKind.SWF_U if args.variant == "u" else ModeKind.SWF_Q

# OF and HO vanish identically for every approximation,
# FH only up to the rational approximation
approximations, residuals, bounds = [], [], []
for k in range(2, args.convergents + 1):
    approx = convergents("sqrt2", k).last
    mode = WaveMode(spec, kind, (args.m, args.n), approximation=approx)
    report = boundary_residual(mode, "FH", args.samples)
    approximations.append(str(approx))
    residuals.append(report.max_abs)
    bounds.append(report.bound)
    print(f"{approx}: residual {report.max_abs:.3e}, bound {report.bound:.3e}")

# Ratios of successive levels of the low spectrum
lattice = period_lattice(spec, cf, args.variant)
levels = spectrum_table(spec, lattice, args.max_m)
energies = np.array([e.energy for e in levels])
successive = energies[1:] / energies[:-1]
print(f"Number of levels with m <= {args.max_m}: {len(levels)}")

config = BilliardConfig(spec, (Boundary.DIRICHLET,) * 3, cf, args.variant, {})
reference = level_ratios(config)
for row in reference:
    print(f"{row['levels']}: {row['computed']:.4f} (reference {row['reference']:.4f})")

# Sample the wave function of the chosen level
NOW = datetime.datetime.now()
mode = WaveMode(spec, kind, (args.m, args.n), approximation=cf)
field = sample_field(mode, args.grid)

filename = f"triangle_{args.m}_{args.n}_{NOW.strftime('%d%m%y_%H%M%S')}_{args.jobid}"
save_field(
    field,
    args.outdir,
    filename=filename,
    params=args,
    approximations=",".join(approximations),
    residuals=residuals,
    bounds=bounds,
    successive=successive,
    computed=[row["computed"] for row in reference],
    reference=[row["reference"] for row in reference],
    time=str(datetime.datetime.now() - NOW),
)
