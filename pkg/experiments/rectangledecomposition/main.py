"""
Dirichlet and Neumann superscar states of a rectangle on the periodic skeleton of a
direction, and the semiclassical wave function they combine into.
Input: rectangle sides, skeleton direction and quantum numbers of the superscar
Output: three sampled fields (Dirichlet, Neumann, half difference) with the
decomposition residual stored as attributes
"""

import argparse
import datetime
from dataclasses import replace

from polyscar.geometry import BilliardSpec
from polyscar.quantization import check_compatibility
from polyscar.saving import save_field
from polyscar.wavefunction import ModeKind, WaveMode, sample_field, verify_decomposition

parser = argparse.ArgumentParser()
parser.add_argument("--a", type=str, default="1", help="Width of the rectangle. Default 1.")
parser.add_argument("--b", type=str, default="1", help="Height of the rectangle. Default 1.")
parser.add_argument(
    "--direction", type=str, default="1,1", help="Skeleton direction 'x,y'. Default '1,1'."
)
parser.add_argument("--m", type=int, default=4, help="Longitudinal quantum number. Default 4.")
parser.add_argument("--n", type=int, default=1, help="Transverse quantum number. Default 1.")
parser.add_argument("--grid", type=int, default=400, help="Samples per axis. Default 400.")
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

spec = BilliardSpec.rectangle(args.a, args.b)
report = check_compatibility(spec, args.direction)
print(f"Winding numbers: {report.winding}")
print(f"Compatibility: {report.constraint}")

# Raises if the direction is incompatible or m is not a multiple of kq + lr
(decomposition,) = verify_decomposition(spec, args.m, args.n, direction=args.direction)
print(f"{decomposition.side}: residual {decomposition.max_abs:.3e}")

NOW = datetime.datetime.now()
dirichlet = WaveMode(spec, ModeKind.SUPERSCAR, (args.m, args.n), direction=args.direction)
neumann = replace(dirichlet, boundary="neumann")
fields = {
    "dirichlet": sample_field(dirichlet, args.grid),
    "neumann": sample_field(neumann, args.grid),
}
fields["product"] = replace(
    fields["dirichlet"], values=(fields["dirichlet"].values - fields["neumann"].values) / 2
)

stamp = f"{NOW.strftime('%d%m%y_%H%M%S')}_{args.jobid}"
for name, field in fields.items():
    save_field(
        field,
        args.outdir,
        filename=f"rectangle_{name}_{args.m}_{args.n}_{stamp}",
        params=args,
        component=name,
        check=decomposition.side,
        residual=decomposition.max_abs,
        time=str(datetime.datetime.now() - NOW),
    )
