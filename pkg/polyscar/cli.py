"""
Command line front end: :code:`polyscar <command> --config billiard.cfg [options]`.

Commands
    spectrum     sorted semiclassical levels, CSV or JSON
    field        sampled wave function or superscar state, CSV or PGM (optionally HDF5)
    verify       boundary residuals and superscar identities, JSON
    unfold       EPP images, period lattice, singular diagonals and channels, JSON or CSV
    ratio-check  level ratios of the triangle against reference levels
"""

import argparse
import logging
import os
import sys

from polyscar.errors import CompatibilityError, ConfigurationError, PolyscarError
from polyscar.exact import CfApprox, as_ratio, convergents
from polyscar.geometry import (
    BilliardConfig,
    BilliardSpec,
    Boundary,
    Classification,
    Family,
    build_epp,
    genus,
    load_billiard,
    period_lattice,
)
from polyscar.quantization import VALIDITY_THRESHOLD, spectrum_aperiodic, spectrum_table
from polyscar.saving import field_csv, field_pgm, save_field, spectrum_csv, to_json
from polyscar.skeleton import (
    Kind,
    classify_direction,
    diagonal_set,
    enumerate_pocs,
    poc_pieces,
    poc_types,
)
from polyscar.utils import format_float
from polyscar.wavefunction import (
    ModeKind,
    ResidualReport,
    WaveMode,
    boundary_residual,
    constructed_zero_sides,
    nodal_lines,
    sample_field,
    verify_decomposition,
)

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json", "pgm")

# (upper level, lower level, ratio of the exact levels)
REFERENCE_RATIOS = (((191, 1), (121, 1), 2.4937), ((266, 1), (191, 1), 1.9380))

_DEFAULT_KINDS = {
    Family.PARALLELOGRAM: ModeKind.SWF_COMPLEX,
    Family.RECTANGLE: ModeKind.EXACT,
    Family.LSHAPE: ModeKind.EXACT,
}


class RunConfig:
    """
    Options of one command.  The attributes are stored with saved fields.

    :param command: subcommand name
    :param config: path of the billiard config
    :param variant: :code:`"u"` or :code:`"q"`, overrides the config
    :param grid: samples per axis of fields
    :param fmt: output format, one of :data:`FORMATS`
    :param out: output path, standard output when :code:`None`
    :param threshold: largest accepted validity ratio of periodic levels
    :param skeleton: skeleton direction :code:`"x,y"`
    :param max_m: largest quantum number of spectrum tables
    :param m: first quantum number of fields and checks
    :param n: second quantum number of fields and checks
    :param kind: :class:`wavefunction.ModeKind` value
    :param poc: channel number of superscars
    :param boundary: :code:`"dirichlet"` or :code:`"neumann"` superscar component
    :param substituted: rational triangle forms
    :param channel: traced channel of folded states
    :param part: part of complex fields written to real formats
    :param nodal: write nodal points instead of samples
    :param hdf5: directory for an HDF5 archive of the field
    :param samples: boundary samples per side
    :param check: :code:`"boundary"`, :code:`"decomposition"` or :code:`"all"`
    """

    def __init__(
        self,
        command,
        config=None,
        variant=None,
        grid=512,
        fmt="csv",
        out=None,
        threshold=VALIDITY_THRESHOLD,
        skeleton=None,
        max_m=20,
        m=None,
        n=None,
        kind=None,
        poc=None,
        boundary="dirichlet",
        substituted=False,
        channel=1,
        part="imag",
        nodal=False,
        hdf5=None,
        samples=10000,
        check="all",
    ):
        self.command = command
        self.config = config
        self.variant = variant
        self.grid = grid
        self.fmt = fmt
        self.out = out
        self.threshold = threshold
        self.skeleton = skeleton
        self.max_m = max_m
        self.m = m
        self.n = n
        self.kind = kind
        self.poc = poc
        self.boundary = boundary
        self.substituted = substituted
        self.channel = channel
        self.part = part
        self.nodal = nodal
        self.hdf5 = hdf5
        self.samples = samples
        self.check = check
        self._validate()

    def _validate(self):
        if self.config is not None and not os.path.isfile(self.config):
            raise ConfigurationError(f"config file '{self.config}' does not exist")
        if self.fmt not in FORMATS:
            raise ConfigurationError(f"unknown format '{self.fmt}'")
        if self.variant not in (None, "u", "q"):
            raise ConfigurationError(f"unknown variant '{self.variant}'")
        if self.grid < 2:
            raise ConfigurationError("the grid needs at least two points per axis")
        if self.threshold <= 0:
            raise ConfigurationError("the validity threshold must be positive")

    @classmethod
    def from_args(cls, args):
        options = dict(vars(args))
        options.pop("verbose", None)
        options.pop("func", None)
        options["fmt"] = options.pop("format", "csv")
        return cls(**{k: v for k, v in options.items() if v is not None})

    def billiard(self):
        if self.config is None:
            raise ConfigurationError(f"'{self.command}' needs --config")
        config = load_billiard(self.config)
        if self.variant is not None:
            config = BilliardConfig(
                config.spec, config.boundary, config.approx, self.variant, config.raw
            )
        return config

    def quantum_numbers(self):
        if self.m is None or self.n is None:
            raise ConfigurationError(f"'{self.command}' needs --m and --n")
        return self.m, self.n


def _write(data, out):
    if out is None:
        if isinstance(data, bytes):
            sys.stdout.buffer.write(data)
            sys.stdout.flush()
        else:
            sys.stdout.write(data)
        return
    mode = "wb" if isinstance(data, bytes) else "w"
    with open(out, mode, **({} if mode == "wb" else {"newline": ""})) as f:
        f.write(data)
    logger.info(f"written {out}")


def _approximation(config):
    if config.spec.family is not Family.TRIANGLE:
        return None
    approx = config.approx
    return approx.last if isinstance(approx, CfApprox) else as_ratio(approx)


def cmd_spectrum(params):
    """Writes the sorted spectrum of a billiard."""
    config = params.billiard()
    if params.fmt == "pgm":
        raise ConfigurationError("spectra are written as csv or json")
    entries = spectrum_table(
        config.spec, config.lattice(), params.max_m, direction=params.skeleton
    )
    kept = [e for e in entries if e.is_valid(params.threshold)]
    if len(kept) < len(entries):
        logger.info(
            f"{len(entries) - len(kept)} levels above the validity threshold {params.threshold}"
        )
    if params.fmt == "csv":
        _write(spectrum_csv(kept), params.out)
    else:
        rows = [e.as_row() for e in kept]
        _write(to_json(rows), params.out)
    return 0


def _mode(params, config):
    spec = config.spec
    family = spec.family
    variant = config.variant
    if params.kind is None:
        if family is Family.TRIANGLE:
            kind = ModeKind.SWF_U if variant == "u" else ModeKind.SWF_Q
        else:
            kind = _DEFAULT_KINDS.get(family, ModeKind.EXACT)
    else:
        kind = ModeKind(params.kind)
    channel = None
    direction = params.skeleton
    if kind is ModeKind.BS_FOLDED:
        if direction is None:
            raise ConfigurationError("folded states need --skeleton")
        dc = classify_direction(config.lattice(), direction)
        pocs = enumerate_pocs(spec, config.lattice(), dc)
        if not 1 <= params.channel <= len(pocs):
            raise ConfigurationError(
                f"channel {params.channel} out of range, the skeleton has {len(pocs)}"
            )
        channel = pocs[params.channel - 1]
    return WaveMode(
        spec,
        kind,
        params.quantum_numbers(),
        approximation=_approximation(config),
        substituted=params.substituted,
        poc=params.poc,
        boundary=Boundary(params.boundary),
        direction=direction,
        variant=variant,
        channel=channel,
    )


def cmd_field(params):
    """Samples a mode and writes the samples, its nodal points or a heat map."""
    config = params.billiard()
    mode = _mode(params, config)
    field = sample_field(mode, params.grid)
    if params.hdf5 is not None:
        m, n = mode.quantum_numbers
        filename = f"{mode.spec.family.value}_{mode.kind.value}_{m}_{n}"
        save_field(field, params.hdf5, filename=filename, params=params)
    if field.is_complex:
        field = field.branch(params.part)
    if params.nodal:
        if params.fmt != "csv":
            raise ConfigurationError("nodal points are written as csv")
        rows = "".join(f"{format_float(x)},{format_float(y)}\n" for x, y in nodal_lines(field))
        _write("x,y\n" + rows, params.out)
    elif params.fmt == "csv":
        _write(field_csv(field), params.out)
    elif params.fmt == "pgm":
        _write(field_pgm(field), params.out)
    else:
        raise ConfigurationError("fields are written as csv or pgm")
    return 0


def _residual_modes(config, m, n):
    spec = config.spec
    family = spec.family
    approximation = _approximation(config)
    if family is Family.TRIANGLE:
        kind = ModeKind.SWF_U if config.variant == "u" else ModeKind.SWF_Q
        mode = WaveMode(spec, kind, (m, n), approximation=approximation)
        return [(mode, range(len(spec.vertices)))]
    if family is Family.PARALLELOGRAM:
        kinds = (ModeKind.SWF_BRANCH1, ModeKind.SWF_BRANCH2)
    else:
        kinds = (ModeKind.EXACT,)
    modes = [WaveMode(spec, kind, (m, n)) for kind in kinds]
    return [(mode, constructed_zero_sides(mode)) for mode in modes]


def cmd_verify(params):
    """
    Writes a JSON list of checks :code:`{check, max_abs, bound, pass}`.

    :return: 0 when every check passes, 1 otherwise
    """
    config = params.billiard()
    if params.fmt != "json":
        raise ConfigurationError("verification reports are written as json")
    m, n = params.quantum_numbers()
    reports = []
    if params.check in ("boundary", "all"):
        for mode, sides in _residual_modes(config, m, n):
            for side in sides:
                report = boundary_residual(mode, side, params.samples)
                reports.append(
                    ResidualReport.of(
                        f"{mode.kind.value}:{report.side}", report.max_abs, report.bound
                    )
                )
    if params.check in ("decomposition", "all"):
        reports += verify_decomposition(
            config.spec,
            m,
            n,
            direction=params.skeleton,
            approximation=_approximation(config),
            variant=config.variant,
        )
    _write(to_json([r.as_dict() for r in reports]), params.out)
    failed = [r.side for r in reports if not r.passed]
    if failed:
        logger.warning(f"failed checks: {', '.join(failed)}")
        return 1
    return 0


def _point(v):
    return [float(v.x), float(v.y)]


def cmd_unfold(params):
    """Writes the unfolding of a billiard and, with :code:`--skeleton`, its diagonals and channels."""
    config = params.billiard()
    spec = config.spec
    lattice = config.lattice()
    diagonals, pocs, dc = [], [], None
    if params.skeleton is not None:
        dc = classify_direction(lattice, params.skeleton)
        if dc.kind is Kind.PERIODIC:
            diagonals = diagonal_set(spec, dc.direction)
            pocs = enumerate_pocs(spec, lattice, dc)

    if params.fmt == "csv":
        rows = ["x,y,id"]
        for k, sd in enumerate(diagonals, 1):
            rows += [f"{format_float(p.x)},{format_float(p.y)},sd{k}" for p in sd.points]
        for poc in pocs:
            for side, sd in zip(("right", "left"), poc.bounding_diagonals):
                if sd is None:
                    continue
                rows += [
                    f"{format_float(p.x)},{format_float(p.y)},poc{poc.index}-{side}"
                    for p in sd.points
                ]
        _write("\n".join(rows) + "\n", params.out)
        return 0
    if params.fmt != "json":
        raise ConfigurationError("unfoldings are written as json or csv")

    data = {
        "family": spec.family.value,
        "genus": genus(spec),
        "vertices": [_point(v) for v in spec.vertices],
        "epp": [
            {
                "index": image.index,
                "linear": image.linear.to_float().tolist(),
                "translation": _point(image.translation),
                "eta": image.eta,
            }
            for image in build_epp(spec, config.boundary)
        ],
        "lattice": {
            "generators": [_point(D) for D in lattice.generators],
            "periods": [_point(D) for D in lattice.periods],
            "scale_divisors": list(lattice.scale_divisors),
            "classification": lattice.classification.value,
        },
    }
    if lattice.classification is not Classification.INTEGER and lattice.approximation:
        data["lattice"]["approximation"] = str(lattice.approximation)
    if dc is not None:
        types = {poc.index: k for k, group in enumerate(poc_types(pocs), 1) for poc in group}
        data["skeleton"] = {
            "direction": _point(dc.direction),
            "kind": dc.kind.value,
            "singular_diagonals": [
                {
                    "anchor": sd.anchor_index,
                    "terminal": sd.terminal_index,
                    "bounce_counts": list(sd.bounce_counts),
                    "points": [_point(p) for p in sd.points],
                }
                for sd in diagonals
            ],
            "pocs": [
                {
                    "index": poc.index,
                    "period": _point(poc.period_vector),
                    "width": poc.width,
                    "length": poc.length,
                    "images": poc.images(),
                    "type": types[poc.index],
                    "pieces": len(poc_pieces(spec, poc)),
                }
                for poc in pocs
            ],
        }
    _write(to_json(data), params.out)
    return 0


def level_ratios(config=None):
    """
    Ratios of triangle levels on the aperiodic skeleton next to the reference ratios.

    :param config: :class:`geometry.BilliardConfig` of a triangle, defaults to the tenth
        convergent :math:`3363/2378` of :math:`\\sqrt{2}` and the :math:`u` variant
    :return: list of dicts with keys :code:`levels, computed, reference, gap`
    """
    if config is None:
        spec, approx, variant = BilliardSpec.triangle(), convergents("sqrt2", 10), "u"
    else:
        spec, approx, variant = config.spec, config.approx, config.variant
    if spec.family is not Family.TRIANGLE:
        raise ConfigurationError("ratio-check needs the triangle")
    lattice = period_lattice(spec, approx, variant)
    rows = []
    for upper, lower, reference in REFERENCE_RATIOS:
        e1 = spectrum_aperiodic(spec, lattice, *upper).energy
        e0 = spectrum_aperiodic(spec, lattice, *lower).energy
        computed = e1 / e0
        rows.append(
            {
                "levels": f"E{upper}/E{lower}",
                "computed": computed,
                "reference": reference,
                "gap": abs(computed - reference) / reference,
            }
        )
    return rows


def cmd_ratio_check(params):
    """Prints the triangle level ratios against the reference ratios."""
    config = params.billiard() if params.config is not None else None
    rows = level_ratios(config)
    if params.fmt == "json":
        _write(to_json(rows), params.out)
        return 0
    lines = [
        f"{r['levels']}: computed {r['computed']:.4f}, reference {r['reference']:.4f}, "
        f"gap {100 * r['gap']:.3f}%"
        for r in rows
    ]
    _write("\n".join(lines) + "\n", params.out)
    return 0


def _parser():
    parser = argparse.ArgumentParser(
        prog="polyscar",
        description="Semiclassical quantization of rational polygon billiards.",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG."
    )
    commands = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, help="Path to the billiard config file.")
    common.add_argument(
        "--variant", choices=("u", "q"), help="Substitution variant, overrides the config."
    )
    common.add_argument("--out", type=str, help="Output file. Default standard output.")
    common.add_argument(
        "--format", choices=FORMATS, default=None, help="Output format. Default csv."
    )
    common.add_argument(
        "--skeleton", type=str, help="Periodic skeleton direction 'x,y', e.g. '1,1'."
    )

    spectrum = commands.add_parser("spectrum", parents=[common], help="Energy levels.")
    spectrum.add_argument("--max-m", dest="max_m", type=int, default=20)
    spectrum.add_argument(
        "--threshold",
        type=float,
        default=VALIDITY_THRESHOLD,
        help=f"Largest accepted validity ratio. Default {VALIDITY_THRESHOLD}.",
    )
    spectrum.set_defaults(func=cmd_spectrum)

    field = commands.add_parser("field", parents=[common], help="Sampled wave function.")
    field.add_argument("--m", type=int, required=True)
    field.add_argument("--n", type=int, required=True)
    field.add_argument("--kind", choices=[k.value for k in ModeKind])
    field.add_argument("--poc", type=int, help="Superscar channel number.")
    field.add_argument("--boundary", choices=[b.value for b in Boundary])
    field.add_argument("--substituted", action="store_true", default=None)
    field.add_argument("--channel", type=int, help="Traced channel of a folded state.")
    field.add_argument("--part", choices=("real", "imag"), help="Part of complex fields.")
    field.add_argument("--grid", type=int, default=512, help="Samples per axis. Default 512.")
    field.add_argument("--nodal", action="store_true", default=None, help="Nodal points.")
    field.add_argument("--hdf5", type=str, help="Directory for an HDF5 archive.")
    field.set_defaults(func=cmd_field)

    verify = commands.add_parser("verify", parents=[common], help="Residual checks.")
    verify.add_argument("--m", type=int, required=True)
    verify.add_argument("--n", type=int, required=True)
    verify.add_argument("--check", choices=("boundary", "decomposition", "all"))
    verify.add_argument("--samples", type=int, help="Samples per side. Default 10000.")
    verify.set_defaults(func=cmd_verify)

    unfold = commands.add_parser("unfold", parents=[common], help="EPP and skeleton.")
    unfold.set_defaults(func=cmd_unfold)

    ratio = commands.add_parser("ratio-check", parents=[common], help="Triangle level ratios.")
    ratio.set_defaults(func=cmd_ratio_check)
    return parser


_FORMAT_DEFAULTS = {
    "spectrum": "csv",
    "field": "csv",
    "verify": "json",
    "unfold": "json",
    "ratio-check": "csv",
}


def main(argv=None):
    """
    Runs one command.

    :param argv: arguments without the program name, :code:`sys.argv[1:]` by default
    :return: exit code, 2 for usage errors
    """
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    if args.format is None:
        args.format = _FORMAT_DEFAULTS[args.command]
    try:
        params = RunConfig.from_args(args)
        return args.func(params)
    except CompatibilityError as e:
        print(f"error[{e.code}]: {e}", file=sys.stderr)
        if e.report is not None:
            print(f"  constraint: {e.report.constraint}", file=sys.stderr)
            if e.report.winding is not None:
                print(f"  winding: {e.report.winding}", file=sys.stderr)
        return e.exit_code
    except PolyscarError as e:
        print(f"error[{e.code}]: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
