import csv
import io
import json
import os

import h5py
import numpy as np

from polyscar.errors import DomainError
from polyscar.utils import format_float

PGM_MAX = 65535


def _csv(header, rows):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return out.getvalue()


def _cell(value):
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return value


def spectrum_csv(entries):
    """
    Spectrum table as CSV text, one row per level in the given order.

    :param entries: list of :class:`quantization.SpectrumEntry`
    """
    rows = [entry.as_row() for entry in entries]
    header = ["family", "skeleton", "m", "n", "auxiliary", "energy", "validity"]
    return _csv(header, [[_cell(row[key]) for key in header] for row in rows])


def field_csv(field):
    """
    Inside samples of a :class:`wavefunction.WaveField` as CSV text.

    Real fields have columns :code:`x, y, value`, complex ones :code:`x, y, re, im`.
    """
    X, Y = np.meshgrid(field.x, field.y)
    inside = field.mask
    xs, ys, vs = X[inside], Y[inside], field.values[inside]
    if field.is_complex:
        header = ["x", "y", "re", "im"]
        rows = [
            [format_float(x), format_float(y), format_float(v.real), format_float(v.imag)]
            for x, y, v in zip(xs, ys, vs)
        ]
    else:
        header = ["x", "y", "value"]
        rows = [[format_float(x), format_float(y), format_float(v)] for x, y, v in zip(xs, ys, vs)]
    return _csv(header, rows)


def to_json(data):
    """Deterministic JSON text: sorted keys, two-space indent."""
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def field_pgm(field):
    """
    16-bit binary PGM heat map of a real field.

    Inside values are mapped linearly onto :math:`[1, 65535]`, outside pixels are 0.  The
    first image row is the top of the billiard.

    :return: bytes
    """
    if field.is_complex:
        raise DomainError("PGM maps need a real field, take field.branch() first")
    values = np.where(field.mask, field.values, np.nan)[::-1]
    pixels = np.zeros(values.shape, dtype=">u2")
    inside = ~np.isnan(values)
    if inside.any():
        lo, hi = np.min(values[inside]), np.max(values[inside])
        span = hi - lo if hi > lo else 1.0
        pixels[inside] = np.round(1 + (values[inside] - lo) / span * (PGM_MAX - 1))
    height, width = pixels.shape
    header = f"P5\n{width} {height}\n{PGM_MAX}\n".encode("ascii")
    return header + pixels.tobytes()


def save_field(field, outpath, filename="field", params=None, **kwargs):
    """
    Saves a sampled field in a :code:`.hdf5` file.  The samples, mask and axes are saved as
    `datasets <https://docs.h5py.org/en/stable/high/dataset.html>`_; the mode, the run
    parameters and anything passed as keyword are saved as
    `attributes <https://docs.h5py.org/en/stable/high/attr.html>`_.

    :param field: :class:`wavefunction.WaveField`
    :param string outpath: directory in which the file is saved
    :param string filename: filename without extension
    :param params: object whose attributes are the run parameters, e.g. :class:`cli.RunConfig`
    :param \\**kwargs: additional attributes
    :return: path of the file
    """
    path = os.path.join(outpath, f"{filename}.hdf5")
    with h5py.File(path, "w") as f:
        f.create_dataset("values", data=field.values)
        f.create_dataset("mask", data=field.mask, dtype="i1")
        f.create_dataset("x", data=field.x)
        f.create_dataset("y", data=field.y)

        for k, v in field.mode.describe().items():
            f.attrs[k] = v
        if field.part is not None:
            f.attrs["part"] = field.part
        if params is not None:
            for attr, value in params.__dict__.items():
                if value is not None:
                    f.attrs[attr] = value if isinstance(value, (int, float)) else str(value)
        for k, v in kwargs.items():
            f.attrs[k] = v
    return path


def load_field(path):
    """
    Reads the datasets and attributes written by :func:`save_field`.

    :return: tuple (dict of arrays, dict of attributes)
    """
    with h5py.File(path, "r") as f:
        data = {key: f[key][()] for key in ("values", "mask", "x", "y")}
        attrs = dict(f.attrs)
    data["mask"] = data["mask"].astype(bool)
    return data, attrs
