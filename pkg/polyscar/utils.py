import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from polyscar.errors import ConfigurationError

THREADS_VARIABLE = "POLYSCAR_THREADS"


def worker_count(workers=None):
    """
    Number of worker threads.

    :param int workers: explicit count, otherwise :code:`POLYSCAR_THREADS` or the CPU count
    :return: positive integer
    """
    if workers is None:
        value = os.environ.get(THREADS_VARIABLE)
        if value is None:
            return os.cpu_count() or 1
        try:
            workers = int(value)
        except ValueError:
            raise ConfigurationError(f"{THREADS_VARIABLE}={value!r} is not an integer")
    if workers < 1:
        raise ConfigurationError("the number of workers must be positive")
    return workers


def parallel_map(func, items, workers=None):
    """
    Applies :code:`func` to every item in a thread pool, keeping the order.

    :return: list of results
    """
    items = list(items)
    workers = min(worker_count(workers), max(len(items), 1))
    if workers == 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def format_float(value):
    """
    Fixed formatting with 17 significant digits so that output files are reproducible.
    """
    value = float(value)
    if np.isnan(value):
        return "nan"
    return f"{value:.17g}"


def random_interior(spec, count, seed=0):
    """
    Uniform random points strictly inside a billiard, drawn by rejection from its bounding box.

    :return: array of shape (count, 2)
    """
    rng = np.random.default_rng(seed)
    (x0, y0), (x1, y1) = spec.bounding_box()
    points = np.empty((0, 2))
    while len(points) < count:
        trial = rng.uniform((x0, y0), (x1, y1), size=(4 * count, 2))
        inside = spec.contains(trial, tol=-1e-9)
        points = np.vstack([points, trial[inside]])
    return points[:count]
