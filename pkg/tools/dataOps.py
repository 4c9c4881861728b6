"""
Operations on dictionaries, lists and report payloads.
"""
import itertools
import math

import numpy as np


def flatten_list_of_lists(l):
    """
    http://stackoverflow.com/questions/952914/making-a-flat-list-out-of-list-of-lists-in-python
    """
    return [item for sublist in l for item in sublist]


def grouper(iterable, size):
    """
    http://stackoverflow.com/questions/434287/what-is-the-most-pythonic-way-to-iterate-over-a-list-in-chunks
    """
    it = iter(iterable)
    chunk = tuple(itertools.islice(it, size))
    while chunk:
        yield chunk
        chunk = tuple(itertools.islice(it, size))


def round_significant(x, digits=12):
    """Round a float to a fixed number of significant digits. Non-finite values pass through."""
    x = float(x)
    if x == 0:
        return 0.0
    if not math.isfinite(x):
        return x
    r = float('{:.{}g}'.format(x, digits))
    # -0.0 would print differently from 0.0
    return r + 0.0


def round_floats(obj, digits=12):
    """
    Recursively rounds every float inside a nested structure of dicts, lists and tuples to digits
    significant digits. numpy scalars and arrays are converted to plain python types along the way.
    """
    if isinstance(obj, dict):
        return {k: round_floats(v, digits) for k, v in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [round_floats(v, digits) for v in obj]
    elif isinstance(obj, np.ndarray):
        return round_floats(obj.tolist(), digits)
    elif isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    elif isinstance(obj, (int, np.integer)):
        return int(obj)
    elif isinstance(obj, (float, np.floating)):
        return round_significant(obj, digits)
    return obj
