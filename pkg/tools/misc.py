"""
Miscellaneous tools for the analysis tasks.
"""
import os
import re
import argparse
import fractions
import hashlib

THREADS_ENV_VAR = 'QREDUNDANCY_THREADS'


class HashableNamespace(argparse.Namespace):
    """
    Adds a __hash__ function to argparse's Namespace.
    """
    def __hash__(self):
        m = hashlib.sha256()
        for val in self.__dict__.values():
            m.update(str(val).encode('utf-8'))
        return int(m.hexdigest(), 16) % 10 ** 12


class PipelineNamespace(object):
    """
    A Hashable namespace that maintains knowledge of whether a member is significant and thus should be hashed.
    Output paths and log levels are insignificant: changing them does not change the numbers in a report.
    """
    def __init__(self):
        self.significant = {}

    def set(self, name, val, significant=True):
        setattr(self, name, val)
        self.significant[name] = significant

    def __hash__(self):
        vals = tuple(getattr(self, name) for name in sorted(self.significant) if self.significant[name])
        m = hashlib.sha256()
        for val in vals:
            m.update(str(val).encode('utf-8'))
        return int(m.hexdigest(), 16) % 10 ** 12


def thread_cap(default=1):
    """
    Number of worker threads allowed by the QREDUNDANCY_THREADS environment variable.
    :param default: value used when the variable is not set
    :return: positive integer
    """
    val = os.environ.get(THREADS_ENV_VAR)
    if val is None or val.strip() == '':
        return default
    try:
        n = int(val)
    except ValueError:
        raise ValueError('{} must be a positive integer, got {!r}'.format(THREADS_ENV_VAR, val))
    if n < 1:
        raise ValueError('{} must be a positive integer, got {!r}'.format(THREADS_ENV_VAR, val))
    return n


def parse_number(token):
    """
    Parses a single number. Integers and fractions like 1/3 stay exact, everything else becomes a float.
    sqrt2 style tokens are accepted as sqrt(2).
    """
    token = token.strip()
    m = re.fullmatch(r'(-?)sqrt\(?([0-9.]+)\)?', token)
    if m is not None:
        val = float(m.group(2)) ** 0.5
        return -val if m.group(1) == '-' else val
    if re.fullmatch(r'-?\d+', token):
        return int(token)
    if re.fullmatch(r'-?\d+/\d+', token):
        return fractions.Fraction(token)
    return float(token)


def parse_number_list(s, sep=','):
    """Parses '1,2,1/3' style comma lists"""
    if s is None or s.strip() == '':
        return []
    return [parse_number(x) for x in s.split(sep)]


def parse_range(s):
    """
    Parses an inclusive integer range. Accepts '1..3', '2' and '1,2,4'.
    :return: list of ints
    """
    s = s.strip()
    m = re.fullmatch(r'(\d+)\.\.(\d+)', s)
    if m is not None:
        lo, hi = int(m.group(1)), int(m.group(2))
        if lo > hi:
            raise ValueError('Empty range {}'.format(s))
        return list(range(lo, hi + 1))
    return [int(x) for x in s.split(',')]
