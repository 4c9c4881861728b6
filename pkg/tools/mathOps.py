"""
Library mathematical operations
"""
import math
import fractions
import numbers
from functools import reduce


def exact_power(m, base):
    """
    If the integer m is an exact power of base, return the exponent, otherwise None.
    :param m: positive integer
    :param base: integer base >= 2
    :return: integer or None
    """
    if m < 1:
        return None
    n = 0
    while m % base == 0:
        m //= base
        n += 1
    return n if m == 1 else None


def ceil_log(m, base=3):
    """
    Smallest integer n >= 0 with base ** n >= m, in integer arithmetic. math.log(27, 3) is not exactly 3.
    :param m: positive integer
    :param base: integer base >= 2
    :return: integer
    """
    if m < 1:
        raise ValueError('ceil_log requires a positive argument, got {}'.format(m))
    n, power = 0, 1
    while power < m:
        power *= base
        n += 1
    return n


def log_base(m, base=3):
    """
    Logarithm of m in the given base. Exact for integer powers of the base.
    """
    if isinstance(m, numbers.Integral):
        n = exact_power(m, base)
        if n is not None:
            return float(n)
    return math.log(m) / math.log(base)


def is_rational_vector(values):
    """Are all of these values ints or Fractions (and therefore safe for exact arithmetic)?"""
    return all(isinstance(v, (numbers.Integral, fractions.Fraction)) and not isinstance(v, bool) for v in values)


def integer_scale(values):
    """
    Scales a vector of rationals to integers by the least common multiple of the denominators.
    :param values: iterable of ints or Fractions
    :return: tuple of (list of ints, integer scale)
    """
    values = [fractions.Fraction(int(v)) if isinstance(v, numbers.Integral) else fractions.Fraction(v) for v in values]
    scale = reduce(lambda a, b: a * b // math.gcd(a, b), (v.denominator for v in values), 1)
    return [int(v * scale) for v in values], scale


def group_within(sorted_values, tol):
    """
    Splits a sorted sequence of reals into runs where consecutive members are within tol.
    :param sorted_values: sorted list of floats
    :param tol: absolute tolerance
    :return: list of lists of indices into sorted_values
    """
    groups = []
    for i, v in enumerate(sorted_values):
        if len(groups) > 0 and v - sorted_values[groups[-1][-1]] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups
