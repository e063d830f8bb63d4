# cython: language_level=3, boundscheck=False, cdivision=False
"""Compiled twin of ``_reference``.

Same four entry points, same family codes, and (given -ffp-contract=off)
bit-identical results; only the arithmetic loops run in C.  Keep the two
files in lockstep when touching either.
"""

from libc.math cimport sqrt

BACKEND = "compiled"


cdef inline double _clamp(double x):
    if x < 0.0:
        return 0.0
    if x > 1.0:
        return 1.0
    return x


cdef double _pair(int code, double a, double b) except -1.0:
    cdef double r
    if code == 0:
        return _clamp(a + b - 1.0)
    if code == 1:
        r = sqrt(a) + sqrt(b) - 1.0
        return _clamp(r * r) if r > 0.0 else 0.0
    if code == 2:
        return a * b
    if code == 3:
        if a == 0.0 or b == 0.0:
            # Limit of the reciprocal form as either argument -> 0+.
            return 0.0
        return _clamp(1.0 / (1.0 / a + 1.0 / b - 1.0))
    if code == 4:
        return a if a < b else b
    raise ValueError(f"unknown family code {code}")


def tnorm_pair(int code, double a, double b):
    """Conjunction of two certainty values under one family."""
    return _pair(code, a, b)


def tnorm_many(int code, values):
    """Conjunction of one or more certainty values under one family."""
    cdef Py_ssize_t i, n = len(values)
    cdef double acc, r, s, v
    if code == 0:
        acc = values[0]
        for i in range(1, n):
            v = values[i]
            acc = acc + v - 1.0
            if acc < 0.0:
                acc = 0.0
        return _clamp(acc)
    if code == 1:
        s = 0.0
        for i in range(n):
            s += sqrt(<double> values[i])
        r = s - (n - 1)
        return _clamp(r * r) if r > 0.0 else 0.0
    if code == 2:
        acc = 1.0
        for i in range(n):
            acc *= <double> values[i]
        return _clamp(acc)
    if code == 3:
        for i in range(n):
            if <double> values[i] == 0.0:
                return 0.0
        s = 0.0
        for i in range(n):
            s += 1.0 / <double> values[i]
        s = s - (n - 1)
        return _clamp(1.0 / s)
    if code == 4:
        acc = values[0]
        for i in range(1, n):
            v = values[i]
            if v < acc:
                acc = v
        return acc
    raise ValueError(f"unknown family code {code}")


def tconorm_pair(int code, double a, double b):
    """Disjunction, defined as the De Morgan dual of the conjunction."""
    return 1.0 - _pair(code, 1.0 - a, 1.0 - b)


def tconorm_many(int code, values):
    """Disjunction of one or more values, dual to ``tnorm_many``."""
    return 1.0 - tnorm_many(code, [1.0 - v for v in values])
