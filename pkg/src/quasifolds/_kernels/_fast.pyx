# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as _ref.py."""

from libc.math cimport cos, sin, M_PI

BACKEND = "cython"


def poly_mul(a, b):
    cdef Py_ssize_t na = len(a), nb = len(b), i, j
    if na == 0 or nb == 0:
        return []
    out = [0j] * (na + nb - 1)
    cdef double complex u
    for i in range(na):
        u = a[i]
        if u == 0:
            continue
        for j in range(nb):
            out[i + j] = out[i + j] + u * (<double complex> b[j])
    return out


def poly_add(a, b):
    cdef Py_ssize_t na = len(a), nb = len(b), n = na if na > nb else nb, i
    out = [0j] * n
    for i in range(na):
        out[i] = out[i] + a[i]
    for i in range(nb):
        out[i] = out[i] + b[i]
    return out


def poly_scale(a, s):
    cdef double complex cs = s
    return [(<double complex> u) * cs for u in a]


def poly_eval(a, x):
    cdef double complex acc = 0, cx = x
    cdef Py_ssize_t i
    for i in range(len(a) - 1, -1, -1):
        acc = acc * cx + (<double complex> a[i])
    return complex(acc)


def poly_shift(a, h):
    cdef Py_ssize_t n = len(a), i, j
    cdef double complex ch = h
    out = [complex(c) for c in a]
    if ch == 0 or n == 0:
        return out
    cdef double complex tmp
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            tmp = (<double complex> out[j]) + ch * (<double complex> out[j + 1])
            out[j] = tmp
    return out


def trig_mul(off_a, a, off_b, b):
    return off_a + off_b, poly_mul(a, b)


def trig_rotate(off, coeffs, t):
    cdef double tau = 2.0 * M_PI * (<double> t)
    cdef Py_ssize_t i, ioff = off
    cdef double ang
    out = []
    for i in range(len(coeffs)):
        ang = tau * (ioff + i)
        out.append((<double complex> coeffs[i]) * (cos(ang) + 1j * sin(ang)))
    return out


def trig_eval(off, coeffs, x):
    cdef double tau = 2.0 * M_PI * (<double> x)
    cdef double complex acc = 0, c
    cdef Py_ssize_t i, ioff = off
    cdef double ang
    for i in range(len(coeffs)):
        c = coeffs[i]
        if c != 0:
            ang = tau * (ioff + i)
            acc = acc + c * (cos(ang) + 1j * sin(ang))
    return complex(acc)
