# Compiled Kershaw closure kernels; formula-for-formula twin of _ref.py.

from libc.math cimport fabs

import numpy as np

BACKEND = "compiled"

cdef double _EPS = 1e-14


cdef inline double _quadform2(double m00, double m01, double m11,
                              double b0, double b1) nogil:
    cdef double shift = _EPS * (fabs(m00) + fabs(m11) + 1.0)
    cdef double a = m00 + shift
    cdef double d = m11 + shift
    cdef double det = a * d - m01 * m01
    return (d * b0 * b0 - 2.0 * m01 * b0 * b1 + a * b1 * b1) / det


cdef inline double _next1(double p1) nogil:
    return (2.0 * p1 * p1 + 1.0) / 3.0


cdef inline double _next2(double p1, double p2) nogil:
    cdef double den = p1 * p1 - 1.0
    if fabs(den) > _EPS:
        return p1 * (p1 * p1 + p2 * p2 - 2.0 * p2) / den
    return p1 * p2


cdef inline double _next3(double p1, double p2, double p3) nogil:
    cdef double up_den = (1.0 - p2) + _EPS * (1.0 + fabs(1.0 - p2))
    cdef double f_up = p2 - (p1 - p3) * (p1 - p3) / up_den
    cdef double f_low = _quadform2(1.0, p1, p2, p2, p3)
    return 0.6 * f_low + 0.4 * f_up


cdef inline double _next4(double p1, double p2, double p3, double p4) nogil:
    cdef double f_up = p4 - _quadform2(1.0 - p1, p1 - p2, p2 - p3,
                                       p2 - p3, p3 - p4)
    cdef double f_low = -p4 + _quadform2(1.0 + p1, p1 + p2, p2 + p3,
                                         p2 + p3, p3 + p4)
    return 0.5 * (f_low + f_up)


def kershaw_next(U):
    """Closing moments u_{N+1} for each row of the (n_cells, N+1) array U."""
    U = np.ascontiguousarray(U, dtype=np.float64)
    cdef int order = U.shape[1] - 1
    if order < 1 or order > 4:
        raise ValueError(f"no closed-form Kershaw kernel for order {order}")
    out = np.empty(U.shape[0], dtype=np.float64)
    cdef double[:, ::1] u = U
    cdef double[::1] o = out
    cdef Py_ssize_t i, m = u.shape[0]
    cdef double u0
    with nogil:
        if order == 1:
            for i in range(m):
                u0 = u[i, 0]
                o[i] = u0 * _next1(u[i, 1] / u0)
        elif order == 2:
            for i in range(m):
                u0 = u[i, 0]
                o[i] = u0 * _next2(u[i, 1] / u0, u[i, 2] / u0)
        elif order == 3:
            for i in range(m):
                u0 = u[i, 0]
                o[i] = u0 * _next3(u[i, 1] / u0, u[i, 2] / u0, u[i, 3] / u0)
        else:
            for i in range(m):
                u0 = u[i, 0]
                o[i] = u0 * _next4(u[i, 1] / u0, u[i, 2] / u0,
                                   u[i, 3] / u0, u[i, 4] / u0)
    return out
