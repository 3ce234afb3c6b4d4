# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled 7-point leapfrog stencil for the 3D wave equation.

Arithmetic is ordered exactly like the NumPy reference kernel in
``kernels.py`` (and the extension is compiled without FP contraction), so
both kernels produce bit-identical fields.
"""


def step(double[:, :, ::1] p_prev, double[:, :, ::1] p_cur,
         double[:, :, ::1] p_next, const unsigned char[:, :, ::1] air,
         const double[:, :, ::1] ncount, double lam2):
    """Advance one timestep: p_next <- update(p_cur, p_prev) on air cells."""
    cdef Py_ssize_t nx = p_cur.shape[0]
    cdef Py_ssize_t ny = p_cur.shape[1]
    cdef Py_ssize_t nz = p_cur.shape[2]
    cdef Py_ssize_t i, j, k
    cdef double s, pc

    with nogil:
        for i in range(1, nx - 1):
            for j in range(1, ny - 1):
                for k in range(1, nz - 1):
                    if air[i, j, k]:
                        pc = p_cur[i, j, k]
                        s = p_cur[i - 1, j, k] + p_cur[i + 1, j, k] \
                            + p_cur[i, j - 1, k] + p_cur[i, j + 1, k] \
                            + p_cur[i, j, k - 1] + p_cur[i, j, k + 1]
                        p_next[i, j, k] = 2.0 * pc - p_prev[i, j, k] \
                            + lam2 * (s - ncount[i, j, k] * pc)
                    else:
                        p_next[i, j, k] = 0.0
