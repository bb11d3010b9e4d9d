# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled cosine-scan kernel.

One fused pass over the embedding matrix: per-row dot product against the
query divided by the precomputed row norms. Accumulation is float64, matching
the numpy fallback in `_scan_py`.
"""


def cosine_scores(double[:, ::1] matrix, double[::1] norms, double[::1] query,
                  double query_norm, double[::1] out):
    cdef Py_ssize_t i, j
    cdef Py_ssize_t n = matrix.shape[0]
    cdef Py_ssize_t d = matrix.shape[1]
    cdef double acc
    with nogil:
        for i in range(n):
            acc = 0.0
            for j in range(d):
                acc += matrix[i, j] * query[j]
            out[i] = acc / (norms[i] * query_norm)


BACKEND = "compiled"
