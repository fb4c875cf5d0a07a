# cython: boundscheck=False, wraparound=False
"""C implementation of the Levenshtein kernel used by umlkit.textsim."""

from cpython.mem cimport PyMem_Free, PyMem_Malloc


def levenshtein(str a, str b) -> int:
    """Edit distance (insert/delete/substitute, unit costs) between two strings."""
    cdef Py_ssize_t la = len(a)
    cdef Py_ssize_t lb = len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la

    cdef Py_ssize_t i, j
    cdef Py_ssize_t cost, best, cand
    cdef Py_UCS4 ca
    cdef Py_ssize_t *prev = <Py_ssize_t *> PyMem_Malloc((lb + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *curr = <Py_ssize_t *> PyMem_Malloc((lb + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *tmp
    if prev == NULL or curr == NULL:
        PyMem_Free(prev)
        PyMem_Free(curr)
        raise MemoryError()

    try:
        for j in range(lb + 1):
            prev[j] = j
        for i in range(1, la + 1):
            curr[0] = i
            ca = a[i - 1]
            for j in range(1, lb + 1):
                cost = 0 if ca == b[j - 1] else 1
                best = prev[j - 1] + cost
                cand = prev[j] + 1
                if cand < best:
                    best = cand
                cand = curr[j - 1] + 1
                if cand < best:
                    best = cand
                curr[j] = best
            tmp = prev
            prev = curr
            curr = tmp
        return prev[lb]
    finally:
        PyMem_Free(prev)
        PyMem_Free(curr)
