# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_kernel_py.search_rows`` over int64.

Callers must ensure int64 safety before dispatching here (see
``_kernel.int64_safe``); the pure-Python module remains the reference
implementation and the fallback for everything else.
"""

from libc.string cimport memcpy

BACKEND_NAME = "cython"

DEF MAX_L = 8
DEF MAX_ROWS = 64
DEF MAX_POOL = 4096


cdef bint _is_psd(long long *a, int n) nogil:
    # fraction-free symmetric elimination on a copy held by the caller
    cdef int alive[MAX_L]
    cdef int count = n
    cdef int i, j, k, ii, jj
    cdef long long akk, prev = 1
    for i in range(n):
        alive[i] = i
    while count > 0:
        k = alive[0]
        akk = a[k * n + k]
        if akk < 0:
            return False
        if akk == 0:
            for ii in range(count):
                if a[k * n + alive[ii]] != 0:
                    return False
            for ii in range(count - 1):
                alive[ii] = alive[ii + 1]
            count -= 1
            continue
        for ii in range(1, count):
            i = alive[ii]
            for jj in range(1, count):
                j = alive[jj]
                a[i * n + j] = (akk * a[i * n + j] - a[i * n + k] * a[k * n + j]) // prev
        prev = akk
        for ii in range(count - 1):
            alive[ii] = alive[ii + 1]
        count -= 1
    return True


cdef struct SearchState:
    int l
    int pool_size
    int min_rows
    int max_rows
    long long res[MAX_L * MAX_L]
    long long pool[MAX_POOL]
    int chosen[MAX_ROWS]
    int depth


cdef void _recurse(SearchState *st, int start, list found):
    cdef int l = st.l
    cdef int i, j, idx
    cdef bint zero = True
    cdef long long scratch[MAX_L * MAX_L]
    cdef long long *r
    for i in range(l * l):
        if st.res[i] != 0:
            zero = False
            break
    if zero:
        if st.depth >= st.min_rows:
            found.append(
                tuple(
                    tuple(
                        st.pool[st.chosen[i] * l + j] for j in range(l)
                    )
                    for i in range(st.depth)
                )
            )
        return
    if st.depth >= st.max_rows:
        return
    for idx in range(start, st.pool_size):
        r = &st.pool[idx * l]
        zero = True
        for j in range(l):
            if r[j] * r[j] > st.res[j * l + j]:
                zero = False
                break
        if not zero:
            continue
        for i in range(l):
            for j in range(l):
                scratch[i * l + j] = st.res[i * l + j] - r[i] * r[j]
        if not _is_psd(scratch, l):
            continue
        for i in range(l):
            for j in range(l):
                st.res[i * l + j] -= r[i] * r[j]
        st.chosen[st.depth] = idx
        st.depth += 1
        _recurse(st, idx, found)
        st.depth -= 1
        for i in range(l):
            for j in range(l):
                st.res[i * l + j] += r[i] * r[j]


def search_rows(c, pool, int min_rows, int max_rows):
    """Same contract as ``_kernel_py.search_rows``; int64 arithmetic."""
    cdef SearchState st
    cdef int l = len(c)
    cdef int psize = len(pool)
    cdef int i, j
    if l > MAX_L or psize > MAX_POOL or max_rows > MAX_ROWS:
        raise ValueError("problem exceeds compiled kernel limits")
    st.l = l
    st.pool_size = psize
    st.min_rows = min_rows
    st.max_rows = max_rows
    st.depth = 0
    for i in range(l):
        for j in range(l):
            st.res[i * l + j] = c[i][j]
    for i in range(psize):
        for j in range(l):
            st.pool[i * l + j] = pool[i][j]
    found: list = []
    _recurse(&st, 0, found)
    return found
