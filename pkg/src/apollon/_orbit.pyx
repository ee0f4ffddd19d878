# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled walker for the curvature swap tree.

Same contract as apollon._orbit_py (the pure-Python twin); apollon.packing
picks whichever is importable.  Works on C long long, so callers must keep
inputs within the 64-bit guard checked in apollon.packing.
"""

from libc.stdlib cimport free, malloc

cdef struct Frame:
    long long q[4]
    int last

DEF STACK_MAX = 131072


def count_curvatures(long long a, long long b, long long c, long long d,
                     long long n_max, unsigned int[::1] counts):
    """DFS the swap tree from a root quadruple, counting created curvatures.

    counts[v] is incremented once per circle of curvature v <= n_max created
    below the root; the caller accounts for the root's own four circles.
    Returns (circles, ties).  Raises ValueError if monotone growth fails.
    """
    return _walk(a, b, c, d, n_max, counts, -1)


def tangent_curvatures(long long a, long long b, long long c, long long d,
                       int pos, long long n_max, unsigned int[::1] counts):
    """Like count_curvatures, but only circles tangent to root circle `pos`.

    A created circle is tangent to the tracked circle exactly when the
    tracked circle is among the three retained; once a swap replaces it the
    whole subtree is irrelevant and is skipped.
    """
    if pos < 0 or pos > 3:
        raise ValueError("pos must be 0..3")
    return _walk(a, b, c, d, n_max, counts, pos)


cdef inline long long _retained_pairsum(Frame *f, int i) noexcept:
    """Sum of pairwise products of the three entries other than q[i]."""
    cdef long long x, y, z
    if i == 0:
        x, y, z = f.q[1], f.q[2], f.q[3]
    elif i == 1:
        x, y, z = f.q[0], f.q[2], f.q[3]
    elif i == 2:
        x, y, z = f.q[0], f.q[1], f.q[3]
    else:
        x, y, z = f.q[0], f.q[1], f.q[2]
    return x * y + y * z + x * z


cdef _walk(long long a, long long b, long long c, long long d,
           long long n_max, unsigned int[::1] counts, int skip):
    cdef Frame *stack = <Frame *> malloc(STACK_MAX * sizeof(Frame))
    if stack is NULL:
        raise MemoryError()
    cdef long long circles = 0, ties = 0
    cdef long long total, new, old
    cdef int top = 0, i
    cdef Frame f
    stack[0].q[0], stack[0].q[1], stack[0].q[2], stack[0].q[3] = a, b, c, d
    stack[0].last = -1
    top = 1
    try:
        while top:
            top -= 1
            f = stack[top]
            total = f.q[0] + f.q[1] + f.q[2] + f.q[3]
            for i in range(4):
                if i == f.last or i == skip:
                    continue
                old = f.q[i]
                new = 2 * total - 3 * old
                if new < old:
                    raise ValueError(
                        f"monotone growth violated: swap {i} of "
                        f"({f.q[0]},{f.q[1]},{f.q[2]},{f.q[3]}) gives {new} < {old}")
                if new == old:
                    # equal growth only happens when the retained triple has
                    # pairwise products summing to zero (symmetric gap)
                    if _retained_pairsum(&f, i) != 0:
                        raise ValueError(
                            f"tie without symmetric triple at "
                            f"({f.q[0]},{f.q[1]},{f.q[2]},{f.q[3]}), swap {i}")
                    ties += 1
                if new > n_max:
                    continue
                circles += 1
                if new >= 0:
                    counts[new] += 1
                if top >= STACK_MAX:
                    raise ValueError("swap-tree stack overflow")
                stack[top] = f
                stack[top].q[i] = new
                stack[top].last = i
                top += 1
    finally:
        free(stack)
    return circles, ties
