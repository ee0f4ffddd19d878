"""Pure-Python walker for the curvature swap tree.

Same contract as the compiled apollon._orbit; this twin has no size limits
(Python integers) and is the fallback when the extension is unavailable or
inputs exceed the 64-bit guard.
"""

from __future__ import annotations


def count_curvatures(a, b, c, d, n_max, counts):
    """DFS the swap tree from a root quadruple, counting created curvatures.

    counts[v] is incremented once per circle of curvature v <= n_max created
    below the root; the caller accounts for the root's own four circles.
    Returns (circles, ties).  Raises ValueError if monotone growth fails.
    """
    return _walk((a, b, c, d), n_max, counts, -1)


def tangent_curvatures(a, b, c, d, pos, n_max, counts):
    """Like count_curvatures, but only circles tangent to root circle `pos`."""
    if not 0 <= pos <= 3:
        raise ValueError("pos must be 0..3")
    return _walk((a, b, c, d), n_max, counts, pos)


def _walk(root, n_max, counts, skip):
    circles = 0
    ties = 0
    stack = [(root, -1)]
    push = stack.append
    pop = stack.pop
    while stack:
        quad, last = pop()
        total = sum(quad)
        for i in range(4):
            if i == last or i == skip:
                continue
            old = quad[i]
            new = 2 * total - 3 * old
            if new < old:
                raise ValueError(
                    f"monotone growth violated: swap {i} of {quad} gives {new} < {old}"
                )
            if new == old:
                x, y, z = (quad[j] for j in range(4) if j != i)
                if x * y + y * z + x * z != 0:
                    raise ValueError(f"tie without symmetric triple at {quad}, swap {i}")
                ties += 1
            if new > n_max:
                continue
            circles += 1
            if new >= 0:
                counts[new] += 1
            child = list(quad)
            child[i] = new
            push((tuple(child), i))
    return circles, ties
