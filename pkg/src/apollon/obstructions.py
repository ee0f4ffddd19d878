"""Congruence classes, reciprocity invariants, and missing curvatures.

Reducing the curvature quadruples of a packing modulo 24 sorts every
primitive integral packing into one of six admissibility types (n, k): n
residue classes occur, k the smallest one coprime to 24.  Two finer
invariants refine the type: chi2, the common quadratic character of
tangent coprime curvatures, and chi4, a quartic character defined for
types (6,1) and (6,17).  Together they select a row of the obstruction
table, which names the square and fourth-power families that never occur
as curvatures.  Curvatures admissible mod 24 but absent up to a bound are
"missing"; missing curvatures outside every tabulated family are
"sporadic".

The same reduction mod m gives a finite 4-regular graph on quadruples
(the swap action), whose normalized spectrum measures expansion, and the
multiplicative closure of the swap matrices mod p^m compares the plain
group against the transpose-extended one.

Conventions fixed here (and cross-checked against missing-curvature
scans in the tests):

* chi2 samples tangent pairs (a, b), both positive, coprime to each
  other and to 6.  For (6,*) types the value is kronecker(a, b), which
  reciprocity makes symmetric since both entries are 1 mod 4.  For (8,*)
  types the two coprime classes are both 3 mod 4 and plain kronecker is
  antisymmetric; the value used is kronecker(2a, b), the unique twist
  symmetric on such pairs (their product is 5 mod 8).  Every valid pair
  in an (8,*) orbit joins the two classes, so the twist is well defined.
* chi4 samples circles of odd square curvature w^2 together with a
  tangent curvature c coprime to 6w; the value is kronecker(c, w), the
  real quartic character of c at the square curvature (for p | w with
  p = 3 mod 4 this is exactly the quartic residue character mod p^2; for
  split p it is the squared quartic symbol of Z[i]).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterator, Sequence

import numpy as np

from .circlespace import GENERATORS, mat_transpose
from .errors import (
    CapExceededError,
    InconsistentSamplesError,
    InvariantViolationError,
    UsageError,
)
from .numtheory import is_probable_prime, kronecker
from .packing import _validate_integral, enumerate_curvatures, is_reduced

_ADMISSIBLE = {
    (6, 1): frozenset({0, 1, 4, 9, 12, 16}),
    (6, 5): frozenset({0, 5, 8, 12, 20, 21}),
    (6, 13): frozenset({0, 4, 12, 13, 16, 21}),
    (6, 17): frozenset({0, 8, 9, 12, 17, 20}),
    (8, 7): frozenset({3, 6, 7, 10, 15, 18, 19, 22}),
    (8, 11): frozenset({2, 3, 6, 11, 14, 15, 18, 23}),
}

# (n, k, chi2) or (n, k, chi2, chi4) -> (square family units, fourth-power units)
_OBSTRUCTION_TABLE = {
    (6, 1, 1, 1): ((), ()),
    (6, 1, 1, -1): ((), (1, 4, 9, 36)),
    (6, 1, -1): ((1, 2, 3, 6), ()),
    (6, 5, 1): ((2, 3), ()),
    (6, 5, -1): ((1, 6), ()),
    (6, 13, 1): ((2, 6), ()),
    (6, 13, -1): ((1, 3), ()),
    (6, 17, 1, 1): ((3, 6), (9, 36)),
    (6, 17, 1, -1): ((3, 6), (1, 4)),
    (6, 17, -1): ((1, 2), ()),
    (8, 7, 1): ((3, 6), ()),
    (8, 7, -1): ((2,), ()),
    (8, 11, 1): ((), ()),
    (8, 11, -1): ((2, 3, 6), ()),
}

_QUARTIC_TYPES = ((6, 1), (6, 17))

_ORBIT_VERTEX_CAP = 2 * 10**6
_DENSE_SPECTRUM_MAX = 2000
_SPECTRUM_VERTEX_CAP = 10**5
_CLOSURE_MODULUS_CAP = 27
_CLOSURE_ELEMENT_CAP = 4 * 10**6
_SAMPLE_TARGET = 40
_SAMPLE_MINIMUM = 20


@dataclass(frozen=True)
class PackingType:
    """Admissibility type (n, k) with optional chi2/chi4 refinements.

    residues: how many classes mod 24 occur (6 or 8); least: the smallest
    class coprime to 24.  chi2 and chi4 stay None until sampled.
    """

    residues: int
    least: int
    chi2: int | None = None
    chi4: int | None = None

    def __post_init__(self):
        if (self.residues, self.least) not in _ADMISSIBLE:
            raise UsageError(f"no admissibility type ({self.residues}, {self.least})")
        if self.chi2 not in (None, 1, -1):
            raise UsageError("chi2 must be +1, -1, or None")
        if self.chi4 is not None:
            if (self.residues, self.least) not in _QUARTIC_TYPES:
                raise UsageError(
                    f"chi4 is undefined for type ({self.residues}, {self.least})"
                )
            if self.chi4 not in (1, -1):
                raise UsageError("chi4 must be +1, -1, or None")

    def admissible_residues(self) -> frozenset[int]:
        return _ADMISSIBLE[(self.residues, self.least)]


@dataclass(frozen=True)
class Family:
    """The obstruction family {unit * n**exponent : n in Z}."""

    unit: int
    exponent: int

    def contains(self, x: int) -> bool:
        if x <= 0 or x % self.unit:
            return False
        q, e = x // self.unit, self.exponent
        r = round(q ** (1.0 / e))
        return any(n**e == q for n in (r - 1, r, r + 1) if n >= 0)

    def __str__(self) -> str:
        head = "" if self.unit == 1 else str(self.unit)
        return f"{head}n^{self.exponent}"


@dataclass(frozen=True)
class ResidueGraph:
    """Quadruples mod `modulus` reachable from a root, under the four swaps.

    `swap_targets[v][i]` is the vertex index reached from vertex v by
    swapping coordinate i; every vertex has degree exactly 4 counting
    loops and multi-edges.
    """

    modulus: int
    vertices: tuple[tuple[int, int, int, int], ...]
    swap_targets: tuple[tuple[int, int, int, int], ...]

    def __post_init__(self):
        if len(self.vertices) != len(self.swap_targets):
            raise InvariantViolationError("vertex/adjacency length mismatch")

    def order(self) -> int:
        return len(self.vertices)

    def residue_set(self) -> frozenset[int]:
        return frozenset(x for v in self.vertices for x in v)

    def component_count(self) -> int:
        parent = list(range(len(self.vertices)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for v, targets in enumerate(self.swap_targets):
            for t in targets:
                parent[find(v)] = find(t)
        return len({find(v) for v in range(len(self.vertices))})

    def adjacency(self, sparse: bool = False):
        """Symmetric adjacency with loop and multi-edge multiplicities."""
        n = len(self.vertices)
        if not sparse:
            a = np.zeros((n, n), dtype=np.int64)
            for v, targets in enumerate(self.swap_targets):
                for t in targets:
                    a[v, t] += 1
            return a
        from scipy.sparse import coo_matrix

        rows = np.repeat(np.arange(n), 4)
        cols = np.array([t for targets in self.swap_targets for t in targets])
        data = np.ones(4 * n, dtype=np.float64)
        return coo_matrix((data, (rows, cols)), shape=(n, n)).tocsr()


def _swap_mod(quad: tuple[int, ...], i: int, m: int) -> tuple[int, ...]:
    new = list(quad)
    new[i] = (2 * (sum(quad) - quad[i]) - quad[i]) % m
    return tuple(new)


def residue_orbit(root: Sequence[int], m: int) -> ResidueGraph:
    """Close the root quadruple mod m under the four swaps.

    Vertices are ordered quadruples in first-visit (breadth-first) order.
    """
    vals = _validate_integral(root)
    if not is_reduced(vals):
        raise UsageError(f"{vals} is not reduced; apply reduce_to_root first")
    if not isinstance(m, int) or m < 1:
        raise UsageError("modulus must be a positive integer")
    start = tuple(c % m for c in vals)
    index = {start: 0}
    vertices = [start]
    queue = deque([start])
    while queue:
        quad = queue.popleft()
        for i in range(4):
            nxt = _swap_mod(quad, i, m)
            if nxt not in index:
                if len(vertices) >= _ORBIT_VERTEX_CAP:
                    raise CapExceededError(
                        f"residue orbit mod {m} exceeds {_ORBIT_VERTEX_CAP} vertices"
                    )
                index[nxt] = len(vertices)
                vertices.append(nxt)
                queue.append(nxt)
    targets = tuple(
        tuple(index[_swap_mod(quad, i, m)] for i in range(4)) for quad in vertices
    )
    return ResidueGraph(m, tuple(vertices), targets)


def _require_primitive(vals: tuple[int, ...]):
    g = 0
    for v in vals:
        g = gcd(g, abs(v))
    if g != 1:
        raise UsageError(f"{vals} is not primitive (gcd {g})")


def classify_type(root: Sequence[int]) -> PackingType:
    """Admissibility type (n, k) of a primitive reduced root, chi's unset."""
    vals = _validate_integral(root)
    _require_primitive(vals)
    residues = residue_orbit(vals, 24).residue_set()
    for (n, k), table_set in _ADMISSIBLE.items():
        if residues == table_set:
            return PackingType(n, k)
    raise InvariantViolationError(
        f"residue set {sorted(residues)} matches no admissibility row"
    )


# ---------------------------------------------------------------------------
# character sampling


def _bounded_quadruples(root: tuple[int, ...], bound: int) -> Iterator[tuple[int, ...]]:
    """All quadruples of the packing with entries <= bound, each once.

    Walks ascending swaps only; every quadruple is reached from the root
    by the reverse of its strictly descending reduction path.
    """
    seen = {tuple(sorted(root))}
    queue = deque([root])
    while queue:
        quad = queue.popleft()
        yield quad
        total = sum(quad)
        for i in range(4):
            v = 2 * (total - quad[i]) - quad[i]
            if v <= quad[i] or v > bound:
                continue
            new = list(quad)
            new[i] = v
            key = tuple(sorted(new))
            if key not in seen:
                seen.add(key)
                queue.append(tuple(new))


def _collect_samples(root, horizon, collector) -> dict:
    """Grow the walk bound until `collector` has filled enough samples."""
    samples: dict = {}
    bound = max(64, 8 * max(abs(c) for c in root))
    while True:
        bound = min(bound, horizon)
        for quad in _bounded_quadruples(root, bound):
            collector(quad, samples)
            if len(samples) >= _SAMPLE_TARGET:
                return samples
        if bound >= horizon:
            return samples
        bound *= 4


def chi2(root: Sequence[int], horizon: int = 10**5) -> int:
    """Common quadratic character of tangent coprime curvature pairs.

    Samples at least 20 distinct pairs (a, b), both positive and coprime
    to 6 and to each other, and insists they all give one value:
    kronecker(a, b) for (6,*) types, kronecker(2a, b) for (8,*) types
    (see the module docstring for why the twist is forced).
    """
    vals = _validate_integral(root)
    ptype = classify_type(vals)
    twist = 2 if ptype.residues == 8 else 1

    def collect(quad, samples):
        for i in range(4):
            for j in range(i + 1, 4):
                a, b = quad[i], quad[j]
                if a <= 0 or b <= 0 or gcd(a * b, 6) != 1 or gcd(a, b) != 1:
                    continue
                key = (min(a, b), max(a, b))
                if key not in samples:
                    samples[key] = kronecker(twist * a, b)

    samples = _collect_samples(vals, horizon, collect)
    if len(samples) < _SAMPLE_MINIMUM:
        raise CapExceededError(
            f"found {len(samples)} valid tangent pairs below {horizon}; "
            f"need {_SAMPLE_MINIMUM} (raise the horizon)"
        )
    values = set(samples.values())
    if len(values) != 1:
        raise InconsistentSamplesError("chi2 samples disagree", sorted(samples.items()))
    return values.pop()


def chi4(root: Sequence[int], horizon: int = 10**5) -> int:
    """Quartic character, defined for types (6,1) and (6,17) only.

    Samples circles of odd square curvature w^2 >= 9 with tangent
    curvatures c > 0, gcd(c, 6w) = 1, and insists kronecker(c, w) is one
    value across at least 20 distinct (c, w) pairs.  This is the real
    quartic character of c at the square curvature: exactly the quartic
    residue character mod p^2 on parts p = 3 mod 4, the squared Z[i]
    quartic symbol on split parts.
    """
    vals = _validate_integral(root)
    ptype = classify_type(vals)
    if (ptype.residues, ptype.least) not in _QUARTIC_TYPES:
        raise UsageError(
            f"chi4 is undefined for type ({ptype.residues}, {ptype.least})"
        )

    def collect(quad, samples):
        for i in range(4):
            v = quad[i]
            if v <= 0:
                continue
            w = isqrt(v)
            if w * w != v or w < 3 or w % 2 == 0:
                continue
            for j in range(4):
                c = quad[j]
                if j != i and c > 0 and gcd(c, 6 * w) == 1 and (c, w) not in samples:
                    samples[(c, w)] = kronecker(c, w)

    samples = _collect_samples(vals, horizon, collect)
    if len(samples) < _SAMPLE_MINIMUM:
        raise CapExceededError(
            f"found {len(samples)} square-curvature samples below {horizon}; "
            f"need {_SAMPLE_MINIMUM} (raise the horizon)"
        )
    values = set(samples.values())
    if len(values) != 1:
        raise InconsistentSamplesError("chi4 samples disagree", sorted(samples.items()))
    return values.pop()


def resolve_type(root: Sequence[int], horizon: int = 10**5) -> PackingType:
    """classify_type plus sampled chi2, and chi4 where the table needs it."""
    partial = classify_type(root)
    c2 = chi2(root, horizon)
    c4 = None
    if c2 == 1 and (partial.residues, partial.least) in _QUARTIC_TYPES:
        c4 = chi4(root, horizon)
    return PackingType(partial.residues, partial.least, c2, c4)


# ---------------------------------------------------------------------------
# obstruction families and scanning


def obstruction_families(ptype: PackingType) -> tuple[Family, ...]:
    """Table lookup: the power families a packing of this full type misses."""
    if ptype.chi2 is None:
        raise UsageError("obstruction lookup needs chi2")
    key = (ptype.residues, ptype.least, ptype.chi2)
    if key not in _OBSTRUCTION_TABLE:
        if ptype.chi4 is None:
            raise UsageError(f"type {key} needs chi4 for the obstruction lookup")
        key = key + (ptype.chi4,)
    squares, fourths = _OBSTRUCTION_TABLE[key]
    return tuple(
        [Family(u, 2) for u in squares] + [Family(u, 4) for u in fourths]
    )


def missing_curvatures(
    root: Sequence[int], n_max: int, horizon: int = 10**5
) -> tuple[set[int], set[int]]:
    """Admissible-but-absent curvatures up to n_max, and the sporadic rest.

    missing: positive integers <= n_max in an admissible class mod 24 that
    the packing never realizes.  sporadic: missing minus every obstruction
    family of the packing's resolved type.
    """
    vals = _validate_integral(root)
    orbit = enumerate_curvatures(vals, n_max)
    admissible = residue_orbit(vals, 24).residue_set()
    present = np.zeros(n_max + 1, dtype=bool)
    ks = [k for k in orbit.counts if 0 < k <= n_max]
    present[ks] = True
    xs = np.arange(n_max + 1)
    adm_mask = np.isin(xs % 24, sorted(admissible))
    adm_mask[0] = False
    missing = {int(x) for x in xs[adm_mask & ~present]}
    families = obstruction_families(resolve_type(vals, horizon))
    sporadic = {x for x in missing if not any(f.contains(x) for f in families)}
    return missing, sporadic


# ---------------------------------------------------------------------------
# spectra and closures


def graph_spectrum(g: ResidueGraph, top: int = 8) -> np.ndarray:
    """Sorted eigenvalues of the degree-normalized adjacency (in [-1, 1]).

    Dense full spectrum up to 2000 vertices; above that, the `top` largest
    eigenvalues by an iterative sparse solver.
    """
    n = g.order()
    if n > _SPECTRUM_VERTEX_CAP:
        raise CapExceededError(f"{n} vertices exceeds spectrum cap {_SPECTRUM_VERTEX_CAP}")
    if n <= _DENSE_SPECTRUM_MAX:
        a = g.adjacency(sparse=False).astype(np.float64) / 4.0
        return np.sort(np.linalg.eigvalsh(a))
    from scipy.sparse.linalg import eigsh

    a = g.adjacency(sparse=True) / 4.0
    k = min(top, n - 2)
    return np.sort(eigsh(a, k=k, which="LA", return_eigenvectors=False))


@dataclass(frozen=True)
class ClosureReport:
    """Orders of three nested matrix groups mod p^m.

    apollonian_order: closure of the four swap matrices.  super_order:
    the swaps together with their transposes (the dual inversions).
    ambient_order: the super set extended by the frame symmetries of the
    Descartes form (coordinate permutations and -I), a stand-in for the
    reduction of the whole integral orthogonal group.
    """

    prime: int
    exponent: int
    apollonian_order: int
    super_order: int
    ambient_order: int

    @property
    def equal(self) -> bool:
        """Whether the swap group already fills the ambient reduction."""
        return self.apollonian_order == self.ambient_order

    @property
    def super_equal(self) -> bool:
        return self.apollonian_order == self.super_order


def _frame_symmetries() -> list:
    from itertools import permutations

    mats = [
        tuple(tuple(1 if j == p[i] else 0 for j in range(4)) for i in range(4))
        for p in permutations(range(4))
    ]
    mats.append(tuple(tuple(-(i == j) for j in range(4)) for i in range(4)))
    return mats


def _matrix_closure(generators, q: int) -> int:
    """Order of the semigroup closure of `generators` mod q (a group here)."""
    gens = np.array(generators, dtype=np.int16) % q
    identity = np.eye(4, dtype=np.int16)
    seen = {identity.astype(np.uint8).tobytes()}
    frontier = identity[None]
    while len(frontier):
        fresh = []
        for lo in range(0, len(frontier), 32768):
            chunk = frontier[lo : lo + 32768]
            prods = np.einsum("fij,gjk->fgik", chunk, gens) % q
            for mat in prods.reshape(-1, 4, 4).astype(np.uint8):
                key = mat.tobytes()
                if key not in seen:
                    seen.add(key)
                    fresh.append(mat)
            if len(seen) > _CLOSURE_ELEMENT_CAP:
                raise CapExceededError(
                    f"matrix closure mod {q} exceeds {_CLOSURE_ELEMENT_CAP} elements"
                )
        frontier = np.array(fresh, dtype=np.int16) if fresh else np.empty((0, 4, 4), np.int16)
    return len(seen)


def strong_approx_check(p: int, m: int = 1) -> ClosureReport:
    """Compare swap-matrix closures mod p^m against their extensions.

    Computes three multiplicative closures of 4x4 matrices mod p^m: the
    four swaps; swaps plus transposes; and both plus the frame symmetries
    (coordinate permutations and -I).  The last is needed because every
    swap matrix is congruent to the identity mod 2, so the first two
    groups both collapse there and only the frame symmetries witness how
    far mod-2 reduction is from surjective.  At p = 5 all three orders
    coincide; at the troublesome small prime powers the swap closure is
    strictly smaller.
    """
    if not isinstance(p, int) or not is_probable_prime(p):
        raise UsageError(f"{p!r} is not prime")
    if not isinstance(m, int) or m < 1:
        raise UsageError("exponent must be a positive integer")
    q = p**m
    if q > _CLOSURE_MODULUS_CAP:
        raise CapExceededError(
            f"p^m = {q} exceeds closure modulus cap {_CLOSURE_MODULUS_CAP}"
        )
    supergens = list(GENERATORS) + [mat_transpose(g) for g in GENERATORS]
    plain = _matrix_closure(GENERATORS, q)
    extended = _matrix_closure(supergens, q)
    ambient = _matrix_closure(supergens + _frame_symmetries(), q)
    if not plain <= extended <= ambient:
        raise InvariantViolationError("matrix closures are not nested")
    return ClosureReport(p, m, plain, extended, ambient)
