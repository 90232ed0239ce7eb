"""Cartan space with Minkowski metric, E-series Cartan matrices, root systems.

The rank-k Cartan space has basis h_0..h_k with inner product
diag(-1, 1, ..., 1) and dual basis eps_0..eps_k.  Simple roots are
eps_i - eps_{i+1} for i < k together with eps_0 - eps_1 - eps_2 - eps_3,
all orthogonal to the distinguished vector K = -3 h_0 + sum h_i.  Root
systems are enumerated for the finite range 3 <= k <= 8 by simple-root
closure; nothing is read from external tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

__all__ = [
    "CartanData",
    "CartanMatrix",
    "RootSystem",
    "ParabolicSplit",
    "cartan_data",
    "cartan_matrix",
    "positive_roots",
    "parabolic_split",
    "eps_on_h",
    "det_int",
    "FINITE_RANGE",
    "POSITIVE_ROOT_COUNTS",
    "NILRADICAL_DIMS",
]

FINITE_RANGE = range(3, 9)

# |Delta+| and nilradical dimensions for k = 3..8, keyed by k
POSITIVE_ROOT_COUNTS = {3: 4, 4: 10, 5: 20, 6: 36, 7: 63, 8: 120}
NILRADICAL_DIMS = {3: 1, 4: 4, 5: 10, 6: 21, 7: 42, 8: 92}

Vec = Tuple[int, ...]


def eps_on_h(eps: Sequence[int], h: Sequence[int]):
    """Pair a covector in eps-coordinates with a vector in h-coordinates.

    eps_0(h_0) = -1 and eps_i(h_i) = +1 for i >= 1, everything else zero.
    """
    if len(eps) != len(h):
        raise ValueError("coordinate length mismatch")
    return -eps[0] * h[0] + sum(e * a for e, a in zip(eps[1:], h[1:]))


def eps_inner(a: Sequence[int], b: Sequence[int]):
    """Minkowski inner product of two covectors in eps-coordinates."""
    return -a[0] * b[0] + sum(x * y for x, y in zip(a[1:], b[1:]))


@dataclass(frozen=True)
class CartanData:
    """Simple roots and coroots of the rank-k system inside h_k."""

    k: int
    metric_signs: Vec               # (-1, 1, ..., 1)
    simple_roots: Tuple[Vec, ...]   # eps-coordinates, length k+1 each
    simple_coroots: Tuple[Vec, ...]  # h-coordinates, length k+1 each
    K: Vec                          # h-coordinates

    def root(self, i: int) -> Vec:
        return self.simple_roots[i - 1]

    def coroot(self, i: int) -> Vec:
        return self.simple_coroots[i - 1]


@dataclass(frozen=True)
class CartanMatrix:
    k: int
    entries: Tuple[Vec, ...]

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i - 1][j - 1]

    def det(self) -> int:
        return det_int(self.entries)


@dataclass(frozen=True)
class RootSystem:
    k: int
    positive: Tuple[Vec, ...]   # simple-root coordinates, length k each

    @property
    def count(self) -> int:
        return len(self.positive)


@dataclass(frozen=True)
class ParabolicSplit:
    """Root split for the parabolic dropping the exceptional node."""

    k: int
    removed_node: int
    levi_positive: Tuple[Vec, ...]
    nilradical: Tuple[Vec, ...]
    dim_levi_semisimple: int
    dim_abelian: int
    dim_nilradical: int

    @property
    def dims(self) -> Tuple[int, int, int]:
        return (self.dim_levi_semisimple, self.dim_abelian,
                self.dim_nilradical)

    @property
    def dim_total(self) -> int:
        """Dimension of the ambient split algebra (center excluded)."""
        return self.dim_levi_semisimple + self.dim_abelian \
            + 2 * self.dim_nilradical


def cartan_data(k: int) -> CartanData:
    if k < 3:
        raise ValueError(f"cartan_data needs k >= 3, got {k}")
    n = k + 1

    def eps(*pairs: Tuple[int, int]) -> Vec:
        v = [0] * n
        for idx, c in pairs:
            v[idx] = c
        return tuple(v)

    roots = [eps((i, 1), (i + 1, -1)) for i in range(1, k)]
    roots.append(eps((0, 1), (1, -1), (2, -1), (3, -1)))
    coroots = [eps((i, 1), (i + 1, -1)) for i in range(1, k)]
    coroots.append(eps((0, 1), (1, -1), (2, -1), (3, -1)))
    K = tuple([-3] + [1] * k)
    data = CartanData(k, tuple([-1] + [1] * k), tuple(roots),
                      tuple(coroots), K)
    for i, alpha in enumerate(data.simple_roots, start=1):
        if eps_on_h(alpha, K) != 0:
            raise AssertionError(f"alpha_{i} not orthogonal to K at k={k}")
    return data


def cartan_matrix(k: int) -> CartanMatrix:
    """Generalized Cartan matrix with c_ji = alpha_i(alpha_j coroot)."""
    data = cartan_data(k)
    entries = tuple(
        tuple(eps_on_h(data.root(i), data.coroot(j)) for i in range(1, k + 1))
        for j in range(1, k + 1))
    return CartanMatrix(k, entries)


def det_int(matrix: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix, exact (fraction-free Bareiss)."""
    n = len(matrix)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in matrix]
    sign = 1
    prev = 1
    for i in range(n - 1):
        if a[i][i] == 0:
            for r in range(i + 1, n):
                if a[r][i]:
                    a[i], a[r] = a[r], a[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
            a[r][i] = 0
        prev = a[i][i]
    return sign * a[n - 1][n - 1]


def positive_roots(k: int) -> RootSystem:
    """Enumerate the positive roots by closure from the simple roots.

    In the simply-laced finite range, alpha + alpha_i is a root iff the
    string length q = p - <alpha, alpha_i coroot> is positive, where p is
    how far the string extends downward; heights are processed in order so
    the downward string is always known.
    """
    if k not in FINITE_RANGE:
        raise ValueError(
            f"root enumeration supports 3 <= k <= 8 (finite type); got {k}")
    C = cartan_matrix(k).entries
    simple = [tuple(1 if j == i else 0 for j in range(k)) for i in range(k)]
    known = set(simple)
    frontier = list(simple)
    while frontier:
        next_frontier = []
        for alpha in frontier:
            for i in range(k):
                pairing = sum(alpha[j] * C[i][j] for j in range(k))
                p = 0
                down = list(alpha)
                while True:
                    down[i] -= 1
                    if tuple(down) not in known:
                        break
                    p += 1
                q = p - pairing
                if q >= 1:
                    up = list(alpha)
                    up[i] += 1
                    t = tuple(up)
                    if t not in known:
                        known.add(t)
                        next_frontier.append(t)
        frontier = next_frontier
    ordered = sorted(known, key=lambda r: (sum(r), r))
    system = RootSystem(k, tuple(ordered))
    _validate_roots(system)
    return system


def _validate_roots(system: RootSystem) -> None:
    data = cartan_data(system.k)
    for root in system.positive:
        eps_vec = [0] * (system.k + 1)
        for m, alpha in zip(root, data.simple_roots):
            for idx, c in enumerate(alpha):
                eps_vec[idx] += m * c
        if eps_inner(eps_vec, eps_vec) != 2:
            raise AssertionError(
                f"root {root} has squared length != 2 at k={system.k}")


def parabolic_split(k: int) -> ParabolicSplit:
    """Split the positive roots by the coefficient of the exceptional node.

    Levi roots omit the removed node; the nilradical is the rest.  The
    one-dimensional abelian factor follows the finite-range convention; the
    extra central direction of the ambient algebra is not counted here.
    """
    system = positive_roots(k)
    levi = tuple(r for r in system.positive if r[k - 1] == 0)
    nil = tuple(r for r in system.positive if r[k - 1] != 0)
    dim_m = (k - 1) + 2 * len(levi)
    if dim_m != k * k - 1:
        raise AssertionError(
            f"Levi dimension {dim_m} != k^2-1 at k={k}; root closure broken")
    return ParabolicSplit(k, k, levi, nil, dim_m, 1, len(nil))
