"""Constructors for the varieties in play: pfaffian Grassmannians and their
secants, rational normal curves, the spinor-embedded Lagrangian Grassmannian
LG+(5,10), the symplectic Grassmannian of isotropic 3-planes in k^6, plus
interpolation of defining equations from parametrizations and random linear
sections.

All constructions are exact over F_p and deterministic given a seed.  The
LG+(5,10) model is interpolated from the skew-matrix chart rather than
hard-coded, and certified afterwards by its dimension, degree and Betti data.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from . import linalg
from .groebner import Ideal
from .poly import LinearSubstitution, Polynomial, Ring, evaluation_matrix


class VarietyError(Exception):
    pass


class OddSubset(VarietyError):
    pass


class TooLarge(VarietyError):
    pass


class RankDeficient(VarietyError):
    pass


# ---------------------------------------------------------------------------
# pfaffians


@dataclass
class SkewMatrixOfForms:
    """Antisymmetric matrix of homogeneous forms of a common degree."""

    ring: Ring
    entries: list[list[Polynomial]]

    def __post_init__(self):
        m = len(self.entries)
        for i in range(m):
            if len(self.entries[i]) != m:
                raise ValueError("matrix must be square")
            if not self.entries[i][i].is_zero():
                raise ValueError("diagonal must vanish")
            for j in range(m):
                if self.entries[i][j] != -self.entries[j][i]:
                    raise ValueError("matrix must be antisymmetric")

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]


def skew_from_upper(ring: Ring, upper: dict[tuple[int, int], Polynomial],
                    size: int) -> SkewMatrixOfForms:
    zero = ring.zero()
    entries = [[zero for _ in range(size)] for _ in range(size)]
    for (i, j), f in upper.items():
        if not i < j:
            raise ValueError("upper-triangular indices required")
        entries[i][j] = f
        entries[j][i] = -f
    return SkewMatrixOfForms(ring, entries)


def pfaffian(A: SkewMatrixOfForms, rows: list[int] | None = None) -> Polynomial:
    """Pfaffian of the principal submatrix on the given (even-size) rows."""
    if rows is None:
        rows = list(range(A.size))
    rows = list(rows)
    if len(rows) % 2 != 0:
        raise OddSubset(f"pfaffian needs an even index subset, got {len(rows)}")
    return _pf(A, tuple(sorted(rows)))


def _pf(A: SkewMatrixOfForms, rows: tuple[int, ...]) -> Polynomial:
    if not rows:
        return A.ring.one()
    if len(rows) == 2:
        return A.entries[rows[0]][rows[1]]
    total = A.ring.zero()
    first = rows[0]
    rest = rows[1:]
    for k, j in enumerate(rest):
        entry = A.entries[first][j]
        if entry.is_zero():
            continue
        sub = tuple(r for r in rest if r != j)
        term = entry * _pf(A, sub)
        total = total + (term if k % 2 == 0 else -term)
    return total


def pfaffian_of_field_matrix(M: np.ndarray, p: int) -> int:
    """Pfaffian of a skew matrix with field entries (recursive expansion)."""
    m = M.shape[0]
    if m % 2 != 0:
        raise OddSubset("even size required")

    def rec(rows: tuple[int, ...]) -> int:
        if not rows:
            return 1
        total = 0
        first, rest = rows[0], rows[1:]
        for k, j in enumerate(rest):
            a = int(M[first, j]) % p
            if a == 0:
                continue
            sub = tuple(r for r in rest if r != j)
            term = a * rec(sub) % p
            total = (total + term) if k % 2 == 0 else (total - term)
        return total % p

    return rec(tuple(range(m)))


def pair_index(n: int) -> dict[tuple[int, int], int]:
    """Lexicographic numbering of pairs 0 <= i < j < n."""
    return {pair: k for k, pair in enumerate(combinations(range(n), 2))}


def generic_skew_matrix(n: int, p: int) -> tuple[Ring, SkewMatrixOfForms]:
    """Ring in the C(n,2) Pluecker variables and the generic skew matrix."""
    pairs = list(combinations(range(n), 2))
    names = [f"w{i}{j}" for i, j in pairs]
    ring = Ring(len(pairs), p, names)
    upper = {pair: ring.variable(k) for k, pair in enumerate(pairs)}
    return ring, skew_from_upper(ring, upper, n)


def grassmannian_g2n_ideal(n: int, p: int) -> Ideal:
    """Ideal of G(2,n) in Pluecker coordinates: all 4x4 pfaffians."""
    if n < 4:
        raise ValueError("need n >= 4")
    ring, A = generic_skew_matrix(n, p)
    gens = [pfaffian(A, list(rows)) for rows in combinations(range(n), 4)]
    return Ideal(ring, gens)


def secant_pfaffian_ideal(n: int, m: int, p: int) -> Ideal:
    """Ideal of the m-secant variety of G(2,n): all (2m+4)-pfaffians."""
    size = 2 * m + 4
    if size > n:
        raise TooLarge(f"{size}-pfaffians do not exist in a {n}x{n} matrix")
    ring, A = generic_skew_matrix(n, p)
    gens = [pfaffian(A, list(rows)) for rows in combinations(range(n), size)]
    return Ideal(ring, gens)


def plucker_point_of_plane(basis: np.ndarray, p: int) -> np.ndarray:
    """Pluecker coordinates (2x2 minors) of the rowspace of a 2 x n matrix."""
    n = basis.shape[1]
    out = []
    for i, j in combinations(range(n), 2):
        out.append((int(basis[0, i]) * int(basis[1, j])
                    - int(basis[0, j]) * int(basis[1, i])) % p)
    return np.array(out, dtype=np.int64)


def rational_normal_curve_ideal(n: int, p: int) -> Ideal:
    """2x2 minors of the Hankel matrix [[x0..x_{n-1}],[x1..x_n]] in P^n."""
    if n < 2:
        raise ValueError("need n >= 2")
    ring = Ring(n + 1, p)
    x = ring.variables()
    gens = []
    for i in range(n):
        for j in range(i + 1, n):
            gens.append(x[i] * x[j + 1] - x[i + 1] * x[j])
    return Ideal(ring, gens)


# ---------------------------------------------------------------------------
# parametrizations and interpolation


@dataclass
class Parametrization:
    """Map from parameter vectors to ambient projective points."""

    num_params: int
    ambient: int  # number of homogeneous coordinates
    func: object  # callable params(np.ndarray) -> coords(np.ndarray)

    def sample(self, p: int, rng: np.random.Generator, tries: int = 64) -> np.ndarray:
        for _ in range(tries):
            params = rng.integers(0, p, size=self.num_params, dtype=np.int64)
            point = np.asarray(self.func(params), dtype=np.int64) % p
            if np.any(point):
                return point
        raise VarietyError("parametrization kept returning the zero vector")

    def sample_many(self, count: int, p: int, rng: np.random.Generator) -> np.ndarray:
        return np.array([self.sample(p, rng) for _ in range(count)], dtype=np.int64)


def ideal_by_interpolation(param: Parametrization, ring: Ring, d: int,
                           samples: int | None = None,
                           seed: int = 0) -> list[Polynomial]:
    """Basis of degree-d forms vanishing on the image of the parametrization.

    samples defaults to 4 * C(n+d, d) image points; the kernel of the
    evaluation matrix then equals the space of all degree-d forms on the
    image closure with overwhelming probability.
    """
    needed = comb(ring.n - 1 + d, d)
    if samples is None:
        samples = 4 * needed
    if samples < 2 * needed:
        raise ValueError("too few samples for a trustworthy kernel")
    rng = np.random.default_rng(seed)
    pts = param.sample_many(samples, ring.p, rng)
    M = evaluation_matrix(ring, pts, d)
    kernel = linalg.kernel_basis(M, ring.p)
    # kernel rows are coefficient vectors over degree-d monomials (ring order)
    return [ring.from_coeff_vector(row, d) for row in kernel]


# ---------------------------------------------------------------------------
# the Lagrangian Grassmannian LG+(5,10) in P^15


EVEN_SUBSETS_5 = ([()]
                  + list(combinations(range(5), 2))
                  + [tuple(s for s in range(5) if s != k) for k in range(5)])


def spinor_coordinate_names() -> list[str]:
    names = ["s"]
    names += [f"s{i}{j}" for i, j in combinations(range(5), 2)]
    names += [f"t{k}" for k in range(5)]
    return names


def lagrangian_spinor_chart(A: np.ndarray, p: int) -> np.ndarray:
    """Spinor coordinates of the Lagrangian rowspace(I_5 | A), A skew 5x5.

    Layout: [1; the ten entries a_ij (i<j, lex); the five principal
    4x4 pfaffians omitting index k, signed by (-1)^k].
    """
    A = np.asarray(A, dtype=np.int64) % p
    if A.shape != (5, 5) or np.any((A + A.T) % p != 0):
        raise ValueError("need a skew-symmetric 5x5 matrix over F_p")
    coords = [1]
    for i, j in combinations(range(5), 2):
        coords.append(int(A[i, j]) % p)
    for k in range(5):
        idx = [r for r in range(5) if r != k]
        sub = A[np.ix_(idx, idx)]
        val = pfaffian_of_field_matrix(sub, p)
        if k % 2 == 1:
            val = (-val) % p
        coords.append(val)
    return np.array(coords, dtype=np.int64)


def skew_from_params(params: np.ndarray) -> np.ndarray:
    """Fill a skew 5x5 matrix from 10 upper-triangular parameters."""
    A = np.zeros((5, 5), dtype=np.int64)
    for k, (i, j) in enumerate(combinations(range(5), 2)):
        A[i, j] = params[k]
        A[j, i] = -params[k]
    return A


def lagrangian_chart_parametrization(p: int) -> Parametrization:
    def func(params):
        return lagrangian_spinor_chart(skew_from_params(params), p)

    return Parametrization(num_params=10, ambient=16, func=func)


@lru_cache(maxsize=4)
def lagrangian_grassmannian_ring(p: int) -> Ring:
    return Ring(16, p, spinor_coordinate_names())


@lru_cache(maxsize=4)
def lagrangian_grassmannian_quadrics(p: int) -> tuple[Polynomial, ...]:
    """The ten quadrics cutting out LG+(5,10) in P^15, by chart interpolation."""
    ring = lagrangian_grassmannian_ring(p)
    quadrics = ideal_by_interpolation(lagrangian_chart_parametrization(p),
                                      ring, 2, seed=20101)
    if len(quadrics) != 10:
        raise VarietyError(f"expected 10 quadrics for LG+(5,10), got {len(quadrics)}")
    return tuple(quadrics)


def lagrangian_grassmannian_ideal(p: int) -> Ideal:
    ring = lagrangian_grassmannian_ring(p)
    return Ideal(ring, list(lagrangian_grassmannian_quadrics(p)))


# ---------------------------------------------------------------------------
# the symplectic Grassmannian G_omega(3,6) in P^13


def _symplectic_plucker_point(S: np.ndarray, p: int) -> np.ndarray:
    """Pluecker coordinates in wedge^3 k^6 of rowspace(I_3 | S), S symmetric."""
    basis = np.concatenate([np.eye(3, dtype=np.int64), S % p], axis=1)
    out = []
    for cols in combinations(range(6), 3):
        sub = basis[:, cols]
        out.append(linalg.det(sub, p))
    return np.array(out, dtype=np.int64)


def symplectic_chart_parametrization(p: int) -> Parametrization:
    def func(params):
        S = np.zeros((3, 3), dtype=np.int64)
        S[0, 0], S[1, 1], S[2, 2] = params[0], params[1], params[2]
        S[0, 1] = S[1, 0] = params[3]
        S[0, 2] = S[2, 0] = params[4]
        S[1, 2] = S[2, 1] = params[5]
        return _symplectic_plucker_point(S, p)

    return Parametrization(num_params=6, ambient=20, func=func)


@lru_cache(maxsize=4)
def symplectic_grassmannian_ideal(p: int, seed: int = 31415) -> Ideal:
    """Quadric ideal of G_omega(3,6) inside the P^13 spanned by its image.

    The wedge^3 image of the isotropic chart spans a 14-dimensional linear
    space; points are re-coordinatized against 14 independent sample points
    and the quadrics are interpolated there.
    """
    param = symplectic_chart_parametrization(p)
    rng = np.random.default_rng(seed)
    # find 14 samples spanning the linear span
    pts = param.sample_many(200, p, rng)
    R, pivots = linalg.rref(pts, p)
    span = R[: len(pivots)]
    if len(pivots) != 14:
        raise VarietyError(f"expected a 14-dimensional span, got {len(pivots)}")

    def restricted(params):
        q = np.asarray(param.func(params)) % p
        return linalg.solve(span.T, q, p)

    small = Parametrization(num_params=6, ambient=14, func=restricted)
    ring = Ring(14, p, [f"y{i}" for i in range(14)])
    quadrics = ideal_by_interpolation(small, ring, 2, seed=seed + 1)
    return Ideal(ring, quadrics)


# ---------------------------------------------------------------------------
# linear sections


def linear_section(I: Ideal, n: int, seed: int = 0,
                   max_tries: int = 5) -> Ideal:
    """Ideal of the section of V(I) by a random linear P^n inside P^N.

    Substitutes a full-rank (N+1) x (n+1) parametrization of the subspace
    into every generator; raises RankDeficient when the random matrix
    repeatedly fails to have full rank.
    """
    ring = I.ring
    if n + 1 >= ring.n:
        raise ValueError("target dimension must be smaller than ambient")
    rng = np.random.default_rng(seed)
    target = Ring(n + 1, ring.p, [f"y{i}" for i in range(n + 1)])
    for _ in range(max_tries):
        M = rng.integers(0, ring.p, size=(ring.n, n + 1), dtype=np.int64)
        if linalg.rank(M, ring.p) == n + 1:
            sub = LinearSubstitution(ring, target, M)
            return Ideal(target, [sub.apply(g) for g in I.gens])
    raise RankDeficient("could not draw a full-rank linear subspace")
