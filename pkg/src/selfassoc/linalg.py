"""Exact dense linear algebra and quadratic-form algorithms over a prime field.

Everything works on numpy int64 arrays with entries reduced mod p.  Scalars
are plain python ints in [0, p); a "vector" is a 1-d array, a basis is the
list of rows of a 2-d array.  p must be an odd prime different from 3 (the
tangent-space computation divides by 3, orthogonal bases divide by 2).

Products of two residues stay below 2^62, so single products and outer
products are safe in int64; matrix products must go through matmul_mod,
which splits one factor into 16-bit limbs to avoid overflow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_PRIME = 2147483647
SMALL_PRIME = 101

_LIMB = 1 << 16


class LinalgError(Exception):
    pass


class DegenerateForm(LinalgError):
    pass


class NotSplit(LinalgError):
    """The form has no Lagrangean subspace over F_p."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_prime(p: int) -> int:
    """Validate the field characteristic: odd prime, not 3."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p in (2, 3):
        raise ValueError(f"characteristic {p} is not supported")
    return p


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("inverse of 0 mod p")
    return pow(a, p - 2, p)


def is_square(a: int, p: int) -> bool:
    """Euler criterion; 0 counts as a square."""
    a %= p
    return a == 0 or pow(a, (p - 1) // 2, p) == 1


def sqrt_mod(a: int, p: int) -> int:
    """One square root of a mod p; raises ValueError for non-residues."""
    a %= p
    if a == 0:
        return 0
    if not is_square(a, p):
        raise ValueError("not a square")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while is_square(z, p):
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def asarray_mod(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact (a @ b) % p; int64-overflow safe for inner dimensions < 2^16."""
    a = asarray_mod(a, p)
    b = asarray_mod(b, p)
    inner = a.shape[-1]
    if inner == 0:
        shape = a.shape[:-1] + b.shape[1:] if b.ndim > 1 else a.shape[:-1]
        return np.zeros(shape, dtype=np.int64)
    if inner >= _LIMB:
        k = inner // 2
        left = matmul_mod(a[..., :k], b[:k], p)
        right = matmul_mod(a[..., k:], b[k:], p)
        return (left + right) % p
    a_hi, a_lo = np.divmod(a, _LIMB)
    return ((a_hi @ b % p) * _LIMB + a_lo @ b) % p


def rref(M: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form and pivot columns, row space preserved."""
    R = asarray_mod(M, p).copy()
    if R.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = R[r] * inv_mod(int(R[r, c]), p) % p
        col = R[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            R[rows] = (R[rows] - np.outer(col[rows], R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def _echelon_pivots(M: np.ndarray, p: int) -> list[int]:
    R = M.copy()
    m, n = R.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        inv = inv_mod(int(R[r, c]), p)
        below = R[r + 1:, c]
        rows = np.nonzero(below)[0]
        if rows.size:
            factors = below[rows] * inv % p
            R[r + 1 + rows, c:] = (R[r + 1 + rows, c:]
                                   - factors[:, None] * R[r, c:]) % p
        pivots.append(c)
        r += 1
    return pivots


def rank(M: np.ndarray, p: int) -> int:
    M = asarray_mod(M, p)
    if M.ndim != 2 or min(M.shape) == 0:
        return 0
    return len(_echelon_pivots(M, p))


def kernel_basis(M: np.ndarray, p: int) -> np.ndarray:
    """Rows form a basis of the right kernel {v : Mv = 0}."""
    M = asarray_mod(M, p)
    m, n = M.shape
    R, pivots = rref(M, p)
    free = [j for j in range(n) if j not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, c in enumerate(pivots):
            basis[k, c] = (-int(R[r, f])) % p
    return basis


def solve(M: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """One solution of Mx = b; raises LinalgError if inconsistent."""
    M = asarray_mod(M, p)
    b = asarray_mod(b, p).reshape(-1)
    aug = np.concatenate([M, b[:, None]], axis=1)
    R, pivots = rref(aug, p)
    n = M.shape[1]
    if n in pivots:
        raise LinalgError("inconsistent linear system")
    x = np.zeros(n, dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = R[r, n]
    return x


def inv_matrix(M: np.ndarray, p: int) -> np.ndarray:
    M = asarray_mod(M, p)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("square matrix required")
    aug = np.concatenate([M, np.eye(n, dtype=np.int64)], axis=1)
    R, pivots = rref(aug, p)
    if pivots != list(range(n)):
        raise LinalgError("matrix is singular")
    return R[:, n:]


def det(M: np.ndarray, p: int) -> int:
    M = asarray_mod(M, p).copy()
    n = M.shape[0]
    result = 1
    for c in range(n):
        nz = np.nonzero(M[c:, c])[0]
        if nz.size == 0:
            return 0
        i = c + int(nz[0])
        if i != c:
            M[[c, i]] = M[[i, c]]
            result = -result
        result = result * int(M[c, c]) % p
        inv = inv_mod(int(M[c, c]), p)
        below = M[c + 1:, c]
        rows = np.nonzero(below)[0]
        if rows.size:
            factors = below[rows] * inv % p
            M[c + 1 + rows, c:] = (M[c + 1 + rows, c:]
                                   - factors[:, None] * M[c, c:]) % p
    return result % p


def row_space_contains(M: np.ndarray, v: np.ndarray, p: int) -> bool:
    stacked = np.vstack([M, v.reshape(1, -1)])
    return rank(M, p) == rank(stacked, p)


def same_row_space(A: np.ndarray, B: np.ndarray, p: int) -> bool:
    ra, rb = rank(A, p), rank(B, p)
    return ra == rb == rank(np.vstack([A, B]), p)


@dataclass(frozen=True)
class SymmetricForm:
    """Symmetric bilinear form given by its Gram matrix over F_p."""

    gram: np.ndarray
    p: int

    def __post_init__(self):
        g = asarray_mod(self.gram, self.p)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError("Gram matrix must be square")
        if not np.array_equal(g, g.T % self.p):
            raise ValueError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", g)
        g.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def rank(self) -> int:
        return rank(self.gram, self.p)

    def is_nondegenerate(self) -> bool:
        return self.rank() == self.dim

    def apply(self, u: np.ndarray, v: np.ndarray) -> int:
        gv = matmul_mod(self.gram, asarray_mod(v, self.p), self.p)
        return int(matmul_mod(asarray_mod(u, self.p), gv, self.p))

    def restrict(self, B: np.ndarray) -> np.ndarray:
        """Gram matrix of the form on the span of the rows of B."""
        B = asarray_mod(B, self.p)
        return matmul_mod(matmul_mod(B, self.gram, self.p), B.T, self.p)


def identity_form(n: int, p: int) -> SymmetricForm:
    return SymmetricForm(np.eye(n, dtype=np.int64), p)


def hyperbolic_gram(n: int, p: int) -> np.ndarray:
    """Gram of the standard split form on k^2n: Q(e_i, f_j) = delta_ij."""
    g = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for i in range(n):
        g[i, n + i] = g[n + i, i] = 1
    return g


def random_nondegenerate_form(n: int, p: int, rng: np.random.Generator) -> SymmetricForm:
    while True:
        A = rng.integers(0, p, size=(n, n), dtype=np.int64)
        g = (A + A.T) % p
        form = SymmetricForm(g, p)
        if form.is_nondegenerate():
            return form


def random_split_form(n: int, p: int, rng: np.random.Generator) -> SymmetricForm:
    """Random nondegenerate form of even dimension n that splits over F_p.

    Split is equivalent to (-1)^(n/2) * det being a square; redraw until so.
    """
    if n % 2 != 0:
        raise ValueError("split forms have even dimension")
    while True:
        form = random_nondegenerate_form(n, p, rng)
        sign = 1 if (n // 2) % 2 == 0 else -1
        if is_square(sign * det(form.gram, p) % p, p):
            return form


def orthogonal_basis(Q: SymmetricForm, rng: np.random.Generator) -> np.ndarray:
    """Rows b_i with Q(b_i, b_j) = 0 for i != j and Q(b_i, b_i) != 0.

    Randomized: independent draws give projectively distinct bases with
    high probability.  Raises DegenerateForm when rank(Q) < dim.
    """
    p = Q.p
    if not Q.is_nondegenerate():
        raise DegenerateForm(f"rank {Q.rank()} < dim {Q.dim}")
    n = Q.dim
    basis = np.zeros((n, n), dtype=np.int64)
    complement = np.eye(n, dtype=np.int64)
    for k in range(n):
        m = complement.shape[0]
        v = None
        for _ in range(64):
            c = rng.integers(0, p, size=m, dtype=np.int64)
            cand = matmul_mod(c, complement, p)
            if Q.apply(cand, cand) != 0:
                v = cand
                break
        if v is None:
            raise DegenerateForm("no anisotropic vector found")
        basis[k] = v
        pairings = matmul_mod(complement, matmul_mod(Q.gram, v, p), p)
        qvv_inv = inv_mod(Q.apply(v, v), p)
        complement = (complement - np.outer(pairings * qvv_inv % p, v % p)) % p
        R, pivots = rref(complement, p)
        complement = R[: len(pivots)]
    return basis


def _isotropic_vector(gram: np.ndarray, p: int) -> np.ndarray | None:
    """A nonzero v with v^T gram v = 0, or None when the form is anisotropic.

    gram must be nondegenerate.  Diagonalizes first; in dimension >= 3 an
    isotropic vector always exists over F_p and is found by solving
    d1 a^2 + d2 b^2 = -d3 with a quadratic-residue scan.
    """
    n = gram.shape[0]
    form = SymmetricForm(gram, p)
    B = orthogonal_basis(form, np.random.default_rng(0))
    d = [form.apply(B[i], B[i]) for i in range(n)]
    if n == 1:
        return None
    if n == 2:
        val = (-d[0] * d[1]) % p
        if not is_square(val, p):
            return None
        s = sqrt_mod(val, p)
        a = s * inv_mod(d[0], p) % p
        return (a * B[0] + B[1]) % p
    d1, d2, d3 = d[0], d[1], d[2]
    inv_d2 = inv_mod(d2, p)
    for a in range(p):
        rhs = (-d3 - d1 * a * a) * inv_d2 % p
        if is_square(rhs, p):
            b = sqrt_mod(rhs, p)
            return (a * B[0] + b * B[1] + B[2]) % p
    return None


def hyperbolic_basis(Q: SymmetricForm,
                     rng: np.random.Generator | None = None
                     ) -> tuple[np.ndarray, np.ndarray]:
    """Bases e_1..e_n, f_1..f_n with Q(e_i,e_j) = Q(f_i,f_j) = 0, Q(e_i,f_j) = d_ij.

    Q must be nondegenerate of even dimension 2n and split over F_p;
    otherwise NotSplit.  The seeded rng only varies the basis choice.
    """
    p = Q.p
    if not Q.is_nondegenerate():
        raise DegenerateForm(f"rank {Q.rank()} < dim {Q.dim}")
    if Q.dim % 2 != 0:
        raise NotSplit("odd-dimensional form has no Lagrangean")
    if rng is None:
        rng = np.random.default_rng(0)
    n = Q.dim // 2
    es, fs = [], []
    span = np.eye(Q.dim, dtype=np.int64)  # rows span current complement
    for _ in range(n):
        sub = SymmetricForm(Q.restrict(span), p)
        while True:
            T = rng.integers(0, p, size=(sub.dim, sub.dim), dtype=np.int64)
            if rank(T, p) == sub.dim:
                break
        v = _isotropic_vector(sub.restrict(T), p)
        if v is None:
            raise NotSplit("anisotropic quadratic subspace encountered")
        e = matmul_mod(matmul_mod(v, T, p), span, p)
        pair_vals = matmul_mod(span, matmul_mod(Q.gram, e, p), p)
        idx = np.nonzero(pair_vals)[0]
        assert idx.size, "nondegenerate form must pair e with the complement"
        w = span[int(idx[0])] * inv_mod(int(pair_vals[int(idx[0])]), p) % p
        w = (w - Q.apply(w, w) * inv_mod(2, p) % p * e) % p
        es.append(e)
        fs.append(w)
        pairings = matmul_mod(span, matmul_mod(Q.gram, np.vstack([e, w]).T, p), p)
        ker = kernel_basis(pairings.T, p)
        span = matmul_mod(ker, span, p)
    return np.array(es) % p, np.array(fs) % p


def is_isotropic(Q: SymmetricForm, W: np.ndarray) -> bool:
    """True iff the span of the rows of W is totally isotropic for Q."""
    W = asarray_mod(W, Q.p)
    return not np.any(Q.restrict(W))
