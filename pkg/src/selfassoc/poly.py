"""Graded multivariate polynomial rings over F_p.

Monomial representation: each monomial is packed into a single uint64
"code" consisting of equal-width bit fields

    [ total degree | M - e_{n-1} | ... | M - e_1 ]

where M = 2^bits - 1 and e_0 is recovered as deg - sum(e_i).  With this
layout the natural integer order on codes IS degree-reverse-lexicographic
order (x_0 > x_1 > ... > x_{n-1}), so polynomials are plain parallel numpy
arrays (codes ascending, lead term last) and all arithmetic reduces to
vectorized merges.  Monomial products are code additions up to a constant
offset.  The price is a degree cap of 2^bits - 1 with bits = 64 // n;
DegreeOverflow is raised past it (cap 15 in 16 variables, plenty for the
computations in scope).

Polynomials are immutable values; a Ring is a cheap handle compared by
identity-equivalent contents.
"""

from __future__ import annotations

from functools import reduce
from math import comb
import re

import numpy as np

from .linalg import check_prime, inv_mod

U64 = np.uint64


class PolyError(Exception):
    pass


class RingMismatch(PolyError):
    pass


class DegreeOverflow(PolyError):
    pass


class ZeroVector(PolyError):
    pass


class Ring:
    """Polynomial ring F_p[x_0..x_{n-1}] with grevlex order."""

    def __init__(self, num_vars: int, prime: int, var_names: list[str] | None = None):
        if num_vars < 1:
            raise ValueError("need at least one variable")
        self.n = num_vars
        self.p = check_prime(prime)
        if var_names is None:
            var_names = [f"x{i}" for i in range(num_vars)]
        if len(var_names) != num_vars:
            raise ValueError("wrong number of variable names")
        self.var_names = list(var_names)
        self.bits = 64 // (num_vars if num_vars > 1 else 2)
        self.max_degree = (1 << self.bits) - 1
        # field shifts: degree on top, complemented e_{n-1} (most significant
        # exponent field) down to e_1 (least significant); e_0 is implicit
        self._deg_shift = U64((num_vars - 1) * self.bits)
        self._shifts = np.array(
            [(i - 1) * self.bits for i in range(1, num_vars)],
            dtype=np.uint64,
        )  # _shifts[i-1] holds e_i
        self._mask = U64(self.max_degree)
        # code of the monomial 1 (all complement fields maxed)
        one = 0
        for s in self._shifts:
            one |= self.max_degree << int(s)
        self._one_code = U64(one)
        self._mono_cache: dict[int, np.ndarray] = {}

    def __repr__(self):
        return f"Ring({self.n} vars, p={self.p})"

    def __eq__(self, other):
        return (isinstance(other, Ring) and self.n == other.n
                and self.p == other.p and self.var_names == other.var_names)

    def __hash__(self):
        return hash((self.n, self.p, tuple(self.var_names)))

    # -- monomial codes ----------------------------------------------------

    def code_from_exponents(self, exps) -> U64:
        e = np.asarray(exps, dtype=np.int64)
        if e.shape != (self.n,) or np.any(e < 0):
            raise ValueError("bad exponent vector")
        d = int(e.sum())
        if d > self.max_degree:
            raise DegreeOverflow(f"degree {d} exceeds cap {self.max_degree}")
        code = d << int(self._deg_shift)
        for i in range(1, self.n):
            code |= (self.max_degree - int(e[i])) << int(self._shifts[i - 1])
        return U64(code)

    def exponents_from_code(self, code) -> np.ndarray:
        c = int(code)
        d = c >> int(self._deg_shift)
        e = np.zeros(self.n, dtype=np.int64)
        for i in range(1, self.n):
            e[i] = self.max_degree - ((c >> int(self._shifts[i - 1])) & self.max_degree)
        e[0] = d - int(e[1:].sum())
        return e

    def exponent_matrix(self, codes: np.ndarray) -> np.ndarray:
        """(len(codes), n) int64 exponent rows."""
        c = codes.astype(np.uint64, copy=False)
        out = np.empty((len(c), self.n), dtype=np.int64)
        d = (c >> self._deg_shift).astype(np.int64)
        for i in range(1, self.n):
            out[:, i] = self.max_degree - (
                (c >> self._shifts[i - 1]).astype(np.int64) & self.max_degree)
        out[:, 0] = d - out[:, 1:].sum(axis=1)
        return out

    def codes_from_exponent_matrix(self, exps: np.ndarray) -> np.ndarray:
        exps = np.asarray(exps, dtype=np.int64)
        d = exps.sum(axis=1)
        if d.size and int(d.max()) > self.max_degree:
            raise DegreeOverflow(f"degree {int(d.max())} exceeds cap {self.max_degree}")
        codes = d.astype(np.uint64) << self._deg_shift
        for i in range(1, self.n):
            codes |= (self.max_degree - exps[:, i]).astype(np.uint64) << self._shifts[i - 1]
        return codes

    def code_degree(self, code) -> int:
        return int(int(code) >> int(self._deg_shift))

    def code_degrees(self, codes: np.ndarray) -> np.ndarray:
        return (codes >> self._deg_shift).astype(np.int64)

    def code_mul(self, a, b) -> U64:
        if self.code_degree(a) + self.code_degree(b) > self.max_degree:
            raise DegreeOverflow("monomial product exceeds degree cap")
        return U64((int(a) + int(b) - int(self._one_code)) & ((1 << 64) - 1))

    def codes_mul(self, codes: np.ndarray, m) -> np.ndarray:
        """Multiply every code by the single monomial code m (uint64 wraparound)."""
        return codes + U64(int(m)) - self._one_code

    def monomials_of_degree(self, d: int) -> np.ndarray:
        """All degree-d monomial codes, ascending (grevlex order)."""
        if d < 0:
            raise ValueError("negative degree")
        if d > self.max_degree:
            raise DegreeOverflow(f"degree {d} exceeds cap {self.max_degree}")
        if d not in self._mono_cache:
            exps = _compositions(d, self.n)
            codes = self.codes_from_exponent_matrix(exps)
            codes.sort()
            codes.setflags(write=False)
            self._mono_cache[d] = codes
        return self._mono_cache[d]

    def num_monomials(self, d: int) -> int:
        return comb(d + self.n - 1, self.n - 1)

    # -- polynomial constructors -------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, np.empty(0, dtype=np.uint64),
                          np.empty(0, dtype=np.int64))

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: int) -> "Polynomial":
        c %= self.p
        if c == 0:
            return self.zero()
        return Polynomial(self, np.array([self._one_code], dtype=np.uint64),
                          np.array([c], dtype=np.int64))

    def variable(self, i: int) -> "Polynomial":
        e = np.zeros(self.n, dtype=np.int64)
        e[i] = 1
        return self.monomial(e)

    def variables(self) -> list["Polynomial"]:
        return [self.variable(i) for i in range(self.n)]

    def monomial(self, exps, coeff: int = 1) -> "Polynomial":
        coeff %= self.p
        if coeff == 0:
            return self.zero()
        return Polynomial(self, np.array([self.code_from_exponents(exps)], dtype=np.uint64),
                          np.array([coeff], dtype=np.int64))

    def from_terms(self, terms) -> "Polynomial":
        """terms: iterable of (exponent tuple, coefficient)."""
        codes, coeffs = [], []
        for exps, c in terms:
            codes.append(self.code_from_exponents(exps))
            coeffs.append(int(c) % self.p)
        if not codes:
            return self.zero()
        return make_poly(self, np.array(codes, dtype=np.uint64),
                         np.array(coeffs, dtype=np.int64))

    def from_coeff_vector(self, vec, d: int) -> "Polynomial":
        """Degree-d polynomial from coefficients over monomials_of_degree(d).

        The vector is indexed in DESCENDING monomial order (ring order),
        matching evaluation-matrix columns.
        """
        vec = np.asarray(vec, dtype=np.int64) % self.p
        codes = self.monomials_of_degree(d)[::-1]
        if len(vec) != len(codes):
            raise ValueError("coefficient vector has wrong length")
        nz = np.nonzero(vec)[0]
        return make_poly(self, codes[nz].copy(), vec[nz].copy())

    def random_homogeneous(self, d: int, rng: np.random.Generator) -> "Polynomial":
        codes = self.monomials_of_degree(d)
        coeffs = rng.integers(0, self.p, size=len(codes), dtype=np.int64)
        return make_poly(self, codes.copy(), coeffs)


def _compositions(d: int, n: int) -> np.ndarray:
    """All exponent vectors of total degree d in n variables."""
    if n == 1:
        return np.array([[d]], dtype=np.int64)
    rows = []
    for e0 in range(d, -1, -1):
        rest = _compositions(d - e0, n - 1)
        block = np.empty((len(rest), n), dtype=np.int64)
        block[:, 0] = e0
        block[:, 1:] = rest
        rows.append(block)
    return np.concatenate(rows, axis=0)


def merge_terms(codes_a, coeffs_a, codes_b, coeffs_b, p):
    """Merge two ascending term arrays, summing coefficients mod p."""
    la, lb = len(codes_a), len(codes_b)
    if la == 0:
        return codes_b, coeffs_b % p
    if lb == 0:
        return codes_a, coeffs_a % p
    ia = np.arange(la) + np.searchsorted(codes_b, codes_a, side="left")
    ib = np.arange(lb) + np.searchsorted(codes_a, codes_b, side="right")
    n = la + lb
    codes = np.empty(n, dtype=np.uint64)
    coeffs = np.empty(n, dtype=np.int64)
    codes[ia] = codes_a
    codes[ib] = codes_b
    coeffs[ia] = coeffs_a
    coeffs[ib] = coeffs_b
    dup = np.flatnonzero(codes[1:] == codes[:-1])
    if dup.size:
        coeffs[dup] = (coeffs[dup] + coeffs[dup + 1]) % p
        keep = np.ones(n, dtype=bool)
        keep[dup + 1] = False
        codes, coeffs = codes[keep], coeffs[keep]
    nz = np.nonzero(coeffs)[0]
    if len(nz) != len(coeffs):
        codes, coeffs = codes[nz], coeffs[nz]
    return codes, coeffs


def make_poly(ring: Ring, codes: np.ndarray, coeffs: np.ndarray) -> "Polynomial":
    """Normalize raw term arrays (sort, combine, drop zeros) into a Polynomial."""
    coeffs = coeffs % ring.p
    order = np.argsort(codes, kind="stable")
    codes, coeffs = codes[order], coeffs[order]
    if len(codes) > 1:
        dup = np.flatnonzero(codes[1:] == codes[:-1])
        if dup.size:
            # runs of equal codes: sum with reduceat on run starts
            starts = np.flatnonzero(np.concatenate(([True], codes[1:] != codes[:-1])))
            sums = np.add.reduceat(coeffs, starts) % ring.p
            codes, coeffs = codes[starts], sums
    nz = np.nonzero(coeffs)[0]
    if len(nz) != len(coeffs):
        codes, coeffs = codes[nz], coeffs[nz]
    return Polynomial(ring, codes, coeffs)


class Polynomial:
    """Immutable sparse polynomial: parallel (codes, coeffs), codes ascending."""

    __slots__ = ("ring", "codes", "coeffs")

    def __init__(self, ring: Ring, codes: np.ndarray, coeffs: np.ndarray):
        self.ring = ring
        self.codes = codes
        self.coeffs = coeffs
        codes.setflags(write=False)
        coeffs.setflags(write=False)

    # -- structure ----------------------------------------------------------

    def __len__(self):
        return len(self.codes)

    def is_zero(self) -> bool:
        return len(self.codes) == 0

    @property
    def lead_code(self) -> U64:
        if self.is_zero():
            raise ValueError("zero polynomial has no lead term")
        return self.codes[-1]

    @property
    def lead_coeff(self) -> int:
        return int(self.coeffs[-1])

    def lead_exponents(self) -> np.ndarray:
        return self.ring.exponents_from_code(self.lead_code)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if self.is_zero():
            return -1
        return self.ring.code_degree(self.codes[-1])

    def is_homogeneous(self) -> bool:
        if len(self.codes) <= 1:
            return True
        degs = self.ring.code_degrees(self.codes)
        return int(degs.min()) == int(degs.max())

    def terms(self):
        """Descending (ring-order) list of (exponent tuple, coeff)."""
        out = []
        for i in range(len(self.codes) - 1, -1, -1):
            out.append((tuple(self.ring.exponents_from_code(self.codes[i])),
                        int(self.coeffs[i])))
        return out

    def coeff_vector(self, d: int) -> np.ndarray:
        """Coefficients over monomials_of_degree(d), descending ring order."""
        if not self.is_zero() and (not self.is_homogeneous() or self.degree() != d):
            raise ValueError("not homogeneous of the requested degree")
        monos = self.ring.monomials_of_degree(d)[::-1]
        vec = np.zeros(len(monos), dtype=np.int64)
        if not self.is_zero():
            pos = len(monos) - 1 - np.searchsorted(self.ring.monomials_of_degree(d), self.codes)
            vec[pos] = self.coeffs
        return vec

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatch("polynomials live in different rings")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        self._check(other)
        codes, coeffs = merge_terms(self.codes, self.coeffs,
                                    other.codes, other.coeffs, self.ring.p)
        return Polynomial(self.ring, codes, coeffs)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return Polynomial(self.ring, self.codes, (-self.coeffs) % self.ring.p)

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        return self.__add__(other.__neg__())

    def __rsub__(self, other):
        return self.__neg__().__add__(other)

    def scale(self, c: int) -> "Polynomial":
        c %= self.ring.p
        if c == 0:
            return self.ring.zero()
        return Polynomial(self.ring, self.codes, self.coeffs * c % self.ring.p)

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(inv_mod(self.lead_coeff, self.ring.p))

    def term_mul(self, coeff: int, mono_code) -> "Polynomial":
        """Multiply by coeff * (monomial given by code)."""
        ring = self.ring
        coeff %= ring.p
        if coeff == 0 or self.is_zero():
            return ring.zero()
        if self.degree() + ring.code_degree(mono_code) > ring.max_degree:
            raise DegreeOverflow("monomial product exceeds degree cap")
        return Polynomial(ring, ring.codes_mul(self.codes, mono_code),
                          self.coeffs * coeff % ring.p)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        if self.is_zero() or other.is_zero():
            return self.ring.zero()
        f, g = (self, other) if len(self) <= len(other) else (other, self)
        ring = self.ring
        if f.degree() + g.degree() > ring.max_degree:
            raise DegreeOverflow("product exceeds degree cap")
        # pairwise code sums; uint64 wraparound makes a+b-one exact
        all_codes = (g.codes[None, :] + f.codes[:, None]) - ring._one_code
        all_coeffs = (f.coeffs[:, None] * g.coeffs[None, :]) % ring.p
        return make_poly(ring, all_codes.ravel(), all_coeffs.ravel())

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial) or self.ring != other.ring:
            return False
        return (len(self.codes) == len(other.codes)
                and np.array_equal(self.codes, other.codes)
                and np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.ring, self.codes.tobytes(), self.coeffs.tobytes()))

    # -- calculus and evaluation ----------------------------------------------

    def partial_derivative(self, i: int) -> "Polynomial":
        """Formal d/dx_i."""
        if self.is_zero():
            return self
        ring = self.ring
        exps = ring.exponent_matrix(self.codes)
        keep = exps[:, i] > 0
        if not np.any(keep):
            return ring.zero()
        exps = exps[keep]
        coeffs = self.coeffs[keep] * (exps[:, i] % ring.p) % ring.p
        exps[:, i] -= 1
        return make_poly(ring, ring.codes_from_exponent_matrix(exps), coeffs)

    def evaluate(self, point) -> int:
        """Value at an affine coordinate vector (mod p)."""
        ring = self.ring
        pt = np.asarray(point, dtype=np.int64) % ring.p
        if pt.shape != (ring.n,):
            raise ValueError("point has wrong length")
        return int(evaluate_codes(ring, self.codes, self.coeffs, pt.reshape(1, -1))[0])

    def substitute(self, sub: "LinearSubstitution") -> "Polynomial":
        return sub.apply(self)

    # -- printing ----------------------------------------------------------

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        ring = self.ring
        parts = []
        for exps, c in self.terms():
            factors = []
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(ring.var_names[i])
                elif e > 1:
                    factors.append(f"{ring.var_names[i]}^{e}")
            body = "*".join(factors)
            if not factors:
                term = str(c)
            elif c == 1:
                term = body
            else:
                term = f"{c}*{body}"
            parts.append(term)
        return " + ".join(parts)


def evaluate_codes(ring: Ring, codes: np.ndarray, coeffs: np.ndarray,
                   points: np.ndarray) -> np.ndarray:
    """Evaluate the term array at each row of points ((m, n) int64 mod p)."""
    p = ring.p
    if len(codes) == 0:
        return np.zeros(len(points), dtype=np.int64)
    exps = ring.exponent_matrix(codes)
    maxdeg = int(exps.max()) if exps.size else 0
    m = len(points)
    # pow_table[k][:, i] = points[:, i]^k
    powers = np.ones((maxdeg + 1, m, ring.n), dtype=np.int64)
    for k in range(1, maxdeg + 1):
        powers[k] = powers[k - 1] * points % p
    values = np.zeros(m, dtype=np.int64)
    for t in range(len(codes)):
        term = np.full(m, int(coeffs[t]), dtype=np.int64)
        for i in range(ring.n):
            e = int(exps[t, i])
            if e:
                term = term * powers[e, :, i] % p
        values = (values + term) % p
    return values


def evaluation_matrix(ring: Ring, points, d: int) -> np.ndarray:
    """Rows = points, columns = degree-d monomials in descending ring order.

    Points are projective coordinate representatives; a zero vector raises
    ZeroVector.  Row scaling does not change the rank.
    """
    pts = np.asarray(points, dtype=np.int64) % ring.p
    if pts.ndim != 2 or pts.shape[1] != ring.n:
        raise ValueError("points must be rows of length num_vars")
    if np.any(np.all(pts == 0, axis=1)):
        raise ZeroVector("zero coordinate vector is not a projective point")
    codes = ring.monomials_of_degree(d)[::-1]
    p = ring.p
    exps = ring.exponent_matrix(codes.copy())
    m = len(pts)
    powers = np.ones((d + 1, m, ring.n), dtype=np.int64)
    for k in range(1, d + 1):
        powers[k] = powers[k - 1] * pts % p
    M = np.empty((m, len(codes)), dtype=np.int64)
    for j in range(len(codes)):
        col = np.ones(m, dtype=np.int64)
        for i in range(ring.n):
            e = int(exps[j, i])
            if e:
                col = col * powers[e, :, i] % p
        M[:, j] = col
    return M


class LinearSubstitution:
    """x_i -> sum_j matrix[i, j] * y_j, a ring map source -> target."""

    def __init__(self, source: Ring, target: Ring, matrix):
        M = np.asarray(matrix, dtype=np.int64) % target.p
        if source.p != target.p:
            raise RingMismatch("substitution requires equal characteristics")
        if M.shape != (source.n, target.n):
            raise ValueError(f"matrix must be {source.n} x {target.n}")
        self.source = source
        self.target = target
        self.matrix = M
        self._images = [self._linear_form(M[i]) for i in range(source.n)]
        self._power_cache: list[dict[int, Polynomial]] = [
            {0: target.one(), 1: img} for img in self._images
        ]

    def _linear_form(self, row) -> Polynomial:
        return self.target.from_terms(
            ((tuple(1 if j == k else 0 for k in range(self.target.n)), int(c))
             for j, c in enumerate(row) if c % self.target.p),
        )

    def _power(self, i: int, e: int) -> Polynomial:
        cache = self._power_cache[i]
        if e not in cache:
            cache[e] = self._power(i, e - 1) * cache[1]
        return cache[e]

    def apply(self, f: Polynomial) -> Polynomial:
        if f.ring != self.source:
            raise RingMismatch("polynomial not in the substitution source ring")
        result = self.target.zero()
        exps = self.source.exponent_matrix(f.codes)
        for t in range(len(f.codes)):
            term = self.target.constant(int(f.coeffs[t]))
            for i in range(self.source.n):
                e = int(exps[t, i])
                if e:
                    term = term * self._power(i, e)
            result = result + term
        return result


def identity_substitution(ring: Ring) -> LinearSubstitution:
    return LinearSubstitution(ring, ring, np.eye(ring.n, dtype=np.int64))


_TERM_RE = re.compile(r"[+-]?[^+-]+")
_FACTOR_RE = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?$")


def parse_polynomial(ring: Ring, text: str) -> Polynomial:
    """Parse the ideal-file term format, e.g. '3*x0^2*x3 - x1*x2*x4'."""
    s = text.strip().replace(" ", "")
    if not s or s == "0":
        return ring.zero()
    name_to_idx = {name: i for i, name in enumerate(ring.var_names)}
    terms = []
    pos = 0
    for m in _TERM_RE.finditer(s):
        if m.start() != pos:
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
        pos = m.end()
        chunk = m.group(0)
        sign = 1
        if chunk[0] == "+":
            chunk = chunk[1:]
        elif chunk[0] == "-":
            sign = -1
            chunk = chunk[1:]
        coeff = sign
        exps = [0] * ring.n
        for factor in chunk.split("*"):
            if not factor:
                raise ValueError(f"empty factor in {chunk!r}")
            if factor.isdigit():
                coeff = coeff * int(factor)
                continue
            fm = _FACTOR_RE.match(factor)
            if not fm or fm.group(1) not in name_to_idx:
                raise ValueError(f"unknown factor {factor!r}")
            exps[name_to_idx[fm.group(1)]] += int(fm.group(2) or 1)
        terms.append((tuple(exps), coeff))
    if pos != len(s):
        raise ValueError(f"trailing junk in polynomial: {s[pos:]!r}")
    return ring.from_terms(terms)


def format_polynomial(f: Polynomial) -> str:
    """Inverse of parse_polynomial (canonical descending-order rendering)."""
    if f.is_zero():
        return "0"
    parts = []
    for k, (exps, c) in enumerate(f.terms()):
        factors = []
        for i, e in enumerate(exps):
            if e == 1:
                factors.append(f.ring.var_names[i])
            elif e > 1:
                factors.append(f"{f.ring.var_names[i]}^{e}")
        body = "*".join(factors)
        if body:
            term = body if c == 1 else f"{c}*{body}"
        else:
            term = str(c)
        parts.append(term if k == 0 else f"+ {term}")
    return " ".join(parts)
