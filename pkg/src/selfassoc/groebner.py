"""Buchberger Groebner bases, normal forms, ideal arithmetic, Hilbert data,
and syzygy modules over graded polynomial rings.

The reduction core works directly on the packed term arrays of poly.py.
Pair management uses the Gebauer-Moeller criteria with sugar (= degree, all
input is homogeneous) selection.  Module elements are dicts
{component -> (codes, coeffs)}; the module order is position-over-term for
the syzygy engine (components of lower index dominate).
"""

from __future__ import annotations

import heapq
import threading
from dataclasses import dataclass

import numpy as np

from .linalg import inv_mod
from .poly import (
    Polynomial,
    Ring,
    RingMismatch,
    U64,
    make_poly,
    merge_terms,
)


class GroebnerError(Exception):
    pass


class ZeroIdeal(GroebnerError):
    """The unit ideal where a proper ideal is required."""


# ---------------------------------------------------------------------------
# reduction core


class ReducerSet:
    """Reducers with vectorized lead-divisibility lookup."""

    def __init__(self, ring: Ring):
        self.ring = ring
        self.arrays: list[tuple[np.ndarray, np.ndarray]] = []
        self.lead_codes: list[U64] = []
        self.lead_exps = np.empty((0, ring.n), dtype=np.int64)
        self.lead_inv: list[int] = []
        self.sizes = np.empty(0, dtype=np.int64)

    def __len__(self):
        return len(self.arrays)

    def add(self, codes: np.ndarray, coeffs: np.ndarray):
        ring = self.ring
        self.arrays.append((codes, coeffs))
        self.lead_codes.append(codes[-1])
        exp = ring.exponents_from_code(codes[-1])
        self.lead_exps = np.vstack([self.lead_exps, exp[None, :]])
        self.lead_inv.append(inv_mod(int(coeffs[-1]), ring.p))
        self.sizes = np.append(self.sizes, len(codes))

    def find(self, lead_exp: np.ndarray) -> int:
        """Index of a reducer whose lead divides lead_exp, or -1."""
        if not self.arrays:
            return -1
        cand = np.flatnonzero(np.all(self.lead_exps <= lead_exp, axis=1))
        if cand.size == 0:
            return -1
        return int(cand[np.argmin(self.sizes[cand])])


def reduce_terms(codes, coeffs, red: ReducerSet, record=None):
    """Full normal form of the term arrays against the reducer set.

    record, when given, collects (reducer index, coeff, shift code) for each
    cancellation, so that  input = sum_k coeff * x^shift * red[k] + output.
    Homogeneous input takes the dense-strand fast path.
    """
    ring = red.ring
    if len(codes) == 0:
        return codes, coeffs
    degs = ring.code_degrees(codes)
    if int(degs.min()) == int(degs.max()):
        return _reduce_dense(codes, coeffs, int(degs[0]), red, record)
    p = ring.p
    one = ring._one_code
    out_codes: list = []
    out_coeffs: list = []
    while len(codes):
        lead_exp = ring.exponents_from_code(codes[-1])
        k = red.find(lead_exp)
        if k < 0:
            out_codes.append(codes[-1])
            out_coeffs.append(coeffs[-1])
            codes = codes[:-1]
            coeffs = coeffs[:-1]
            continue
        g_codes, g_coeffs = red.arrays[k]
        c = int(coeffs[-1]) * red.lead_inv[k] % p
        shift = codes[-1] - U64(int(red.lead_codes[k]))  # + one, folded below
        if record is not None:
            record.append((k, c, shift + one))
        codes, coeffs = merge_terms(
            codes[:-1], coeffs[:-1],
            g_codes[:-1] + shift, (-c) * g_coeffs[:-1] % p, p)
    if not out_codes:
        return (np.empty(0, dtype=np.uint64), np.empty(0, dtype=np.int64))
    return (np.array(out_codes[::-1], dtype=np.uint64),
            np.array(out_coeffs[::-1], dtype=np.int64))


def _reduce_dense(codes, coeffs, d: int, red: ReducerSet, record=None):
    """Normal form of a degree-d homogeneous element via a dense work vector.

    The work polynomial is scattered over the degree-d monomial table; the
    lead pointer only ever moves down, so the scan cost is linear and each
    cancellation costs O(len(reducer)).
    """
    ring = red.ring
    p = ring.p
    monos = ring.monomials_of_degree(d)
    vec = np.zeros(len(monos), dtype=np.int64)
    vec[np.searchsorted(monos, codes)] = coeffs
    ptr = len(monos) - 1
    out_pos: list = []
    out_val: list = []
    lead_inv = red.lead_inv
    lead_codes = red.lead_codes
    while True:
        while ptr >= 0 and vec[ptr] == 0:
            ptr -= 1
        if ptr < 0:
            break
        code = monos[ptr]
        k = red.find(ring.exponents_from_code(code))
        if k < 0:
            out_pos.append(ptr)
            out_val.append(int(vec[ptr]))
            vec[ptr] = 0
            continue
        g_codes, g_coeffs = red.arrays[k]
        c = int(vec[ptr]) * lead_inv[k] % p
        shift = code - U64(int(lead_codes[k]))
        if record is not None:
            record.append((k, c, shift + ring._one_code))
        pos = np.searchsorted(monos, g_codes + shift)
        vec[pos] = (vec[pos] - c * g_coeffs) % p
    if not out_pos:
        return (np.empty(0, dtype=np.uint64), np.empty(0, dtype=np.int64))
    idx = np.array(out_pos[::-1], dtype=np.intp)
    return monos[idx].copy(), np.array(out_val[::-1], dtype=np.int64)


def normal_form(f: Polynomial, gb: list[Polynomial]) -> Polynomial:
    """Remainder of division of f by the (Groebner) basis gb."""
    if not gb:
        return f
    ring = f.ring
    red = ReducerSet(ring)
    for g in gb:
        if g.ring != ring:
            raise RingMismatch("mixed rings in normal form")
        if not g.is_zero():
            red.add(g.codes, g.coeffs)
    codes, coeffs = reduce_terms(f.codes, f.coeffs, red)
    return Polynomial(ring, codes, coeffs)


# ---------------------------------------------------------------------------
# Buchberger with Gebauer-Moeller pair elimination and sugar selection


def _exp_lcm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.maximum(a, b)


def buchberger(gens: list[Polynomial], ring: Ring) -> list[Polynomial]:
    """Reduced Groebner basis of the ideal generated by gens (grevlex)."""
    work = [g for g in gens if not g.is_zero()]
    for g in work:
        if g.ring != ring:
            raise RingMismatch("generator in wrong ring")
        if not g.is_homogeneous():
            raise GroebnerError("engine requires homogeneous generators")
    work = sorted(work, key=lambda f: (f.degree(), f.codes.tobytes(),
                                       f.coeffs.tobytes()))
    basis: list[tuple[np.ndarray, np.ndarray]] = []  # term arrays, monic
    exps: list[np.ndarray] = []
    degs: list[int] = []
    red = ReducerSet(ring)
    pairs: list = []        # heap of (sugar, lcm_code, i, j)
    alive: set = set()

    def lcm_of(i, j):
        return _exp_lcm(exps[i], exps[j])

    def add_element(codes, coeffs):
        t = len(basis)
        lt_exp = ring.exponents_from_code(codes[-1])
        # Gebauer-Moeller: cull old pairs whose lcm is a proper multiple
        removed = []
        for (i, j) in list(alive):
            lcm_ij = lcm_of(i, j)
            if np.all(lt_exp <= lcm_ij):
                lcm_it = _exp_lcm(exps[i], lt_exp)
                lcm_jt = _exp_lcm(exps[j], lt_exp)
                if (not np.array_equal(lcm_it, lcm_ij)
                        and not np.array_equal(lcm_jt, lcm_ij)):
                    removed.append((i, j))
        for pr in removed:
            alive.discard(pr)
        basis.append((codes, coeffs))
        exps.append(lt_exp)
        degs.append(ring.code_degree(codes[-1]))
        red.add(codes, coeffs)
        # new pairs with criteria M (divisibility) and F (duplicates), B (coprime)
        cand = {}
        for i in range(t):
            lcm_it = _exp_lcm(exps[i], lt_exp)
            cand[i] = lcm_it
        keep: dict[int, np.ndarray] = {}
        items = sorted(cand.items(), key=lambda kv: (int(kv[1].sum()), kv[0]))
        for i, lcm_it in items:
            dominated = False
            for j, lcm_jt in keep.items():
                if np.all(lcm_jt <= lcm_it):
                    dominated = True
                    if np.array_equal(lcm_jt, lcm_it):
                        break
                    break
            if not dominated:
                # drop pairs dominated by the new one
                drop = [j for j, l in keep.items()
                        if np.all(lcm_it <= l) and not np.array_equal(lcm_it, l)]
                for j in drop:
                    del keep[j]
                keep[i] = lcm_it
        for i, lcm_it in keep.items():
            if np.all(exps[i] + lt_exp == lcm_it):
                continue  # coprime leads: S-pair reduces to zero
            sugar = int(lcm_it.sum())
            code = ring.codes_from_exponent_matrix(lcm_it[None, :])[0]
            heapq.heappush(pairs, (sugar, int(code), i, t))
            alive.add((i, t))

    for g in work:
        codes, coeffs = reduce_terms(g.codes, g.coeffs, red)
        if len(codes):
            inv = inv_mod(int(coeffs[-1]), ring.p)
            add_element(codes, coeffs * inv % ring.p)

    while pairs:
        sugar, lcm_int, i, j = heapq.heappop(pairs)
        if (i, j) not in alive:
            continue
        alive.discard((i, j))
        lcm = lcm_of(i, j)
        ci, ki = basis[i]
        cj, kj = basis[j]
        lcm_code = ring.codes_from_exponent_matrix(lcm[None, :])[0]
        sh_i = lcm_code - ci[-1]
        sh_j = lcm_code - cj[-1]
        # monic basis: S-poly = x^(lcm-lt_i) f_i - x^(lcm-lt_j) f_j
        codes, coeffs = merge_terms(ci[:-1] + sh_i, ki[:-1],
                                    cj[:-1] + sh_j, (-kj[:-1]) % ring.p, ring.p)
        codes, coeffs = reduce_terms(codes, coeffs, red)
        if len(codes):
            inv = inv_mod(int(coeffs[-1]), ring.p)
            add_element(codes, coeffs * inv % ring.p)

    return _interreduce(basis, ring)


def _interreduce(basis, ring: Ring) -> list[Polynomial]:
    """Autoreduce to the canonical reduced Groebner basis.

    Homogeneity makes this cheap: a same-degree divisibility is an equality,
    so tails can be reduced against the whole kept set at once (an element
    can never reduce its own tail).
    """
    if not basis:
        return []
    exps = np.array([ring.exponents_from_code(c[-1]) for c, _ in basis],
                    dtype=np.int64)
    keep = []
    for i in range(len(basis)):
        others = [j for j in range(len(basis)) if j != i]
        dominates = np.all(exps[others] <= exps[i], axis=1)
        divisible = False
        for pos, j in enumerate(others):
            if dominates[pos]:
                if np.array_equal(exps[j], exps[i]) and j > i:
                    continue
                divisible = True
                break
        if not divisible:
            keep.append(i)
    red = ReducerSet(ring)
    for j in keep:
        red.add(*basis[j])
    reduced = []
    for i in keep:
        codes, coeffs = basis[i]
        tcodes, tcoeffs = reduce_terms(codes[:-1], coeffs[:-1], red)
        codes = np.append(tcodes, codes[-1:])
        coeffs = np.append(tcoeffs, coeffs[-1:])
        inv = inv_mod(int(coeffs[-1]), ring.p)
        reduced.append(Polynomial(ring, codes, coeffs * inv % ring.p))
    reduced.sort(key=lambda f: (f.degree(), int(f.lead_code)))
    return reduced


# ---------------------------------------------------------------------------
# Hilbert series of monomial ideals


def _interreduce_monomials(exps: np.ndarray) -> np.ndarray:
    """Minimal generators of the monomial ideal spanned by the rows."""
    if len(exps) == 0:
        return exps
    exps = exps[np.argsort(exps.sum(axis=1), kind="stable")]
    kept = np.empty((0, exps.shape[1]), dtype=np.int64)
    keep_rows = []
    for i in range(len(exps)):
        row = exps[i]
        if len(kept) == 0 or not np.any(np.all(kept <= row, axis=1)):
            kept = np.vstack([kept, row[None, :]])
            keep_rows.append(row)
    return kept


def _poly_mul_z(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_add_z(a: list[int], b: list[int], shift: int = 0, sign: int = 1) -> list[int]:
    out = list(a) + [0] * max(0, shift + len(b) - len(a))
    for j, y in enumerate(b):
        out[shift + j] += sign * y
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def hilbert_numerator(exps: np.ndarray, n: int) -> list[int]:
    """Numerator N(t) of the Hilbert series N(t)/(1-t)^n of R/(monomials).

    Iterative pivot recursion N(I) = N(I + x_j^e) + t^e N(I : x_j^e) with
    support-component splitting; the pivot variable is the most frequent
    one, the exponent the median of its positive exponents.
    """
    exps = _interreduce_monomials(np.asarray(exps, dtype=np.int64))
    tasks: list[tuple] = [("eval", exps)]
    results: list[list[int]] = []
    while tasks:
        kind, payload = tasks.pop()
        if kind == "add":
            plus_res = results.pop()
            colon_res = results.pop()
            results.append(_poly_add_z(plus_res, colon_res, shift=payload))
            continue
        if kind == "mul":
            out = [1]
            for _ in range(payload):
                out = _poly_mul_z(out, results.pop())
            results.append(out)
            continue
        cur = payload
        base = _hilbert_base(cur)
        if base is not None:
            results.append(base)
            continue
        comps = _support_components(cur)
        if len(comps) > 1:
            tasks.append(("mul", len(comps)))
            for rows in comps:
                tasks.append(("eval", cur[rows]))
            continue
        counts = (cur > 0).sum(axis=0)
        j = int(np.argmax(counts))
        positive = sorted(int(v) for v in cur[:, j] if v > 0)
        e = max(positive[len(positive) // 2], 1)
        plus = cur[cur[:, j] < e]
        pivot_row = np.zeros(cur.shape[1], dtype=np.int64)
        pivot_row[j] = e
        plus = _interreduce_monomials(np.vstack([plus, pivot_row[None, :]]))
        colon = cur.copy()
        colon[:, j] = np.maximum(colon[:, j] - e, 0)
        colon = _interreduce_monomials(colon)
        tasks.append(("add", e))
        tasks.append(("eval", plus))   # popped last -> lands on top of results
        tasks.append(("eval", colon))
    assert len(results) == 1
    return results[0]


def _hilbert_base(exps: np.ndarray) -> list[int] | None:
    m = len(exps)
    if m == 0:
        return [1]
    degs = exps.sum(axis=1)
    if int(degs.min()) == 0:
        return [0]  # unit ideal
    if m == 1:
        out = [0] * (int(degs[0]) + 1)
        out[0] = 1
        out[-1] = -1
        return out
    if int((exps > 0).sum(axis=1).max()) == 1:
        # pure powers of distinct variables (interreduced input)
        out = [1]
        for d in degs:
            f = [0] * (int(d) + 1)
            f[0] = 1
            f[-1] = -1
            out = _poly_mul_z(out, f)
        return out
    return None


def _support_components(exps: np.ndarray) -> list[np.ndarray]:
    """Group generator rows into connected components of shared variables."""
    m = len(exps)
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for col in range(exps.shape[1]):
        rows = np.flatnonzero(exps[:, col])
        for k in range(1, len(rows)):
            ra, rb = find(int(rows[0])), find(int(rows[k]))
            if ra != rb:
                parent[rb] = ra
    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    return [np.array(v, dtype=np.intp) for v in groups.values()]


def hilbert_data_from_numerator(num: list[int], n: int) -> tuple[int, int, list[int]]:
    """(projective dimension, degree, reduced numerator h with h(1) != 0).

    num/(1-t)^n is the Hilbert series of R/I for a ring with n variables.
    Projective dimension is -1 for an empty scheme.
    """
    h = list(num)
    if not any(h):
        return -1, 0, [0]
    s = 0
    while len(h) >= 1 and sum(h) == 0:
        # divide by (1 - t): reversed synthetic division
        acc = 0
        out = []
        for c in h[:-1]:
            acc += c
            out.append(acc)
        h = out if out else [0]
        s += 1
    krull = n - s
    return krull - 1, sum(h), h


# ---------------------------------------------------------------------------
# module engine (position-over-term) for syzygies


ModVec = dict  # component -> (codes ascending, coeffs)


def vec_from_polys(polys: dict[int, Polynomial]) -> ModVec:
    return {c: (f.codes, f.coeffs) for c, f in polys.items() if not f.is_zero()}


def vec_to_polys(vec: ModVec, ring: Ring) -> dict[int, Polynomial]:
    return {c: Polynomial(ring, codes, coeffs) for c, (codes, coeffs) in vec.items()}


def vec_is_zero(vec: ModVec) -> bool:
    return not vec


def vec_degree(vec: ModVec, ring: Ring, shifts: list[int]) -> int:
    for c, (codes, coeffs) in vec.items():
        return ring.code_degree(codes[-1]) + shifts[c]
    return -1


def vec_lead_pot(vec: ModVec) -> tuple[int, U64]:
    c = min(vec)
    return c, vec[c][0][-1]


def vec_axpy(vec: ModVec, coeff: int, shift: U64, g: ModVec, p: int,
             skip_lead_comp: int = -1) -> ModVec:
    """vec + coeff * x^shift * g (shift is a code offset: real_code - one).

    skip_lead_comp >= 0 drops the lead term of that component of g (used when
    the lead cancellation is known exactly).
    """
    out = dict(vec)
    for c, (codes, coeffs) in g.items():
        if c == skip_lead_comp:
            codes = codes[:-1]
            coeffs = coeffs[:-1]
            if not len(codes):
                continue
        add_codes = codes + shift
        add_coeffs = coeff * coeffs % p
        if c in out:
            mc, mk = merge_terms(out[c][0], out[c][1], add_codes, add_coeffs, p)
            if len(mc):
                out[c] = (mc, mk)
            else:
                del out[c]
        else:
            out[c] = (add_codes, add_coeffs)
    return out


class ModReducerSet:
    """POT reducers grouped by lead component."""

    def __init__(self, ring: Ring):
        self.ring = ring
        self.by_comp: dict[int, list[int]] = {}
        self.elements: list[ModVec] = []
        self.lead_exps: dict[int, np.ndarray] = {}
        self.lead_codes: list[U64] = []
        self.lead_comps: list[int] = []
        self.lead_inv: list[int] = []
        self.sizes: dict[int, list[int]] = {}

    def add(self, vec: ModVec):
        ring = self.ring
        c, code = vec_lead_pot(vec)
        idx = len(self.elements)
        self.elements.append(vec)
        self.lead_codes.append(code)
        self.lead_comps.append(c)
        self.lead_inv.append(inv_mod(int(vec[c][1][-1]), ring.p))
        exp = ring.exponents_from_code(code)
        if c not in self.by_comp:
            self.by_comp[c] = []
            self.lead_exps[c] = np.empty((0, ring.n), dtype=np.int64)
            self.sizes[c] = []
        self.by_comp[c].append(idx)
        self.lead_exps[c] = np.vstack([self.lead_exps[c], exp[None, :]])
        self.sizes[c].append(sum(len(v[0]) for v in vec.values()))

    def find(self, comp: int, lead_exp: np.ndarray) -> int:
        if comp not in self.by_comp:
            return -1
        cand = np.flatnonzero(np.all(self.lead_exps[comp] <= lead_exp, axis=1))
        if cand.size == 0:
            return -1
        sizes = np.array(self.sizes[comp])[cand]
        return self.by_comp[comp][int(cand[np.argmin(sizes)])]


def vec_reduce(vec: ModVec, red: ModReducerSet) -> ModVec:
    """Full POT normal form of vec against the reducer set."""
    ring = red.ring
    p = ring.p
    one = ring._one_code
    out: ModVec = {}
    work = dict(vec)
    while work:
        c, code = vec_lead_pot(work)
        exp = ring.exponents_from_code(code)
        k = red.find(c, exp)
        if k < 0:
            codes, coeffs = work[c]
            if c in out:
                oc, ok = out[c]
                out[c] = (np.append(np.array([code], dtype=np.uint64), oc),
                          np.append(np.array([coeffs[-1]], dtype=np.int64), ok))
            else:
                out[c] = (np.array([code], dtype=np.uint64),
                          np.array([coeffs[-1]], dtype=np.int64))
            if len(codes) > 1:
                work[c] = (codes[:-1], coeffs[:-1])
            else:
                del work[c]
            continue
        g = red.elements[k]
        coeff = (-int(work[c][1][-1]) * red.lead_inv[k]) % p
        shift = code - U64(int(red.lead_codes[k]))
        # cancel lead exactly
        codes, coeffs = work[c]
        work[c] = (codes[:-1], coeffs[:-1])
        if not len(work[c][0]):
            del work[c]
        work = vec_axpy(work, coeff, shift, g, p, skip_lead_comp=c)
    return out


def _vec_sort_key(vec: ModVec, ring: Ring):
    c, code = vec_lead_pot(vec)
    return (c, int(code))


def module_buchberger(vectors: list[ModVec], ring: Ring,
                      shifts: list[int]) -> list[ModVec]:
    """Reduced POT Groebner basis of the submodule generated by vectors.

    shifts are the internal degrees of the free-module basis; all vectors
    must be homogeneous with respect to them.
    """
    work = [v for v in vectors if not vec_is_zero(v)]
    work.sort(key=lambda v: (vec_degree(v, ring, shifts), _vec_sort_key(v, ring)))
    red = ModReducerSet(ring)
    exps: list[np.ndarray] = []
    pairs: list = []
    alive: set = set()

    def add_element(vec: ModVec):
        t = len(red.elements)
        c, code = vec_lead_pot(vec)
        lt_exp = red.ring.exponents_from_code(code)
        for (i, j) in list(alive):
            if red.lead_comps[i] != c:
                continue
            lcm_ij = _exp_lcm(exps[i], exps[j])
            if np.all(lt_exp <= lcm_ij):
                lcm_it = _exp_lcm(exps[i], lt_exp)
                lcm_jt = _exp_lcm(exps[j], lt_exp)
                if (not np.array_equal(lcm_it, lcm_ij)
                        and not np.array_equal(lcm_jt, lcm_ij)):
                    alive.discard((i, j))
        # monic
        inv = inv_mod(int(vec[c][1][-1]), ring.p)
        if inv != 1:
            vec = {cc: (codes, coeffs * inv % ring.p)
                   for cc, (codes, coeffs) in vec.items()}
        red.add(vec)
        exps.append(lt_exp)
        cand = {}
        for i in range(t):
            if red.lead_comps[i] == c:
                cand[i] = _exp_lcm(exps[i], lt_exp)
        keep: dict[int, np.ndarray] = {}
        items = sorted(cand.items(), key=lambda kv: (int(kv[1].sum()), kv[0]))
        for i, lcm_it in items:
            dominated = any(np.all(l <= lcm_it) for l in keep.values())
            if not dominated:
                drop = [j for j, l in keep.items()
                        if np.all(lcm_it <= l) and not np.array_equal(lcm_it, l)]
                for j in drop:
                    del keep[j]
                keep[i] = lcm_it
        # no coprime criterion in modules
        for i, lcm_it in keep.items():
            sugar = int(lcm_it.sum()) + shifts[c] if c < len(shifts) else int(lcm_it.sum())
            code_l = ring.codes_from_exponent_matrix(lcm_it[None, :])[0]
            heapq.heappush(pairs, (sugar, c, int(code_l), i, t))
            alive.add((i, t))

    for v in work:
        nf = vec_reduce(v, red)
        if not vec_is_zero(nf):
            add_element(nf)

    while pairs:
        _, c, _, i, j = heapq.heappop(pairs)
        if (i, j) not in alive:
            continue
        alive.discard((i, j))
        lcm = _exp_lcm(exps[i], exps[j])
        lcm_code = ring.codes_from_exponent_matrix(lcm[None, :])[0]
        vi, vj = red.elements[i], red.elements[j]
        sh_i = lcm_code - U64(int(red.lead_codes[i]))
        sh_j = lcm_code - U64(int(red.lead_codes[j]))
        spair = vec_axpy({}, 1, sh_i, vi, ring.p)
        spair = vec_axpy(spair, ring.p - 1, sh_j, vj, ring.p)
        nf = vec_reduce(spair, red)
        if not vec_is_zero(nf):
            add_element(nf)

    return _module_interreduce(red, ring, shifts)


def _module_interreduce(red: ModReducerSet, ring: Ring,
                        shifts: list[int]) -> list[ModVec]:
    n = len(red.elements)
    keep = []
    for i in range(n):
        ci = red.lead_comps[i]
        ei = ring.exponents_from_code(red.lead_codes[i])
        divisible = False
        for j in range(n):
            if j == i or red.lead_comps[j] != ci:
                continue
            ej = ring.exponents_from_code(red.lead_codes[j])
            if np.all(ej <= ei):
                if np.array_equal(ej, ei) and j > i:
                    continue
                divisible = True
                break
        if not divisible:
            keep.append(i)
    out = []
    for i in keep:
        sub = ModReducerSet(ring)
        for j in keep:
            if j != i:
                sub.add(red.elements[j])
        nf = vec_reduce(red.elements[i], sub)
        assert not vec_is_zero(nf)
        c, _ = vec_lead_pot(nf)
        inv = inv_mod(int(nf[c][1][-1]), ring.p)
        if inv != 1:
            nf = {cc: (codes, coeffs * inv % ring.p)
                  for cc, (codes, coeffs) in nf.items()}
        out.append(nf)
    out.sort(key=lambda v: (vec_degree(v, ring, shifts), _vec_sort_key(v, ring)))
    return out


@dataclass
class SyzygyModule:
    """First syzygies of a list of module elements (or polynomials).

    columns[k] maps input index -> Polynomial; input . column = 0 exactly.
    """

    ring: Ring
    columns: list[dict[int, Polynomial]]
    source_degrees: list[int]
    target_degrees: list[int]


def syzygies_of_polynomials(polys: list[Polynomial], ring: Ring) -> SyzygyModule:
    vectors = [{0: (f.codes, f.coeffs)} for f in polys]
    return syzygies_of_vectors(vectors, ring, [0], [f.degree() for f in polys])


def syzygies_of_vectors(vectors: list[ModVec], ring: Ring,
                        target_shifts: list[int],
                        vec_degrees: list[int] | None = None) -> SyzygyModule:
    """Syzygies of module elements in a free module with the given shifts."""
    r = len(target_shifts)
    k = len(vectors)
    if vec_degrees is None:
        vec_degrees = [vec_degree(v, ring, target_shifts) for v in vectors]
    shifts = list(target_shifts) + list(vec_degrees)
    augmented = []
    for idx, v in enumerate(vectors):
        aug = dict(v)
        aug[r + idx] = (np.array([ring._one_code], dtype=np.uint64),
                        np.array([1], dtype=np.int64))
        augmented.append(aug)
    gb = module_buchberger(augmented, ring, shifts)
    cols = []
    degrees = []
    for vec in gb:
        if all(c >= r for c in vec):
            col = {c - r: Polynomial(ring, codes, coeffs)
                   for c, (codes, coeffs) in vec.items()}
            cols.append(col)
            degrees.append(vec_degree(vec, ring, shifts))
    return SyzygyModule(ring, cols, degrees, list(vec_degrees))


# ---------------------------------------------------------------------------
# ideal handle


class Ideal:
    """Homogeneous ideal with cached Groebner basis and Hilbert data."""

    def __init__(self, ring: Ring, gens: list[Polynomial]):
        for g in gens:
            if g.ring != ring:
                raise RingMismatch("generator in wrong ring")
            if not g.is_zero() and not g.is_homogeneous():
                raise GroebnerError("ideal generators must be homogeneous")
        self.ring = ring
        self.gens = sorted((g for g in gens if not g.is_zero()),
                           key=lambda f: (f.degree(), f.codes.tobytes(),
                                          f.coeffs.tobytes()))
        self._lock = threading.RLock()
        self._gb: list[Polynomial] | None = None
        self._numerator: list[int] | None = None

    def __repr__(self):
        return f"Ideal({len(self.gens)} gens in {self.ring})"

    def groebner_basis(self) -> list[Polynomial]:
        with self._lock:
            if self._gb is None:
                self._gb = buchberger(self.gens, self.ring)
            return self._gb

    def with_groebner(self, gb: list[Polynomial]) -> "Ideal":
        self._gb = gb
        return self

    def lead_exponents(self) -> np.ndarray:
        gb = self.groebner_basis()
        if not gb:
            return np.empty((0, self.ring.n), dtype=np.int64)
        return np.array([g.lead_exponents() for g in gb], dtype=np.int64)

    def normal_form(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self.groebner_basis())

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.gens)

    def equals(self, other: "Ideal") -> bool:
        return self.contains_ideal(other) and other.contains_ideal(self)

    def hilbert_series_numerator(self) -> list[int]:
        with self._lock:
            if self._numerator is None:
                self._numerator = hilbert_numerator(self.lead_exponents(),
                                                    self.ring.n)
            return self._numerator

    def hilbert_function(self, d: int) -> int:
        """dim_k (R/I)_d."""
        from math import comb
        num = self.hilbert_series_numerator()
        n = self.ring.n
        total = 0
        for k, c in enumerate(num):
            if c and d - k >= 0:
                total += c * comb(n - 1 + d - k, n - 1)
        return total

    def dimension_degree(self) -> tuple[int, int]:
        """(projective dimension, degree) of the scheme cut out by the ideal."""
        if any(g.degree() == 0 for g in self.groebner_basis()):
            raise ZeroIdeal("unit ideal has no projective scheme")
        num = self.hilbert_series_numerator()
        dim, deg, _ = hilbert_data_from_numerator(num, self.ring.n)
        return dim, deg

    def ideal_sum(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, self.gens + other.gens)

    def ideal_product(self, other: "Ideal") -> "Ideal":
        gens = [f * g for f in self.gens for g in other.gens]
        return Ideal(self.ring, gens)

    def power(self, k: int) -> "Ideal":
        if k < 1:
            raise ValueError("power requires k >= 1")
        out = self
        for _ in range(k - 1):
            out = out.ideal_product(self)
        # deduplicate (f*g appears twice for f != g)
        seen = {}
        for g in out.gens:
            seen[(g.codes.tobytes(), g.coeffs.tobytes())] = g
        return Ideal(self.ring, list(seen.values()))

    def quotient_by_poly(self, f: Polynomial) -> "Ideal":
        """I : (f), via syzygies of (gens, f)."""
        if f.is_zero():
            raise ValueError("quotient by zero")
        syz = syzygies_of_polynomials(self.gens + [f], self.ring)
        k = len(self.gens)
        gens = [col[k] for col in syz.columns if k in col]
        return Ideal(self.ring, gens)

    def intersect(self, other: "Ideal") -> "Ideal":
        """I cap J via syzygies of (gens I, gens J)."""
        syz = syzygies_of_polynomials(self.gens + other.gens, self.ring)
        k = len(self.gens)
        out = []
        for col in syz.columns:
            val = self.ring.zero()
            for i in range(k):
                if i in col:
                    val = val + col[i] * self.gens[i]
            if not val.is_zero():
                out.append(val)
        return Ideal(self.ring, out)

    def quotient(self, other: "Ideal") -> "Ideal":
        out = None
        for f in other.gens:
            q = self.quotient_by_poly(f)
            out = q if out is None else out.intersect(q)
        if out is None:
            raise ValueError("quotient by zero ideal")
        return out

    def saturate(self, other: "Ideal", max_rounds: int = 64) -> "Ideal":
        """I : other^infinity by iterating the quotient to a fixpoint."""
        current = self
        for _ in range(max_rounds):
            nxt = current.quotient(other)
            if current.contains_ideal(nxt):
                return current
            current = nxt
        raise GroebnerError("saturation did not stabilize")

    def saturate_irrelevant(self, variable: int | None = None,
                            max_rounds: int = 64) -> "Ideal":
        """Saturation w.r.t. the irrelevant ideal via the grevlex shortcut.

        Divides the grevlex GB by the chosen variable (default: the last)
        and repeats until no generator is divisible.  Homogeneous + grevlex
        makes division by the polynomial equivalent to division of the
        lead term, so a fixpoint is x-saturated; for the ideals in scope x
        avoids every embedded prime except the irrelevant one.
        """
        ring = self.ring
        var = ring.n - 1 if variable is None else variable
        current = self
        for _ in range(max_rounds):
            gb = current.groebner_basis()
            changed = False
            divided = []
            for g in gb:
                exps = ring.exponent_matrix(g.codes)
                k = int(exps[:, var].min())
                if k > 0:
                    changed = True
                    exps[:, var] -= k
                    divided.append(make_poly(ring,
                                             ring.codes_from_exponent_matrix(exps),
                                             g.coeffs.copy()))
                else:
                    divided.append(g)
            if not changed:
                return current
            current = Ideal(ring, divided)
        raise GroebnerError("saturation did not stabilize")


def ideal_from_strings(ring: Ring, lines: list[str]) -> Ideal:
    from .poly import parse_polynomial
    return Ideal(ring, [parse_polynomial(ring, s) for s in lines if s.strip()])
