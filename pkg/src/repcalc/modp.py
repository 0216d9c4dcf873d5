"""Exact linear algebra over prime fields.

Monomial quotient algebras k[T_1,...,T_s]/(T_1^{t_1},...,T_s^{t_s}),
multiplication operators on their monomial basis, ranks and coranks.
Everything here is exact: matrices hold residues mod p in int64 and
elimination is done with modular inverses.
"""

from __future__ import annotations

import itertools
import os
import re
import threading
from dataclasses import dataclass
from functools import lru_cache
from math import comb, prod

import numpy as np

from .errors import CapExceededError

DEFAULT_DIM_CAP = 4096


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeModulus:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not _is_prime(self.p):
            raise ValueError(f"modulus must be prime, got {self.p!r}")


@dataclass(frozen=True)
class MonomialQuotientAlgebra:
    """k[T_1,...,T_s]/(T_1^{t_1},...,T_s^{t_s}) with its monomial basis."""

    p: PrimeModulus
    caps: tuple[int, ...]

    def __post_init__(self):
        caps = tuple(int(t) for t in self.caps)
        if not caps or any(t < 1 for t in caps):
            raise ValueError(f"caps must be positive integers, got {self.caps!r}")
        object.__setattr__(self, "caps", caps)

    @property
    def nvars(self) -> int:
        return len(self.caps)

    @property
    def dim(self) -> int:
        return prod(self.caps)

    def basis(self) -> list[tuple[int, ...]]:
        return _monomial_basis(self.caps)

    def index_of(self) -> dict[tuple[int, ...], int]:
        return _monomial_index(self.caps)


@lru_cache(maxsize=None)
def _monomial_basis(caps: tuple[int, ...]) -> list[tuple[int, ...]]:
    return list(itertools.product(*(range(t) for t in caps)))


@lru_cache(maxsize=None)
def _monomial_index(caps: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    return {m: i for i, m in enumerate(_monomial_basis(caps))}


_TERM_RE = re.compile(r"^\s*(\d+)?\s*\*?\s*((?:T\d+(?:\^\d+)?\s*\*?\s*)*)\s*$")
_VAR_RE = re.compile(r"T(\d+)(?:\^(\d+))?")


@dataclass(frozen=True)
class SparsePolynomial:
    """Polynomial as a map exponent-vector -> integer coefficient.

    Coefficients are plain integers; they are reduced mod p at the point
    of use.  Zero coefficients are dropped.
    """

    terms: tuple[tuple[tuple[int, ...], int], ...]

    @staticmethod
    def from_dict(d: dict[tuple[int, ...], int]) -> "SparsePolynomial":
        items = tuple(sorted((tuple(e), int(c)) for e, c in d.items() if c != 0))
        return SparsePolynomial(items)

    @staticmethod
    def parse(text: str, nvars: int) -> "SparsePolynomial":
        """Parse e.g. ``"T1+T2"``, ``"2*T1+T2^2"``, ``"T1*T2+T1+T2"``."""
        terms: dict[tuple[int, ...], int] = {}
        cleaned = text.replace("-", "+-").replace(" ", "")
        for chunk in cleaned.split("+"):
            if not chunk:
                continue
            sign = 1
            if chunk.startswith("-"):
                sign = -1
                chunk = chunk[1:]
            m = _TERM_RE.match(chunk)
            if not m:
                raise ValueError(f"cannot parse term {chunk!r}")
            coeff = int(m.group(1)) if m.group(1) else 1
            exp = [0] * nvars
            for vm in _VAR_RE.finditer(m.group(2) or ""):
                idx = int(vm.group(1)) - 1
                if idx < 0 or idx >= nvars:
                    raise ValueError(f"variable T{idx + 1} out of range in {text!r}")
                exp[idx] += int(vm.group(2)) if vm.group(2) else 1
            key = tuple(exp)
            terms[key] = terms.get(key, 0) + sign * coeff
        return SparsePolynomial.from_dict(terms)

    @property
    def nvars(self) -> int:
        return len(self.terms[0][0]) if self.terms else 0

    def has_constant_term(self) -> bool:
        return any(all(e == 0 for e in exp) and c != 0 for exp, c in self.terms)

    def linear_coefficients(self, nvars: int) -> list[int]:
        coeffs = [0] * nvars
        for exp, c in self.terms:
            if sum(exp) == 1:
                coeffs[exp.index(1)] += c
        return coeffs

    def canonical_key(self, p: int) -> tuple:
        """Cache key: terms with coefficients reduced into [1, p)."""
        items = sorted((e, c % p) for e, c in self.terms if c % p != 0)
        return tuple(items)

    def is_unit_linear_sum(self, p: int, nvars: int) -> bool:
        """True iff phi = T_1 + ... + T_s with all coefficients 1 mod p."""
        reduced = {e: c % p for e, c in self.terms if c % p != 0}
        want = {}
        for i in range(nvars):
            e = tuple(1 if j == i else 0 for j in range(nvars))
            want[e] = 1
        return reduced == want


def linear_sum_poly(nvars: int) -> SparsePolynomial:
    return SparsePolynomial.from_dict(
        {tuple(1 if j == i else 0 for j in range(nvars)): 1 for i in range(nvars)}
    )


def poly_mul(a: SparsePolynomial, b: SparsePolynomial, p: int) -> SparsePolynomial:
    out: dict[tuple[int, ...], int] = {}
    for ea, ca in a.terms:
        for eb, cb in b.terms:
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = (out.get(e, 0) + ca * cb) % p
    return SparsePolynomial.from_dict(out)


def poly_pow(a: SparsePolynomial, n: int, p: int) -> SparsePolynomial:
    if n < 0:
        raise ValueError("negative polynomial power")
    result = SparsePolynomial.from_dict({tuple([0] * a.nvars): 1})
    for _ in range(n):
        result = poly_mul(result, a, p)
    return result


@dataclass(frozen=True)
class DenseMatrixModP:
    rows: int
    cols: int
    entries: np.ndarray  # int64, reduced into [0, p)
    p: int

    def __post_init__(self):
        if self.entries.shape != (self.rows, self.cols):
            raise ValueError("entry array shape mismatch")


def _rank_int64(a: np.ndarray, p: int) -> int:
    """Rank over F_p by Gaussian elimination with first-nonzero pivoting."""
    a = np.array(a % p, dtype=np.int64, copy=True)
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv], :] = a[[piv, r], :]
        inv = pow(int(a[r, c]), p - 2, p)
        if inv != 1:
            a[r, c:] = a[r, c:] * inv % p
        below = np.nonzero(a[r + 1 :, c])[0]
        if below.size:
            idx = r + 1 + below
            a[idx, c:] = (a[idx, c:] - np.outer(a[idx, c], a[r, c:])) % p
        r += 1
    return r


def matrix_rank(m: DenseMatrixModP) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return _rank_int64(m.entries, m.p)


def mult_operator(
    A: MonomialQuotientAlgebra,
    g: SparsePolynomial,
    dim_cap: int | None = None,
) -> DenseMatrixModP:
    """Matrix of multiplication by g on the monomial basis of A.

    Monomials exceeding a cap are truncated to zero.
    """
    cap = _effective_cap(dim_cap)
    if A.dim > cap:
        raise CapExceededError(f"algebra dimension {A.dim} exceeds cap {cap}")
    p = A.p.p
    basis = A.basis()
    index = A.index_of()
    caps = A.caps
    n = A.dim
    mat = np.zeros((n, n), dtype=np.int64)
    for col, mono in enumerate(basis):
        for exp, c in g.terms:
            c %= p
            if c == 0:
                continue
            target = tuple(m + e for m, e in zip(mono, exp))
            if all(t < t_cap for t, t_cap in zip(target, caps)):
                row = index[target]
                mat[row, col] = (mat[row, col] + c) % p
    return DenseMatrixModP(n, n, mat, p)


def _effective_cap(dim_cap: int | None) -> int:
    if dim_cap is not None:
        return dim_cap
    env = os.environ.get("REPCALC_DIM_CAP")
    return int(env) if env else DEFAULT_DIM_CAP


def quotient_dim(
    A: MonomialQuotientAlgebra,
    gens: list[SparsePolynomial],
    dim_cap: int | None = None,
) -> int:
    """k-dimension of A modulo the ideal generated by gens.

    Computed as dim A minus the rank of the stacked map A^g -> A,
    (m_i) -> sum g_i * m_i.
    """
    if not gens:
        return A.dim
    blocks = [mult_operator(A, g, dim_cap=dim_cap).entries for g in gens]
    stacked = np.hstack(blocks)
    return A.dim - _rank_int64(stacked, A.p.p)


# --- graded fast path for multiplication by T_1 + ... + T_s ---------------
#
# A homogeneous linear form raises total degree by exactly 1, so the
# operator is block-bidiagonal by total degree and
# rank(g^c) = sum_d rank(block d -> d+c), where the composite block has
# multinomial-coefficient entries.

_block_rank_cache: dict[tuple, int] = {}
_cache_lock = threading.Lock()


def _binom_row_modp(c: int, p: int) -> np.ndarray:
    return np.array([comb(c, k) % p for k in range(c + 1)], dtype=np.int64)


def _bivariate_block_rank(p: int, c: int, ncols: int, nrows: int, off: int) -> int:
    """Rank of the Pascal band block with entries C(c, (jl+j) - (il+i)).

    off = jl - il; translation invariant, so cacheable on shape data only.
    """
    key = (p, c, ncols, nrows, off)
    with _cache_lock:
        hit = _block_rank_cache.get(key)
    if hit is not None:
        return hit
    row = _binom_row_modp(c, p)
    offsets = (off + np.arange(nrows))[:, None] - np.arange(ncols)[None, :]
    valid = (offsets >= 0) & (offsets <= c)
    block = np.where(valid, row[np.clip(offsets, 0, c)], 0)
    rank = _rank_int64(block, p)
    with _cache_lock:
        _block_rank_cache[key] = rank
    return rank


def _multinomial_modp(c: int, parts: tuple[int, ...], p: int) -> int:
    if any(d < 0 for d in parts) or sum(parts) != c:
        return 0
    val = 1
    rem = c
    for d in parts:
        val = val * comb(rem, d)
        rem -= d
    return val % p


def linear_sum_rank(caps: tuple[int, ...], c: int, p: int) -> int:
    """Rank of multiplication by (T_1+...+T_s)^c on the cap algebra."""
    if c == 0:
        return prod(caps)
    s = len(caps)
    maxdeg = sum(caps) - s
    if c > maxdeg:
        return 0
    if s == 2:
        a, b = caps
        total = 0
        for d in range(maxdeg - c + 1):
            il, ih = max(0, d - (b - 1)), min(a - 1, d)
            jl, jh = max(0, d + c - (b - 1)), min(a - 1, d + c)
            if il > ih or jl > jh:
                continue
            total += _bivariate_block_rank(p, c, ih - il + 1, jh - jl + 1, jl - il)
        return total
    by_degree: dict[int, list[tuple[int, ...]]] = {}
    for mono in _monomial_basis(caps):
        by_degree.setdefault(sum(mono), []).append(mono)
    total = 0
    for d in range(maxdeg - c + 1):
        src = by_degree.get(d, [])
        dst = by_degree.get(d + c, [])
        if not src or not dst:
            continue
        block = np.zeros((len(dst), len(src)), dtype=np.int64)
        for j, v in enumerate(dst):
            for i, u in enumerate(src):
                parts = tuple(vv - uu for vv, uu in zip(v, u))
                block[j, i] = _multinomial_modp(c, parts, p)
        total += _rank_int64(block, p)
    return total


def corank_powers(
    A: MonomialQuotientAlgebra,
    g: SparsePolynomial,
    r_max: int,
    dim_cap: int | None = None,
) -> list[int]:
    """[dim A - rank(g^r) for r in 0..r_max]; g must act nilpotently."""
    if g.has_constant_term():
        raise ValueError("g must have zero constant term (nilpotent action)")
    p = A.p.p
    dim = A.dim
    cap = _effective_cap(dim_cap)
    if dim > cap:
        raise CapExceededError(f"algebra dimension {dim} exceeds cap {cap}")
    if g.is_unit_linear_sum(p, A.nvars):
        out = []
        rank = dim
        for r in range(r_max + 1):
            if rank > 0:
                rank = linear_sum_rank(A.caps, r, p)
            out.append(dim - rank)
        return out
    G = mult_operator(A, g, dim_cap=dim_cap).entries
    out = [0]
    M = G
    for _ in range(1, r_max + 1):
        rank = _rank_int64(M, p)
        out.append(dim - rank)
        if rank == 0:
            out.extend([dim] * (r_max - len(out) + 1))
            break
        M = M @ G % p
    return out
