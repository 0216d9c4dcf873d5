"""Multilinear tensor-decomposition kernels over the block ring.

D(t, r) is the colength of (T_1^{t_1},...,T_s^{t_s}, phi^r) in the cap
algebra; B(t, r) its second difference in r, which is the multiplicity
of delta_r in the decomposition of the corresponding tensor product.
The product on Gamma is the s = 2, phi = T_1 + T_2 specialization.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass

from .errors import CapExceededError, HypothesisError
from .kobjects import GammaElement
from .modp import (
    MonomialQuotientAlgebra,
    PrimeModulus,
    SparsePolynomial,
    _effective_cap,
    corank_powers,
    linear_sum_poly,
)


@dataclass(frozen=True)
class FormSpec:
    p: PrimeModulus
    s: int
    phi: SparsePolynomial

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("arity must be >= 1")
        if self.phi.has_constant_term():
            raise ValueError("phi must have zero constant term")
        if self.phi.terms and self.phi.nvars != self.s:
            raise ValueError("phi arity does not match s")


def tensor_form(p: int, s: int = 2) -> FormSpec:
    """The form giving the k-object tensor product: phi = T_1 + ... + T_s."""
    return FormSpec(PrimeModulus(p), s, linear_sum_poly(s))


# Corank tables keyed by (p, phi key, caps); each value is the full
# sequence [D(t, 0), D(t, 1), ...] up to stabilization at dim A.
_corank_cache: dict[tuple, list[int]] = {}
_cache_lock = threading.Lock()


def _corank_table(spec: FormSpec, caps: tuple[int, ...], dim_cap=None) -> list[int]:
    p = spec.p.p
    # enforce the cap before the cache so the outcome does not depend on
    # which tables happen to be warm
    dim = math.prod(caps)
    cap = _effective_cap(dim_cap)
    if dim > cap:
        raise CapExceededError(f"algebra dimension {dim} exceeds cap {cap}")
    key = (p, spec.phi.canonical_key(p), caps)
    with _cache_lock:
        table = _corank_cache.get(key)
    if table is not None:
        return table
    A = MonomialQuotientAlgebra(spec.p, caps)
    # phi is nilpotent, so coranks stabilize at dim A within dim A steps
    table = corank_powers(A, spec.phi, A.dim, dim_cap=dim_cap)
    while len(table) > 1 and table[-2] == A.dim:
        table.pop()
    with _cache_lock:
        _corank_cache[key] = table
    return table


def clear_caches() -> None:
    with _cache_lock:
        _corank_cache.clear()


def D_int(spec: FormSpec, t, r: int, dim_cap=None) -> int:
    """ell(A / phi^r) for the cap algebra A; 0 for nonpositive arguments."""
    t = tuple(int(x) for x in t)
    if len(t) != spec.s:
        raise ValueError(f"expected {spec.s} caps, got {len(t)}")
    if r <= 0 or any(x <= 0 for x in t):
        return 0
    table = _corank_table(spec, t, dim_cap=dim_cap)
    return table[r] if r < len(table) else table[-1]


def B_int(spec: FormSpec, t, r: int, dim_cap=None) -> int:
    """Multiplicity of delta_r in B_phi(delta_{t_1}, ..., delta_{t_s})."""
    if r < 1:
        raise ValueError("r must be >= 1")
    return (
        2 * D_int(spec, t, r, dim_cap=dim_cap)
        - D_int(spec, t, r + 1, dim_cap=dim_cap)
        - D_int(spec, t, r - 1, dim_cap=dim_cap)
    )


def decompose(spec: FormSpec, t, dim_cap=None) -> GammaElement:
    """Full decomposition of B_phi on a basis tuple as a Gamma class."""
    t = tuple(int(x) for x in t)
    if any(x <= 0 for x in t):
        return GammaElement.zero()
    table = _corank_table(spec, t, dim_cap=dim_cap)
    dim = table[-1]
    coeffs = {}
    for r in range(1, len(table)):
        dr = table[r]
        dr1 = table[r + 1] if r + 1 < len(table) else dim
        dr0 = table[r - 1]
        b = 2 * dr - dr1 - dr0
        if b:
            coeffs[r] = b
    return GammaElement(coeffs)


def multilinear_apply(spec: FormSpec, *gammas: GammaElement, dim_cap=None) -> GammaElement:
    """Multilinear extension of B_phi over the delta basis."""
    if len(gammas) != spec.s:
        raise ValueError(f"expected {spec.s} arguments, got {len(gammas)}")
    out = GammaElement.zero()
    supports = [g.support for g in gammas]
    for combo in itertools.product(*supports):
        weight = 1
        for g, i in zip(gammas, combo):
            weight *= g.coeff(i)
        if weight == 0:
            continue
        out = out + decompose(spec, combo, dim_cap=dim_cap).scale(weight)
    return out


def gamma_product(g1: GammaElement, g2: GammaElement, p: int, dim_cap=None) -> GammaElement:
    """Product in Gamma: the tensor product of k-objects."""
    return multilinear_apply(tensor_form(p), g1, g2, dim_cap=dim_cap)


def check_lemma_linear_part(
    phi: SparsePolynomial, bound: int, p: int, dim_cap=None
) -> bool:
    """Check D_phi == D_{T_1+...+T_s} for all arguments up to ``bound``.

    Requires phi with zero constant term and all linear coefficients
    nonzero mod p; a violated hypothesis raises HypothesisError, which
    is distinct from a counterexample (return False).
    """
    if phi.has_constant_term():
        raise HypothesisError("phi has a constant term")
    s = phi.nvars
    if s < 1:
        raise HypothesisError("phi is zero")
    lin = phi.linear_coefficients(s)
    if any(a % p == 0 for a in lin):
        raise HypothesisError(
            f"linear part {lin} has a zero coefficient mod {p}"
        )
    spec_phi = FormSpec(PrimeModulus(p), s, phi)
    spec_lin = tensor_form(p, s)
    for t in itertools.product(range(1, bound + 1), repeat=s):
        for r in range(1, bound + 1):
            if D_int(spec_phi, t, r, dim_cap=dim_cap) != D_int(
                spec_lin, t, r, dim_cap=dim_cap
            ):
                return False
    return True
