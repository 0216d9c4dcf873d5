"""The representation ring of Jordan blocks.

Classes are sparse integer combinations of the indecomposables delta_i
(i >= 1).  Virtual classes (negative coefficients) are first-class;
effectiveness is a query.  Index 0 terms are identically zero and are
dropped everywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class GammaElement:
    """Sparse Z-linear combination of delta_i, i >= 1."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[int, int] | None = None):
        clean: dict[int, int] = {}
        for i, c in (coeffs or {}).items():
            if i < 0:
                raise ValueError(f"negative index {i}")
            if i == 0 or c == 0:
                continue  # delta_0 = 0 convention
            clean[int(i)] = int(c)
        self.coeffs = clean

    @staticmethod
    def delta(i: int, mult: int = 1) -> "GammaElement":
        return GammaElement({i: mult})

    @staticmethod
    def zero() -> "GammaElement":
        return GammaElement({})

    def coeff(self, i: int) -> int:
        return self.coeffs.get(i, 0)

    @property
    def support(self) -> list[int]:
        return sorted(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_effective(self) -> bool:
        return all(c >= 0 for c in self.coeffs.values())

    def __add__(self, other: "GammaElement") -> "GammaElement":
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, 0) + c
        return GammaElement(out)

    def __sub__(self, other: "GammaElement") -> "GammaElement":
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, 0) - c
        return GammaElement(out)

    def __neg__(self) -> "GammaElement":
        return GammaElement({i: -c for i, c in self.coeffs.items()})

    def scale(self, n: int) -> "GammaElement":
        return GammaElement({i: n * c for i, c in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, GammaElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in self.support:
            c = self.coeffs[i]
            parts.append(f"{'+' if c >= 0 and parts else ''}{c}*d{i}")
        return "".join(parts)

    def to_json(self) -> str:
        return json.dumps(
            {"coeffs": {str(i): str(c) for i, c in sorted(self.coeffs.items())}}
        )

    @staticmethod
    def from_json(text: str) -> "GammaElement":
        data = json.loads(text)
        return GammaElement({int(i): int(c) for i, c in data["coeffs"].items()})


@dataclass(frozen=True)
class LengthFunction:
    """Values ell(1..N); constant ell(N) beyond N, zero at n <= 0."""

    values: tuple[int, ...]

    def __call__(self, n: int) -> int:
        if n <= 0:
            return 0
        if not self.values:
            return 0
        if n > len(self.values):
            return self.values[-1]
        return self.values[n - 1]

    @property
    def stable_value(self) -> int:
        return self.values[-1] if self.values else 0


def length_of(gamma: GammaElement) -> LengthFunction:
    """ell(n) = sum_i min(n, i) * coeff(i), stored up to stabilization."""
    if gamma.is_zero():
        return LengthFunction(())
    top = max(gamma.support)
    vals = tuple(
        sum(min(n, i) * c for i, c in gamma.coeffs.items()) for n in range(1, top + 1)
    )
    return LengthFunction(vals)


def multiplicities_from_length(ell) -> GammaElement:
    """Invert length_of: e(n) = 2*ell(n) - ell(n+1) - ell(n-1).

    ``ell`` is a LengthFunction or a finite sequence assumed constant
    from its last entry on.  Negative multiplicities are permitted.
    """
    if not isinstance(ell, LengthFunction):
        ell = LengthFunction(tuple(ell))
    n_max = len(ell.values)
    coeffs = {n: 2 * ell(n) - ell(n + 1) - ell(n - 1) for n in range(1, n_max + 1)}
    return GammaElement(coeffs)


def is_valid_length(ell) -> bool:
    """True iff the sequence is the length function of an actual k-object:
    nonnegative, nondecreasing, concave (with ell(0) = 0), eventually
    constant (guaranteed by the finite representation)."""
    if not isinstance(ell, LengthFunction):
        ell = LengthFunction(tuple(ell))
    prev = 0
    values = ell.values
    for n in range(1, len(values) + 2):
        v = ell(n)
        if v < 0 or v < prev:
            return False
        if 2 * v < prev + ell(n + 1):
            return False
        prev = v
    return True


def gamma_dim(gamma: GammaElement) -> int:
    return sum(i * c for i, c in gamma.coeffs.items())


def gamma_norm(gamma: GammaElement) -> int:
    return sum(abs(c) * i for i, c in gamma.coeffs.items())


def _is_p_power(q: int, p: int) -> bool:
    if q < 1:
        return False
    while q % p == 0:
        q //= p
    return q == 1


def induce(gamma: GammaElement, q: int, p: int) -> GammaElement:
    """delta_a -> delta_{aq}, extended linearly; q must be a power of p."""
    if not _is_p_power(q, p):
        raise ValueError(f"{q} is not a power of {p}")
    return GammaElement({i * q: c for i, c in gamma.coeffs.items()})


def restrict(gamma: GammaElement, q: int, p: int) -> GammaElement:
    """delta_a -> (q-r) delta_b + r delta_{b+1} where a = bq + r."""
    if not _is_p_power(q, p):
        raise ValueError(f"{q} is not a power of {p}")
    out: dict[int, int] = {}
    for a, c in gamma.coeffs.items():
        b, r = divmod(a, q)
        if b > 0:
            out[b] = out.get(b, 0) + (q - r) * c
        if r > 0:
            out[b + 1] = out.get(b + 1, 0) + r * c
    return GammaElement(out)


def inflate(gamma: GammaElement) -> GammaElement:
    return GammaElement(dict(gamma.coeffs))
