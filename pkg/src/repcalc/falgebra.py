"""Level-e skeleton of the limit function algebra.

Grid functions hold exact rational values on {0, 1/p^e, ..., 1}, vanish
on (-inf, 0] and are constant on [1, inf).  The star product is computed
through the ramp basis alpha_{a,e} and the integer decomposition kernel
B(a, b, c); no floating point anywhere in this module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .forms import decompose, tensor_form
from .kobjects import GammaElement


@dataclass(frozen=True)
class GridFunction:
    p: int
    e: int
    values: tuple[Fraction, ...]  # v_0 .. v_{p^e}

    def __post_init__(self):
        n = self.p**self.e
        vals = tuple(Fraction(v) for v in self.values)
        if len(vals) != n + 1:
            raise ValueError(f"expected {n + 1} grid values, got {len(vals)}")
        if vals[0] != 0:
            raise ValueError("grid function must vanish at 0")
        object.__setattr__(self, "values", vals)

    @property
    def grid_size(self) -> int:
        return self.p**self.e

    def __call__(self, t) -> Fraction:
        """Evaluate by linear interpolation on the grid; clamped outside."""
        t = Fraction(t)
        if t <= 0:
            return Fraction(0)
        if t >= 1:
            return self.values[-1]
        n = self.grid_size
        x = t * n
        lo = int(x)
        frac = x - lo
        if frac == 0:
            return self.values[lo]
        return self.values[lo] + frac * (self.values[lo + 1] - self.values[lo])

    def slopes(self) -> tuple[Fraction, ...]:
        """Per-cell slopes s_a on [(a-1)/p^e, a/p^e], a = 1..p^e."""
        n = self.grid_size
        return tuple((self.values[a] - self.values[a - 1]) * n for a in range(1, n + 1))

    def __add__(self, other: "GridFunction") -> "GridFunction":
        a, b = unify_levels(self, other)
        return GridFunction(a.p, a.e, tuple(x + y for x, y in zip(a.values, b.values)))

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        a, b = unify_levels(self, other)
        return GridFunction(a.p, a.e, tuple(x - y for x, y in zip(a.values, b.values)))

    def __neg__(self) -> "GridFunction":
        return GridFunction(self.p, self.e, tuple(-v for v in self.values))

    def scale(self, c) -> "GridFunction":
        c = Fraction(c)
        return GridFunction(self.p, self.e, tuple(c * v for v in self.values))

    def to_json(self) -> str:
        return json.dumps(
            {
                "p": self.p,
                "e": self.e,
                "values": [f"{v.numerator}/{v.denominator}" for v in self.values],
            }
        )

    @staticmethod
    def from_json(text: str) -> "GridFunction":
        d = json.loads(text)
        return GridFunction(d["p"], d["e"], tuple(Fraction(v) for v in d["values"]))

    def to_csv(self) -> str:
        n = self.grid_size
        lines = ["t,value"]
        for i, v in enumerate(self.values):
            lines.append(f"{Fraction(i, n)},{v}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class BasisExpansion:
    e: int
    coeffs: dict[int, Fraction]  # a -> coefficient of alpha_{a,e}


def alpha(a: int, e: int, p: int) -> GridFunction:
    """The ramp min(t, a/p^e) clipped at 0."""
    n = p**e
    if not 1 <= a <= n:
        raise ValueError(f"a must be in [1, {n}], got {a}")
    return GridFunction(p, e, tuple(Fraction(min(i, a), n) for i in range(n + 1)))


def zero_function(e: int, p: int) -> GridFunction:
    return GridFunction(p, e, tuple(Fraction(0) for _ in range(p**e + 1)))


def refine(f: GridFunction, e_new: int) -> GridFunction:
    """Re-sample on the level-e_new grid (exact: f is piecewise linear)."""
    if e_new < f.e:
        raise ValueError("refine only goes to finer levels")
    if e_new == f.e:
        return f
    n_new = f.p**e_new
    return GridFunction(
        f.p, e_new, tuple(f(Fraction(i, n_new)) for i in range(n_new + 1))
    )


def unify_levels(f: GridFunction, g: GridFunction) -> tuple[GridFunction, GridFunction]:
    if f.p != g.p:
        raise ValueError("mismatched characteristic")
    e = max(f.e, g.e)
    return refine(f, e), refine(g, e)


def embed(gamma: GammaElement, e: int, p: int) -> GridFunction:
    """delta_a -> p^e alpha_{a,e}, extended linearly (a ring map)."""
    n = p**e
    if gamma.support and max(gamma.support) > n:
        raise ValueError(f"support exceeds p^e = {n}")
    vals = [Fraction(0)] * (n + 1)
    for a, c in gamma.coeffs.items():
        for i in range(n + 1):
            vals[i] += c * Fraction(min(i, a), 1)
    return GridFunction(p, e, tuple(vals))


def expand_in_basis(f: GridFunction) -> BasisExpansion:
    """Coefficients c_a with f = sum c_a alpha_{a,e}: c_a = s_a - s_{a+1}."""
    s = f.slopes()
    n = f.grid_size
    coeffs: dict[int, Fraction] = {}
    for a in range(1, n + 1):
        nxt = s[a] if a < n else Fraction(0)
        c = s[a - 1] - nxt
        if c != 0:
            coeffs[a] = c
    return BasisExpansion(f.e, coeffs)


def from_basis(expansion: BasisExpansion, p: int) -> GridFunction:
    n = p**expansion.e
    vals = [Fraction(0)] * (n + 1)
    for a, c in expansion.coeffs.items():
        for i in range(n + 1):
            vals[i] += c * Fraction(min(i, a), n)
    return GridFunction(p, expansion.e, tuple(vals))


def star(f: GridFunction, g: GridFunction, dim_cap=None) -> GridFunction:
    """Bilinear product through the basis structure constants:
    alpha_a * alpha_b = (1/p^e) sum_c B(a,b,c) alpha_c."""
    f, g = unify_levels(f, g)
    p, e = f.p, f.e
    n = p**e
    spec = tensor_form(p)
    cf = expand_in_basis(f).coeffs
    cg = expand_in_basis(g).coeffs
    acc: dict[int, Fraction] = {}
    for a, ca in cf.items():
        for b, cb in cg.items():
            w = ca * cb
            if w == 0:
                continue
            for c, mult in decompose(spec, (a, b), dim_cap=dim_cap).coeffs.items():
                if c <= n:
                    acc[c] = acc.get(c, 0) + w * mult
    scaled = {c: Fraction(v, n) for c, v in acc.items() if v != 0}
    return from_basis(BasisExpansion(e, scaled), p)


def star_power(f: GridFunction, m: int, dim_cap=None) -> GridFunction:
    if m < 1:
        raise ValueError("m must be >= 1")
    out = f
    for _ in range(m - 1):
        out = star(out, f, dim_cap=dim_cap)
    return out


def _p_power_denominator(t: Fraction, p: int) -> int:
    """Exponent m with denominator(t) = p^m; raises if not a p-power."""
    den = t.denominator
    m = 0
    while den % p == 0:
        den //= p
        m += 1
    if den != 1:
        raise ValueError(f"denominator of {t} is not a power of {p}")
    return m


def kernel_D(t1, t2, t3, p: int, dim_cap=None) -> Fraction:
    """The normalized limit kernel at p-power rationals, computed exactly
    at the finite level where it stabilizes: D(a/q, b/q, c/q) = D(a,b,c)/q^2.
    """
    from .forms import D_int

    ts = [Fraction(t) for t in (t1, t2, t3)]
    if any(t <= 0 for t in ts):
        return Fraction(0)
    m = max(_p_power_denominator(t, p) for t in ts)
    q = p**m
    ints = [t * q for t in ts]
    assert all(x.denominator == 1 for x in ints)
    val = D_int(tensor_form(p), (int(ints[0]), int(ints[1])), int(ints[2]), dim_cap=dim_cap)
    return Fraction(val, q * q)


def restrict_R(f: GridFunction) -> GridFunction:
    """Sample on the coarser grid: level e -> e - 1."""
    if f.e < 1:
        raise ValueError("level must be >= 1")
    return GridFunction(f.p, f.e - 1, tuple(f.values[:: f.p]))


def induction_image(f: GridFunction) -> GridFunction:
    """Level e -> e + 1 counterpart of induction: refine, then scale by p."""
    return refine(f, f.e + 1).scale(f.p)


def is_in_Fplus(f: GridFunction) -> bool:
    """Concave, nondecreasing, vanishing at 0."""
    s = f.slopes()
    if any(x < 0 for x in s):
        return False
    return all(s[a] <= s[a - 1] for a in range(1, len(s)))


def f_norm(f: GridFunction) -> Fraction:
    """Norm as the least f1(1) + f2(1) over level-e decompositions
    f = f1 - f2 with f1, f2 concave increasing grid functions.

    With sigma the slopes of f and f1, f2 having slope vectors s, u >= 0,
    both nonincreasing, with s - u = sigma, the feasible set is closed
    under componentwise min, so the backward recursion
        s_a = max(sigma_a, 0, s_{a+1} + max(0, sigma_a - sigma_{a+1}))
    yields the optimum.
    """
    sigma = f.slopes()
    n = f.grid_size
    if is_in_Fplus(f):
        return f.values[-1]
    s = [Fraction(0)] * n
    s[n - 1] = max(sigma[n - 1], Fraction(0))
    for a in range(n - 2, -1, -1):
        s[a] = max(
            sigma[a],
            Fraction(0),
            s[a + 1] + max(Fraction(0), sigma[a] - sigma[a + 1]),
        )
    total = sum(2 * s[a] - sigma[a] for a in range(n))
    return Fraction(total, n)
