"""Core dimensions of tensor powers of sums of Heller shifts.

Exact Betti/length bookkeeping over an abelian p-group, Laurent
arithmetic in the stable class ring, exact big-integer sequences c_n and
d_n via iterated convolution, the CLT-based asymptotic profiles, and a
linear-recurrence detector.  Floating point appears only at reporting
boundaries (profile constants and convergence ratios).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import UnsupportedCaseError
from .modp import _is_prime


@dataclass(frozen=True)
class GroupShape:
    """Abelian p-group Z/p^{e_1} x ... x Z/p^{e_r}."""

    p: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        exps = tuple(int(e) for e in self.exponents)
        if not exps or any(e < 1 for e in exps):
            raise ValueError("exponents must be a nonempty list of positive integers")
        object.__setattr__(self, "exponents", exps)

    @property
    def r(self) -> int:
        return len(self.exponents)

    @property
    def order(self) -> int:
        return self.p ** sum(self.exponents)

    @staticmethod
    def parse(text: str) -> "GroupShape":
        """Parse the "p:e1,e2,..." syntax."""
        try:
            p_str, exps_str = text.split(":")
            return GroupShape(int(p_str), tuple(int(e) for e in exps_str.split(",")))
        except (ValueError, AttributeError) as exc:
            if isinstance(exc, ValueError) and "prime" in str(exc):
                raise
            raise ValueError(f"bad group syntax {text!r}, expected p:e1,e2,...") from exc


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def betti(G: GroupShape, i: int) -> int:
    """i-th Betti number of the trivial module: C(r+i-1, i)."""
    if i < 0:
        raise ValueError("i must be >= 0")
    return math.comb(G.r + i - 1, i)


def gamma_trunc(G: GroupShape, i: int) -> int:
    """Alternating partial sum of Betti numbers; 0 for i < 0."""
    if i < 0:
        return 0
    total = 0
    for j in range(i + 1):
        total = betti(G, j) - total
    return total


def _gamma_list(G: GroupShape, i_max: int) -> list[int]:
    """[gamma_0, ..., gamma_{i_max}] computed incrementally."""
    out = []
    total = 0
    for j in range(i_max + 1):
        total = betti(G, j) - total
        out.append(total)
    return out


def syzygy_dim(G: GroupShape, n: int) -> int:
    """dim of the n-th Heller shift of k: gamma_{|n|-1} * |G| + (-1)^n."""
    if n == 0:
        return 1
    return gamma_trunc(G, abs(n) - 1) * G.order + _sign(n)


def socle_dim(G: GroupShape, n: int) -> int:
    """Socle dimension of the n-th Heller shift of k."""
    if n == 0:
        return 1  # soc(k) = k
    if n >= 1:
        return betti(G, n - 1)
    return betti(G, abs(n))


@dataclass(frozen=True)
class StableClass:
    """Z-combination of shift classes e_i plus a rational multiple of the
    free class f (rational because the natural basis splits off f/|G|)."""

    shifts: tuple[tuple[int, int], ...]  # (i, a_i), sparse
    projective: Fraction = Fraction(0)

    @staticmethod
    def make(shifts: dict[int, int], projective=Fraction(0)) -> "StableClass":
        items = tuple(sorted((int(i), int(a)) for i, a in shifts.items() if a != 0))
        return StableClass(items, Fraction(projective))

    @property
    def shift_dict(self) -> dict[int, int]:
        return dict(self.shifts)

    def dim(self, G: GroupShape) -> Fraction:
        total = Fraction(sum(a * syzygy_dim(G, i) for i, a in self.shifts))
        return total + self.projective * G.order


def class_product(x: StableClass, y: StableClass, G: GroupShape) -> StableClass:
    """Shift parts convolve; the free part balances the total dimension."""
    conv: dict[int, int] = {}
    for i, a in x.shifts:
        for j, b in y.shifts:
            conv[i + j] = conv.get(i + j, 0) + a * b
    conv = {i: a for i, a in conv.items() if a != 0}
    shift_dim = sum(a * syzygy_dim(G, i) for i, a in conv.items())
    projective = (x.dim(G) * y.dim(G) - shift_dim) / G.order
    return StableClass.make(conv, projective)


def projective_excess(m: int, n: int, G: GroupShape) -> int:
    """Free multiplicity in the tensor product of two shift classes."""
    gm = gamma_trunc(G, abs(m) - 1)
    gn = gamma_trunc(G, abs(n) - 1)
    return (
        gm * gn * G.order
        + _sign(m) * gn
        + _sign(n) * gm
        - gamma_trunc(G, abs(m + n) - 1)
    )


@dataclass(frozen=True)
class ModuleSpec:
    """Direct sum of Heller shifts: nonnegative multiplicities a_i."""

    coefficients: tuple[tuple[int, int], ...]  # (shift i, a_i)

    def __post_init__(self):
        items = tuple(sorted((int(i), int(a)) for i, a in self.coefficients if a != 0))
        if not items:
            raise ValueError("module must be nonzero")
        if any(a < 0 for _, a in items):
            raise ValueError("multiplicities must be nonnegative")
        object.__setattr__(self, "coefficients", items)

    @staticmethod
    def parse(text: str) -> "ModuleSpec":
        """Parse the "i:a_i,j:a_j" syntax; negative shifts allowed."""
        coeffs = {}
        try:
            for chunk in text.split(","):
                i_str, a_str = chunk.split(":")
                i = int(i_str)
                coeffs[i] = coeffs.get(i, 0) + int(a_str)
        except ValueError as exc:
            raise ValueError(f"bad module syntax {text!r}, expected i:a_i,...") from exc
        return ModuleSpec(tuple(coeffs.items()))

    @property
    def gamma(self) -> int:
        return sum(a for _, a in self.coefficients)

    def as_dict(self) -> dict[int, int]:
        return dict(self.coefficients)


def _convolve_step(coeffs: dict[int, int], base: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for i, a in coeffs.items():
        for j, b in base.items():
            out[i + j] = out.get(i + j, 0) + a * b
    return out


def _weighted_sums(
    M: ModuleSpec, n_max: int, G: GroupShape, weight
) -> list[int]:
    """[sum_i coeff_i(lambda^n) * weight(i) for n = 1..n_max]."""
    base = M.as_dict()
    lo, hi = _index_range(M, n_max)
    weights = {i: weight(i) for i in range(lo, hi + 1)}
    out = []
    coeffs = {0: 1}
    for _ in range(n_max):
        coeffs = _convolve_step(coeffs, base)
        out.append(sum(a * weights[i] for i, a in coeffs.items()))
    return out


def core_dims(M: ModuleSpec, n_max: int, G: GroupShape) -> list[int]:
    """c_1..c_{n_max}: dimensions of the non-projective part of tensor powers."""
    dims = _syzygy_dim_table(M, n_max, G)
    return _weighted_sums(M, n_max, G, dims.__getitem__)


def socle_core_dims(M: ModuleSpec, n_max: int, G: GroupShape) -> list[int]:
    """d_1..d_{n_max}: socle dimensions of the non-projective parts."""
    return _weighted_sums(M, n_max, G, lambda i: socle_dim(G, i))


def _index_range(M: ModuleSpec, n_max: int) -> tuple[int, int]:
    """Range of shift indices reachable by powers 1..n_max."""
    lo = min(min(M.as_dict()), min(M.as_dict()) * n_max)
    hi = max(max(M.as_dict()), max(M.as_dict()) * n_max)
    return lo, hi


def _syzygy_dim_table(M: ModuleSpec, n_max: int, G: GroupShape):
    lo, hi = _index_range(M, n_max)
    bound = max(abs(lo), abs(hi))
    glist = _gamma_list(G, bound)
    D = G.order

    def dims(i: int) -> int:
        if i == 0:
            return 1
        return glist[abs(i) - 1] * D + _sign(i)

    return {i: dims(i) for i in range(lo, hi + 1)}


def power_coefficients(M: ModuleSpec, n: int) -> dict[int, int]:
    """Coefficient vector of the n-th convolution power of the spec."""
    base = M.as_dict()
    coeffs = {0: 1}
    for _ in range(n):
        coeffs = _convolve_step(coeffs, base)
    return coeffs


def moments(M: ModuleSpec) -> tuple[int, Fraction, Fraction]:
    """(gamma, mean, variance) of the shift-index distribution a_i/gamma."""
    g = M.gamma
    mu = Fraction(sum(i * a for i, a in M.coefficients), g)
    second = Fraction(sum(i * i * a for i, a in M.coefficients), g)
    return g, mu, second - mu * mu


def abs_moment_normal(alpha: int) -> float:
    """E|Z|^alpha for standard normal Z, via double factorials."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    dfac = 1
    for k in range(alpha - 1, 1, -2):
        dfac *= k
    if alpha % 2 == 0:
        return float(dfac)
    return dfac * math.sqrt(2.0 / math.pi)


@dataclass(frozen=True)
class AsymptoticProfile:
    case: str  # mean_nonzero | mean_zero_var_nonzero | constant
    base: int  # gamma
    exponent: Fraction  # alpha
    constant: float  # C
    mu: Fraction
    sigma2: Fraction

    def predicted_log(self, n: int) -> float:
        return (
            n * math.log(self.base)
            + float(self.exponent) * math.log(n)
            + math.log(self.constant)
        )


def asymptotic_profile(
    M: ModuleSpec, G: GroupShape, target: str = "core"
) -> AsymptoticProfile:
    """Leading-term profile C * gamma^n * n^alpha for c_n or d_n."""
    if target not in ("core", "socle"):
        raise ValueError("target must be 'core' or 'socle'")
    g, mu, sigma2 = moments(M)
    r = G.r
    if mu == 0 and sigma2 == 0:
        return AsymptoticProfile("constant", g, Fraction(0), 1.0, mu, sigma2)
    if r == 1:
        raise UnsupportedCaseError(
            "asymptotic profiles require at least 2 generators for a "
            "nonconstant shift distribution"
        )
    # core leading factor D/2, socle leading factor 1
    lead = G.order / 2.0 if target == "core" else 1.0
    lead /= math.factorial(r - 1)
    if mu != 0:
        C = abs(float(mu)) ** (r - 1) * lead
        return AsymptoticProfile("mean_nonzero", g, Fraction(r - 1), C, mu, sigma2)
    sigma_pow = float(sigma2) ** ((r - 1) / 2.0)
    C = sigma_pow * abs_moment_normal(r - 1) * lead
    return AsymptoticProfile(
        "mean_zero_var_nonzero", g, Fraction(r - 1, 2), C, mu, sigma2
    )


def convergence_report(
    seq: list[int], profile: AsymptoticProfile, n_samples
) -> list[tuple[int, float]]:
    """Ratios seq[n] / (C * gamma^n * n^alpha) at the sampled n (1-based)."""
    out = []
    for n in n_samples:
        value = seq[n - 1]
        # exact big-int over big-int first, floats only at the boundary
        ratio = float(Fraction(value, profile.base**n))
        ratio /= float(n) ** float(profile.exponent) * profile.constant
        out.append((n, ratio))
    return out


def recurrence_order(
    seq: list[int],
    d_max: int,
    window: tuple[int, int],
) -> tuple[int, list[Fraction]] | None:
    """Smallest order d <= d_max of a rational linear recurrence
    seq[n] = sum_j b_j seq[n-j] holding across the whole window.

    ``seq`` is 1-based via seq[n-1]; window bounds are inclusive n values.
    Returns (d, [b_1..b_d]) or None.  Absence is only "no recurrence of
    order <= d_max on this window", not a proof of non-recursiveness.
    """
    n_lo, n_hi = window
    if n_lo < 1 or n_hi > len(seq):
        raise ValueError("window out of range of the sequence")
    if n_hi - n_lo + 1 < 2 * d_max + 2:
        raise ValueError("window too short for the requested maximal order")
    for d in range(1, d_max + 1):
        rows = []
        rhs = []
        for n in range(n_lo + d, n_hi + 1):
            rows.append([seq[n - 1 - j] for j in range(1, d + 1)])
            rhs.append(seq[n - 1])
        sol = _solve_exact(rows, rhs)
        if sol is not None:
            return d, sol
    return None


def _solve_exact(rows: list[list[int]], rhs: list[int]) -> list[Fraction] | None:
    """Solve an overdetermined rational system exactly; None if inconsistent
    or underdetermined."""
    m = len(rows)
    d = len(rows[0])
    aug = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(d):
        piv = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    if len(pivots) < d:
        return None  # underdetermined: no unique recurrence on this window
    for i in range(r, m):
        if aug[i][d] != 0:
            return None
    sol = [Fraction(0)] * d
    for i, c in enumerate(pivots):
        sol[c] = aug[i][d]
    return sol
