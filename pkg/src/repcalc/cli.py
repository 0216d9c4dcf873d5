"""Command-line surface with machine-readable output.

Exit codes: 0 success, 2 validation error, 3 dimension cap exceeded,
64 unknown subcommand.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from fractions import Fraction

from . import falgebra, forms, kobjects, syzygies
from .errors import CapExceededError, HypothesisError
from .falgebra import GridFunction, alpha, embed
from .forms import D_int, FormSpec, decompose, gamma_product, tensor_form
from .kobjects import GammaElement
from .modp import MonomialQuotientAlgebra, PrimeModulus, SparsePolynomial, quotient_dim
from .syzygies import GroupShape, ModuleSpec

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CAP = 3
EXIT_USAGE = 64

_SUBCOMMANDS = ("tensor", "kernel", "lengths", "falg", "syzygy", "verify")


def _parse_gamma(text: str) -> GammaElement:
    """Parse "i:c,j:c" into a Gamma class."""
    coeffs: dict[int, int] = {}
    for chunk in text.split(","):
        i_str, c_str = chunk.split(":")
        i = int(i_str)
        coeffs[i] = coeffs.get(i, 0) + int(c_str)
    return GammaElement(coeffs)


def _parse_grid_combo(text: str, e: int, p: int) -> GridFunction:
    """Parse "a:c,..." as sum of c * alpha_{a,e}; c may be rational."""
    out = falgebra.zero_function(e, p)
    for chunk in text.split(","):
        a_str, c_str = chunk.split(":")
        out = out + alpha(int(a_str), e, p).scale(Fraction(c_str))
    return out


def _emit(payload, fmt: str, pretty_lines=None, csv_lines=None) -> None:
    if fmt == "json":
        print(json.dumps(payload))
    elif fmt == "csv":
        for line in csv_lines or [json.dumps(payload)]:
            print(line)
    else:
        for line in pretty_lines or [json.dumps(payload, indent=2)]:
            print(line)


def _gamma_payload(g: GammaElement) -> dict:
    return {str(i): g.coeff(i) for i in g.support}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="repcalc")
    sub = parser.add_subparsers(dest="command", required=True)

    fmt_kw = dict(choices=("json", "csv", "pretty"), default="json")

    p_tensor = sub.add_parser("tensor", help="tensor decomposition of delta_a x delta_b")
    p_tensor.add_argument("--p", type=int, required=True)
    p_tensor.add_argument("--a", type=int, required=True)
    p_tensor.add_argument("--b", type=int, required=True)
    p_tensor.add_argument("--phi", default=None, help="optional bilinear form polynomial")
    p_tensor.add_argument("--format", **fmt_kw)

    p_kernel = sub.add_parser("kernel", help="integer D table entry or rational kernel value")
    p_kernel.add_argument("--p", type=int, required=True)
    p_kernel.add_argument("--t", default=None, help="integer caps t1,t2,... (with --r)")
    p_kernel.add_argument("--r", type=int, default=None)
    p_kernel.add_argument("--phi", default=None)
    p_kernel.add_argument("--t1", default=None, help="rational argument (kernel mode)")
    p_kernel.add_argument("--t2", default=None)
    p_kernel.add_argument("--t3", default=None)
    p_kernel.add_argument("--format", **fmt_kw)

    p_len = sub.add_parser("lengths", help="colengths of explicit generator lists")
    p_len.add_argument("preset", nargs="?", default=None, help="e.g. remark-2-13")
    p_len.add_argument("--p", type=int)
    p_len.add_argument("--caps", default=None)
    p_len.add_argument("--gens", default=None, help="polynomials separated by ';'")
    p_len.add_argument("--format", **fmt_kw)

    p_falg = sub.add_parser("falg", help="grid-function algebra operations")
    p_falg.add_argument("op", choices=("star", "power", "norm", "restrict", "induce", "embed"))
    p_falg.add_argument("--p", type=int, required=True)
    p_falg.add_argument("--e", type=int, required=True)
    p_falg.add_argument("--f", default=None, help='grid combo "a:c,..."')
    p_falg.add_argument("--g", default=None)
    p_falg.add_argument("--gamma", default=None, help='Gamma class "i:c,..." (embed)')
    p_falg.add_argument("--m", type=int, default=None, help="star power exponent")
    p_falg.add_argument("--format", **fmt_kw)

    p_syz = sub.add_parser("syzygy", help="Heller-shift dimensions and tensor-power cores")
    p_syz.add_argument(
        "op",
        choices=("dims", "core", "socle", "profile", "convergence", "recurrence"),
    )
    p_syz.add_argument("--group", required=True, help='group shape "p:e1,e2,..."')
    p_syz.add_argument("--module", default=None, help='module "i:a_i,..."')
    p_syz.add_argument("--n", type=int, default=None)
    p_syz.add_argument("--target", choices=("core", "socle"), default="core")
    p_syz.add_argument("--samples", default=None, help="comma-separated n values")
    p_syz.add_argument("--dmax", type=int, default=6)
    p_syz.add_argument("--window", default=None, help="n_lo,n_hi")
    p_syz.add_argument("--format", **fmt_kw)

    p_verify = sub.add_parser("verify", help="run a named invariant suite")
    p_verify.add_argument("suite", help="suite name or 'all'")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--format", **fmt_kw)

    return parser


def _cmd_tensor(args) -> int:
    if args.phi:
        phi = SparsePolynomial.parse(args.phi, 2)
        spec = FormSpec(PrimeModulus(args.p), 2, phi)
    else:
        spec = tensor_form(args.p)
    dec = decompose(spec, (args.a, args.b))
    payload = _gamma_payload(dec)
    pretty = [
        f"d{args.a} x d{args.b} = "
        + " + ".join(f"{m}*d{r}" for r, m in sorted(dec.coeffs.items()))
    ]
    csv_lines = ["r,multiplicity"] + [f"{r},{m}" for r, m in sorted(dec.coeffs.items())]
    _emit(payload, args.format, pretty, csv_lines)
    return EXIT_OK


def _cmd_kernel(args) -> int:
    if args.r is not None:
        if not args.t:
            raise ValueError("--t is required with --r")
        t = tuple(int(x) for x in args.t.split(","))
        if args.phi:
            spec = FormSpec(PrimeModulus(args.p), len(t), SparsePolynomial.parse(args.phi, len(t)))
        else:
            spec = tensor_form(args.p, len(t))
        val = D_int(spec, t, args.r)
        _emit({"t": list(t), "r": args.r, "D": val}, args.format, [f"D{t + (args.r,)} = {val}"])
        return EXIT_OK
    if args.t1 is None or args.t2 is None or args.t3 is None:
        raise ValueError("need either --t/--r or --t1/--t2/--t3")
    val = falgebra.kernel_D(Fraction(args.t1), Fraction(args.t2), Fraction(args.t3), args.p)
    _emit(
        {"t": [args.t1, args.t2, args.t3], "D": f"{val.numerator}/{val.denominator}"},
        args.format,
        [f"D({args.t1},{args.t2},{args.t3}) = {val}"],
    )
    return EXIT_OK


def remark_2_13_lengths() -> dict[str, int]:
    """Colengths of the two pushforward modules distinguishing the k-object
    and group-representation tensor products over a rank-2 group at p=3."""
    A = MonomialQuotientAlgebra(PrimeModulus(3), (3, 3, 3, 3))
    s1t1 = SparsePolynomial.parse("T1+T2", 4)
    s2t2 = SparsePolynomial.parse("T3+T4", 4)
    kobj = [s1t1, s2t2, SparsePolynomial.parse("T1+T3", 4), SparsePolynomial.parse("T2+T4", 4)]
    grp = [
        s1t1,
        s2t2,
        SparsePolynomial.parse("T1+T3+T1*T3", 4),
        SparsePolynomial.parse("T2+T4+T2*T4", 4),
    ]
    return {
        "kobject_tensor_length": quotient_dim(A, kobj),
        "group_tensor_length": quotient_dim(A, grp),
    }


def _cmd_lengths(args) -> int:
    if args.preset == "remark-2-13":
        payload = remark_2_13_lengths()
        _emit(payload, args.format)
        return EXIT_OK
    if args.preset is not None:
        raise ValueError(f"unknown preset {args.preset!r}")
    if args.p is None or args.caps is None:
        raise ValueError("--p and --caps are required without a preset")
    caps = tuple(int(x) for x in args.caps.split(","))
    A = MonomialQuotientAlgebra(PrimeModulus(args.p), caps)
    gens = []
    if args.gens:
        gens = [SparsePolynomial.parse(g, len(caps)) for g in args.gens.split(";") if g]
    val = quotient_dim(A, gens)
    _emit({"caps": list(caps), "length": val}, args.format, [f"length = {val}"])
    return EXIT_OK


def _emit_grid(f: GridFunction, fmt: str) -> None:
    if fmt == "csv":
        sys.stdout.write(f.to_csv())
    elif fmt == "json":
        print(f.to_json())
    else:
        n = f.grid_size
        for i, v in enumerate(f.values):
            print(f"f({Fraction(i, n)}) = {v}")


def _cmd_falg(args) -> int:
    p, e = args.p, args.e
    if args.op == "embed":
        if args.gamma is None:
            raise ValueError("embed requires --gamma")
        _emit_grid(embed(_parse_gamma(args.gamma), e, p), args.format)
        return EXIT_OK
    if args.f is None:
        raise ValueError(f"{args.op} requires --f")
    f = _parse_grid_combo(args.f, e, p)
    if args.op == "star":
        if args.g is None:
            raise ValueError("star requires --g")
        g = _parse_grid_combo(args.g, e, p)
        _emit_grid(falgebra.star(f, g), args.format)
    elif args.op == "power":
        if args.m is None:
            raise ValueError("power requires --m")
        _emit_grid(falgebra.star_power(f, args.m), args.format)
    elif args.op == "norm":
        val = falgebra.f_norm(f)
        _emit({"norm": f"{val.numerator}/{val.denominator}"}, args.format, [f"norm = {val}"])
    elif args.op == "restrict":
        _emit_grid(falgebra.restrict_R(f), args.format)
    elif args.op == "induce":
        _emit_grid(falgebra.induction_image(f), args.format)
    return EXIT_OK


def _profile_payload(prof) -> dict:
    return {
        "case": prof.case,
        "gamma": prof.base,
        "alpha": f"{prof.exponent.numerator}/{prof.exponent.denominator}",
        "C": prof.constant,
        "mu": f"{prof.mu.numerator}/{prof.mu.denominator}",
        "sigma2": f"{prof.sigma2.numerator}/{prof.sigma2.denominator}",
    }


def _cmd_syzygy(args) -> int:
    G = GroupShape.parse(args.group)
    if args.op == "dims":
        if args.n is None:
            raise ValueError("dims requires --n")
        payload = {
            "n": args.n,
            "dim": str(syzygies.syzygy_dim(G, args.n)),
            "socle": str(syzygies.socle_dim(G, args.n)),
        }
        _emit(payload, args.format, [f"dim = {payload['dim']}, socle = {payload['socle']}"])
        return EXIT_OK
    if args.module is None:
        raise ValueError(f"{args.op} requires --module")
    M = ModuleSpec.parse(args.module)
    if args.op in ("core", "socle"):
        if args.n is None:
            raise ValueError(f"{args.op} requires --n")
        fn = syzygies.core_dims if args.op == "core" else syzygies.socle_core_dims
        seq = fn(M, args.n, G)
        payload = {"sequence": [str(x) for x in seq]}
        csv_lines = ["n,value"] + [f"{n},{x}" for n, x in enumerate(seq, start=1)]
        _emit(payload, args.format, csv_lines[1:], csv_lines)
        return EXIT_OK
    if args.op == "profile":
        prof = syzygies.asymptotic_profile(M, G, args.target)
        _emit(_profile_payload(prof), args.format)
        return EXIT_OK
    if args.op == "convergence":
        if args.samples is None:
            raise ValueError("convergence requires --samples")
        samples = [int(x) for x in args.samples.split(",")]
        prof = syzygies.asymptotic_profile(M, G, args.target)
        fn = syzygies.core_dims if args.target == "core" else syzygies.socle_core_dims
        seq = fn(M, max(samples), G)
        report = syzygies.convergence_report(seq, prof, samples)
        payload = {"ratios": [[n, r] for n, r in report]}
        csv_lines = ["n,ratio"] + [f"{n},{r}" for n, r in report]
        _emit(payload, args.format, csv_lines[1:], csv_lines)
        return EXIT_OK
    # recurrence
    if args.window is None or args.n is None:
        raise ValueError("recurrence requires --n and --window")
    n_lo, n_hi = (int(x) for x in args.window.split(","))
    fn = syzygies.core_dims if args.target == "core" else syzygies.socle_core_dims
    seq = fn(M, args.n, G)
    found = syzygies.recurrence_order(seq, args.dmax, (n_lo, n_hi))
    if found is None:
        payload = {"order": None, "note": f"no recurrence of order <= {args.dmax} on this window"}
        _emit(payload, args.format, [payload["note"]])
    else:
        d, coeffs = found
        payload = {
            "order": d,
            "coefficients": [f"{c.numerator}/{c.denominator}" for c in coeffs],
        }
        _emit(payload, args.format, [f"order {d}: {[str(c) for c in coeffs]}"])
    return EXIT_OK


# --- invariant suites -----------------------------------------------------


def _suite_roundtrip(rng) -> tuple[bool, str]:
    for _ in range(200):
        g = GammaElement({rng.randint(1, 12): rng.randint(-5, 5) for _ in range(rng.randint(0, 5))})
        if kobjects.multiplicities_from_length(kobjects.length_of(g)) != g:
            return False, f"round trip failed on {g}"
    return True, "200 random classes round-tripped"


def _suite_symmetry(rng) -> tuple[bool, str]:
    spec = tensor_form(2)
    for t1, t2, r in itertools.product(range(1, 6), repeat=3):
        vals = {
            D_int(spec, (a, b), c)
            for a, b, c in itertools.permutations((t1, t2, r))
        }
        if len(vals) != 1:
            return False, f"asymmetry at {(t1, t2, r)}"
    return True, "D symmetric under all argument permutations (p=2, args<=5)"


def _suite_ring(rng) -> tuple[bool, str]:
    p = 2
    for _ in range(20):
        gs = [
            GammaElement({rng.randint(1, 4): rng.randint(-2, 2) for _ in range(2)})
            for _ in range(3)
        ]
        ab = gamma_product(gs[0], gs[1], p)
        bc = gamma_product(gs[1], gs[2], p)
        if gamma_product(ab, gs[2], p) != gamma_product(gs[0], bc, p):
            return False, "associativity failed"
        if ab != gamma_product(gs[1], gs[0], p):
            return False, "commutativity failed"
    return True, "gamma product associative and commutative on random triples"


def _suite_embedding(rng) -> tuple[bool, str]:
    p, e = 2, 2
    for a in range(1, p**e + 1):
        for b in range(1, p**e + 1):
            lhs = embed(gamma_product(GammaElement.delta(a), GammaElement.delta(b), p), e, p)
            rhs = falgebra.star(embed(GammaElement.delta(a), e, p), embed(GammaElement.delta(b), e, p))
            if lhs != rhs:
                return False, f"embedding not a ring map at ({a},{b})"
    return True, "embedding commutes with products on the basis (p=2, e=2)"


def _suite_norms(rng) -> tuple[bool, str]:
    p, e = 2, 2
    for _ in range(25):
        f = embed(GammaElement({rng.randint(1, 4): rng.randint(1, 3) for _ in range(2)}), e, p)
        g = embed(GammaElement({rng.randint(1, 4): rng.randint(1, 3) for _ in range(2)}), e, p)
        if falgebra.f_norm(falgebra.star(f, g)) != falgebra.f_norm(f) * falgebra.f_norm(g):
            return False, "norm multiplicativity failed on cone elements"
    return True, "norm multiplicative on 25 random cone pairs"


def _suite_dimension(rng) -> tuple[bool, str]:
    G = GroupShape(2, (1, 1))
    for _ in range(100):
        x = syzygies.StableClass.make(
            {rng.randint(-3, 3): rng.randint(-3, 3) for _ in range(2)}, rng.randint(0, 2)
        )
        y = syzygies.StableClass.make(
            {rng.randint(-3, 3): rng.randint(-3, 3) for _ in range(2)}, rng.randint(0, 2)
        )
        if syzygies.class_product(x, y, G).dim(G) != x.dim(G) * y.dim(G):
            return False, "dimension not multiplicative"
    return True, "stable-class dimension multiplicative on 100 random pairs"


def _suite_normalization(rng) -> tuple[bool, str]:
    M = ModuleSpec.parse("1:1,-1:2,0:1")
    g = M.gamma
    for n in (1, 5, 10, 20):
        coeffs = syzygies.power_coefficients(M, n)
        if sum(Fraction(a, g**n) for a in coeffs.values()) != 1:
            return False, f"normalization failed at n={n}"
    return True, "convolution powers stay normalized"


_SUITES = {
    "roundtrip": _suite_roundtrip,
    "symmetry": _suite_symmetry,
    "ring": _suite_ring,
    "embedding": _suite_embedding,
    "norms": _suite_norms,
    "dimension": _suite_dimension,
    "normalization": _suite_normalization,
}


def _cmd_verify(args) -> int:
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    for name in names:
        if name not in _SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {sorted(_SUITES)} or 'all'")
    rng = random.Random(args.seed)
    results = []
    all_ok = True
    for name in names:
        ok, detail = _SUITES[name](rng)
        all_ok &= ok
        results.append({"suite": name, "ok": ok, "detail": detail})
        if args.format == "pretty":
            print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    if args.format != "pretty":
        print(json.dumps({"results": results}))
    return EXIT_OK if all_ok else 1


_HANDLERS = {
    "tensor": _cmd_tensor,
    "kernel": _cmd_kernel,
    "lengths": _cmd_lengths,
    "falg": _cmd_falg,
    "syzygy": _cmd_syzygy,
    "verify": _cmd_verify,
}


def run(argv: list[str]) -> int:
    if not argv or argv[0] in ("-h", "--help"):
        _build_parser().print_help()
        return EXIT_OK if argv else EXIT_USAGE
    if argv[0] not in _SUBCOMMANDS:
        sys.stderr.write(f"unknown subcommand {argv[0]!r}\n")
        _build_parser().print_usage(sys.stderr)
        return EXIT_USAGE
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except CapExceededError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CAP
    except (ValueError, HypothesisError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
