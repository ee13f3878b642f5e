"""Command-line interface.

Every command prints JSON on standard output.  Exit status is 0 on success,
1 when a verification fails, and 2 on usage errors (including unparseable
permutations, cap violations and malformed model files).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .algebra import AlgebraElement, DegreeCapError, convolve, shuffle
from .bases import BasisId, T_from_R, expand_basis, mobius_R_from_T, omega_R, pic_series, solomon_idempotent
from .chen import CompositeSymbol, IntegralDescriptor, composite_value, eval_bracket_combination
from .expansion import Model, picard_terms, random_model
from .operators import ModelError, mat_to_json
from .perms import (
    PermutationError,
    SignedPermutation,
    compose,
    descent_set,
    inverse,
    parse_subset,
    regression_set,
    standardize,
)
from .verify import SUITES, VerifyOptions, run_suite


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None


def _combination_json(combination: dict) -> list[dict]:
    return [
        {"id": b.to_json(), "coef": f"{Fraction(c).numerator}/{Fraction(c).denominator}"}
        for b, c in sorted(combination.items())
    ]


def _load_model(args) -> Model:
    if getattr(args, "model", None):
        return Model.loads(Path(args.model).read_text())
    model = random_model(args.dim, args.seed)
    if args.lower is not None or args.upper is not None:
        model = model.with_window(args.lower if args.lower is not None else model.lower,
                                  args.upper if args.upper is not None else model.upper)
    return model


# -- commands ---------------------------------------------------------------


def cmd_perm(args) -> int:
    if args.action == "st":
        word = [int(tok) for tok in args.operands[0].replace(",", " ").split()]
        _emit({"word": list(word), "standardized": str(standardize(word, ties=args.ties))})
        return 0
    perms = [SignedPermutation.parse(text) for text in args.operands]
    if args.action == "compose":
        if len(perms) != 2:
            raise PermutationError("compose takes two permutations")
        _emit({"left": str(perms[0]), "right": str(perms[1]), "composite": str(compose(*perms))})
        return 0
    if args.action == "inverse":
        _emit({"perm": str(perms[0]), "inverse": str(inverse(perms[0]))})
        return 0
    s = perms[0]
    info = {
        "perm": str(s),
        "degree": s.degree,
        "inverse": str(inverse(s)),
        "regression_set": sorted(regression_set(s)),
    }
    if s.is_unsigned:
        info["descent_set"] = sorted(descent_set(s))
    _emit(info)
    return 0


def cmd_conv(args) -> int:
    factors = [AlgebraElement.basis(SignedPermutation.parse(text)) for text in args.perms]
    product = AlgebraElement.unit()
    for x in factors:
        product = convolve(product, x)
    _emit(product.to_json())
    return 0


def cmd_shuffle(args) -> int:
    u = [int(tok) for tok in args.u.replace(",", " ").split()]
    v = [int(tok) for tok in args.v.replace(",", " ").split()]
    terms = shuffle(u, v)
    _emit({"terms": [{"word": " ".join(map(str, w)), "mult": m} for w, m in sorted(terms.items())]})
    return 0


def cmd_basis(args) -> int:
    S = parse_subset(args.subset, args.n)
    basis_id = BasisId(args.family, args.n, S)
    out = {"id": basis_id.to_json(), "element": expand_basis(basis_id, extended=args.extended).to_json()}
    if args.family == "R":
        out["in_T"] = _combination_json(mobius_R_from_T(args.n, S))
    elif args.family == "T":
        out["in_R"] = _combination_json(T_from_R(args.n, S))
    _emit(out)
    return 0


def cmd_omega(args) -> int:
    _emit(omega_R(args.max_degree, args.basis).to_json())
    return 0


def cmd_sol(args) -> int:
    _emit({"n": args.n, "method": args.method, "element": solomon_idempotent(args.n, args.method).to_json()})
    return 0


def cmd_eval(args) -> int:
    model = _load_model(args)
    ev = model.evaluator()
    if args.kind == "angle":
        value = ev.angle(AlgebraElement.basis(SignedPermutation.parse(args.target)))
    elif args.kind == "bracket":
        value = eval_bracket_combination({IntegralDescriptor.parse(args.target): 1}, ev)
    elif args.kind == "composite":
        value = composite_value(CompositeSymbol(SignedPermutation.parse(args.target), args.tail), ev)
    else:
        n = int(args.target)
        value = picard_terms(model, n, ev)[n]
    _emit({"kind": args.kind, "target": args.target, "model": model.to_json(), "value": mat_to_json(value)})
    return 0


def cmd_verify(args) -> int:
    opts = VerifyOptions(
        max_degree=args.max_degree,
        max_total_degree=args.max_total_degree,
        dim=args.dim,
        seed=args.seed,
        models=args.models,
        lower=args.lower,
        upper=args.upper,
        basis=args.basis,
        model=Model.loads(Path(args.model).read_text()) if args.model else None,
    )
    report = run_suite(args.suite, opts)
    _emit(report)
    return 0 if report["passed"] else 1


def cmd_dump(args) -> int:
    if args.what == "model":
        sys.stdout.write(_load_model(args).dumps())
        return 0
    _emit(pic_series(args.max_degree).to_json())
    return 0


# -- parser -----------------------------------------------------------------


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", help="model JSON file; overrides --dim/--seed")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lower", type=_fraction)
    p.add_argument("--upper", type=_fraction)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperchen", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("perm", help="statistics, composition, inversion, standardization")
    p.add_argument("action", choices=["info", "compose", "inverse", "st"])
    p.add_argument("operands", nargs="+")
    p.add_argument("--ties", choices=["reject", "stable"], default="reject")
    p.set_defaults(func=cmd_perm)

    p = sub.add_parser("conv", help="convolution product of signed permutations")
    p.add_argument("perms", nargs="+")
    p.set_defaults(func=cmd_conv)

    p = sub.add_parser("shuffle", help="shuffle product of two integer words")
    p.add_argument("u")
    p.add_argument("v")
    p.set_defaults(func=cmd_shuffle)

    p = sub.add_parser("basis", help="expand R, T or D basis elements")
    p.add_argument("family", choices=["R", "T", "D"])
    p.add_argument("n", type=int)
    p.add_argument("subset", help='space-separated subset of 1..n-1; "" for the empty set')
    p.add_argument("--extended", action="store_true", help="allow degree 7")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("omega", help="the logarithm of sum_n R_∅^n")
    p.add_argument("--max-degree", type=int, default=3)
    p.add_argument("--basis", choices=["T", "canonical"], default="T")
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("sol", help="Solomon's Eulerian idempotent")
    p.add_argument("n", type=int)
    p.add_argument("--method", choices=["descent", "canonical", "log"], default="descent")
    p.set_defaults(func=cmd_sol)

    p = sub.add_parser("eval", help="evaluate an iterated integral on a model")
    p.add_argument("kind", choices=["angle", "bracket", "composite", "picard"])
    p.add_argument("target", help="permutation, bracket word, composite head, or order")
    p.add_argument("--tail", type=int, default=1, help="trailing H-letters for composite symbols")
    _add_model_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=["all", *SUITES])
    p.add_argument("--max-degree", type=int)
    p.add_argument("--max-total-degree", type=int)
    p.add_argument("--models", type=int, default=5, help="number of seeded random models")
    p.add_argument("--basis", choices=["T", "canonical"], default="T")
    _add_model_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dump", help="write a model file or a reference series")
    p.add_argument("what", choices=["model", "pic"])
    p.add_argument("--max-degree", type=int, default=3)
    _add_model_flags(p)
    p.set_defaults(func=cmd_dump)
    return parser


def _attach_window_values(argv: list[str]) -> list[str]:
    # argparse reads "-1/2" as an option; glue window bounds to their flag.
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in ("--lower", "--upper"):
            value = next(it, None)
            out.append(tok if value is None else f"{tok}={value}")
        else:
            out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_attach_window_values(sys.argv[1:] if argv is None else list(argv)))
    try:
        return args.func(args)
    except (PermutationError, DegreeCapError, ModelError, ValueError, OSError) as exc:
        sys.stderr.write(f"hyperchen {args.verb}: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
