"""Verification suites producing deterministic JSON reports.

Each suite returns a list of :class:`CheckReport`.  On failure a report
carries the first mismatch with both sides serialized exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .algebra import (
    MAX_DEGREE,
    AlgebraElement,
    convolve,
    internal_product,
    series_exp,
    series_log,
    shuffle,
    shuffle_by_insertion,
    shuffle_convolution_relation_check,
)
from .bases import (
    BasisId,
    T_from_R,
    decompose,
    descent_algebra_product,
    expand_basis,
    expand_combination,
    mobius_R_from_T,
    omega_R,
    pic_series,
    solomon_idempotent,
    structure_table,
    substitute,
    t_product_rule,
)
from .chen import ChenEvaluator, chen_product_sides, general_chen_sides, lemma51_sides
from .expansion import (
    Model,
    bch_sides,
    corollary_series,
    gl_theorem_sides,
    lemma_symbols,
    magnus_sides,
    random_model,
    recursion_sides,
)
from .operators import Matrix, mat_to_json, split_hamiltonian
from .perms import SignedPermutation, hyperoctahedral_group, subsets, symmetric_group

GOLDEN_PRODUCTS = (
    ("2 3 1", "1", ("2 3 1 4", "2 4 1 3", "3 4 1 2", "3 4 2 1")),
    ("1 2", "2 1", ("1 2 4 3", "1 3 4 2", "1 4 3 2", "2 3 4 1", "2 4 3 1", "3 4 2 1")),
    ("-2 3 1", "-1", ("-2 3 1 -4", "-2 4 1 -3", "-3 4 1 -2", "-3 4 2 -1")),
    ("1 -2", "2 -1", ("1 -2 4 -3", "1 -3 4 -2", "1 -4 3 -2", "2 -3 4 -1", "2 -4 3 -1", "3 -4 2 -1")),
)

REFERENCE_REGRESSION_FREE = {
    1: ("1", "-1"),
    2: ("1 2", "-1 2", "2 -1", "-2 -1"),
    3: ("1 2 3", "-1 2 3", "1 3 -2", "-1 3 -2", "2 -1 3", "-2 -1 3",
        "2 3 -1", "-2 3 -1", "3 -1 2", "-3 -1 2", "3 -2 -1", "-3 -2 -1"),
}

SECOND_WINDOW = (Fraction(-1, 2), Fraction(0))


@dataclass
class CheckReport:
    name: str
    params: dict
    passed: bool
    mismatch: dict | None = None

    def to_json(self) -> dict:
        out = {"name": self.name, "params": self.params, "passed": self.passed}
        if self.mismatch is not None:
            out["mismatch"] = self.mismatch
        return out


@dataclass
class VerifyOptions:
    max_degree: int | None = None
    max_total_degree: int | None = None
    dim: int = 2
    seed: int = 0
    models: int = 5
    lower: Fraction | None = None
    upper: Fraction | None = None
    basis: str = "T"
    model: Model | None = None
    extra: dict = field(default_factory=dict)

    def model_list(self) -> list[Model]:
        if self.model is not None:
            found = [self.model]
        else:
            found = [random_model(self.dim, self.seed + i) for i in range(self.models)]
        if self.lower is not None or self.upper is not None:
            found = [m.with_window(self.lower if self.lower is not None else m.lower,
                                   self.upper if self.upper is not None else m.upper) for m in found]
        return found

    def windows(self) -> list[tuple[Fraction, Fraction]]:
        """Two windows: the models' own and a second distinct one."""
        first = self.model_list()[0]
        own = (first.lower, first.upper)
        second = SECOND_WINDOW if own != SECOND_WINDOW else (Fraction(-2), Fraction(0))
        return [own, second]


def _element_mismatch(label, lhs: AlgebraElement, rhs: AlgebraElement) -> dict:
    return {"at": label, "lhs": lhs.to_json(), "rhs": rhs.to_json()}


def _matrix_mismatch(label, lhs: Matrix, rhs: Matrix) -> dict:
    return {"at": label, "lhs": mat_to_json(lhs), "rhs": mat_to_json(rhs)}


def _first_matrix_mismatch(sides: Iterable[tuple[Matrix, Matrix]], labels: Iterable) -> dict | None:
    for label, (lhs, rhs) in zip(labels, sides):
        if lhs != rhs:
            return _matrix_mismatch(label, lhs, rhs)
    return None


def _model_params(model: Model, index: int, opts: VerifyOptions) -> dict:
    params = {"window": [str(model.lower), str(model.upper)], "dim": model.dim}
    if opts.model is None:
        params["seed"] = opts.seed + index
    return params


# -- algebraic suites -------------------------------------------------------


def suite_golden(opts: VerifyOptions) -> list[CheckReport]:
    reports = []
    for left, right, expected in GOLDEN_PRODUCTS:
        x = AlgebraElement.basis(SignedPermutation.parse(left))
        y = AlgebraElement.basis(SignedPermutation.parse(right))
        got = convolve(x, y)
        want = AlgebraElement.from_sum(got.degree, (SignedPermutation.parse(p) for p in expected))
        reports.append(CheckReport(
            "convolution_golden", {"left": left, "right": right}, got == want,
            None if got == want else _element_mismatch("product", got, want),
        ))
    return reports


def suite_support(opts: VerifyOptions) -> list[CheckReport]:
    top = opts.max_total_degree or 5
    bad = None
    pairs = 0
    for total in range(2, top + 1):
        for n in range(1, total):
            m = total - n
            expected = math.comb(total, n)
            for s in hyperoctahedral_group(n):
                for b in hyperoctahedral_group(m):
                    pairs += 1
                    size = len(convolve(AlgebraElement.basis(s), AlgebraElement.basis(b)))
                    if size != expected and bad is None:
                        bad = {"at": [str(s), str(b)], "support": size, "expected": expected}
    return [CheckReport("support_count", {"max_total_degree": top, "pairs": pairs}, bad is None, bad)]


def suite_regression(opts: VerifyOptions) -> list[CheckReport]:
    top = opts.max_degree or 7
    reports = []
    for n in range(1, top + 1):
        count = len(expand_basis(BasisId("R", n), extended=n > MAX_DEGREE))
        expected = 2 * math.factorial(n)
        reports.append(CheckReport(
            "regression_free_count", {"n": n, "count": count, "expected": expected}, count == expected,
            None if count == expected else {"at": n, "count": count, "expected": expected},
        ))
    for n, listed in REFERENCE_REGRESSION_FREE.items():
        got = expand_basis(BasisId("R", n))
        want = AlgebraElement.from_sum(n, (SignedPermutation.parse(p) for p in listed))
        reports.append(CheckReport(
            "regression_free_reference", {"n": n}, got == want,
            None if got == want else _element_mismatch(n, got, want),
        ))
    return reports


def suite_mobius(opts: VerifyOptions) -> list[CheckReport]:
    top = opts.max_degree or 5
    bad = None
    checked = 0
    for n in range(1, top + 1):
        for S in subsets(n):
            checked += 1
            R_id = BasisId("R", n, S)
            via_T = substitute(mobius_R_from_T(n, S), T_from_R)
            T_expansion = expand_basis(BasisId("T", n, S))
            ok = via_T == {R_id: 1}
            ok = ok and substitute(T_from_R(n, S), mobius_R_from_T) == {BasisId("T", n, S): 1}
            ok = ok and expand_combination(mobius_R_from_T(n, S)) == expand_basis(R_id)
            ok = ok and expand_combination(T_from_R(n, S)) == T_expansion
            if not ok and bad is None:
                bad = {"at": {"n": n, "S": sorted(S)}}
    return [CheckReport("mobius_round_trip", {"max_degree": top, "subsets": checked}, bad is None, bad)]


def suite_products(opts: VerifyOptions) -> list[CheckReport]:
    top = opts.max_total_degree or 6
    reports = []
    tables = {}
    for family, rule in (("T", t_product_rule), ("D", descent_algebra_product)):
        table = structure_table(family, top)
        tables[family] = table
        bad = None
        for ((n, S), (m, U)), coords in table.items():
            expected = rule((n, S), (m, U))
            if coords != {(expected.n, expected.S): 1} and bad is None:
                bad = {"at": [{"n": n, "S": sorted(S)}, {"n": m, "S": sorted(U)}],
                       "expected": expected.to_json()}
        reports.append(CheckReport(f"{family}_product_rule", {"max_total_degree": top, "pairs": len(table)},
                                   bad is None, bad))
    iso = tables["T"] == tables["D"] and all(v is not None for v in tables["T"].values())
    reports.append(CheckReport("regression_descent_isomorphism", {"max_total_degree": top}, iso,
                               None if iso else {"at": "structure constants differ"}))
    independent = all(len(expand_basis(BasisId("T", n, S))) > 0 for n in range(1, min(top, 5) + 1)
                      for S in subsets(n))
    independent = independent and all(
        decompose(expand_basis(BasisId("T", n, S)), "T") == {BasisId("T", n, S): 1}
        for n in range(1, min(top, 5) + 1) for S in subsets(n)
    )
    reports.append(CheckReport("T_linear_independence", {"max_degree": min(top, 5)}, independent))
    return reports


def suite_omega(opts: VerifyOptions) -> list[CheckReport]:
    top = opts.max_degree or 5
    by_T = omega_R(top, "T")
    by_canonical = omega_R(top, "canonical")
    pic = pic_series(top)
    by_log = series_log(pic)
    reports = []
    for name, lhs, rhs in (
        ("omega_T_vs_canonical", by_T, by_canonical),
        ("omega_vs_log_pic", by_T, by_log),
        ("exp_omega_vs_pic", series_exp(by_T), pic),
    ):
        bad = None
        for n in range(top + 1):
            if lhs[n] != rhs[n]:
                bad = _element_mismatch(n, lhs[n], rhs[n])
                break
        reports.append(CheckReport(name, {"max_degree": top}, bad is None, bad))
    return reports


def suite_corollary(opts: VerifyOptions) -> list[CheckReport]:
    omega = omega_R(3)
    reference = corollary_series()
    reports = []
    for n in (1, 2, 3):
        ok = omega[n] == reference[n]
        sizes = {str(c): sum(1 for v in omega[n].terms.values() if v == c) for c in sorted(set(omega[n].terms.values()))}
        reports.append(CheckReport("third_order_corollary", {"degree": n, "class_sizes": sizes}, ok,
                                   None if ok else _element_mismatch(n, omega[n], reference[n])))
    return reports


def suite_shuffle(opts: VerifyOptions) -> list[CheckReport]:
    top = opts.max_total_degree or 5
    bad = None
    pairs = 0
    for total in range(2, top + 1):
        for n in range(1, total):
            for s in hyperoctahedral_group(n):
                for b in hyperoctahedral_group(total - n):
                    pairs += 1
                    if not shuffle_convolution_relation_check(s, b) and bad is None:
                        bad = {"at": [str(s), str(b)]}
    reports = [CheckReport("shuffle_convolution_relation", {"max_total_degree": top, "pairs": pairs},
                           bad is None, bad)]
    bad = None
    letters = "abcd"
    for k in range(5):
        for u_len in range(k + 1):
            u, v = tuple(letters[:u_len]), tuple(letters[u_len:k])
            for uu, vv in ((u, v), (u + u[:1], v)):
                if shuffle(uu, vv) != shuffle_by_insertion(uu, vv) and bad is None:
                    bad = {"at": ["".join(uu), "".join(vv)]}
    reports.append(CheckReport("shuffle_recursions_agree", {"max_length": 4}, bad is None, bad))
    return reports


def suite_sol(opts: VerifyOptions) -> list[CheckReport]:
    top = opts.max_degree or 4
    reports = []
    for n in range(1, top + 1):
        forms = {m: solomon_idempotent(n, m) for m in ("descent", "canonical", "log")}
        agree = forms["descent"] == forms["canonical"] == forms["log"]
        sol = forms["descent"]
        idem = internal_product(sol, sol) == sol
        reports.append(CheckReport("solomon_idempotent", {"n": n, "formulas_agree": agree, "idempotent": idem},
                                   agree and idem,
                                   None if idem else _element_mismatch(n, internal_product(sol, sol), sol)))
    return reports


# -- analytic suites --------------------------------------------------------


def suite_chen(opts: VerifyOptions) -> list[CheckReport]:
    top = opts.max_total_degree or 4
    reports = []
    for index, model in enumerate(opts.model_list()):
        A, B = split_hamiltonian(model.H, model.P)
        # a random B independent of A exercises the formula beyond the split
        other = random_model(model.dim, 10_000 + (opts.seed + index)).H
        for label, (opA, opB) in (("split", (A, B)), ("independent", (model.H, other))):
            ev = ChenEvaluator({"a": opA, "b": opB}, model.lower, model.upper)
            bad = None
            pairs = 0
            for total in range(2, top + 1):
                for n in range(1, total):
                    for s in hyperoctahedral_group(n):
                        for b in hyperoctahedral_group(total - n):
                            pairs += 1
                            lhs, rhs = chen_product_sides(AlgebraElement.basis(s), AlgebraElement.basis(b), ev)
                            if lhs != rhs and bad is None:
                                bad = _matrix_mismatch([str(s), str(b)], lhs, rhs)
            params = _model_params(model, index, opts) | {"operators": label, "pairs": pairs,
                                                          "max_total_degree": top}
            reports.append(CheckReport("chen_product", params, bad is None, bad))
    return reports


def suite_general_chen(opts: VerifyOptions) -> list[CheckReport]:
    top = opts.max_total_degree or 4
    reports = []
    for index, model in enumerate(opts.model_list()):
        base = opts.seed + index
        ops = [random_model(model.dim, 20_000 + 7 * base + j).H for j in range(top)]
        bad = None
        pairs = 0
        for total in range(2, top + 1):
            for n in range(1, total):
                for alpha in symmetric_group(n):
                    for beta in symmetric_group(total - n):
                        pairs += 1
                        lhs, rhs = general_chen_sides(alpha, beta, ops[:n], ops[n:total], model.lower, model.upper)
                        if lhs != rhs and bad is None:
                            bad = _matrix_mismatch([str(alpha), str(beta)], lhs, rhs)
        params = _model_params(model, index, opts) | {"pairs": pairs, "max_total_degree": top}
        reports.append(CheckReport("general_chen", params, bad is None, bad))
    return reports


def _cap_for(model: Model, requested: int | None) -> int:
    default = 4 if model.dim <= 2 else 3
    return min(requested, default) if requested else default


def suite_theorem(opts: VerifyOptions) -> list[CheckReport]:
    reports = []
    for index, model in enumerate(opts.model_list()):
        N = _cap_for(model, opts.max_degree)
        for lower, upper in opts.windows():
            windowed = model.with_window(lower, upper)
            sides = gl_theorem_sides(windowed, N)
            bad = _first_matrix_mismatch(sides, range(1, N + 1))
            params = _model_params(windowed, index, opts) | {"max_degree": N}
            reports.append(CheckReport("gl_theorem", params, bad is None, bad))
    return reports


def suite_lemma(opts: VerifyOptions) -> list[CheckReport]:
    reports = []
    for index, model in enumerate(opts.model_list()):
        ev = model.evaluator()
        cases = [("B1", lemma_symbols(1, 1)), ("B2", lemma_symbols(2, 1)),
                 ("B3_regression_free", lemma_symbols(3, 1, regression_free=True)),
                 ("B1_tail2", lemma_symbols(1, 2)), ("B2_tail2", lemma_symbols(2, 2))]
        for label, symbols in cases:
            bad = None
            for c in symbols:
                lhs, rhs = lemma51_sides(c, ev)
                if lhs != rhs:
                    bad = _matrix_mismatch(f"<{c.head}; {c.tail}>", lhs, rhs)
                    break
            params = _model_params(model, index, opts) | {"symbols": label, "count": len(symbols)}
            reports.append(CheckReport("composite_shuffle_lemma", params, bad is None, bad))
    return reports


def suite_recursion(opts: VerifyOptions) -> list[CheckReport]:
    reports = []
    for index, model in enumerate(opts.model_list()):
        for k, n in ((1, 2), (1, 3), (2, 3)):
            lhs, rhs = recursion_sides(model, k, n)
            params = _model_params(model, index, opts) | {"k": k, "n": n}
            reports.append(CheckReport("regression_free_recursion", params, lhs == rhs,
                                       None if lhs == rhs else _matrix_mismatch([k, n], lhs, rhs)))
    return reports


def suite_magnus(opts: VerifyOptions) -> list[CheckReport]:
    reports = []
    top = opts.max_degree or 3
    exp_ok = series_exp(omega_R(top)) == pic_series(top)
    reports.append(CheckReport("exp_omega_is_pic", {"max_degree": top}, exp_ok))
    for index, model in enumerate(opts.model_list()):
        N = _cap_for(model, top)
        bad = _first_matrix_mismatch(magnus_sides(model, N), range(N + 1))
        reports.append(CheckReport("magnus", _model_params(model, index, opts) | {"max_degree": N}, bad is None, bad))
    return reports


def suite_bch(opts: VerifyOptions) -> list[CheckReport]:
    reports = []
    for index, model in enumerate(opts.model_list()):
        N = _cap_for(model, opts.max_degree)
        bad = _first_matrix_mismatch(bch_sides(model, N), range(1, N + 1))
        reports.append(CheckReport("bch", _model_params(model, index, opts) | {"max_degree": N}, bad is None, bad))
    return reports


SUITES: dict[str, Callable[[VerifyOptions], list[CheckReport]]] = {
    "golden": suite_golden,
    "support": suite_support,
    "regression": suite_regression,
    "mobius": suite_mobius,
    "products": suite_products,
    "omega": suite_omega,
    "corollary": suite_corollary,
    "shuffle": suite_shuffle,
    "sol": suite_sol,
    "chen": suite_chen,
    "general-chen": suite_general_chen,
    "theorem": suite_theorem,
    "lemma": suite_lemma,
    "recursion": suite_recursion,
    "magnus": suite_magnus,
    "bch": suite_bch,
}


def run_suite(name: str, opts: VerifyOptions) -> dict:
    names = list(SUITES) if name == "all" else [name]
    checks = []
    for suite in names:
        for report in SUITES[suite](opts):
            checks.append({"suite": suite} | report.to_json())
    return {
        "suite": name,
        "seed": opts.seed,
        "passed": all(c["passed"] for c in checks),
        "checks": checks,
    }
