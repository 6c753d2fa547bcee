"""
The verification grid behind `ffcount verify`.

Every closed form is compared with its enumeration oracle for q in the grid and every n
with q^n inside the budget. Property suites run exhaustively on small fields and on
seeded random samples beyond. Printed formulas that disagree with the implemented ones
are recorded as errata, not failures.

Each check and erratum is appended to the metrics JSONL (see ffcount.metrics).
"""

from __future__ import annotations

import cmath
import itertools
import random
import sys
import time
from dataclasses import asdict, dataclass, field as dc_field
from math import gcd

from config import (
    COROLLARY_GRID,
    DEFAULT_GRID,
    EXHAUSTIVE_LIMIT,
    POLY_BUDGET,
    PROPERTY_SAMPLES,
    RANDOM_SEED,
    ROOT_TOLERANCE,
    VERIFY_BUDGET,
)
from ffcount.counting import (
    CoeffTarget,
    count_f3_brute,
    count_f_brute,
    count_f_closed,
    count_f_general,
    count_i_brute,
    count_i_closed,
    f3_from_lpolys,
    f3_set_size,
    p_free_invert,
    p_free_transform,
    poly_traces,
    power_coeff_transform,
    published_f_theorem,
    published_formula_f3,
    published_p_free_invert,
    published_reduction,
    reduce_target,
    trace_distribution,
    unsquared_power_transform,
)
from ffcount.curves import (
    L1_Q3,
    L2_Q3,
    L3_Q3_PRINTED,
    CurveModel,
    case_tag,
    classify,
    closed_form_excess,
    closed_lpoly,
    corollary_table,
    count_points,
    curve_lpoly,
    published_corollary_table,
    published_excess,
    root_descriptor,
    weil_check,
)
from ffcount.ffield import FieldElement, Poly, enumerate_field, field, find_irreducible, frobenius, prime_power, tower
from ffcount.metrics import log_result
from ffcount.qforms import form_invariants, profile, qf_value_count, qf_zero_count, radical_dim
from ffcount.traces import artin_schreier_holds, char_poly, min_poly, newton_identity_holds, trace1, trace2, trace_table

# errors a section may raise; anything else is a bug and propagates
_EXPECTED_ERRORS = (ValueError, ArithmeticError, RuntimeError)


@dataclass
class CheckRecord:
    check: str
    inputs: dict
    expected_source: str   # "oracle" or "published"
    expected: object
    got: object
    passed: bool


@dataclass
class Erratum:
    name: str
    inputs: dict
    printed: object
    implemented: object
    note: str = ""


@dataclass
class VerifyReport:
    grid: dict
    checks: list[CheckRecord] = dc_field(default_factory=list)
    errata: list[Erratum] = dc_field(default_factory=list)
    timing: dict | None = None

    @property
    def failures(self) -> list[CheckRecord]:
        return [c for c in self.checks if not c.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        out = {
            "grid": self.grid,
            "passed": self.passed,
            "summary": {"checks": len(self.checks), "failed": len(self.failures), "errata": len(self.errata)},
            "checks": [asdict(c) for c in self.checks],
            "errata": [asdict(e) for e in self.errata],
        }
        if self.timing is not None:
            out["timing"] = self.timing
        return out


class GridVerifier:
    def __init__(
        self,
        grid: tuple[int, ...] = DEFAULT_GRID,
        budget: int | None = None,
        poly_budget: int | None = None,
        samples: int | None = None,
        seed: int | None = None,
        quiet: bool = False,
        timing: bool = False,
        metrics_path: str | None = None,
    ):
        for q in grid:
            prime_power(q)
        self.grid = tuple(grid)
        self.limit = VERIFY_BUDGET if budget is None else budget
        self.poly_limit = POLY_BUDGET if poly_budget is None else poly_budget
        self.samples = PROPERTY_SAMPLES if samples is None else samples
        self.seed = RANDOM_SEED if seed is None else seed
        self.quiet = quiet
        self.timing = timing
        self.metrics_path = metrics_path
        self.report = VerifyReport(
            {"q": list(self.grid), "budget": self.limit, "samples": self.samples, "seed": self.seed}
        )
        self._lpolys: dict[str, object] = {}

    # -- bookkeeping ---------------------------------------------------------

    def progress(self, message: str) -> None:
        if not self.quiet:
            print(f"  [{message}]", file=sys.stderr)

    def check(self, name: str, inputs: dict, expected, got, source: str = "oracle") -> bool:
        passed = bool(expected == got)
        self.report.checks.append(CheckRecord(name, inputs, source, expected, got, passed))
        log_result("check", name, inputs, "pass" if passed else "fail", expected, got, path=self.metrics_path)
        if not passed:
            self.progress(f"FAIL {name} {inputs}: expected {expected}, got {got}")
        return passed

    def erratum(self, name: str, inputs: dict, printed, implemented, note: str = "") -> None:
        self.report.errata.append(Erratum(name, inputs, printed, implemented, note))
        log_result("erratum", name, inputs, "recorded", printed, implemented, note, path=self.metrics_path)

    def degrees(self, q: int, start: int = 1, stop: int | None = None) -> list[int]:
        """n >= start with q^n inside the enumeration limit (and n <= stop)."""
        out = []
        n = start
        while q ** n <= self.limit and (stop is None or n <= stop):
            out.append(n)
            n += 1
        return out

    def run(self) -> VerifyReport:
        sections = [
            ("golden L-polynomials", self.golden_lpolys),
            ("excess", self.excess_grid),
            ("quadratic form", self.quadratic_form),
            ("F counts", self.f_counts),
            ("I counts", self.i_counts),
            ("general targets", self.general_targets),
            ("power transform", self.power_transform),
            ("root tables", self.root_tables),
            ("properties", self.properties),
            ("moebius", self.moebius),
            ("three coefficients", self.three_coefficients),
            ("representation", self.representation),
        ]
        timing = {}
        for name, section in sections:
            self.progress(f"{name}...")
            start = time.time()
            try:
                section()
            except _EXPECTED_ERRORS as exc:
                self.check(f"{name} section", {}, "no error", f"{type(exc).__name__}: {exc}")
            timing[name] = round(time.time() - start, 3)
        if self.timing:
            self.report.timing = timing
        self.progress(
            f"{len(self.report.checks)} checks, {len(self.report.failures)} failed, {len(self.report.errata)} errata"
        )
        return self.report

    # -- sections ------------------------------------------------------------

    def golden_lpolys(self) -> None:
        if 3 not in self.grid:
            return
        for name, golden in (("c1", L1_Q3), ("c2", L2_Q3)):
            curve = CurveModel.named(name, 3)
            if 3 ** curve.genus > self.limit:
                self.progress(f"skipping {name}: 3^{curve.genus} is over the budget")
                continue
            L = curve_lpoly(curve, "brute", self.limit)
            self._lpolys[name] = L
            self.check(f"L-polynomial of {name}", {"q": 3}, list(golden.coeffs), list(L.coeffs), "published")

        c3 = CurveModel.c3(3)
        if 3 ** c3.genus <= self.limit:
            L3 = curve_lpoly(c3, "brute", self.limit)
            self._lpolys["c3"] = L3
            suspect = L3_Q3_PRINTED.functional_equation_violations()
            differing = [i for i, (a, b) in enumerate(zip(L3.coeffs, L3_Q3_PRINTED.coeffs)) if a != b]
            self.check(
                "L-polynomial of c3 agrees with print outside its inconsistent coefficients",
                {"q": 3, "inconsistent": suspect},
                suspect,
                differing,
                "published",
            )
            for i in differing:
                self.erratum(
                    "printed L-polynomial coefficient",
                    {"q": 3, "curve": "c3", "index": i},
                    L3_Q3_PRINTED.coeffs[i],
                    L3.coeffs[i],
                    "the printed value breaks c_(2g-i) = q^(g-i) c_i",
                )

        expected_class = {"c1": "supersingular", "c2": "not-supersingular", "c3": "not-supersingular"}
        for name, L in self._lpolys.items():
            self.check(f"classification of {name}", {"q": 3}, expected_class[name], classify(L))
            self.check(f"Weil conditions for {name}", {"q": 3}, True, weil_check(L).passed)

    def excess_grid(self) -> None:
        for q in self.grid:
            p, _ = prime_power(q)
            c1 = CurveModel.c1(q)
            for n in self.degrees(q):
                inputs = {"q": q, "n": n, "case": case_tag(q, n)}
                points = count_points(c1, n, "brute", self.limit).value
                self.check("closed-form excess", inputs, points - q ** n - 1, closed_form_excess(q, n))
                zero = qf_zero_count(q, n, "brute", self.limit).value
                self.check("#C = q N + 1", inputs, points, q * zero + 1)
                self.check("q F(n,0,0) = N", inputs, zero, q * count_f_brute(q, n, budget=self.limit).value)
                self.check("closed zero count", inputs, zero, qf_zero_count(q, n, "closed").value)
            for n in range(1, 4 * p + 1):
                printed, implemented = published_excess(q, n), closed_form_excess(q, n)
                if printed != implemented:
                    self.erratum(
                        "excess display",
                        {"q": q, "n": n, "case": case_tag(q, n)},
                        printed,
                        implemented,
                        "sign or exponent of the printed excess",
                    )

    def quadratic_form(self) -> None:
        for q in self.grid:
            p, _ = prime_power(q)
            for n in self.degrees(q):
                inputs = {"q": q, "n": n}
                w = radical_dim(q, n, budget=self.limit)
                self.check("radical dimension by linear algebra", inputs, w, form_invariants(tower(q, n)).w)
                prof = profile(q, n, "brute", self.limit)
                flat = (n % 2 == 0 and gcd(n, p) == 1) or (n % 2 == 1 and n % p == 0)
                self.check("N = q^(n-1) exactly in the odd-rank cases", inputs, flat, prof.zero_count == q ** (n - 1))
                for c in range(1, q):
                    self.check(
                        "value count closed vs enumeration",
                        {**inputs, "c": c},
                        qf_value_count(q, n, c, "brute", self.limit),
                        qf_value_count(q, n, c, "closed"),
                    )

    def f_counts(self) -> None:
        for q in self.grid:
            for n in self.degrees(q):
                inputs = {"q": q, "n": n, "case": case_tag(q, n)}
                closed = count_f_closed(q, n).value
                self.check("F closed vs enumeration", inputs, count_f_brute(q, n, budget=self.limit).value, closed)
            for n in range(3, 4 * prime_power(q)[0] + 1):
                printed = published_f_theorem(q, n)
                closed = count_f_closed(q, n).value
                if printed != closed:
                    self.erratum("F theorem display", {"q": q, "n": n}, printed, closed, "follows the excess display")
        if 3 in self.grid:
            for n, value in ((3, 3), (5, 21), (6, 99)):
                if 3 ** n <= self.limit:
                    self.check("F_3(n,0,0) anchor", {"q": 3, "n": n}, value, count_f_brute(3, n, budget=self.limit).value)

    def i_counts(self) -> None:
        for q in self.grid:
            def brute_f(q_: int, m: int) -> int:
                return count_f_brute(q_, m, budget=self.limit).value

            for n in range(2, 8):
                if q ** (n - 2) > self.poly_limit or q ** n > self.limit:
                    break
                inputs = {"q": q, "n": n}
                brute = count_i_brute(q, n, budget=self.poly_limit).value
                self.check("I closed vs enumeration", inputs, brute, count_i_closed(q, n).value)
                self.check("inversion of enumerated F", inputs, brute, count_i_closed(q, n, brute_f, "brute").value)
                if q == 3 and n in (2, 5, 6):
                    self.check("I_3(n,0,0) anchor", inputs, {2: 0, 5: 4, 6: 15}[n], brute)

    def general_targets(self) -> None:
        for q in self.grid:
            for n in self.degrees(q, stop=5):
                inputs = {"q": q, "n": n}
                dist = trace_distribution(tower(q, n), self.limit)
                self.check("(T1, T2) classes partition the field", inputs, q ** n, sum(dist.values()))
                uniform_claims, shifted = [], []
                for t1, t2 in itertools.product(range(q), repeat=2):
                    target = CoeffTarget(t1, t2)
                    at = {**inputs, "t1": t1, "t2": t2}
                    brute = dist[(t1, t2)]
                    self.check("F general target closed vs enumeration", at, brute, count_f_general(q, n, target).value)
                    reduced = reduce_target(q, n, target)
                    if reduced.uniform:
                        self.check("uniform count when p | n and t1 != 0", at, q ** (n - 2), brute)
                        if dist[(0, 1)] != brute:
                            uniform_claims.append([t1, t2, dist[(0, 1)], brute])
                        continue
                    self.check("reduction keeps the count", at, brute, dist[(reduced.t1, reduced.t2)])
                    if t1 == 0:
                        continue
                    printed = published_reduction(q, n, target)
                    if dist[printed] != brute:
                        shifted.append([t1, t2, dist[printed], brute])
                if uniform_claims:
                    self.erratum(
                        "p | n reduction claim",
                        inputs,
                        [row[:3] for row in uniform_claims],
                        [row[:2] + row[3:] for row in uniform_claims],
                        "printed F(n,t1,t2) = F(n,0,1); t2 is free once t1 != 0",
                    )
                if shifted:
                    self.erratum(
                        "reduction display",
                        inputs,
                        [row[:3] for row in shifted],
                        [row[:2] + row[3:] for row in shifted],
                        "the printed shift of t2 has t1 where t1^2 belongs",
                    )

    def power_transform(self) -> None:
        for q in self.grid:
            F = field(*prime_power(q))
            polys = [find_irreducible(F, d, skip) for d in (1, 2) for skip in range(min(3, q))]
            polys.append(Poly.from_terms(F, {2: 1, 1: 1}))
            unsquared = []
            for P, d in itertools.product(polys, (1, 2, 3)):
                t1, t2 = poly_traces(P).codes
                got = list(poly_traces(P ** d).codes)
                self.check(
                    "traces of P^d",
                    {"q": q, "P": str(P), "d": d},
                    got,
                    list(power_coeff_transform(F, d, t1, t2).codes),
                )
                printed = list(unsquared_power_transform(F, d, t1, t2).codes)
                if printed != got:
                    unsquared.append({"P": str(P), "d": d, "printed": printed, "implemented": got})
            if unsquared:
                self.erratum(
                    "power coefficient display",
                    {"q": q},
                    [u["printed"] for u in unsquared],
                    [u["implemented"] for u in unsquared],
                    "C(d,2) multiplies t1^2, not t1",
                )

            n = 4
            if q ** n > self.limit:
                continue
            spec = tower(q, n)
            rng = random.Random(self.seed)
            mismatches = 0
            picks = [rng.randrange(spec.order) for _ in range(min(50, self.samples))]
            for k in picks:
                beta = FieldElement(spec, spec.from_index(k))
                f, m = char_poly(beta), min_poly(beta)
                d = n // m.degree
                transformed = power_coeff_transform(spec.base, d, *poly_traces(m).codes).codes
                if f != m ** d or poly_traces(f).codes != transformed:
                    mismatches += 1
            self.check("characteristic = minimal^(n/deg)", {"q": q, "n": n, "samples": len(picks)}, 0, mismatches)

    def root_tables(self) -> None:
        for q in sorted(set(COROLLARY_GRID) | set(self.grid)):
            p, _ = prime_power(q)
            inputs = {"q": q}
            table = corollary_table(q)
            self.check("root multiplicities sum to 2g", inputs, q * (q - 1), sum(table.multiplicities))
            self.check("root table rebuilds the L-polynomial", inputs, list(closed_lpoly(q).coeffs), list(table.lpoly.coeffs))
            self.check("classification of c1", inputs, "supersingular", classify(table.lpoly))
            self.check("Weil conditions for c1", inputs, True, weil_check(table.lpoly).passed)
            # S_1 = -excess(q, 1) is the sum of the normalized roots times sqrt(q)
            unit_sum = sum(m * cmath.exp(2j * cmath.pi * k / (4 * p)) for k, m in enumerate(table.multiplicities))
            target = -closed_form_excess(q, 1) / q ** 0.5
            self.check("normalized roots sum", inputs, True, abs(unit_sum - target) <= ROOT_TOLERANCE * max(1.0, abs(target)))
            if q == 3 and "c1" in self._lpolys:
                self.check("root table agrees with enumeration", inputs, list(self._lpolys["c1"].coeffs), list(table.lpoly.coeffs))

            derived = {root_descriptor(j, p): m for j, m in enumerate(table.multiplicities)}
            printed = published_corollary_table(q)
            keys = sorted(set(printed) | {k for k, m in derived.items() if m})
            wrong = [k for k in keys if abs(printed.get(k, 0.0) - derived.get(k, 0)) > ROOT_TOLERANCE]
            if wrong:
                self.erratum(
                    "root multiplicity display",
                    inputs,
                    {k: printed.get(k, 0.0) for k in wrong},
                    {k: derived.get(k, 0) for k in wrong},
                    "printed multiplicities disagree with the inverse transform of the point counts",
                )

    def properties(self) -> None:
        rng = random.Random(self.seed)
        for q in self.grid:
            ns = self.degrees(q)
            exhaustive = [n for n in ns if q ** n <= EXHAUSTIVE_LIMIT]
            sampled = [n for n in ns if q ** n > EXHAUSTIVE_LIMIT][:1]
            for n in exhaustive + sampled:
                mode = "exhaustive" if n in exhaustive else "sampled"
                spec = tower(q, n)
                elements = list(enumerate_field(spec, self.limit))
                inputs = {"q": q, "n": n, "mode": mode}
                self.check("enumeration is a bijection", inputs, q ** n, len({e.value for e in elements}))
                table = trace_table(spec, self.limit)

                if mode == "exhaustive":
                    pairs = itertools.product(elements, repeat=2)
                    singles = elements
                else:
                    pairs = ((rng.choice(elements), rng.choice(elements)) for _ in range(self.samples))
                    singles = [rng.choice(elements) for _ in range(self.samples)]

                bad = total = 0
                for a, b in pairs:
                    ta, tb = table[a.value], table[b.value]
                    lhs = table[(a + b).value].t2
                    rhs = ta.t2 + tb.t2 + ta.t1 * tb.t1 - table[(a * b).value].t1
                    total += 1
                    bad += lhs != rhs
                self.check("T2 additivity", {**inputs, "pairs": total}, 0, bad)

                failures = {"Artin-Schreier": 0, "Newton": 0, "fast traces": 0, "Frobenius": 0, "minimal polynomial": 0}
                for k, c in enumerate(singles):
                    failures["Artin-Schreier"] += not artin_schreier_holds(c)
                    failures["Newton"] += not newton_identity_holds(c)
                    failures["fast traces"] += table[c.value].codes != (trace1(c).value, trace2(c).value)
                    other = singles[(k * 7 + 1) % len(singles)]
                    frob_ok = (
                        frobenius(c + other, 1) == frobenius(c, 1) + frobenius(other, 1)
                        and frobenius(c * other, 1) == frobenius(c, 1) * frobenius(other, 1)
                        and frobenius(c, n) == c
                    )
                    failures["Frobenius"] += not frob_ok
                    if k < 200:
                        f = char_poly(c)
                        lifted = Poly(spec, tuple(spec.embed(x) for x in f.coeffs))
                        failures["minimal polynomial"] += lifted.evaluate(c.value) != spec.zero or f != min_poly(c) ** (n // min_poly(c).degree)
                for name, count in failures.items():
                    self.check(f"{name} identity", {**inputs, "elements": len(singles)}, 0, count)

    def moebius(self) -> None:
        rng = random.Random(self.seed)
        for p in sorted({prime_power(q)[0] for q in self.grid} | {3, 5}):
            f = {m: rng.randint(-50, 50) for m in range(1, 61)}
            F = {m: p_free_transform(f, m, p) for m in f}
            wrong = [m for m in f if p_free_invert(F, m, p) != f[m]]
            self.check("p-free Moebius round trip", {"p": p, "n": [1, 60]}, [], wrong)
            printed = [m for m in f if published_p_free_invert(F, m, p) != f[m]]
            if printed:
                m = printed[0]
                self.erratum(
                    "Moebius inversion display",
                    {"p": p, "n": m},
                    published_p_free_invert(F, m, p),
                    f[m],
                    "mu(n) stands where mu(d) belongs",
                )

    def three_coefficients(self) -> None:
        if 3 not in self.grid:
            return
        have_lpolys = all(name in self._lpolys for name in ("c1", "c2", "c3"))
        for n in self.degrees(3, stop=13):
            inputs = {"q": 3, "n": n}
            value = count_f3_brute(3, n, budget=self.limit).value
            if have_lpolys:
                lines = (self._lpolys["c1"], self._lpolys["c2"], self._lpolys["c3"])
                self.check("F3 from the three L-polynomials", inputs, value, f3_from_lpolys(n, lines))
            if 3 ** n <= min(self.limit, 3 ** 7):
                direct = count_f_brute(3, n, CoeffTarget(0, 0, 0), self.limit).value
                if direct != value:
                    self.erratum(
                        "three-coefficient set identity",
                        inputs,
                        value,
                        direct,
                        "characteristic polynomials with x^(n-1), x^(n-2), x^(n-3) coefficients 0",
                    )
            formula = published_formula_f3(n)
            if not formula.integral or formula.value != value:
                self.erratum("three-coefficient display", inputs, formula.to_dict(), value, "evaluated exactly in Q(zeta_12)")
            printed_size = f3_set_size(3, n, printed=True, budget=self.limit)
            if printed_size != 3 * value:
                self.erratum(
                    "three-coefficient set exponent",
                    inputs,
                    printed_size,
                    3 * value,
                    "the first condition reads T1(x^(q+2) - x^2) in print; x^(q+1) is meant",
                )

    def representation(self) -> None:
        q = self.grid[0]
        ns = self.degrees(q, start=2, stop=4)
        if not ns:
            return
        n = ns[-1]
        inputs = {"q": q, "n": n}
        first, second = tower(q, n), tower(q, n, skip=1)
        one = trace_distribution(first, self.limit)
        two = trace_distribution(second, self.limit)
        self.check(
            "trace classes do not depend on the modulus",
            {**inputs, "moduli": [list(first.rel_modulus), list(second.rel_modulus)]},
            sorted([*k, v] for k, v in one.items()),
            sorted([*k, v] for k, v in two.items()),
        )
        c1 = CurveModel.c1(q)
        self.check(
            "point count does not depend on the modulus",
            inputs,
            count_points(c1, n, "brute", self.limit, first).value,
            count_points(c1, n, "brute", self.limit, second).value,
        )


def run_verify(
    grid: tuple[int, ...] = DEFAULT_GRID,
    budget: int | None = None,
    poly_budget: int | None = None,
    samples: int | None = None,
    seed: int | None = None,
    quiet: bool = False,
    timing: bool = False,
    metrics_path: str | None = None,
) -> VerifyReport:
    verifier = GridVerifier(grid, budget, poly_budget, samples, seed, quiet, timing, metrics_path)
    return verifier.run()
