"""Command-line front end: run check suites on a structure file.

    pncalc FILE [--suite NAME] [--kmax K] [--trials T] [--seed S]
                [--format text|json] [--unchecked-hypotheses]
    pncalc --fixture FIX-A ...

Exit status is 0 when every executed check passes, 1 when one fails and 2
for input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PNError, StructureParseError, UnknownFixture, ValidationError
from .modular import (
    build_hierarchy,
    class_representative_checks,
    cocycle_check,
    hierarchy_consistency,
    modular_defining_residual,
    modular_form_identity_check,
    mu_independence_check,
    recursion_checks,
    relation_check,
    xi_N_via_definition,
)
from .pn import (
    bm_operator_check,
    concomitant_coord,
    cond_dN_derivation,
    cond_dP_derivation,
    cond_function_form,
    corollary_check,
    d_trace,
    is_admissible,
    is_compatible,
    is_nijenhuis,
    is_poisson,
    trace_identity_check,
)
from .report import FAIL, PASS, SKIPPED, CheckResult, residual_witness
from .sampling import make_rng, random_form, random_poly
from .structure import load_structure

SUITES = ("structure", "compat", "eq1", "eq2", "operator", "modular", "classes")

PN_GATE = ("poisson_P", "nijenhuis_N", "admissible", "compatible")
EQ1_GATE = ("poisson_P", "nijenhuis_N", "admissible")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass
class Options:
    suite: str = "all"
    kmax: int | None = None
    trials: int = 8
    seed: int = 0
    unchecked: bool = False


@dataclass
class CheckReport:
    structure: dict
    options: dict
    checks: list = field(default_factory=list)
    computed: dict = field(default_factory=dict)

    @property
    def failed(self):
        return any(c.status == FAIL for c in self.checks)

    def summary(self):
        counts = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for c in self.checks:
            counts[c.status] += 1
        return counts

    def to_json(self):
        return {
            "structure": self.structure,
            "options": self.options,
            "checks": [c.to_json() for c in self.checks],
            "computed": self.computed,
            "summary": self.summary(),
        }

    def to_text(self):
        lines = [f"structure {self.structure['name']} [{self.structure['hash']}]"]
        tags = {PASS: "PASS", FAIL: "FAIL", SKIPPED: "SKIP"}
        for c in self.checks:
            line = f"  {tags[c.status]}  {c.name}"
            if c.unverified:
                line += "  (unverified hypotheses)"
            if c.reason:
                line += f"  ({c.reason})"
            if c.witness is not None:
                line += "  witness: " + json.dumps(c.witness)
            lines.append(line)
        if self.computed:
            lines.append("computed:")
            lines.extend(f"  {k} = {v}" for k, v in self.computed.items())
        s = self.summary()
        lines.append(f"{s[PASS]} passed, {s[FAIL]} failed, {s[SKIPPED]} skipped")
        return "\n".join(lines) + "\n"


def _vec_str(X):
    return "(" + ", ".join(str(c) for c in X.as_list()) + ")"


class _Runner:
    def __init__(self, sdef, opts):
        self.sdef = sdef
        self.opts = opts
        s = sdef.build()
        self.chart, self.P, self.N, self.rho = s.chart, s.P, s.N, s.rho
        self.kmax = opts.kmax if opts.kmax is not None else s.kmax
        self.rho2 = self.rho * (1 + self.chart.coord(1) ** 2)
        self._preds = {}
        self.checks = []

    # -- gates -------------------------------------------------------------
    def pred(self, name):
        if name not in self._preds:
            P, N = self.P, self.N
            fn = {
                "poisson_P": lambda: is_poisson(P),
                "nijenhuis_N": lambda: is_nijenhuis(N),
                "admissible": lambda: is_admissible(P, N),
                "compatible": lambda: is_compatible(P, N),
            }[name]
            self._preds[name] = bool(fn())
        return self._preds[name]

    def unmet(self, gate):
        return [g for g in gate if not self.pred(g)]

    def gate_ok(self, gate):
        return self.opts.unchecked or not self.unmet(gate)

    # -- recording -----------------------------------------------------------
    def run(self, name, fn, gate=()):
        """fn(check) returns a residual, a list of residuals or a Verdict."""
        missing = self.unmet(gate)
        if missing and not self.opts.unchecked:
            reason = "requires " + ", ".join(missing)
            self.checks.append(CheckResult(name, SKIPPED, reason=reason))
            return
        t0 = time.perf_counter()
        out = fn(not missing)
        elapsed = time.perf_counter() - t0
        if hasattr(out, "ok"):
            witness = out.witness if not out.ok else None
            status = PASS if out.ok else FAIL
        else:
            witness = residual_witness(out)
            status = PASS if witness is None else FAIL
        self.checks.append(
            CheckResult(name, status, witness, elapsed=elapsed, unverified=bool(missing))
        )

    def run_many(self, prefix, fn, gate=()):
        """fn(check) returns CheckResults; they are recorded under a prefix."""
        missing = self.unmet(gate)
        if missing and not self.opts.unchecked:
            self.checks.append(
                CheckResult(prefix, SKIPPED, reason="requires " + ", ".join(missing))
            )
            return
        t0 = time.perf_counter()
        results = fn(not missing)
        per = (time.perf_counter() - t0) / max(len(results), 1)
        for r in results:
            r.name = f"{prefix}.{r.name}"
            r.elapsed = per
            r.unverified = bool(missing)
            self.checks.append(r)

    def rng(self, tag):
        return make_rng(f"{self.opts.seed}:{tag}")

    # -- suites --------------------------------------------------------------
    def suite_structure(self):
        P, N = self.P, self.N
        self.run("structure.poisson_P", lambda c: is_poisson(P))
        self.run("structure.nijenhuis_N", lambda c: is_nijenhuis(N))
        self.run("structure.admissible", lambda c: is_admissible(P, N))

    def suite_compat(self):
        P, N, T, S = self.P, self.N, self.opts.trials, self.opts.seed
        self.run("compat.compatible", lambda c: is_compatible(P, N))
        flags = {}

        def cond(key, fn):
            def inner(c):
                v = fn(P, N, T, S, check=c)
                flags[key] = bool(v)
                return v

            return inner

        self.run("compat.cond_dN_derivation", cond("dN", cond_dN_derivation), ("admissible",))
        self.run("compat.cond_dP_derivation", cond("dP", cond_dP_derivation), ("admissible",))
        self.run("compat.cond_function_form", cond("ff", cond_function_form), ("admissible",))

        def agree(c):
            from .report import Verdict

            values = {"concomitant_zero": bool(is_compatible(P, N))}
            values.update({k: flags.get(k) for k in ("dN", "dP", "ff")})
            if len(set(values.values())) == 1:
                return Verdict(True)
            return Verdict(False, {"index": [], "expr": json.dumps(values, sort_keys=True)})

        self.run("compat.conditions_agree", agree, EQ1_GATE)

    def suite_eq1(self):
        P, N, rng = self.P, self.N, self.rng("eq1")
        C = concomitant_coord(P, N)

        def check(c):
            return [
                trace_identity_check(P, N, random_form(self.chart, rng, 1), c, C)
                for _ in range(self.opts.trials)
            ]

        self.run("eq1.trace_identity", check, EQ1_GATE)

    def suite_eq2(self):
        P, N, rng = self.P, self.N, self.rng("eq2")
        self.run(
            "eq2.corollary",
            lambda c: [
                corollary_check(P, N, random_poly(self.chart, rng), c)
                for _ in range(self.opts.trials)
            ],
            PN_GATE,
        )

    def suite_operator(self):
        P, N = self.P, self.N
        for k in range(self.chart.dim + 1):
            rng = self.rng(f"operator:{k}")
            self.run(
                f"operator.degree_{k}",
                lambda c, k=k, rng=rng: [
                    bm_operator_check(P, N, random_form(self.chart, rng, k), c)
                    for _ in range(self.opts.trials)
                ],
                PN_GATE,
            )

    def suite_modular(self):
        P, N, rho, rho2, K = self.P, self.N, self.rho, self.rho2, self.kmax
        chart = self.chart
        rng = self.rng("modular")
        self.run(
            "modular.defining_property",
            lambda c: [
                modular_defining_residual(P, rho, random_poly(chart, rng))
                for _ in range(self.opts.trials)
            ],
        )
        self.run(
            "modular.form_identity",
            lambda c: [
                modular_form_identity_check(P, rho, random_form(chart, rng, 1))
                for _ in range(self.opts.trials)
            ],
        )
        for k in range(1, K + 1):
            self.run(
                f"modular.mu_independence[k={k}]",
                lambda c, k=k: mu_independence_check(P, N, k, rho, rho2, c),
                PN_GATE,
            )
            self.run(
                f"modular.relation[k={k}]",
                lambda c, k=k: relation_check(P, N, k, rho, c),
                PN_GATE,
            )
            self.run(
                f"modular.cocycle[k={k}]",
                lambda c, k=k: cocycle_check(P, N, k, rho, c),
                PN_GATE,
            )
        rec = {}

        def recursion(key):
            def inner(c):
                if not rec:
                    rec.update(recursion_checks(P, N, K, rho, c))
                return rec[key]

            return inner

        for key in ("recursion", "powers", "generalized"):
            self.run(f"modular.{key}", recursion(key), PN_GATE)
        self.run_many("modular.hierarchy", lambda c: hierarchy_consistency(P, N, K, c), PN_GATE)
        dtr = d_trace(N)
        self.run(
            "modular.xi_N",
            lambda c: [
                xi_N_via_definition(N, rho, c) - dtr,
                xi_N_via_definition(N, rho2, c) - dtr,
            ],
            ("nijenhuis_N",),
        )

    def suite_classes(self):
        P, N, rho, K = self.P, self.N, self.rho, self.kmax
        self.run_many(
            "classes", lambda c: class_representative_checks(P, N, K, rho, c), PN_GATE
        )

    # -- computed values -----------------------------------------------------
    def computed(self):
        out = {}
        powers = [self.N]
        for _ in range(1, self.kmax):
            powers.append(powers[-1] @ self.N)
        for k, Nk in enumerate(powers, start=1):
            tr = Nk.trace()
            out[f"Tr N^{k}"] = str(tr)
            out[f"I_{k}"] = str(tr / k)
        if self.gate_ok(PN_GATE):
            h = build_hierarchy(self.P, self.N, self.kmax, self.rho, check=False)
            for k, X in enumerate(h.modular_vfs, start=1):
                out[f"X^({k})"] = _vec_str(X)
        if self.gate_ok(("nijenhuis_N",)):
            out["xi_N"] = _vec_str(xi_N_via_definition(self.N, self.rho, check=False))
        return out

    def execute(self):
        selected = SUITES if self.opts.suite == "all" else (self.opts.suite,)
        for name in SUITES:
            if name in selected:
                getattr(self, f"suite_{name}")()
        return self.checks


def run_structure(sdef, opts=None):
    """Run the selected suites on a StructureDef and return the report."""
    opts = opts or Options()
    runner = _Runner(sdef, opts)
    checks = runner.execute()
    return CheckReport(
        structure={"name": sdef.name or "unnamed", "hash": sdef.digest()},
        options={
            "suite": opts.suite,
            "kmax": runner.kmax,
            "trials": opts.trials,
            "seed": opts.seed,
            "unchecked_hypotheses": opts.unchecked,
        },
        checks=checks,
        computed=runner.computed(),
    )


def strip_elapsed(report_json):
    """Copy of a JSON report without timing fields (for golden diffs)."""
    out = dict(report_json)
    out["checks"] = [{k: v for k, v in c.items() if k != "elapsed"} for c in out["checks"]]
    return out


def _parser():
    p = argparse.ArgumentParser(
        prog="pncalc",
        description="Exact checks of Poisson-Nijenhuis identities on a structure file.",
    )
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("file", nargs="?", help="structure definition (.json or .toml)")
    src.add_argument("--fixture", help="run a bundled fixture (FIX-0, FIX-A, FIX-B, FIX-C)")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--kmax", type=int, default=None, help="override the file's kmax")
    p.add_argument("--trials", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument(
        "--unchecked-hypotheses",
        action="store_true",
        help="run gated checks even when their hypotheses fail",
    )
    return p


def main(argv=None):
    args = _parser().parse_args(argv)
    if args.kmax is not None and args.kmax < 1:
        print("error: --kmax must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    if args.trials < 1:
        print("error: --trials must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        if args.fixture:
            from .fixtures import load_fixture

            sdef = load_fixture(args.fixture).structure
        else:
            sdef = load_structure(args.file)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return EXIT_INPUT
    except (StructureParseError, ValidationError, UnknownFixture) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    opts = Options(args.suite, args.kmax, args.trials, args.seed, args.unchecked_hypotheses)
    try:
        report = run_structure(sdef, opts)
    except PNError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "json":
        sys.stdout.write(json.dumps(report.to_json(), indent=2) + "\n")
    else:
        sys.stdout.write(report.to_text())
    return EXIT_FAIL if report.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
