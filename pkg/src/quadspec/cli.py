"""Command-line interface: every pipeline of the library as a subcommand
with exact JSON input/output (all numbers are scalar strings)."""

from __future__ import annotations

import json
import os
import subprocess
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import click

from .errors import (
    MissingBound,
    MixedFields,
    NonGenericTarget,
    PreconditionError,
    QuadspecError,
    ResourceBudgetExceeded,
)
from .groebner import Budget
from .kowalevski import ode_dataset, pipeline_seventh_family, verify_ode_reduction
from .poly import MPoly
from .projmap import (
    QuadraticMapP2,
    invariant_lines,
    kowalevski_exponents,
    spectrum,
)
from .realizability import compute_h, realize_maps, run_test
from .relations import BetaTriple, check_known_relations, symmetric_profile
from .scalars import field_of, rat, scalar_from_str, scalar_to_str

EXIT_PASS = 0
EXIT_USAGE = 1

# the exit-code contract reserves 2 for precondition failures; route
# click's own usage errors to the usage code instead
click.UsageError.exit_code = 1
EXIT_PRECONDITION = 2
EXIT_BUDGET = 3
EXIT_NEGATIVE = 10

_ZVARS = ("z1", "z2", "z3")
# fixed presentation order of quadratic monomial coefficients in map JSON
_MONOMIALS = ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))


@dataclass
class RunConfig:
    """Run-wide knobs shared by the subcommands."""

    budget_reductions: Optional[int] = None
    degree_cap: Optional[int] = None
    timeout: Optional[int] = None
    jobs: int = 1
    store: Optional[str] = None
    seed: int = 0
    bound: int = 64

    def make_budget(self) -> Optional[Budget]:
        if self.budget_reductions is None and self.degree_cap is None:
            return None
        budget = Budget()
        if self.budget_reductions is not None:
            budget.max_reductions = self.budget_reductions
        if self.degree_cap is not None:
            budget.max_degree = self.degree_cap
        return budget


def _fail(code: int, kind: str, message: str):
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    sys.exit(code)


def _read_payload(source: str):
    """JSON from a file path, stdin ('-'), or an inline JSON string."""
    try:
        if source == "-":
            text = sys.stdin.read()
        elif os.path.exists(source):
            text = Path(source).read_text()
        else:
            text = source
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        _fail(EXIT_USAGE, "parse", str(exc))


def _emit(payload) -> None:
    click.echo(json.dumps(payload, sort_keys=True))


def _scalar(text) -> object:
    try:
        return scalar_from_str(str(text))
    except (QuadspecError, ValueError) as exc:
        _fail(EXIT_USAGE, "parse", f"bad scalar {text!r}: {exc}")


def map_from_json(payload) -> QuadraticMapP2:
    try:
        return QuadraticMapP2.from_json(payload)
    except (TypeError, KeyError, ValueError) as exc:
        _fail(EXIT_USAGE, "parse", f"bad map JSON: {exc}")
    except PreconditionError as exc:
        _fail(EXIT_PRECONDITION, "PreconditionError", str(exc))


def _pairs(payload, key: str, count: int):
    try:
        rows = payload[key]
    except (TypeError, KeyError):
        _fail(EXIT_USAGE, "parse", f"missing {key!r} pairs")
    if len(rows) != count or any(len(r) != 2 for r in rows):
        _fail(EXIT_USAGE, "parse", f"{key!r} needs {count} pairs")
    return [(_scalar(a), _scalar(b)) for a, b in rows]


def _tau_values(payload) -> list:
    values = payload.get("tau", payload) if isinstance(payload, dict) else payload
    if not isinstance(values, list) or len(values) != 8:
        _fail(EXIT_USAGE, "parse", "tau needs eight scalar strings")
    return [_scalar(x) for x in values]


def _guarded(fn):
    try:
        return fn()
    except ResourceBudgetExceeded as exc:
        _fail(EXIT_BUDGET, "budget", str(exc))
    except MissingBound as exc:
        _fail(EXIT_USAGE, "usage", str(exc))
    except (PreconditionError, NonGenericTarget, MixedFields, QuadspecError) as exc:
        _fail(EXIT_PRECONDITION, type(exc).__name__, str(exc))


@click.group()
@click.option("--budget-reductions", type=int, default=None, help="Groebner reduction cap.")
@click.option("--degree-cap", type=int, default=None, help="Groebner degree cap.")
@click.option("--timeout", type=int, default=None, help="Soft per-run time limit (s).")
@click.option("--jobs", type=int, default=1, help="Parallel verdict workers.")
@click.option("--store", type=click.Path(), default=None, help="JSONL candidate store.")
@click.option("--seed", type=int, default=0, help="Random seed (determinism knob).")
@click.option("--bound", type=int, default=64, help="Bound for infinite enumeration tails.")
@click.pass_context
def main(ctx, budget_reductions, degree_cap, timeout, jobs, store, seed, bound):
    """Exact multiplier-spectrum computations for quadratic self-maps of
    the projective plane with an invariant line."""
    for name, value in (("jobs", jobs), ("bound", bound)):
        if value is not None and value < 1:
            _fail(EXIT_USAGE, "usage", f"--{name} must be positive")
    ctx.obj = RunConfig(budget_reductions, degree_cap, timeout, jobs, store, seed, bound)


@main.command()
@click.argument("map_json")
@click.pass_obj
def analyze(config: RunConfig, map_json: str):
    """Fixed points, multipliers, invariant lines, and relation residuals
    of a map given as JSON (coefficients of z1^2, z1z2, z1z3, z2^2, z2z3,
    z3^2 per component)."""
    payload = _read_payload(map_json)
    f = map_from_json(payload)

    def work():
        lines = invariant_lines(f)
        if not lines:
            raise PreconditionError("the map has no invariant line")
        reports = []
        for line in lines:
            sp = spectrum(f, line)
            report = check_known_relations(sp)
            prof = symmetric_profile([r.uv for r in sp.on_line])
            beta = BetaTriple.from_tau([(r.t, r.d) for r in sp.off_line])
            reports.append(
                {
                    "line": [scalar_to_str(c) for c in line.coeffs],
                    "spectrum": sp.to_json(),
                    "relations": report.to_json(),
                    "e": prof.to_json(),
                    "beta": [scalar_to_str(b) for b in beta.as_tuple()],
                }
            )
        return {"map": f.to_json(), "lines": reports}

    _emit(_guarded(work))


@main.command("test")
@click.argument("values_json")
@click.pass_obj
def cmd_test(config: RunConfig, values_json: str):
    """Realizability verdict for seven (u, v) multiplier-exponent pairs,
    four off the line ("off") and three on it ("on"); exit 0 = passed,
    10 = not realizable."""
    payload = _read_payload(values_json)
    off = _pairs(payload, "off", 4)
    on = _pairs(payload, "on", 3)
    verdict = _guarded(lambda: run_test(off, on, budget=config.make_budget()))
    _emit(verdict.to_json())
    if not verdict.passed:
        sys.exit(EXIT_NEGATIVE)


@main.command("compute-h")
@click.argument("sigma")
@click.argument("tau_json")
@click.pass_obj
def cmd_compute_h(config: RunConfig, sigma: str, tau_json: str):
    """The polynomial whose roots are the possible values of the symmetric
    function SIGMA (e.g. e10) over prescribed off-line data; integer
    coefficients, highest degree first."""
    tau = _tau_values(_read_payload(tau_json))
    coeffs = _guarded(lambda: compute_h(sigma, tau, budget=config.make_budget()))
    _emit({"sigma": sigma, "coefficients": [str(c) for c in reversed(coeffs)]})


@main.command("realize")
@click.argument("tau_json")
@click.pass_obj
def cmd_realize(config: RunConfig, tau_json: str):
    """All normalized maps realizing the given off-line data tau."""
    tau = _tau_values(_read_payload(tau_json))
    result = _guarded(lambda: realize_maps(tau, budget=config.make_budget()))
    _emit(
        {
            "count": str(result.count),
            "params": [[scalar_to_str(x) for x in w] for w in result.params],
            "maps": [m.to_json() for m in result.maps],
        }
    )


@main.command("enumerate")
@click.option(
    "--case",
    type=click.Choice(["2pos", "2neg", "geq3"]),
    required=True,
    help="Which seventh-family search to run.",
)
@click.pass_obj
def cmd_enumerate(config: RunConfig, case: str):
    """Seventh-family candidate search with verdicts; candidates are
    persisted to --store (JSONL) when given, making reruns resumable."""

    def work():
        return pipeline_seventh_family(
            case,
            bound=config.bound,
            budget=config.make_budget(),
            store=config.store,
            jobs=config.jobs,
        )

    result = _guarded(work)
    statuses = [c.status() for c in result.candidates]
    _emit(
        {
            "case": result.case,
            "pre_dedup_count": str(result.pre_dedup_count),
            "candidates": str(len(result.candidates)),
            "passed": [c.to_json() for c in result.candidates if c.status() == "passed"],
            "not_realizable": str(statuses.count("not_realizable")),
            "errors": str(statuses.count("error")),
        }
    )


@main.command("verify-ode")
@click.option("--dataset", type=int, required=True, help="Exponent data set: 3, 7 or 8.")
@click.option(
    "--perturb",
    is_flag=True,
    help="Add 1 to one field coefficient first (the identity must then fail).",
)
@click.pass_obj
def cmd_verify_ode(config: RunConfig, dataset: int, perturb: bool):
    """Exact check of the ODE reduction satisfied by the explicit vector
    field of a realizable exponent data set."""
    if dataset not in (3, 7, 8):
        _fail(EXIT_USAGE, "usage", "--dataset must be 3, 7 or 8")

    def run():
        from .projmap import HomQuadVF

        x, seed, which = ode_dataset(dataset)
        if perturb:
            comps = list(x.components)
            comps[0] = comps[0] + MPoly(_ZVARS, {(2, 0, 0): rat(1)})
            x = HomQuadVF(comps)
        residual = verify_ode_reduction(x, seed, which)
        out = {
            "dataset": str(dataset),
            "equation": which,
            "residual_zero": residual.is_zero(),
        }
        if not perturb:
            out["exponents"] = [
                [str(u), str(v)]
                for u, v in sorted(tuple(p) for p in kowalevski_exponents(x))
            ]
        return out

    out = _guarded(run)
    _emit(out)
    if not out["residual_zero"]:
        sys.exit(EXIT_NEGATIVE)


@main.command("verify-paper")
@click.option(
    "--suite",
    type=click.Path(),
    default=None,
    help="Path to the acceptance test file (default: tests/test_acceptance.py upward from cwd).",
)
def cmd_verify_paper(suite):
    """Run the full acceptance suite and exit with its status."""
    if suite is None:
        here = Path.cwd()
        for base in (here, *here.parents):
            probe = base / "tests" / "test_acceptance.py"
            if probe.exists():
                suite = str(probe)
                break
    if suite is None or not Path(suite).exists():
        _fail(EXIT_USAGE, "usage", "acceptance suite not found; pass --suite")
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-v", "-s", str(suite)]
    )
    sys.exit(proc.returncode)


if __name__ == "__main__":
    main()
