"""Command line interface: scenario verification, single invariants, bundled scenarios.

Exit codes: 0 all checks verified, 2 some identity violated, 3 a hypothesis
failed, 4 unsupported or malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import tempfile
import time
from importlib import resources
from pathlib import Path

import jsonschema

from . import brasselet as br
from . import curve_lab as cl
from . import invariants as inv
from .errors import HypothesisFailed, ScenarioInvalid, SinglabError
from .ideal_engine import INFINITE, Ideal, is_finite
from .poly_core import parse_poly

SCHEMA_VERSION = "1"
DEFAULT_SEED = 42
EXIT_OK, EXIT_VIOLATED, EXIT_HYPOTHESIS, EXIT_UNSUPPORTED = 0, 2, 3, 4

CHECK_NAMES = sorted(br.VERIFIERS)
IDENTIFIER = "^[a-zA-Z][a-zA-Z0-9_]*$"

_STRATUM = {
    "type": "object",
    "additionalProperties": False,
    "required": ["name", "dim", "eu"],
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "dim": {"type": "integer", "minimum": 0},
        "eu": {"type": "integer"},
        "chi": {"type": "integer"},
        "contains_origin": {"type": "boolean"},
        "in_xf": {"type": "boolean"},
        "in_xg": {"type": "boolean"},
    },
}

SCENARIO_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["name", "variables", "ambient", "f", "g", "checks"],
    "properties": {
        "name": {"type": "string", "pattern": "^[a-z0-9][a-z0-9-]*$"},
        "variables": {
            "type": "array", "minItems": 1, "uniqueItems": True,
            "items": {"type": "string", "pattern": IDENTIFIER},
        },
        "ambient": {
            "oneOf": [
                {
                    "type": "object", "additionalProperties": False, "required": ["kind"],
                    "properties": {"kind": {"const": br.AFFINE}},
                },
                {
                    "type": "object", "additionalProperties": False, "required": ["kind", "equation"],
                    "properties": {"kind": {"const": br.HYPERSURFACE}, "equation": {"type": "string"}},
                },
                {
                    "type": "object", "additionalProperties": False, "required": ["kind", "strata"],
                    "properties": {
                        "kind": {"const": br.DECLARED},
                        "strata": {"type": "array", "minItems": 1, "items": _STRATUM},
                    },
                },
            ]
        },
        "f": {
            "oneOf": [
                {"type": "string"},
                {
                    "type": "object", "additionalProperties": False, "required": ["kind"],
                    "properties": {"kind": {"const": "generic-linear"}, "seed": {"type": "integer"}},
                },
            ]
        },
        "g": {"type": "string"},
        "branch_hints": {
            "type": "array",
            "items": {"type": "array", "minItems": 1, "items": {"type": "string"}},
        },
        "checks": {"type": "array", "minItems": 1, "items": {"enum": CHECK_NAMES}},
        "seed": {"type": "integer"},
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(SCENARIO_SCHEMA)


# ---------------------------------------------------------------------------
# scenario files

def bundled_names() -> list[str]:
    folder = resources.files("singlab") / "scenarios"
    return sorted(p.name[: -len(".json")] for p in folder.iterdir() if p.name.endswith(".json"))


def list_scenarios() -> list[str]:
    return bundled_names()


def bundled_text(name: str) -> str:
    return (resources.files("singlab") / "scenarios" / f"{name}.json").read_text(encoding="utf-8")


def read_scenario_text(path: str) -> str:
    """Contents of a scenario file; a bare bundled name is accepted too."""
    p = Path(path)
    if p.is_file():
        try:
            return p.read_bytes().decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ScenarioInvalid(f"{path}: not UTF-8 text ({exc.reason} at byte {exc.start})") from exc
    stem = p.name[: -len(".json")] if p.name.endswith(".json") else p.name
    if stem in bundled_names():
        return bundled_text(stem)
    raise ScenarioInvalid(f"{path}: no such file or bundled scenario")


def validate_document(doc) -> None:
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: (list(e.absolute_path), e.message))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ScenarioInvalid(f"schema violation at {where}: {e.message}")


def _annotate(exc: Exception, prefix: str) -> Exception:
    exc.args = (f"{prefix}: {exc}",)
    return exc


def _parse(text: str, variables, what: str):
    try:
        return parse_poly(text, variables)
    except SinglabError as exc:
        raise _annotate(exc, what)


def load_scenario(text: str, seed_override: int | None = None) -> br.Scenario:
    """Validate and build a Scenario from JSON text."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioInvalid(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    validate_document(doc)
    variables = tuple(doc["variables"])
    seed = seed_override if seed_override is not None else int(doc.get("seed", DEFAULT_SEED))
    amb = doc["ambient"]
    if amb["kind"] == br.AFFINE:
        ambient = br.AmbientSpace.affine(variables)
    elif amb["kind"] == br.HYPERSURFACE:
        h = _parse(amb["equation"], variables, "ambient equation")
        try:
            ambient = br.AmbientSpace.hypersurface(h)
        except SinglabError as exc:
            raise ScenarioInvalid(f"ambient: {exc}") from exc
    else:
        strata = tuple(
            br.Stratum(
                s["name"], int(s["dim"]), int(s["eu"]), "origin" if s.get("contains_origin") else "regular",
                "declared", bool(s.get("contains_origin", False)), bool(s.get("in_xf", False)),
                bool(s.get("in_xg", False)), None, None, int(s["chi"]) if "chi" in s else None,
            )
            for s in amb["strata"]
        )
        try:
            ambient = br.AmbientSpace.declared(variables, br.StratificationDescriptor(strata))
        except ValueError as exc:
            raise ScenarioInvalid(f"ambient: {exc}") from exc
    if isinstance(doc["f"], str):
        f, generic = _parse(doc["f"], variables, "f"), False
    else:
        f_seed = int(doc["f"].get("seed", seed))
        f, generic = br.generic_linear(variables, f_seed), "seed" not in doc["f"]
    g = _parse(doc["g"], variables, "g")
    hints = None
    if "branch_hints" in doc:
        hints = tuple(tuple(h) for h in doc["branch_hints"])
        for h in hints:
            if len(h) != len(variables):
                raise ScenarioInvalid(f"branch hint {list(h)} needs {len(variables)} coordinates")
            for entry in h:
                _parse(entry, ("t",), "branch hint")
    return br.Scenario(doc["name"], ambient, f, g, seed, tuple(doc["checks"]), hints, generic)


# ---------------------------------------------------------------------------
# reports

def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


def _exit_code(reports) -> int:
    statuses = {r.status for r in reports}
    if br.VIOLATED in statuses:
        return EXIT_VIOLATED
    if br.HYPOTHESIS_FAILED in statuses:
        return EXIT_HYPOTHESIS
    return EXIT_OK


def run_verify(text: str, seed_override: int | None = None, with_timing: bool = False):
    """Run the requested checks of one scenario. Returns (RunReport dict, exit code)."""
    s = load_scenario(text, seed_override)
    ctx = br.ScenarioContext(s)
    reports, timing = [], {}
    for check in s.checks:
        start = time.perf_counter()
        try:
            reports.append(br.verify(s, check, ctx))
        except SinglabError as exc:
            raise _annotate(exc, f"check {check}")
        timing[check] = round(time.perf_counter() - start, 3)
    code = _exit_code(reports)
    run = {
        "schema_version": SCHEMA_VERSION,
        "scenario": s.name,
        "variables": list(s.variables),
        "ambient": {"kind": s.ambient.kind, "n": s.ambient.n, "d": s.ambient.d,
                    "equation": s.ambient.equation.render() if s.ambient.equation is not None else None},
        "f": s.f.render(),
        "g": s.g.render(),
        "seeds": {
            "run": s.seed,
            "f": "generic-linear" if s.f_is_generic else "explicit",
            "hyperplane": ctx.fn("l").render(),
            "euler slice": ctx.fn("l'").render(),
        },
        "reports": [r.to_dict() for r in reports],
        "invariants": ctx.invariant_table(),
        "exit_code": code,
    }
    if with_timing:
        run["timing"] = timing
    return run, code


def _format_counts(counts: dict) -> str:
    return ", ".join(f"{k}={v}" for k, v in counts.items()) or "-"


def render_table(run: dict) -> str:
    lines = [f"scenario {run['scenario']} (seed {run['seeds']['run']})", f"  f = {run['f']}", f"  g = {run['g']}"]
    rows = [("check", "status", "lhs", "rhs", "counts")]
    for r in run["reports"]:
        rows.append((r["identity"], r["status"], str(r["lhs"]), str(r["rhs"]), _format_counts(r["counts"])))
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    for row in rows:
        lines.append("  " + "  ".join(c.ljust(w) for c, w in zip(row, widths)) + "  " + row[4])
    for r in run["reports"]:
        if r["reason"]:
            lines.append(f"  {r['identity']}: {r['reason']}")
    lines.append(f"exit {run['exit_code']}")
    return "\n".join(lines) + "\n"


def write_atomic(path: Path, content: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# single invariants

def _variables(text: str, vars_flag: str | None, extra: str | None = None) -> tuple:
    if vars_flag:
        names = tuple(v.strip() for v in vars_flag.split(",") if v.strip())
        for v in names:
            if not re.match(IDENTIFIER, v):
                raise ScenarioInvalid(f"--vars: {v!r} is not a valid variable name")
        return names
    found = set(re.findall(r"[a-zA-Z][a-zA-Z0-9_]*", text + " " + (extra or "")))
    if not found:
        raise ScenarioInvalid("no variables found; pass --vars")
    return tuple(sorted(found))


def _branch_rows(bs: cl.BranchSet, seed: int) -> list[dict]:
    return [
        {
            "parametrization": "(" + ", ".join(b.render()) + ")",
            "multiplicity": cl.branch_multiplicity(b, seed),
            "conjugates": b.conjugates,
            "exact": b.exact,
        }
        for b in bs
    ]


def _eu(g, seed: int) -> int:
    mu = inv.milnor_number(g)
    if is_finite(mu):
        return inv.euler_obstruction_hypersurface_isolated(g, seed)
    branches = cl.decompose_critical_locus(inv.jacobian_ideal(g), seed=seed)
    return inv.euler_obstruction_1dim(g, branches, seed)


def run_invariant(command: str, poly: str, vars_flag: str | None = None, poly2: str | None = None,
                  seed: int = DEFAULT_SEED):
    """Compute one invariant; returns (value, human text)."""
    variables = _variables(poly, vars_flag, poly2)
    p = _parse(poly, variables, "polynomial")
    q = _parse(poly2, variables, "--poly2") if poly2 is not None else None
    if command == "milnor":
        value = inv.milnor_number(p)
        value = "infinite" if value is INFINITE else value
        return value, str(value)
    if command == "sectional":
        if len(variables) < 2:
            raise ScenarioInvalid("sectional Milnor numbers need at least two variables")
        value = inv.sectional_milnor(p, seed)
        return value, str(value)
    if command == "legreuel":
        if q is None:
            raise ScenarioInvalid("legreuel needs --poly2")
        value = inv.le_greuel_number(p, q)
        value = "infinite" if value is INFINITE else value
        return value, str(value)
    if command == "eu":
        value = _eu(p, seed)
        return value, str(value)
    if command == "branches":
        if q is not None:
            I = Ideal([p, q], variables)
        else:
            if is_finite(inv.milnor_number(p)):
                raise HypothesisFailed("the critical locus is not one-dimensional at the origin")
            I = inv.jacobian_ideal(p)
        rows = _branch_rows(cl.decompose_critical_locus(I, seed=seed), seed)
        lines = [f"branches: {len(rows)}"]
        for j, row in enumerate(rows, start=1):
            lines.append(f"b{j}: {row['parametrization']}  multiplicity {row['multiplicity']}"
                         f"  conjugates {row['conjugates']}")
        return rows, "\n".join(lines)
    raise ScenarioInvalid(f"unknown command {command}")


# ---------------------------------------------------------------------------
# entry point

INVARIANT_COMMANDS = ("milnor", "sectional", "branches", "eu", "legreuel")


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the malformed-input code instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_UNSUPPORTED, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="singlab", description="Exact local invariants of function germs and identity checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run the checks of scenario files or bundled scenarios")
    v.add_argument("files", nargs="+", help="scenario JSON files or bundled scenario names")
    v.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    v.add_argument("--json", dest="json_out", default=None,
                   help="write the JSON report here ('-' for stdout; a directory for several files)")
    v.add_argument("--timing", action="store_true", help="include wall-clock timings in the JSON report")
    for name in INVARIANT_COMMANDS:
        c = sub.add_parser(name, help=f"compute the {name} invariant of a polynomial")
        c.add_argument("poly")
        c.add_argument("--vars", default=None, help="comma-separated variable names, e.g. x,y,z")
        c.add_argument("--poly2", default=None, help="second polynomial (legreuel, branches)")
        c.add_argument("--seed", type=int, default=DEFAULT_SEED)
        c.add_argument("--json", action="store_true", help="emit {name, value, seed} as JSON")
    sub.add_parser("scenarios", help="list bundled scenarios")
    return parser


def _verify_command(args, out, err) -> int:
    worst = EXIT_OK
    many = len(args.files) > 1
    for path in args.files:
        try:
            run, code = run_verify(read_scenario_text(path), args.seed, args.timing)
        except SinglabError as exc:
            err.write(f"{path}: {type(exc).__name__}: {exc}\n")
            worst = max(worst, exc.exit_code)
            continue
        buffer = canonical_json(run) if args.json_out == "-" else render_table(run)
        out.write(buffer)
        if args.json_out and args.json_out != "-":
            target = Path(args.json_out)
            if many or target.is_dir():
                target = target / f"{run['scenario']}.json"
            write_atomic(target, canonical_json(run))
        worst = max(worst, code)
    return worst


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    if args.command == "scenarios":
        out.write("\n".join(list_scenarios()) + "\n")
        return EXIT_OK
    if args.command == "verify":
        return _verify_command(args, out, err)
    try:
        value, text = run_invariant(args.command, args.poly, args.vars, args.poly2, args.seed)
    except SinglabError as exc:
        err.write(f"{args.command}: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except ValueError as exc:
        err.write(f"{args.command}: {exc}\n")
        return EXIT_UNSUPPORTED
    if args.json:
        out.write(canonical_json({"name": args.command, "value": value, "seed": args.seed}))
    else:
        out.write(text + "\n")
    return EXIT_OK


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
