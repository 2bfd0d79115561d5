"""Command-line interface: parameter sweeps, cross-checks, evolution, spectra.

Subcommands:

* sweep     closed-form branch eigenvalues over a parameter grid
* verify    closed forms against the independent transfer-matching search
* evolve    origin-return probability of the reference launch state
* spectrum  localized eigenvalues of the periodic truncation oracle
* coverage  fraction of the off-band arcs reached by swept eigenvalues

Output is deterministic CSV (comment preamble, one header line, 15 significant
digits) or an equivalent JSON document with --json.  Angle arguments accept
pi-literals such as 5pi/4 or -pi/2 as well as plain decimals.  Exit codes:
0 success, 1 usage error, 2 verification failure, 3 numeric-solver failure.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys

import numpy as np

from . import __version__
from .closedform import (BranchLabel, BranchResolutionError, SingularDenominatorError,
                         admissible_region, continuous_spectrum_contains, sweep_eigenvalue,
                         sweep_phase_pair)
from .measure import default_initial_state, origin_probability_series
from .models import (ModelKind, ModelSpec, build_one_defect, build_two_phase_defect,
                     build_complete_two_phase, build_wojcik)
from .spectral import (NoContractionError, half_line_solution, localized_spectrum_oracle,
                       point_spectrum_search)

DISAGREE_TOL = 1e-6
VERIFY_ANGLE_TOL = 1e-8
VERIFY_RESIDUAL_TOL = 1e-9
COVERAGE_BINS = 256
_ARCS = ((math.pi / 4, 3 * math.pi / 4), (5 * math.pi / 4, 7 * math.pi / 4))


class UsageError(Exception):
    pass


def parse_angle(text: str) -> float:
    """Radians from a decimal or a pi-literal like pi, 5pi/4, 2*pi/3, -pi/2."""
    t = text.strip().replace(" ", "")
    m = re.fullmatch(r"([+-]?)(\d+(?:\.\d+)?)?\*?pi(?:/([+-]?\d+(?:\.\d+)?))?", t)
    if m:
        sign = -1.0 if m.group(1) == "-" else 1.0
        coef = float(m.group(2)) if m.group(2) else 1.0
        den = float(m.group(3)) if m.group(3) else 1.0
        if den == 0.0:
            raise ValueError(f"zero denominator in angle {text!r}")
        return sign * coef * math.pi / den
    return float(t)


def _parse_range(text: str):
    parts = text.split(":")
    if len(parts) != 2:
        raise UsageError(f"range must look like lo:hi, got {text!r}")
    try:
        lo, hi = parse_angle(parts[0]), parse_angle(parts[1])
    except ValueError as err:
        raise UsageError(f"bad range endpoint in {text!r}: {err}") from None
    if not hi > lo:
        raise UsageError(f"range must be increasing, got {text!r}")
    return lo, hi


def _branch_indices(selection: str):
    table = {"all": (1, 2, 3, 4), "12": (1, 2), "34": (3, 4),
             "1": (1,), "2": (2,), "3": (3,), "4": (4,)}
    return table[selection]


def _branch_pairs(indices):
    pairs = []
    for pair in ((1, 2), (3, 4)):
        chosen = tuple(i for i in pair if i in indices)
        if chosen:
            pairs.append((pair[0], chosen))
    return pairs


def _sweep_param_name(kind: ModelKind) -> str:
    if kind is ModelKind.WOJCIK:
        return "phi"
    if kind is ModelKind.ONE_DEFECT:
        return "xi"
    return "sigma"


def _sweep_field(kind: ModelKind, param: float):
    if kind is ModelKind.WOJCIK:
        return build_wojcik(param)
    if kind is ModelKind.ONE_DEFECT:
        return build_one_defect(param)
    plus, minus = sweep_phase_pair(kind, param)
    if kind is ModelKind.TWO_PHASE_DEFECT:
        return build_two_phase_defect(plus, minus)
    return build_complete_two_phase(plus, minus)


def _sweep_param_given(args, kind: ModelKind):
    name = _sweep_param_name(kind)
    return getattr(args, name, None)


def _model_for_args(args, kind: ModelKind) -> ModelSpec:
    """Full model spec from explicit CLI parameters, for evolve and spectrum."""
    if kind is ModelKind.WOJCIK:
        if args.phi is None:
            raise UsageError("model wojcik needs --phi")
        return ModelSpec(kind, {"phi": args.phi})
    if kind is ModelKind.ONE_DEFECT:
        if args.xi is None:
            raise UsageError("model one-defect needs --xi")
        return ModelSpec(kind, {"xi": args.xi})
    if args.sigma_plus is not None or args.sigma_minus is not None:
        if args.sigma_plus is None or args.sigma_minus is None:
            raise UsageError("give both --sigma-plus and --sigma-minus, or --sigma alone")
        return ModelSpec(kind, {"sigma_plus": args.sigma_plus, "sigma_minus": args.sigma_minus})
    if args.sigma is not None:
        plus, minus = sweep_phase_pair(kind, args.sigma)
        return ModelSpec(kind, {"sigma_plus": plus, "sigma_minus": minus})
    raise UsageError(f"model {kind.value} needs --sigma or the --sigma-plus/--sigma-minus pair")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.15g}"
    return str(value)


def _cell(value) -> str:
    text = _fmt(value)
    if any(ch in text for ch in ',"\n'):
        text = '"' + text.replace('"', '""') + '"'
    return text


def _emit(args, preamble: dict, columns, rows, summary=None) -> None:
    if args.json:
        payload = {"meta": dict(preamble)}
        payload["rows"] = [{col: row.get(col) for col in columns} for row in rows]
        if summary:
            payload["summary"] = dict(summary)
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [f"# {key}={_fmt(value)}" for key, value in preamble.items()]
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_cell(row.get(col)) for col in columns))
        if summary:
            for key, value in summary.items():
                lines.append(f"# {key}={_fmt(value)}")
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _angle_gap(a: float, b: float) -> float:
    return abs((a - b + math.pi) % (2 * math.pi) - math.pi)


def _nearest_candidate(cands, lam: complex):
    theta = math.atan2(lam.imag, lam.real)
    best, best_gap = None, math.inf
    for cand in cands:
        gap = _angle_gap(math.atan2(cand.lam.imag, cand.lam.real), theta)
        if gap < best_gap:
            best, best_gap = cand, gap
    return best, best_gap


def cmd_sweep(args) -> int:
    kind = ModelKind(args.model)
    indices = _branch_indices(args.branch)
    steps = args.steps if args.steps is not None else 100
    if steps < 2:
        raise UsageError(f"sweep needs at least 2 steps, got {steps}")
    explicit_range = _parse_range(args.range) if args.range else None
    param_name = _sweep_param_name(kind)
    columns = ["model", "branch", "param", "re_lambda", "im_lambda", "in_region",
               "on_continuous_spectrum", "decay_right", "decay_left",
               "matching_residual", "disagree", "note"]
    rows = []
    search_cache = {}
    for index in indices:
        region = admissible_region(kind, BranchLabel(kind, index))
        lo, hi = explicit_range or (region.intervals[0].lo, region.intervals[-1].hi)
        for param in np.linspace(lo, hi, steps):
            param = float(param)
            row = {"model": kind.value, "branch": index, "param": param}
            try:
                lam = sweep_eigenvalue(kind, index, param)
            except (ValueError, SingularDenominatorError, BranchResolutionError) as err:
                row["note"] = f"domain-error: {err}"
                rows.append(row)
                continue
            in_region = region.contains(param)
            row.update(re_lambda=lam.real, im_lambda=lam.imag, in_region=in_region,
                       on_continuous_spectrum=continuous_spectrum_contains(lam))
            field = _sweep_field(kind, param)
            try:
                row["decay_right"] = half_line_solution(field, lam, "right")[0]
                row["decay_left"] = half_line_solution(field, lam, "left")[0]
            except NoContractionError:
                pass
            if args.verify and in_region:
                key = (round(param, 15),)
                if key not in search_cache:
                    search_cache[key] = point_spectrum_search(field, args.grid, args.tol)
                best, gap = _nearest_candidate(search_cache[key], lam)
                if best is None:
                    row["disagree"] = True
                    row["note"] = "no numeric root found"
                else:
                    row["matching_residual"] = best.matching_residual
                    row["disagree"] = gap > DISAGREE_TOL
            rows.append(row)
    rows.sort(key=lambda r: (r["param"], r["branch"]))
    preamble = {"command": "sweep", "model": kind.value, "param_name": param_name,
                "branch": args.branch, "steps": steps}
    if explicit_range:
        preamble["range"] = f"{explicit_range[0]:.15g}:{explicit_range[1]:.15g}"
    preamble.update(grid=args.grid, verify=bool(args.verify), version=__version__)
    _emit(args, preamble, columns, rows)
    return 0


def cmd_verify(args) -> int:
    kind = ModelKind(args.model)
    indices = _branch_indices(args.branch)
    samples = args.steps if args.steps is not None else 20
    if samples < 1:
        raise UsageError(f"verify needs at least 1 sample, got {samples}")
    single = _sweep_param_given(args, kind)
    columns = ["model", "branch", "param", "re_closed", "im_closed", "re_numeric",
               "im_numeric", "angle_error", "matching_residual", "decay_right",
               "decay_left", "status"]
    rows = []
    failures = 0
    checked = 0
    max_angle_error = 0.0
    search_cache = {}
    empty_note = None
    for lead, chosen in _branch_pairs(indices):
        region = admissible_region(kind, BranchLabel(kind, lead))
        params = [float(single)] if single is not None else region.interior_points(samples)
        for param in params:
            try:
                field = _sweep_field(kind, param)
            except ValueError as err:
                raise UsageError(f"cannot build model at {param:.15g}: {err}") from None
            key = (round(param, 15),)
            if key not in search_cache:
                search_cache[key] = point_spectrum_search(field, args.grid, args.tol)
            cands = search_cache[key]
            for index in chosen:
                row = {"model": kind.value, "branch": index, "param": param}
                try:
                    lam = sweep_eigenvalue(kind, index, param)
                except (ValueError, SingularDenominatorError, BranchResolutionError) as err:
                    row["status"] = f"domain-error: {err}"
                    rows.append(row)
                    continue
                row.update(re_closed=lam.real, im_closed=lam.imag)
                if not region.contains(param):
                    row["status"] = "outside-region"
                    rows.append(row)
                    continue
                checked += 1
                best, gap = _nearest_candidate(cands, lam)
                if best is None:
                    row["status"] = "missing-root"
                    failures += 1
                    rows.append(row)
                    continue
                row.update(re_numeric=best.lam.real, im_numeric=best.lam.imag,
                           angle_error=gap, matching_residual=best.matching_residual,
                           decay_right=best.decay_right, decay_left=best.decay_left)
                ok = gap < VERIFY_ANGLE_TOL and best.matching_residual < VERIFY_RESIDUAL_TOL
                max_angle_error = max(max_angle_error, gap)
                if not ok:
                    failures += 1
                row["status"] = "ok" if ok else "fail"
                rows.append(row)
    if single is not None and checked == 0:
        # nothing admissible at this parameter: both methods must find nothing
        field = _sweep_field(kind, float(single))
        cands = point_spectrum_search(field, args.grid, args.tol)
        oracle = localized_spectrum_oracle(field, args.oracle_n)
        if cands or oracle:
            failures += 1
            empty_note = (f"expected empty point spectrum, search found {len(cands)}"
                          f" and oracle found {len(oracle)}")
        else:
            empty_note = "empty point spectrum from both methods"
    summary = {"samples_checked": checked, "failures": failures,
               "max_angle_error": max_angle_error,
               "result": "PASS" if failures == 0 else "FAIL"}
    if empty_note:
        summary["note"] = empty_note
    preamble = {"command": "verify", "model": kind.value, "branch": args.branch,
                "grid": args.grid, "version": __version__}
    _emit(args, preamble, columns, rows, summary)
    return 0 if failures == 0 else 2


def cmd_evolve(args) -> int:
    kind = ModelKind(args.model)
    spec = _model_for_args(args, kind)
    steps = args.steps if args.steps is not None else 500
    if steps < 1:
        raise UsageError(f"evolve needs at least 1 step, got {steps}")
    try:
        field = spec.field()
    except ValueError as err:
        raise UsageError(str(err)) from None
    series = origin_probability_series(field, default_initial_state(), steps)
    running = np.cumsum(series) / np.arange(1, steps + 1)
    columns = ["t", "origin_probability", "running_average"]
    rows = [{"t": t + 1, "origin_probability": float(series[t]),
             "running_average": float(running[t])} for t in range(steps)]
    summary = {"steps": steps, "final_running_average": float(running[-1])}
    preamble = {"command": "evolve", "model": spec.serialize(), "steps": steps,
                "version": __version__}
    _emit(args, preamble, columns, rows, summary)
    return 0


def cmd_spectrum(args) -> int:
    kind = ModelKind(args.model)
    spec = _model_for_args(args, kind)
    try:
        field = spec.field()
    except ValueError as err:
        raise UsageError(str(err)) from None
    states = localized_spectrum_oracle(field, args.oracle_n)
    columns = ["re_lambda", "im_lambda", "participation"]
    rows = [{"re_lambda": lam.real, "im_lambda": lam.imag, "participation": ipr}
            for lam, ipr in states]
    preamble = {"command": "spectrum", "model": spec.serialize(),
                "truncation": args.oracle_n, "version": __version__}
    _emit(args, preamble, columns, rows, {"localized_states": len(states)})
    return 0


def cmd_coverage(args) -> int:
    kind = ModelKind(args.model)
    indices = _branch_indices(args.branch)
    sweep_points = args.steps if args.steps is not None else 2000
    if sweep_points < 2:
        raise UsageError(f"coverage needs at least 2 sweep points, got {sweep_points}")
    half = COVERAGE_BINS // 2
    hit = set()
    for index in indices:
        region = admissible_region(kind, BranchLabel(kind, index))
        total_len = sum(iv.hi - iv.lo for iv in region.intervals)
        for iv in region.intervals:
            npts = max(2, round(sweep_points * (iv.hi - iv.lo) / total_len))
            for param in np.linspace(iv.lo, iv.hi, npts):
                param = float(param)
                if not region.contains(param):
                    continue
                try:
                    lam = sweep_eigenvalue(kind, index, param)
                except (ValueError, SingularDenominatorError, BranchResolutionError):
                    continue
                if continuous_spectrum_contains(lam):
                    continue
                theta = math.atan2(lam.imag, lam.real) % (2 * math.pi)
                for arc_id, (lo, hi) in enumerate(_ARCS):
                    if lo < theta < hi:
                        b = min(half - 1, int((theta - lo) / (hi - lo) * half))
                        hit.add(arc_id * half + b)
    coverage = len(hit) / COVERAGE_BINS
    columns = ["model", "branch", "sweep_points", "bins", "bins_hit", "coverage"]
    rows = [{"model": kind.value, "branch": args.branch, "sweep_points": sweep_points,
             "bins": COVERAGE_BINS, "bins_hit": len(hit), "coverage": coverage}]
    preamble = {"command": "coverage", "model": kind.value, "branch": args.branch,
                "version": __version__}
    _emit(args, preamble, columns, rows)
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qwspectra",
                     description="Point spectra and localization diagnostics for "
                                 "inhomogeneous two-state walks on the integer line.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    specs = {
        "sweep": (cmd_sweep, "closed-form eigenvalues over a parameter grid"),
        "verify": (cmd_verify, "cross-check closed forms against the matching search"),
        "evolve": (cmd_evolve, "origin-return probability of the reference state"),
        "spectrum": (cmd_spectrum, "localized eigenvalues of the truncation oracle"),
        "coverage": (cmd_coverage, "off-band arc coverage of swept eigenvalues"),
    }
    for name, (func, help_text) in specs.items():
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--model", required=True,
                       choices=[k.value for k in ModelKind])
        p.add_argument("--phi", type=parse_angle, default=None)
        p.add_argument("--xi", type=parse_angle, default=None)
        p.add_argument("--sigma", type=parse_angle, default=None)
        p.add_argument("--sigma-plus", type=parse_angle, default=None)
        p.add_argument("--sigma-minus", type=parse_angle, default=None)
        p.add_argument("--branch", choices=["1", "2", "3", "4", "12", "34", "all"],
                       default="all")
        p.add_argument("--steps", type=int, default=None)
        p.add_argument("--range", default=None)
        p.add_argument("--tol", type=float, default=1e-12)
        p.add_argument("--grid", type=int, default=4096)
        p.add_argument("--oracle-n", type=int, default=150, dest="oracle_n")
        p.add_argument("--json", action="store_true")
        p.add_argument("--verify", action="store_true")
        p.add_argument("--out", default=None)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except UsageError as err:
        sys.stderr.write(f"qwspectra: error: {err}\n")
        return 1
    except (NoContractionError, BranchResolutionError, SingularDenominatorError,
            np.linalg.LinAlgError) as err:
        sys.stderr.write(f"qwspectra: numeric failure: {err}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
