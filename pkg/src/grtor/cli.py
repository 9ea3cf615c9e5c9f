"""Batch command line: parse ring/module input files, dispatch the
pipelines, and emit series, diagrams, certificates and verdicts.

Exit codes: 0 success/verified, 1 usage/parse error, 2 infeasible or
unverified, 3 validity window exhausted.
"""

import argparse
import json
import sys

from .fields import Field, FieldError, field_from_name
from .groebner import (CapExceededError, GroebnerError, IdealPresentation,
                       ModulePresentation, colength, graded_twin,
                       initial_ideal, leading_monomial_ideal, hilbert_function)
from .filtered import (FilteredComplex, LiftError, LiftWindowExceededError,
                       filtered_tensor, resolve_local_cyclic)
from .poly import GRADED, LOCAL, ParseError, Ring, RingError, parse_ideal  # noqa: F401
from .resolution import tor_series
from .series import BigradedSeries, SeriesError, decide_cancellation
from .spectral import run_to_stability

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNVERIFIED = 2
EXIT_WINDOW = 3


class InputError(ValueError):
    pass


def parse_job_file(path):
    """Flat key/value job format with [section] headers; values keep their
    text form.  Errors carry line numbers."""
    sections = {}
    current = None
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("[") and line.endswith("]"):
                current = line[1:-1].strip().lower()
                sections.setdefault(current, {})
                continue
            if "=" not in line:
                raise InputError("%s:%d: expected 'key = value', got %r" % (path, lineno, raw.strip()))
            if current is None:
                raise InputError("%s:%d: key/value outside any [section]" % (path, lineno))
            key, val = line.split("=", 1)
            sections[current][key.strip().lower()] = val.strip()
    return sections


def build_ring(sections, args):
    ring_sec = sections.get("ring")
    if ring_sec is None:
        raise InputError("input file needs a [ring] section")
    if args.char:
        field = Field(args.char)
    elif args.field:
        field = field_from_name(args.field)
    else:
        field = field_from_name(ring_sec.get("field", "QQ"))
    variables = ring_sec.get("variables", "").split()
    if not variables:
        raise InputError("[ring] needs 'variables = ...'")
    setting = ring_sec.get("setting", "graded").lower()
    cap = args.cap
    if cap is None and "cap" in sections.get("bounds", {}):
        cap = int(sections["bounds"]["cap"])
    if cap is None:
        cap = args.jmax + args.imax + 2
    quotient = ring_sec.get("quotient", "")
    if setting == LOCAL:
        ring = Ring(variables, field, LOCAL, cap=cap)
        if quotient:
            raise InputError("local rings with quotients are out of scope; present modules by ideals")
    else:
        base = Ring(variables, field, GRADED)
        gens = parse_ideal(base, quotient) if quotient else ()
        ring = Ring(variables, field, GRADED, quotient=gens)
    return ring, cap


def module_ideal(sections, name, ring):
    sec = sections.get("module %s" % name.lower()) or sections.get(name.lower())
    if sec is None:
        raise InputError("input file needs a [module %s] section" % name)
    text = sec.get("ideal", "").strip()
    filtration = sec.get("filtration", "m-adic").lower()
    if filtration != "m-adic":
        raise InputError("only the m-adic filtration is supported in job files")
    if not text or text == "0":
        return None
    gens = parse_ideal(ring, text)
    if ring.setting == LOCAL and any(g.is_zero() for g in gens):
        # nonzero source text that died at the ring cap
        check = Ring(ring.variables, ring.field, GRADED)
        if any(not g.is_zero() for g in parse_ideal(check, text)):
            raise CapExceededError(
                "a generator of [module %s] truncated to zero at cap %d" % (name, ring.cap))
    return IdealPresentation(ring, gens)


def series_json(series):
    return {
        "imax": series.i_max,
        "jmax": series.j_max,
        "terms": [[i, j, series.get(i, j)] for (i, j) in sorted(series.coefficients)],
    }


def emit_series(series, fmt, out):
    if fmt == "json":
        out.write(json.dumps(series_json(series), sort_keys=True) + "\n")
    elif fmt == "series":
        out.write(series.to_text())
    else:
        out.write(series.to_diagram())


def cmd_gr(args, out):
    sections = parse_job_file(args.input)
    ring, cap = build_ring(sections, args)
    if ring.setting != LOCAL:
        raise InputError("gr needs a local ring (setting = local)")
    ideal = module_ideal(sections, "M", ring)
    if ideal is None:
        raise InputError("gr needs a nonzero ideal in [module M]")
    ini = initial_ideal(ideal, cap)
    lm = leading_monomial_ideal(ideal, cap)
    series = BigradedSeries(0, args.jmax)
    for j in range(args.jmax + 1):
        h = hilbert_function(lm, ring.nvars, j)
        if h:
            series._set(0, j, h)
    mass = colength(ideal, cap)
    if args.format == "json":
        out.write(json.dumps({
            "command": "gr",
            "initial_ideal": [str(g) for g in ini.generators],
            "series": series_json(series),
            "colength": (None if mass == float("inf") else mass),
            "validity_window": min(args.jmax, cap),
        }, sort_keys=True) + "\n")
    else:
        out.write("initial ideal: (%s)\n" % ", ".join(str(g) for g in ini.generators))
        out.write("colength: %s\n" % ("infinite" if mass == float("inf") else mass))
        out.write("hilbert series of the associated graded (j <= %d):\n" % args.jmax)
        emit_series(series, args.format, out)
    return EXIT_OK


def cmd_tor_gr(args, out):
    sections = parse_job_file(args.input)
    ring, _cap = build_ring(sections, args)
    if ring.setting != GRADED:
        raise InputError("tor-gr needs a graded ring (setting = graded)")
    iM = module_ideal(sections, "M", ring)
    iN = module_ideal(sections, "N", ring)
    mM = ModulePresentation.cyclic(ring, iM.generators if iM else [])
    mN = ModulePresentation.cyclic(ring, iN.generators if iN else [])
    series = tor_series(mM, mN, args.imax, args.jmax)
    if args.format == "json":
        out.write(json.dumps({
            "command": "tor-gr",
            "series": series_json(series),
            "validity_window": args.jmax,
        }, sort_keys=True) + "\n")
    else:
        emit_series(series, args.format, out)
    return EXIT_OK


def _check_synthetic(args, out):
    if args.synthetic == "random":
        from .spectral import random_filtered_complex
        L = random_filtered_complex(args.seed)
    else:
        with open(args.synthetic) as fh:
            L = FilteredComplex.from_text(fh.read())
    run = run_to_stability(L)
    return _report_run(args, out, run, tor_graded=None, page1_matches=None)


def _report_run(args, out, run, tor_graded, page1_matches):
    verdict_ok = bool(run.verified) and (page1_matches is not False)
    window_exhausted = run.window_j < 0
    verdict = "PASS" if verdict_ok else "FAIL"
    if window_exhausted:
        verdict = "WINDOW-EXHAUSTED"
    if args.format == "json":
        payload = {
            "command": "check-theorem",
            "page1": series_json(run.page1.dims),
            "page_infinity": series_json(run.page_infinity.dims),
            "page_infinity_indeterminate": sorted(
                [i, j] for (i, j) in run.page_infinity.indeterminate),
            "certificate": [[s.i, s.a, s.b] for s in run.certificate],
            "boundary_indeterminate": [
                [r, i, j, c]
                for r in sorted(run.boundary)
                for (i, j), c in sorted(run.boundary[r].items())
            ],
            "r_stab": run.r_stab,
            "validity_window": run.window_j,
            "verified": bool(run.verified),
            "verdict": verdict,
        }
        if tor_graded is not None:
            payload["tor_graded"] = series_json(tor_graded)
            payload["page1_matches_tor"] = page1_matches
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        if tor_graded is not None:
            out.write("graded Tor series:\n")
            out.write(tor_graded.to_diagram())
        out.write("page 1 (reliable cells):\n")
        out.write(run.page1.dims.to_diagram())
        out.write("page infinity (window j <= %d):\n" % run.window_j)
        out.write(run.page_infinity.dims.to_diagram())
        excluded = sorted(run.page_infinity.indeterminate)
        shown = [c for c in excluded if c[1] <= run.window_j]
        if shown:
            out.write("indeterminate page-infinity cells (fate closes past the "
                      "truncation): %s\n" % " ".join("(%d,%d)" % c for c in shown))
        out.write("certificate (%d steps, 'i a b' means subtract z^{i+1}t^a + z^i t^b):\n"
                  % len(run.certificate))
        out.write(run.certificate.to_text())
        for r in sorted(run.boundary):
            for (i, j), c in sorted(run.boundary[r].items()):
                out.write("boundary-indeterminate: page %d cell (%d, %d): %d unit(s)\n"
                          % (r, i, j, c))
        if tor_graded is not None:
            out.write("page 1 matches graded Tor on the window: %s\n"
                      % ("yes" if page1_matches else "NO"))
        out.write("bookkeeping verified: %s\n" % ("yes" if run.verified else "NO"))
        out.write("verdict: %s\n" % verdict)
    if window_exhausted:
        return EXIT_WINDOW
    return EXIT_OK if verdict_ok else EXIT_UNVERIFIED


def cmd_check_theorem(args, out):
    if args.synthetic:
        return _check_synthetic(args, out)
    if not args.input:
        raise InputError("check-theorem needs an input file or --synthetic")
    sections = parse_job_file(args.input)
    ring, cap = build_ring(sections, args)
    if ring.setting == GRADED:
        if ring.quotient:
            raise InputError("check-theorem covers the regular case; no ring quotients")
        local = Ring(ring.variables, ring.field, LOCAL, cap=cap)
    else:
        local = ring
    iM = module_ideal(sections, "M", local)
    iN = module_ideal(sections, "N", local)
    if iM is None:
        raise InputError("check-theorem needs a nonzero ideal in [module M]")

    gring = graded_twin(local)
    iniM = initial_ideal(iM, cap)
    mM = ModulePresentation.cyclic(gring, [g for g in iniM.generators])
    if iN is not None:
        iniN = initial_ideal(iN, cap)
        mN = ModulePresentation.cyclic(gring, [g for g in iniN.generators])
    else:
        mN = ModulePresentation(gring, 1, (0,), [])
    tor_graded = tor_series(mM, mN, args.imax, args.jmax)

    fres = resolve_local_cyclic(iM, cap)
    L = filtered_tensor(fres, iN, args.jmax)
    run = run_to_stability(L)

    compare_to = min(args.jmax - 1, args.jmax)
    cells = [(i, j) for i in range(args.imax + 1) for j in range(compare_to + 1)
             if j + 1 <= args.jmax]
    page1_matches = all(run.page1.dims.get(i, j) == tor_graded.get(i, j)
                        for (i, j) in cells if i <= run.page1.dims.i_max)
    return _report_run(args, out, run, tor_graded, page1_matches)


def cmd_cancel(args, out):
    with open(args.source) as fh:
        source = BigradedSeries.from_text(fh.read())
    with open(args.target) as fh:
        target = BigradedSeries.from_text(fh.read())
    decision = decide_cancellation(source, target)
    if args.format == "json":
        payload = {
            "command": "cancel",
            "feasible": decision.feasible,
            "certificate": ([[s.i, s.a, s.b] for s in decision.certificate]
                            if decision.feasible else None),
            "negative_cell": (list(decision.negative_cell)
                              if decision.negative_cell else None),
            "unmatched_hard": decision.unmatched_hard,
            "unmatched_boundary": decision.unmatched_boundary,
        }
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    elif decision.feasible:
        out.write(decision.certificate.to_text())
    else:
        out.write("infeasible\n")
        if decision.negative_cell:
            out.write("negative difference at (i=%d, j=%d)\n" % decision.negative_cell)
        else:
            out.write("unmatched units: %d hard, %d boundary-indeterminate\n"
                      % (decision.unmatched_hard, decision.unmatched_boundary))
    return EXIT_OK if decision.feasible else EXIT_UNVERIFIED


def make_parser():
    parser = argparse.ArgumentParser(
        prog="grtor",
        description="Bigraded Tor series over associated graded rings and "
                    "negative consecutive cancellation certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--imax", type=int, default=6)
        p.add_argument("--jmax", type=int, default=12)
        p.add_argument("--char", type=int, default=0,
                       help="prime characteristic (0 = rationals)")
        p.add_argument("--field", default=None, help="QQ or Fp <p>")
        p.add_argument("--cap", type=int, default=None,
                       help="local truncation cap (default jmax + imax + 2)")
        p.add_argument("--format", choices=["table", "series", "json"], default="table")
        p.add_argument("--seed", type=int, default=0)

    p_gr = sub.add_parser("gr", help="initial ideal and Hilbert series of the associated graded")
    p_gr.add_argument("input")
    common(p_gr)

    p_tor = sub.add_parser("tor-gr", help="bigraded Tor series over a graded ring")
    p_tor.add_argument("input")
    common(p_tor)

    p_check = sub.add_parser("check-theorem",
                             help="run the spectral sequence and verify the cancellation certificate")
    p_check.add_argument("input", nargs="?")
    p_check.add_argument("--synthetic", default=None,
                         help="run on a serialized filtered complex instead of ring data")
    common(p_check)

    p_cancel = sub.add_parser("cancel", help="decide cancellation between two series files")
    p_cancel.add_argument("source")
    p_cancel.add_argument("target")
    common(p_cancel)
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    try:
        if args.command == "gr":
            return cmd_gr(args, out)
        if args.command == "tor-gr":
            return cmd_tor_gr(args, out)
        if args.command == "check-theorem":
            return cmd_check_theorem(args, out)
        if args.command == "cancel":
            return cmd_cancel(args, out)
        raise InputError("unknown command %r" % args.command)
    except (LiftWindowExceededError, CapExceededError) as exc:
        print("window exhausted: %s" % exc, file=sys.stderr)
        return EXIT_WINDOW
    except (InputError, ParseError, RingError, GroebnerError, SeriesError,
            LiftError, FieldError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
