"""Command-line front end.

Subcommands: check (batch trace vs assertions, JSON report), stream
(samples on stdin, verdict JSON lines out), oracle (dense-grid
reference classification), codegen (Verilog-AMS monitor text), and
genwave (synthetic trace CSV from a waveform spec).

Exit codes: 0 clean, 1 at least one fail interval/verdict, 2 usage,
IO, parse, or protocol errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .ast import horizon
from .atoms import build_table
from .codegen import CodegenConfig, generate_monitors
from .engine import assertion_match
from .errors import AmscheckError
from .intervals import Interval, IntervalSet, set_union
from .online import Session
from .oracle import oracle_classify
from .parser import parse_file
from .trace import load_csv, save_csv
from .wavegen import fixture_spec, generate, load_spec

REPORT_VERSION = 1


def _interval_row(iv: Interval) -> list:
    return [iv.lo, iv.hi, iv.lo_closed, iv.hi_closed]


def _set_rows(s: IntervalSet) -> list:
    return [_interval_row(iv) for iv in s.items]


def _load_assertions(path: str, value_tol: float):
    with open(path) as f:
        text = f.read()
    props = parse_file(text, value_tol=value_tol)
    if not props:
        raise AmscheckError(f"{path}: no assertions found")
    return props


def _pick(props, name_filter):
    if name_filter is None:
        return props
    chosen = [p for p in props if p.name == name_filter]
    if not chosen:
        raise AmscheckError(f"no assertion named {name_filter!r}")
    return chosen


def cmd_check(args) -> int:
    trace = load_csv(args.trace)
    props = _pick(_load_assertions(args.assertions, args.value_tol), args.assert_name)
    table = build_table(trace, props, eps=args.time_tol)
    reports = [assertion_match(p, table) for p in props]
    doc = {
        "version": REPORT_VERSION,
        "trace": args.trace,
        "domain": [trace.domain.lo, trace.domain.hi],
        "time_tol": args.time_tol,
        "assertions": [
            {
                "name": r.name,
                "horizon": r.horizon,
                "nonvacuous": _set_rows(r.nonvacuous),
                "vacuous": _set_rows(r.vacuous),
                "fail": _set_rows(r.fail),
                "undetermined": _set_rows(r.undetermined),
            }
            for r in reports
        ],
    }
    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.report:
        with open(args.report, "w") as f:
            f.write(text + "\n")
    width = max(len(r.name) for r in reports)
    for r in reports:
        status = "FAIL" if not r.fail.is_empty else "PASS"
        print(
            f"{r.name:<{width}}  {status}  match={len(r.nonvacuous.items)}"
            f" vacuous={len(r.vacuous.items)} fail={len(r.fail.items)}"
            f" undetermined={len(r.undetermined.items)}"
        )
        for iv in r.fail.items:
            print(f"{'':<{width}}  fail at {iv}")
    return 1 if any(not r.fail.is_empty for r in reports) else 0


def cmd_stream(args) -> int:
    kinds = {}
    for part in args.signals.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            name, kind = part.split(":", 1)
        else:
            name, kind = part, "analog"
        kinds[name.strip()] = kind.strip()
    props = _pick(_load_assertions(args.assertions, args.value_tol), args.assert_name)
    sess = Session(props, kinds, eps=args.time_tol)
    out = sys.stdout
    names = list(kinds)
    totals: dict[str, dict[str, IntervalSet]] = {}

    def record(v):
        per = totals.setdefault(v.name, {})
        cur = per.get(v.kind, IntervalSet([], args.time_tol))
        per[v.kind] = set_union(cur, IntervalSet([v.interval], args.time_tol), args.time_tol)

    def emit(v):
        record(v)
        out.write(
            json.dumps(
                {
                    "assertion": v.name,
                    "kind": v.kind,
                    "interval": _interval_row(v.interval),
                    "decided_at": v.decided_at,
                },
                sort_keys=True,
            )
            + "\n"
        )
        out.flush()

    for lineno, line in enumerate(sys.stdin, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) != len(names) + 1:
            print(f"stdin:{lineno}: expected time + {len(names)} values", file=sys.stderr)
            return 2
        try:
            t = float(toks[0])
            vals = dict(zip(names, (float(x) for x in toks[1:])))
        except ValueError:
            print(f"stdin:{lineno}: bad number", file=sys.stderr)
            return 2
        for v in sess.feed(t, vals):
            emit(v)
    for v in sess.finalize():
        emit(v)
    summary = {
        "summary": {
            name: {kind: _set_rows(s) for kind, s in sorted(per.items())}
            for name, per in sorted(totals.items())
        }
    }
    out.write(json.dumps(summary, sort_keys=True) + "\n")
    failed = any("fail" in per and not per["fail"].is_empty for per in totals.values())
    return 1 if failed else 0


def cmd_oracle(args) -> int:
    trace = load_csv(args.trace)
    props = _pick(_load_assertions(args.assertions, args.value_tol), args.assert_name)
    doc = {"version": REPORT_VERSION, "dt": args.dt, "assertions": []}
    for p in props:
        grid, kinds = oracle_classify(trace, p, args.dt)
        doc["assertions"].append(
            {
                "name": p.name,
                "horizon": horizon(p),
                "points": [[float(t), k] for t, k in zip(grid, kinds)],
            }
        )
    print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


def cmd_codegen(args) -> int:
    props = _pick(_load_assertions(args.assertions, args.value_tol), args.assert_name)
    cfg = CodegenConfig(
        assertion_id=args.id,
        time_acc=args.time_acc,
        value_acc=args.value_acc,
        module_name=args.module_name,
        wrap_module=args.module,
    )
    chunks = []
    for i, p in enumerate(props):
        c = cfg if i == 0 else CodegenConfig(
            assertion_id=args.id + i,
            time_acc=args.time_acc,
            value_acc=args.value_acc,
            module_name=args.module_name,
            wrap_module=args.module,
        )
        chunks.append(generate_monitors(p, c))
    text = "\n".join(chunks)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_genwave(args) -> int:
    if args.fixture:
        spec = fixture_spec(args.fixture)
    elif args.spec:
        spec = load_spec(args.spec)
    else:
        raise AmscheckError("genwave needs a spec file or --fixture")
    trace = generate(spec)
    save_csv(trace, args.out)
    print(f"wrote {args.out}: {len(trace.times())} samples, signals {', '.join(trace.signals)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="amscheck", description="Dense-time checker for analog/mixed-signal assertions.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--time-tol", type=float, default=1e-9, help="time comparison tolerance in seconds")
        p.add_argument("--value-tol", type=float, default=1e-6, help="tolerance used to desugar == on analog values")
        p.add_argument("--assert-name", default=None, help="check only the named assertion")

    p = sub.add_parser("check", help="check a trace CSV against an assertion file")
    p.add_argument("trace")
    p.add_argument("assertions")
    p.add_argument("--report", default=None, help="write a JSON report here")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("stream", help="check samples streamed on stdin")
    p.add_argument("assertions")
    p.add_argument("--signals", required=True, help="comma list of name:kind declaring the sample columns")
    common(p)
    p.set_defaults(func=cmd_stream)

    p = sub.add_parser("oracle", help="dense-grid reference classification")
    p.add_argument("trace")
    p.add_argument("assertions")
    p.add_argument("--dt", type=float, required=True, help="grid step in seconds")
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("codegen", help="emit Verilog-AMS monitor text")
    p.add_argument("assertions")
    p.add_argument("--id", type=int, default=0, help="assertion id for callback arguments")
    p.add_argument("--time-acc", type=float, default=1e-9)
    p.add_argument("--value-acc", type=float, default=1e-6)
    p.add_argument("--out", default=None, help="output .vams path (default stdout)")
    p.add_argument("--module", action="store_true", help="wrap blocks in a module")
    p.add_argument("--module-name", default="amscheck_monitors")
    common(p)
    p.set_defaults(func=cmd_codegen)

    p = sub.add_parser("genwave", help="generate a trace CSV from a waveform spec")
    p.add_argument("spec", nargs="?", default=None, help="waveform spec JSON path")
    p.add_argument("--fixture", default=None, help="bundled spec name: settling, delay-escape")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_genwave)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except AmscheckError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
