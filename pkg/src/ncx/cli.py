"""Command line entry point: ``ncx verify|norm|gen|split|selftest``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import harness
from .errors import NcxError
from .serialize import dumps, fn_from_dict, fn_to_dict, sequence_from_dict, sequence_to_dict

EXIT_OK, EXIT_INTERNAL, EXIT_HYPOTHESIS, EXIT_USAGE = 0, 1, 2, 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    try:
        return int(os.environ.get("NCX_SEED", "0"))
    except ValueError:
        return 0


def _kset(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ncx", description="Verify splitting-norm bounds for operator-valued "
                "Rademacher and lacunary Fourier coefficients.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser(
        "verify", help="run constructions on random instances",
        epilog="CSV columns, in order: " + ", ".join(harness.CSV_COLUMNS) + ". "
               "JSON output is an array of row objects. Exit 0 iff every row satisfies "
               "its invariants, 2 if some instance fails its hypothesis.")
    v.add_argument("kind", choices=harness.KINDS)
    _instance_flags(v)
    v.add_argument("--count", type=int, default=10)
    v.add_argument("--out", default=None, help="output file (default stdout)")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.add_argument("--workers", type=int, default=1)

    n = sub.add_parser("norm", help="splitting norm of a stored sequence")
    nsub = n.add_subparsers(dest="norm_command", required=True, parser_class=_Parser)
    s = nsub.add_parser("solve", help="solve for the splitting norm of an OpSequence JSON file")
    s.add_argument("file")
    s.add_argument("--tolerance", type=float, default=1e-4)

    g = sub.add_parser("gen", help="write one random instance as JSON")
    g.add_argument("file")
    g.add_argument("--kind", choices=harness.KINDS, default="khintchine")
    _instance_flags(g)

    sp = sub.add_parser("split", help="run the construction on an instance file from `gen`")
    sp.add_argument("file")

    sub.add_parser("selftest", help="run the built-in invariant checks")
    return p


def _instance_flags(p):
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--terms", type=int, default=3,
                   help="number of coefficients (J + 1, or |K| when --kset is absent)")
    p.add_argument("--kset", type=_kset, default=None, help="explicit lacunary set, e.g. 1,3,7")
    p.add_argument("--seed", type=int, default=None, help="default: $NCX_SEED or 0")


def _spec_kwargs(args) -> dict:
    terms = len(args.kset) if args.kset else args.terms
    return {"dim": args.dim, "terms": terms, "kset": args.kset}


def _write(text: str, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _verify(args) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    specs = harness.batch_specs(args.kind, args.count, seed, **_spec_kwargs(args))
    rows = harness.run_experiment(specs, workers=args.workers)
    if args.format == "json":
        text = json.dumps([r.to_dict() for r in rows], indent=1) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(harness.CSV_COLUMNS)
        for r in rows:
            w.writerow(r.csv_record())
        text = buf.getvalue()
    _write(text, args.out)
    print(json.dumps(harness.summarize(rows)), file=sys.stderr)
    statuses = {r.status for r in rows}
    if "error" in statuses:
        return EXIT_INTERNAL
    if "failed" in statuses:
        return EXIT_HYPOTHESIS
    return EXIT_OK if statuses <= {"ok"} else EXIT_INTERNAL


def _norm_solve(args) -> int:
    from .seqnorm import check_certificate, triple_norm_solve

    with open(args.file) as fh:
        c = sequence_from_dict(json.load(fh))
    cert = triple_norm_solve(c, tolerance=args.tolerance)
    doc = {
        "value": cert.value,
        "dual_lower": cert.dual_lower,
        "gap": cert.gap,
        "iterations": cert.iterations,
        "converged": cert.converged,
        "feasibility_residual": check_certificate(cert, c),
        "a": sequence_to_dict(cert.a),
        "b": sequence_to_dict(cert.b),
    }
    print(dumps(doc, indent=1))
    return EXIT_OK


def _gen(args) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    spec = harness.InstanceSpec(kind=args.kind, seed=seed, **_spec_kwargs(args))
    f, meta = harness.gen_instance(spec)
    _write(dumps({"meta": meta, "function": fn_to_dict(f)}) + "\n", args.file)
    return EXIT_OK


def _split(args) -> int:
    with open(args.file) as fh:
        doc = json.load(fh)
    f = fn_from_dict(doc["function"])
    sp = harness.split_instance(f, doc["meta"])
    print(dumps(sp.to_dict(), indent=1))
    return EXIT_OK if not sp.check() else EXIT_INTERNAL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _verify(args)
        if args.command == "norm":
            return _norm_solve(args)
        if args.command == "gen":
            return _gen(args)
        if args.command == "split":
            return _split(args)
        from .selftest import run_selftest

        return EXIT_OK if run_selftest(verbose=True) else EXIT_INTERNAL
    except NcxError as exc:
        from .errors import HypothesisError

        print(f"ncx: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS if isinstance(exc, HypothesisError) else EXIT_INTERNAL
    except (OSError, ValueError, KeyError) as exc:
        print(f"ncx: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
