"""Command line entry point: ``ffweil <subcommand> [--spec FILE] ...``."""

from __future__ import annotations

import argparse
import json
import sys

from .errors import FFWeilError, FormatUnsupported, ParseError, ValidationError
from .jobs import emit, parse_jobspec, run

# which (target kind, op) pairs each subcommand runs from a job file
SELECTORS = {
    "places": lambda kind, op: kind == "places",
    "cover": lambda kind, op: kind == "covers" and op != "zeta",
    "lfun": lambda kind, op: op in ("lfun", "truncated"),
    "zeta-cover": lambda kind, op: kind == "covers" and op == "zeta",
    "chi-w": lambda kind, op: op in ("chi_w", "r"),
    "torus": lambda kind, op: kind == "tori",
    "motive": lambda kind, op: kind == "motives",
    "verify": None,
    "ono-table": lambda kind, op: kind == "ono_table",
}


def _ints(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def _kummer(text):
    m, sep, f = text.partition(":")
    if not sep or not m.strip().isdigit():
        raise argparse.ArgumentTypeError(f"expected M:F such as 2:t^3-t, got {text!r}")
    return {"m": int(m), "f": f.strip()}


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--spec", metavar="FILE", help="JSON job file")
    p.add_argument("--format", choices=["json", "csv", "text"], default="json")
    p.add_argument("--threads", type=int, metavar="N", help="worker threads for Euler products")
    p.add_argument("--max-depth", type=int, metavar="D", help="largest series depth for reconstruction")
    p.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
    p.add_argument("-q", type=int, help="field size for inline jobs")
    return p


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="ffweil", description="Special values over F_q(t), exactly.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("places", parents=[common], help="enumerate places of F_q(t)")
    p.add_argument("--max-degree", type=int, default=2)
    p.add_argument("--counts-only", action="store_true")

    for name, text in (("cover", "genus, constant field and ramification"), ("zeta-cover", "zeta function")):
        p = sub.add_parser(name, parents=[common], help=f"{text} of a Kummer cover")
        p.add_argument("--constant-degree", type=int, default=1)
        p.add_argument("--kummer", type=_kummer, action="append", default=[], metavar="M:F")

    sub.add_parser("lfun", parents=[common], help="L-functions of the sheaves, tori and motives in a job")
    sub.add_parser("chi-w", parents=[common], help="Weil-etale Euler characteristics in a job")

    p = sub.add_parser("torus", parents=[common], help="torus commands from a job, or a constant norm-one torus")
    p.add_argument("--norm-one", type=int, metavar="N", help="inline: verify the norm-one torus for F_q^N")

    p = sub.add_parser("motive", parents=[common], help="1-motive commands from a job, or an inline map")
    p.add_argument("--map", metavar="JSON", help='inline: rows of rational functions, e.g. [["t"]]')

    sub.add_parser("verify", parents=[common], help="run every command in a job")

    p = sub.add_parser("ono-table", parents=[common], help="Ono versus modern Tamagawa numbers")
    p.add_argument("--qs", type=_ints, default=[2, 3, 5])
    p.add_argument("--ns", type=_ints, default=[2, 3, 4])
    return parser


def _inline_job(args):
    """A job mapping built from subcommand flags, or None when flags are insufficient."""
    if args.command == "ono-table":
        return {"commands": [{"target": "ono_table", "op": "table", "options": {"qs": args.qs, "ns": args.ns}}]}
    if args.q is None:
        return None
    job = {"q": args.q, "commands": []}
    if args.command == "places":
        opts = {"max_degree": args.max_degree, "list": not args.counts_only}
        job["commands"].append({"target": "places", "op": "enumerate", "options": opts})
    elif args.command in ("cover", "zeta-cover"):
        job["covers"] = {"C": {"constant_degree": args.constant_degree, "kummer": args.kummer}}
        ops = ["zeta"] if args.command == "zeta-cover" else ["genus", "constant_field", "ramification"]
        job["commands"] = [{"target": "C", "op": op} for op in ops]
    elif args.command == "torus" and args.norm_one:
        job["tori"] = {"T": {"family": "norm_one_constant", "n": args.norm_one}}
        job["commands"] = [{"target": "T", "op": op} for op in ("verify", "verify_ono")]
    elif args.command == "motive" and args.map:
        try:
            rows = json.loads(args.map)
        except json.JSONDecodeError as exc:
            raise ParseError(f"--map is not valid JSON: {exc.msg}") from None
        job["motives"] = {"M": {"map": rows}}
        job["commands"] = [{"target": "M", "op": op} for op in ("lfun", "chi_w", "verify")]
    else:
        return None
    return job


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.spec:
            job = parse_jobspec(args.spec)
            select = SELECTORS[args.command]
        else:
            data = _inline_job(args)
            if data is None:
                parser.error(f"{args.command} needs --spec FILE or inline options")
            job = parse_jobspec(data)
            select = None
        report = run(job, threads=args.threads, max_depth=args.max_depth, select=select)
        payload = emit(report, args.format)
    except (ParseError, ValidationError, FormatUnsupported) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except FFWeilError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload.decode())
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
