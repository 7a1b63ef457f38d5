"""Command-line front end.

    squeezedho run <config.json> [--out-dir DIR] [--nmax N]
    squeezedho describe <config.json> [--nmax N]
    squeezedho verify [--suite fast|full] [--seed S] [--out-dir DIR]

Exit status: 0 ok, 1 verification failure, 2 config parse error,
3 validation error, 4 truncation/degeneracy error during the run.
"""

import argparse
import json
import os
import sys

from .factory import DegeneracyError
from .fock import FockDomainError, TruncationError
from .scenario import ConfigError, ValidationError, load_config, manifest, render, validate, write_outputs

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_RUNTIME = 4


def _load(args):
    cfg = load_config(args.config)
    if args.nmax is not None:
        cfg.truncation.n_max = args.nmax
    return cfg


def cmd_run(args):
    cfg = _load(args)
    try:
        files = render(cfg)
    except (TruncationError, DegeneracyError, FockDomainError) as exc:
        print(f"error during run: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    write_outputs(files, args.out_dir)
    for name in sorted(files):
        print(os.path.join(args.out_dir, name))
    return EXIT_OK


def cmd_describe(args):
    cfg = _load(args)
    validate(cfg)
    print(json.dumps(manifest(cfg), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_verify(args):
    from .verify import run_suite

    results = run_suite(args.suite, args.seed)
    lines = [r.line() for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed ({args.suite} suite)")
    report = "\n".join(lines) + "\n"
    sys.stdout.write(report)
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        with open(os.path.join(args.out_dir, f"verify_{args.suite}.txt"), "w") as fh:
            fh.write(report)
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="squeezedho", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario and write its outputs")
    p_run.add_argument("config")
    p_run.add_argument("--out-dir", default=".")
    p_run.add_argument("--nmax", type=int, default=None, help="override truncation.n_max")
    p_run.set_defaults(func=cmd_run)

    p_desc = sub.add_parser("describe", help="validate a scenario and print its manifest")
    p_desc.add_argument("config")
    p_desc.add_argument("--nmax", type=int, default=None)
    p_desc.set_defaults(func=cmd_describe)

    p_ver = sub.add_parser("verify", help="run the acceptance checks")
    p_ver.add_argument("--suite", choices=["fast", "full"], default="fast")
    p_ver.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")
    p_ver.add_argument("--out-dir", default=None)
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
