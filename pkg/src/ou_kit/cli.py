"""``ou-kit`` command line.

Exit status: 0 when everything requested passed, 1 when a check failed,
2 for usage errors and unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import io
from .campaign import (
    CHECK_GROUPS,
    FAULTS,
    CampaignConfig,
    default_jobs,
    replay,
    run_campaign,
)
from .decomp import (
    COLUMN,
    ROW,
    decompose_elementary,
    factorize_eta,
    factorize_theta,
    generator_preimage,
)
from .matrix import Mat, inverse_commutative
from .rings import SHIPPED_DESCRIPTORS, Ring, RingError, ring_from_descriptor
from .sampling import random_invertible_phi
from .vaserstein import assemble, eta, is_symplectic, symplectic_pair, theta

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------


def parse_range(text: str) -> list[int]:
    """``"1-3"`` -> [1, 2, 3]; ``"0,2"`` -> [0, 2]; ``"4"`` -> [4]."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            lo, sep, hi = part.partition("-")
            if sep and lo:
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer range {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return out


def parse_vector(ring: Ring, text: str) -> tuple:
    try:
        return tuple(ring.parse(x) for x in text.split(","))
    except RingError as exc:
        raise UsageError(f"bad vector {text!r}: {exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _form(args):
    return io.parse_form_file(args.form)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_build_form(args) -> int:
    ring = ring_from_descriptor(args.ring)
    if args.phi:
        phi = io.parse_matrix_file(args.phi, ring)
        phi_inv = io.parse_matrix_file(args.phi_inv, ring) if args.phi_inv else None
    else:
        if args.phi_inv:
            raise UsageError("--phi-inv needs --phi")
        phi, phi_inv = random_invertible_phi(ring, args.n, random.Random(f"phi|{args.phi_seed}"))
    if phi.nrows != args.n:
        raise UsageError(f"phi is {phi.nrows}x{phi.ncols} but --n is {args.n}")
    data = assemble(ring, args.m, args.n, phi, phi_inv)
    _emit(io.form_to_text(data), args.out)
    return EXIT_OK


def _generator(fn):
    def run(args) -> int:
        data = _form(args)
        v = data.vector(parse_vector(data.ring, args.vector))
        _emit(io.matrix_to_text(fn(data, v)), args.out)
        return EXIT_OK

    return run


def cmd_factorize(args) -> int:
    data = _form(args)
    v = data.vector(parse_vector(data.ring, args.vector))
    fn = factorize_theta if args.kind == "theta" else factorize_eta
    target = theta if args.kind == "theta" else eta
    word = fn(data, v)
    _emit(io.word_to_text(word), args.out)
    if word.evaluate() != target(data, v):
        print("factorization does not evaluate to the generator", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_preimage(args) -> int:
    data = _form(args)
    a = data.ring.parse(args.a)
    v = generator_preimage(data, args.side, args.i, a)
    print(",".join(data.ring.format(x) for x in v))
    return EXIT_OK


def cmd_decompose(args) -> int:
    data = _form(args)
    a = data.ring.parse(args.a)
    word = decompose_elementary(data, args.i, args.j, a)
    _emit(io.word_to_text(word), args.out)
    if word.evaluate() != Mat.identity(data.ring, data.N).with_entry(args.i, args.j, a):
        print("decomposition does not evaluate to the elementary matrix", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_evaluate(args) -> int:
    data = io.parse_form_file(args.form) if args.form else None
    word = io.parse_word_file(args.word, data=data)
    _emit(io.matrix_to_text(word.evaluate()), args.out)
    return EXIT_OK


def cmd_symplectic(args) -> int:
    phi = io.parse_matrix_file(args.phi)
    ring = phi.ring
    phi_inv = io.parse_matrix_file(args.phi_inv, ring) if args.phi_inv else inverse_commutative(phi)
    v = parse_vector(ring, args.vector)
    pair = symplectic_pair(phi, phi_inv, v)
    doc = {
        "format_version": io.FORMAT_VERSION,
        "kind": "symplectic-pair",
        "ring": ring.descriptor,
        "lower": [[ring.format(x) for x in r] for r in pair.lower.rows],
        "upper": [[ring.format(x) for x in r] for r in pair.upper.rows],
    }
    status = EXIT_OK
    if args.verify:
        doc["lower_symplectic"] = is_symplectic(pair.lower, phi)
        doc["upper_symplectic"] = is_symplectic(pair.upper, phi)
        if not (doc["lower_symplectic"] and doc["upper_symplectic"]):
            status = EXIT_FAIL
    _emit(io.dumps_stable(doc), args.out)
    return status


def _print_summary(report) -> None:
    for r in report.results:
        cfg = " ".join(f"{k}={v}" for k, v in r.config.items())
        state = "PASS" if r.passed else "FAIL"
        extra = f" skipped={r.skipped}" if r.skipped else ""
        if r.observations:
            extra += " " + " ".join(f"{k}={v}" for k, v in sorted(r.observations.items()))
        print(f"{state} {r.name} [{cfg}] trials={r.trials} failures={r.failure_count}{extra}")
    total = sum(r.trials for r in report.results)
    print(f"{'PASS' if report.passed else 'FAIL'}: {len(report.results)} checks, {total} trials, "
          f"{report.failure_count} failures")


def cmd_verify(args) -> int:
    checks = list(CHECK_GROUPS) if args.checks == "all" else [c.strip() for c in args.checks.split(",")]
    config = CampaignConfig(
        rings=args.ring or list(SHIPPED_DESCRIPTORS),
        m_values=args.m,
        n_values=args.n,
        trials=args.trials,
        seed=args.seed,
        jobs=args.jobs if args.jobs is not None else default_jobs(),
        checks=checks,
        fault=args.inject_fault,
    )
    report = run_campaign(config)
    if args.out:
        io.write_report(args.out, report)
    if args.counterexamples:
        folder = Path(args.counterexamples)
        folder.mkdir(parents=True, exist_ok=True)
        k = 0
        for r in report.results:
            for rec in r.failures:
                io.write_json(folder / f"counterexample-{k:03d}.json", rec)
                k += 1
    if not args.quiet:
        _print_summary(report)
    return EXIT_OK if report.passed else EXIT_FAIL


def _records(doc) -> list[dict]:
    """Counterexample records from a single record file or a whole report."""
    if isinstance(doc, dict) and doc.get("kind") == "report":
        return [rec for check in doc["body"]["checks"] for rec in check["failures"]]
    return [doc]


def cmd_replay(args) -> int:
    records = _records(io.read_json(args.counterexample))
    if not records:
        print("no counterexamples to replay")
        return EXIT_OK
    reproduced = 0
    for rec in records:
        status, payload = replay(rec)
        where = f"{rec.get('check')} ring={rec.get('ring')} m={rec.get('m')} n={rec.get('n')} trial={rec.get('trial')}"
        if status == "fail":
            reproduced += 1
            print(f"REPRODUCED {where}: {payload['detail']}")
        else:
            print(f"NOT REPRODUCED {where}")
    # a reproduced failure is still a failing check
    return EXIT_FAIL if reproduced else EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ou-kit", description="Exact odd-unitary Vaserstein-type matrices.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("build-form", help="assemble Psi = psi_tilde(m) (+) phi and write a form file")
    s.add_argument("--ring", required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--phi", help="matrix file for phi (random invertible phi if omitted)")
    s.add_argument("--phi-inv", help="matrix file for phi^-1 (computed if omitted)")
    s.add_argument("--phi-seed", type=int, default=0, help="seed for the random phi")
    s.add_argument("--out")
    s.set_defaults(func=cmd_build_form)

    for name, fn in (("theta", theta), ("eta", eta)):
        s = sub.add_parser(name, help=f"write the matrix {name}(v)")
        s.add_argument("--form", required=True)
        s.add_argument("--vector", required=True, help="comma-separated literals; use --vector=-1,2 for a leading minus")
        s.add_argument("--out")
        s.set_defaults(func=_generator(fn))

    s = sub.add_parser("factorize", help="write theta(v) or eta(v) as an elementary word")
    s.add_argument("--kind", choices=("theta", "eta"), required=True)
    s.add_argument("--form", required=True)
    s.add_argument("--vector", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_factorize)

    s = sub.add_parser("preimage", help="print v with theta(v) = E_1i(a) (row) or eta(v) = E_i1(a) (column)")
    s.add_argument("--side", choices=(ROW, COLUMN), required=True)
    s.add_argument("--i", type=int, required=True)
    s.add_argument("--a", required=True)
    s.add_argument("--form", required=True)
    s.set_defaults(func=cmd_preimage)

    s = sub.add_parser("decompose", help="write E_ij(a) as a theta/eta word")
    s.add_argument("--i", type=int, required=True)
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--a", required=True)
    s.add_argument("--form", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("evaluate", help="multiply out a word file")
    s.add_argument("--word", required=True)
    s.add_argument("--form", help="form file, needed for theta/eta words")
    s.add_argument("--out")
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("symplectic", help="lower/upper matrices for an alternating phi")
    s.add_argument("--phi", required=True)
    s.add_argument("--phi-inv")
    s.add_argument("--vector", required=True)
    s.add_argument("--verify", action="store_true", help="check both matrices preserve phi")
    s.add_argument("--out")
    s.set_defaults(func=cmd_symplectic)

    s = sub.add_parser("verify", help="run a seeded randomized campaign")
    s.add_argument("--checks", default="all", help=f"comma list from {','.join(CHECK_GROUPS)} or 'all'")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--jobs", type=int, help="worker processes (default: $OU_KIT_JOBS or 1)")
    s.add_argument("--ring", action="append", help="ring descriptor; repeat for several (default: all shipped)")
    s.add_argument("--m", type=parse_range, default=[1, 2, 3])
    s.add_argument("--n", type=parse_range, default=[0, 1, 2, 3])
    s.add_argument("--out", help="write the JSON report here")
    s.add_argument("--counterexamples", help="directory for one JSON file per recorded failure")
    s.add_argument("--inject-fault", choices=FAULTS, help="negative control: break an input on purpose")
    s.add_argument("--quiet", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("replay", help="re-run counterexamples from a record or report file")
    s.add_argument("--counterexample", required=True)
    s.set_defaults(func=cmd_replay)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:  # every library error is a ValueError
        print(f"ou-kit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
