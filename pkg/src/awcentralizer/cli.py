"""Command-line front end: run verification suites and write a report document."""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import __version__
from .errors import NotClosedAtTruncation, PoleAtSample, ResourceLimit, Unsupported
from .report import FAIL, UNSUPPORTED, VerificationReport

SUITES = (
    "aw-homomorphism",
    "centralizer-dims",
    "minimal-polys",
    "quotient-dims",
    "classify",
    "isomorphisms",
    "permutation-invariance",
    "q1-limit",
)

H = Fraction(1, 2)
SMALL_SPINS = (Fraction(0), H, Fraction(1), Fraction(3, 2))
# every multiset of three spins from SMALL_SPINS, stored in descending order
SMALL_TRIPLES = tuple(
    tuple(sorted(c, reverse=True)) for c in itertools.combinations_with_replacement(SMALL_SPINS, 3)
)
CENTRALIZER_TRIPLES = (
    (H, H, H),
    (Fraction(1),) * 3,
    (Fraction(3, 2),) * 3,
    (Fraction(1), H, H),
    (Fraction(3, 2), H, H),
    (Fraction(2), H, H),
)
DEFAULT_SPINS = {
    "aw-homomorphism": SMALL_TRIPLES + ((Fraction(2), H, H),),
    "centralizer-dims": CENTRALIZER_TRIPLES,
    "minimal-polys": CENTRALIZER_TRIPLES,
    "quotient-dims": CENTRALIZER_TRIPLES,
    "classify": SMALL_TRIPLES,
    "isomorphisms": CENTRALIZER_TRIPLES,
    "permutation-invariance": ((Fraction(1), H, H), (H, Fraction(1), H), (H, H, Fraction(1))),
    "q1-limit": ((H, H, H), (Fraction(1), H, H)),
}
R_CONTRACT_TRIPLES = ((H, H, H), (Fraction(1), H, H))


@dataclass
class Options:
    spins: list[tuple] | None = None
    mode: str | None = None
    samples: int = 5
    seed: int = 0xA3
    max_word_len: int | None = None
    kmax: int | None = None
    jobs: int = 1
    timings: bool = False

    def config(self) -> dict:
        return {
            "spins": None if self.spins is None else [[str(j) for j in t] for t in self.spins],
            "mode": self.mode or "auto",
            "samples": self.samples,
            "seed": self.seed,
            "max_word_len": self.max_word_len,
            "kmax": self.kmax,
        }


@dataclass(frozen=True)
class Task:
    """A picklable unit of work: a dotted function name and its arguments."""

    target: str
    args: tuple = ()
    kwargs: tuple = ()
    label: str = ""
    spins: tuple | None = None


def _resolve(target: str) -> Callable:
    module, _, name = target.rpartition(".")
    mod = __import__(f"awcentralizer.{module}", fromlist=[name])
    return getattr(mod, name)


def run_task(task: Task) -> VerificationReport:
    """Run one check; resource caps and unsupported cases become reports, not crashes."""
    try:
        return _resolve(task.target)(*task.args, **dict(task.kwargs))
    except (ResourceLimit, Unsupported, PoleAtSample) as exc:
        return VerificationReport(task.label, task.spins, status=UNSUPPORTED, details={"reason": str(exc)})
    except NotClosedAtTruncation as exc:
        rep = VerificationReport(task.label, task.spins)
        return rep.fail(exc.witness or str(exc), reason=str(exc))


def _points_kwargs(opts: Options) -> tuple:
    if opts.samples == 5 and opts.seed == 0xA3:
        return ()
    from .centralizer import sample_points

    return (("points", tuple(sample_points(opts.seed, opts.samples))),)


def _spins(opts: Options, suite: str) -> list[tuple]:
    return list(opts.spins) if opts.spins is not None else list(DEFAULT_SPINS[suite])


def _is_one_boundary(t: tuple) -> bool:
    return t[1] == t[2] == H and t[0] >= 1


def suite_tasks(name: str, opts: Options) -> list[Task]:
    if name == "all":
        return [t for s in SUITES for t in suite_tasks(s, opts)]
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    spins = _spins(opts, name)
    pts = _points_kwargs(opts)
    tasks: list[Task] = []
    if name == "aw-homomorphism":
        mode = () if opts.mode is None else (("mode", opts.mode),)
        for t in spins:
            tasks.append(Task("centralizer.verify_aw_image", (t,), mode + pts, "aw-homomorphism", t))
        r_spins = R_CONTRACT_TRIPLES if opts.spins is None else [t for t in spins if 0 not in t]
        for t in r_spins:
            tasks.append(Task("quantum_rep.verify_r_contract", t, (), "r-matrix", t))
    elif name == "centralizer-dims":
        mode = () if opts.mode is None else (("mode", opts.mode),)
        for t in spins:
            tasks.append(Task("centralizer.check_centralizer_dim", (t,), pts, "centralizer-dim", t))
            tasks.append(Task("centralizer.verify_surjectivity", (t,), mode + pts, "surjectivity", t))
    elif name == "minimal-polys":
        for t in spins:
            tasks.append(Task("centralizer.verify_minimal_polys", (t,), (), "minimal-polys", t))
    elif name == "quotient-dims":
        from .word_quotient import QUOTIENT_CASES

        lk = (("L", opts.max_word_len), ("kmax", opts.kmax))
        wanted = {tuple(Fraction(j) for j in t) for t in spins}
        covered = set()
        for t, k, cand in QUOTIENT_CASES:
            key = tuple(Fraction(j) for j in t)
            if key in wanted:
                covered.add(key)
                tasks.append(Task("word_quotient.verify_quotient_dimension", (key, k, cand), lk, "quotient-dim", key))
        for t in spins:
            if tuple(Fraction(j) for j in t) not in covered:
                tasks.append(Task("word_quotient.verify_quotient_dimension", (t,), lk, "quotient-dim", t))
    elif name == "classify":
        for s in sorted({t[0] for t in spins if t[0] == t[1] == t[2] and t[0] > 0}):
            tasks.append(Task("representations.verify_classification", (s,), (), "classify", (s, s, s)))
        for t in spins:
            tasks.append(Task("representations.verify_tridiagonal_modules", (t,), (), "tridiagonal-modules", t))
        if opts.spins is None:
            tasks.append(Task("representations.solution_count_report", (), (), "classify-raw-count"))
    elif name == "isomorphisms":
        keys = {tuple(Fraction(j) for j in t) for t in spins}
        if (H, H, H) in keys:
            tasks.append(Task("diagram_iso.verify_tl_presentation", (), (), "presentation-tl", (H, H, H)))
            tasks.append(Task("diagram_iso.verify_tl_iso", (), (), "iso-tl", (H, H, H)))
        if (Fraction(1),) * 3 in keys:
            tasks.append(Task("diagram_iso.verify_bmw_iso", (), (), "iso-bmw", (Fraction(1),) * 3))
        for t in sorted(k for k in keys if _is_one_boundary(k)):
            tasks.append(Task("diagram_iso.verify_1btl_presentation", (t[0],), (), "presentation-1btl", t))
            tasks.append(Task("diagram_iso.verify_1btl_iso", (t[0],), (), "iso-1btl", t))
    elif name == "permutation-invariance":
        for t in spins:
            tasks.append(Task("aw_symbolic.permutation_check", (t,), (), "permutation-invariance", t))
    elif name == "q1-limit":
        for t in spins:
            tasks.append(Task("quantum_rep.verify_classical_limit", t, (), "q1-limit", t))
    return tasks


def _order_key(rep: VerificationReport):
    spins = () if rep.spins is None else tuple(Fraction(j) for j in rep.spins)
    k = Fraction(-1) if rep.k_or_ell is None else Fraction(rep.k_or_ell)
    return (rep.check_id, spins, k)


def run_suite(name: str, options: Options | None = None) -> list[VerificationReport]:
    """Run every check of a suite; the result is sorted by check_id, then spins."""
    opts = options or Options()
    tasks = suite_tasks(name, opts)
    if opts.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=opts.jobs) as pool:
            reports = list(pool.map(run_task, tasks))
    else:
        reports = [run_task(t) for t in tasks]
    return sorted(reports, key=_order_key)


def report_document(reports: list[VerificationReport], opts: Options) -> dict:
    out = []
    for r in reports:
        d = r.to_dict()
        if not opts.timings:
            d["wall_time_ms"] = 0
        out.append(d)
    return {"version": __version__, "config": opts.config(), "reports": out}


def render_text(doc: dict) -> str:
    lines = [f"aw-verify {doc['version']}"]
    for r in doc["reports"]:
        spins = "" if r["spins"] is None else "(" + ",".join(r["spins"]) + ")"
        k = "" if r["k_or_ell"] is None else f" k={r['k_or_ell']}"
        line = f"{r['status']:<11} {r['check_id']} {spins}{k}"
        if r["status"] == FAIL:
            line += f"  witness={json.dumps(r['details'].get('witness'))}"
        lines.append(line)
    counts = {}
    for r in doc["reports"]:
        counts[r["status"]] = counts.get(r["status"], 0) + 1
    lines.append("summary: " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def parse_spins(text: str) -> list[tuple]:
    """'1/2,1/2,1/2;1,1,1' -> list of spin triples."""
    triples = []
    for chunk in text.split(";"):
        parts = [p.strip() for p in chunk.split(",") if p.strip()]
        if len(parts) != 3:
            raise ValueError(f"expected three spins in {chunk!r}")
        t = tuple(Fraction(p) for p in parts)
        if any(j < 0 or (2 * j).denominator != 1 for j in t):
            raise ValueError(f"spins must be nonnegative integers or half-integers: {chunk!r}")
        triples.append(t)
    return triples


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="aw-verify", description=__doc__)
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--spins", action="append", help="triples like '1,1/2,1/2'; separate several with ';' or repeat the flag")
    p.add_argument("--mode", choices=("exact", "sampled"))
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--seed", type=lambda s: int(s, 0), default=0xA3)
    p.add_argument("--max-word-len", type=int)
    p.add_argument("--kmax", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="write the report document to this file")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--timings", action="store_true", help="record wall times (makes output run-dependent)")
    return p


def options_from_args(args: argparse.Namespace) -> Options:
    spins = None
    if args.spins:
        spins = [t for item in args.spins for t in parse_spins(item)]
    if args.samples < 1:
        raise ValueError("--samples must be positive")
    jobs = int(os.environ.get("AW_VERIFY_JOBS", args.jobs))
    if jobs < 1:
        raise ValueError("--jobs must be positive")
    return Options(spins, args.mode, args.samples, args.seed, args.max_word_len, args.kmax, jobs, args.timings)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = options_from_args(args)
    except ValueError as exc:
        print(f"aw-verify: configuration error: {exc}", file=sys.stderr)
        return 2
    reports = run_suite(args.suite, opts)
    doc = report_document(reports, opts)
    text = json.dumps(doc, indent=2, sort_keys=False) + "\n" if args.format == "json" else render_text(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if any(r.failed for r in reports) else 0


if __name__ == "__main__":
    sys.exit(main())
