"""Command-line front end.

Every command reads one JSON document (``--in path`` or ``--in -``) and
prints a report.  Exit codes: 0 when the computation ran (whatever its
verdict), 1 for malformed input, 2 when an internal invariant broke.
Operator indices and axes are 1-based on the command line.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Callable

from . import lefschetz as hl
from . import serialize as ser
from .complexes import (fmhc_lmhc_validate, ic, koszul, limit_object_validate, omega_partial,
                        spectral_sequence)
from .exactlin.filtration import IncFiltration
from .filtration_ops import (iterated, jordan_type, monodromy_filtration, one_based, order_independence,
                             relative_monodromy, shriek, star, verify_relative_monodromy,
                             is_distributive, RelativeMonodromyMissing)
from .hodge import (NotPreAdmissible, default_seed, is_imhs, is_mhs, is_mixed_nilpotent_orbit,
                    is_nilpotent_orbit, limit_mhs)
from .monodromy import NilpotentFamily, validate_family
from .report import InternalInvariantError, Report, plain


class UsageError(ValueError):
    pass


# helpers ------------------------------------------------------------------------------------

def _dims_table(f: IncFiltration) -> list:
    if not f.jumps:
        return []
    lo, hi = f.bounds()
    return [[k, f[k].dim] for k in range(lo - 1, hi + 1)]


def _filtration_payload(f: IncFiltration) -> dict:
    return {"filtration": ser.dump_filtration(f), "dims": _dims_table(f), "graded": sorted(f.gr_dims().items())}


def _n_and_w(inp: dict):
    n = ser._int(ser._get(inp, "dim", "input"), "input.dim") if "dim" in inp else None
    N = ser.load_matrix(ser._get(inp, "N", "input"), n, n, "input.N")
    if not N.is_square():
        raise ser.ParseError("N must be square", "input.N")
    W = ser.load_filtration(inp.get("W", {"trivial": 0}), N.nrows, "input.W", "inc")
    return N, W


def _family(inp: dict) -> NilpotentFamily:
    fam = ser.load_family(ser._get(inp, "family", "input"), "input.family")
    if not isinstance(fam, NilpotentFamily):
        raise ser.ParseError("expected a nilpotent family", "input.family.kind")
    rep = validate_family(fam)
    if not rep.ok:
        raise UsageError(f"invalid family: {rep.failures()}")
    return fam


def _indices(opts: dict, m: int, key: str = "indices", default_all: bool = True) -> list[int]:
    raw = opts.get(key)
    if raw is None:
        return list(range(m)) if default_all else []
    if isinstance(raw, str):
        raw = [x for x in raw.replace(" ", "").split(",") if x]
    out = []
    for x in raw:
        try:
            i = int(x)
        except (TypeError, ValueError):
            raise UsageError(f"{key}: {x!r} is not an integer") from None
        if not 1 <= i <= m:
            raise UsageError(f"{key}: {i} is out of range 1..{m}")
        out.append(i - 1)
    if len(set(out)) != len(out):
        raise UsageError(f"{key}: repeated index")
    return out


def _complex_payload(cx) -> dict:
    return {"dims": list(cx.dims), "cohomology": cx.cohomology_dims(), "euler": cx.euler(),
            "complex": ser.dump_complex(cx)}


# command handlers -------------------------------------------------------------------------------

def cmd_mf_pure(inp, opts):
    N, _ = _n_and_w(inp)
    center = ser._int(inp.get("center", opts.get("center", 0)), "input.center")
    M = monodromy_filtration(N, center)
    ver = verify_relative_monodromy(M, N, IncFiltration.trivial(N.nrows, center))
    if not ver.ok:
        raise InternalInvariantError(f"closed-formula monodromy filtration fails verification: {ver.failures()}")
    rep = Report()
    rep.payload.update(_filtration_payload(M))
    rep.payload["center"] = center
    rep.payload["jordan_type"] = jordan_type(N)
    return rep


def cmd_mf_relative(inp, opts):
    N, W = _n_and_w(inp)
    res = relative_monodromy(N, W)
    rep = Report(status="exists" if res.exists else "not_exists")
    if res.exists:
        rep.payload.update(_filtration_payload(res.filtration))
    else:
        rep.fail("relative_exists", res.level)
        rep.status = "not_exists"
        rep.payload["level"] = res.level
    return rep


def _star_like(op):
    def run(inp, opts):
        N, W = _n_and_w(inp)
        try:
            f = op(N, W)
        except RelativeMonodromyMissing as e:
            rep = Report(status="not_exists")
            rep.findings.append({"axiom": "relative_exists", "passed": False, "location": e.level})
            rep.payload["level"] = e.level
            return rep
        rep = Report()
        rep.payload.update(_filtration_payload(f))
        return rep
    return run


def cmd_wj(inp, opts):
    fam = _family(inp)
    W = ser.load_filtration(inp.get("W", {"trivial": 0}), fam.dim, "input.W", "inc")
    J = _indices(opts, fam.m)
    mode = opts.get("mode", "star")
    if mode not in ("star", "shriek"):
        raise UsageError(f"unknown mode {mode!r}")
    order = _indices(opts, fam.m, "order") if opts.get("order") is not None else None
    if order is not None and sorted(order) != sorted(J):
        raise UsageError("order must be a permutation of the indices")
    try:
        f = iterated(fam, J, W, mode, order)
    except RelativeMonodromyMissing as e:
        rep = Report(status="not_exists")
        rep.findings.append({"axiom": "relative_exists", "passed": False, "location": e.level})
        return rep
    rep = Report()
    rep.payload.update(_filtration_payload(f))
    rep.payload["indices"] = one_based(J)
    rep.payload["mode"] = mode
    rep.merge(order_independence(fam, J, W, mode), "order.")
    return rep


def _cube(builder):
    def run(inp, opts):
        fam = _family(inp)
        rep = Report()
        if builder == "koszul":
            cx = koszul(fam.dim, fam)
        elif builder == "ic":
            cx = ic(fam.dim, fam)
        else:
            axes = _indices(opts, fam.m, "axes", default_all=False)
            cx = omega_partial(fam.dim, fam, axes)
            rep.payload["axes"] = one_based(axes)
        rep.payload.update(_complex_payload(cx))
        return rep
    return run


_FILTRATION_NAMES = {"wf": "Wf", "w": "W", "f": "F"}


def cmd_ss(inp, opts):
    fc = ser.load_filtered(ser._get(inp, "complex", "input"), "input.complex")
    name = opts.get("filtration", "wf")
    name = _FILTRATION_NAMES.get(str(name).lower(), name)
    if name not in fc.filtrations:
        raise UsageError(f"the complex has no filtration {name!r}")
    ss = spectral_sequence(fc, name)
    rep = Report()
    rep.payload.update(ss.to_json())
    rep.payload["filtration"] = name
    return rep


def cmd_hl_cohomology(inp, opts):
    x = ser.load_hl(inp, "input")
    if x.d is None:
        raise UsageError("the object has no differential")
    try:
        h, rep = hl.d_cohomology(x)
    except hl.DifferentialError as e:
        out = Report()
        out.fail("differential", None, reason=str(e))
        return out
    if h.S is not None:
        rep.merge(hl.validate_polarized_hl(h), "cohomology.")
    rep.payload["cohomology"] = ser.dump_hl(h)
    rep.payload["euler_by_line"] = sorted(hl.euler_by_line(h).items())
    return rep


def cmd_check_mhs(inp, opts):
    d = ser.load_hodge(inp, "input")
    return is_mhs(d.dim, d.W, d.F, d.Fbar, d.weight_offset)


def _seed(opts) -> int:
    s = opts.get("seed")
    return default_seed() if s is None else int(s)


def cmd_check_orbit(inp, opts):
    d = ser.load_hodge(inp, "input")
    samples = int(opts.get("samples", 8))
    polarized = not opts.get("unpolarized", False)
    ws = d.W.weights()
    if len(ws) == 1:
        return is_nilpotent_orbit(d, ws[0] + d.weight_offset, _seed(opts), samples, polarized)
    return is_mixed_nilpotent_orbit(d, _seed(opts), samples, polarized)


def cmd_check_imhs(inp, opts):
    d = ser.load_hodge(inp, "input")
    return is_imhs(d, _seed(opts), int(opts.get("samples", 8)), not opts.get("unpolarized", False))


def cmd_check_preadmissible(inp, opts):
    n = ser._int(ser._get(inp, "dim", "input"), "input.dim")
    W0 = ser.load_filtration(ser._get(inp, "W0", "input"), n, "input.W0", "inc")
    F0 = ser.load_filtration(ser._get(inp, "F0", "input"), n, "input.F0", "dec")
    N = ser.load_matrix(ser._get(inp, "N", "input"), n, n, "input.N")
    try:
        res = limit_mhs(n, W0, F0, N)
    except NotPreAdmissible as e:
        rep = Report()
        rep.fail("pre_admissible", None, reason=str(e))
        return rep
    rep = res.report
    rep.payload["limit"] = ser.dump_hodge(res.data)
    return rep


def cmd_check_hl(inp, opts):
    x = ser.load_hl(inp, "input")
    rep = Report()
    rep.merge(hl.validate_hl(x), "hl.")
    if x.S is not None:
        rep.merge(hl.validate_polarized_hl(x), "polarized.")
    if x.d is not None:
        rep.merge(hl.check_differential(x), "differential.")
    return rep


def _check_complex(mode):
    def run(inp, opts):
        fc = ser.load_filtered(ser._get(inp, "complex", "input"), "input.complex")
        return fmhc_lmhc_validate(fc, mode)
    return run


def cmd_check_limit_object(inp, opts):
    return limit_object_validate(*ser.load_limit_object(inp, "input"))


def cmd_check_distributive(inp, opts):
    fl = ser._get(inp, "filtrations", "input")
    if not isinstance(fl, list):
        raise ser.ParseError("expected a list of filtrations", "input.filtrations")
    n = inp.get("dim")
    fs = [ser.load_filtration(f, n, f"input.filtrations[{i}]") for i, f in enumerate(fl)]
    rep = is_distributive(fs)
    if rep.ok:
        rep.info("distributive", None, count=len(fs))
    return rep


COMMANDS: dict[tuple, Callable] = {
    ("mf", "pure"): cmd_mf_pure,
    ("mf", "relative"): cmd_mf_relative,
    ("star",): _star_like(star),
    ("shriek",): _star_like(shriek),
    ("wj",): cmd_wj,
    ("koszul",): _cube("koszul"),
    ("ic",): _cube("ic"),
    ("omega-z",): _cube("omega"),
    ("ss",): cmd_ss,
    ("hl", "cohomology"): cmd_hl_cohomology,
    ("check", "mhs"): cmd_check_mhs,
    ("check", "orbit"): cmd_check_orbit,
    ("check", "imhs"): cmd_check_imhs,
    ("check", "preadmissible"): cmd_check_preadmissible,
    ("check", "hl"): cmd_check_hl,
    ("check", "fmhc"): _check_complex("fmhc"),
    ("check", "lmhc"): _check_complex("lmhc"),
    ("check", "limit-object"): cmd_check_limit_object,
    ("check", "distributive"): cmd_check_distributive,
}


def run_job(command, options: dict, inp) -> tuple[Report | None, int, str | None]:
    """Run one command; returns ``(report, exit code, error message)``."""
    key = tuple(command)
    if key not in COMMANDS:
        return None, 1, f"unknown command {' '.join(command)!r}"
    try:
        rep = COMMANDS[key](inp, dict(options or {}))
    except InternalInvariantError as e:
        return None, 2, f"internal invariant violated: {e}"
    except (ser.ParseError, UsageError, ValueError, TypeError, KeyError) as e:
        return None, 1, str(e)
    return rep, 0, None


# batch ----------------------------------------------------------------------------------------

def run_batch(path: str, suite: str = "all") -> tuple[Report, int]:
    try:
        names = sorted(f for f in os.listdir(path) if f.endswith(".json"))
    except OSError as e:
        raise UsageError(f"cannot read directory {path!r}: {e}") from None
    rep = Report()
    files, counts = [], {}
    code = 0
    for name in names:
        entry = {"file": name}
        try:
            with open(os.path.join(path, name)) as fh:
                job = ser.parse_json_text(fh.read(), name)
            cmd = job["command"]
            if isinstance(cmd, str):
                cmd = cmd.split()
            if suite != "all" and job.get("suite", "all") != suite:
                continue
            r, c, err = run_job(cmd, job.get("options", {}), job.get("input"))
        except (OSError, ser.ParseError, KeyError, TypeError, AttributeError) as e:
            r, c, err = None, 1, f"unreadable job: {e}"
        entry["exit"] = c
        if r is None:
            entry["status"] = "error"
            entry["error"] = err
            rep.fail("job", name, exit=c, error=err)
            if c == 2:
                code = 2
        else:
            entry["status"] = r.status
            entry["failures"] = len(r.failures())
            expected = job.get("expect")
            if expected is not None:
                entry["expected"] = expected
                rep.check(expected == r.status, "expectation", name, expected=expected, got=r.status)
        counts[entry["status"]] = counts.get(entry["status"], 0) + 1
        files.append(entry)
    rep.payload["files"] = files
    rep.payload["counts"] = counts
    rep.payload["suite"] = suite
    return rep, code


# output -----------------------------------------------------------------------------------------

def render_text(rep: Report) -> str:
    lines = [f"status: {rep.status}"]
    fails = rep.failures()
    if fails:
        lines.append(f"failures ({len(fails)}):")
        w = max(len(f["axiom"]) for f in fails)
        for f in fails:
            loc = json.dumps(f.get("location"), sort_keys=True)
            det = json.dumps(f.get("detail", {}), sort_keys=True) if f.get("detail") else ""
            lines.append(f"  {f['axiom'].ljust(w)}  {loc}  {det}".rstrip())
    p = rep.payload
    if "pages" in p:
        for r, table in sorted(p["pages"].items(), key=lambda kv: int(kv[0])):
            lines.append(f"E_{r}:")
            for e in table:
                lines.append(f"  p={e[0]:>3}  q={e[1]:>3}  dim={e[2]}")
    if "dims" in p and "pages" not in p:
        lines.append("dims: " + json.dumps(p["dims"]))
    for k in sorted(p):
        if k in ("pages", "dims", "filtration", "complex", "cohomology", "limit", "files"):
            continue
        lines.append(f"{k}: {json.dumps(plain(p[k]), sort_keys=True)}")
    if "cohomology" in p and isinstance(p["cohomology"], list):
        lines.append("cohomology: " + json.dumps(p["cohomology"]))
    if "files" in p:
        w = max((len(f["file"]) for f in p["files"]), default=4)
        for f in p["files"]:
            lines.append(f"  {f['file'].ljust(w)}  {f['status']:<10}  exit={f['exit']}")
    return "\n".join(lines) + "\n"


def emit(rep: Report, fmt: str, out: str | None) -> None:
    text = rep.dumps() + "\n" if fmt == "json" else render_text(rep)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# argument parsing -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="inp", default="-", help="input JSON file, or - for standard input")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", default=None, help="write the report here instead of standard output")
    common.add_argument("--seed", type=int, default=None, help="seed for sampled checks (default: $MHSLIN_SEED or 0)")
    common.add_argument("--samples", type=int, default=8)

    p = argparse.ArgumentParser(prog="mhslin", description="Exact linear algebra of degenerating mixed Hodge structures.")
    sub = p.add_subparsers(dest="command", required=True)

    mf = sub.add_parser("mf", help="monodromy filtrations")
    mfs = mf.add_subparsers(dest="sub", required=True)
    pure = mfs.add_parser("pure", parents=[common])
    pure.add_argument("--center", type=int, default=None)
    mfs.add_parser("relative", parents=[common])
    sub.add_parser("star", parents=[common])
    sub.add_parser("shriek", parents=[common])
    wj = sub.add_parser("wj", parents=[common])
    wj.add_argument("--indices", default=None, help="comma separated, 1-based")
    wj.add_argument("--mode", choices=("star", "shriek"), default="star")
    wj.add_argument("--order", default=None, help="application order, outermost first")
    sub.add_parser("koszul", parents=[common])
    sub.add_parser("ic", parents=[common])
    oz = sub.add_parser("omega-z", parents=[common])
    oz.add_argument("--axes", default="", help="comma separated, 1-based")
    ss = sub.add_parser("ss", parents=[common])
    ss.add_argument("--filtration", default="wf")
    h = sub.add_parser("hl")
    hs = h.add_subparsers(dest="sub", required=True)
    hs.add_parser("cohomology", parents=[common])
    ch = sub.add_parser("check")
    chs = ch.add_subparsers(dest="sub", required=True)
    for name in ("mhs", "orbit", "imhs", "preadmissible", "hl", "fmhc", "lmhc", "limit-object", "distributive"):
        c = chs.add_parser(name, parents=[common])
        if name in ("orbit", "imhs"):
            c.add_argument("--unpolarized", action="store_true")
    b = sub.add_parser("batch")
    b.add_argument("dir")
    b.add_argument("--suite", default="all")
    b.add_argument("--format", choices=("json", "text"), default="json")
    b.add_argument("--out", default=None)
    return p


def _options(args) -> dict:
    opts = {}
    for key in ("center", "indices", "mode", "order", "axes", "filtration", "seed", "samples", "unpolarized"):
        v = getattr(args, key, None)
        if v is not None and v is not False:
            opts[key] = v
    if "axes" in opts and opts["axes"] == "":
        opts["axes"] = []
    return opts


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "batch":
        try:
            rep, code = run_batch(args.dir, args.suite)
        except UsageError as e:
            print(f"error: {e}", file=sys.stderr)
            return 1
        emit(rep, args.format, args.out)
        return code
    command = [args.command] + ([args.sub] if getattr(args, "sub", None) else [])
    try:
        text = sys.stdin.read() if args.inp == "-" else open(args.inp).read()
    except OSError as e:
        print(f"error: cannot read {args.inp}: {e}", file=sys.stderr)
        return 1
    try:
        doc = ser.parse_json_text(text, args.inp)
    except ser.ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    # a self-describing job file carries its own input and options
    opts = _options(args)
    if isinstance(doc, dict) and "input" in doc and "command" in doc:
        opts = {**doc.get("options", {}), **opts}
        doc = doc["input"]
    rep, code, err = run_job(command, opts, doc)
    if rep is None:
        print(f"error: {err}", file=sys.stderr)
        return code
    emit(rep, args.format, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
