"""``voa-deq`` command line: models, derive, verify, fusion, solve."""

from __future__ import annotations

import argparse
import json
import logging
import multiprocessing
import os
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__, errors
from .deq.derive import Deriver
from .deq.system import LOCI, ODESystem, canonical_locus
from .io import read_json, write_json
from .models.registry import (FAMILIES, ModelSpec, build_models, check_module_json, module_to_json,
                              parse_spec, spec_from_json)
from .tensor.space import TensorSetup
from .voa.module import ModuleData, contragredient

log = logging.getLogger("voa_deq")

MAX_P = 3
EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


# -- shared helpers ---------------------------------------------------------------

def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _point(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected a point 'q1,q2', got {text!r}")
    return tuple(_rational(p) for p in parts)


def jobs_from(args) -> int:
    if args.jobs is not None:
        n = args.jobs
    else:
        env = os.environ.get("VOA_DEQ_JOBS", "1")
        try:
            n = int(env)
        except ValueError as exc:
            raise errors.InputError(f"VOA_DEQ_JOBS must be an integer, got {env!r}") from exc
    if n < 1:
        raise errors.InputError("the job count must be at least 1")
    return n


def load_spec(item: str) -> tuple:
    """A module file (``.json``) or an inline spec; returns ``(spec, stored json or None)``."""
    path = Path(item)
    if item.endswith(".json") or path.is_file():
        try:
            doc = read_json(path)
        except FileNotFoundError as exc:
            raise errors.InputError(f"module file {item} not found") from exc
        return spec_from_json(doc), doc
    return parse_spec(item), None


def build_slot_modules(items: Sequence[str], level) -> List[ModuleData]:
    """Modules over one VOA; specs without a cutoff are stored for ``level``."""
    loaded = [load_spec(s) for s in items]
    specs = [s if s.cutoff is not None else s.at_level(level) for s, _ in loaded]
    mods = build_models(specs)
    for (_, doc), m in zip(loaded, mods):
        if doc is not None:
            check_module_json(doc, m)
    return mods


def _write(obj: dict, path: Optional[str]) -> None:
    if path:
        write_json(path, obj)
        log.info("wrote %s", path)


def _emit_text(text: str, quiet: bool) -> None:
    if not quiet:
        sys.stdout.write(text)


# -- models -------------------------------------------------------------------------

def cmd_models(args) -> int:
    if args.action == "list":
        for fam in FAMILIES:
            print(fam)
        return EXIT_OK
    family = args.family
    if family == "virasoro":
        family = "virasoro-minimal" if args.simple else "virasoro-verma"
    elif args.simple and family != "virasoro-minimal":
        raise errors.InputError("--simple applies only to the virasoro family")
    params = {}
    if family == "fock":
        if args.lam is None:
            raise errors.InputError("fock needs --lambda")
        params["lambda"] = args.lam
    elif family.startswith("virasoro"):
        if args.c is None or args.h is None:
            raise errors.InputError(f"{family} needs --c and --h")
        params.update(c=args.c, h=args.h)
    spec = ModelSpec(family, params, args.cutoff)
    m = build_models([spec])[0]
    doc = module_to_json(m)
    if args.output:
        _write(doc, args.output)
    else:
        json.dump(doc, sys.stdout, indent=1)
        sys.stdout.write("\n")
    if args.output and not args.quiet:
        print(f"{doc['name']}: lowest weight {m.min_weight}, cutoff {m.cutoff}, dimension {m.dim}")
    return EXIT_OK


# -- derive ---------------------------------------------------------------------------

_WORKER: dict = {}


def _derive_one(slot: int):
    d = _WORKER
    if d["locus"] is None:
        return slot, d["deriver"].derive(slot, d["quad"])
    return slot, d["deriver"].derive_regular(slot, d["quad"], d["locus"])


def derive_parallel(deriver: Deriver, quad, slots: Sequence[int], locus: Optional[str], jobs: int) -> ODESystem:
    """``derive_system`` with the slots spread over forked workers."""
    if jobs <= 1 or len(slots) <= 1 or "fork" not in multiprocessing.get_all_start_methods():
        return deriver.derive_system(quad, slots, locus)
    deriver.kernel()
    _WORKER.update(deriver=deriver, quad=tuple(quad), locus=locus)
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(min(jobs, len(slots))) as pool:
        results = dict(pool.map(_derive_one, slots))
    system = deriver.derive_system(quad, [], locus)
    for s in slots:
        system.parts[s], system.witnesses[s] = results[s]
    return system


def parse_vectors(text: Optional[str], mods: Sequence[ModuleData]) -> tuple:
    if text is None:
        return tuple(0 for _ in mods)
    try:
        quad = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise errors.InputError(f"--vectors takes comma-separated basis indices, got {text!r}") from exc
    if len(quad) != len(mods):
        raise errors.InputError(f"--vectors needs {len(mods)} indices, got {len(quad)}")
    for k, (i, m) in enumerate(zip(quad, mods)):
        if not 0 <= i < m.dim:
            raise errors.InputError(f"vector index {i} out of range for slot {k} ({m.name}, dimension {m.dim})")
    return quad


def cmd_derive(args) -> int:
    p = len(args.modules) - 2
    if p < 2:
        raise errors.InputError("derive needs at least four modules: target, p insertions, origin")
    if args.p is not None and args.p != p:
        raise errors.InputError(f"--p {args.p} does not match {len(args.modules)} modules (p = {p})")
    if p > MAX_P:
        raise errors.ResourceCapError(f"p = {p} exceeds the supported maximum of {MAX_P}")
    mods = build_slot_modules(args.modules, args.cutoff)
    quad = parse_vectors(args.vectors, mods)
    slot_mods = [contragredient(mods[0])] + mods[1:]
    t0 = time.time()
    setup = TensorSetup(slot_mods, args.cutoff)
    log.info("tensor space ready: %d complement tuples, M = %s", len(setup.complement_quads()), setup.cutoff)
    locus = None if args.locus is None else canonical_locus(args.locus)
    slots = args.slot or list(range(1, p + 1))
    for s in slots:
        if not 1 <= s <= p:
            raise errors.InputError(f"--slot {s} is not between 1 and {p}")
    system = derive_parallel(Deriver(setup), quad, slots, locus, jobs_from(args))
    log.info("derived %d equation(s) in %.1fs", len(system.parts), time.time() - t0)
    _write(system.to_json(), args.output)
    text = system.text()
    if args.text:
        Path(args.text).write_text(text)
    _emit_text(text, args.quiet)
    return EXIT_OK


# -- verify ---------------------------------------------------------------------------

def load_system(path: str) -> ODESystem:
    try:
        return ODESystem.from_json(read_json(path))
    except FileNotFoundError as exc:
        raise errors.InputError(f"equation file {path} not found") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise errors.InputError(f"{path} is not a valid equation file: {exc}") from exc


def cmd_verify(args) -> int:
    from .verify import verify_system
    system = load_system(args.ode)
    rep = verify_system(system, args.oracle, args.order)
    _write(rep.to_json(), args.output)
    _emit_text(rep.text(), args.quiet)
    return EXIT_OK if rep.passed else EXIT_VERIFY


# -- fusion ---------------------------------------------------------------------------

def cmd_fusion(args) -> int:
    from .fusion import fusion_bound
    w1, w2, w3 = build_slot_modules([args.w1, args.w2, args.w3], args.cutoff)
    res = fusion_bound(w1, w2, w3, args.point, args.cutoff, args.points, args.seed)
    _write(res.to_json(), args.output)
    _emit_text(res.text(), args.quiet)
    return EXIT_OK


# -- solve ----------------------------------------------------------------------------

def solve_oracle(system: ODESystem, locus: str, order: int):
    """Closed-form correlator series for the system's models, or ``None``."""
    from .models.oracles import fock_local_series, ising_correlator_series
    from .verify import _lams, detect_oracle
    try:
        kind = detect_oracle(system)
    except errors.InputError:
        return None
    if kind == "fock":
        vectors = [tuple(v) for v in system.provenance["vectors"]]
        return [fock_local_series(_lams(system), vectors, locus, order)]
    if kind == "ising" and locus in ("z3=0", "z1=z2"):
        return ising_correlator_series(order)
    return None


def cmd_solve(args) -> int:
    from .frobenius.report import extension_report
    system = load_system(args.ode)
    locus = canonical_locus(args.locus)
    if locus == "z1=z2":
        locus = "z3=0"
    oracle = None
    if args.oracle == "auto":
        oracle = solve_oracle(system, locus, args.order + 8)
        if oracle is None:
            log.info("no closed-form oracle for this system")
    try:
        rep = extension_report(system, args.order, oracle, args.eval or (), locus)
    except ValueError as exc:
        raise errors.InputError(str(exc)) from exc
    out = Path(args.output) if args.output else Path(args.ode).with_name(Path(args.ode).stem + ".report.json")
    write_json(out, rep.to_json())
    base = str(out)[: -len(out.suffix)] if out.suffix else str(out)
    csv_path, png_path = Path(base + ".csv"), Path(base + ".png")
    rep.write_csv(csv_path)
    rep.plot(png_path)
    log.info("wrote %s, %s, %s", out, csv_path, png_path)
    _emit_text(rep.text(), args.quiet)
    if rep.oracle is not None and not rep.oracle.matched:
        return EXIT_VERIFY
    return EXIT_OK


# -- entry point ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="voa-deq", description=__doc__)
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="count", default=0, help="more logging (repeatable)")
    ap.add_argument("-q", "--quiet", action="store_true", help="no text output on stdout")
    ap.add_argument("--jobs", type=int, default=None, help="worker processes (default: $VOA_DEQ_JOBS or 1)")
    sub = ap.add_subparsers(dest="command", required=True)

    m = sub.add_parser("models", help="list model families or build a module file")
    msub = m.add_subparsers(dest="action", required=True)
    msub.add_parser("list", help="print the family tags")
    b = msub.add_parser("build", help="build a truncated module and write its JSON")
    b.add_argument("family", choices=list(FAMILIES) + ["virasoro"])
    b.add_argument("--lambda", dest="lam", type=_rational)
    b.add_argument("--c", type=_rational)
    b.add_argument("--h", type=_rational)
    b.add_argument("--simple", action="store_true", help="irreducible quotient (virasoro)")
    b.add_argument("--cutoff", type=_rational, required=True, help="largest stored weight")
    b.add_argument("-o", "--output")
    m.set_defaults(func=cmd_models)

    d = sub.add_parser("derive", help="derive the differential equations of a correlator")
    d.add_argument("--modules", nargs="+", required=True,
                   help="target, modules at z1..zp, module at 0 (files or specs such as fock:lambda=1)")
    d.add_argument("--vectors", help="comma-separated basis indices per slot (default: lowest vectors)")
    d.add_argument("--slot", type=int, action="append", help="variable index (repeatable; default all)")
    d.add_argument("--locus", help=f"require regular form at a locus ({', '.join(LOCI)})")
    d.add_argument("--cutoff", type=_rational, default=Fraction(4), help="tuple level cutoff (default 4)")
    d.add_argument("--p", type=int, help="number of insertion points (checked against --modules)")
    d.add_argument("-o", "--output", help="equation JSON file")
    d.add_argument("--text", help="also write the text form to this file")
    d.set_defaults(func=cmd_derive)

    v = sub.add_parser("verify", help="check an equation file against a closed-form correlator")
    v.add_argument("ode")
    v.add_argument("--oracle", default="auto", choices=["auto", "fock", "ising", "vacuum"])
    v.add_argument("--order", type=int, default=8)
    v.add_argument("-o", "--output", help="report JSON file")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("fusion", help="upper bound on a fusion rule")
    f.add_argument("w1")
    f.add_argument("w2")
    f.add_argument("w3")
    f.add_argument("--point", type=_point, default=(Fraction(2), Fraction(1)))
    f.add_argument("--cutoff", type=_rational, default=Fraction(4))
    f.add_argument("--points", type=int, default=5, help="extra random points for the stability check")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("-o", "--output")
    f.set_defaults(func=cmd_fusion)

    s = sub.add_parser("solve", help="Frobenius basis and extension report; writes JSON, CSV and PNG")
    s.add_argument("ode")
    s.add_argument("--locus", default="z3=0")
    s.add_argument("--order", type=int, default=12)
    s.add_argument("--eval", type=_rational, action="append", help="evaluate the basis at z3 (repeatable)")
    s.add_argument("--oracle", default="auto", choices=["auto", "none"])
    s.add_argument("-o", "--output", help="report JSON path; CSV and PNG use the same stem")
    s.set_defaults(func=cmd_solve)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except errors.VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except errors.DerivationError as exc:
        print(f"derivation failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (errors.InputError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except errors.ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
