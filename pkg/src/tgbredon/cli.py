"""Command line entry point.

Exit codes: 0 pass, 1 validation failure, 2 parse or IO error, 3 invariant breach.
Set TGBREDON_LOG to a logging level name for diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from . import formats
from .bredon import CONTRAVARIANT, COVARIANT, bredon_chain_complex, bredon_cochain_complex
from .errors import InvariantBreach, ValidationError, Violation
from .fixtures import EXAMPLES, dump_json, write_example
from .groupoid import _require_transitive, isotropy
from .orbitcat import build_orbit_category, verify_orbitcat_iso
from .verify import PROPS, Limits, _jsonable, run_prop

log = logging.getLogger("tgbredon")

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_BREACH = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _groups_json(groups):
    return [g.to_json() for g in groups]


def cmd_validate(args) -> tuple[dict, int]:
    doc = formats.read_json(args.file)
    try:
        obj = formats.build(doc)
    except ValidationError as exc:
        return {"command": "validate", "file": str(args.file), "kind": doc.get("kind"), "valid": False,
                "violations": [v.to_json() for v in exc.violations]}, EXIT_INVALID
    return {"command": "validate", "file": str(args.file), "kind": doc["kind"], "valid": True,
            "summary": formats.summary(obj)}, EXIT_OK


def cmd_bredon(args) -> tuple[dict, int]:
    X = formats.load(args.complex, "gcw")
    M = formats.load_coefficients_for(args.coeffs, X)
    want = CONTRAVARIANT if args.mode == "cohomology" else COVARIANT
    if M.variance != want:
        raise ValidationError("coefficients", [
            Violation("variance", f"{args.mode} needs a {want} system, got {M.variance}", M.variance)])
    cx = bredon_cochain_complex(X, M) if want == CONTRAVARIANT else bredon_chain_complex(X, M)
    groups = cx.homology()
    label = "cochain" if want == CONTRAVARIANT else "chain"
    report = {
        "command": "bredon",
        "mode": args.mode,
        f"{label}_groups": _groups_json(cx.groups),
        f"{label}_ranks": cx.ranks(),
        "groups": _groups_json(groups),
    }
    if want == CONTRAVARIANT:
        report["delta_surjective"] = [cx.is_surjective(n) for n in range(len(cx.maps))]
    return report, EXIT_OK


def cmd_orbitcat(args) -> tuple[dict, int]:
    G = formats.load(args.file, "groupoid")
    _require_transitive(G)
    if args.base not in G.objects:
        raise ValidationError("orbitcat", [Violation("unknown_object", f"no object {args.base!r}; "
                                                            f"objects are {list(G.objects)}", args.base)])
    K = isotropy(G, args.base).group
    OC = build_orbit_category(K)
    report = {"command": "orbitcat", "base": args.base, "isotropy": list(K.names)}
    report.update(OC.to_json())
    code = EXIT_OK
    if args.verify:
        cert = verify_orbitcat_iso(G, args.base)
        report["verify"] = cert.to_json()
        if not cert:
            code = EXIT_BREACH
    return report, code


def cmd_verify(args) -> tuple[dict, int]:
    limits = Limits(args.max_objects, args.max_group, args.max_points)
    rep = run_prop(args.prop, args.seed, args.trials, limits)
    return rep.to_json(), EXIT_OK if rep.ok else EXIT_BREACH


def cmd_example(args) -> tuple[dict, int]:
    if args.name not in EXAMPLES:
        raise UsageError(f"unknown example {args.name!r}; available: {', '.join(sorted(EXAMPLES))}")
    if args.out is None:
        raise UsageError("example needs --out DIR")
    paths = write_example(args.name, Path(args.out))
    return {"command": "example", "name": args.name, "files": [p.name for p in paths]}, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tgbredon", description="Bredon (co)homology for finite transitive groupoids")
    p.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="validate a groupoid, space, complex, coefficient or bundle file")
    v.add_argument("file")
    v.set_defaults(run=cmd_validate)

    b = sub.add_parser("bredon", help="Bredon homology or cohomology of a complex")
    b.add_argument("--complex", required=True)
    b.add_argument("--coeffs", required=True)
    b.add_argument("--mode", required=True, choices=["homology", "cohomology"])
    b.add_argument("--out")
    b.set_defaults(run=cmd_bredon)

    o = sub.add_parser("orbitcat", help="orbit category at a base object")
    o.add_argument("file")
    o.add_argument("--base", required=True)
    o.add_argument("--verify", action="store_true")
    o.add_argument("--out")
    o.set_defaults(run=cmd_orbitcat)

    r = sub.add_parser("verify", help="randomized check of a structural property")
    r.add_argument("--prop", required=True, choices=list(PROPS))
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--trials", type=int, default=100)
    r.add_argument("--max-objects", type=int, default=4)
    r.add_argument("--max-group", type=int, default=8)
    r.add_argument("--max-points", type=int, default=20)
    r.add_argument("--out")
    r.set_defaults(run=cmd_verify)

    e = sub.add_parser("example", help="write a bundled example set")
    e.add_argument("name")
    e.add_argument("--out")
    e.set_defaults(run=cmd_example)
    return p


def _emit(report: dict, out) -> None:
    text = dump_json(report)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    level = os.environ.get("TGBREDON_LOG")
    if level:
        logging.basicConfig(level=level.upper(), stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    out = getattr(args, "out", None) if args.command != "example" else None
    try:
        report, code = args.run(args)
    except formats.ParseError as exc:
        report, code = {"command": args.command, "error": "parse", **exc.to_json()}, EXIT_PARSE
    except UsageError as exc:
        report, code = {"command": args.command, "error": "usage", "message": str(exc)}, EXIT_PARSE
    except ValidationError as exc:
        report, code = {"command": args.command, "error": "validation",
                        "violations": [v.to_json() for v in exc.violations]}, EXIT_INVALID
    except InvariantBreach as exc:
        log.error("invariant breach: %s", exc)
        report, code = {"command": args.command, "error": "invariant", "message": str(exc),
                        "witness": _jsonable(exc.witness)}, EXIT_BREACH
    if args.timing:
        report["seconds"] = round(time.perf_counter() - start, 4)
    log.info("%s finished with exit code %d", args.command, code)
    _emit(report, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
