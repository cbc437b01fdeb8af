"""Command-line front end.

Three subcommands: ``check`` runs the algebraic verdicts on a family,
``glue`` reports colimit and embedding facts for a finite gluing, and
``repair`` re-presents a family so the cocycle condition holds and emits
the result as a new document.

Exit codes: 0 all requested verdicts pass, 1 some verdict failed,
2 invalid input, 3 a hypothesis or precondition kept a check from running.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path
from typing import Mapping, Sequence

from gluecheck.algebra import FamilyValidationError
from gluecheck.exactlin import Subspace
from gluecheck.finset import (
    FAMILY_FIXTURES,
    GLUING_FIXTURES,
    check_embedding,
    duality_check,
    dualize,
    fixture_gluing,
    glue,
)
from gluecheck.lattice import DEFAULT_CAP, check_distributive_family
from gluecheck.multipullback import (
    DEFAULT_MAX_INDICES,
    RepairRefused,
    TooManyPieces,
    build_pullback,
    check_cocycle,
    check_condition2,
    check_condition3,
    projection_surjective,
    repair,
)
from gluecheck import specfile

PASS, FAIL, INVALID, REFUSED = 0, 1, 2, 3


def _subspace_json(s: Subspace) -> dict:
    return {
        "ambient_dim": s.ambient_dim,
        "dim": s.dim,
        "basis": [specfile.vector_json(r) for r in s.basis_rows],
    }


def _subspace_text(s: Subspace) -> str:
    if s.dim == 0:
        return "{0}"
    if s.is_full():
        return f"all of Q^{s.ambient_dim}"
    rows = "; ".join("[" + " ".join(str(x) for x in r) + "]" for r in s.basis_rows)
    return f"span{{{rows}}} in Q^{s.ambient_dim}"


def _witness_json(witness: Mapping | None) -> dict | None:
    if witness is None:
        return None
    return {i: specfile.vector_json(v) for i, v in witness.items()}


def _witness_text(witness: Mapping | None) -> str:
    if witness is None:
        return "(none)"
    parts = (
        f"{i}=[" + " ".join(str(x) for x in v) + "]" for i, v in sorted(witness.items())
    )
    return ", ".join(parts)


def _load(args: argparse.Namespace, expect_kind: str) -> tuple[str, object, dict]:
    if args.fixture:
        if expect_kind == specfile.KIND_GLUING:
            if args.fixture not in GLUING_FIXTURES and args.fixture not in FAMILY_FIXTURES:
                raise specfile.DocumentError(
                    f"unknown fixture {args.fixture!r}; available: "
                    + ", ".join(sorted(GLUING_FIXTURES))
                )
            return f"fixture:{args.fixture}", fixture_gluing(args.fixture, args.chain), {}
        if args.fixture not in FAMILY_FIXTURES and args.fixture not in GLUING_FIXTURES:
            raise specfile.DocumentError(
                f"unknown fixture {args.fixture!r}; available: "
                + ", ".join(sorted(FAMILY_FIXTURES))
            )
        return f"fixture:{args.fixture}", dualize(fixture_gluing(args.fixture, args.chain)), {}
    if not args.path:
        raise specfile.DocumentError("either a document path or --fixture is required")
    try:
        text = Path(args.path).read_text()
    except OSError as e:
        raise specfile.DocumentError(f"cannot read {args.path}: {e}") from None
    kind, obj, options = specfile.parse_document(text)
    if kind != expect_kind:
        raise specfile.DocumentError(f"expected a {expect_kind!r} document, got {kind!r}", "kind")
    return args.path, obj, options


def _emit(args: argparse.Namespace, report: dict, human: list[str]) -> int:
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        for line in human:
            print(line)
    return report["exit"]


def _triple_name(triple: Sequence[str]) -> str:
    i, j, k = triple
    return f"pi^{i}_{j}(ker pi^{i}_{k})"


def cmd_check(args: argparse.Namespace) -> int:
    source, fam, options = _load(args, specfile.KIND_FAMILY)
    cap = args.cap or int(options.get("lattice_cap", DEFAULT_CAP))
    max_j = args.max_j or int(options.get("max_j", DEFAULT_MAX_INDICES))

    report: dict = {"command": "check", "input": source}
    human = [f"checking family from {source}"]
    try:
        fam.require_valid(require_surjective=False)
    except FamilyValidationError as e:
        report["error"] = {"kind": "invalid-family", "problems": [p.message for p in e.problems]}
        report["exit"] = INVALID
        return _emit(args, report, human + [f"invalid family: {e}"])

    report["family"] = {
        "index": list(fam.labels),
        "piece_dims": {i: fam.pieces[i].dim for i in sorted(fam.labels)},
        "overlap_dims": {",".join(k): fam.overlaps[k].dim for k in sorted(fam.overlaps)},
    }

    dist = check_distributive_family(fam, cap=cap)
    report["distributive"] = {
        "ok": dist.ok,
        "surjectivity_failures": [list(p) for p in dist.surjectivity_failures],
        "per_piece": [
            {
                "piece": p.label,
                "lattice_elements": len(p.closure.elements),
                "complete": p.closure.complete,
                "all_ideals": p.all_ideals,
                "status": p.verdict.status,
            }
            for p in dist.per_piece
        ],
    }
    human.append(f"distributive family: {'yes' if dist.ok else 'NO'}")
    if dist.surjectivity_failures:
        for i, j in dist.surjectivity_failures:
            human.append(f"  map ({i} -> overlap with {j}) is not surjective")
        report["exit"] = REFUSED
        human.append("family is not surjective; the remaining checks need surjectivity")
        return _emit(args, report, human)

    pullback = build_pullback(fam)
    projections = []
    for i in sorted(fam.labels):
        surjective, img = projection_surjective(pullback, i)
        projections.append({"piece": i, "surjective": surjective, "image_dim": img.dim})
    report["pullback"] = {"dim": pullback.dim, "projections": projections}
    human.append(f"pullback dimension {pullback.dim}")
    for entry in projections:
        if not entry["surjective"]:
            human.append(
                f"  projection onto {entry['piece']} is NOT surjective "
                f"(image dimension {entry['image_dim']})"
            )

    cocycle = check_cocycle(fam)
    report["cocycle"] = {
        "overall": cocycle.overall,
        "condition1": [
            {
                "triple": list(e.triple),
                "equal": e.equal,
                "lhs": _subspace_json(e.lhs),
                "rhs": _subspace_json(e.rhs),
            }
            for e in cocycle.condition1
        ],
        "condition2": [
            {"triple": list(e.triple), "status": e.status} for e in cocycle.condition2
        ],
    }
    human.append(f"cocycle condition: {'holds' if cocycle.overall else 'FAILS'}")
    for e in cocycle.condition1:
        if not e.equal:
            i, j, k = e.triple
            human.append(
                f"  clause 1 fails at ({i},{j},{k}): {_triple_name(e.triple)} = {_subspace_text(e.lhs)}"
                f" vs {_triple_name((j, i, k))} = {_subspace_text(e.rhs)}"
            )
    for e in cocycle.condition2:
        if e.status == "fail":
            human.append(f"  clause 2 fails at {e.triple}")

    pair_ext = check_condition3(fam)
    report["extension_pairs"] = {
        "ok": pair_ext.ok,
        "entries": [
            {
                "subset": list(e.subset),
                "extend_by": e.extend_by,
                "ok": e.ok,
                "witness": _witness_json(e.witness),
            }
            for e in pair_ext.entries
        ],
    }
    human.append(f"pairwise extension: {'holds' if pair_ext.ok else 'FAILS'}")
    for e in pair_ext.failures:
        human.append(
            f"  compatible pair over {e.subset} does not extend by {e.extend_by}; "
            f"witness {_witness_text(e.witness)}"
        )

    refused = False
    try:
        all_ext = check_condition2(fam, max_indices=max_j)
        report["extension_all"] = {
            "ok": all_ext.ok,
            "entries": [
                {
                    "subset": list(e.subset),
                    "extend_by": e.extend_by,
                    "ok": e.ok,
                    "witness": _witness_json(e.witness),
                }
                for e in all_ext.entries
            ],
        }
        human.append(f"subset extension: {'holds' if all_ext.ok else 'FAILS'}")
        for e in all_ext.failures:
            human.append(
                f"  compatible tuple over {e.subset} does not extend by {e.extend_by}; "
                f"witness {_witness_text(e.witness)}"
            )
        verdict_values = [dist.ok, cocycle.overall, pair_ext.ok, all_ext.ok]
    except TooManyPieces as e:
        refused = True
        report["extension_all"] = {"refused": str(e)}
        human.append(f"subset extension: refused ({e})")
        verdict_values = [dist.ok, cocycle.overall, pair_ext.ok]
    verdict_values.extend(entry["surjective"] for entry in projections)

    if dist.ok and not refused:
        consistent = len({cocycle.overall, all_ext.ok, pair_ext.ok}) == 1
        report["theorem"] = {
            "ran": True,
            "verdicts": [cocycle.overall, all_ext.ok, pair_ext.ok],
            "consistent": consistent,
        }
        human.append(
            "equivalence of the three verdicts: "
            + ("consistent" if consistent else "INCONSISTENT (tool bug)")
        )
        if not consistent:
            verdict_values.append(False)
    else:
        reason = "family is not distributive" if not dist.ok else "subset check refused"
        report["theorem"] = {"ran": False, "reason": reason}
        human.append(f"equivalence check skipped: {reason}")

    ok = all(verdict_values)
    report["pass"] = ok
    report["exit"] = REFUSED if refused else (PASS if ok else FAIL)
    human.append("result: " + ("PASS" if ok else "FAIL"))
    return _emit(args, report, human)


def cmd_glue(args: argparse.Namespace) -> int:
    source, g, _ = _load(args, specfile.KIND_GLUING)
    report: dict = {"command": "glue", "input": source}
    human = [f"gluing from {source}"]
    try:
        g.require_valid()
    except ValueError as e:
        report["error"] = {"kind": "invalid-gluing", "message": str(e)}
        report["exit"] = INVALID
        return _emit(args, report, human + [f"invalid gluing: {e}"])

    glued = glue(g)
    report["classes"] = [[list(pt) for pt in cls] for cls in glued.classes]
    report["class_count"] = glued.size
    human.append(f"glued space has {glued.size} point classes")

    pieces = []
    for i in sorted(g.labels):
        emb = check_embedding(g, {i}, g.labels)
        pieces.append({"piece": i, "embedded": emb.injective})
        human.append(f"piece {i}: {'embedded' if emb.injective else 'NOT embedded'}")
    report["piece_embeddings"] = pieces

    partial = []
    for i, j in itertools.combinations(sorted(g.labels), 2):
        emb = check_embedding(g, {i, j}, g.labels)
        partial.append({"pair": [i, j], "embedded": emb.injective})
        human.append(
            f"partial gluing of {{{i},{j}}}: {'embedded' if emb.injective else 'NOT embedded'}"
        )
    report["partial_embeddings"] = partial

    ok = all(p["embedded"] for p in pieces) and all(p["embedded"] for p in partial)
    if args.duality:
        dual = duality_check(g)
        report["duality"] = {
            "ok": dual.ok,
            "pullback_dim": dual.pullback_dim,
            "class_count": dual.class_count,
            "mismatches": list(dual.mismatches),
        }
        human.append(
            f"duality: pullback dimension {dual.pullback_dim}, classes {dual.class_count}, "
            + ("consistent" if dual.ok else "MISMATCH (tool bug)")
        )
        ok = ok and dual.ok

    report["pass"] = ok
    report["exit"] = PASS if ok else FAIL
    human.append("result: " + ("PASS" if ok else "FAIL"))
    return _emit(args, report, human)


def cmd_repair(args: argparse.Namespace) -> int:
    source, fam, options = _load(args, specfile.KIND_FAMILY)
    cap = args.cap or int(options.get("lattice_cap", DEFAULT_CAP))
    report: dict = {"command": "repair", "input": source}
    human = [f"re-presenting family from {source}"]
    try:
        fam.require_valid()
    except FamilyValidationError as e:
        report["error"] = {"kind": "invalid-family", "problems": [p.message for p in e.problems]}
        report["exit"] = INVALID
        return _emit(args, report, human + [f"invalid family: {e}"])

    try:
        result = repair(fam, lattice_cap=cap)
    except RepairRefused as e:
        report["refused"] = {"reason": str(e), "projection": e.projection}
        report["exit"] = REFUSED
        human.append(f"refused: {e}")
        return _emit(args, report, human)

    repaired = result.family
    report["pullback_dim"] = result.pullback.dim
    report["overlap_dims"] = {
        ",".join(k): repaired.overlaps[k].dim for k in sorted(repaired.overlaps)
    }
    report["cocycle_after"] = result.cocycle.overall
    human.append(f"pullback dimension {result.pullback.dim}")
    for k in sorted(repaired.overlaps):
        human.append(f"overlap ({k[0]},{k[1]}): dimension {repaired.overlaps[k].dim}")
    human.append("cocycle condition after re-presentation: holds")

    doc = specfile.family_json(repaired, options={"repaired_from": source})
    report["document"] = doc
    if args.out:
        Path(args.out).write_text(specfile.dump_document(doc))
        human.append(f"wrote re-presented family to {args.out}")
    elif not args.json:
        human.append(specfile.dump_document(doc).rstrip("\n"))

    report["pass"] = True
    report["exit"] = PASS
    human.append("result: PASS")
    return _emit(args, report, human)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gluecheck",
        description="Cocycle-condition and gluing diagnostics for families of surjective "
        "algebra homomorphisms over Q.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("path", nargs="?", help="JSON document to read")
        p.add_argument("--fixture", help="use a built-in fixture instead of a document")
        p.add_argument("--chain", type=int, default=3, help="chain length for fixtures (default 3)")
        p.add_argument("--json", action="store_true", help="emit a machine-readable report")

    p_check = sub.add_parser("check", help="run the family checks")
    common(p_check)
    p_check.add_argument("--cap", type=int, default=0, help=f"lattice closure cap (default {DEFAULT_CAP})")
    p_check.add_argument("--max-j", type=int, default=0,
                         help=f"piece-count bound for the subset check (default {DEFAULT_MAX_INDICES})")
    p_check.set_defaults(fn=cmd_check)

    p_glue = sub.add_parser("glue", help="glue a finite point-set document and report embeddings")
    common(p_glue)
    p_glue.add_argument("--duality", action="store_true", help="cross-check against the dual family")
    p_glue.set_defaults(fn=cmd_glue)

    p_repair = sub.add_parser("repair", help="re-present a family so the cocycle condition holds")
    common(p_repair)
    p_repair.add_argument("--cap", type=int, default=0, help=f"lattice closure cap (default {DEFAULT_CAP})")
    p_repair.add_argument("--out", help="write the re-presented family document here")
    p_repair.set_defaults(fn=cmd_repair)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except specfile.DocumentError as e:
        print(f"error: {e}", file=sys.stderr)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
