"""JSON documents for families and gluings.

Rationals travel as strings "p/q" in lowest terms with positive
denominator (plain "p" for integers), never as floats, so documents are
exact and diff-stable and re-parsing an emitted document reproduces the
in-memory objects bit for bit.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping

from gluecheck.algebra import Algebra, AlgebraHom, GluingFamily, pair_key
from gluecheck.exactlin import Matrix
from gluecheck.finset import FiniteGluing

KIND_FAMILY = "algebra-family"
KIND_GLUING = "finite-gluing"


class DocumentError(ValueError):
    """Parse or schema failure, pointing at the offending field."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


def _expect(value: Any, types: type | tuple, path: str, what: str) -> Any:
    if not isinstance(value, types):
        raise DocumentError(f"expected {what}", path)
    return value


def _get(obj: Mapping, key: str, path: str) -> Any:
    if key not in obj:
        raise DocumentError("missing field", f"{path}.{key}" if path else key)
    return obj[key]


def parse_rational(value: Any, path: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise DocumentError("rationals must be integers or 'p/q' strings", path)
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise DocumentError(f"not a valid rational: {e}", path) from None


def _parse_vector(value: Any, length: int, path: str) -> tuple:
    _expect(value, list, path, "a list")
    if len(value) != length:
        raise DocumentError(f"expected {length} entries, got {len(value)}", path)
    return tuple(parse_rational(x, f"{path}[{n}]") for n, x in enumerate(value))


def _parse_matrix(value: Any, rows: int, cols: int, path: str) -> Matrix:
    _expect(value, list, path, "a list of rows")
    if len(value) != rows:
        raise DocumentError(f"expected {rows} rows, got {len(value)}", path)
    entries = tuple(_parse_vector(r, cols, f"{path}[{n}]") for n, r in enumerate(value))
    return Matrix(rows, cols, entries)


def _parse_algebra(value: Any, path: str, label: str) -> Algebra:
    _expect(value, dict, path, "an object")
    dim = _expect(_get(value, "dim", path), int, f"{path}.dim", "an integer")
    if dim < 0:
        raise DocumentError("dimension must be nonnegative", f"{path}.dim")
    unit = _parse_vector(_get(value, "unit", path), dim, f"{path}.unit")
    sc = _get(value, "structure_constants", path)
    _expect(sc, list, f"{path}.structure_constants", "a list")
    if len(sc) != dim:
        raise DocumentError(f"expected {dim} rows", f"{path}.structure_constants")
    table = []
    for a, row in enumerate(sc):
        _expect(row, list, f"{path}.structure_constants[{a}]", "a list")
        if len(row) != dim:
            raise DocumentError(f"expected {dim} entries", f"{path}.structure_constants[{a}]")
        table.append(tuple(
            _parse_vector(v, dim, f"{path}.structure_constants[{a}][{b}]")
            for b, v in enumerate(row)
        ))
    return Algebra(dim, tuple(table), unit, str(value.get("label", label)))


def parse_family(doc: Mapping, path: str = "") -> GluingFamily:
    labels = _get(doc, "index", path)
    _expect(labels, list, "index", "a list of piece labels")
    labels = tuple(_expect(x, str, f"index[{n}]", "a string") for n, x in enumerate(labels))
    if len(set(labels)) != len(labels):
        raise DocumentError("duplicate labels", "index")

    pieces_doc = _expect(_get(doc, "pieces", path), dict, "pieces", "an object")
    pieces = {}
    for i in labels:
        if i not in pieces_doc:
            raise DocumentError(f"no algebra for piece {i}", "pieces")
        pieces[i] = _parse_algebra(pieces_doc[i], f"pieces.{i}", f"B({i})")

    overlaps_doc = _expect(_get(doc, "overlaps", path), list, "overlaps", "a list")
    overlaps = {}
    for n, item in enumerate(overlaps_doc):
        here = f"overlaps[{n}]"
        _expect(item, dict, here, "an object")
        pair = _get(item, "pair", here)
        _expect(pair, list, f"{here}.pair", "a pair of labels")
        if len(pair) != 2 or not all(isinstance(x, str) for x in pair):
            raise DocumentError("expected two labels", f"{here}.pair")
        if pair[0] not in labels or pair[1] not in labels or pair[0] == pair[1]:
            raise DocumentError("labels must be two distinct pieces", f"{here}.pair")
        key = pair_key(*pair)
        if key in overlaps:
            raise DocumentError(f"duplicate overlap for {key}", f"{here}.pair")
        overlaps[key] = _parse_algebra(item, here, f"B({key[0]},{key[1]})")

    maps_doc = _expect(_get(doc, "maps", path), list, "maps", "a list")
    maps = {}
    for n, item in enumerate(maps_doc):
        here = f"maps[{n}]"
        _expect(item, dict, here, "an object")
        src = _expect(_get(item, "from", here), str, f"{here}.from", "a label")
        dst = _expect(_get(item, "to", here), str, f"{here}.to", "a label")
        if src not in labels or dst not in labels or src == dst:
            raise DocumentError("expected two distinct piece labels", here)
        key = pair_key(src, dst)
        if key not in overlaps:
            raise DocumentError(f"no overlap declared for {key}", here)
        if (src, dst) in maps:
            raise DocumentError(f"duplicate map ({src}, {dst})", here)
        matrix = _parse_matrix(
            _get(item, "matrix", here), overlaps[key].dim, pieces[src].dim, f"{here}.matrix"
        )
        maps[(src, dst)] = AlgebraHom(pieces[src], overlaps[key], matrix)
    return GluingFamily(labels, pieces, overlaps, maps)


def parse_gluing(doc: Mapping, path: str = "") -> FiniteGluing:
    labels = _get(doc, "index", path)
    _expect(labels, list, "index", "a list of piece labels")
    labels = tuple(_expect(x, str, f"index[{n}]", "a string") for n, x in enumerate(labels))

    spaces_doc = _expect(_get(doc, "spaces", path), dict, "spaces", "an object")
    spaces = {}
    for i in labels:
        if i not in spaces_doc:
            raise DocumentError(f"no point set for piece {i}", "spaces")
        pts = _expect(spaces_doc[i], list, f"spaces.{i}", "a list of point labels")
        spaces[i] = tuple(_expect(p, str, f"spaces.{i}[{n}]", "a string") for n, p in enumerate(pts))

    idents_doc = _expect(doc.get("identifications", []), list, "identifications", "a list")
    identifications = {}
    for n, item in enumerate(idents_doc):
        here = f"identifications[{n}]"
        _expect(item, dict, here, "an object")
        pair = _get(item, "pair", here)
        if not isinstance(pair, list) or len(pair) != 2 or not all(isinstance(x, str) for x in pair):
            raise DocumentError("expected two labels", f"{here}.pair")
        key = pair_key(*pair)
        flip = tuple(pair) != key
        matches = _expect(_get(item, "matches", here), list, f"{here}.matches", "a list of pairs")
        out = []
        for m, match in enumerate(matches):
            if not isinstance(match, list) or len(match) != 2 or not all(isinstance(x, str) for x in match):
                raise DocumentError("expected a pair of point labels", f"{here}.matches[{m}]")
            out.append((match[1], match[0]) if flip else tuple(match))
        if key in identifications:
            raise DocumentError(f"duplicate identification for {key}", f"{here}.pair")
        identifications[key] = tuple(out)
    g = FiniteGluing(labels, spaces, identifications)
    problems = g.problems()
    if problems:
        raise DocumentError(problems[0], "identifications")
    return g


def parse_document(text: str) -> tuple[str, GluingFamily | FiniteGluing, dict]:
    """Parse a document; returns (kind, object, options)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    _expect(doc, dict, "", "a JSON object")
    kind = _get(doc, "kind", "")
    options = doc.get("options", {})
    _expect(options, dict, "options", "an object")
    if kind == KIND_FAMILY:
        return kind, parse_family(doc), dict(options)
    if kind == KIND_GLUING:
        return kind, parse_gluing(doc), dict(options)
    raise DocumentError(f"unknown kind {kind!r}; expected '{KIND_FAMILY}' or '{KIND_GLUING}'", "kind")


def rational_str(x: Fraction) -> str:
    return str(x)


def vector_json(v) -> list[str]:
    return [rational_str(x) for x in v]


def matrix_json(m: Matrix) -> list[list[str]]:
    return [vector_json(r) for r in m.entries]


def algebra_json(a: Algebra) -> dict:
    return {
        "dim": a.dim,
        "label": a.label,
        "unit": vector_json(a.unit),
        "structure_constants": [[vector_json(v) for v in row] for row in a.table],
    }


def family_json(fam: GluingFamily, options: Mapping | None = None) -> dict:
    doc: dict = {"kind": KIND_FAMILY}
    if options:
        doc["options"] = dict(options)
    doc["index"] = list(fam.labels)
    doc["pieces"] = {i: algebra_json(fam.pieces[i]) for i in fam.labels}
    doc["overlaps"] = [
        {"pair": list(key), **algebra_json(fam.overlaps[key])}
        for key in sorted(fam.overlaps)
    ]
    doc["maps"] = [
        {"from": i, "to": j, "matrix": matrix_json(fam.maps[(i, j)].matrix)}
        for i, j in sorted(fam.maps)
    ]
    return doc


def gluing_json(g: FiniteGluing, options: Mapping | None = None) -> dict:
    doc: dict = {"kind": KIND_GLUING}
    if options:
        doc["options"] = dict(options)
    doc["index"] = list(g.labels)
    doc["spaces"] = {i: list(g.spaces[i]) for i in g.labels}
    doc["identifications"] = [
        {"pair": list(key), "matches": [list(m) for m in g.identifications[key]]}
        for key in sorted(g.identifications)
        if g.identifications[key]
    ]
    return doc


def dump_document(doc: Mapping) -> str:
    return json.dumps(doc, indent=2) + "\n"
