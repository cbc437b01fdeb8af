"""Gluing of finite point sets and its function-algebra dual.

The continuous picture (spaces glued along identified closed subspaces) is
discretized: pieces are finite labelled point sets, identifications are
partial bijections between pairs of pieces, and the glued space is the
colimit computed by union-find.  Dually, each piece becomes the function
algebra on its points and each identification becomes a pair of
restriction maps into the function algebra on the identified pairs; that
family is surjective and distributive by construction, which is what makes
this module a corpus generator for the pullback checks.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from gluecheck.algebra import Algebra, AlgebraHom, GluingFamily, pair_key
from gluecheck.exactlin import F0, F1, Matrix, span
from gluecheck.multipullback import check_condition3, pullback_subspace

Point = tuple[str, str]  # (piece label, point label)


@dataclass(frozen=True, eq=True)
class FiniteGluing:
    """Finite pieces plus pairwise partial identification bijections.

    ``identifications[(i, j)]`` (with i < j) lists (point of i, point of j)
    pairs; a missing pair means nothing is identified there.
    """

    labels: tuple[str, ...]
    spaces: Mapping[str, tuple[str, ...]]
    identifications: Mapping[tuple[str, str], tuple[tuple[str, str], ...]]

    def pairs(self, i: str, j: str) -> tuple[tuple[str, str], ...]:
        """Identified (point-of-i, point-of-j) pairs, in stored orientation."""
        key = pair_key(i, j)
        stored = self.identifications.get(key, ())
        if key == (i, j):
            return stored
        return tuple((b, a) for a, b in stored)

    def problems(self) -> list[str]:
        out = []
        if len(set(self.labels)) != len(self.labels):
            out.append("duplicate piece labels")
        for i in self.labels:
            if i not in self.spaces:
                out.append(f"no point set for piece {i}")
            elif len(set(self.spaces[i])) != len(self.spaces[i]):
                out.append(f"duplicate point labels in piece {i}")
        if out:
            return out
        for (i, j), pairs in self.identifications.items():
            if (i, j) != pair_key(i, j):
                out.append(f"identification key ({i}, {j}) is not in canonical order")
                continue
            if i not in self.spaces or j not in self.spaces:
                out.append(f"identification ({i}, {j}) references unknown pieces")
                continue
            left = [a for a, _ in pairs]
            right = [b for _, b in pairs]
            if not set(left) <= set(self.spaces[i]):
                out.append(f"identification ({i}, {j}) uses points not in piece {i}")
            if not set(right) <= set(self.spaces[j]):
                out.append(f"identification ({i}, {j}) uses points not in piece {j}")
            if len(set(left)) != len(left) or len(set(right)) != len(right):
                out.append(f"identification ({i}, {j}) is not a partial bijection")
        return out

    def require_valid(self) -> None:
        problems = self.problems()
        if problems:
            raise ValueError("; ".join(problems))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if rx > ry:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True


@dataclass(frozen=True)
class GluedSpace:
    """Colimit of the selected pieces: points modulo all identifications."""

    over: tuple[str, ...]
    classes: tuple[tuple[Point, ...], ...]
    class_of: Mapping[Point, int]

    @property
    def size(self) -> int:
        return len(self.classes)


def glue(g: FiniteGluing, over: Iterable[str] | None = None) -> GluedSpace:
    """Union-find closure of the identifications among the chosen pieces."""
    g.require_valid()
    chosen = tuple(g.labels) if over is None else tuple(i for i in g.labels if i in set(over))
    if not chosen:
        raise ValueError("the piece subset must be nonempty")
    points: list[Point] = [(i, p) for i in chosen for p in g.spaces[i]]
    idx = {pt: n for n, pt in enumerate(points)}
    uf = _UnionFind(len(points))
    for i, j in itertools.combinations(chosen, 2):
        for a, b in g.pairs(i, j):
            uf.union(idx[(i, a)], idx[(j, b)])
    groups: dict[int, list[Point]] = {}
    for pt in points:
        groups.setdefault(uf.find(idx[pt]), []).append(pt)
    classes = tuple(tuple(groups[root]) for root in sorted(groups))
    class_of = {pt: c for c, cls in enumerate(classes) for pt in cls}
    return GluedSpace(chosen, classes, class_of)


@dataclass(frozen=True)
class EmbeddingReport:
    """Injectivity of the canonical map glue(inner) -> glue(outer)."""

    inner_over: tuple[str, ...]
    outer_over: tuple[str, ...]
    injective: bool
    merged: tuple[tuple[tuple[Point, ...], tuple[Point, ...]], ...]


def check_embedding(g: FiniteGluing, inner: Iterable[str], outer: Iterable[str]) -> EmbeddingReport:
    """Whether a partial gluing sits inside a larger one without collapsing."""
    inner_set, outer_set = set(inner), set(outer)
    if not inner_set <= outer_set:
        raise ValueError("the inner piece subset must be contained in the outer one")
    small = glue(g, inner_set)
    big = glue(g, outer_set)
    hits: dict[int, list[int]] = {}
    for c, cls in enumerate(small.classes):
        hits.setdefault(big.class_of[cls[0]], []).append(c)
    merged = []
    for group in hits.values():
        for a, b in itertools.combinations(group, 2):
            merged.append((small.classes[a], small.classes[b]))
    merged.sort()
    return EmbeddingReport(small.over, big.over, not merged, tuple(merged))


def _indicator_matrix(points: Sequence[str], chosen: Sequence[str]) -> Matrix:
    rows = []
    for c in chosen:
        rows.append(tuple(F1 if p == c else F0 for p in points))
    return Matrix(len(chosen), len(points), tuple(rows))


def dualize(g: FiniteGluing) -> GluingFamily:
    """Function-algebra family of a gluing: restriction maps to identified points.

    The overlap of {i, j} is the function algebra on the identification
    pairs; both restriction maps are surjective because the identification
    is a partial bijection.
    """
    g.require_valid()
    pieces = {i: Algebra.functions(g.spaces[i], label=f"functions({i})") for i in g.labels}
    overlaps: dict[tuple[str, str], Algebra] = {}
    maps: dict[tuple[str, str], AlgebraHom] = {}
    for i, j in itertools.combinations(g.labels, 2):
        key = pair_key(i, j)
        pairs = g.identifications.get(key, ())
        overlap = Algebra.functions(len(pairs), label=f"functions({key[0]}~{key[1]})")
        overlaps[key] = overlap
        left = _indicator_matrix(g.spaces[key[0]], [a for a, _ in pairs])
        right = _indicator_matrix(g.spaces[key[1]], [b for _, b in pairs])
        maps[(key[0], key[1])] = AlgebraHom(pieces[key[0]], overlap, left)
        maps[(key[1], key[0])] = AlgebraHom(pieces[key[1]], overlap, right)
    return GluingFamily(tuple(g.labels), pieces, overlaps, maps)


@dataclass(frozen=True)
class DualityReport:
    """Cross-checks between a gluing and its dualized family.

    Any mismatch is a tool bug: pullback dimension must count glued
    classes, projection surjectivity must mirror piece embeddings, and
    pairwise extension must mirror partial-gluing embeddings.
    """

    gluing: FiniteGluing
    pullback_dim: int
    class_count: int
    projection_embedding: tuple[tuple[str, bool, bool], ...]
    extension_embedding: tuple[tuple[tuple[str, str], str, bool, bool], ...]
    mismatches: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def duality_check(g: FiniteGluing) -> DualityReport:
    g.require_valid()
    fam = dualize(g)
    glued = glue(g)
    sub = pullback_subspace(fam)
    mismatches = []
    if sub.dim != glued.size:
        mismatches.append(
            f"pullback dimension {sub.dim} differs from glued class count {glued.size}"
        )

    proj_vs_embed = []
    offset = 0
    for i in fam.labels:
        d = fam.pieces[i].dim
        img = span([row[offset:offset + d] for row in sub.basis_rows], d)
        surjective = img.dim == d
        embedded = check_embedding(g, {i}, g.labels).injective
        proj_vs_embed.append((i, surjective, embedded))
        if surjective != embedded:
            mismatches.append(
                f"projection onto {i} surjective={surjective} but piece embedding={embedded}"
            )
        offset += d

    ext = check_condition3(fam)
    ext_vs_embed = []
    for entry in ext.entries:
        i, j = entry.subset
        k = entry.extend_by
        embedded = check_embedding(g, {i, j}, {i, j, k}).injective
        ext_vs_embed.append(((i, j), k, entry.ok, embedded))
        if entry.ok != embedded:
            mismatches.append(
                f"extension of ({i},{j}) by {k} ok={entry.ok} but partial-gluing embedding={embedded}"
            )
    return DualityReport(
        g, sub.dim, glued.size, tuple(proj_vs_embed), tuple(ext_vs_embed), tuple(mismatches)
    )


def chain_points(length: int = 3) -> tuple[str, ...]:
    """Point labels for a discretized interval; endpoints are '-1' and '1'."""
    if length < 2:
        raise ValueError("a chain needs at least its two endpoints")
    if length == 3:
        return ("-1", "0", "1")
    inner = tuple(f"t{m}" for m in range(1, length - 1))
    return ("-1",) + inner + ("1",)


def _three_chains(length: int) -> dict[str, tuple[str, ...]]:
    pts = chain_points(length)
    return {"I1": pts, "I2": pts, "I3": pts}


def tstar(chain_length: int = 3) -> FiniteGluing:
    """Three chains with both endpoints of I2 and I3 attached: the gluing
    whose middle piece collapses in the colimit."""
    return FiniteGluing(
        ("I1", "I2", "I3"),
        _three_chains(chain_length),
        {
            ("I1", "I2"): (("1", "1"),),
            ("I1", "I3"): (("1", "1"),),
            ("I2", "I3"): (("-1", "1"), ("1", "-1")),
        },
    )


def tcirc_a(chain_length: int = 3) -> FiniteGluing:
    """Three chains glued into a circle with a tail, overlap of I2 and I3 at
    one endpoint pair only; every piece embeds but the partial gluing of
    I2 and I3 does not."""
    return FiniteGluing(
        ("I1", "I2", "I3"),
        _three_chains(chain_length),
        {
            ("I1", "I2"): (("1", "1"),),
            ("I1", "I3"): (("1", "1"),),
            ("I2", "I3"): (("-1", "-1"),),
        },
    )


def tcirc_c(chain_length: int = 3) -> FiniteGluing:
    """Same glued space as tcirc_a but with I2 and I3 identified at both
    endpoint pairs, so all partial gluings embed."""
    return FiniteGluing(
        ("I1", "I2", "I3"),
        _three_chains(chain_length),
        {
            ("I1", "I2"): (("1", "1"),),
            ("I1", "I3"): (("1", "1"),),
            ("I2", "I3"): (("-1", "-1"), ("1", "1")),
        },
    )


GLUING_FIXTURES = {
    "tstar": tstar,
    "tcirc-a": tcirc_a,
    "tcirc-c": tcirc_c,
}

FAMILY_FIXTURES = {
    "example1": tstar,
    "example2": tcirc_a,
    "example3": tcirc_c,
}


def fixture_gluing(name: str, chain_length: int = 3) -> FiniteGluing:
    try:
        builder = GLUING_FIXTURES.get(name) or FAMILY_FIXTURES[name]
    except KeyError:
        raise KeyError(
            f"unknown fixture {name!r}; available: "
            + ", ".join(sorted(GLUING_FIXTURES) + sorted(FAMILY_FIXTURES))
        ) from None
    return builder(chain_length)


def fixture_family(name: str, chain_length: int = 3) -> GluingFamily:
    return dualize(fixture_gluing(name, chain_length))


def random_gluing(seed: int, max_pieces: int = 6, max_points: int = 12) -> FiniteGluing:
    """Deterministic random gluing for property-test corpora.

    Identification sizes are kept small most of the time so the kernel
    lattices stay at desk scale; roughly a quarter of the piece pairs get
    no identification at all, which exercises zero-dimensional overlaps.
    """
    rng = random.Random(seed)
    n = rng.randint(2, max_pieces)
    labels = tuple(f"S{t}" for t in range(1, n + 1))
    spaces = {
        lab: tuple(f"p{m}" for m in range(1, rng.randint(1, max_points) + 1))
        for lab in labels
    }
    identifications: dict[tuple[str, str], tuple[tuple[str, str], ...]] = {}
    for i, j in itertools.combinations(labels, 2):
        if rng.random() < 0.25:
            continue
        most = min(len(spaces[i]), len(spaces[j]))
        size = rng.randint(1, most) if rng.random() < 0.2 else rng.randint(1, min(3, most))
        left = rng.sample(spaces[i], size)
        right = rng.sample(spaces[j], size)
        identifications[(i, j)] = tuple(zip(left, right))
    return FiniteGluing(labels, spaces, identifications)
