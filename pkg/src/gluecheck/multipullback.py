"""Multi-pullbacks of gluing families: the compatible-tuple subalgebra, the
cocycle condition, partial-pullback extension checks, and the canonical
re-presentation that restores the cocycle condition.

Conventions used throughout:

* the ambient of a pullback over K is the direct sum of the pieces in K,
  blocks ordered by the family's label order;
* every verdict object carries concrete witnesses (subspaces, vectors or
  matrices), because the point of the tool is diagnosis, not a boolean;
* all checks are pure functions of an immutable family, and reports are
  assembled in lexicographic label order so output is deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from gluecheck.algebra import (
    Algebra,
    AlgebraHom,
    GluingFamily,
    Ideal,
    is_ideal,
    kernel_ideal,
    pair_key,
    quotient_algebra,
    subspace_algebra,
)
from gluecheck.exactlin import (
    F0,
    Matrix,
    Subspace,
    Vector,
    image,
    invert,
    kernel,
    quotient,
    span,
    subspace_sum,
    vec,
)
from gluecheck.lattice import DEFAULT_CAP, check_distributive_family, generate_lattice, is_distributive

DEFAULT_MAX_INDICES = 8


class TooManyPieces(ValueError):
    """Raised when an exhaustive subset check would enumerate too much."""


class StructuralError(RuntimeError):
    """An internal invariant failed; indicates corrupt input or a tool bug."""


class HypothesisNotMet(ValueError):
    """A check was refused because its standing hypothesis fails."""

    def __init__(self, message: str, detail=None):
        super().__init__(message)
        self.detail = detail


class RepairRefused(ValueError):
    """The re-presentation precondition fails; carries the diagnosis."""

    def __init__(self, message: str, *, projection: str | None = None, witness=None):
        super().__init__(message)
        self.projection = projection
        self.witness = witness


def _block_layout(fam: GluingFamily, over: Iterable[str]) -> tuple[tuple[str, ...], dict[str, int], int]:
    """Block order (family label order), offsets, and total dimension."""
    chosen = set(over)
    unknown = chosen - set(fam.labels)
    if unknown:
        raise ValueError(f"labels not in the family: {sorted(unknown)}")
    order = tuple(i for i in fam.labels if i in chosen)
    if not order:
        raise ValueError("the index subset must be nonempty")
    offsets = {}
    total = 0
    for i in order:
        offsets[i] = total
        total += fam.pieces[i].dim
    return order, offsets, total


def pullback_subspace(fam: GluingFamily, over: Iterable[str] | None = None,
                      _cache: dict | None = None) -> Subspace:
    """Compatible tuples over the given labels, inside the direct sum.

    A tuple is compatible when both maps into each overlap agree on it, so
    the subspace is the kernel of the stacked difference constraints.
    """
    order, offsets, total = _block_layout(fam, fam.labels if over is None else over)
    key = frozenset(order)
    if _cache is not None and key in _cache:
        return _cache[key]
    rows: list[list] = []
    for i, j in itertools.combinations(order, 2):
        fwd = fam.map(i, j).matrix
        bwd = fam.map(j, i).matrix
        for r in range(fam.overlap(i, j).dim):
            row = [F0] * total
            for c, x in enumerate(fwd.entries[r]):
                if x:
                    row[offsets[i] + c] = x
            for c, x in enumerate(bwd.entries[r]):
                if x:
                    row[offsets[j] + c] -= x
            rows.append(row)
    sub = kernel(Matrix(len(rows), total, tuple(tuple(r) for r in rows)))
    if _cache is not None:
        _cache[key] = sub
    return sub


@dataclass(frozen=True)
class MultiPullback:
    """The compatible-tuple subalgebra over a label subset.

    ``subspace`` lives in the direct-sum ambient; ``algebra`` is the induced
    presentation on the subspace basis; ``projections[i]`` maps presentation
    coordinates onto the piece B_i.
    """

    family: GluingFamily
    over: tuple[str, ...]
    offsets: Mapping[str, int]
    subspace: Subspace
    algebra: Algebra
    projections: Mapping[str, Matrix]

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def ambient_vector(self, components: Mapping[str, Sequence]) -> Vector:
        if set(components) != set(self.over):
            raise ValueError("components must be given for exactly the pullback's labels")
        out = [F0] * self.subspace.ambient_dim
        for i in self.over:
            piece = self.family.pieces[i]
            comp = vec(components[i])
            if len(comp) != piece.dim:
                raise ValueError(f"component {i} has length {len(comp)}, expected {piece.dim}")
            for c, x in enumerate(comp):
                out[self.offsets[i] + c] = x
        return tuple(out)

    def contains(self, components: Mapping[str, Sequence]) -> bool:
        return self.subspace.contains(self.ambient_vector(components))


def build_pullback(fam: GluingFamily, over: Iterable[str] | None = None) -> MultiPullback:
    """Build the pullback with its induced algebra structure.

    Closure under the componentwise product and membership of the unit
    tuple are genuine checks here; either failing means the family data is
    corrupt, since surjective homomorphism constraints always cut out a
    unital subalgebra.
    """
    fam.require_valid()
    order, offsets, total = _block_layout(fam, fam.labels if over is None else over)
    sub = pullback_subspace(fam, order)
    ambient = Algebra.direct_sum([fam.pieces[i] for i in order])
    try:
        induced = subspace_algebra(ambient, sub, label="pullback(" + ",".join(order) + ")")
    except ValueError as e:
        raise StructuralError(f"pullback subspace is not a unital subalgebra: {e}") from e
    projections = {
        i: Matrix(
            fam.pieces[i].dim,
            sub.dim,
            tuple(
                tuple(row[offsets[i] + r] for row in sub.basis_rows)
                for r in range(fam.pieces[i].dim)
            ),
        )
        for i in order
    }
    return MultiPullback(fam, order, offsets, sub, induced, projections)


def projection_surjective(p: MultiPullback, label: str) -> tuple[bool, Subspace]:
    """Whether the coordinate projection onto a piece is onto, with its image."""
    if label not in p.over:
        raise ValueError(f"{label} is not part of this pullback")
    img = image(p.projections[label], Subspace.full(p.dim))
    return img.dim == p.family.pieces[label].dim, img


def _projected_to(fam: GluingFamily, sub: Subspace, source_over: Sequence[str],
                  target_over: Sequence[str]) -> Subspace:
    """Project a pullback subspace onto the blocks of a sub-family."""
    _, src_offsets, _ = _block_layout(fam, source_over)
    order, offsets, total = _block_layout(fam, target_over)
    vectors = []
    for row in sub.basis_rows:
        out = [F0] * total
        for i in order:
            d = fam.pieces[i].dim
            out[offsets[i]:offsets[i] + d] = row[src_offsets[i]:src_offsets[i] + d]
        vectors.append(out)
    return span(vectors, total)


def _first_row_outside(whole: Subspace, part: Subspace) -> Vector:
    for row in whole.basis_rows:
        if not part.contains(row):
            return row
    raise StructuralError("subspace comparison claimed strict containment but found no witness")


def _split_components(fam: GluingFamily, over: Sequence[str], v: Sequence) -> dict[str, Vector]:
    _, offsets, _ = _block_layout(fam, over)
    return {
        i: tuple(v[offsets[i] + c] for c in range(fam.pieces[i].dim))
        for i in over
    }


@dataclass(frozen=True)
class ExtensionEntry:
    """Verdict for one partial-pullback extension question.

    ``ok`` says every compatible tuple over ``subset`` extends to one over
    ``subset + (extend_by,)``; otherwise ``witness`` is a compatible tuple
    (keyed by label) that admits no extension.
    """

    subset: tuple[str, ...]
    extend_by: str
    ok: bool
    expected: Subspace
    projected: Subspace
    witness: Mapping[str, Vector] | None


@dataclass(frozen=True)
class ExtensionReport:
    entries: tuple[ExtensionEntry, ...]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    @property
    def failures(self) -> tuple[ExtensionEntry, ...]:
        return tuple(e for e in self.entries if not e.ok)

    def entry(self, subset: Sequence[str], extend_by: str) -> ExtensionEntry:
        key = tuple(sorted(subset))
        for e in self.entries:
            if e.subset == key and e.extend_by == extend_by:
                return e
        raise KeyError((key, extend_by))


def _extension_entry(fam: GluingFamily, subset: Sequence[str], k: str, cache: dict) -> ExtensionEntry:
    sub_order = tuple(i for i in fam.labels if i in set(subset))
    big_order = tuple(i for i in fam.labels if i in set(subset) | {k})
    small = pullback_subspace(fam, sub_order, cache)
    big = pullback_subspace(fam, big_order, cache)
    projected = _projected_to(fam, big, big_order, sub_order)
    if not small.contains_subspace(projected):
        raise StructuralError("projection of a larger pullback escaped the smaller one")
    ok = projected == small
    witness = None
    if not ok:
        witness = _split_components(fam, sub_order, _first_row_outside(small, projected))
    return ExtensionEntry(tuple(sorted(subset)), k, ok, small, projected, witness)


def check_condition3(fam: GluingFamily) -> ExtensionReport:
    """Pairwise extension: for each pair {i, j} and third index k, do all
    compatible pairs extend to compatible triples?"""
    fam.require_valid()
    cache: dict = {}
    entries = []
    for i, j in itertools.combinations(sorted(fam.labels), 2):
        for k in sorted(fam.labels):
            if k in (i, j):
                continue
            entries.append(_extension_entry(fam, (i, j), k, cache))
    return ExtensionReport(tuple(entries))


def check_condition2(fam: GluingFamily, max_indices: int = DEFAULT_MAX_INDICES) -> ExtensionReport:
    """Exhaustive extension over every nonempty proper subset K and k not in K.

    The enumeration is exponential in the number of pieces, so families
    larger than ``max_indices`` are refused rather than silently crunched.
    """
    fam.require_valid()
    n = len(fam.labels)
    if n > max_indices:
        raise TooManyPieces(
            f"family has {n} pieces; the exhaustive subset check is capped at {max_indices}"
        )
    cache: dict = {}
    entries = []
    labels = sorted(fam.labels)
    for size in range(1, n):
        for subset in itertools.combinations(labels, size):
            for k in labels:
                if k in subset:
                    continue
                entries.append(_extension_entry(fam, subset, k, cache))
    return ExtensionReport(tuple(entries))


@dataclass(frozen=True)
class TripleQuotients:
    """Quotient data for one ordered triple (i, j, k).

    ``piece_quotient`` is B_i modulo (ker m_ij + ker m_ik) with its bracket
    surjection; ``overlap_quotient`` is B_ij modulo the pushed kernel
    m_ij(ker m_ik); ``iso`` carries the bracket class of b to the class of
    m_ij(b), and is invertible whenever the family is surjective.
    """

    triple: tuple[str, str, str]
    piece_quotient: Algebra
    bracket: AlgebraHom
    pushed_kernel: Subspace
    overlap_quotient: Algebra
    overlap_surjection: AlgebraHom
    iso: Matrix
    iso_inv: Matrix


def _triple_quotients(fam: GluingFamily, i: str, j: str, k: str,
                      kernels: dict | None = None) -> TripleQuotients:
    piece = fam.pieces[i]
    m_ij = fam.map(i, j)
    if kernels is None:
        kernels = {}
    for pair in ((i, j), (i, k)):
        if pair not in kernels:
            kernels[pair] = kernel(fam.map(*pair).matrix)
    ker_ij = kernels[(i, j)]
    ker_ik = kernels[(i, k)]
    ksum = subspace_sum(ker_ij, ker_ik)
    piece_q, bracket = quotient_algebra(piece, Ideal(ksum), label=f"{i}/({j},{k})")

    pushed = image(m_ij.matrix, ker_ik)
    overlap = fam.overlap(i, j)
    if not is_ideal(overlap, pushed):
        raise StructuralError(
            f"image of ker({i}->{k}) under the map {i}->{j} is not an ideal of the overlap"
        )
    overlap_q, osurj = quotient_algebra(overlap, Ideal(pushed), label=f"({i},{j})/pushed({k})")

    chart = quotient(piece.dim, ksum)
    iso = osurj.matrix @ m_ij.matrix @ chart.section
    if iso @ bracket.matrix != osurj.matrix @ m_ij.matrix:
        raise StructuralError("triple quotient comparison map is not well defined")
    try:
        iso_inv = invert(iso)
    except ValueError as e:
        raise StructuralError(
            f"comparison map for triple ({i},{j},{k}) is not invertible; "
            "this cannot happen for a surjective family"
        ) from e
    return TripleQuotients((i, j, k), piece_q, bracket, pushed, overlap_q, osurj, iso, iso_inv)


def build_triple_quotients(fam: GluingFamily, i: str, j: str, k: str) -> TripleQuotients:
    fam.require_valid()
    if len({i, j, k}) != 3 or not {i, j, k} <= set(fam.labels):
        raise ValueError("three distinct family labels are required")
    return _triple_quotients(fam, i, j, k)


@dataclass(frozen=True)
class KernelImageEntry:
    """Equality verdict for the two pushed kernels of an ordered triple."""

    triple: tuple[str, str, str]
    lhs: Subspace
    rhs: Subspace
    equal: bool


@dataclass(frozen=True)
class TransitionEntry:
    """Composition verdict phi(i<-k over j) == phi(i<-j over k) . phi(j<-k over i)."""

    triple: tuple[str, str, str]
    status: str  # "ok" | "fail" | "not evaluable"
    lhs: Matrix | None = None
    rhs: Matrix | None = None


@dataclass(frozen=True)
class CocycleReport:
    condition1: tuple[KernelImageEntry, ...]
    condition2: tuple[TransitionEntry, ...]
    overall: bool

    def kernel_entry(self, triple: Sequence[str]) -> KernelImageEntry:
        t = tuple(triple)
        for e in self.condition1:
            if e.triple == t:
                return e
        raise KeyError(t)

    def transition_entry(self, triple: Sequence[str]) -> TransitionEntry:
        t = tuple(triple)
        for e in self.condition2:
            if e.triple == t:
                return e
        raise KeyError(t)


def check_cocycle(fam: GluingFamily) -> CocycleReport:
    """Decide the cocycle condition.

    Clause one asks that both orders of pushing a kernel through an overlap
    give the same ideal; clause two composes the induced quotient
    isomorphisms and is only evaluable on triples where clause one holds,
    because otherwise the compositions do not even share a codomain.
    """
    fam.require_valid()
    labels = sorted(fam.labels)
    kernels = {
        (i, j): kernel(fam.map(i, j).matrix)
        for i in labels
        for j in labels
        if i != j
    }
    cond1: list[KernelImageEntry] = []
    cond1_by_triple: dict[tuple[str, str, str], bool] = {}
    for i, j, k in itertools.permutations(labels, 3):
        lhs = image(fam.map(i, j).matrix, kernels[(i, k)])
        rhs = image(fam.map(j, i).matrix, kernels[(j, k)])
        entry = KernelImageEntry((i, j, k), lhs, rhs, lhs == rhs)
        cond1.append(entry)
        cond1_by_triple[(i, j, k)] = entry.equal
    cond1.sort(key=lambda e: e.triple)

    cond2: list[TransitionEntry] = []
    tq: dict[tuple[str, str, str], TripleQuotients] = {}

    def transition(a: str, b: str, c: str) -> Matrix:
        # phi(a<-b over c): classes in B_b/(ker+ker) to classes in B_a/(ker+ker)
        for t in ((a, b, c), (b, a, c)):
            if t not in tq:
                tq[t] = _triple_quotients(fam, *t, kernels=kernels)
        return tq[(a, b, c)].iso_inv @ tq[(b, a, c)].iso

    for trio in itertools.combinations(labels, 3):
        evaluable = all(cond1_by_triple[t] for t in itertools.permutations(trio, 3))
        for i, j, k in itertools.permutations(trio, 3):
            if not evaluable:
                cond2.append(TransitionEntry((i, j, k), "not evaluable"))
                continue
            lhs = transition(i, k, j)
            rhs = transition(i, j, k) @ transition(j, k, i)
            cond2.append(TransitionEntry((i, j, k), "ok" if lhs == rhs else "fail", lhs, rhs))
    cond2.sort(key=lambda e: e.triple)

    overall = all(e.equal for e in cond1) and all(e.status == "ok" for e in cond2)
    return CocycleReport(tuple(cond1), tuple(cond2), overall)


@dataclass(frozen=True)
class EquivalenceReport:
    """The three verdicts that are provably equivalent for distributive
    families; disagreement is flagged as a tool bug, never as a finding."""

    cocycle: CocycleReport
    all_extensions: ExtensionReport
    pairwise_extensions: ExtensionReport
    verdicts: tuple[bool, bool, bool]
    consistent: bool
    note: str = ""


def check_theorem_equivalence(fam: GluingFamily, max_indices: int = DEFAULT_MAX_INDICES,
                              lattice_cap: int = DEFAULT_CAP) -> EquivalenceReport:
    fam.require_valid(require_surjective=False)
    hypothesis = check_distributive_family(fam, cap=lattice_cap)
    if hypothesis.surjectivity_failures:
        i, j = hypothesis.surjectivity_failures[0]
        raise HypothesisNotMet(f"map ({i}, {j}) is not surjective", hypothesis)
    if not hypothesis.ok:
        for piece in hypothesis.per_piece:
            if piece.verdict.status == "indeterminate":
                raise HypothesisNotMet(
                    f"kernel lattice of piece {piece.label} hit the closure cap; "
                    "distributivity undecided",
                    hypothesis,
                )
            if piece.verdict.status == "not-distributive" or not piece.all_ideals:
                raise HypothesisNotMet(
                    f"kernels do not generate a distributive lattice of ideals in piece {piece.label}",
                    hypothesis,
                )
        raise HypothesisNotMet("family is not distributive", hypothesis)
    cocycle = check_cocycle(fam)
    all_ext = check_condition2(fam, max_indices)
    pair_ext = check_condition3(fam)
    verdicts = (cocycle.overall, all_ext.ok, pair_ext.ok)
    consistent = len(set(verdicts)) == 1
    note = "" if consistent else (
        "TOOL BUG: the three verdicts must agree for a distributive family "
        f"but were {verdicts}"
    )
    return EquivalenceReport(cocycle, all_ext, pair_ext, verdicts, consistent, note)


@dataclass(frozen=True)
class RepairedFamily:
    """Canonical re-presentation of a pullback as a cocycle-satisfying family.

    Pieces keep their original coordinates via the isomorphism with the
    pullback modulo the corresponding projection kernel; overlaps are the
    pullback modulo sums of two projection kernels.
    """

    family: GluingFamily
    pullback: MultiPullback
    projection_kernels: Mapping[str, Subspace]
    piece_isos: Mapping[str, Matrix]
    cocycle: CocycleReport


def repair(fam: GluingFamily, lattice_cap: int = DEFAULT_CAP) -> RepairedFamily:
    """Re-present the pullback through its canonical projection quotients.

    Requires every projection of the pullback onto a piece to be surjective
    and the projection kernels to generate a distributive lattice inside
    the pullback algebra; refuses with a diagnosis otherwise.  The result
    is checked to satisfy the cocycle condition and to have a pullback
    canonically isomorphic to the original one.
    """
    p = build_pullback(fam)
    for i in sorted(p.over):
        ok, img = projection_surjective(p, i)
        if not ok:
            raise RepairRefused(
                f"projection onto piece {i} is not surjective "
                f"(image has dimension {img.dim} of {fam.pieces[i].dim})",
                projection=i,
            )
    proj_homs = {i: AlgebraHom(p.algebra, fam.pieces[i], p.projections[i]) for i in p.over}
    kernels = {i: kernel_ideal(proj_homs[i]).subspace for i in p.over}
    closure = generate_lattice([kernels[i] for i in sorted(p.over)], cap=lattice_cap)
    verdict = is_distributive(closure)
    if verdict.status == "indeterminate":
        raise RepairRefused(
            f"projection-kernel lattice exceeded the closure cap ({lattice_cap}); "
            "distributivity undecided"
        )
    if verdict.status == "not-distributive":
        raise RepairRefused(
            "projection kernels do not generate a distributive lattice",
            witness=verdict.witness,
        )

    lifts: dict[str, Matrix] = {}
    isos: dict[str, Matrix] = {}
    for i in p.over:
        chart = quotient(p.dim, kernels[i])
        iso = p.projections[i] @ chart.section
        isos[i] = iso
        lifts[i] = chart.section @ invert(iso)

    overlaps: dict[tuple[str, str], Algebra] = {}
    maps: dict[tuple[str, str], AlgebraHom] = {}
    for i, j in itertools.combinations(sorted(p.over), 2):
        ksum = subspace_sum(kernels[i], kernels[j])
        overlap_q, osurj = quotient_algebra(p.algebra, Ideal(ksum), label=f"pullback/({i}+{j})")
        overlaps[pair_key(i, j)] = overlap_q
        maps[(i, j)] = AlgebraHom(fam.pieces[i], overlap_q, osurj.matrix @ lifts[i])
        maps[(j, i)] = AlgebraHom(fam.pieces[j], overlap_q, osurj.matrix @ lifts[j])

    repaired = GluingFamily(fam.labels, dict(fam.pieces), overlaps, maps)
    repaired.require_valid()

    cocycle = check_cocycle(repaired)
    if not cocycle.overall:
        raise StructuralError("re-presented family fails the cocycle condition; this is a tool bug")

    comparison = Matrix.vstack([p.projections[i] for i in repaired.labels if i in p.over], cols=p.dim)
    repaired_sub = pullback_subspace(repaired)
    comparison_image = image(comparison, Subspace.full(p.dim))
    if comparison_image != repaired_sub or kernel(comparison).dim != 0:
        raise StructuralError(
            "canonical comparison with the re-presented pullback is not bijective; this is a tool bug"
        )
    return RepairedFamily(repaired, p, kernels, isos, cocycle)
