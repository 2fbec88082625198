"""Finitely presented graded modules, free resolutions, Hom complexes, Ext.

Conventions.  A GradedMatrix maps its source free module into its target;
column j is the image of source generator j.  A module is the cokernel of
its presentation.  In graded mode every nonzero entry (i, j) is homogeneous
of degree source_twist_j - target_twist_i, which is exactly the degree-0
morphism condition.  Resolutions live in cohomological degrees -L..0.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import inf

from .errors import AmbientMismatchError, InternalError, ValidationError
from .groebner import (
    FreeModule,
    GroebnerBasis,
    ModuleElement,
    buchberger,
    hilbert_profile,
    standard_monomial_count,
    syzygies,
)
from .poly import GradedRing


@dataclass(frozen=True)
class DegreeViolation:
    row: int
    col: int
    expected: int
    found: int

    def __str__(self):
        return (
            f"entry ({self.row},{self.col}) must be homogeneous of degree "
            f"{self.expected}, found degree {self.found}"
        )


class GradedMatrix:
    """A matrix of polynomials acting target <- source, column per source generator."""

    __slots__ = ("source", "target", "entries")

    def __init__(self, source: FreeModule, target: FreeModule, entries):
        if source.ring != target.ring:
            raise AmbientMismatchError("matrix source and target rings differ")
        entries = tuple(tuple(row) for row in entries)
        if len(entries) != target.rank or any(len(r) != source.rank for r in entries):
            raise ValidationError(
                f"matrix shape {len(entries)}x{len(entries[0]) if entries else 0} does not "
                f"match target rank {target.rank} and source rank {source.rank}"
            )
        for row in entries:
            for p in row:
                if p.ring != source.ring:
                    raise AmbientMismatchError("matrix entry in a different ring")
        self.source = source
        self.target = target
        self.entries = entries

    @property
    def ring(self) -> GradedRing:
        return self.source.ring

    def validate_graded(self) -> DegreeViolation | None:
        """First degree violation of the degree-0 morphism condition, or None."""
        for i in range(self.target.rank):
            for j in range(self.source.rank):
                p = self.entries[i][j]
                if not p:
                    continue
                expected = self.source.twists[j] - self.target.twists[i]
                found = p.homogeneous_degree()
                if found != expected:
                    shown = -1 if found is None else found
                    return DegreeViolation(i, j, expected, shown)
        return None

    def column(self, j: int) -> ModuleElement:
        return self.target.element([self.entries[i][j] for i in range(self.target.rank)])

    def columns(self):
        return [self.column(j) for j in range(self.source.rank)]

    def apply(self, el: ModuleElement) -> ModuleElement:
        if el.module != self.source:
            raise AmbientMismatchError("element is not in the matrix source")
        out = []
        for i in range(self.target.rank):
            acc = self.ring.zero
            for j in range(self.source.rank):
                if self.entries[i][j] and el.components[j]:
                    acc = acc + self.entries[i][j] * el.components[j]
            out.append(acc)
        return self.target.element(out)

    def compose(self, other: "GradedMatrix") -> "GradedMatrix":
        """self o other, defined when other.target == self.source."""
        if other.target != self.source:
            raise AmbientMismatchError("composition shape mismatch")
        zero = self.ring.zero
        rows = []
        for i in range(self.target.rank):
            row = []
            for j in range(other.source.rank):
                acc = zero
                for m in range(self.source.rank):
                    a = self.entries[i][m]
                    b = other.entries[m][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            rows.append(row)
        return GradedMatrix(other.source, self.target, rows)

    def is_zero(self) -> bool:
        return all(not p for row in self.entries for p in row)

    def __repr__(self):
        return f"GradedMatrix({self.target.rank}x{self.source.rank} over {self.ring!r})"


def validate_graded_matrix(matrix: GradedMatrix) -> DegreeViolation | None:
    return matrix.validate_graded()


def matrix_from_columns(target: FreeModule, cols, source_twists=None) -> GradedMatrix:
    """Assemble a matrix whose columns are the given target elements."""
    cols = list(cols)
    if source_twists is None:
        source_twists = []
        for c in cols:
            d = c.internal_degree()
            source_twists.append(0 if d is None else d)
    source = FreeModule(target.ring, source_twists)
    entries = [[c.components[i] for c in cols] for i in range(target.rank)]
    return GradedMatrix(source, target, entries)


class FPModule:
    """Cokernel of a presentation matrix, graded or ungraded."""

    __slots__ = ("presentation", "mode", "_gb", "_resolution")

    def __init__(self, presentation: GradedMatrix, mode: str = "graded"):
        if mode not in ("graded", "ungraded"):
            raise ValidationError(f"unknown module mode {mode!r}")
        if mode == "graded":
            violation = presentation.validate_graded()
            if violation is not None:
                raise ValidationError(f"presentation is not graded: {violation}")
        self.presentation = presentation
        self.mode = mode
        self._gb = None
        self._resolution = None

    @property
    def ring(self) -> GradedRing:
        return self.presentation.ring

    @property
    def ambient(self) -> FreeModule:
        return self.presentation.target

    @property
    def generators(self):
        return self.presentation.target.twists

    def relations_gb(self) -> GroebnerBasis:
        if self._gb is None:
            cols = [c for c in self.presentation.columns() if c]
            self._gb = buchberger(cols, self.ambient)
        return self._gb

    def is_zero(self) -> bool:
        if self.ambient.rank == 0:
            return True
        gb = self.relations_gb()
        return all(
            gb.contains(self.ambient.basis_element(i))
            for i in range(self.ambient.rank)
        )

    def hilbert(self, lo: int, hi: int):
        if self.mode != "graded":
            raise ValidationError("Hilbert profiles require graded mode")
        return hilbert_profile(self.ambient, self.relations_gb(), lo, hi)

    def floor(self) -> int:
        """Every graded piece below this degree vanishes."""
        if self.ambient.rank == 0:
            return 0
        return min(self.ambient.twists)

    def k_dimension(self):
        """Total dimension over the coefficient field; may be inf."""
        if self.ambient.rank == 0:
            return 0
        return standard_monomial_count(self.ambient, self.relations_gb())

    def twist(self, n: int) -> "FPModule":
        """Serre twist: shifts every internal degree down by n."""
        src = FreeModule(self.ring, [t - n for t in self.presentation.source.twists])
        tgt = FreeModule(self.ring, [t - n for t in self.presentation.target.twists])
        return FPModule(GradedMatrix(src, tgt, self.presentation.entries), self.mode)

    def ungraded(self) -> "FPModule":
        if self.mode == "ungraded":
            return self
        return FPModule(self.presentation, "ungraded")

    def __repr__(self):
        return (
            f"FPModule({self.mode}, gens={list(self.generators)}, "
            f"rels={self.presentation.source.rank})"
        )


def free_fp(module: FreeModule, mode: str = "graded") -> FPModule:
    empty = GradedMatrix(FreeModule(module.ring, []), module, [[] for _ in range(module.rank)])
    return FPModule(empty, mode)


def zero_fp(ring: GradedRing, mode: str = "graded") -> FPModule:
    return free_fp(FreeModule(ring, []), mode)


def fp_quotient_by_ideal(ring: GradedRing, gens, mode: str = "graded") -> FPModule:
    """The cyclic module ring/(gens), generator in degree 0."""
    target = FreeModule(ring, [0])
    gens = [g for g in gens if g]
    twists = []
    for g in gens:
        d = g.homogeneous_degree()
        if mode == "graded":
            if d is None:
                raise ValidationError("graded cyclic quotient needs homogeneous generators")
            twists.append(d)
        else:
            twists.append(0)
    source = FreeModule(ring, twists)
    return FPModule(GradedMatrix(source, target, [list(gens)]), mode)


class FreeComplex:
    """A bounded complex of free modules with d(q): terms[q] -> terms[q+1]."""

    __slots__ = ("terms", "maps")

    def __init__(self, terms: dict, maps: dict, check: bool = True):
        self.terms = dict(terms)
        self.maps = dict(maps)
        if check:
            self._validate()

    def _validate(self):
        for q, d in self.maps.items():
            if q not in self.terms or (q + 1) not in self.terms:
                raise InternalError(f"differential at {q} without matching terms")
            if d.source != self.terms[q] or d.target != self.terms[q + 1]:
                raise InternalError(f"differential at {q} has wrong shape")
        for q, d in self.maps.items():
            nxt = self.maps.get(q + 1)
            if nxt is not None and not nxt.compose(d).is_zero():
                raise InternalError(f"d o d != 0 at degree {q}")

    def support(self):
        if not self.terms:
            return (0, -1)
        keys = sorted(self.terms)
        return (keys[0], keys[-1])

    def term(self, q: int) -> FreeModule | None:
        return self.terms.get(q)

    @property
    def length(self) -> int:
        lo, hi = self.support()
        return hi - lo

    def __repr__(self):
        lo, hi = self.support()
        shape = " -> ".join(
            f"F[{q}]({list(self.terms[q].twists)})" for q in range(lo, hi + 1)
        )
        return f"FreeComplex({shape})"


def _prune_units(entries, row_twists, col_twists, field):
    """Remove unit (nonzero constant) entries by column operations.

    Returns (entries, row_twists, col_twists, removed_rows): removed_rows are
    indices into the original rows, in removal order.  Column ops preserve the
    column span; once a row holds its only nonzero entry in a unit column, the
    row's generator is redundant and both are deleted.
    """
    entries = [list(row) for row in entries]
    row_twists = list(row_twists)
    col_twists = list(col_twists)
    removed_rows = []
    row_ids = list(range(len(row_twists)))
    while True:
        pivot = None
        for i, row in enumerate(entries):
            for j, p in enumerate(row):
                if p.terms and len(p.terms) == 1 and not any(p.terms[0][0]):
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        i, j = pivot
        pv = entries[i][j]
        inv = field.inv(pv.terms[0][1])
        for j2 in range(len(col_twists)):
            if j2 == j:
                continue
            c = entries[i][j2]
            if c:
                factor = c.scale(inv)
                for r in range(len(row_twists)):
                    entries[r][j2] = entries[r][j2] - factor * entries[r][j]
        removed_rows.append(row_ids[i])
        del row_ids[i]
        del row_twists[i]
        del col_twists[j]
        for row in entries:
            del row[j]
        del entries[i]
    return entries, row_twists, col_twists, removed_rows


def _minimalize_presentation(matrix: GradedMatrix):
    """Two-sided unit pruning plus zero-column removal; cokernel unchanged."""
    ring = matrix.ring
    field = ring.field
    entries = [list(row) for row in matrix.entries]
    tgt = list(matrix.target.twists)
    src = list(matrix.source.twists)
    changed = True
    while changed:
        changed = False
        # drop zero columns
        keep = [j for j in range(len(src)) if any(entries[i][j] for i in range(len(tgt)))]
        if len(keep) != len(src):
            src = [src[j] for j in keep]
            entries = [[row[j] for j in keep] for row in entries]
            changed = True
        pivot = None
        for i, row in enumerate(entries):
            for j, p in enumerate(row):
                if p.terms and len(p.terms) == 1 and not any(p.terms[0][0]):
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            continue
        i, j = pivot
        inv = field.inv(entries[i][j].terms[0][1])
        for j2 in range(len(src)):
            if j2 != j and entries[i][j2]:
                factor = entries[i][j2].scale(inv)
                for r in range(len(tgt)):
                    entries[r][j2] = entries[r][j2] - factor * entries[r][j]
        for i2 in range(len(tgt)):
            if i2 != i and entries[i2][j]:
                factor = entries[i2][j].scale(inv)
                for c in range(len(src)):
                    entries[i2][c] = entries[i2][c] - factor * entries[i][c]
        del tgt[i]
        del src[j]
        entries = [
            [row[c] for c in range(len(row)) if c != j]
            for r, row in enumerate(entries)
            if r != i
        ]
        changed = True
    new_tgt = FreeModule(ring, tgt)
    new_src = FreeModule(ring, src)
    return GradedMatrix(new_src, new_tgt, entries)


def free_resolution(module: FPModule, max_len: int | None = None) -> FreeComplex:
    """Free resolution ... -> F_2 -> F_1 -> F_0 in cohomological degrees -L..0.

    Unit entries are pruned at every step, so graded resolutions are minimal.
    Exceeding max_len raises InternalError, signalling an engine bug rather
    than bad input.
    """
    if module._resolution is not None:
        return module._resolution
    ring = module.ring
    if max_len is None:
        max_len = ring.nvars + 2
    elif max_len < ring.nvars + 1:
        raise ValidationError(
            f"max_len must be at least nvars + 1 = {ring.nvars + 1}"
        )
    pres = _minimalize_presentation(module.presentation)
    terms = {0: pres.target}
    maps = {}
    entries = [list(row) for row in pres.entries]
    row_twists = list(pres.target.twists)
    col_twists = list(pres.source.twists)
    level = 0
    while col_twists:
        level += 1
        if level > max_len:
            raise InternalError(f"free resolution exceeded max_len={max_len}")
        source = FreeModule(ring, col_twists)
        current = GradedMatrix(source, terms[-(level - 1)], entries)
        terms[-level] = source
        maps[-level] = current
        cols = current.columns()
        syz = [s for s in syzygies(cols, current.target) if s]
        syz_entries = [
            [s.components[i] for s in syz] for i in range(len(col_twists))
        ]
        syz_twists = []
        for s in syz:
            d = s.internal_degree()
            syz_twists.append(0 if d is None else d)
        pruned, kept_rows, new_cols, removed = _prune_units(
            syz_entries, col_twists, syz_twists, ring.field
        )
        if removed:
            # removed rows name redundant columns of the current differential
            alive = [j for j in range(len(col_twists)) if j not in removed]
            col_twists = [col_twists[j] for j in alive]
            entries = [[row[j] for j in alive] for row in entries]
            source = FreeModule(ring, col_twists)
            current = GradedMatrix(source, terms[-(level - 1)], entries)
            terms[-level] = source
            maps[-level] = current
        entries = pruned
        row_twists = kept_rows
        col_twists = new_cols
    module._resolution = FreeComplex(terms, maps)
    return module._resolution


class InducedComplex:
    """A complex whose q-th term is a direct sum of shifted copies of one module.

    term(q) = (+)_j N<s_j> with s_j = shifts[q][j], where N<s> adds s to every
    internal degree of N.  maps[q] is a polynomial matrix term(q) -> term(q+1)
    acting by multiplication between the copies.
    """

    __slots__ = ("base", "shifts", "maps")

    def __init__(self, base: FPModule, shifts: dict, maps: dict, check: bool = True):
        self.base = base
        self.shifts = {q: tuple(s) for q, s in shifts.items()}
        self.maps = dict(maps)
        if check and base.mode == "graded":
            self._validate()

    def _validate(self):
        for q, mat in self.maps.items():
            src = self.shifts.get(q)
            tgt = self.shifts.get(q + 1)
            if src is None or tgt is None:
                raise InternalError(f"induced map at {q} without terms")
            for i, row in enumerate(mat):
                for j, p in enumerate(row):
                    if p and p.homogeneous_degree() != src[j] - tgt[i]:
                        raise InternalError(
                            f"induced map entry ({i},{j}) at degree {q} is not "
                            f"homogeneous of degree {src[j]}-{tgt[i]}"
                        )

    def support(self):
        if not self.shifts:
            return (0, -1)
        keys = sorted(self.shifts)
        return (keys[0], keys[-1])


def hom_complex(complex_: FreeComplex, module: FPModule) -> InducedComplex:
    """Hom(C, N) for a bounded free complex C; term q is Hom(C^{-q}, N).

    Hom(A(-t), N) = N<-t>, and the induced maps are transposed differentials
    acting by multiplication.
    """
    lo, hi = complex_.support()
    shifts = {}
    maps = {}
    for q in range(lo, hi + 1):
        shifts[-q] = [-t for t in complex_.terms[q].twists]
    for q, d in complex_.maps.items():
        # d: C^q -> C^{q+1} induces term(-q-1) -> term(-q) by transposition
        rows = d.source.rank
        cols = d.target.rank
        maps[-(q + 1)] = [
            [d.entries[j][i] for j in range(cols)] for i in range(rows)
        ]
    return InducedComplex(module, shifts, maps)


def complex_as_induced(complex_: FreeComplex, mode: str = "graded") -> InducedComplex:
    """View a free complex as an induced complex over the rank-one free module."""
    ring = None
    for term in complex_.terms.values():
        ring = term.ring
        break
    if ring is None:
        raise ValidationError("empty complex")
    base = free_fp(FreeModule(ring, [0]), mode)
    shifts = {q: list(term.twists) for q, term in complex_.terms.items()}
    maps = {q: [list(row) for row in d.entries] for q, d in complex_.maps.items()}
    return InducedComplex(base, shifts, maps)


def _lifted_matrix(ic: InducedComplex, q: int):
    """Kronecker lift of maps[q] to the free covers of term(q), term(q+1)."""
    base = ic.base
    g0 = base.ambient.rank
    src_blocks = len(ic.shifts[q])
    tgt_blocks = len(ic.shifts[q + 1])
    mat = ic.maps[q]
    zero = base.ring.zero
    rows = []
    for i in range(tgt_blocks):
        for a in range(g0):
            row = []
            for j in range(src_blocks):
                for b in range(g0):
                    row.append(mat[i][j] if a == b else zero)
            rows.append(row)
    return rows


def _cover(ic: InducedComplex, q: int) -> FreeModule:
    base = ic.base
    twists = []
    for s in ic.shifts[q]:
        twists.extend(t + s for t in base.ambient.twists)
    return FreeModule(base.ring, twists)


def _relations_in_cover(ic: InducedComplex, q: int, cover: FreeModule):
    """Columns of the block-diagonal lifted presentation of term(q)."""
    base = ic.base
    g0 = base.ambient.rank
    pres = base.presentation
    cols = []
    for blk in range(len(ic.shifts[q])):
        for j in range(pres.source.rank):
            comps = [base.ring.zero] * cover.rank
            for i in range(g0):
                comps[blk * g0 + i] = pres.entries[i][j]
            cols.append(cover.element(comps))
    return cols


def cohomology_at(ic: InducedComplex, q: int) -> FPModule:
    """Subquotient presentation of ker(maps[q]) / im(maps[q-1]); exact."""
    mode = ic.base.mode
    ring = ic.base.ring
    if q not in ic.shifts:
        return zero_fp(ring, mode)
    cover = _cover(ic, q)
    rels_q = _relations_in_cover(ic, q, cover)

    if (q + 1) in ic.shifts:
        cover_next = _cover(ic, q + 1)
        lifted = _lifted_matrix(ic, q)
        out_cols = []
        for j in range(cover.rank):
            comps = [lifted[i][j] for i in range(cover_next.rank)]
            out_cols.append(cover_next.element(comps))
        rels_next = _relations_in_cover(ic, q + 1, cover_next)
        family = out_cols + rels_next
        kernel_gens = []
        for s in syzygies(family, cover_next):
            v = cover.element(s.components[: cover.rank])
            if v:
                kernel_gens.append(v)
    else:
        kernel_gens = [cover.basis_element(i) for i in range(cover.rank)]

    if (q - 1) in ic.shifts:
        cover_prev = _cover(ic, q - 1)
        lifted_prev = _lifted_matrix(ic, q - 1)
        image_gens = []
        for j in range(cover_prev.rank):
            comps = [lifted_prev[i][j] for i in range(cover.rank)]
            el = cover.element(comps)
            if el:
                image_gens.append(el)
    else:
        image_gens = []

    family = kernel_gens + image_gens + rels_q
    k = len(kernel_gens)
    relations = []
    for s in syzygies(family, cover):
        head = s.components[:k]
        if any(head):
            relations.append(head)
    gen_twists = []
    for g in kernel_gens:
        d = g.internal_degree()
        gen_twists.append(0 if d is None else d)
    target = FreeModule(ring, gen_twists)
    rel_twists = []
    rel_cols = []
    for head in relations:
        el = target.element(head)
        d = el.internal_degree()
        rel_twists.append(0 if d is None else d)
        rel_cols.append(el)
    source = FreeModule(ring, rel_twists)
    entries = [[c.components[i] for c in rel_cols] for i in range(target.rank)]
    return FPModule(GradedMatrix(source, target, entries), mode)


@dataclass
class ExtProfile:
    """Exact shape of one Ext group: vanishing flag plus dimension data."""

    q: int
    vanishes: bool
    dims: dict | None = None   # graded mode: internal degree -> dimension
    total: object = None       # ungraded mode: int or inf

    def nonzero(self) -> bool:
        return not self.vanishes


def ext_modules(first: FPModule, second: FPModule, qmax: int, max_len=None):
    """Ext^q(first, second) for q = 0..qmax, each as a finitely presented module.

    Computed from a free resolution of the first argument; bounded-above free
    complexes are honest RHom representatives, so this is exact.
    """
    if first.ring != second.ring:
        raise AmbientMismatchError("Ext arguments live over different rings")
    if first.mode != second.mode:
        raise ValidationError("Ext arguments must share graded/ungraded mode")
    resolution = free_resolution(first, max_len)
    ic = hom_complex(resolution, second)
    return [cohomology_at(ic, q) for q in range(qmax + 1)]


def ext_profile(first, second, q: int, window=None, max_len=None) -> ExtProfile:
    if q < 0:
        raise ValidationError("Ext index must be nonnegative")
    module = ext_modules(first, second, q, max_len)[q]
    return profile_of(module, q, window)


def profile_of(module: FPModule, q: int, window=None) -> ExtProfile:
    vanishes = module.is_zero()
    if module.mode == "graded":
        lo, hi = window if window is not None else (-20, 20)
        dims = module.hilbert(lo, hi)
        return ExtProfile(q=q, vanishes=vanishes, dims=dims)
    total = 0 if vanishes else module.k_dimension()
    return ExtProfile(q=q, vanishes=vanishes, total=total)


def ext_vanishes_above(first: FPModule, second: FPModule, q0: int, max_len=None) -> bool:
    """True iff Ext^q(first, second) = 0 for all q > q0 within the resolution bound."""
    resolution = free_resolution(first, max_len)
    top = resolution.length
    if q0 >= top:
        return True
    modules = ext_modules(first, second, top, max_len)
    return all(modules[q].is_zero() for q in range(q0 + 1, top + 1))
