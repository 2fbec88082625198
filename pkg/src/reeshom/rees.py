"""Rees rings for the degree filtration, Rees modules, and the specializations
sp0 (associated graded direction) and sp1 (forget the filtration).

The Rees ring of a weighted polynomial ring is again a weighted polynomial
ring with one extra degree-1 variable; under that identification the Rees
module of a graded module keeps its presentation verbatim, and a good
filtration is handled by homogenizing the presentation and saturating away
the torsion of the extra variable.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .groebner import FreeModule, buchberger, module_quotient, saturate, syzygies
from .homalg import (
    FPModule,
    FreeComplex,
    GradedMatrix,
    matrix_from_columns,
)
from .poly import GradedRing, Polynomial, homogenize, substitute


@dataclass(frozen=True)
class ReesRing:
    """Base ring A, total ring A~ = A[t-direction], and the index of the
    degree-1 homogenization variable (always the last one)."""

    base: GradedRing
    total: GradedRing

    @property
    def rees_index(self) -> int:
        return self.base.nvars

    @property
    def rees_variable(self) -> Polynomial:
        return self.total.variable(self.rees_index)

    def base_images_in_total(self):
        return [self.total.variable(i) for i in range(self.base.nvars)]


def _fresh_name(taken):
    for candidate in ("t", "T"):
        if candidate not in taken:
            return candidate
    i = 0
    while f"t{i}" in taken:
        i += 1
    return f"t{i}"


def rees_ring(base: GradedRing) -> ReesRing:
    """The Rees ring of the degree filtration, as a weighted polynomial ring.

    dim of the degree-e piece equals the number of base monomials of degree
    at most e, which pins the identification down.
    """
    name = _fresh_name(set(base.names))
    variables = list(zip(base.names, base.weights)) + [(name, 1)]
    total = GradedRing(base.field, variables, base.order)
    return ReesRing(base, total)


def to_total(rr: ReesRing, p: Polynomial) -> Polynomial:
    """Embed a base polynomial into the total ring without homogenizing."""
    if p.ring != rr.base:
        raise ValidationError("polynomial does not live in the base ring")
    return rr.total.poly({e + (0,): c for e, c in p.terms})


@dataclass
class ReesModuleData:
    """A module over the total ring together with its origin downstairs."""

    tilde: FPModule
    origin: FPModule
    kind: str  # "graded-rs" | "good-filtration-rs"
    rees: ReesRing

    def t_regularity_certificate(self) -> bool:
        """True iff multiplication by the Rees variable is injective."""
        return t_regular(self.rees, self.tilde)


def t_regular(rr: ReesRing, tilde: FPModule) -> bool:
    gb = tilde.relations_gb()
    quot = module_quotient(gb, rr.rees_variable)
    return all(gb.contains(v) for v in quot.elements)


def rees_module(rr: ReesRing, module: FPModule, filtration=None) -> ReesModuleData:
    """The Rees module of `module`.

    Graded module, no filtration argument: the canonical degree filtration;
    the presentation transfers verbatim and the Rees variable is
    automatically regular.  Ungraded module with generator filtration
    degrees: homogenize each presentation entry to the forced degree, then
    saturate the relation span by the Rees variable.
    """
    if module.ring != rr.base:
        raise ValidationError("module does not live over the base ring")
    if module.mode == "graded":
        if filtration is not None:
            raise ValidationError("the canonical graded case takes no filtration degrees")
        pres = module.presentation
        src = FreeModule(rr.total, pres.source.twists)
        tgt = FreeModule(rr.total, pres.target.twists)
        entries = [[to_total(rr, p) for p in row] for row in pres.entries]
        tilde = FPModule(GradedMatrix(src, tgt, entries), "graded")
        return ReesModuleData(tilde, module, "graded-rs", rr)

    if filtration is None:
        raise ValidationError(
            "inhomogeneous generators need filtration degrees for a Rees module"
        )
    pres = module.presentation
    gen_degrees = [int(c) for c in filtration]
    if len(gen_degrees) != pres.target.rank:
        raise ValidationError("one filtration degree per generator is required")
    base_deg = rr.base.degree_of
    cols = []
    col_degrees = []
    for j in range(pres.source.rank):
        column = [pres.entries[i][j] for i in range(pres.target.rank)]
        if not any(column):
            continue
        level = max(
            base_deg(max(p.terms, key=lambda item: base_deg(item[0]))[0]) + gen_degrees[i]
            for i, p in enumerate(column)
            if p
        )
        col_degrees.append(level)
        cols.append(column)
    tgt = FreeModule(rr.total, gen_degrees)
    elements = []
    for level, column in zip(col_degrees, cols):
        comps = []
        for i, p in enumerate(column):
            if p:
                comps.append(homogenize(p, rr.total, to_degree=level - gen_degrees[i]))
            else:
                comps.append(rr.total.zero)
        elements.append(tgt.element(comps))
    if elements:
        saturated = saturate(buchberger(elements, tgt), rr.rees_variable)
        pres_matrix = matrix_from_columns(tgt, list(saturated.elements))
    else:
        pres_matrix = matrix_from_columns(tgt, [])
    tilde = FPModule(pres_matrix, "graded")
    return ReesModuleData(tilde, module, "good-filtration-rs", rr)


def _substituted_module(rr: ReesRing, tilde: FPModule, t_image: Polynomial, mode: str,
                        keep_twists: bool) -> FPModule:
    images = [rr.base.variable(i) for i in range(rr.base.nvars)] + [t_image]
    pres = tilde.presentation
    cols = []
    col_twists = []
    for j in range(pres.source.rank):
        column = [
            substitute(pres.entries[i][j], images, rr.base)
            for i in range(pres.target.rank)
        ]
        if any(column):
            cols.append(column)
            col_twists.append(pres.source.twists[j])
    if keep_twists:
        tgt = FreeModule(rr.base, pres.target.twists)
        src = FreeModule(rr.base, col_twists)
    else:
        tgt = FreeModule(rr.base, (0,) * pres.target.rank)
        src = FreeModule(rr.base, (0,) * len(cols))
    entries = [[c[i] for c in cols] for i in range(pres.target.rank)]
    return FPModule(GradedMatrix(src, tgt, entries), mode)


def sp0(rr: ReesRing, tilde: FPModule) -> FPModule:
    """Specialize the Rees variable to 0; graded over the base ring."""
    return _substituted_module(rr, tilde, rr.base.zero, "graded", keep_twists=True)


def sp1(rr: ReesRing, tilde: FPModule) -> FPModule:
    """Specialize the Rees variable to 1; the grading is forgotten."""
    return _substituted_module(rr, tilde, rr.base.one, "ungraded", keep_twists=False)


def sp0_complex(rr: ReesRing, complex_: FreeComplex) -> FreeComplex:
    """Apply sp0 to every term of a free complex over the total ring."""
    images = [rr.base.variable(i) for i in range(rr.base.nvars)] + [rr.base.zero]
    terms = {
        q: FreeModule(rr.base, term.twists) for q, term in complex_.terms.items()
    }
    maps = {}
    for q, d in complex_.maps.items():
        entries = [
            [substitute(p, images, rr.base) for p in row] for row in d.entries
        ]
        maps[q] = GradedMatrix(terms[q], terms[q + 1], entries)
    return FreeComplex(terms, maps)


def t_annihilator(rr: ReesRing, tilde: FPModule) -> FPModule:
    """The kernel of multiplication by the Rees variable, as a module over
    the total ring presented by generators and relations."""
    gb = tilde.relations_gb()
    ambient = tilde.ambient
    quot = module_quotient(gb, rr.rees_variable)
    gens = list(quot.elements)
    family = gens + list(gb.elements)
    relations = []
    for s in syzygies(family, ambient) if family else []:
        head = s.components[: len(gens)]
        if any(head):
            relations.append(head)
    gen_twists = []
    for g in gens:
        d = g.internal_degree()
        gen_twists.append(0 if d is None else d)
    target = FreeModule(rr.total, gen_twists)
    cols = [target.element(head) for head in relations]
    return FPModule(matrix_from_columns(target, cols), "graded")


def lsp0(rr: ReesRing, tilde: FPModule):
    """Derived specialization at 0 of a single module, via the two-term
    complex given by multiplication with the Rees variable.

    Returns (H_minus1, H_0) over the base ring: H_0 is the plain
    specialization and H_minus1 is the Rees-variable annihilator twisted one
    step, then specialized.  Both vanish outside these two spots.
    """
    h0 = sp0(rr, tilde)
    ann = t_annihilator(rr, tilde)
    ann_twisted = ann.twist(-1)
    hm1 = sp0(rr, ann_twisted)
    return hm1, h0


def associated_graded(module: FPModule, gen_degrees) -> FPModule:
    """gr of a good filtration given by generator degrees: top weighted-degree
    forms of a Groebner basis of the relation span, with weighted-degree
    compatible orders this is exact."""
    ring = module.ring
    gen_degrees = [int(c) for c in gen_degrees]
    if len(gen_degrees) != module.ambient.rank:
        raise ValidationError("one filtration degree per generator is required")
    if ring.order.base != "grevlex":
        raise ValidationError("associated graded needs a degree-compatible order")
    gb = buchberger(
        [c for c in module.presentation.columns() if c], module.ambient
    )
    deg = ring.degree_of
    target = FreeModule(ring, gen_degrees)
    tops = []
    for el in gb.elements:
        level = max(
            deg(e) + gen_degrees[i]
            for i, p in enumerate(el.components)
            if p
            for e, _ in p.terms
        )
        comps = []
        for i, p in enumerate(el.components):
            keep = {e: c for e, c in p.terms if deg(e) + gen_degrees[i] == level}
            comps.append(ring.poly(keep))
        tops.append(target.element(comps))
    return FPModule(matrix_from_columns(target, tops), "graded")
