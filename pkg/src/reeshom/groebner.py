"""Groebner bases for submodules of free modules, with syzygy certificates.

The engine works on "vectors": dicts mapping (component, exponents) to a
nonzero coefficient.  Term comparison is position-over-term: the component
with the smaller priority rank dominates, ties are broken by the ring's
monomial order.  Syzygies come from a single completion run on the module
augmented by one marker component per input generator; position-over-term
makes the original components an elimination block, so completed elements
with vanishing original part generate (indeed form a basis of) the syzygy
module, while the other elements restrict to a reduced basis of the span.
"""
from __future__ import annotations

import heapq
from math import inf

from .errors import AmbientMismatchError, InternalError, ValidationError
from .poly import GradedRing, Polynomial

SATURATION_CAP = 64


class FreeModule:
    """A finite-rank free module; component i has its generator in degree twists[i]."""

    __slots__ = ("ring", "twists")

    def __init__(self, ring: GradedRing, twists):
        self.ring = ring
        self.twists = tuple(int(t) for t in twists)

    @property
    def rank(self) -> int:
        return len(self.twists)

    def element(self, polys) -> "ModuleElement":
        polys = tuple(polys)
        if len(polys) != self.rank:
            raise AmbientMismatchError(
                f"expected {self.rank} components, got {len(polys)}"
            )
        for p in polys:
            if p.ring != self.ring:
                raise AmbientMismatchError("component ring does not match the module")
        return ModuleElement(self, polys)

    def zero(self) -> "ModuleElement":
        z = self.ring.zero
        return ModuleElement(self, (z,) * self.rank)

    def basis_element(self, i: int, poly: Polynomial | None = None) -> "ModuleElement":
        if poly is None:
            poly = self.ring.one
        comps = [self.ring.zero] * self.rank
        comps[i] = poly
        return ModuleElement(self, tuple(comps))

    def __eq__(self, other):
        return (
            isinstance(other, FreeModule)
            and self.ring == other.ring
            and self.twists == other.twists
        )

    def __hash__(self):
        return hash((self.ring, self.twists))

    def __repr__(self):
        return f"Free({self.ring!r}, twists={list(self.twists)})"


class ModuleElement:
    """A tuple of polynomials, one per component of a free module."""

    __slots__ = ("module", "components")

    def __init__(self, module: FreeModule, components):
        self.module = module
        self.components = components

    def __bool__(self):
        return any(self.components)

    def __eq__(self, other):
        return (
            isinstance(other, ModuleElement)
            and self.module == other.module
            and self.components == other.components
        )

    def __hash__(self):
        return hash((self.module, self.components))

    def __add__(self, other):
        self._check(other)
        return ModuleElement(
            self.module,
            tuple(a + b for a, b in zip(self.components, other.components)),
        )

    def __sub__(self, other):
        self._check(other)
        return ModuleElement(
            self.module,
            tuple(a - b for a, b in zip(self.components, other.components)),
        )

    def __neg__(self):
        return ModuleElement(self.module, tuple(-a for a in self.components))

    def scale(self, c):
        return ModuleElement(self.module, tuple(a.scale(c) for a in self.components))

    def poly_mul(self, p: Polynomial):
        return ModuleElement(self.module, tuple(p * a for a in self.components))

    def _check(self, other):
        if self.module != other.module:
            raise AmbientMismatchError("ambient free modules differ")

    def internal_degree(self):
        """Common internal degree (component degree + twist); None if mixed or zero."""
        degrees = set()
        for p, t in zip(self.components, self.module.twists):
            d = p.homogeneous_degree()
            if d is None:
                return None
            if p:
                degrees.add(d + t)
        if len(degrees) != 1:
            return None
        return degrees.pop()

    def __repr__(self):
        return "(" + ", ".join(str(p) for p in self.components) + ")"


# ---------------------------------------------------------------------------
# internal vector representation

def _vec_of(element: ModuleElement) -> dict:
    vec = {}
    for i, p in enumerate(element.components):
        for e, c in p.terms:
            vec[(i, e)] = c
    return vec


def _element_of(vec: dict, module: FreeModule) -> ModuleElement:
    per_comp = [{} for _ in range(module.rank)]
    for (i, e), c in vec.items():
        per_comp[i][e] = c
    return ModuleElement(
        module, tuple(module.ring.poly(d) for d in per_comp)
    )


def _keyfn(ring: GradedRing, priority=None):
    base = ring.key
    if priority is None:
        def key(term):
            return (-term[0], base(term[1]))
    else:
        rank_of = {comp: r for r, comp in enumerate(priority)}

        def key(term):
            return (-rank_of[term[0]], base(term[1]))
    return key


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _reduce_vec(vec: dict, leads, vecs, field, key):
    """Full normal form of `vec` against basis vectors with the given leads.

    Deterministic: terms are processed largest first and each is reduced by
    the first basis element whose lead divides it.
    """
    work = dict(vec)
    remainder = {}
    while work:
        term = max(work, key=key)
        coeff = work.pop(term)
        comp, exps = term
        hit = -1
        for idx, (lterm, _) in enumerate(leads):
            if lterm[0] == comp and _divides(lterm[1], exps):
                hit = idx
                break
        if hit < 0:
            remainder[term] = coeff
            continue
        lterm, lcoeff = leads[hit]
        shift = tuple(a - b for a, b in zip(exps, lterm[1]))
        factor = field.div(coeff, lcoeff)
        for (gcomp, gexps), gcoeff in vecs[hit].items():
            if (gcomp, gexps) == lterm:
                continue
            tgt = (gcomp, tuple(a + b for a, b in zip(gexps, shift)))
            value = field.sub(work.get(tgt, field.zero), field.mul(factor, gcoeff))
            if value:
                work[tgt] = value
            else:
                work.pop(tgt, None)
    return remainder


def _monic(vec: dict, lead_term, field) -> dict:
    c = vec[lead_term]
    if c == field.one:
        return vec
    inv = field.inv(c)
    return {t: field.mul(inv, v) for t, v in vec.items()}


def _completion(vectors, ring: GradedRing, key):
    """Buchberger completion; returns monic basis vectors with their leads."""
    field = ring.field
    basis = []
    leads = []
    single = []  # component index if the vector is supported in one component
    processed = set()
    pairs = []

    def push_pairs(m):
        lt_m = leads[m][0]
        for k in range(m):
            lt_k = leads[k][0]
            if lt_k[0] != lt_m[0]:
                continue
            lcm = tuple(max(a, b) for a, b in zip(lt_k[1], lt_m[1]))
            heapq.heappush(
                pairs, (ring.degree_of(lcm), ring.key(lcm), k, m)
            )

    def append(vec):
        lead = max(vec, key=key)
        vec = _monic(vec, lead, field)
        basis.append(vec)
        comps = {t[0] for t in vec}
        single.append(comps.pop() if len(comps) == 1 else None)
        leads.append((lead, vec[lead]))
        push_pairs(len(basis) - 1)

    for vec in vectors:
        if not vec:
            continue
        reduced = _reduce_vec(vec, leads, basis, field, key)
        if reduced:
            append(reduced)

    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        if (i, j) in processed:
            continue
        processed.add((i, j))
        (ci, ei), _ = leads[i]
        (cj, ej), _ = leads[j]
        lcm = tuple(max(a, b) for a, b in zip(ei, ej))
        # product criterion, valid only when both vectors live in one component
        if (
            single[i] is not None
            and single[i] == single[j]
            and all(a + b == m for a, b, m in zip(ei, ej, lcm))
        ):
            continue
        # chain criterion
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            (ck, ek), _ = leads[k]
            if ck == ci and _divides(ek, lcm):
                p1 = (min(i, k), max(i, k))
                p2 = (min(j, k), max(j, k))
                if p1 in processed and p2 in processed:
                    skip = True
                    break
        if skip:
            continue
        shift_i = tuple(m - a for m, a in zip(lcm, ei))
        shift_j = tuple(m - a for m, a in zip(lcm, ej))
        spair = {}
        for (gc, ge), gco in basis[i].items():
            t = (gc, tuple(a + b for a, b in zip(ge, shift_i)))
            spair[t] = gco
        for (gc, ge), gco in basis[j].items():
            t = (gc, tuple(a + b for a, b in zip(ge, shift_j)))
            value = field.sub(spair.get(t, field.zero), gco)
            if value:
                spair[t] = value
            else:
                spair.pop(t, None)
        reduced = _reduce_vec(spair, leads, basis, field, key)
        if reduced:
            append(reduced)

    return _autoreduce(basis, leads, field, key)


def _autoreduce(basis, leads, field, key):
    """Drop lead-redundant vectors, then fully reduce each tail."""
    keep = []
    for i, (lt_i, _) in enumerate(leads):
        redundant = False
        for j, (lt_j, _) in enumerate(leads):
            if i == j:
                continue
            if lt_j[0] == lt_i[0] and _divides(lt_j[1], lt_i[1]):
                if lt_j[1] != lt_i[1] or j < i:
                    redundant = True
                    break
        if not redundant:
            keep.append(i)
    out_vecs = []
    out_leads = []
    for pos, i in enumerate(keep):
        others = [leads[j] for j in keep if j != i]
        other_vecs = [basis[j] for j in keep if j != i]
        lead_term, lead_coeff = leads[i]
        tail = dict(basis[i])
        del tail[lead_term]
        reduced = _reduce_vec(tail, others, other_vecs, field, key)
        reduced[lead_term] = lead_coeff
        out_vecs.append(reduced)
        out_leads.append((lead_term, lead_coeff))
    order = sorted(range(len(out_vecs)), key=lambda i: key(out_leads[i][0]), reverse=True)
    return [out_vecs[i] for i in order], [out_leads[i] for i in order]


class GroebnerBasis:
    """Reduced basis of a submodule, with optional lifting data.

    `syzygy_certificates[k]` expresses basis element k as a combination of
    the original generators (a vector in the marker free module).
    """

    __slots__ = ("module", "elements", "_vecs", "_leads", "syzygy_certificates")

    def __init__(self, module, elements, vecs, leads, certificates=None):
        self.module = module
        self.elements = tuple(elements)
        self._vecs = vecs
        self._leads = leads
        self.syzygy_certificates = certificates

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def normal_form(self, element: ModuleElement) -> ModuleElement:
        if element.module != self.module:
            raise AmbientMismatchError("element does not live in the basis ambient")
        key = _keyfn(self.module.ring)
        vec = _reduce_vec(
            _vec_of(element), self._leads, self._vecs, self.module.ring.field, key
        )
        return _element_of(vec, self.module)

    def contains(self, element: ModuleElement) -> bool:
        return not self.normal_form(element)

    def lead_terms(self):
        return [lt for lt, _ in self._leads]

    def __repr__(self):
        return f"GroebnerBasis({len(self.elements)} elements in {self.module!r})"


def normal_form(element: ModuleElement, basis) -> ModuleElement:
    """Full normal form against a GroebnerBasis or any list of elements."""
    if isinstance(basis, GroebnerBasis):
        return basis.normal_form(element)
    module = element.module
    key = _keyfn(module.ring)
    vecs = []
    leads = []
    for g in basis:
        if g.module != module:
            raise AmbientMismatchError("reducers live in a different ambient")
        vec = _vec_of(g)
        if vec:
            vecs.append(vec)
            leads.append((max(vec, key=key), None))
    leads = [(lt, vecs[i][lt]) for i, (lt, _) in enumerate(leads)]
    return _element_of(
        _reduce_vec(_vec_of(element), leads, vecs, module.ring.field, key), module
    )


def buchberger(generators, module: FreeModule | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the span of `generators`."""
    generators = list(generators)
    if module is None:
        if not generators:
            raise ValidationError("cannot infer the ambient of an empty generator list")
        module = generators[0].module
    for g in generators:
        if g.module != module:
            raise AmbientMismatchError("generators live in different ambients")
    key = _keyfn(module.ring)
    vecs, leads = _completion([_vec_of(g) for g in generators], module.ring, key)
    elements = [_element_of(v, module) for v in vecs]
    return GroebnerBasis(module, elements, vecs, leads)


def _generator_degrees(generators, module):
    degrees = []
    for g in generators:
        d = g.internal_degree()
        degrees.append(0 if d is None else d)
    return degrees


def extended_buchberger(generators, module: FreeModule | None = None):
    """One completion pass returning (span basis, syzygy generators).

    The span basis carries certificates; the syzygies live in a fresh free
    module whose twist i is the internal degree of generator i.
    """
    generators = list(generators)
    if module is None:
        if not generators:
            raise ValidationError("cannot infer the ambient of an empty generator list")
        module = generators[0].module
    ring = module.ring
    rank = module.rank
    k = len(generators)
    marker = FreeModule(ring, _generator_degrees(generators, module))
    if not generators:
        empty = GroebnerBasis(module, [], [], [], certificates=())
        return empty, []
    big = FreeModule(ring, module.twists + marker.twists)
    key = _keyfn(ring)
    zero_exps = (0,) * ring.nvars
    aug = []
    for i, g in enumerate(generators):
        if g.module != module:
            raise AmbientMismatchError("generators live in different ambients")
        vec = {}
        for ci, p in enumerate(g.components):
            for e, c in p.terms:
                vec[(ci, e)] = c
        vec[(rank + i, zero_exps)] = ring.field.one
        aug.append(vec)
    vecs, leads = _completion(aug, ring, key)

    span_vecs, span_leads, span_elts, certs = [], [], [], []
    syzygies = []
    for vec, (lt, lc) in zip(vecs, leads):
        front = {t: c for t, c in vec.items() if t[0] < rank}
        back = {(t[0] - rank, t[1]): c for t, c in vec.items() if t[0] >= rank}
        if front:
            span_vecs.append(front)
            span_leads.append((lt, lc))
            span_elts.append(_element_of(front, module))
            certs.append(_element_of(back, marker))
        else:
            syzygies.append(_element_of(back, marker))
    gb = GroebnerBasis(module, span_elts, span_vecs, span_leads, tuple(certs))
    return gb, syzygies


def syzygies(generators, module: FreeModule | None = None):
    """Generators of the relations among `generators`, as elements of a free
    module with one component per generator (twist = generator degree)."""
    _, syz = extended_buchberger(generators, module)
    return syz


def module_quotient(basis: GroebnerBasis, f: Polynomial) -> GroebnerBasis:
    """The quotient (U : f) = {v : f*v in U}."""
    if not f:
        raise ValidationError("module quotient by the zero polynomial")
    module = basis.module
    family = [module.basis_element(i, f) for i in range(module.rank)]
    family.extend(basis.elements)
    relations = syzygies(family, module)
    projected = []
    for rel in relations:
        projected.append(module.element(rel.components[: module.rank]))
    projected = [v for v in projected if v]
    if not projected:
        return GroebnerBasis(module, [], [], [])
    return buchberger(projected, module)


def saturate(basis: GroebnerBasis, f: Polynomial) -> GroebnerBasis:
    """Stable limit of repeated quotients (U : f^infinity)."""
    current = basis
    for _ in range(SATURATION_CAP):
        step = module_quotient(current, f)
        if all(current.contains(v) for v in step.elements):
            return current
        current = step
    raise InternalError("saturation did not stabilize within the iteration cap")


def is_zero_quotient(elements, basis: GroebnerBasis) -> bool:
    """True iff every element reduces to zero, i.e. span(elements) + U = U."""
    return all(basis.contains(v) for v in elements)


def hilbert_profile(module: FreeModule, basis, lo: int, hi: int):
    """Per-degree counts of standard monomials of module/basis over [lo, hi]."""
    ring = module.ring
    leads_by_comp = _homogeneous_leads(module, basis)
    profile = {}
    for d in range(lo, hi + 1):
        count = 0
        for i, twist in enumerate(module.twists):
            rel = d - twist
            if rel < 0:
                continue
            lead_list = leads_by_comp[i]
            for exps in ring.monomials_of_degree(rel):
                if not any(_divides(le, exps) for le in lead_list):
                    count += 1
        profile[d] = count
    return profile


def _homogeneous_leads(module, basis):
    if isinstance(basis, GroebnerBasis):
        if basis.module != module:
            raise AmbientMismatchError("basis ambient does not match")
        for el in basis.elements:
            if el.internal_degree() is None:
                raise ValidationError("Hilbert profiles require homogeneous bases")
        leads = basis.lead_terms()
    else:
        leads = []
        key = _keyfn(module.ring)
        for el in basis:
            vec = _vec_of(el)
            if vec:
                if el.internal_degree() is None:
                    raise ValidationError("Hilbert profiles require homogeneous bases")
                leads.append(max(vec, key=key))
    by_comp = [[] for _ in range(module.rank)]
    for comp, exps in leads:
        by_comp[comp].append(exps)
    return by_comp


def standard_monomial_count(module: FreeModule, basis: GroebnerBasis):
    """Total number of standard monomials; inf when the quotient has
    infinite k-dimension.  Exact, via pure-power bounds per variable."""
    ring = module.ring
    n = ring.nvars
    leads_by_comp = [[] for _ in range(module.rank)]
    for comp, exps in basis.lead_terms():
        leads_by_comp[comp].append(exps)
    total = 0
    for i in range(module.rank):
        lead_list = leads_by_comp[i]
        if any(not any(exp for exp in le) for le in lead_list):
            continue  # the component is dead: 1 lies in the span
        if n == 0:
            total += 1
            continue
        bounds = []
        infinite = False
        for var in range(n):
            pure = [
                le[var]
                for le in lead_list
                if all(e == 0 for j, e in enumerate(le) if j != var)
            ]
            if not pure:
                infinite = True
                break
            bounds.append(min(pure))
        if infinite:
            return inf
        count = 0
        for exps in _box(bounds):
            if not any(_divides(le, exps) for le in lead_list):
                count += 1
        total += count
    return total


def _box(bounds):
    if not bounds:
        yield ()
        return
    for e in range(bounds[0]):
        for rest in _box(bounds[1:]):
            yield (e,) + rest
