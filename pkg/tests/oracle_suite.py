"""The bundled oracle suite: graded instances with at most three variables
and total degree at most six, each checked against the degree-by-degree
linear-algebra oracle (membership, Hilbert counts, syzygy ranks, resolution
strand exactness, Ext strand dimensions, plus hand-derived Koszul values).
"""
from __future__ import annotations

import la_oracle
from conftest import pp, ring
from reeshom.groebner import FreeModule, buchberger, hilbert_profile, syzygies
from reeshom.homalg import (
    ext_modules,
    fp_quotient_by_ideal,
    free_fp,
    free_resolution,
    profile_of,
)
from reeshom.poly import prime_field

F5 = prime_field(5)

R1 = lambda: ring("x")
R2 = lambda: ring("x", "y")
R2W = lambda: ring("x", ("y", 2))
R3 = lambda: ring("x", "y", "z")
R2F5 = lambda: ring("x", "y", field=F5)

MEMBERSHIP = [
    # (ring factory, ideal generators, probe, expected membership)
    (R2, ("x^2", "x*y + y^2"), "y^3", True),
    (R2, ("x^2", "x*y + y^2"), "y^2", False),
    (R2, ("x", "y"), "x*y", True),
    (R2, ("x", "y"), "1", False),
    (R2, ("x^2 - y^2", "x*y"), "y^3", True),
    (R2, ("x^2 - y^2", "x*y"), "y^2", False),
    (R2W, ("x^2 - y",), "x^4 - y^2", True),
    (R2W, ("x^2 - y",), "y^2", False),
    (R3, ("x + y + z", "x*y + y*z + z*x", "x*y*z"), "x^3", True),
    (R3, ("x + y + z", "x*y + y*z + z*x", "x*y*z"), "x^2", False),
    (R2F5, ("x^2 + 2*y^2", "x*y"), "y^3", True),
    (R2F5, ("x^2 + 2*y^2", "x*y"), "y^2", False),
]

HILBERT = [
    (R2, ("x^2", "x*y", "y^2")),
    (R2, ("x^2", "y^3")),
    (R2, ("x^3 - y^3",)),
    (R2, ("x", "y")),
    (R2, ("x^2 - y^2", "x*y")),
    (R2W, ("x^2 - y",)),
    (R2W, ("x^4", "y^2")),
    (R3, ("x", "y", "z")),
    (R3, ("x^2", "y^2", "z^2")),
    (R2F5, ("x^2 + y^2",)),
]

SYZYGY = [
    (R2, ("x", "y")),
    (R2, ("x^2", "x*y", "y^2")),
    (R2, ("x^2 - y^2", "x*y")),
    (R2, ("x^3", "x*y", "y^2")),
    (R2W, ("x^2", "y")),
    (R3, ("x", "y", "z")),
    (R3, ("x*y", "y*z", "z*x")),
    (R2F5, ("x^2", "x*y + y^2")),
]

RESOLUTION = [
    (R2, ("x^2", "x*y")),
    (R2, ("x", "y")),
    (R3, ("x", "y", "z")),
    (R2W, ("x^2 - y", "x^3")),
]

# (ring, first argument ideal, expected nonzero profile of Ext^top(k, A))
KOSZUL_EXT = [
    (R1, ("x",), 1, {-1: 1}),
    (R2, ("x", "y"), 2, {-2: 1}),
    (R3, ("x", "y", "z"), 3, {-3: 1}),
    (R2W, ("x", "y"), 2, {-3: 1}),  # weights (1,2): the socle sits in degree -3
]

EXT_STRAND = [
    # (ring, first ideal, second ideal or None for the free module, window)
    (R2, ("x^2", "x*y"), ("y",), (-3, 4)),
    (R2, ("x", "y"), ("x^2", "x*y", "y^2"), (-3, 4)),
    (R2, ("x^2 - y^2", "x*y"), None, (-3, 4)),
    (R2W, ("x^2 - y",), ("x",), (-4, 4)),
    (R3, ("x", "y", "z"), None, (-4, 2)),
    (R2F5, ("x^2 + 2*y^2", "x*y"), ("x",), (-3, 4)),
]


def _cyclic(the_ring, texts):
    return fp_quotient_by_ideal(the_ring, [pp(t, the_ring) for t in texts])


def _gens(the_ring, texts):
    module = FreeModule(the_ring, [0])
    return module, [module.element([pp(t, the_ring)]) for t in texts]


def membership_instance(factory, texts, probe_text, expected):
    the_ring = factory()
    module, gens = _gens(the_ring, texts)
    probe = module.element([pp(probe_text, the_ring)])
    engine = buchberger(gens).contains(probe)
    oracle = la_oracle.membership(probe, gens, module)
    assert engine == oracle, "engine disagrees with the linear-algebra oracle"
    assert engine == expected
    return 1


def hilbert_instance(factory, texts):
    the_ring = factory()
    module, gens = _gens(the_ring, texts)
    profile = hilbert_profile(module, buchberger(gens), 0, 6)
    for degree in range(7):
        assert profile[degree] == la_oracle.quotient_dimension(gens, module, degree)
    return 1


def syzygy_instance(factory, texts):
    the_ring = factory()
    module, gens = _gens(the_ring, texts)
    relations = syzygies(gens)
    for s in relations:
        combo = the_ring.zero
        for coeff, gen in zip(s.components, gens):
            combo = combo + coeff * gen.components[0]
        assert combo == the_ring.zero
    if relations:
        marker = relations[0].module
        for degree in range(7):
            assert la_oracle.span_dimension(
                relations, marker, degree
            ) == la_oracle.syzygy_dimension(gens, module, degree)
    else:
        for degree in range(7):
            assert la_oracle.syzygy_dimension(gens, module, degree) == 0
    return 1


def resolution_instance(factory, texts):
    the_ring = factory()
    m = _cyclic(the_ring, texts)
    res = free_resolution(m)
    lo, _ = res.support()
    field = the_ring.field
    for degree in range(7):
        ranks = {}
        for q, d in res.maps.items():
            cols, _ = la_oracle.expansion_columns(
                [c for c in d.columns() if c], d.target, degree
            )
            ranks[q] = la_oracle.rank_of(la_oracle._transpose(cols), field)
        for q in range(lo, 0):
            dim_term = len(la_oracle.strand_basis(res.terms[q], degree))
            assert dim_term == ranks.get(q, 0) + ranks.get(q - 1, 0)
        gens = [c for c in m.presentation.columns() if c]
        dim_f0 = len(la_oracle.strand_basis(res.terms[0], degree))
        assert dim_f0 - ranks.get(-1, 0) == la_oracle.quotient_dimension(
            gens, m.ambient, degree
        )
    return 1


def koszul_ext_instance(factory, texts, top, expected):
    the_ring = factory()
    k = _cyclic(the_ring, texts)
    a_free = free_fp(FreeModule(the_ring, [0]))
    modules = ext_modules(k, a_free, top)
    for q in range(top):
        assert modules[q].is_zero()
    profile = profile_of(modules[top], top, (-6, 2))
    assert {d: v for d, v in profile.dims.items() if v} == expected
    return 1


def ext_strand_instance(factory, first_texts, second_texts, window):
    the_ring = factory()
    first = _cyclic(the_ring, first_texts)
    second = (
        _cyclic(the_ring, second_texts)
        if second_texts is not None
        else free_fp(FreeModule(the_ring, [0]))
    )
    resolution = free_resolution(first)
    top = resolution.length
    modules = ext_modules(first, second, top)
    lo, hi = window
    for q in range(top + 1):
        dims = profile_of(modules[q], q, window).dims
        for degree in range(lo, hi + 1):
            oracle = la_oracle.ext_strand_dimension(resolution, second, q, degree)
            assert dims[degree] == oracle, (q, degree)
    return 1


def run_suite():
    """Run every instance; returns the instance count."""
    count = 0
    for args in MEMBERSHIP:
        count += membership_instance(*args)
    for args in HILBERT:
        count += hilbert_instance(*args)
    for args in SYZYGY:
        count += syzygy_instance(*args)
    for args in RESOLUTION:
        count += resolution_instance(*args)
    for args in KOSZUL_EXT:
        count += koszul_ext_instance(*args)
    for args in EXT_STRAND:
        count += ext_strand_instance(*args)
    return count
