from math import inf

import pytest

import la_oracle
from conftest import pp, ring
from reeshom.errors import ValidationError
from reeshom.groebner import FreeModule
from reeshom.homalg import (
    FPModule,
    FreeComplex,
    GradedMatrix,
    cohomology_at,
    complex_as_induced,
    ext_modules,
    ext_profile,
    ext_vanishes_above,
    fp_quotient_by_ideal,
    free_fp,
    free_resolution,
    hom_complex,
    profile_of,
    validate_graded_matrix,
)
from reeshom.poly import LEX


def _matrix(the_ring, tgt, src, rows):
    return GradedMatrix(
        FreeModule(the_ring, src),
        FreeModule(the_ring, tgt),
        [[pp(t, the_ring) for t in row] for row in rows],
    )


def test_validate_graded_matrix(kx):
    ok = _matrix(kx, [0], [2], [["x^2"]])
    assert validate_graded_matrix(ok) is None
    bad = _matrix(kx, [0], [2], [["x"]])
    violation = validate_graded_matrix(bad)
    assert (violation.row, violation.col) == (0, 0)
    assert violation.expected == 2 and violation.found == 1
    zero = _matrix(kx, [0, 1], [2], [["0"], ["0"]])
    assert validate_graded_matrix(zero) is None


def test_fpmodule_rejects_bad_grading(kx):
    with pytest.raises(ValidationError):
        FPModule(_matrix(kx, [0], [2], [["x"]]), "graded")


def test_resolution_of_residue_field(kxy):
    k = fp_quotient_by_ideal(kxy, [pp("x", kxy), pp("y", kxy)])
    res = free_resolution(k)
    assert res.length == 2
    assert list(res.terms[0].twists) == [0]
    assert sorted(res.terms[-1].twists) == [1, 1]
    assert list(res.terms[-2].twists) == [2]


def test_resolution_free_module(kxy):
    free = free_fp(FreeModule(kxy, [0, -1]))
    assert free_resolution(free).length == 0


def test_resolution_principal(kx):
    m = fp_quotient_by_ideal(kx, [pp("x^2", kx)])
    res = free_resolution(m)
    assert res.length == 1
    assert list(res.terms[-1].twists) == [2]


def test_resolution_minimal_prunes_redundant_generator(kx):
    # the relation span (x, x^2) = (x): the syzygy (x, -1) has a unit entry,
    # so minimalization drops the redundant x^2 column
    pres = _matrix(kx, [0], [1, 2], [["x", "x^2"]])
    m = FPModule(pres, "graded")
    res = free_resolution(m)
    assert res.length == 1
    assert list(res.terms[-1].twists) == [1]
    for q, d in res.maps.items():
        for row in d.entries:
            for p in row:
                assert not (p.terms and len(p.terms) == 1 and not any(p.terms[0][0]))


def test_resolution_exactness_against_oracle(kxy):
    m = fp_quotient_by_ideal(kxy, [pp("x^2", kxy), pp("x*y", kxy)])
    res = free_resolution(m)
    lo, hi = res.support()
    # chain condition is validated at construction; check strand exactness
    for degree in range(0, 7):
        ranks = {}
        for q, d in res.maps.items():
            cols, _ = la_oracle.expansion_columns(
                [c for c in d.columns() if c], d.target, degree
            )
            ranks[q] = la_oracle.rank_of(la_oracle._transpose(cols), kxy.field)
        for q in range(lo, 0):
            dim_term = len(la_oracle.strand_basis(res.terms[q], degree))
            assert dim_term == ranks.get(q, 0) + ranks.get(q - 1, 0), (q, degree)
        # H^0 equals the module itself
        dim_f0 = len(la_oracle.strand_basis(res.terms[0], degree))
        gens = [c for c in m.presentation.columns() if c]
        assert dim_f0 - ranks.get(-1, 0) == la_oracle.quotient_dimension(
            gens, m.ambient, degree
        )


def test_hom_complex_shapes(kx, kxy):
    # shift s means "internal degrees move up by s", so Hom(A(-1), A) = A(1)
    # appears with shift -1 (its generator sits in degree -1)
    m = fp_quotient_by_ideal(kx, [pp("x", kx)])
    res = free_resolution(m)  # A(-1) -> A
    hom = hom_complex(res, free_fp(FreeModule(kx, [0])))
    assert hom.shifts[0] == (0,)
    assert hom.shifts[1] == (-1,)
    assert str(hom.maps[0][0][0]) == "x"

    k = fp_quotient_by_ideal(kxy, [pp("x", kxy), pp("y", kxy)])
    resk = free_resolution(k)
    homk = hom_complex(resk, free_fp(FreeModule(kxy, [0])))
    assert homk.shifts[0] == (0,)
    assert tuple(sorted(homk.shifts[1])) == (-1, -1)
    assert homk.shifts[2] == (-2,)


def test_cohomology_koszul(kxy):
    k = fp_quotient_by_ideal(kxy, [pp("x", kxy), pp("y", kxy)])
    res = free_resolution(k)
    hom = hom_complex(res, free_fp(FreeModule(kxy, [0])))
    assert cohomology_at(hom, 0).is_zero()
    assert cohomology_at(hom, 1).is_zero()
    h2 = cohomology_at(hom, 2)
    assert not h2.is_zero()
    dims = h2.hilbert(-5, 5)
    assert dims[-2] == 1 and sum(dims.values()) == 1


def test_hom_into_module_h0_is_hom(kx):
    # Hom(A/(x), A/(x)) has dimension one per matching degree
    m = fp_quotient_by_ideal(kx, [pp("x", kx)])
    res = free_resolution(m)
    hom = hom_complex(res, m)
    h0 = cohomology_at(hom, 0)
    dims = h0.hilbert(-3, 3)
    assert dims[0] == 1 and sum(dims.values()) == 1


def test_ext_examples(kxy, kx):
    a_free = free_fp(FreeModule(kxy, [0]))
    k = fp_quotient_by_ideal(kxy, [pp("x", kxy), pp("y", kxy)])
    profile = ext_profile(k, a_free, 2, (-5, 5))
    assert not profile.vanishes
    assert {d: v for d, v in profile.dims.items() if v} == {-2: 1}

    kt = fp_quotient_by_ideal(kx, [pp("x", kx)])
    at = free_fp(FreeModule(kx, [0]))
    profile = ext_profile(kt, at, 1, (-5, 5))
    assert {d: v for d, v in profile.dims.items() if v} == {-1: 1}

    for q in (1, 2, 3):
        assert ext_profile(a_free, k, q, (-5, 5)).vanishes


def test_ext_vanishes_above(kxy):
    a_free = free_fp(FreeModule(kxy, [0]))
    k = fp_quotient_by_ideal(kxy, [pp("x", kxy), pp("y", kxy)])
    assert ext_vanishes_above(k, a_free, 2)
    assert not ext_vanishes_above(k, a_free, 1)
    assert ext_vanishes_above(a_free, k, 0)


def test_ext_window_stability(kxy):
    k = fp_quotient_by_ideal(kxy, [pp("x", kxy), pp("y", kxy)])
    m = fp_quotient_by_ideal(kxy, [pp("x^2", kxy), pp("x*y", kxy)])
    for q in (0, 1, 2):
        small = ext_profile(m, k, q, (-4, 4)).dims
        large = ext_profile(m, k, q, (-9, 9)).dims
        for d, v in small.items():
            assert large[d] == v


def test_ext_order_independence(kxy):
    for order in (None, LEX):
        pass
    grev = ring("x", "y")
    lex = ring("x", "y", order=LEX)
    for r in (grev, lex):
        k = fp_quotient_by_ideal(r, [pp("x", r), pp("y", r)])
        a = free_fp(FreeModule(r, [0]))
        prof = ext_profile(k, a, 2, (-4, 4))
        assert {d: v for d, v in prof.dims.items() if v} == {-2: 1}


def test_ext_balance_spot_check(kx):
    # Ext^1(A/(f), A/(g)) over k[x] has dimension min(deg f, deg g)
    for df in (1, 2, 3):
        for dg in (1, 2, 3):
            first = fp_quotient_by_ideal(kx, [pp(f"x^{df}", kx)])
            second = fp_quotient_by_ideal(kx, [pp(f"x^{dg}", kx)])
            profile = ext_profile(first, second, 1, (-8, 8))
            assert sum(profile.dims.values()) == min(df, dg), (df, dg)


def test_ungraded_ext_dimensions(kx):
    first = fp_quotient_by_ideal(kx, [pp("x^2 - 1", kx)], mode="ungraded")
    second = fp_quotient_by_ideal(kx, [pp("x - 1", kx)], mode="ungraded")
    mods = ext_modules(first, second, 2)
    dims = [profile_of(m, q).total for q, m in enumerate(mods)]
    assert dims == [1, 1, 0]
    a_free = free_fp(FreeModule(kx, [0]), mode="ungraded")
    assert profile_of(ext_modules(a_free, a_free, 0)[0], 0).total == inf


def test_complex_as_induced_cohomology(kx):
    # the complex A(-1) --0--> A has both cohomologies free of rank one
    terms = {-1: FreeModule(kx, [1]), 0: FreeModule(kx, [0])}
    maps = {-1: _matrix(kx, [0], [1], [["0"]])}
    complex_ = FreeComplex(terms, maps)
    induced = complex_as_induced(complex_)
    h0 = cohomology_at(induced, 0)
    hm1 = cohomology_at(induced, -1)
    assert h0.hilbert(0, 2) == {0: 1, 1: 1, 2: 1}
    assert hm1.hilbert(0, 2) == {0: 0, 1: 1, 2: 1}


def test_dd_zero_enforced(kx):
    from reeshom.errors import InternalError

    terms = {
        -2: FreeModule(kx, [2]),
        -1: FreeModule(kx, [1]),
        0: FreeModule(kx, [0]),
    }
    maps = {
        -2: _matrix(kx, [1], [2], [["x"]]),
        -1: _matrix(kx, [0], [1], [["x"]]),
    }
    with pytest.raises(InternalError):
        FreeComplex(terms, maps)


def test_ext_strand_oracle_agreement(kxy):
    m = fp_quotient_by_ideal(kxy, [pp("x^2", kxy), pp("x*y", kxy)])
    n = fp_quotient_by_ideal(kxy, [pp("y", kxy)])
    res = free_resolution(m)
    mods = ext_modules(m, n, 3)
    for q in range(4):
        dims = profile_of(mods[q], q, (-2, 5)).dims
        for degree in range(-2, 6):
            oracle = la_oracle.ext_strand_dimension(res, n, q, degree)
            assert dims[degree] == oracle, (q, degree)


def test_resolution_max_len_precondition(kxy):
    m = fp_quotient_by_ideal(kxy, [pp("x", kxy), pp("y", kxy)])
    with pytest.raises(ValidationError):
        free_resolution(m, max_len=1)  # below nvars + 1
