import random

import pytest
from hypothesis import given, settings, strategies as st

from toposdim import (IntegerMatrix, Sieve, cohomology_mod_p, elements_of_sieve,
                      homology_group, invariant_factors, maximal_sieve,
                      nerve_chain_complex, restriction_cohomology_map,
                      smith_normal_form, vanishes_all_coefficients,
                      contractibility_certificate)
from conftest import corpus_site
from oracles import sympy_invariant_factors


def point_complex():
    return nerve_chain_complex(corpus_site("trivial-monoid"), 4)


def bz2_complex(depth=5):
    return nerve_chain_complex(corpus_site("z2"), depth)


def circle_complex():
    return nerve_chain_complex(corpus_site("pseudo-circle"), 4)


# -- nerves ------------------------------------------------------------------

def test_point_nerve_ranks():
    c = point_complex()
    assert [c.rank(m) for m in range(5)] == [1, 0, 0, 0, 0]


def test_bz2_nerve_ranks_and_boundaries():
    c = bz2_complex()
    assert all(c.rank(m) == 1 for m in range(6))
    # boundary alternates 0 and multiplication by 2
    assert c.boundary[1].entries == [[0]]
    assert c.boundary[2].entries == [[2]]
    assert c.boundary[3].entries == [[0]]
    assert c.boundary[4].entries == [[2]]


def test_circle_nerve_ranks():
    c = circle_complex()
    assert [c.rank(m) for m in range(5)] == [4, 4, 0, 0, 0]


def test_boundary_squared_zero_on_corpus():
    for name in ["s3", "idempotent-monoid", "pseudo-2-sphere", "chain-3"]:
        nerve_chain_complex(corpus_site(name), 4)  # constructor asserts ∂∂ = 0


# -- smith normal form ---------------------------------------------------------

def test_snf_worked_example():
    m = IntegerMatrix(2, 2, [[2, 4], [6, 8]])
    u, d, v = smith_normal_form(m)
    assert [d.entries[0][0], d.entries[1][1]] == [2, 4]
    assert u.mul(m).mul(v).entries == d.entries


def test_snf_identity_and_zero():
    eye = IntegerMatrix.identity(3)
    _, d, _ = smith_normal_form(eye)
    assert d.entries == eye.entries
    zero = IntegerMatrix(2, 3)
    _, d, _ = smith_normal_form(zero)
    assert d.entries == zero.entries


@settings(max_examples=120, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_snf_properties_random(rows, cols, data):
    entries = [[data.draw(st.integers(-9, 9)) for _ in range(cols)]
               for _ in range(rows)]
    m = IntegerMatrix(rows, cols, entries)
    u, d, v = smith_normal_form(m)
    assert u.mul(m).mul(v).entries == d.entries
    assert abs(u.det_unimodular()) == 1
    assert abs(v.det_unimodular()) == 1
    diag = [d.entries[i][i] for i in range(min(rows, cols))]
    for i in range(len(diag)):
        if i + 1 < len(diag) and diag[i]:
            assert diag[i + 1] % diag[i] == 0
        assert diag[i] >= 0
    # off-diagonal zero
    for i in range(rows):
        for j in range(cols):
            if i != j:
                assert d.entries[i][j] == 0
    assert invariant_factors(m) == list(sympy_invariant_factors(entries))


# -- homology -------------------------------------------------------------------

def test_bz2_homology_matches_fixture():
    c = bz2_complex()
    expected = {0: (1, ()), 1: (0, (2,)), 2: (0, ()), 3: (0, (2,))}
    for degree, (betti, torsion) in expected.items():
        h = homology_group(c, degree)
        assert (h.betti, h.torsion) == (betti, torsion)


def test_circle_homology():
    c = circle_complex()
    assert (homology_group(c, 0).betti, homology_group(c, 0).torsion) == (1, ())
    assert (homology_group(c, 1).betti, homology_group(c, 1).torsion) == (1, ())
    assert homology_group(c, 2).is_zero()


def test_point_homology_vanishes_positively():
    c = point_complex()
    for m in range(1, 4):
        assert homology_group(c, m).is_zero()


def test_homology_degree_out_of_range():
    with pytest.raises(ValueError):
        homology_group(point_complex(), 4)


def test_vanishes_all_coefficients():
    assert vanishes_all_coefficients(point_complex(), 2)
    assert not vanishes_all_coefficients(bz2_complex(), 2)   # Ext(Z/2, -) ≠ 0
    assert vanishes_all_coefficients(circle_complex(), 2)    # H2 = 0, H1 = Z free


def test_cohomology_mod_p():
    c = bz2_complex()
    assert [cohomology_mod_p(c, m, 2) for m in range(4)] == [1, 1, 1, 1]
    p = point_complex()
    assert [cohomology_mod_p(p, m, 3) for m in range(3)] == [1, 0, 0]
    s = circle_complex()
    assert [cohomology_mod_p(s, m, 3) for m in range(3)] == [1, 1, 0]
    with pytest.raises(ValueError, match="prime"):
        cohomology_mod_p(c, 1, 4)


def test_contractible_certificate_implies_trivial_homology():
    for name in ["z3", "idempotent-monoid", "left-zero-4"]:
        site = corpus_site(name)
        from toposdim import representable, elements_category
        el = elements_category(representable(site, "*"))
        assert contractibility_certificate(el) is not None
        c = nerve_chain_complex(el, 3)
        for m in range(1, 3):
            assert homology_group(c, m).is_zero()
        assert vanishes_all_coefficients(c, 2)


# -- restriction maps ------------------------------------------------------------

def _two_leg_inclusion(p):
    circle = corpus_site("pseudo-circle")
    c = "U@a"
    legs = [f for f in circle.into[c] if not circle.is_identity(f)]
    big = nerve_chain_complex(elements_of_sieve(maximal_sieve(circle, c)), 3)
    small = nerve_chain_complex(elements_of_sieve(Sieve(circle, c, legs)), 3)
    return restriction_cohomology_map(big, small, 0, p)


def test_restriction_h0_two_leg_injective_not_surjective():
    mat, injective = _two_leg_inclusion(5)
    assert injective
    assert (mat.rows, mat.cols) == (2, 1)   # F_p -> F_p^2


def test_restriction_identity_on_maximal():
    idem = corpus_site("idempotent-monoid")
    big = nerve_chain_complex(elements_of_sieve(maximal_sieve(idem, "*")), 3)
    mat, injective = restriction_cohomology_map(big, big, 0, 3)
    assert injective and (mat.rows, mat.cols) == (1, 1)


def test_restriction_e_sieve_h0_iso():
    idem = corpus_site("idempotent-monoid")
    big = nerve_chain_complex(elements_of_sieve(maximal_sieve(idem, "*")), 3)
    small = nerve_chain_complex(elements_of_sieve(Sieve(idem, "*", {"e"})), 3)
    mat, injective = restriction_cohomology_map(big, small, 0, 3)
    assert injective and (mat.rows, mat.cols) == (1, 1)


# -- universal coefficient consistency -------------------------------------------

def test_uct_consistency_on_nerves():
    # mod-p cohomology dimension must match the prediction from integral
    # homology: dim H^m(-; F_p) = rank H_m + #p-torsion(H_m) + #p-torsion(H_{m-1})
    rng = random.Random(11)
    from conftest import random_site
    sites = [random_site(rng) for _ in range(30)]
    sites += [corpus_site(n) for n in ("z2", "z3", "pseudo-circle",
                                       "pseudo-2-sphere", "left-zero-4")]
    for site in sites:
        c = nerve_chain_complex(site, 3)
        top = 3 if c.rank(3) <= 250 else 2   # keep integral SNF cheap
        for m in range(top):
            hm = homology_group(c, m)
            hm1 = homology_group(c, m - 1) if m >= 1 else None
            for p in (2, 3, 5):
                predicted = hm.betti + sum(1 for t in hm.torsion if t % p == 0)
                if hm1 is not None:
                    predicted += sum(1 for t in hm1.torsion if t % p == 0)
                assert cohomology_mod_p(c, m, p) == predicted, (site, m, p)
