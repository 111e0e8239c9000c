from itertools import combinations

import pytest

from toposdim import (GrothendieckTopology, Sieve, SiteError, a_pure_topology,
                      constant_presheaf, elements_category, elements_of_sieve,
                      enumerate_presheaves, enumerate_sieves, hom_presheaf,
                      is_sheaf, is_topology, largest_topology_for,
                      matching_families, maximal_sieve, empty_sieve,
                      pullback_sieve, representable, sheafify,
                      sieve_as_presheaf, topology_generated, trivial_topology,
                      connected_components)
from conftest import corpus_site


@pytest.fixture(scope="module")
def idem():
    return corpus_site("idempotent-monoid")


@pytest.fixture(scope="module")
def circle():
    return corpus_site("pseudo-circle")


def u_a(circle):
    # the object whose minimal open is {a, c, d}
    return "U@a"


# -- representables und sieves ------------------------------------------------

def test_representable_idem(idem):
    y = representable(idem, "*")
    assert set(y.sections["*"]) == {"1", "e"}
    assert y.act("e", "1") == "e" and y.act("e", "e") == "e"


def test_representable_terminal_site():
    site = corpus_site("trivial-monoid")
    y = representable(site, "*")
    assert len(y.sections["*"]) == 1


def test_representable_sierpinski_top():
    site = corpus_site("sierpinski")
    top = "U@0"   # minimal open of the closed point is the whole space
    y = representable(site, top)
    assert {c: len(v) for c, v in y.sections.items()} == {"U@0": 1, "U@1": 1}


def test_sieve_validation(idem):
    with pytest.raises(SiteError, match="not a sieve"):
        Sieve(idem, "*", {"1"})   # 1∘e = e missing
    Sieve(idem, "*", {"e"})       # right ideal: fine


def test_enumerate_sieves_group_site():
    # a group has no proper nonempty right ideals
    site = corpus_site("z2")
    assert [sorted(s.members) for s in enumerate_sieves(site, "*")] == \
        [[], ["1", "g1"]]


def test_enumerate_sieves_idem(idem):
    assert [sorted(s.members) for s in enumerate_sieves(idem, "*")] == \
        [[], ["e"], ["1", "e"]]


def test_enumerate_sieves_pseudo_circle(circle):
    sieves = enumerate_sieves(circle, u_a(circle))
    assert len(sieves) == 5
    sizes = sorted(len(s.members) for s in sieves)
    assert sizes == [0, 1, 1, 2, 3]


def test_pullback_sieve_idem(idem):
    s = Sieve(idem, "*", {"e"})
    assert pullback_sieve(s, "e").members == {"1", "e"}
    assert pullback_sieve(s, "1").members == {"e"}


def test_pullback_maximal_and_empty(circle):
    c = u_a(circle)
    for f in circle.into[c]:
        assert pullback_sieve(maximal_sieve(circle, c), f).members == \
            frozenset(circle.into[circle.src[f]])
        assert pullback_sieve(empty_sieve(circle, c), f).members == frozenset()


# -- categories of elements ---------------------------------------------------

def test_elements_of_representable_has_terminal(idem):
    el = elements_category(representable(idem, "*"))
    # (*, 1) is terminal: unique morphism from each element
    term = [o for o in el.objects if ";1)" in o]
    assert len(term) == 1
    assert all(len(el.hom.get((o, term[0]), ())) == 1 for o in el.objects)


def test_elements_of_e_sieve_endomorphisms(idem):
    el = elements_of_sieve(Sieve(idem, "*", {"e"}))
    assert len(el.objects) == 1
    assert len(el.morphisms) == 2  # endomorphism monoid {1, e}


def test_elements_two_leg_sieve_discrete(circle):
    c = u_a(circle)
    legs = [f for f in circle.into[c] if not circle.is_identity(f)]
    el = elements_of_sieve(Sieve(circle, c, legs))
    assert len(el.objects) == 2
    assert all(el.is_identity(m) for (m, s, t) in el.morphisms)


# -- hom presheaf and matching families ---------------------------------------

def test_hom_to_terminal_is_singleton(idem):
    y = representable(idem, "*")
    one = constant_presheaf(idem, ["*"])
    assert len(hom_presheaf(y, one)) == 1


def test_hom_from_e_sieve_to_representable(idem):
    sub = sieve_as_presheaf(Sieve(idem, "*", {"e"}))
    y = representable(idem, "*")
    homs = hom_presheaf(sub, y)
    assert len(homs) == 1  # image forced into {m : m·e = m} = {e}


def test_hom_from_empty_is_singleton(idem):
    sub = sieve_as_presheaf(empty_sieve(idem, "*"))
    y = representable(idem, "*")
    assert len(hom_presheaf(sub, y)) == 1


def test_matching_families_agree_with_hom(idem, circle):
    # the two enumeration routes must agree on every sieve of small sites
    for site in (idem, circle, corpus_site("chain-3")):
        x = constant_presheaf(site, ["0", "1"])
        for c in site.objects:
            for s in enumerate_sieves(site, c):
                assert len(matching_families(s, x)) == \
                    len(hom_presheaf(sieve_as_presheaf(s), x))


# -- topologies ----------------------------------------------------------------

def test_trivial_and_full_topologies_pass(idem, circle):
    for site in (idem, circle):
        ok, _ = is_topology(trivial_topology(site))
        assert ok
        full = GrothendieckTopology(
            site, {c: set(enumerate_sieves(site, c)) for c in site.objects})
        ok, _ = is_topology(full)
        assert ok


def test_idem_topologies(idem):
    good = GrothendieckTopology(idem, {"*": {maximal_sieve(idem, "*"),
                                             Sieve(idem, "*", {"e"})}})
    ok, _ = is_topology(good)
    assert ok
    bad = GrothendieckTopology(idem, {"*": {maximal_sieve(idem, "*"),
                                            empty_sieve(idem, "*")}})
    ok, witness = is_topology(bad)
    assert not ok and witness


def test_axiomatizations_agree_on_all_candidates(idem):
    # enumerate every sieve-set assignment on the one-object site (2^3 = 8)
    sieves = enumerate_sieves(idem, "*")
    for r in range(len(sieves) + 1):
        for chosen in combinations(sieves, r):
            j = GrothendieckTopology(idem, {"*": set(chosen)})
            is_topology(j)  # raises if the two axiomatizations disagree


def test_axiomatizations_agree_chain2():
    site = corpus_site("chain-2")
    per_object = [enumerate_sieves(site, c) for c in site.objects]
    for r0 in range(len(per_object[0]) + 1):
        for s0 in combinations(per_object[0], r0):
            for r1 in range(len(per_object[1]) + 1):
                for s1 in combinations(per_object[1], r1):
                    covers = {site.objects[0]: set(s0), site.objects[1]: set(s1)}
                    is_topology(GrothendieckTopology(site, covers))


def test_topology_generated(idem):
    gen = topology_generated(idem, [empty_sieve(idem, "*")])
    assert len(gen.covers["*"]) == 3  # empty cover forces everything
    gen = topology_generated(idem, [])
    assert gen == trivial_topology(idem)
    gen = topology_generated(idem, [Sieve(idem, "*", {"e"})])
    assert {tuple(sorted(s.members)) for s in gen.covers["*"]} == \
        {("e",), ("1", "e")}


# -- largest topology for a presheaf ------------------------------------------

def test_largest_topology_terminal_all_sieves(idem):
    one = constant_presheaf(idem, ["*"])
    for mode in ("sheaf", "separated"):
        j = largest_topology_for(one, mode)
        assert len(j.covers["*"]) == 3


def test_largest_topology_constant_two_idem(idem):
    x = constant_presheaf(idem, ["0", "1"])
    j = largest_topology_for(x, "sheaf")
    assert {tuple(sorted(s.members)) for s in j.covers["*"]} == \
        {("e",), ("1", "e")}
    j2 = largest_topology_for(x, "separated")
    assert j2.refines(j)


def test_separated_weaker_than_sheaf_with_difference():
    # a presheaf empty at one object of the discrete site: the empty sieve
    # there restricts injectively (from nothing) but not bijectively
    site = corpus_site("discrete-poset-2")
    a, b = site.objects
    from toposdim import Presheaf
    x = Presheaf(site, {a: (), b: ("0", "1")},
                 {site.identity[a]: {}, site.identity[b]: {"0": "0", "1": "1"}})
    sheaf_mode = largest_topology_for(x, "sheaf")
    sep_mode = largest_topology_for(x, "separated")
    assert sep_mode.refines(sheaf_mode)
    assert empty_sieve(site, a) in sep_mode.covers[a]
    assert empty_sieve(site, a) not in sheaf_mode.covers[a]
    assert empty_sieve(site, b) not in sep_mode.covers[b]


def test_largest_topology_passes_axioms(idem, circle):
    for site in (idem, circle):
        for size in (0, 1, 2, 3):
            x = constant_presheaf(site, [str(i) for i in range(size)])
            for mode in ("sheaf", "separated"):
                ok, witness = is_topology(largest_topology_for(x, mode))
                assert ok, witness


def test_sheaf_iff_topology_below_largest(idem):
    # maximality: x is a j-sheaf exactly when j is contained in the largest
    x = constant_presheaf(idem, ["0", "1"])
    largest = largest_topology_for(x, "sheaf")
    sieves = enumerate_sieves(idem, "*")
    for r in range(len(sieves) + 1):
        for chosen in combinations(sieves, r):
            j = GrothendieckTopology(idem, {"*": set(chosen)})
            ok, _ = is_topology(j)
            if not ok:
                continue
            assert is_sheaf(x, j) == largest.refines(j)


def test_a_pure_topology_idem(idem):
    consts = [constant_presheaf(idem, [str(i) for i in range(k)]) for k in (0, 1, 2)]
    pure = a_pure_topology(consts, "pure")
    assert {tuple(sorted(s.members)) for s in pure.covers["*"]} == \
        {("e",), ("1", "e")}
    dense = a_pure_topology(consts, "dense")
    assert dense.refines(pure)


def test_a_pure_topology_dense_circle(circle):
    consts = [constant_presheaf(circle, [str(i) for i in range(k)]) for k in (0, 1, 2)]
    dense = a_pure_topology(consts, "dense")
    c = u_a(circle)
    legs = frozenset(f for f in circle.into[c] if not circle.is_identity(f))
    assert Sieve(circle, c, legs) in dense.covers[c]
    pure = a_pure_topology(consts, "pure")
    assert Sieve(circle, c, legs) not in pure.covers[c]


# -- sheafification -------------------------------------------------------------

def test_sheafify_trivial_topology_is_identity(idem):
    y = representable(idem, "*")
    sheaf, unit = sheafify(y, trivial_topology(idem))
    assert {c: len(v) for c, v in sheaf.sections.items()} == \
        {c: len(v) for c, v in y.sections.items()}
    for c in idem.objects:
        assert len(set(unit[c].values())) == len(y.sections[c])


def test_sheafify_representable_idem_content(idem):
    j = GrothendieckTopology(idem, {"*": {maximal_sieve(idem, "*"),
                                          Sieve(idem, "*", {"e"})}})
    sheaf, _ = sheafify(representable(idem, "*"), j)
    assert len(sheaf.sections["*"]) == 1


def test_sheafify_produces_sheaf_and_fixes_sheaves(idem, circle):
    for site in (idem, circle):
        x = constant_presheaf(site, ["0", "1"])
        j = largest_topology_for(x, "sheaf")
        sheaf, unit = sheafify(x, j)
        assert is_sheaf(sheaf, j)
        # x was already a j-sheaf, so the unit is a bijection on sections
        for c in site.objects:
            assert len(set(unit[c].values())) == len(x.sections[c]) == \
                len(sheaf.sections[c])


def test_enumerate_presheaves_counts(idem):
    # presheaves on {1,e} with a fixed 2-element carrier: actions of e with
    # e² = e, i.e. idempotent self-maps of a 2-element set: 3 of them
    out = enumerate_presheaves(idem, {"*": ("x", "y")})
    assert len(out) == 3
