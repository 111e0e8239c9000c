"""Finite categories, monoids, posets and finite topological spaces.

Everything here is exhaustively validated at construction time: a value of
one of these types always satisfies its axioms.  Identifiers for objects and
morphisms are opaque strings; equality is identifier equality.  All values
are immutable after construction and all operations are pure, so sharing
across threads is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product


class SiteError(ValueError):
    """A finite-site description violates one of its axioms.

    The message always names the first violated axiom together with a
    concrete witness (the offending triple, pair or element).
    """


# ---------------------------------------------------------------------------
# finite categories
# ---------------------------------------------------------------------------

class FiniteCategory:
    """A finite category given by explicit composition data.

    objects: tuple of object ids; morphisms: tuple of (id, source, target);
    identity: object id -> morphism id; compose: (g, f) -> g∘f, defined
    exactly when target(f) = source(g).  Associativity and the unit laws are
    checked exhaustively by the constructor.
    """

    def __init__(self, objects, morphisms, identity, compose):
        self.objects = tuple(objects)
        self.morphisms = tuple((str(m), str(s), str(t)) for (m, s, t) in morphisms)
        self.identity = dict(identity)
        self.compose_table = dict(compose)
        self._index()
        self._validate()

    def _index(self):
        if len(set(self.objects)) != len(self.objects):
            raise SiteError("duplicate object identifier")
        mids = [m for (m, _, _) in self.morphisms]
        if len(set(mids)) != len(mids):
            raise SiteError("duplicate morphism identifier")
        self.src = {m: s for (m, s, t) in self.morphisms}
        self.tgt = {m: t for (m, s, t) in self.morphisms}
        self._obj_set = set(self.objects)
        self.hom = {}
        for (m, s, t) in self.morphisms:
            if s not in self._obj_set or t not in self._obj_set:
                raise SiteError(f"morphism {m!r} has unknown endpoint {s!r} or {t!r}")
            self.hom.setdefault((s, t), []).append(m)
        self.hom = {k: tuple(v) for k, v in self.hom.items()}
        self.into = {c: tuple(m for (m, s, t) in self.morphisms if t == c)
                     for c in self.objects}
        self.out_of = {c: tuple(m for (m, s, t) in self.morphisms if s == c)
                       for c in self.objects}

    def _validate(self):
        for c in self.objects:
            i = self.identity.get(c)
            if i is None or i not in self.src:
                raise SiteError(f"object {c!r} has no identity morphism")
            if self.src[i] != c or self.tgt[i] != c:
                raise SiteError(f"identity of {c!r} is not an endomorphism: {i!r}")
        ids = set(self.identity.values())
        if len(ids) != len(self.objects):
            raise SiteError("two objects share an identity morphism")
        # compose defined exactly on composable pairs
        for g, gs, gt in self.morphisms:
            for f, fs, ft in self.morphisms:
                h = self.compose_table.get((g, f))
                if ft == gs:
                    if h is None:
                        raise SiteError(f"missing composite {g!r}∘{f!r}")
                    if h not in self.src:
                        raise SiteError(f"composite {g!r}∘{f!r} is unknown morphism {h!r}")
                    if self.src[h] != fs or self.tgt[h] != gt:
                        raise SiteError(
                            f"composite {g!r}∘{f!r} = {h!r} has wrong endpoints")
                elif h is not None:
                    raise SiteError(f"composite defined on non-composable pair ({g!r}, {f!r})")
        # unit laws
        for m, s, t in self.morphisms:
            if self.compose_table[(m, self.identity[s])] != m:
                raise SiteError(f"right unit law fails: {m!r}∘id_{s!r} ≠ {m!r}")
            if self.compose_table[(self.identity[t], m)] != m:
                raise SiteError(f"left unit law fails: id_{t!r}∘{m!r} ≠ {m!r}")
        # associativity on every composable triple
        for h, hs, ht in self.morphisms:
            for g in self.out_of[ht]:
                gf = self.compose_table[(g, h)]
                for k in self.out_of[self.tgt[g]]:
                    left = self.compose_table[(self.compose_table[(k, g)], h)]
                    right = self.compose_table[(k, gf)]
                    if left != right:
                        raise SiteError(
                            f"associativity fails on triple ({k!r}, {g!r}, {h!r}): "
                            f"({k!r}∘{g!r})∘{h!r} = {left!r} but {k!r}∘({g!r}∘{h!r}) = {right!r}")

    def compose(self, g, f):
        """g∘f, defined when target(f) = source(g)."""
        return self.compose_table[(g, f)]

    def is_identity(self, m):
        return self.identity.get(self.src[m]) == m

    def isomorphisms(self, d, c):
        """All invertible morphisms d -> c."""
        out = []
        for f in self.hom.get((d, c), ()):
            for g in self.hom.get((c, d), ()):
                if (self.compose_table[(f, g)] == self.identity[c]
                        and self.compose_table[(g, f)] == self.identity[d]):
                    out.append(f)
                    break
        return tuple(out)

    def __repr__(self):
        return (f"FiniteCategory({len(self.objects)} objects, "
                f"{len(self.morphisms)} morphisms)")


def validate_category(raw) -> FiniteCategory:
    """Build a FiniteCategory from a raw description, or raise SiteError.

    ``raw`` is a mapping with keys ``objects`` (list of ids), ``morphisms``
    (list of [id, source, target]), ``identity`` (object -> morphism id) and
    ``compose`` (list of [g, f, h] meaning g∘f = h, or a mapping).  The first
    violated axiom is reported with a witness.
    """
    objects = list(raw["objects"])
    morphisms = [tuple(m) for m in raw["morphisms"]]
    identity = dict(raw["identity"])
    comp = raw["compose"]
    if isinstance(comp, dict):
        table = {tuple(k.split()) if isinstance(k, str) else tuple(k): v
                 for k, v in comp.items()}
    else:
        table = {(g, f): h for (g, f, h) in comp}
    return FiniteCategory(objects, morphisms, identity, table)


# ---------------------------------------------------------------------------
# finite monoids
# ---------------------------------------------------------------------------

class FiniteMonoid:
    """A finite monoid: elements, a total multiplication table and a unit."""

    def __init__(self, elements, table, unit):
        self.elements = tuple(str(x) for x in elements)
        self.unit = str(unit)
        self.table = {(str(x), str(y)): str(z) for (x, y), z in table.items()}
        elems = set(self.elements)
        if len(elems) != len(self.elements):
            raise SiteError("duplicate monoid element")
        if self.unit not in elems:
            raise SiteError(f"unit {self.unit!r} is not an element")
        for x, y in product(self.elements, repeat=2):
            z = self.table.get((x, y))
            if z is None:
                raise SiteError(f"missing product {x!r}·{y!r}")
            if z not in elems:
                raise SiteError(f"product {x!r}·{y!r} = {z!r} is not an element")
        for x in self.elements:
            if self.table[(self.unit, x)] != x or self.table[(x, self.unit)] != x:
                raise SiteError(f"unit law fails at {x!r}")
        for x, y, z in product(self.elements, repeat=3):
            if self.table[(self.table[(x, y)], z)] != self.table[(x, self.table[(y, z)])]:
                raise SiteError(f"associativity fails on triple ({x!r}, {y!r}, {z!r})")

    def mul(self, x, y):
        return self.table[(x, y)]

    def __repr__(self):
        return f"FiniteMonoid({list(self.elements)})"


def monoid_as_category(m: FiniteMonoid, obj="*") -> FiniteCategory:
    """The one-object category with endomorphisms the elements of ``m``.

    Composition is monoid multiplication (g∘f = g·f), so presheaves on the
    result are right m-sets and the representable has the right translation
    action of m on itself.
    """
    morphisms = [(x, obj, obj) for x in m.elements]
    table = {(g, f): m.table[(g, f)] for g, f in product(m.elements, repeat=2)}
    return FiniteCategory([obj], morphisms, {obj: m.unit}, table)


# ---------------------------------------------------------------------------
# finite posets and finite spaces
# ---------------------------------------------------------------------------

class FinitePoset:
    """A finite poset.  ``leq`` is the full order relation as a set of pairs.

    Reflexive pairs are added automatically; transitivity and antisymmetry
    are checked and the first violation is reported with a witness.
    """

    def __init__(self, elements, leq):
        self.elements = tuple(str(x) for x in elements)
        elems = set(self.elements)
        if len(elems) != len(self.elements):
            raise SiteError("duplicate poset element")
        rel = {(str(a), str(b)) for a, b in leq}
        for a, b in rel:
            if a not in elems or b not in elems:
                raise SiteError(f"relation mentions unknown element: {a!r} <= {b!r}")
        rel |= {(x, x) for x in self.elements}
        for (a, b) in sorted(rel):
            for (c, d) in sorted(rel):
                if b == c and (a, d) not in rel:
                    raise SiteError(
                        f"relation is not transitive: {a!r} <= {b!r} <= {d!r} "
                        f"but not {a!r} <= {d!r}")
        for (a, b) in sorted(rel):
            if a != b and (b, a) in rel:
                raise SiteError(f"relation is not antisymmetric: {a!r} <= {b!r} <= {a!r}")
        self.leq = frozenset(rel)

    def le(self, a, b):
        return (a, b) in self.leq

    def __repr__(self):
        return f"FinitePoset({list(self.elements)})"


def poset_as_site(p: FinitePoset) -> FiniteCategory:
    """The thin site of a finite poset.

    Convention: a poset carries the Alexandrov topology whose opens are the
    up-sets, so the minimal open neighbourhood of x is ↑x and ↑x ⊆ ↑y iff
    y <= x.  The site therefore has one morphism x -> y exactly when y <= x.
    Under this convention a poset with a top element is an irreducible space
    (the top is the generic point).
    """
    objects = list(p.elements)
    morphisms = []
    table = {}
    identity = {}
    mid = {}
    for x in p.elements:
        for y in p.elements:
            if p.le(y, x):
                m = f"id:{x}" if x == y else f"{x}>{y}"
                mid[(x, y)] = m
                morphisms.append((m, x, y))
                if x == y:
                    identity[x] = m
    for (x, y), f in mid.items():
        for (y2, z), g in mid.items():
            if y2 == y:
                table[(g, f)] = mid[(x, z)]
    return FiniteCategory(objects, morphisms, identity, table)


class FiniteSpace:
    """A finite topological space: points and the full family of opens."""

    def __init__(self, points, opens):
        self.points = tuple(str(x) for x in points)
        pts = frozenset(self.points)
        if len(pts) != len(self.points):
            raise SiteError("duplicate point")
        fam = {frozenset(str(x) for x in u) for u in opens}
        for u in fam:
            if not u <= pts:
                raise SiteError(f"open set {sorted(u)} contains unknown points")
        if frozenset() not in fam:
            raise SiteError("the empty set is not open")
        if pts not in fam:
            raise SiteError("the full point set is not open")
        for u in fam:
            for v in fam:
                if u | v not in fam:
                    raise SiteError(f"opens not closed under union: {sorted(u)} ∪ {sorted(v)}")
                if u & v not in fam:
                    raise SiteError(
                        f"opens not closed under intersection: {sorted(u)} ∩ {sorted(v)}")
        self.opens = frozenset(fam)

    def minimal_open(self, x):
        """Intersection of all opens containing x (open, since opens form a finite lattice)."""
        out = frozenset(self.points)
        for u in self.opens:
            if x in u:
                out &= u
        return out

    def __repr__(self):
        return f"FiniteSpace({len(self.points)} points, {len(self.opens)} opens)"


def space_to_site(x: FiniteSpace) -> FiniteCategory:
    """The poset of minimal open neighbourhoods of ``x``, ordered by inclusion.

    Sheaves on a finite space are presheaves on this poset: the stalk at a
    point is the value on its minimal open, and restriction of sections
    corresponds contravariantly to inclusion.  Each distinct minimal open is
    named ``U@p`` after its alphabetically first point p with that minimal
    open.
    """
    mins = {}
    for p in x.points:
        mins.setdefault(x.minimal_open(p), []).append(p)
    name = {u: f"U@{min(ps)}" for u, ps in mins.items()}
    opens = sorted(mins, key=lambda u: (len(u), sorted(u)))
    objects = [name[u] for u in opens]
    morphisms, identity, table = [], {}, {}
    mid = {}
    for u in opens:
        for v in opens:
            if u <= v:
                m = f"id:{name[u]}" if u == v else f"{name[u]}>{name[v]}"
                mid[(u, v)] = m
                morphisms.append((m, name[u], name[v]))
                if u == v:
                    identity[name[u]] = m
    for (u, v), f in mid.items():
        for (v2, w), g in mid.items():
            if v2 == v:
                table[(g, f)] = mid[(u, w)]
    return FiniteCategory(objects, morphisms, identity, table)


# ---------------------------------------------------------------------------
# categorical combinatorics
# ---------------------------------------------------------------------------

def connected_components(d: FiniteCategory):
    """Partition of the objects under "a morphism exists between them".

    Returns a tuple of tuples of objects; each class sorted by object order,
    classes ordered by their first object.  Empty category -> empty tuple.
    """
    idx = {c: i for i, c in enumerate(d.objects)}
    parent = list(range(len(d.objects)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for m, s, t in d.morphisms:
        a, b = find(idx[s]), find(idx[t])
        if a != b:
            parent[b] = a
    classes = {}
    for c in d.objects:
        classes.setdefault(find(idx[c]), []).append(c)
    comps = sorted(classes.values(), key=lambda cl: idx[cl[0]])
    return tuple(tuple(cl) for cl in comps)


@dataclass(frozen=True)
class ContractibilityCertificate:
    """Sound evidence that the nerve of a category is contractible.

    kind is one of ``initial``, ``terminal``, ``cone_to_constant`` (a natural
    transformation Id ⟹ Δ_apex) or ``cone_from_constant`` (Δ_apex ⟹ Id);
    components maps each object to the component morphism at that object.
    Any of these yields a homotopy from the identity of the nerve to a
    constant map, hence contractibility.  Absence of a certificate proves
    nothing: the search is sound but deliberately incomplete.
    """
    kind: str
    apex: str
    components: tuple


def _cone_search(d: FiniteCategory, apex, to_constant: bool):
    # components eta_x: x -> apex with eta_y ∘ f = eta_x for every f: x -> y
    # (to_constant), or zeta_x: apex -> x with f ∘ zeta_x = zeta_y (from_constant).
    objs = d.objects
    assign = {}

    def ok(x, m):
        for f, s, t in d.morphisms:
            if to_constant:
                if s == x and t in assign and d.compose_table[(assign[t], f)] != m:
                    return False
                if t == x and s in assign and d.compose_table[(m, f)] != assign[s]:
                    return False
            else:
                if s == x and t in assign and d.compose_table[(f, m)] != assign[t]:
                    return False
                if t == x and s in assign and d.compose_table[(f, assign[s])] != m:
                    return False
        return True

    def rec(i):
        if i == len(objs):
            return True
        x = objs[i]
        cands = d.hom.get((x, apex) if to_constant else (apex, x), ())
        for m in cands:
            if ok(x, m):
                assign[x] = m
                if rec(i + 1):
                    return True
                del assign[x]
        return False

    if rec(0):
        return tuple(sorted(assign.items()))
    return None


def contractibility_certificate(d: FiniteCategory):
    """Find an initial object, a terminal object, or a cone between the
    identity functor and a constant functor.  Returns a certificate or None;
    None is NOT a proof of non-contractibility (the general problem reduces
    to group triviality, which is undecidable)."""
    if not d.objects:
        return None
    for c in d.objects:
        if all(len(d.hom.get((c, x), ())) == 1 for x in d.objects):
            comps = tuple(sorted((x, d.hom[(c, x)][0]) for x in d.objects))
            return ContractibilityCertificate("initial", c, comps)
    for c in d.objects:
        if all(len(d.hom.get((x, c), ())) == 1 for x in d.objects):
            comps = tuple(sorted((x, d.hom[(x, c)][0]) for x in d.objects))
            return ContractibilityCertificate("terminal", c, comps)
    for c in d.objects:
        comps = _cone_search(d, c, to_constant=True)
        if comps is not None:
            return ContractibilityCertificate("cone_to_constant", c, comps)
    for c in d.objects:
        comps = _cone_search(d, c, to_constant=False)
        if comps is not None:
            return ContractibilityCertificate("cone_from_constant", c, comps)
    return None
