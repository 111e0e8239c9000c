"""Independent oracles for the test suite.

Each oracle recomputes a quantity through a different route than the
library: the bar complex (tuples of monoid elements rather than composable
strings) with Smith normal form delegated to sympy; torsor counting by
direct enumeration of presheaves with a free transitive fiberwise group
action; groupification by the least cancellative congruence.  Agreement is
asserted in the tests; none of this code is reachable from the library.
"""

from __future__ import annotations

from itertools import product

from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors as _sympy_raw


def _sympy_invariants(mat):
    # sympy pads with zero invariant factors; only the nonzero ones carry rank
    return tuple(int(f) for f in _sympy_raw(mat) if int(f) != 0)


# ---------------------------------------------------------------------------
# bar complex of a finite monoid, homology via sympy
# ---------------------------------------------------------------------------

def bar_ranks_and_boundaries(monoid_table, unit, max_degree):
    """Normalized bar complex of a finite monoid.

    Degree m basis: tuples of m non-unit elements; the boundary drops the
    first or last letter or multiplies neighbours, with products equal to
    the unit giving zero.  Returns (basis sizes, boundary matrices as sympy
    Matrix).
    """
    elements = sorted({x for x, _ in monoid_table})
    letters = [x for x in elements if x != unit]
    basis = {0: [()]}
    for m in range(1, max_degree + 1):
        basis[m] = [t + (x,) for t in basis[m - 1] for x in letters]
    index = {m: {t: i for i, t in enumerate(basis[m])} for m in basis}
    boundaries = {}
    for m in range(1, max_degree + 1):
        rows, cols = len(basis[m - 1]), len(basis[m])
        mat = [[0] * cols for _ in range(rows)]
        for j, t in enumerate(basis[m]):
            faces = []
            faces.append(t[1:])                       # drop first
            for i in range(m - 1):
                prod_ = monoid_table[(t[i], t[i + 1])]
                if prod_ == unit:
                    faces.append(None)
                else:
                    faces.append(t[:i] + (prod_,) + t[i + 2:])
            faces.append(t[:-1])                      # drop last
            sign = 1
            for face in faces:
                if face is not None:
                    mat[index[m - 1][face]][j] += sign
                sign = -sign
        boundaries[m] = Matrix(mat)
    return {m: len(basis[m]) for m in basis}, boundaries


def bar_homology(monoid_table, unit, degree, max_degree):
    """(betti, torsion tuple) of H_degree of the bar complex, via sympy."""
    sizes, boundaries = bar_ranks_and_boundaries(monoid_table, unit, max_degree)
    if degree + 1 > max_degree:
        raise ValueError("increase max_degree")
    n = sizes[degree]
    out_factors = _sympy_invariants(boundaries[degree]) if degree >= 1 else ()
    in_factors = _sympy_invariants(boundaries[degree + 1])
    betti = n - len(out_factors) - len(in_factors)
    torsion = tuple(int(f) for f in in_factors if int(f) > 1)
    return betti, torsion


def bar_cohomology_mod_p(monoid_table, unit, degree, p, max_degree):
    """dim_{F_p} H^degree of the bar complex, from sympy invariant factors
    (the rank of an integer matrix over F_p is the number of its invariant
    factors not divisible by p)."""
    sizes, boundaries = bar_ranks_and_boundaries(monoid_table, unit, max_degree)

    def rank_p(mat):
        return sum(1 for f in _sympy_invariants(mat) if int(f) % p != 0)

    n = sizes[degree]
    rin = rank_p(boundaries[degree + 1])
    rout = rank_p(boundaries[degree]) if degree >= 1 else 0
    return n - rin - rout


def sympy_invariant_factors(entries):
    return tuple(int(f) for f in _sympy_invariants(Matrix(entries)))


# ---------------------------------------------------------------------------
# torsor counting by direct enumeration
# ---------------------------------------------------------------------------

def count_torsor_classes(site, group):
    """Isomorphism classes of group-torsors in the presheaf topos on the site.

    A torsor is a presheaf T with a free transitive fiberwise action; fixing
    an equivariant identification T(d) = G turns restrictions into right
    translations x -> x·a_f, so torsors are assignments a of group elements
    to non-identity morphisms with a_{g∘f} = a_g·a_f (and a_g·a_f = unit
    when g∘f is an identity); every fiber is nonempty so local nonemptiness
    is automatic.  Isomorphisms re-gauge fibers: a_f -> c_{tgt}⁻¹·a_f·c_src.
    Enumeration is a DFS with constraint propagation; classes are connected
    components under single-object re-gauges.
    """
    mor = [m for (m, s, t) in site.morphisms if not site.is_identity(m)]
    mor_sorted = sorted(mor)
    pos = {m: i for i, m in enumerate(mor_sorted)}
    g = group
    inv = g.inverse
    unit = g.unit
    # constraints: triples (gg, ff, comp) with comp None meaning identity
    triples = []
    for ff in mor:
        for gg in site.out_of[site.tgt[ff]]:
            if site.is_identity(gg):
                continue
            comp = site.compose_table[(gg, ff)]
            triples.append((gg, ff, None if site.is_identity(comp) else comp))
    by_mor = {m: [] for m in mor}
    for t in triples:
        for m in set(x for x in t if x is not None):
            by_mor[m].append(t)

    solutions = []
    val = {}

    def propagate(queue):
        # returns newly assigned list, or None on contradiction (undone)
        newly = []
        while queue:
            gg, ff, comp = queue.pop()
            a_g, a_f = val.get(gg), val.get(ff)
            a_c = unit if comp is None else val.get(comp)
            known = (a_g is not None) + (a_f is not None) + (a_c is not None)
            if known < 2:
                continue
            if known == 3:
                if g.mul(a_g, a_f) != a_c:
                    for m in newly:
                        del val[m]
                    return None
                continue
            if a_c is None:
                derived, target = g.mul(a_g, a_f), comp
            elif a_f is None:
                derived, target = g.mul(inv[a_g], a_c), ff
            else:
                derived, target = g.mul(a_c, inv[a_f]), gg
            val[target] = derived
            newly.append(target)
            queue.extend(by_mor[target])
        return newly

    def rec():
        free = next((m for m in mor_sorted if m not in val), None)
        if free is None:
            solutions.append(tuple(val[m] for m in mor_sorted))
            return
        for x in g.elements:
            val[free] = x
            added = propagate(list(by_mor[free]))
            if added is not None:
                rec()
                for m in added:
                    del val[m]
            del val[free]

    rec()
    if not mor_sorted:
        return 1  # only the constant torsor
    # classes under single-object re-gauges
    index = {sol: i for i, sol in enumerate(sorted(set(solutions)))}
    parent = list(range(len(index)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        i, j = find(i), find(j)
        if i != j:
            parent[j] = i

    for sol in index:
        assignment = dict(zip(mor_sorted, sol))
        for b in site.objects:
            for c_val in g.elements:
                moved = []
                for m in mor_sorted:
                    a = assignment[m]
                    if site.src[m] == b:
                        a = g.mul(a, c_val)
                    if site.tgt[m] == b:
                        a = g.mul(inv[c_val], a)
                    moved.append(a)
                union(index[sol], index[tuple(moved)])
    return len({find(i) for i in range(len(index))})


# ---------------------------------------------------------------------------
# groupification by least cancellative congruence
# ---------------------------------------------------------------------------

def groupification_order_and_exponents(monoid):
    """(order, sorted element orders) of the universal group of a finite
    monoid, computed as the quotient by the least congruence whose quotient
    is cancellative (a finite cancellative monoid is a group, and every
    homomorphism to a group factors through this quotient)."""
    elems = list(monoid.elements)
    parent = {x: x for x in elems}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        x, y = find(x), find(y)
        if x != y:
            parent[y] = x
            return True
        return False

    changed = True
    while changed:
        changed = False
        # congruence: a~a', b~b' forces ab ~ a'b'
        for a in elems:
            for b in elems:
                for a2 in elems:
                    if find(a2) != find(a):
                        continue
                    for b2 in elems:
                        if find(b2) != find(b):
                            continue
                        if union(monoid.mul(a, b), monoid.mul(a2, b2)):
                            changed = True
        # cancellation: xa ~ xb forces a ~ b; ax ~ bx forces a ~ b
        for x in elems:
            for a in elems:
                for b in elems:
                    if find(monoid.mul(x, a)) == find(monoid.mul(x, b)):
                        if union(a, b):
                            changed = True
                    if find(monoid.mul(a, x)) == find(monoid.mul(b, x)):
                        if union(a, b):
                            changed = True
    classes = sorted({find(x) for x in elems})
    idx = {c: i for i, c in enumerate(classes)}

    def q(x):
        return idx[find(x)]

    table = {}
    for a in elems:
        for b in elems:
            table[(q(a), q(b))] = q(monoid.mul(a, b))
    unit = q(monoid.unit)
    orders = []
    for c in range(len(classes)):
        power, k = c, 1
        while power != unit:
            power = table[(power, c)]
            k += 1
            if k > len(classes) + 1:
                raise AssertionError("quotient is not a group")
        orders.append(k)
    return len(classes), sorted(orders)
