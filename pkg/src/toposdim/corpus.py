"""Built-in example sites and coefficient groups.

Monoids: the trivial monoid, Z/2, Z/3, S3, the idempotent monoid {1, e} and
a 4-element non-Ore monoid (three left zeros with a unit adjoined).  The
bicyclic monoid is deliberately absent: its truncations are not monoids and
the full monoid is infinite.  Posets: discrete posets on 1-3 points and
chains.  Spaces: Sierpinski, the pseudo-circle and the 6-point
pseudo-2-sphere (minimal finite models of S¹ and S²).
"""

from __future__ import annotations

from itertools import permutations


def _perm_name(p):
    return "".join(str(i) for i in p)


def _s3_payload():
    elems = sorted(permutations(range(3)))
    mul = []
    for p in elems:
        for q in elems:
            pq = tuple(p[q[i]] for i in range(3))
            mul.append([_perm_name(p), _perm_name(q), _perm_name(pq)])
    return {
        "elements": [_perm_name(p) for p in elems],
        "unit": "012",
        "mul": mul,
    }


def _cyclic_payload(n):
    elems = [f"g{i}" if i else "1" for i in range(n)]
    mul = [[elems[i], elems[j], elems[(i + j) % n]]
           for i in range(n) for j in range(n)]
    return {"elements": elems, "unit": "1", "mul": mul}


def _left_zero_payload():
    elems = ["1", "a", "b", "c"]
    mul = []
    for x in elems:
        for y in elems:
            if x == "1":
                z = y
            elif y == "1":
                z = x
            else:
                z = x  # left zero part
            mul.append([x, y, z])
    return {"elements": elems, "unit": "1", "mul": mul}


def _union_closure(sets, points):
    fam = {frozenset(), frozenset(points)} | {frozenset(s) for s in sets}
    changed = True
    while changed:
        changed = False
        for u in list(fam):
            for v in list(fam):
                if u | v not in fam:
                    fam.add(u | v)
                    changed = True
    return sorted(fam, key=lambda u: (len(u), sorted(u)))


def _space_payload(points, minimal_opens):
    fam = _union_closure(minimal_opens, points)
    return {"points": list(points), "opens": [sorted(u) for u in fam]}


_SPHERE_MINIMAL = [
    {"a1"}, {"a2"},
    {"a1", "a2", "b1"}, {"a1", "a2", "b2"},
    {"a1", "a2", "b1", "b2", "c1"}, {"a1", "a2", "b1", "b2", "c2"},
]

BUILTIN_SITES = {
    "trivial-monoid": ("monoid", _cyclic_payload(1)),
    "z2": ("monoid", _cyclic_payload(2)),
    "z3": ("monoid", _cyclic_payload(3)),
    "s3": ("monoid", _s3_payload()),
    "idempotent-monoid": ("monoid", {
        "elements": ["1", "e"], "unit": "1",
        "mul": [["1", "1", "1"], ["1", "e", "e"], ["e", "1", "e"], ["e", "e", "e"]],
    }),
    "left-zero-4": ("monoid", _left_zero_payload()),
    "discrete-poset-1": ("poset", {"elements": ["x"], "le": []}),
    "discrete-poset-2": ("poset", {"elements": ["x", "y"], "le": []}),
    "discrete-poset-3": ("poset", {"elements": ["x", "y", "z"], "le": []}),
    "chain-2": ("poset", {"elements": ["x", "y"], "le": [["x", "y"]]}),
    "chain-3": ("poset", {"elements": ["x", "y", "z"],
                          "le": [["x", "y"], ["y", "z"], ["x", "z"]]}),
    "sierpinski": ("space", _space_payload(["0", "1"], [{"1"}])),
    "pseudo-circle": ("space", _space_payload(
        ["a", "b", "c", "d"], [{"c"}, {"d"}, {"a", "c", "d"}, {"b", "c", "d"}])),
    "pseudo-2-sphere": ("space", _space_payload(
        ["a1", "a2", "b1", "b2", "c1", "c2"], _SPHERE_MINIMAL)),
}


def builtin_group(name: str):
    """Small coefficient groups by name: z1..z6, v4, s3."""
    from .pi1 import cyclic_group, product_group, symmetric_group
    table = {
        "z1": lambda: cyclic_group(1),
        "z2": lambda: cyclic_group(2),
        "z3": lambda: cyclic_group(3),
        "z4": lambda: cyclic_group(4),
        "z5": lambda: cyclic_group(5),
        "z6": lambda: cyclic_group(6),
        "v4": lambda: product_group(cyclic_group(2, "s"), cyclic_group(2, "t")),
        "s3": lambda: symmetric_group(3),
    }
    if name not in table:
        raise KeyError(f"unknown builtin group {name!r} (have {sorted(table)})")
    return table[name]()


def groups_up_to_order(n: int):
    """Representatives of all isomorphism classes of groups of order <= n (n <= 6)."""
    if n > 6:
        raise ValueError("only groups of order <= 6 are tabulated")
    names = ["z1", "z2", "z3", "z4", "v4", "z5", "z6", "s3"]
    sizes = {"z1": 1, "z2": 2, "z3": 3, "z4": 4, "v4": 4, "z5": 5, "z6": 6, "s3": 6}
    return [(nm, builtin_group(nm)) for nm in names if sizes[nm] <= n]
