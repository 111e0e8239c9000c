import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from toposdim import (FiniteMonoid, FinitePoset, monoid_as_category,
                      poset_as_site, elements_category, representable)
from toposdim.cli import SiteDocument
from toposdim.corpus import BUILTIN_SITES


CORPUS_NAMES = sorted(BUILTIN_SITES)


def corpus_site(name):
    return SiteDocument.make("builtin", name, {}).site()


@pytest.fixture(scope="session")
def corpus_sites():
    return {name: corpus_site(name) for name in CORPUS_NAMES}


# ---------------------------------------------------------------------------
# randomized small sites (seeded, deterministic)
# ---------------------------------------------------------------------------

def random_poset_site(rng: random.Random, max_elems=5):
    n = rng.randint(1, max_elems)
    elems = [f"p{i}" for i in range(n)]
    rel = set()
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.4:
                rel.add((elems[i], elems[j]))
    # transitive closure keeps antisymmetry because edges only go upward
    changed = True
    while changed:
        changed = False
        for (a, b) in list(rel):
            for (c, d) in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    return poset_as_site(FinitePoset(elems, rel))


def random_transformation_monoid(rng: random.Random, points=3, max_size=8):
    for _ in range(50):
        k = rng.randint(1, 2)
        maps = {tuple(range(points))}
        for _ in range(k):
            maps.add(tuple(rng.randrange(points) for _ in range(points)))
        # close under composition
        frontier = list(maps)
        while frontier:
            f = frontier.pop()
            for g in list(maps):
                for h in (tuple(f[g[i]] for i in range(points)),
                          tuple(g[f[i]] for i in range(points))):
                    if h not in maps:
                        maps.add(h)
                        frontier.append(h)
            if len(maps) > max_size:
                break
        if len(maps) <= max_size:
            names = {m: ("1" if m == tuple(range(points)) else
                         "".join(str(x) for x in m)) for m in sorted(maps)}
            table = {}
            for f in maps:
                for g in maps:
                    fg = tuple(f[g[i]] for i in range(points))
                    table[(names[f], names[g])] = names[fg]
            monoid = FiniteMonoid(sorted(names.values()), table, "1")
            return monoid_as_category(monoid)
    raise AssertionError("could not sample a small transformation monoid")


def random_site(rng: random.Random):
    roll = rng.random()
    if roll < 0.5:
        site = random_poset_site(rng)
    else:
        site = random_transformation_monoid(rng)
    if rng.random() < 0.25 and site.objects:
        c = rng.choice(site.objects)
        site = elements_category(representable(site, c))
    return site


@pytest.fixture(scope="session")
def random_sites():
    rng = random.Random(20260810)
    return [random_site(rng) for _ in range(220)]
