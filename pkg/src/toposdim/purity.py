"""Density and n-purity of sieves, and the n-pure topology.

A sieve S on c is tested through its pullbacks: for every morphism
f: d -> c the slice comparison is controlled by the category of elements of
f*S.  On a presheaf topos the relevant direct images are computed pointwise
(no sheafification intervenes), so the pointwise criteria are:

  level >= -1 (dense):   every El(f*S) is nonempty;
  level >=  0:           every El(f*S) is connected;
  level >=  1:           every π₁(El(f*S)) is trivial (certified);
  level >=  m (m >= 2):  H^i(El(f*S); A) = 0 for 2 <= i <= m and all abelian A.

Quantifier discharge, documented where used: "H⁰ comparison is an
isomorphism for all set coefficients" holds iff the element category has
exactly one component (the diagonal A -> A^k is injective for every A iff
k >= 1 and bijective for every A iff k = 1, probe A of sizes 0 and 2);
"H¹ trivial for all group coefficients" holds iff π₁ is trivial (delegated
to the three-valued certificate); "H^m = 0 for all abelian coefficients"
is the universal-coefficient condition on integral homology.

Only sieves on representables are tested; covers of arbitrary objects are
detected along their generalized elements by locality, and a property test
compares against direct computation on small non-representable objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .fincat import FiniteCategory, SiteError, connected_components, \
    contractibility_certificate
from .homology import nerve_chain_complex, homology_group, \
    vanishes_all_coefficients, restriction_cohomology_map
from .pi1 import pi1_presentation, triviality_certificate
from .presheaf import (GrothendieckTopology, Sieve, elements_of_sieve,
                       enumerate_sieves, is_topology, maximal_sieve,
                       pullback_sieve)

INFINITY = math.inf


class InvariantViolation(RuntimeError):
    """A verified mathematical invariant failed; this indicates a bug in the
    implementation (or its inputs), never an acceptable outcome."""


class BudgetError(RuntimeError):
    """A computation could not reach an exact verdict within its budget."""


@dataclass(frozen=True)
class PurityConfig:
    """Budgets for the unbounded quantifiers in the purity tests.

    max_degree bounds the nerve truncation (finite purity levels are
    certifiable up to max_degree - 1); group_bound bounds the symmetric
    groups probed for π₁ triviality; p_set lists primes for auxiliary
    mod-p checks.
    """
    max_degree: int = 4
    group_bound: int = 5
    p_set: tuple = (2, 3, 5)

    def __post_init__(self):
        if self.max_degree < 0:
            raise ValueError("max_degree must be >= 0")
        if self.group_bound < 2:
            raise ValueError("group_bound must be >= 2")


@dataclass(frozen=True)
class PullbackEvidence:
    """Analysis of one pullback: the level it supports and how it is known.

    flavor 'exact' means the level is the true one (witnessed failure one
    degree up, or a contractibility certificate for level ∞); flavor
    'up_to_budget' means the checks ran out of budget at this level.
    """
    morphism: str
    level: float
    flavor: str
    detail: str


@dataclass(frozen=True)
class PurityCertificate:
    """Verdict for one sieve: its certified purity level with evidence.

    level -2 means not even dense somewhere; -1 dense; 0 additionally
    connected slices; m >= 1 additionally trivial π₁ and vanishing homology
    through degree m; ∞ means every pullback carries a contractibility
    certificate.  certified is 'exact' when the level is the true level and
    'up_to_budget' when it is only a verified lower bound.
    """
    base: str
    members: tuple
    level: float
    certified: str
    witness: object
    pullbacks: tuple

    def at_least(self, n) -> bool:
        return self.level >= n


class PurityAnalyzer:
    """Shared caches for purity analysis over one site and configuration.

    Distinct morphisms with equal pullback sieves share their element-
    category analysis; this is the only optimization applied and it is
    verdict-preserving by construction.
    """

    def __init__(self, site: FiniteCategory, cfg: PurityConfig = PurityConfig()):
        self.site = site
        self.cfg = cfg
        self._el = {}
        self._sieve = {}

    # -- per-pullback analysis ------------------------------------------------

    def _analyze_elements(self, t: Sieve):
        key = (t.base, t.members)
        if key in self._el:
            return self._el[key]
        cfg = self.cfg
        el = elements_of_sieve(t)
        if not el.objects:
            result = (-2, "exact", "empty category of elements")
        else:
            cert = contractibility_certificate(el)
            if cert is not None:
                result = (INFINITY, "exact", f"contractible ({cert.kind} {cert.apex})")
            else:
                comps = connected_components(el)
                if len(comps) > 1:
                    result = (-1, "exact", f"{len(comps)} components")
                else:
                    result = self._analyze_connected(el)
        self._el[key] = result
        return result

    def _analyze_connected(self, el: FiniteCategory):
        cfg = self.cfg
        pres = pi1_presentation(el)
        cert = triviality_certificate(pres, cfg.group_bound)
        if cert.status == "nontrivial":
            return (0, "exact", f"nontrivial π₁: {cert.witness[0]}")
        if cert.status == "unknown":
            return (0, "up_to_budget", "π₁ undecided at group bound")
        level = 1
        if cfg.max_degree >= 3:
            complex_ = nerve_chain_complex(el, cfg.max_degree)
            for m in range(2, cfg.max_degree):
                if not vanishes_all_coefficients(complex_, m):
                    h = homology_group(complex_, m)
                    h1 = homology_group(complex_, m - 1)
                    reason = (f"H_{m} = {h}" if not h.is_zero()
                              else f"H_{m - 1} = {h1} has torsion")
                    return (m - 1, "exact", f"homology obstruction in degree {m}: {reason}")
                level = m
        return (level, "up_to_budget", f"clean through degree {level}, no contractibility certificate")

    # -- per-sieve certificates ----------------------------------------------

    def purity_level(self, s: Sieve) -> PurityCertificate:
        key = (s.base, s.members)
        if key in self._sieve:
            return self._sieve[key]
        site = self.site
        evidence = []
        seen = {}
        for f in site.into[s.base]:
            t = pullback_sieve(s, f)
            tkey = (t.base, t.members)
            if tkey in seen:
                continue
            seen[tkey] = f
            level, flavor, detail = self._analyze_elements(t)
            evidence.append(PullbackEvidence(f, level, flavor, detail))
        if not evidence:  # no morphisms into the base object cannot happen (identity)
            raise InvariantViolation(f"object {s.base!r} has no identity")
        min_level = min(e.level for e in evidence)
        exact_minima = [e for e in evidence if e.level == min_level and e.flavor == "exact"]
        if min_level == INFINITY:
            cert = PurityCertificate(s.base, tuple(sorted(s.members)), INFINITY,
                                     "exact", None, tuple(evidence))
        elif exact_minima:
            w = exact_minima[0]
            fail_degree = 0 if w.level <= -1 else int(w.level) + 1
            cert = PurityCertificate(
                s.base, tuple(sorted(s.members)), min_level, "exact",
                {"morphism": w.morphism, "degree": fail_degree, "detail": w.detail},
                tuple(evidence))
        else:
            cert = PurityCertificate(s.base, tuple(sorted(s.members)), min_level,
                                     "up_to_budget", None, tuple(evidence))
        self._sieve[key] = cert
        return cert

    def all_certificates(self):
        """Certificates for every sieve on every object, in canonical order."""
        out = []
        for c in self.site.objects:
            for s in enumerate_sieves(self.site, c):
                out.append((s, self.purity_level(s)))
        return out


def is_dense(s: Sieve) -> bool:
    """Every pullback along a generator is nonempty (level >= -1)."""
    site = s.site
    return all(pullback_sieve(s, f).members for f in site.into[s.base])


def purity_level(s: Sieve, cfg: PurityConfig = PurityConfig(),
                 analyzer: PurityAnalyzer | None = None) -> PurityCertificate:
    """The largest purity level certifiable for the sieve under the budget."""
    if analyzer is None:
        analyzer = PurityAnalyzer(s.site, cfg)
    return analyzer.purity_level(s)


def detect_stability(s: Sieve) -> bool:
    """True iff every pullback of the sieve is maximal or carried to the
    sieve itself by an isomorphism of base objects.  Stable sieves admit a
    pullback-skipping optimization; verdicts must not depend on it."""
    site = s.site
    for f in site.into[s.base]:
        t = pullback_sieve(s, f)
        d = site.src[f]
        if t.members == set(site.into[d]) or t.members == frozenset(site.into[d]):
            continue
        found = False
        for phi in site.isomorphisms(d, s.base):
            phi_star = pullback_sieve(s, phi)
            if phi_star.members == t.members:
                found = True
                break
        if not found:
            return False
    return True


def next_degree_mono_check(s: Sieve, n: int, p: int,
                           cfg: PurityConfig = PurityConfig(),
                           analyzer: PurityAnalyzer | None = None) -> bool:
    """For a sieve certified n-pure, test injectivity of the restriction map
    on degree-(n+1) cohomology with F_p coefficients.

    This is a falsification cross-check (it must come out true on every
    exactly certified instance), never a purity criterion.
    """
    cert = purity_level(s, cfg, analyzer)
    if not cert.at_least(n):
        raise SiteError(
            f"precondition violated: sieve is certified only to level {cert.level}, "
            f"needed {n}")
    depth = n + 2
    big = nerve_chain_complex(elements_of_sieve(maximal_sieve(s.site, s.base)), depth)
    small = nerve_chain_complex(elements_of_sieve(s), depth)
    _, injective = restriction_cohomology_map(big, small, n + 1, p)
    return injective


@dataclass(frozen=True)
class NPureTopologySummary:
    """Which sieves entered the topology and how solid their certificates are."""
    level: int
    covers: tuple            # ((object, members, level, certified) ...)
    budget_limited: tuple    # subset with certified == up_to_budget


def n_pure_topology(site: FiniteCategory, n, cfg: PurityConfig = PurityConfig(),
                    analyzer: PurityAnalyzer | None = None):
    """The topology whose covers are the sieves certified at least n-pure.

    The claim that these sieves form a topology is verified by both
    axiomatizations of :func:`is_topology`; a failure raises
    InvariantViolation with the witness (it would indicate a bug, e.g. a
    certification asymmetry, not a mathematical surprise).
    """
    if n < -1:
        raise ValueError("n must be >= -1")
    if analyzer is None:
        analyzer = PurityAnalyzer(site, cfg)
    covers = {}
    rows = []
    budget = []
    for c in site.objects:
        chosen = set()
        for s in enumerate_sieves(site, c):
            cert = analyzer.purity_level(s)
            if cert.at_least(n):
                chosen.add(s)
                row = (c, cert.members, cert.level, cert.certified)
                rows.append(row)
                if cert.certified == "up_to_budget":
                    budget.append(row)
        covers[c] = chosen
    topology = GrothendieckTopology(site, covers)
    ok, witness = is_topology(topology)
    if not ok:
        raise InvariantViolation(
            f"certified {n}-pure sieves do not form a topology: {witness}")
    return topology, NPureTopologySummary(n, tuple(rows), tuple(budget))
