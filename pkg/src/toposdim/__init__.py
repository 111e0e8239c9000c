"""Exact dimension theory for presheaf toposes on finite sites.

Compute dense and n-pure sieves, the descending chain of n-pure topologies,
and the dimension, content and boundary of the presheaf topos on a finite
monoid, category, poset or topological space; plus fundamental-group and
homology machinery for the underlying nerves, and dedicated analyses for
right Ore and free monoids.
"""

__version__ = "0.1.0"

from .fincat import (FiniteCategory, FiniteMonoid, FinitePoset, FiniteSpace,
                     SiteError, connected_components, contractibility_certificate,
                     monoid_as_category, poset_as_site, space_to_site,
                     validate_category)
from .presheaf import (GrothendieckTopology, Presheaf, Sieve, a_pure_topology,
                       constant_presheaf, elements_category, elements_of_sieve,
                       enumerate_presheaves, enumerate_sieves, hom_presheaf,
                       is_sheaf, is_topology, largest_topology_for,
                       matching_families, maximal_sieve, empty_sieve,
                       pullback_sieve, representable, sheafify,
                       sieve_as_presheaf, sieve_closure, topology_generated,
                       trivial_topology)
from .homology import (ChainComplex, HomologyGroup, IntegerMatrix,
                       cohomology_mod_p, homology_group, invariant_factors,
                       nerve_chain_complex, restriction_cohomology_map,
                       smith_normal_form, vanishes_all_coefficients)
from .pi1 import (FiniteGroup, GroupPresentation, TrivialityCertificate,
                  abelianization, cyclic_group, h1_set, homs_to_finite_group,
                  pi1_presentation, product_group, symmetric_group,
                  triviality_certificate)
from .purity import (INFINITY, BudgetError, InvariantViolation, NPureTopologySummary,
                     PurityAnalyzer, PurityCertificate, PurityConfig,
                     detect_stability, is_dense, n_pure_topology,
                     next_degree_mono_check, purity_level)
from .dimension import (ContentReport, DimensionReport, FreeMonoidEvidence,
                        OreReport, SubtoposChain, content_descriptor,
                        dimension_report, free_monoid_report,
                        local_dimension_check, ore_and_groupification,
                        subtopos_chain)
from .corpus import BUILTIN_SITES, builtin_group, groups_up_to_order
