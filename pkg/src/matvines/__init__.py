"""MAT-labeled graphs, locally regular vines, and the constructive
correspondence between them."""

from .errors import (GraphInputError, InternalDefectError, MatvinesError,
                     MorphismError, PosetInputError, PreconditionError,
                     ResourceLimitError)
from .verdict import Verdict, Violation
from .labeled_graph import (Graph, LabeledGraph, check_mat_labeling,
                            extend_to_complete, find_mat_labeling,
                            find_mat_peo, glue, is_mat_simplicial,
                            is_strongly_chordal, maximal_cliques,
                            merge_complete, principal_clique,
                            principal_cliques)
from .vine_poset import (Classification, ForestSequence, JoinPaths, VineClass,
                         VinePoset, build_standard, c_vine, classify,
                         classify_via_principal_ideals, complete_union,
                         cond_sets, count_ideals, d_vine, find_sampling_order,
                         from_forest_sequence, hat, is_sampling_order,
                         iter_ideals, join_and_paths, marginalize,
                         root_poset_a, to_forest_sequence, truncate, union_of)
from .functors import (GraphMorphism, PosetMorphism, RoundtripResult,
                       check_pushout, embed_in_r_vine, lift_graph_morphism,
                       lift_poset_morphism, omega, psi, roundtrip_check)
from .enumeration import (AgreementReport, EnumerationReport, a047970,
                          are_isomorphic, are_isomorphic_vines, canonical_form,
                          catalan, e_formula, enumerate_mat_labelings_complete,
                          mat_sc_agreement, poset_isomorphism,
                          random_chordal_graph, random_mat_labeled_graph)

__version__ = "0.1.0"
