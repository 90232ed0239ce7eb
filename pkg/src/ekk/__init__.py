"""Exact-arithmetic models of loop-space quotients of the 4-sphere and the
split E-series Lie algebra symmetries acting on them."""

from .algebra import (Element, Generator, INHOMOGENEOUS, Monomial,
                      UniverseError, monomial_product)
from .dgca import (CheckReport, Dgca, DgcaHom, cyclification_model,
                   d_squared_zero, free_loop_model, hom0_check, is_chain_map,
                   model_over_w, model_s4, semifree_model, toroidify)
from .derivations import (Derivation, DerivationSpaceBasis, bracket,
                          commutes_with_differential, derivation_basis,
                          s_derivation)
from .cartan import (CartanData, CartanMatrix, ParabolicSplit, RootSystem,
                     cartan_data, cartan_matrix, parabolic_split,
                     positive_roots)
from .action import (ChevalleyAction, VerifyReport, build_action,
                     gravity_line_rank, h_derivation, monomial_weight,
                     torus_automorphism, verify_action, weight_of)
from .adjunction import (AdjunctionPair, Totalization, adjunction_pair,
                         factors_through_truncation, hom_backward,
                         hom_forward, totalize, truncated_correspondence)

__version__ = "0.1.0"
