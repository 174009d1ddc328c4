"""Exact simplicial finite element exterior calculus.

Whitney forms and trimmed polynomial differential form spaces on
simplices, with exact rational arithmetic throughout: spanning families
and their canonical resolutions, three systems of degrees of freedom with
unisolvence checking and commuting interpolation, and edge-length-based
metric computations (Cayley-Menger volumes, gradient products, mass
matrices).
"""

from .complexes import (Cochain, SimplicialComplex, Simplex, boundary,
                        coboundary, face_complex, hodge_cochain_map,
                        incidence, opposite, simplex)
from .forms import (BaryForm, affine_pullback, canonicalize, de_rham,
                    evaluate, exterior_derivative, form_to_text, integrate,
                    integrate_over_face, koszul, monomial_volume_integral,
                    multi_indices, polynomial_degree, pullback_to_face,
                    wedge)
from .whitney import (SpanningFamily, dim_P, dim_Pminus, is_trimmed, mu,
                      spanning_family, trimmed_basis, trimmed_basis0,
                      whitney)
from .metric import (EdgeMetric, VolScaled, cayley_menger_volume_sq,
                     form_inner_product, grad_products, mass_entry,
                     mass_matrix)
from .bases import (NodeTable, basis_family, bernstein_nodes,
                    de_casteljau_eval, is_admissible, lagrange_nodes)
from .dofs import (DofMatrix, DofSystem, Interpolator, SmallSimplex,
                   canonical_dof_system, canonical_dofs, check_unisolvent,
                   d_matrix, harmonic_dof_system, interpolate,
                   principal_lattice, small_dof_matrix, small_simplices,
                   small_unisolvent_system, unisolvent_subset,
                   volumetric_check, whitney_integral_det)
from .resolve import (GeometricDecomposition, LinearMapOnFamilies,
                      Redundancy, Resolution, beta_map,
                      eliminate_redundancy, geometric_decomposition,
                      resolution_qwedge, resolution_trimmed,
                      resolution_trimmed0, sigma0_map, sigma_map, tau_map)

__version__ = "0.1.0"
