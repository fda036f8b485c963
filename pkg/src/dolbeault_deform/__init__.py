"""Exact deformation theory of Dolbeault cohomology classes on finite
invariant models of compact complex manifolds."""

from .scalars import GaussRational, Poly, parse_gauss, parse_poly
from .model import ModelError, ModelSpec, derive_brackets, validate_model
from .algebra import (BundleSpec, Form, TensorForm, VectorForm, contract, parse_form,
                      parse_tensor_form, parse_vector_form, rho_extend, rho_inverse, wedge)
from .calculus import (d_op, del_, delbar, delbar_phi, fn_bracket, lie, lie10, lie01,
                       pairing)
from .hodge import cohomology_dim, harmonic_basis, hodge_package
from .kuranishi import BeltramiSeries, beltrami_series, solve_mc
from .deformed import (DeformedComplex, NonIntegrablePoint, deformed_cohomology_dim,
                       rebigrade_crosscheck)
from .extension import (DeformationReport, canonical_deformation, pullback_series,
                        vt_analysis)
from .special import (CanonicalTrivialization, HypothesisError, cy_deformation,
                      kahler_deformation, tian_todorov_residual, tu_map)
from .models import builtin, load_model, save_model

__version__ = "0.1.0"
