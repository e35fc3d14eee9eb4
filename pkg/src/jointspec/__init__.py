"""Projective joint spectra, Fuglede-Kadison determinants and spectral
dynamics for pencils over dihedral and self-similar groups."""

from __future__ import annotations

from .analysis import (
    dn_trace_resolvent,
    fk_det_closed,
    fk_det_general,
    fk_det_quadrature,
    homology_coupling,
    mahler_measure,
    tr_singular_points,
    trace_resolvent,
    winding_number,
)
from .dynamics import map_F, map_F1, map_F2, orbit, psi
from .numerics import QuadratureConfig, mat_det, normalized_trace, periodic_quadrature, trace_inverse, track_argument
from .pencil import ClosedPath, Complex3Point, Pencil, evaluate, pedersen_pencil, rho_theta_pencil
from .selfsimilar import Automaton, LevelRep, act, build_level_rep, builtin_automaton, u_level_matrix
from .spectrum import (
    dn_det_closed,
    dn_pencil,
    in_spectrum_dinf,
    in_spectrum_dn,
    in_spectrum_projections,
    phi_eval,
    qn_det_identity_check,
    qn_pencil,
    slice_curves,
    spectrum_parameter,
)

__version__ = "0.1.0"
