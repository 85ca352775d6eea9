"""Coded distributed matrix multiplication over finite fields.

The package builds function fields whose rational places outnumber the base
field, encodes matrix-product shares at those places, simulates straggling
workers, and decodes the exact product once the recovery threshold is met.
"""

from . import catalog
from .codes import (BasisDescriptor, EncodedTask, SchemeParams, WorkerResult,
                    basis_descriptor, check_code_condition, decode,
                    decode_with_coefficients, encode, partition,
                    recovery_threshold, scheme_params, worker_multiply)
from .curves import (FriendlyReport, KummerCurve, Place, PoleData, RationalCurve,
                     TraceCurve, curve_from_json, curve_to_json, enumerate_places,
                     evaluate_monomial, extension_degree, genus, hasse_weil_check,
                     place_census, places_to_csv, pole_data, usable_places,
                     validate_curve, verify_friendly)
from .exceptions import *  # noqa: F401,F403 -- stable error surface
from .field import Field, arith, make_field
from .linalg import Matrix, OpCounter, matmul, rank, right_inverse, solve_exact
from .sim import (FixedOrder, SeededRandom, SimConfig, SimReport,
                  compare_rational_baseline, run_simulation, sim_config_from_json,
                  sim_config_to_json, straggler_sweep)

__version__ = "0.1.0"
