"""Exact Collatz dynamics, level sets, rational representations and the tau/phi codec."""

from .accel import (
    WindowTable,
    accel_step,
    accel_total_stopping_time,
    build_window_table,
    c4_witness,
)
from .analytics import (
    RecordEntry,
    an_scan,
    candidate_check,
    gamma,
    level_set_growth,
    orbit_angle,
    zeta,
    zeta_ratio,
)
from .codec import (
    alpha_sequence,
    check_alpha_formulas,
    check_phi_s_correspondence,
    phi,
    tau,
    tau_image_lambda,
)
from .levelsets import (
    TupleRep,
    check_equality,
    enumerate_lambda,
    l1_members,
    l2_odd_members,
    level_set,
    rep_from_orbit,
    tuple_value,
)
from .orbit import (
    DEFAULT_CAP,
    OrbitRecord,
    UnresolvedOrbit,
    curve_params,
    orbit,
    parity_trace,
    step,
    step_trig,
    stopping_time,
    total_stopping_time,
)
from .scan import Checkpoint, CheckpointError, ScanReport, verify_range

__version__ = "0.1.0"
