"""Synchronization of a single dissipative spin.

Spin coherent states and Husimi-Q phase portraits on the sphere, the
phase-locking measure S(phi), master-equation dynamics with gain and damping
anchored at the spin poles, and the parameter studies built on top: locking
curves, the Arnold tongue, limit-cycle breakdown, and the spin-1/2 no-go
report. See the cli module for the file-producing command-line entry point.
"""

__version__ = "0.1.0"

from .dynamics import (
    DegenerateSteadyStateError,
    Liouvillian,
    SteadyStateError,
    SystemParams,
    Trajectory,
    build_liouvillian,
    evolve,
    limit_cycle_validity,
    mean_sz,
    steady_state,
    validate_density_matrix,
)
from .experiments import (
    SweepResult,
    SweepRow,
    SweepSpec,
    analytic_sdot,
    analytic_steady_s,
    arnold_sweep,
    breakdown_scan,
    first_order_consistency,
    qubit_nogo_report,
    spin_comparison,
)
from .husimi import (
    PhaseDistribution,
    QField,
    SphereGrid,
    coherent_amplitudes,
    husimi_q,
    make_grid,
    peak,
    sphere_integral,
    sync_measure,
)
from .io import (
    density_from_json,
    density_to_json,
    write_json,
    write_phase_csv,
    write_qfield_csv,
    write_spin_table_csv,
    write_sweep_csv,
    write_trajectory_csv,
)
from .spin_algebra import (
    SphereDirection,
    SpinAlgebra,
    build_spin_algebra,
    check_spin,
    coherent_overlap,
    coherent_state,
    free_evolve,
    wigner_small_d,
)

__all__ = [
    "__version__",
    "SpinAlgebra",
    "SphereDirection",
    "build_spin_algebra",
    "check_spin",
    "wigner_small_d",
    "coherent_state",
    "coherent_overlap",
    "free_evolve",
    "SphereGrid",
    "QField",
    "PhaseDistribution",
    "make_grid",
    "coherent_amplitudes",
    "husimi_q",
    "sphere_integral",
    "sync_measure",
    "peak",
    "SystemParams",
    "Liouvillian",
    "Trajectory",
    "SteadyStateError",
    "DegenerateSteadyStateError",
    "build_liouvillian",
    "validate_density_matrix",
    "evolve",
    "steady_state",
    "limit_cycle_validity",
    "mean_sz",
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "analytic_sdot",
    "analytic_steady_s",
    "first_order_consistency",
    "arnold_sweep",
    "breakdown_scan",
    "spin_comparison",
    "qubit_nogo_report",
    "density_to_json",
    "density_from_json",
    "write_json",
    "write_qfield_csv",
    "write_phase_csv",
    "write_sweep_csv",
    "write_trajectory_csv",
    "write_spin_table_csv",
]
