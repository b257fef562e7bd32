"""Toeplitz linear systems solved through their associated circulant matrices.

Modules
-------
dft        radix-2 and Bluestein discrete Fourier transforms
symbols    generating functions and their Fourier coefficients
matrices   Toeplitz and circulant matrices, solves and distances
emulator   statevector emulation of the quantum circulant solver
analysis   convergence sweeps, error decompositions and rate checks
cli        command line front end (``python -m circtoep``)
"""
from .analysis import (
    convergence_sweep,
    decompose_frobenius_error,
    eigenvalue_matching,
    records_to_csv,
    solution_errors,
)
from .dft import dft, unitary_dft, unitary_idft
from .emulator import EmulationConfig, Grover, gate_count_model, oracle_values, prepare_state, run_pipeline
from .errors import (
    CapExceededError,
    ConvergenceError,
    DimensionMismatchError,
    DomainError,
    RotationConstantError,
    SingularMatrixError,
    ToeplitzError,
)
from .matrices import (
    CirculantMatrix,
    ToeplitzMatrix,
    associated_circulant,
    circulant_from_sequence,
    circulant_solve,
    condition_number,
    frobenius_distance,
    toeplitz_from_symbol,
    toeplitz_matvec,
    toeplitz_solve_dense,
)
from .symbols import (
    BandSymbol,
    Constant,
    KacMurdockSzego,
    PSeries,
    ShiftedCosine,
    parse_symbol,
    sample_grid,
)

__version__ = "0.1.0"
