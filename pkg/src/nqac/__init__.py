"""Numerical toolkit for the mean-field theory of nested-encoding p-spin
models in a transverse field: free-energy evaluators, saddle-point solvers,
phase-transition location and classification, spectral-gap estimates,
metastability maps, and exact brute-force oracles at small sizes.
"""

__version__ = "0.1.0"

from .model import (DomainError, FreeEnergySample, InputError, ModelParams,
                    SectorConfig, free_energy, free_energy_curve,
                    free_energy_hybrid, free_energy_hybrid_curve,
                    free_energy_with_degeneracy, normalized, sample,
                    scale_params)
from .saddle import (SaddleSolution, SolverSettings, global_minimum,
                     solve_sectored, solve_symmetric)
from .phase import (TaylorCoefficients, TransitionReport, barrier_metrics,
                    classify_transition, critical_line_p2, degenerate_minima,
                    fm_temperature_ceiling, hybrid_critical_line,
                    lambda_critical, locate_gamma_c1, locate_gamma_c2,
                    taylor_coefficients)
from .gap import (GapEstimate, SpinWaveSpectrum, gap_exponent_fit,
                  instanton_overlap, spinwave_spectrum)
from .metastability import (MetastabilityRegion, OccupancySpectrum,
                            af_metastable_exists, af_occupancy,
                            af_zero_T_threshold, fm_disappearance_point,
                            fm_metastable_exists, fm_occupancy,
                            fm_zero_T_threshold, trace_fm_region)
from .oracle import (EncodedInstance, SpectrumResult, classical_spectrum,
                     decode_majority, encode, load_instance, quantum_gap,
                     save_instance)

__all__ = [name for name in dir() if not name.startswith("_")]
