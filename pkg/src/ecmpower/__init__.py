"""ECM performance model and phenomenological multicore power model.

Typical use::

    from ecmpower import load_machine, load_kernel, predict
    m = load_machine("sandy-bridge-ep")
    k = load_kernel("schoenauer-triad")
    p = predict(k, m, "memory", 2.7)
    p.rounded()   # {'core': 6, 'L1-L2': 10, ..., 'no_overlap': 50, ...}
"""
from .ecm import EcmPrediction, predict, to_performance
from .errors import DomainError, EcmPowerError, FitError, InputError
from .files import load_kernel, load_machine, load_measurements, load_params
from .fit import (decompose_per_core, fit_linear_in_cores, fit_quadratic_in_frequency,
                  MeasurementPoint, MeasurementSeries)
from .kernel import KernelDescription, StreamSpec, WorkMetric, code_balance, core_cycles, data_volumes
from .machine import (CacheLevel, MachineDescription, effective_bits_per_cycle, machine_balance,
                      validate_machine)
from .power import (EnergyAnalysis, PowerParameters, cost_energy_delay, energy_at_fopt,
                    energy_surface, energy_to_solution, optimal_frequency, performance_at_fopt,
                    power)
from .scaling import ScalingModel, roofline, saturation_point, scaling_curve
from .schedule import BACKEND, Contribution, schedule_min_makespan

__version__ = "0.1.0"
