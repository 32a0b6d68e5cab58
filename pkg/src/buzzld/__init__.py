"""Flash-crowd workload modeling and large-deviation based provisioning."""

__version__ = "0.1.0"

from .model import (BUZZ_PARAMS, BUZZFREE_PARAMS, Generator, ModelParams,
                    SteadyState, build_generator, is_irreducible, load_params,
                    marginal_i, steady_state)
from .provision import (CapacityQuery, ProvisionAnswer, TimescaleQuery,
                        capacity_margin, loss_rate, max_servers,
                        overflow_probability, reactive_timescale)
from .simulate import SampledSeries, Trace, ingest_csv, sample, simulate
from .spectrum_empirical import (BlockSums, EmpiricalSpectrum, block_sums,
                                 empirical_scgf, estimate_spectrum)
from .spectrum_theory import (DEFAULT_Q_GRID, ScgfCurve, Spectrum,
                              deviation_probability, legendre, scgf)

__all__ = [
    "BUZZ_PARAMS", "BUZZFREE_PARAMS", "BlockSums", "CapacityQuery",
    "DEFAULT_Q_GRID", "EmpiricalSpectrum", "Generator", "ModelParams",
    "ProvisionAnswer", "SampledSeries", "ScgfCurve", "Spectrum", "SteadyState",
    "TimescaleQuery", "Trace", "block_sums", "build_generator",
    "capacity_margin", "deviation_probability", "empirical_scgf",
    "estimate_spectrum", "ingest_csv", "is_irreducible", "legendre",
    "load_params", "loss_rate", "marginal_i", "max_servers",
    "overflow_probability", "reactive_timescale", "sample", "scgf",
    "simulate", "steady_state",
]
