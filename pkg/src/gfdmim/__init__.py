"""Link-level simulator for multi-user uplink GFDM with index modulation."""
from .simulate import (BerRecord, SimConfig, emit_csv, ml_oracle_decode, run_chain,
                       run_sweep, run_trial, snr_to_noise_power)

__version__ = "0.1.0"

__all__ = ["BerRecord", "SimConfig", "emit_csv", "ml_oracle_decode", "run_chain",
           "run_sweep", "run_trial", "snr_to_noise_power", "__version__"]
