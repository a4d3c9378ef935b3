# escat — weak-field photon scattering from multi-level quantum emitters

from ._core import (
    canonical_config,
    config_hash,
    evolve,
    run,
    single_excitation_rt,
    spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "canonical_config",
    "config_hash",
    "evolve",
    "run",
    "single_excitation_rt",
    "spectrum",
]
