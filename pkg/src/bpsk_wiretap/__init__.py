"""Private capacities of the bosonic compound wiretap channel under BPSK modulation."""

from .capacity import (CapacityEntry, CapacityReport, ChannelParamSet, capacity_report,
                       capacity_sweep, cc_capacity, clip_nonnegative, cq_capacity, qq_capacity,
                       received_photon_number)
from .codesim import (Codebook, WiretapCodeReport, covering_distance, covering_trend, leakage,
                      leakage_monotonicity, sample_codebook, success_probability)
from .entropy import (binary_entropy, entropy_continuity_bound, h_bpsk, homodyne_error,
                      sample_entropy)
from .gram import (GramMatrix, WeightedEnsemble, average_state_distance, build_gram,
                   coherent_overlap, ensemble_entropy, srm_success)
from .scenario import ScenarioConfig, block_budget, run_sweep

__version__ = "0.1.0"
