"""Classical information in thermal quantum states.

Encode a classical alphabet into a full-rank thermal system with a controlled
block-shift unitary, decode it with the matching projective measurement, and
account for every bit against the heat drawn from the bath.  The submodules
split along the pipeline:

    qmatrix       density-matrix and unitary primitives, entropies, ranks
    thermal       Gibbs states and coarse-grained (multi-copy) blockings
    protocol      register preparation, shift unitaries, the encoding map
    discriminate  POVMs, success probabilities, C_max, optimality certificates
    infotherm     Shannon/Holevo/mutual information, Fano floor, heat ledger
    ranklaws      rank inequalities and no-go probes for pure outputs
    verify        the grid verification engine behind `thermocode verify`
    cli           the `thermocode` command line entry point
"""

from .discriminate import (BarnettCrokeCertificate, ConditionalDistribution,
                           Povm, barnett_croke_certificate, c_max,
                           conditional_distribution,
                           exhaustive_permutation_oracle, helstrom_oracle,
                           projective_povm, success_probability)
from .infotherm import (ChainCheck, ThermoLedger, binary_entropy,
                        chain_inequality, fano_floor, holevo, l1_distance,
                        mutual_information, shannon_entropy, thermo_ledger)
from .protocol import (Ensemble, ProtocolInstance, Register,
                       circulant_overlap_table, controlled_unitary, encode,
                       overlap_table, prepare_register, shift_unitaries,
                       shift_unitary)
from .qmatrix import (RankReport, check_density_matrix,
                      check_probability_vector, check_unitary,
                      dephase_register, haar_unitary, numerical_rank,
                      partial_trace, purity, relative_entropy, tensor,
                      von_neumann_entropy)
from .ranklaws import (NogoProbeReport, OrthogonalEnsembleReport,
                       RankLawReport, lemma1_check, linear_dependence,
                       remark1_check, theorem1_nogo_probe)
from .thermal import (BlockedThermalState, Hamiltonian, SubspacePartition,
                      coarse_grain, gibbs_populations, gibbs_state,
                      multicopy_coarse_grain, multicopy_energies,
                      multicopy_index, partition_function)
from .verify import VerifyConfig, run_verification

__version__ = "0.1.0"

__all__ = [
    "BarnettCrokeCertificate", "BlockedThermalState", "ChainCheck",
    "ConditionalDistribution", "Ensemble", "Hamiltonian", "NogoProbeReport",
    "OrthogonalEnsembleReport", "Povm", "ProtocolInstance", "RankLawReport",
    "RankReport", "Register", "SubspacePartition", "ThermoLedger",
    "VerifyConfig", "barnett_croke_certificate", "binary_entropy", "c_max",
    "chain_inequality", "check_density_matrix", "check_probability_vector",
    "check_unitary", "circulant_overlap_table", "coarse_grain",
    "conditional_distribution", "controlled_unitary", "dephase_register",
    "encode", "exhaustive_permutation_oracle", "fano_floor",
    "gibbs_populations", "gibbs_state", "haar_unitary", "helstrom_oracle",
    "holevo", "l1_distance", "lemma1_check", "linear_dependence",
    "multicopy_coarse_grain", "multicopy_energies", "multicopy_index",
    "mutual_information", "numerical_rank", "overlap_table", "partial_trace",
    "partition_function", "prepare_register", "projective_povm", "purity",
    "relative_entropy", "remark1_check", "run_verification",
    "shannon_entropy", "shift_unitaries", "shift_unitary",
    "success_probability", "tensor", "theorem1_nogo_probe", "thermo_ledger",
    "von_neumann_entropy",
]
