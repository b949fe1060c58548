"""Planted subgraph recovery via the Schur-Horn orbitope relaxation."""

from .graphs import (Graph, GraphError, GraphParseError, complement,
                     gen_clebsch, gen_clique, gen_gq24, gen_hamming,
                     gen_hypercube, gen_kneser, gen_paley, gen_triangular,
                     load_graph, save_graph)
from .spectral import (SpectralDecomposition, eig_sym, eigengap,
                       is_spectrally_comonotone,
                       is_strictly_spectrally_comonotone, restrict)
from .orbitope import (OrbitopeSpec, contains, export_sdpa, linmax_orbitope,
                       make_orbitope, project_orbitope, project_spectrum,
                       s_ell)
from .invariants import (Eigenspace, WidthEstimate, coherence, comb_width,
                         default_ell, kruskal_rank, q_omega, zeta)
from .solver import (SolveParams, SolveReport, brute_force_plant_search,
                     check_recovery, project_pattern, solve)
from .certificate import (BoundReport, DualCertificate, build_certificate,
                          corollary_bounds, eigenspace_of, theorem_bounds,
                          verify_certificate)
from .harness import (PlantedInstance, SweepConfig, derive_seed, gamma_policy,
                      load_instance, plant, run_sweep, save_instance)

__version__ = "0.1.0"
