"""coevonet: deterministic simulator of similarity-threshold-driven
coevolution of network structure and node states, with measurement and
sweep tooling."""

from .dynamics import (ActionTaken, NeighborPartition, RunResult,
                       SimulationConfig, WEIGHT_DISSIMILARITY,
                       WEIGHT_SIMILARITY, ca_update, categorize, run,
                       sample_initial_states, similarity, state_distance,
                       states_from_csv, states_to_csv, step_node, su_rewire)
from .fitting import (DegreeFitReport, DistributionFit,
                      fit_degree_distribution, fit_lognormal, fit_power_law)
from .graph import (ConfigError, GeneratorSpec, Graph, NetworkKind,
                    from_edge_text, generate, generate_ba, generate_er,
                    to_edge_text)
from .harness import (AggregationError, IntegrityError, SweepRecord,
                      SweepSpec, SweepSummary, aggregate, analyze_run,
                      run_single, run_sweep)
from .metrics import (CommunityPartition, MetricError, StateGroupReport,
                      detect_communities, has_community_structure, modularity,
                      sim_matrix_from_bytes, sim_matrix_to_bytes,
                      sim_matrix_to_csv, similarity_matrix, state_groups)

__version__ = "0.1.0"
