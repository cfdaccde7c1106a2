"""Meta-heuristic search for early-lifecycle object-oriented class design.

Groups attributes and methods into classes by optimizing coupling and two
elegance measures, with greedy local search, an evolutionary algorithm, and
ant colony optimization, in batch and human-in-the-loop modes.
"""

from .aco import (
    AcoConfig,
    AcoEngine,
    PheromoneMatrix,
    construct_trail,
    freeze_class,
    run_aco,
    unfreeze_class,
    update_pheromone,
)
from .ea import (
    EaConfig,
    EaEngine,
    FixedMutation,
    SelfAdaptiveMutation,
    run_ea,
    tournament_select,
)
from .encodings import (
    NgGenotype,
    RateSet,
    XpGenotype,
    crossover,
    decode,
    mutate_ng,
    mutate_xp,
    random_genotype,
    self_adapt_mutate,
)
from .fitness import (
    EleganceConfig,
    FitnessVector,
    MoWeights,
    atmr_fitness,
    coupling_fitness,
    evaluate_design,
    mo_fitness,
    nac_fitness,
)
from .gls import GlsConfig, run_gls
from .harness import (
    ExperimentPlan,
    brute_force_optimum,
    manual_design_cases,
    rank_significance,
    run_engine,
    run_experiment,
    write_csv,
)
from .problem import (
    Design,
    DesignProblem,
    InstanceSpec,
    generate_instance,
    load_problem,
    save_problem,
    validate_design,
)
from .records import RunRecord
from .session import DesignSession, Rating, SessionManager, replay_session

__version__ = "0.1.0"

__all__ = [
    "AcoConfig",
    "AcoEngine",
    "Design",
    "DesignProblem",
    "DesignSession",
    "EaConfig",
    "EaEngine",
    "EleganceConfig",
    "ExperimentPlan",
    "FitnessVector",
    "FixedMutation",
    "GlsConfig",
    "InstanceSpec",
    "MoWeights",
    "NgGenotype",
    "PheromoneMatrix",
    "Rating",
    "RateSet",
    "RunRecord",
    "SelfAdaptiveMutation",
    "SessionManager",
    "XpGenotype",
    "atmr_fitness",
    "brute_force_optimum",
    "construct_trail",
    "coupling_fitness",
    "crossover",
    "decode",
    "evaluate_design",
    "freeze_class",
    "generate_instance",
    "load_problem",
    "manual_design_cases",
    "mo_fitness",
    "mutate_ng",
    "mutate_xp",
    "nac_fitness",
    "random_genotype",
    "rank_significance",
    "replay_session",
    "run_aco",
    "run_ea",
    "run_engine",
    "run_experiment",
    "run_gls",
    "save_problem",
    "self_adapt_mutate",
    "tournament_select",
    "unfreeze_class",
    "update_pheromone",
    "validate_design",
    "write_csv",
]
