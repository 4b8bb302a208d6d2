from .evaluation import EvalProtocol, Evaluator, Trial, TrialError, TrialLog, evaluate_config
from .seeding import SeedSpec, mix64
from .space import (UNBOUNDED, Categorical, DimRefinement, IntegerRange, OptionalInteger,
                    ParamSpace, RealRange, RefinementSpec)
from .strategies import (STRATEGIES, SearchResult, build_refined_grid, grid_search,
                         grid_strategy, random_search, random_strategy,
                         randomized_grid_search, run_strategy, sample_config)

__all__ = ["EvalProtocol", "Evaluator", "Trial", "TrialError", "TrialLog", "evaluate_config",
           "SeedSpec", "mix64", "UNBOUNDED", "Categorical", "DimRefinement", "IntegerRange",
           "OptionalInteger", "ParamSpace", "RealRange", "RefinementSpec", "STRATEGIES",
           "SearchResult", "build_refined_grid", "grid_search", "grid_strategy", "random_search",
           "random_strategy", "randomized_grid_search", "run_strategy", "sample_config"]
