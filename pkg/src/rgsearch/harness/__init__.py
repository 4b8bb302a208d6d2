from .config import ExperimentConfig, default_config_path
from .experiment import RunRecord, StageError, StrategyOutcome, repeat_seeds, run_experiment
from .report import ReportError, emit_report, parse_table, render_table

__all__ = ["ExperimentConfig", "default_config_path", "RunRecord", "StageError", "StrategyOutcome",
           "repeat_seeds", "run_experiment", "ReportError", "emit_report", "parse_table",
           "render_table"]
