"""Window error-bound sweep over randomised smooth trajectories."""
import logging
from pathlib import Path

from harness.artifacts import write_result
from harness.config import ExperimentConfig
from harness.experiments import BaseExperiment
from harness.runner import ExperimentResult, run_bounds_sweep

logger = logging.getLogger(__name__)


class BoundsExperiment(BaseExperiment):
    EXPERIMENT_NAME = "bounds"
    DESCRIPTION = "check the event-count error bound on random trajectories"

    def run(self, cfg: ExperimentConfig, out_dir: Path) -> ExperimentResult:
        result = run_bounds_sweep(cfg)
        write_result(result, out_dir)
        return result

    def summary(self, result: ExperimentResult) -> str:
        m = result.metrics
        states = "".join(f" {key}={value:.4g}" for key, value in m.items() if key.startswith("state_bound_"))
        return (f"bounds: violations={int(m['violations'])}/{int(m['windows'])} "
                f"raw_violation_rate={m['raw_violation_rate']:.4f}{states}" + (" passed" if result.passed else " FAILED"))
