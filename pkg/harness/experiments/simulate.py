"""Closed-loop limit-cycle simulation (with target switching when a schedule is set)."""
import logging
from pathlib import Path

from harness.artifacts import write_result
from harness.config import ExperimentConfig
from harness.experiments import BaseExperiment
from harness.runner import ExperimentResult, run_closed_loop, run_target_switch

logger = logging.getLogger(__name__)


class SimulateExperiment(BaseExperiment):
    EXPERIMENT_NAME = "simulate"
    DESCRIPTION = "closed-loop limit-cycle run with event feedback"

    def run(self, cfg: ExperimentConfig, out_dir: Path) -> ExperimentResult:
        if cfg.sim.target_schedule:
            result = run_target_switch(cfg)
        else:
            result = run_closed_loop(cfg)
        write_result(result, out_dir)
        return result

    def summary(self, result: ExperimentResult) -> str:
        m = result.metrics
        text = (f"simulate: mean_radius={m['mean_radius']:.4f} amplitude_error={m['amplitude_error']:.2%} "
                f"convergence={m['convergence_time']:.2f}s bound_violations={int(m['bound_violations'])}")
        if "phase_position_error" in m:
            text += f" phase_position_error={m['phase_position_error']:.4f}"
        return text + (" passed" if result.passed else " FAILED")
