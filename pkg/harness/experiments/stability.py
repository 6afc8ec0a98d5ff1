"""Lyapunov and Floquet verdicts at the operating point and over a delta grid."""
import logging
from pathlib import Path

from harness.artifacts import write_result
from harness.config import ExperimentConfig
from harness.experiments import BaseExperiment
from harness.runner import ExperimentResult, run_stability

logger = logging.getLogger(__name__)


class StabilityExperiment(BaseExperiment):
    EXPERIMENT_NAME = "stability"
    DESCRIPTION = "certify exponential stability of the limit cycle"

    def run(self, cfg: ExperimentConfig, out_dir: Path) -> ExperimentResult:
        result = run_stability(cfg)
        write_result(result, out_dir)
        return result

    def summary(self, result: ExperimentResult) -> str:
        m = result.metrics
        radius = "floquet_radius<1" if m["floquet_radius"] < 1.0 else f"floquet_radius={m['floquet_radius']:.4f}"
        return f"delta={m['delta']:.4f} delta_dagger={m['delta_dagger']:.4f} {radius}"
