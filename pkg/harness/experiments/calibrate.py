"""Open-loop excitation and lumped-constant calibration."""
import logging
from pathlib import Path

from harness.artifacts import write_result
from harness.config import ExperimentConfig
from harness.experiments import BaseExperiment
from harness.runner import ExperimentResult, run_open_loop_excitation

logger = logging.getLogger(__name__)


class CalibrateExperiment(BaseExperiment):
    EXPERIMENT_NAME = "calibrate"
    DESCRIPTION = "fit the K1/K2 lumped constants on an open-loop excitation"

    def run(self, cfg: ExperimentConfig, out_dir: Path) -> ExperimentResult:
        result = run_open_loop_excitation(cfg)
        write_result(result, out_dir)
        return result

    def summary(self, result: ExperimentResult) -> str:
        parts = [f"{c.kernel}={c.value:.6g} (residual {c.fit_residual:.3g})" for c in result.calibration]
        return "calibrate: " + " ".join(parts) + (" passed" if result.passed else " FAILED")
