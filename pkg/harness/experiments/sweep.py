"""Estimation-error sweep over pattern parameters and peak speed."""
import logging
from pathlib import Path

from harness.artifacts import write_result
from harness.config import ExperimentConfig
from harness.experiments import BaseExperiment
from harness.runner import ExperimentResult, run_sweep

logger = logging.getLogger(__name__)


class SweepExperiment(BaseExperiment):
    EXPERIMENT_NAME = "sweep"
    DESCRIPTION = "estimation residuals over the (sigma, k, v_max) grid"

    def run(self, cfg: ExperimentConfig, out_dir: Path) -> ExperimentResult:
        result = run_sweep(cfg)
        write_result(result, out_dir)
        return result

    def summary(self, result: ExperimentResult) -> str:
        rows = " ".join(f"[{r.sigma:g},{r.k:g},{r.v_max:g}: e_q={r.e_q:.3g} e_l={r.e_l:.3g}]" for r in result.sweep)
        return f"sweep: {rows}" + (" passed" if result.passed else " FAILED")
