"""
Experiment Router
Maps CLI sub-commands to experiment instances.
"""

import logging
from typing import List, Optional

from harness.experiments import BaseExperiment, discover_experiments

logger = logging.getLogger(__name__)


class ExperimentRouter:
    """Routes sub-command names to experiments."""

    def __init__(self, experiments: List[BaseExperiment]):
        """
        Args:
            experiments: Experiment instances
        """
        if not experiments:
            raise ValueError("At least one experiment must be configured")

        self.experiments = list(experiments)
        logger.debug(f"[CLI] ExperimentRouter initialized with {len(self.experiments)} experiment(s): "
                     f"{self.get_experiments()}")

    @classmethod
    def discover(cls) -> "ExperimentRouter":
        return cls([experiment_class() for experiment_class in discover_experiments()])

    def get(self, name: str) -> Optional[BaseExperiment]:
        for experiment in self.experiments:
            if experiment.EXPERIMENT_NAME == name:
                return experiment
        logger.warning(f"[CLI] ✗ No experiment named {name}")
        return None

    def add_experiment(self, experiment: BaseExperiment) -> None:
        self.experiments.append(experiment)
        logger.info(f"[CLI] Added experiment: {experiment.EXPERIMENT_NAME}")

    def remove_experiment(self, name: str) -> bool:
        """
        Remove an experiment by name.

        Returns:
            True if the experiment was removed, False if not found
        """
        for i, experiment in enumerate(self.experiments):
            if experiment.EXPERIMENT_NAME == name:
                self.experiments.pop(i)
                logger.info(f"[CLI] Removed experiment: {name}")
                return True
        logger.warning(f"[CLI] Experiment not found: {name}")
        return False

    def get_experiments(self) -> List[str]:
        return [experiment.EXPERIMENT_NAME for experiment in self.experiments]
