"""
Experiments Auto-Discovery System
Every module in this package contributes BaseExperiment subclasses, one per
CLI sub-command.
"""

import importlib
import inspect
import logging
from pathlib import Path
from typing import List, Type

from harness.config import ExperimentConfig
from harness.runner import ExperimentResult

logger = logging.getLogger(__name__)


class BaseExperiment:
    """Base class for all experiments."""

    # Subclasses MUST define these
    EXPERIMENT_NAME = None        # Sub-command, e.g. "simulate"
    DESCRIPTION = ""              # Sub-command help text

    def run(self, cfg: ExperimentConfig, out_dir: Path) -> ExperimentResult:
        """
        Run the experiment and write its artifacts under out_dir.

        Returns:
            ExperimentResult with passed set and result.files filled
        """
        raise NotImplementedError("Subclass must implement run()")

    def summary(self, result: ExperimentResult) -> str:
        """One-line summary printed by the CLI."""
        verdict = "passed" if result.passed else "FAILED"
        return f"{self.EXPERIMENT_NAME}: {verdict}"

    def __str__(self) -> str:
        return self.EXPERIMENT_NAME or self.__class__.__name__


def discover_experiments() -> List[Type[BaseExperiment]]:
    """
    Discover all experiment classes in this package.

    Returns:
        List of experiment classes (not instances), sorted by name
    """
    experiments = []
    package_dir = Path(__file__).parent
    for file_path in sorted(package_dir.glob("*.py")):
        if file_path.name.startswith("_"):
            continue
        module_name = file_path.stem
        try:
            module = importlib.import_module(f"{__name__}.{module_name}")
        except Exception as e:
            logger.error(f"Could not load experiment from {module_name}: {e}")
            continue
        for name, obj in inspect.getmembers(module, inspect.isclass):
            if (issubclass(obj, BaseExperiment) and
                    obj is not BaseExperiment and
                    obj.EXPERIMENT_NAME and
                    obj.__module__ == module.__name__):
                experiments.append(obj)
                logger.debug(f"Discovered experiment: {obj.EXPERIMENT_NAME} from {module_name}")
    return sorted(experiments, key=lambda cls: cls.EXPERIMENT_NAME)


__all__ = ['BaseExperiment', 'discover_experiments']
