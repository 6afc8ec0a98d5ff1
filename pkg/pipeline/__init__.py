"""
Per-window control-loop framework.

Every control window flows through an ordered series of stages. A stage reads
and writes the shared LoopContext and can stop the remaining stages of the
window.

Usage:
    from pipeline import ControlLoop, load_stages

    loop = ControlLoop()
    for stage in load_stages():
        loop.add_stage(stage)

    for n in range(rig.n_windows):
        loop.run_window(n, rig)
"""

import importlib
import inspect
import logging
import os
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

logger = logging.getLogger(__name__)


@dataclass
class LoopContext:
    """
    Context object that flows through the stages of one window.

    Attributes:
        window: Window index n
        t_start: Window start time n * dt (s)
        rig: Mutable simulation rig (plant state, latch array, recorder)
        should_continue: If False, remaining stages of the window are skipped
        data: Shared dictionary for stages to pass values to each other
    """
    window: int
    t_start: float
    rig: Any
    should_continue: bool = True
    data: dict[str, Any] = field(default_factory=dict)

    def stop(self) -> None:
        """Skip the remaining stages of this window."""
        self.should_continue = False


class LoopStage(ABC):
    """
    Abstract base class for loop stages.

    Subclasses implement process(); should_process() can skip a stage for a
    given window.
    """

    # Default priority (0-100, higher runs first)
    DEFAULT_PRIORITY = 50

    # Stage name for env var generation (e.g., "SENSING")
    STAGE_NAME = None

    def __init__(self, name: Optional[str] = None):
        self.name = name or self.__class__.__name__
        self.priority = self.DEFAULT_PRIORITY

    @abstractmethod
    def process(self, ctx: LoopContext) -> None:
        """
        Process one window.

        Args:
            ctx: Loop context. Call ctx.stop() to skip the remaining stages.
        """
        pass

    def should_process(self, ctx: LoopContext) -> bool:
        return True


class ControlLoop:
    """
    Runs the stages of one control window in order.

    Stages run in the order they were added. With stop_on_error a failing
    stage is logged and its exception re-raised so the run aborts; otherwise
    the error is logged and the next stage runs.
    """

    def __init__(self, stop_on_error: bool = True):
        self.stages: list[LoopStage] = []
        self.stop_on_error = stop_on_error

    def add_stage(self, stage: LoopStage) -> "ControlLoop":
        """
        Add a stage to the loop.

        Returns:
            Self for method chaining
        """
        self.stages.append(stage)
        logger.debug(f"[LOOP] Added stage: {stage.name}")
        return self

    def remove_stage(self, stage: LoopStage) -> bool:
        """
        Remove a stage from the loop.

        Returns:
            True if stage was found and removed, False otherwise
        """
        try:
            self.stages.remove(stage)
            logger.debug(f"[LOOP] Removed stage: {stage.name}")
            return True
        except ValueError:
            return False

    def run_window(self, window: int, rig: Any, t_start: Optional[float] = None) -> LoopContext:
        """
        Run every stage for one window.

        Args:
            window: Window index
            rig: Simulation rig shared by the stages
            t_start: Window start time (defaults to window * rig.dt)

        Returns:
            The LoopContext after all stages have run (or the window stopped)
        """
        if t_start is None:
            t_start = window * rig.dt
        ctx = LoopContext(window=window, t_start=t_start, rig=rig)

        for i, stage in enumerate(self.stages, 1):
            if not ctx.should_continue:
                logger.debug(f"[LOOP] Window {window} stopped before stage {i}/{len(self.stages)}: {stage.name}")
                break

            try:
                if not stage.should_process(ctx):
                    logger.debug(f"[LOOP] Stage {stage.name} skipped in window {window}")
                    continue
                stage.process(ctx)
            except Exception as e:
                logger.error(f"[LOOP] Error in {stage.name} at window {window} (t={t_start:.3f}s): {e}",
                             exc_info=True)
                if self.stop_on_error:
                    ctx.stop()
                    raise
        return ctx


def discover_stages(package: str = "stages") -> list[type[LoopStage]]:
    """
    Discover all stage classes in a package.

    Args:
        package: Importable package to scan

    Returns:
        List of stage classes (not instances)
    """
    stages = []
    try:
        pkg = importlib.import_module(package)
    except ImportError as e:
        logger.warning(f"[LOOP] Stage package not importable: {package} ({e})")
        return stages

    for pkg_dir in getattr(pkg, "__path__", []):
        for file_path in sorted(Path(pkg_dir).glob("*.py")):
            if file_path.name.startswith("_"):
                continue
            module_name = file_path.stem
            try:
                module = importlib.import_module(f"{package}.{module_name}")
            except Exception as e:
                logger.error(f"[LOOP] Could not load stage module {module_name}: {e}")
                continue
            for name, obj in inspect.getmembers(module, inspect.isclass):
                if (issubclass(obj, LoopStage) and
                        obj is not LoopStage and
                        not inspect.isabstract(obj) and
                        obj.__module__ == module.__name__):
                    stages.append(obj)
                    logger.debug(f"[LOOP] Discovered stage: {obj.__name__} from {module_name}")
    return stages


def load_stages(package: str = "stages") -> list[LoopStage]:
    """
    Instantiate the discovered stages with priority sorting.

    Environment variables:
    - {STAGE_NAME}_PRIORITY: Override stage priority (clamped to 0..100)
    - {STAGE_NAME}_ENABLED: Set to "false" to disable the stage

    Returns:
        Stage instances sorted by priority (highest first, name breaks ties)
    """
    stage_classes = discover_stages(package)
    if not stage_classes:
        logger.warning(f"[LOOP] No stages found in {package}/")
        return []

    loaded = []
    logger.info("=" * 60)
    logger.info("[LOOP] Auto-discovering loop stages...")
    for stage_class in stage_classes:
        stage = stage_class()
        stage_name = stage_class.STAGE_NAME
        if stage_name:
            enabled_env = f"{stage_name}_ENABLED"
            if os.getenv(enabled_env, "true").lower() == "false":
                logger.info(f"[LOOP]   ⊘ Skipping {stage.name} (disabled via {enabled_env})")
                continue

            priority_env = f"{stage_name}_PRIORITY"
            priority_str = os.getenv(priority_env)
            if priority_str:
                try:
                    stage.priority = max(0, min(100, int(priority_str)))
                except ValueError:
                    logger.warning(f"[LOOP]   Invalid priority for {stage.name}: {priority_str}")

        loaded.append(stage)
        logger.info(f"[LOOP]   ✓ Loaded {stage.name} (priority: {stage.priority})")

    loaded.sort(key=lambda s: (-s.priority, s.name))
    logger.info(f"[LOOP] Total stages loaded: {len(loaded)}")
    logger.info("=" * 60)
    return loaded


__all__ = [
    'LoopContext',
    'LoopStage',
    'ControlLoop',
    'discover_stages',
    'load_stages',
]
