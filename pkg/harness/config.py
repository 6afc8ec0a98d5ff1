"""
Experiment configuration.

One TOML file with the sections [scene], [camera], [plant], [controller],
[estimator] and [sim]. Every section maps onto a frozen dataclass; unknown
sections or keys, wrong types and invalid values raise ConfigError naming the
dotted key. controller.a, controller.omega and controller.K are required.
"""

import dataclasses
import logging
import math
import tomllib
import typing
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from errors import ConfigError, EvservoError
from scene.camera import CameraIntrinsics
from scene.pattern import ScenePattern

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SceneConfig:
    pattern: str = "dual_split"
    sigma: float = 330.0
    k: float = 1.299e-3
    split_row: Optional[int] = None
    extent: float = 1.0


@dataclass(frozen=True)
class CameraConfig:
    f_x: float = 1000.0
    f_y: float = 1000.0
    o_x: float = 639.5
    o_y: float = 359.5
    width: int = 1280
    height: int = 720
    Z: float = 1.0
    C: float = 0.2
    mode: str = "latched"
    threshold_jitter: float = 0.0


@dataclass(frozen=True)
class PlantConfig:
    forward: Tuple[float, float, float] = (2.530, 33.977, 1.349)
    backward: Tuple[float, float, float] = (2.954, 37.497, -1.510)
    beta: float = 20.0
    u_limits: Tuple[float, float] = (-1.0, 1.0)


@dataclass(frozen=True)
class ControllerConfig:
    a: float
    omega: float
    K: float
    latency_windows: int = 1


@dataclass(frozen=True)
class EstimatorConfig:
    kernel_width: int = 200
    kernel_height: int = 100
    feedback: str = "events"
    lumped_k1: Optional[float] = None
    lumped_k2: Optional[float] = None
    preamble: float = 20.0
    observer_gain: float = 0.05
    calibration_truth: str = "window_mean"
    span: float = 0.25
    v_max: float = 0.65
    a_max: float = 3.0
    trajectories: int = 1000
    windows_per_trajectory: int = 10
    sweep_sigma: Tuple[float, ...] = (330.0, 430.0)
    sweep_k: Tuple[float, ...] = (1.299e-3, 2.205e-3)
    sweep_v_max: Tuple[float, ...] = (0.45, 0.65)
    sweep_duration: float = 20.0


@dataclass(frozen=True)
class SimConfig:
    duration: float = 30.0
    dt: float = 0.01
    h: float = 0.001
    seed: int = 0
    x0: float = 0.1
    xdot0: float = 0.0
    target_schedule: Tuple[Tuple[float, float], ...] = ()
    workers: int = 1
    amplitude_tolerance: float = 0.15
    trailing_periods: int = 3
    scan_points: int = 20
    record_events: bool = True


@dataclass(frozen=True)
class ExperimentConfig:
    controller: ControllerConfig
    scene: SceneConfig = field(default_factory=SceneConfig)
    camera: CameraConfig = field(default_factory=CameraConfig)
    plant: PlantConfig = field(default_factory=PlantConfig)
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    sim: SimConfig = field(default_factory=SimConfig)

    @property
    def substeps(self) -> int:
        return int(round(self.sim.dt / self.sim.h))

    @property
    def n_windows(self) -> int:
        return int(round(self.sim.duration / self.sim.dt))

    @property
    def dt_us(self) -> int:
        return int(round(self.sim.dt * 1e6))

    @property
    def h_us(self) -> int:
        return int(round(self.sim.h * 1e6))

    def with_seed(self, seed: Optional[int]) -> "ExperimentConfig":
        if seed is None:
            return self
        return replace(self, sim=replace(self.sim, seed=int(seed)))

    def with_section(self, name: str, **changes) -> "ExperimentConfig":
        """Copy with some keys of one section changed (validated like a file)."""
        section = replace(getattr(self, name), **changes)
        cfg = replace(self, **{name: section})
        validate(cfg)
        return cfg

    # Domain objects

    def intrinsics(self) -> CameraIntrinsics:
        c = self.camera
        return CameraIntrinsics(f_x=c.f_x, f_y=c.f_y, o_x=c.o_x, o_y=c.o_y, width=c.width, height=c.height, Z=c.Z)

    def pattern(self) -> ScenePattern:
        s = self.scene
        if s.pattern == "linear":
            base = ScenePattern.linear_pattern(s.k)
        elif s.pattern == "quadratic":
            base = ScenePattern.quadratic_pattern(s.sigma)
        else:
            split = s.split_row if s.split_row is not None else self.camera.height // 2
            base = ScenePattern.dual_split(s.sigma, s.k, split)
        base.check_against(self.intrinsics())
        if self.sim.target_schedule:
            return base.with_schedule(self.sim.target_schedule)
        return base

    def dvs_config(self):
        from dvs.latch import DvsConfig
        c = self.camera
        return DvsConfig(C=c.C, mode=c.mode, seed=self.sim.seed, threshold_jitter=c.threshold_jitter)

    def plant_params(self):
        from plant.params import LumpedParams, PlantParams
        p = self.plant
        return PlantParams(forward=LumpedParams(*p.forward), backward=LumpedParams(*p.backward),
                           beta=p.beta, u_limits=tuple(p.u_limits))

    def controller_params(self):
        from controller.law import ControllerParams
        c = self.controller
        return ControllerParams(a=c.a, omega=c.omega, K=c.K)

    def kernels(self):
        from estimator.kernels import default_kernels
        e = self.estimator
        return default_kernels(self.intrinsics(), self.pattern(), n_u=e.kernel_width, n_v=e.kernel_height)


SECTIONS: Dict[str, type] = {
    "scene": SceneConfig,
    "camera": CameraConfig,
    "plant": PlantConfig,
    "controller": ControllerConfig,
    "estimator": EstimatorConfig,
    "sim": SimConfig,
}

CHOICES = {
    "scene.pattern": ("linear", "quadratic", "dual_split"),
    "camera.mode": ("latched", "ideal_fractional"),
    "estimator.feedback": ("events", "oracle"),
    "estimator.calibration_truth": ("window_mean", "instant"),
}


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _coerce(value: Any, expected: Any, key: str) -> Any:
    origin = typing.get_origin(expected)
    args = typing.get_args(expected)

    if origin is Union:
        inner = [a for a in args if a is not type(None)][0]
        return _coerce(value, inner, key)
    if expected is float:
        if not _is_number(value) or not math.isfinite(value):
            raise ConfigError(f"{key} must be a finite number, got {value!r}", key=key)
        return float(value)
    if expected is int:
        if not isinstance(value, int) or isinstance(value, bool):
            raise ConfigError(f"{key} must be an integer, got {value!r}", key=key)
        return value
    if expected is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{key} must be true or false, got {value!r}", key=key)
        return value
    if expected is str:
        if not isinstance(value, str):
            raise ConfigError(f"{key} must be a string, got {value!r}", key=key)
        return value
    if origin is tuple:
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"{key} must be an array, got {value!r}", key=key)
        if len(args) == 2 and args[1] is Ellipsis:
            return tuple(_coerce(v, args[0], f"{key}[{i}]") for i, v in enumerate(value))
        if len(value) != len(args):
            raise ConfigError(f"{key} must have {len(args)} elements, got {len(value)}", key=key)
        return tuple(_coerce(v, a, f"{key}[{i}]") for i, (v, a) in enumerate(zip(value, args)))
    raise ConfigError(f"{key} has an unsupported type", key=key)


def _build_section(name: str, cls: type, data: Any):
    if not isinstance(data, dict):
        raise ConfigError(f"[{name}] must be a table", key=name)
    hints = typing.get_type_hints(cls)
    known = {f.name: f for f in dataclasses.fields(cls)}
    for key in data:
        if key not in known:
            raise ConfigError(f"unknown key '{name}.{key}'", key=f"{name}.{key}")
    kwargs = {}
    for fname, f in known.items():
        dotted = f"{name}.{fname}"
        if fname in data:
            value = _coerce(data[fname], hints[fname], dotted)
            if dotted in CHOICES and value not in CHOICES[dotted]:
                raise ConfigError(f"{dotted} must be one of {CHOICES[dotted]}, got {value!r}", key=dotted)
            kwargs[fname] = value
        elif f.default is dataclasses.MISSING and f.default_factory is dataclasses.MISSING:
            raise ConfigError(f"missing required key '{dotted}'", key=dotted)
    return cls(**kwargs)


def _require(condition: bool, key: str, message: str) -> None:
    if not condition:
        raise ConfigError(f"{key}: {message}", key=key)


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    """
    Cross-field checks and construction of every domain object.

    Raises:
        ConfigError: naming the offending key
    """
    sim, est, ctl = cfg.sim, cfg.estimator, cfg.controller
    _require(sim.duration > 0, "sim.duration", f"must be positive, got {sim.duration}")
    _require(sim.dt > 0, "sim.dt", f"must be positive, got {sim.dt}")
    _require(sim.h > 0, "sim.h", f"must be positive, got {sim.h}")
    _require(sim.h <= sim.dt / 10 * (1 + 1e-9), "sim.h", f"must be <= dt/10, got h={sim.h}, dt={sim.dt}")
    _require(abs(cfg.substeps * sim.h - sim.dt) < 1e-9, "sim.h", "dt must be an integer multiple of h")
    _require(abs(cfg.h_us * 1e-6 - sim.h) < 1e-12, "sim.h", "must be a whole number of microseconds")
    _require(sim.workers >= 1, "sim.workers", f"must be >= 1, got {sim.workers}")
    _require(sim.trailing_periods >= 1, "sim.trailing_periods", "must be >= 1")
    _require(sim.scan_points >= 1, "sim.scan_points", "must be >= 1")
    _require(sim.amplitude_tolerance > 0, "sim.amplitude_tolerance", "must be positive")
    times = [t for t, _ in sim.target_schedule]
    _require(times == sorted(times), "sim.target_schedule", "times must be non-decreasing")
    _require(ctl.latency_windows >= 1, "controller.latency_windows", f"must be >= 1, got {ctl.latency_windows}")
    _require(est.preamble > 0, "estimator.preamble", "must be positive")
    _require(0 < est.observer_gain <= 1, "estimator.observer_gain", f"must lie in (0, 1], got {est.observer_gain}")
    _require(est.span > 0, "estimator.span", "must be positive")
    _require(est.v_max > 0 and est.a_max > 0, "estimator.v_max", "v_max and a_max must be positive")
    _require(est.trajectories >= 1, "estimator.trajectories", "must be >= 1")
    _require(est.windows_per_trajectory >= 1, "estimator.windows_per_trajectory", "must be >= 1")
    _require(est.sweep_duration > 0, "estimator.sweep_duration", "must be positive")
    for key in ("lumped_k1", "lumped_k2"):
        value = getattr(est, key)
        _require(value is None or value != 0, f"estimator.{key}", "must be nonzero")
    _require(cfg.scene.extent > 0, "scene.extent", "must be positive")

    checks = (
        ("camera", cfg.intrinsics),
        ("scene", cfg.pattern),
        ("camera", cfg.dvs_config),
        ("plant", cfg.plant_params),
        ("controller", cfg.controller_params),
        ("estimator", cfg.kernels),
    )
    for section, build in checks:
        try:
            build()
        except ConfigError:
            raise
        except EvservoError as e:
            raise ConfigError(f"[{section}] {e}", key=section) from e
    return cfg


def config_from_dict(data: Dict[str, Any]) -> ExperimentConfig:
    """Build and validate a configuration from parsed TOML tables."""
    for name in data:
        if name not in SECTIONS:
            raise ConfigError(f"unknown section [{name}]", key=name)
    sections = {}
    for name, cls in SECTIONS.items():
        if name in data:
            sections[name] = _build_section(name, cls, data[name])
        elif name == "controller":
            raise ConfigError("missing required key 'controller.a'", key="controller.a")
    return validate(ExperimentConfig(**sections))


def load_config(path: Union[str, Path], seed: Optional[int] = None) -> ExperimentConfig:
    """
    Read a TOML configuration file.

    Args:
        path: Config file
        seed: Optional override for sim.seed

    Returns:
        Validated ExperimentConfig
    """
    path = Path(path)
    try:
        with path.open("rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {path}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"malformed config {path}: {e}") from e
    cfg = config_from_dict(data).with_seed(seed)
    logger.info(f"[CONFIG] ✓ Loaded {path} (seed={cfg.sim.seed}, mode={cfg.camera.mode}, "
                f"feedback={cfg.estimator.feedback})")
    return cfg
