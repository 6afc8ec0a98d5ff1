import pytest

from harness.config import config_from_dict
from scene.camera import CameraIntrinsics
from scene.pattern import ScenePattern

OMEGA = 4.18879020478639


@pytest.fixture
def intr():
    return CameraIntrinsics()


@pytest.fixture
def dual_pattern():
    return ScenePattern.dual_split(330.0, 1.299e-3, 360)


def make_config(**sections):
    """Minimal valid configuration with the default controller and optional section overrides."""
    data = {"controller": {"a": 0.18, "omega": OMEGA, "K": 1.5}}
    for name, values in sections.items():
        data.setdefault(name, {}).update(values)
    return config_from_dict(data)


@pytest.fixture
def config_factory():
    return make_config
