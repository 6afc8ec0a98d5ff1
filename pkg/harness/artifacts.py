"""
CSV artifacts with fixed headers.

Floats are written with a fixed .12g format so identical runs produce
byte-identical files.
"""

import csv
import logging
from dataclasses import astuple
from pathlib import Path
from typing import Any, Dict, Iterable, Sequence

from dvs.events import write_events_csv
from estimator.calibration import CALIBRATION_HEADER
from harness.recorder import TRAJECTORY_HEADER
from harness.runner import SWEEP_HEADER, ExperimentResult
from stability.scan import STABILITY_HEADER

logger = logging.getLogger(__name__)

BOUNDS_HEADER = ("window_t", "n_net", "M_dt", "bound", "ok", "kernel", "trajectory", "mode")
SWEEP_CALIBRATION_HEADER = CALIBRATION_HEADER + ("sigma", "k", "v_max")


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return format(value, ".12g")
    if hasattr(value, "item"):
        return format_value(value.item())
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Dict[str, Any]]) -> Path:
    """Write dict rows under a fixed header."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(header), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: format_value(row[key]) for key in header})
            count += 1
    logger.info(f"[CLI] ✓ Wrote {count} rows to {path}")
    return path


def _calibration_rows(result: ExperimentResult):
    for c in result.calibration:
        yield {"kernel": c.kernel, "lumped_value": c.value, "fit_residual": c.fit_residual, "n_samples": c.n_samples}


def _sweep_calibration_rows(result: ExperimentResult):
    for c, sigma, k, v_max in result.sweep_calibration:
        yield {"kernel": c.kernel, "lumped_value": c.value, "fit_residual": c.fit_residual,
               "n_samples": c.n_samples, "sigma": sigma, "k": k, "v_max": v_max}


def write_result(result: ExperimentResult, out_dir: Path) -> Dict[str, Path]:
    """
    Write every non-empty table of a result.

    Returns:
        Artifact name -> path (also stored in result.files)
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files: Dict[str, Path] = {}

    if result.trajectory:
        files["trajectory"] = write_csv(out_dir / "trajectory.csv", TRAJECTORY_HEADER,
                                        (dict(zip(TRAJECTORY_HEADER, r.as_tuple())) for r in result.trajectory))
    if result.events is not None:
        files["events"] = write_events_csv(out_dir / "events.csv", result.events)
    if result.calibration:
        files["calibration"] = write_csv(out_dir / "calibration.csv", CALIBRATION_HEADER,
                                         _calibration_rows(result))
    elif result.sweep_calibration:
        files["calibration"] = write_csv(out_dir / "calibration.csv", SWEEP_CALIBRATION_HEADER,
                                         _sweep_calibration_rows(result))
    if result.bounds:
        files["bounds"] = write_csv(out_dir / "bounds.csv", BOUNDS_HEADER,
                                    (dict(zip(BOUNDS_HEADER, astuple(r))) for r in result.bounds))
    if result.stability:
        files["stability"] = write_csv(out_dir / "stability.csv", STABILITY_HEADER,
                                       (r.as_row() for r in result.stability))
    if result.sweep:
        files["sweep"] = write_csv(out_dir / "sweep.csv", SWEEP_HEADER,
                                   (dict(zip(SWEEP_HEADER, astuple(r))) for r in result.sweep))

    result.files.update(files)
    return files
