"""Signal file I/O: 32-bit float mono WAV plus two-column CSV.

WAV containers carry an integer sample rate, so the exact rate (and the
timestep it came from) is written to a ``<file>.json`` sidecar and restored
from there on read when present.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .errors import ValidationError
from .ir import ImpulseResponse


def write_wav(path, ir: ImpulseResponse, extra_metadata: dict | None = None) -> None:
    """Write a mono float32 WAV with an exact-rate JSON sidecar."""
    rate = int(round(ir.sample_rate))
    wavfile.write(str(path), rate, ir.samples.astype(np.float32))
    sidecar = {
        "sample_rate_exact_hz": ir.sample_rate,
        "dt_exact_s": 1.0 / ir.sample_rate,
        "n_samples": len(ir),
    }
    if extra_metadata:
        sidecar.update(extra_metadata)
    Path(f"{path}.json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")


def read_wav(path) -> ImpulseResponse:
    """Read a mono WAV (float or integer PCM), honoring the exact-rate sidecar."""
    rate, data = wavfile.read(str(path))
    if data.ndim != 1:
        raise ValidationError(f"{path}: expected mono WAV, got {data.ndim} channels")
    if data.dtype.kind == "i":
        data = data / float(np.iinfo(data.dtype).max)
    sample_rate = float(rate)
    sidecar = Path(f"{path}.json")
    if sidecar.exists():
        sample_rate = float(json.loads(sidecar.read_text())["sample_rate_exact_hz"])
    return ImpulseResponse(sample_rate, np.asarray(data, dtype=np.float64))


def write_csv(path, ir: ImpulseResponse) -> None:
    """Write ``time,pressure`` rows."""
    with open(path, "w") as fh:
        fh.write("time_s,pressure\n")
        for t, p in zip(ir.times, ir.samples):
            fh.write(f"{t:.9g},{p:.9g}\n")


def read_csv(path) -> ImpulseResponse:
    """Read ``time,pressure`` rows; the rate is inferred from the time column."""
    rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if rows.shape[1] != 2:
        raise ValidationError(f"{path}: expected two columns (time, pressure)")
    times, samples = rows[:, 0], rows[:, 1]
    if len(times) < 2:
        raise ValidationError(f"{path}: need at least two samples to infer the rate")
    steps = np.diff(times)
    dt = steps.mean()
    if dt <= 0 or np.any(np.abs(steps - dt) > 1e-6 * dt):
        raise ValidationError(f"{path}: time column is not uniformly spaced")
    return ImpulseResponse(1.0 / dt, samples)
