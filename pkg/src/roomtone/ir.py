"""Impulse responses: uniformly sampled pressure-vs-time signals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class ImpulseResponse:
    """Pressure vs. time at a single receiver, in arbitrary linear units.

    ``sample_rate`` is kept as an exact float (FDTD rates are generally not
    integral); file writers round it for containers that require an integer
    rate and record the exact value in a sidecar.
    """

    sample_rate: float
    samples: np.ndarray

    def __post_init__(self):
        if not (np.isfinite(self.sample_rate) and self.sample_rate > 0):
            raise ValidationError(f"sample rate must be positive and finite, got {self.sample_rate}")
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValidationError("impulse response samples must be one-dimensional")
        if samples.size and not np.all(np.isfinite(samples)):
            raise ValidationError("impulse response contains non-finite samples")
        samples = samples.copy() if samples is self.samples else samples
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        """Signal length in seconds."""
        return self.samples.size / self.sample_rate

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.samples.size) / self.sample_rate
