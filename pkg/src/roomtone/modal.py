"""Box-model room modes, wall-perturbation sensitivity, and ratio analysis.

Core formulas, for a box with inner dimensions L_x, L_y, L_z and speed of
sound c:

    f(n_x, n_y, n_z) = (c / 2) * sqrt((n_x / L_x)^2 + (n_y / L_y)^2 + (n_z / L_z)^2)

    df/dL_i = -c^2 * n_i^2 / (4 * f * L_i^3)

The second is the exact derivative of the first; a just-noticeable frequency
deviation then translates into a tolerance on each participating wall.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .geometry import AXES, BoxRoom, Chamber, axis_index

DEFAULT_SPEED_OF_SOUND = 343.0

#: Just ratios characterizing the whole-tone interval: minor and major tone.
JUST_RATIOS = ((10, 9), (9, 8))


@dataclass(frozen=True)
class ModeIndex:
    n_x: int
    n_y: int
    n_z: int

    def __post_init__(self):
        ns = (self.n_x, self.n_y, self.n_z)
        if any(not isinstance(n, int) or n < 0 for n in ns):
            raise ValidationError(f"modal indices must be non-negative integers, got {ns}")
        if not any(ns):
            raise ValidationError("modal indices must not all be zero")

    @property
    def indices(self) -> tuple[int, int, int]:
        return (self.n_x, self.n_y, self.n_z)

    def __str__(self) -> str:
        return f"({self.n_x},{self.n_y},{self.n_z})"


@dataclass(frozen=True)
class Mode:
    chamber: str
    index: ModeIndex
    frequency: float

    def __post_init__(self):
        if not self.frequency > 0:
            raise ValidationError(f"mode frequency must be positive, got {self.frequency}")


@dataclass(frozen=True)
class JndPolicy:
    """Just-noticeable modal frequency deviation, Hz."""

    delta_f: float = 3.0

    def __post_init__(self):
        if not (math.isfinite(self.delta_f) and self.delta_f > 0):
            raise ValidationError(f"delta_f must be positive, got {self.delta_f}")


@dataclass(frozen=True)
class WallBound:
    """Tolerance on one wall: moving it by more than delta_cm shifts the mode by > delta_f."""

    axis: str
    wall_cm: float
    delta_cm: float


@dataclass(frozen=True)
class AssociationRow:
    """One peak <-> chamber-mode association with per-wall bounds."""

    peak_hz: float
    chamber: str
    index: ModeIndex
    modal_hz: float
    bounds: tuple[WallBound, ...]


@dataclass(frozen=True)
class RatioRow:
    """Consecutive-peak ratio classified against the whole-tone just ratios."""

    f_lo: float
    f_hi: float
    ratio: float
    just_num: int
    just_den: int
    cents: float
    conformant: bool

    @property
    def just_label(self) -> str:
        return f"{self.just_num}:{self.just_den}"


def _dims(room: BoxRoom | Chamber) -> tuple[float, float, float | None]:
    return room.dims


def _frequency(dims, idx: ModeIndex, c: float) -> float:
    acc = 0.0
    for n, length in zip(idx.indices, dims):
        if n == 0:
            continue
        if length is None:
            raise ValidationError("mode involves an axis with unknown dimension")
        acc += (n / length) ** 2
    return 0.5 * c * math.sqrt(acc)


def mode_frequency(room: BoxRoom | Chamber, idx: ModeIndex, c: float = DEFAULT_SPEED_OF_SOUND) -> float:
    """Modal frequency of a box room, Hz."""
    if not c > 0:
        raise ValidationError(f"speed of sound must be positive, got {c}")
    return _frequency(_dims(room), idx, c)


def enumerate_modes(
    room: BoxRoom | Chamber,
    c: float = DEFAULT_SPEED_OF_SOUND,
    f_max: float = 100.0,
) -> list[Mode]:
    """All modes with frequency <= f_max, ascending.

    For a Chamber with unknown height only n_z = 0 modes are enumerated;
    no height is ever invented.
    """
    dims = _dims(room)
    if not f_max > 0:
        raise ValidationError(f"f_max must be positive, got {f_max}")
    limits = [
        0 if length is None else math.ceil(2.0 * f_max * length / c)
        for length in dims
    ]
    modes = []
    for nx in range(limits[0] + 1):
        for ny in range(limits[1] + 1):
            for nz in range(limits[2] + 1):
                if nx == 0 and ny == 0 and nz == 0:
                    continue
                idx = ModeIndex(nx, ny, nz)
                f = _frequency(dims, idx, c)
                if f <= f_max:
                    modes.append(Mode(room.label, idx, f))
    modes.sort(key=lambda m: (m.frequency, m.index.indices))
    return modes


def sensitivity(
    room: BoxRoom | Chamber,
    idx: ModeIndex,
    axis: str,
    c: float = DEFAULT_SPEED_OF_SOUND,
) -> float:
    """Rate of modal frequency change per meter of wall motion, Hz/m.

    Zero when the mode does not involve the axis; always negative otherwise
    (lengthening a participating wall lowers the mode).
    """
    a = axis_index(axis)
    n = idx.indices[a]
    if n == 0:
        return 0.0
    dims = _dims(room)
    length = dims[a]
    if length is None:
        raise ValidationError(f"chamber {room.label!r} has no recorded L_{axis}")
    f = _frequency(dims, idx, c)
    return -(c**2) * n**2 / (4.0 * f * length**3)


def jnd_bound(
    room: BoxRoom | Chamber,
    idx: ModeIndex,
    axis: str,
    c: float = DEFAULT_SPEED_OF_SOUND,
    policy: JndPolicy = JndPolicy(),
) -> float:
    """Wall-motion tolerance in cm: |delta_f / sensitivity| for the given axis."""
    a = axis_index(axis)
    if idx.indices[a] == 0:
        raise ValidationError(f"mode {idx} does not involve axis {axis}; bound is undefined")
    slope = sensitivity(room, idx, axis, c)
    return abs(policy.delta_f / slope) * 100.0


def _bounds_for(room, idx: ModeIndex, c: float, policy: JndPolicy) -> tuple[WallBound, ...]:
    dims = _dims(room)
    out = []
    for a, axis in enumerate(AXES):
        if idx.indices[a] == 0:
            continue
        out.append(
            WallBound(
                axis=axis,
                wall_cm=dims[a] * 100.0,
                delta_cm=jnd_bound(room, idx, axis, c, policy),
            )
        )
    return tuple(out)


def _label_key(label: str):
    return (0, int(label)) if label.isdigit() else (1, label)


def associate(
    peaks: list[float],
    chambers: list[BoxRoom | Chamber],
    c: float = DEFAULT_SPEED_OF_SOUND,
    policy: JndPolicy = JndPolicy(),
    unique_mode_per_peak: bool = True,
    min_chambers: int = 2,
) -> list[AssociationRow]:
    """Associate measured peaks with the closest in-tolerance chamber modes.

    For every (peak, chamber) pair the single closest enumerated mode within
    ``policy.delta_f`` is selected. With ``unique_mode_per_peak`` a mode is
    claimed only by the peak nearest to it, so one mode cannot explain two
    different peaks. ``min_chambers`` drops peaks explained by fewer chambers
    (2 keeps only peaks common to multiple chambers, which is how the bundled
    reference table was built). Output is sorted by peak then chamber and is
    independent of the input peak order.
    """
    if any(p <= 0 for p in peaks):
        raise ValidationError("peak frequencies must be positive")
    peaks = sorted(peaks)
    f_max = max(peaks, default=0.0) + policy.delta_f + 1e-9
    rows: list[AssociationRow] = []
    for chamber in chambers:
        modes = enumerate_modes(chamber, c, f_max)
        if not modes:
            continue
        for peak in peaks:
            in_range = [m for m in modes if abs(m.frequency - peak) <= policy.delta_f]
            if not in_range:
                continue
            best = min(in_range, key=lambda m: (abs(m.frequency - peak), m.index.indices))
            if unique_mode_per_peak:
                nearest_peak = min(peaks, key=lambda p: (abs(best.frequency - p), p))
                if nearest_peak != peak:
                    continue
            rows.append(
                AssociationRow(
                    peak_hz=peak,
                    chamber=chamber.label,
                    index=best.index,
                    modal_hz=best.frequency,
                    bounds=_bounds_for(chamber, best.index, c, policy),
                )
            )
    if min_chambers > 1:
        counts: dict[float, int] = {}
        for row in rows:
            counts[row.peak_hz] = counts.get(row.peak_hz, 0) + 1
        rows = [r for r in rows if counts[r.peak_hz] >= min_chambers]
    rows.sort(key=lambda r: (r.peak_hz, _label_key(r.chamber)))
    return rows


def cents_deviation(ratio: float, num: int, den: int) -> float:
    """Signed distance of ``ratio`` from the just ratio num/den, in cents."""
    return 1200.0 * math.log2(ratio * den / num)


def ratio_analysis(peaks: list[float], tolerance_cents: float = 30.0) -> list[RatioRow]:
    """Classify each consecutive-peak ratio against the whole-tone just ratios.

    The nearest of 10:9 and 9:8 (by absolute cents distance) is reported with
    the signed deviation; ``conformant`` marks |deviation| <= tolerance_cents.
    """
    if len(peaks) < 2:
        raise ValidationError("ratio analysis needs at least two peaks")
    peaks = sorted(peaks)
    if peaks[0] <= 0:
        raise ValidationError("peak frequencies must be positive")
    rows = []
    for f_lo, f_hi in zip(peaks, peaks[1:]):
        ratio = f_hi / f_lo
        if ratio <= 1.0:
            raise ValidationError(f"duplicate peak frequency {f_lo}")
        num, den = min(JUST_RATIOS, key=lambda nd: abs(cents_deviation(ratio, *nd)))
        cents = cents_deviation(ratio, num, den)
        rows.append(
            RatioRow(
                f_lo=f_lo,
                f_hi=f_hi,
                ratio=ratio,
                just_num=num,
                just_den=den,
                cents=cents,
                conformant=abs(cents) <= tolerance_cents,
            )
        )
    return rows
