"""Bundled survey data: chamber wall dimensions, the prominent-peak list,
and the reference association table used as a regression fixture.

Chamber 25 has no recorded height; modal analysis for it is restricted to
modes with n_z = 0 unless a height is supplied explicitly.
"""

from __future__ import annotations

import csv
from importlib import resources

from .errors import ValidationError
from .geometry import Chamber
from .modal import AssociationRow, ModeIndex, WallBound

#: Surveyed chamber dimensions, meters (length, width, height).
CHAMBERS: tuple[Chamber, ...] = (
    Chamber("18", 6.70, 4.24, 2.20),
    Chamber("20", 4.59, 4.20, 2.11),
    Chamber("24", 4.28, 4.05, 3.03),
    Chamber("25", 2.59, 1.85, None),
    Chamber("26", 3.35, 2.70, 2.35),
    Chamber("27", 3.60, 2.60, 2.35),
)

#: Prominent peaks of the surveyed site-wide mean spectrum, Hz, ascending.
PROMINENT_PEAKS_HZ: tuple[float, ...] = (37.2, 41.0, 46.1, 50.4, 57.1, 64.3, 72.7, 81.8, 92.5)


def chamber(label: str) -> Chamber:
    for ch in CHAMBERS:
        if ch.label == str(label):
            return ch
    known = ", ".join(ch.label for ch in CHAMBERS)
    raise ValidationError(f"unknown chamber {label!r} (bundled chambers: {known})")


def reference_association() -> list[AssociationRow]:
    """The bundled reference association table (printed, rounded values)."""
    text = resources.files("roomtone.data").joinpath("reference_association.csv").read_text()
    grouped: dict[tuple, dict] = {}
    for rec in csv.DictReader(text.splitlines()):
        key = (float(rec["peak_hz"]), rec["chamber"], int(rec["n_x"]), int(rec["n_y"]), int(rec["n_z"]))
        row = grouped.setdefault(
            key,
            {
                "modal_hz": float(rec["modal_hz"]),
                "bounds": [],
            },
        )
        row["bounds"].append((float(rec["wall_cm"]), float(rec["bound_cm"])))
    rows = []
    for (peak, label, nx, ny, nz), data in grouped.items():
        idx = ModeIndex(nx, ny, nz)
        axes = [axis for axis, n in zip("xyz", idx.indices) if n]
        bounds = tuple(
            WallBound(axis=axis, wall_cm=wall, delta_cm=delta)
            for axis, (wall, delta) in zip(axes, data["bounds"])
        )
        rows.append(AssociationRow(peak, label, idx, data["modal_hz"], bounds))
    rows.sort(key=lambda r: (r.peak_hz, int(r.chamber)))
    return rows
