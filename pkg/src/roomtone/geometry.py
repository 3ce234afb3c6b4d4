"""Box rooms, triangle meshes, and voxelized cavity grids.

All lengths are meters. Voxelization classifies cell centers by ray-crossing
parity against a watertight triangle mesh and pads the resulting grid with
one solid layer on every side, so downstream stencils never touch the array
boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import MeshError, MeshParseError, ValidationError

AXES = ("x", "y", "z")

# Sub-cell offsets applied to ray origins so a ray never passes exactly
# through a mesh edge or vertex (e.g. the shared diagonal of a quad split
# into two triangles). Distinct per axis so x == y degeneracies also break.
_RAY_JITTER = (2.9e-7, 4.1e-7)


def axis_index(axis: str) -> int:
    if axis not in AXES:
        raise ValidationError(f"axis must be one of {AXES}, got {axis!r}")
    return AXES.index(axis)


@dataclass(frozen=True)
class BoxRoom:
    """Idealized rectangular chamber with wall dimensions in meters."""

    label: str
    l_x: float
    l_y: float
    l_z: float

    def __post_init__(self):
        for axis, value in zip(AXES, self.dims):
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValidationError(f"chamber {self.label!r}: L_{axis} must be positive and finite, got {value!r}")

    @property
    def dims(self) -> tuple[float, float, float]:
        return (self.l_x, self.l_y, self.l_z)

    @property
    def volume(self) -> float:
        return self.l_x * self.l_y * self.l_z


@dataclass(frozen=True)
class Chamber:
    """A surveyed chamber: like BoxRoom, but the height may be unknown."""

    label: str
    l_x: float
    l_y: float
    l_z: float | None = None

    def __post_init__(self):
        for axis, value in zip(AXES, (self.l_x, self.l_y, self.l_z)):
            if value is None:
                continue
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValidationError(f"chamber {self.label!r}: L_{axis} must be positive and finite, got {value!r}")

    @property
    def dims(self) -> tuple[float, float, float | None]:
        return (self.l_x, self.l_y, self.l_z)

    def box(self, height: float | None = None) -> BoxRoom:
        """Promote to a BoxRoom, supplying a height if the survey lacks one."""
        l_z = self.l_z if height is None else height
        if l_z is None:
            raise ValidationError(f"chamber {self.label!r} has no recorded height; supply one explicitly")
        return BoxRoom(self.label, self.l_x, self.l_y, l_z)


def make_box_room(label: str, l_x: float, l_y: float, l_z: float) -> BoxRoom:
    """Construct a validated rectangular chamber."""
    return BoxRoom(str(label), float(l_x), float(l_y), float(l_z))


def perturb_box(room: BoxRoom, axis: str, new_length: float) -> BoxRoom:
    """Copy of ``room`` with one wall dimension replaced; the original is unchanged."""
    i = axis_index(axis)
    if not (isinstance(new_length, (int, float)) and math.isfinite(new_length) and new_length > 0):
        raise ValidationError(f"new length must be positive and finite, got {new_length!r}")
    return replace(room, **{f"l_{AXES[i]}": float(new_length)})


@dataclass(frozen=True)
class TriangleMesh:
    """Shared-vertex triangle soup; faces are triples of vertex indices."""

    vertices: np.ndarray
    faces: np.ndarray

    def __post_init__(self):
        vertices = np.asarray(self.vertices, dtype=np.float64)
        faces = np.asarray(self.faces, dtype=np.intp)
        if vertices.ndim != 2 or vertices.shape[1] != 3:
            raise ValidationError("vertices must be an (n, 3) array")
        if faces.ndim != 2 or faces.shape[1] != 3:
            raise ValidationError("faces must be an (m, 3) array of triangles")
        if faces.size and (faces.min() < 0 or faces.max() >= len(vertices)):
            raise ValidationError("face index out of range")
        for arr, name in ((vertices, "vertices"), (faces, "faces")):
            arr.flags.writeable = False
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "faces", faces)

    @property
    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def is_watertight(self) -> bool:
        """True when every undirected edge is shared by exactly two faces."""
        if len(self.faces) == 0:
            return False
        edges: dict[tuple[int, int], int] = {}
        for a, b, c in self.faces:
            for u, v in ((a, b), (b, c), (c, a)):
                key = (u, v) if u < v else (v, u)
                edges[key] = edges.get(key, 0) + 1
        return all(n == 2 for n in edges.values())

    def volume(self) -> float:
        """Enclosed volume of a watertight mesh (divergence theorem)."""
        v = self.vertices
        a, b, c = v[self.faces[:, 0]], v[self.faces[:, 1]], v[self.faces[:, 2]]
        signed = np.einsum("ij,ij->i", a, np.cross(b, c)).sum() / 6.0
        return abs(float(signed))


def box_mesh(l_x: float, l_y: float, l_z: float) -> TriangleMesh:
    """Axis-aligned box spanning [0, L] per axis, 12 outward-oriented triangles."""
    for axis, value in zip(AXES, (l_x, l_y, l_z)):
        if not (math.isfinite(value) and value > 0):
            raise ValidationError(f"box extent L_{axis} must be positive, got {value!r}")
    x, y, z = float(l_x), float(l_y), float(l_z)
    vertices = np.array(
        [
            (0, 0, 0), (x, 0, 0), (x, y, 0), (0, y, 0),
            (0, 0, z), (x, 0, z), (x, y, z), (0, y, z),
        ],
        dtype=np.float64,
    )
    faces = np.array(
        [
            (0, 2, 1), (0, 3, 2),  # bottom, normal -z
            (4, 5, 6), (4, 6, 7),  # top, +z
            (0, 1, 5), (0, 5, 4),  # front, -y
            (2, 3, 7), (2, 7, 6),  # back, +y
            (0, 4, 7), (0, 7, 3),  # left, -x
            (1, 2, 6), (1, 6, 5),  # right, +x
        ],
        dtype=np.intp,
    )
    return TriangleMesh(vertices, faces)


def parse_mesh(text: str) -> TriangleMesh:
    """Parse ASCII STL or a vertex/face-only OBJ subset into a TriangleMesh.

    OBJ ``f`` records are 1-indexed and normalized to 0-indexed. Malformed
    records, non-triangle faces, and out-of-range indices raise
    MeshParseError carrying the offending line number.
    """
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.split()[0] == "solid":
            return _parse_stl(text)
        return _parse_obj(text)
    raise MeshParseError("empty mesh text")


def format_mesh(mesh: TriangleMesh) -> str:
    """Canonical OBJ text for ``mesh``; parse_mesh round-trips it exactly."""
    lines = [f"v {x!r} {y!r} {z!r}" for x, y, z in mesh.vertices]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.faces]
    return "\n".join(lines) + "\n"


def _parse_floats(parts, n, lineno, what):
    if len(parts) != n:
        raise MeshParseError(f"{what}: expected {n} coordinates, got {len(parts)}", lineno)
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise MeshParseError(f"{what}: non-numeric coordinate", lineno) from None


def _parse_obj(text: str) -> TriangleMesh:
    vertices: list[list[float]] = []
    faces: list[tuple[int, int, int]] = []
    face_lines: list[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        record, *parts = stripped.split()
        if record == "v":
            vertices.append(_parse_floats(parts, 3, lineno, "v record"))
        elif record == "f":
            if len(parts) != 3:
                raise MeshParseError(f"non-triangle face with {len(parts)} vertices", lineno)
            idx = []
            for p in parts:
                if not p.lstrip("+").isdigit():
                    raise MeshParseError(f"f record: expected plain 1-based integer index, got {p!r}", lineno)
                idx.append(int(p))
            if any(i < 1 for i in idx):
                raise MeshParseError("f record: indices are 1-based", lineno)
            faces.append((idx[0] - 1, idx[1] - 1, idx[2] - 1))
            face_lines.append(lineno)
        else:
            raise MeshParseError(f"unsupported record {record!r} (only v and f are accepted)", lineno)
    if not vertices:
        raise MeshParseError("no vertices in OBJ text")
    n = len(vertices)
    for face, lineno in zip(faces, face_lines):
        if max(face) >= n:
            raise MeshParseError(f"f record references vertex {max(face) + 1} of {n}", lineno)
    return TriangleMesh(np.array(vertices), np.array(faces, dtype=np.intp))


def _parse_stl(text: str) -> TriangleMesh:
    vertex_index: dict[tuple[float, float, float], int] = {}
    vertices: list[tuple[float, float, float]] = []
    faces: list[tuple[int, int, int]] = []
    pending: list[int] = []
    in_solid = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        parts = line.split()
        if not parts:
            continue
        keyword = parts[0]
        if keyword == "solid":
            in_solid = True
        elif keyword == "endsolid":
            in_solid = False
        elif keyword == "facet":
            if len(parts) < 2 or parts[1] != "normal":
                raise MeshParseError("facet record without normal", lineno)
            _parse_floats(parts[2:], 3, lineno, "facet normal")
            pending = []
        elif keyword == "vertex":
            coords = tuple(_parse_floats(parts[1:], 3, lineno, "vertex record"))
            if len(pending) >= 3:
                raise MeshParseError("more than three vertices in facet (non-triangle face)", lineno)
            if coords not in vertex_index:
                vertex_index[coords] = len(vertices)
                vertices.append(coords)
            pending.append(vertex_index[coords])
        elif keyword == "endfacet":
            if len(pending) != 3:
                raise MeshParseError(f"facet closed with {len(pending)} vertices", lineno)
            faces.append(tuple(pending))
            pending = []
        elif keyword in ("outer", "endloop"):
            continue
        else:
            raise MeshParseError(f"unexpected STL record {keyword!r}", lineno)
    if in_solid:
        raise MeshParseError("missing endsolid")
    if not faces:
        raise MeshParseError("STL text contains no facets")
    return TriangleMesh(np.array(vertices), np.array(faces, dtype=np.intp))


@dataclass(frozen=True)
class OccupancyGrid:
    """Voxelized cavity: per-cell air/solid flags on a uniform grid.

    ``occupancy[i, j, k]`` is True for air. The outermost layer is always
    solid. ``origin`` is the min corner of cell (0, 0, 0).
    """

    n_x: int
    n_y: int
    n_z: int
    dx: float
    origin: tuple[float, float, float]
    occupancy: np.ndarray

    def __post_init__(self):
        if not (math.isfinite(self.dx) and self.dx > 0):
            raise ValidationError(f"grid spacing must be positive, got {self.dx!r}")
        occ = np.asarray(self.occupancy, dtype=bool)
        if occ.shape != (self.n_x, self.n_y, self.n_z):
            raise ValidationError(f"occupancy shape {occ.shape} does not match counts {(self.n_x, self.n_y, self.n_z)}")
        if not occ.any():
            raise ValidationError("grid has no air cells")
        if occ[0].any() or occ[-1].any() or occ[:, 0].any() or occ[:, -1].any() or occ[:, :, 0].any() or occ[:, :, -1].any():
            raise ValidationError("outermost grid layer must be solid")
        occ.flags.writeable = False
        object.__setattr__(self, "occupancy", occ)

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.n_x, self.n_y, self.n_z)

    @property
    def extent(self) -> tuple[float, float, float]:
        """Physical size of the full grid (cell count times spacing per axis)."""
        return (self.n_x * self.dx, self.n_y * self.dx, self.n_z * self.dx)

    @property
    def air_cell_count(self) -> int:
        return int(self.occupancy.sum())

    @property
    def air_volume(self) -> float:
        return self.air_cell_count * self.dx**3

    def is_air(self, cell: tuple[int, int, int]) -> bool:
        i, j, k = cell
        if not (0 <= i < self.n_x and 0 <= j < self.n_y and 0 <= k < self.n_z):
            return False
        return bool(self.occupancy[i, j, k])

    def cell_center(self, cell: tuple[int, int, int]) -> tuple[float, float, float]:
        return tuple(self.origin[a] + (cell[a] + 0.5) * self.dx for a in range(3))

    def air_bounding_box(self) -> tuple[tuple[int, int, int], tuple[int, int, int]]:
        """Inclusive (lo, hi) cell-index corners of the air region."""
        idx = np.nonzero(self.occupancy)
        lo = tuple(int(a.min()) for a in idx)
        hi = tuple(int(a.max()) for a in idx)
        return lo, hi


def air_component_count(grid: OccupancyGrid) -> int:
    """Number of 6-connected air components."""
    from scipy import ndimage

    structure = ndimage.generate_binary_structure(3, 1)
    _, n = ndimage.label(grid.occupancy, structure=structure)
    return int(n)


def box_to_grid(room: BoxRoom, dx: float) -> OccupancyGrid:
    """Exact voxelization of a box room: air region L/dx cells per axis.

    Each dimension must be an integer multiple of ``dx`` (1e-9 relative
    tolerance); anything else is an error rather than a silent rounding.
    """
    if not (math.isfinite(dx) and dx > 0):
        raise ValidationError(f"grid spacing must be positive, got {dx!r}")
    counts = []
    for axis, length in zip(AXES, room.dims):
        n = round(length / dx)
        if n < 1 or abs(n * dx - length) > 1e-9 * length:
            raise ValidationError(
                f"L_{axis} = {length} m is not an integer multiple of dx = {dx} m"
            )
        counts.append(n)
    nx, ny, nz = (c + 2 for c in counts)
    occupancy = np.zeros((nx, ny, nz), dtype=bool)
    occupancy[1:-1, 1:-1, 1:-1] = True
    return OccupancyGrid(nx, ny, nz, float(dx), (-dx, -dx, -dx), occupancy)


def voxelize(mesh: TriangleMesh, dx: float) -> OccupancyGrid:
    """Classify cell centers as interior (air) or exterior (solid).

    Inside/outside is decided by the parity of mesh crossings along a +z ray
    from each cell center. Ray origins carry a fixed sub-cell offset so rays
    never pass exactly through shared edges or vertices.
    """
    if not (math.isfinite(dx) and dx > 0):
        raise ValidationError(f"grid spacing must be positive, got {dx!r}")
    if len(mesh.faces) == 0:
        raise MeshError("mesh has no faces")
    if not mesh.is_watertight():
        raise MeshError("mesh is not watertight (an edge is not shared by exactly two faces)")
    lo, hi = mesh.bounds
    extent = hi - lo
    if dx > extent.min() + 1e-12:
        raise ValidationError(f"dx = {dx} m exceeds the smallest mesh extent {extent.min():.6g} m")

    # Cell counts covering the mesh, snapping exact multiples of dx.
    counts = [max(1, int(math.ceil(e / dx - 1e-9))) for e in extent]
    nx, ny, nz = (c + 2 for c in counts)
    origin = tuple(float(v) - dx for v in lo)

    jx = dx * _RAY_JITTER[0]
    jy = dx * _RAY_JITTER[1]
    col_x = origin[0] + (np.arange(nx) + 0.5) * dx + jx
    col_y = origin[1] + (np.arange(ny) + 0.5) * dx + jy
    crossings_col: list[np.ndarray] = []
    crossings_z: list[np.ndarray] = []

    verts = mesh.vertices
    for face in mesh.faces:
        a, b, c = verts[face[0]], verts[face[1]], verts[face[2]]
        area2 = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if area2 == 0.0:
            continue  # projects to a segment; a jittered ray cannot cross transversally
        x_lo, x_hi = min(a[0], b[0], c[0]), max(a[0], b[0], c[0])
        y_lo, y_hi = min(a[1], b[1], c[1]), max(a[1], b[1], c[1])
        i_sel = np.nonzero((col_x >= x_lo) & (col_x <= x_hi))[0]
        j_sel = np.nonzero((col_y >= y_lo) & (col_y <= y_hi))[0]
        if i_sel.size == 0 or j_sel.size == 0:
            continue
        qx = col_x[i_sel][:, None]
        qy = col_y[j_sel][None, :]
        w_a = (c[0] - b[0]) * (qy - b[1]) - (c[1] - b[1]) * (qx - b[0])
        w_b = (a[0] - c[0]) * (qy - c[1]) - (a[1] - c[1]) * (qx - c[0])
        w_c = (b[0] - a[0]) * (qy - a[1]) - (b[1] - a[1]) * (qx - a[0])
        if area2 > 0:
            inside = (w_a > 0) & (w_b > 0) & (w_c > 0)
        else:
            inside = (w_a < 0) & (w_b < 0) & (w_c < 0)
        if not inside.any():
            continue
        ii, jj = np.nonzero(inside)
        lam_a = w_a[inside] / area2
        lam_b = w_b[inside] / area2
        lam_c = w_c[inside] / area2
        z_hit = lam_a * a[2] + lam_b * b[2] + lam_c * c[2]
        crossings_col.append(i_sel[ii] * ny + j_sel[jj])
        crossings_z.append(z_hit)

    occupancy = np.zeros((nx, ny, nz), dtype=bool)
    if crossings_col:
        cols = np.concatenate(crossings_col)
        zs = np.concatenate(crossings_z)
        order = np.lexsort((zs, cols))
        cols, zs = cols[order], zs[order]
        centers_z = origin[2] + (np.arange(nz) + 0.5) * dx
        starts = np.searchsorted(cols, np.arange(nx * ny), side="left")
        ends = np.searchsorted(cols, np.arange(nx * ny), side="right")
        for flat in np.nonzero(ends > starts)[0]:
            column = zs[starts[flat] : ends[flat]]
            if column.size % 2:
                raise MeshError(
                    "degenerate ray/mesh intersection while voxelizing; "
                    "the mesh may be self-intersecting"
                )
            below = np.searchsorted(column, centers_z)
            occupancy[flat // ny, flat % ny, :] = (below % 2) == 1
    if not occupancy.any():
        raise MeshError(f"no cell center falls inside the mesh at dx = {dx} m")
    return OccupancyGrid(nx, ny, nz, float(dx), origin, occupancy)
