"""
Point-cloud input and complex/geometry output.

Points: one point per line (m floats separated by commas or whitespace), or a mesh file
(.off/.ply/.obj) whose vertices are taken as the points. Weights: one float per line.

Complex files (`.alpha`):

    #alpha v1
    #ambient <m>
    #a1 <value>
    k w v0 ... vk [y1 ... ym]

one line per simplex, sorted by (k, w, vertices), reals printed with 17
significant digits so they round-trip exactly.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from io import StringIO
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
import pandas as pd
import trimesh

from .cech import CechGraph, WeightedPoints
from .complex import BarycentricEmbedding, ComplexError, FilteredComplex, WitnessMap, as_simplex

log = logging.getLogger(__name__)

PathLike = Union[str, Path]
MESH_SUFFIXES = {".off", ".ply", ".obj"}
HEADER = "#alpha v1"
FIELD_SEP = r"\s*,\s*|\s+"


class PointsFormatError(ValueError):
    pass


class ComplexFormatError(ValueError):
    pass


# ---------- Input ----------
def _numbered_lines(path: Path) -> pd.Series:
    """Non-blank, non-comment lines indexed by their 1-based line number."""
    lines = pd.Series(path.read_text(encoding="utf-8").splitlines(), dtype=object)
    lines.index = lines.index + 1
    lines = lines.str.strip()
    return lines[(lines != "") & ~lines.str.startswith("#")]


def _numeric_table(path: Path, what: str) -> np.ndarray:
    lines = _numbered_lines(path)
    if lines.empty:
        raise PointsFormatError(f"{path}: no {what} found")
    fields = lines.str.count(FIELD_SEP) + 1
    expected = int(fields.iloc[0])
    ragged = fields[fields != expected]
    if not ragged.empty:
        ln = int(ragged.index[0])
        raise PointsFormatError(f"{path}:{ln}: expected {expected} fields, found {int(ragged.iloc[0])}")

    cells = pd.read_csv(
        StringIO("\n".join(lines)),
        header=None,
        sep=FIELD_SEP,
        engine="python",
        dtype=str,
        keep_default_na=False,
    )
    cells.index = lines.index
    values = cells.apply(pd.to_numeric, errors="coerce")
    bad = values.isna() | ~np.isfinite(values.astype(float))
    if bad.to_numpy().any():
        ln = int(bad.any(axis=1).idxmax())
        col = int(np.argmax(bad.loc[ln].to_numpy()))
        raise PointsFormatError(f"{path}:{ln}: field {col + 1} is not a finite number: {cells.loc[ln, col]!r}")
    return values.to_numpy(dtype=float)


def _mesh_vertices(path: Path) -> np.ndarray:
    try:
        mesh = trimesh.load(path, process=False)
    except Exception as e:
        raise PointsFormatError(f"{path}: cannot read mesh: {e}") from e
    vertices = getattr(mesh, "vertices", None)
    if vertices is None or len(vertices) == 0:
        raise PointsFormatError(f"{path}: mesh has no vertices")
    return np.asarray(vertices, dtype=float)


def parse_points(
    path: PathLike,
    weights_path: Optional[PathLike] = None,
    a1: float = 0.0,
) -> WeightedPoints:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    if path.suffix.lower() in MESH_SUFFIXES:
        coords = _mesh_vertices(path)
    else:
        coords = _numeric_table(path, "points")

    power = np.zeros(coords.shape[0])
    if weights_path is not None:
        wpath = Path(weights_path)
        if not wpath.exists():
            raise FileNotFoundError(wpath)
        table = _numeric_table(wpath, "weights")
        if table.shape[1] != 1:
            raise PointsFormatError(f"{wpath}: expected one weight per line, found {table.shape[1]} fields")
        power = table[:, 0]
        if power.shape[0] != coords.shape[0]:
            raise PointsFormatError(f"{wpath}: {power.shape[0]} weights for {coords.shape[0]} points")

    log.info("read %d points in R^%d from %s", coords.shape[0], coords.shape[1], path)
    return WeightedPoints(coords, power, a1)


# ---------- Complex files ----------
def format_real(v: float) -> str:
    s = format(float(v), ".17g")
    return "0" if s == "-0" else s


def format_complex(
    cx: FilteredComplex,
    witness: Optional[WitnessMap] = None,
    ambient: int = 0,
    a1: float = 0.0,
) -> str:
    out = [HEADER, f"#ambient {int(ambient)}", f"#a1 {format_real(a1)}"]
    for s, w in cx.items():
        parts = [str(len(s) - 1), format_real(w)]
        parts.extend(str(v) for v in s)
        if witness is not None:
            y = witness.get(s)
            if y is None:
                raise ComplexError(f"no witness for simplex {s}")
            parts.extend(format_real(c) for c in np.asarray(y, dtype=float).ravel())
        out.append(" ".join(parts))
    return "\n".join(out) + "\n"


def write_complex(
    cx: FilteredComplex,
    witness: Optional[WitnessMap],
    path: PathLike,
    ambient: int = 0,
    a1: float = 0.0,
) -> None:
    Path(path).write_text(format_complex(cx, witness, ambient, a1), encoding="utf-8")


@dataclass
class ComplexFile:
    complex: FilteredComplex
    witness: WitnessMap = field(default_factory=dict)
    ambient: int = 0
    a1: float = 0.0

    @property
    def has_witnesses(self) -> bool:
        return len(self.witness) == len(self.complex)


def parse_complex(text: str, source: str = "<complex>") -> ComplexFile:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise ComplexFormatError(f"{source}:1: missing '{HEADER}' header")
    result = ComplexFile(FilteredComplex())
    for ln, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(" ")
            try:
                if key == "ambient":
                    result.ambient = int(value)
                elif key == "a1":
                    result.a1 = float(value)
            except ValueError:
                raise ComplexFormatError(f"{source}:{ln}: bad #{key} value {value!r}") from None
            continue
        tok = line.split()
        try:
            k = int(tok[0])
            w = float(tok[1])
            verts = as_simplex(int(t) for t in tok[2:k + 3])
            coords = [float(t) for t in tok[k + 3:]]
        except (ValueError, IndexError, ComplexError) as e:
            raise ComplexFormatError(f"{source}:{ln}: {e}") from None
        if len(verts) != k + 1:
            raise ComplexFormatError(f"{source}:{ln}: dimension {k} needs {k + 1} vertices")
        if coords and len(coords) != result.ambient:
            raise ComplexFormatError(f"{source}:{ln}: witness has {len(coords)} coordinates, ambient is {result.ambient}")
        result.complex.add(verts, w)
        if coords:
            result.witness[verts] = np.array(coords)
    return result


def read_complex(path: PathLike) -> ComplexFile:
    path = Path(path)
    return parse_complex(path.read_text(encoding="utf-8"), str(path))


# ---------- Graph and geometry ----------
def format_edges(graph: CechGraph) -> str:
    return "".join(f"{i} {j}\n" for i, j in graph.edges())


def write_edges(graph: CechGraph, path: PathLike) -> None:
    Path(path).write_text(format_edges(graph), encoding="utf-8")


def format_off(embedding: BarycentricEmbedding) -> str:
    """
    OFF soup of the embedded subdivision: every flag vertex, then segments
    ("2 a b") for 2-flags and triangles ("3 a b c") for 3-flags.
    """
    coords = np.asarray(embedding.coords, dtype=float)
    if coords.ndim != 2 or coords.shape[1] > 3:
        raise ValueError(f"OFF export needs ambient dimension <= 3, got {coords.shape[-1]}")
    padded = np.zeros((coords.shape[0], 3))
    padded[:, : coords.shape[1]] = coords
    faces: List[str] = []
    for flag in embedding.flags:
        if len(flag) in (2, 3):
            idx = embedding.flag_indices(flag)
            faces.append(f"{len(idx)} " + " ".join(str(i) for i in idx))
    out = ["OFF", f"{padded.shape[0]} {len(faces)} 0"]
    out.extend(" ".join(format_real(c) for c in row) for row in padded)
    out.extend(faces)
    return "\n".join(out) + "\n"


def write_off(embedding: BarycentricEmbedding, path: PathLike) -> None:
    Path(path).write_text(format_off(embedding), encoding="utf-8")
