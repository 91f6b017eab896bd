"""
Wavefront OBJ with labeled boundary arcs.

Arcs travel as comment lines ``# arc <label> <i> <j> ...`` and fixed
vertices as ``# fixed <i> ...``; all indices are 1-based like ``f`` lines,
so other OBJ readers ignore the extras.
"""
from pathlib import Path

import numpy as np

from src.domain.plateau.entities import TriMesh
from src.domain.shared.exceptions import FormatError


def format_obj(mesh: TriMesh) -> str:
    lines = [f"v {x!r} {y!r} {z!r}" for x, y, z in mesh.vertices.tolist()]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.triangles.tolist()]
    for label, chain in sorted(mesh.arcs.items()):
        lines.append(f"# arc {label} " + " ".join(str(i + 1) for i in chain))
    fixed = np.flatnonzero(mesh.fixed)
    if len(fixed):
        lines.append("# fixed " + " ".join(str(i + 1) for i in fixed))
    return "\n".join(lines) + "\n"


def export_obj(mesh: TriMesh, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(format_obj(mesh), encoding="utf-8")
    return path


def parse_obj(text: str) -> TriMesh:
    """
    Parse OBJ text; polygons with more than three corners are fanned.

    Raises:
        FormatError: With the offending line number
    """
    vertices: list[list[float]] = []
    triangles: list[list[int]] = []
    arcs: dict[str, tuple[int, ...]] = {}
    fixed: list[int] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts:
            continue
        try:
            match parts:
                case ["v", x, y, z, *_]:
                    vertices.append([float(x), float(y), float(z)])
                case ["f", *corners] if len(corners) >= 3:
                    # "f 1/1/1" style corners keep only the vertex index
                    index = [int(c.split("/")[0]) - 1 for c in corners]
                    triangles += [[index[0], index[k], index[k + 1]] for k in range(1, len(index) - 1)]
                case ["#", "arc", label, *chain]:
                    arcs[label] = tuple(int(i) - 1 for i in chain)
                case ["#", "fixed", *indices]:
                    fixed += [int(i) - 1 for i in indices]
                case ["f", *_]:
                    raise ValueError("face needs three corners")
                case ["v", *_]:
                    raise ValueError("vertex needs three coordinates")
                case _:
                    pass
        except ValueError as exc:
            raise FormatError(f"Malformed OBJ line {number}: {raw!r}", {"line": number, "reason": str(exc)})
    mask = np.zeros(len(vertices), dtype=bool)
    mask[fixed] = True
    mesh = TriMesh(vertices=np.array(vertices).reshape(-1, 3), triangles=triangles, arcs=arcs, fixed=mask)
    mesh.check()
    return mesh


def read_obj(path: str | Path) -> TriMesh:
    return parse_obj(Path(path).read_text(encoding="utf-8"))
