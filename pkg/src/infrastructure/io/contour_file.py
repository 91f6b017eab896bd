"""
Line-oriented contour files.

    FAMILY JM
    V x y z [label]
    RAY bx by bz dx dy dz
    LINE bx by bz dx dy dz
    CLOSED 0|1
    TRUNC R|none
"""
from pathlib import Path

from src.domain.contours.entities import PolyContour, Ray
from src.domain.shared.exceptions import DomainException, FormatError


def format_contour(contour: PolyContour) -> str:
    lines = []
    if contour.family:
        lines.append(f"FAMILY {contour.family}")
    for label, (x, y, z) in zip(contour.labels, contour.vertices.tolist()):
        lines.append(f"V {x!r} {y!r} {z!r} {label}")
    for keyword, pieces in (("RAY", contour.rays), ("LINE", contour.lines)):
        for piece in pieces:
            numbers = [*piece.base.tolist(), *piece.direction.tolist()]
            lines.append(keyword + " " + " ".join(repr(v) for v in numbers))
    lines.append(f"CLOSED {int(contour.closed)}")
    truncation = "none" if contour.truncation is None else repr(contour.truncation)
    lines.append(f"TRUNC {truncation}")
    return "\n".join(lines) + "\n"


def write_contour(contour: PolyContour, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(format_contour(contour), encoding="utf-8")
    return path


def parse_contour(text: str) -> PolyContour:
    """
    Raises:
        FormatError: With the offending line number
    """
    vertices, labels = [], []
    rays: list[Ray] = []
    lines: list[Ray] = []
    closed: bool | None = None
    truncation: float | None = None
    family = ""
    for number, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        try:
            match parts:
                case ["V", x, y, z]:
                    vertices.append([float(x), float(y), float(z)])
                    labels.append(f"p{len(vertices)}")
                case ["V", x, y, z, label]:
                    vertices.append([float(x), float(y), float(z)])
                    labels.append(label)
                case ["RAY" | "LINE" as keyword, *numbers] if len(numbers) == 6:
                    values = [float(v) for v in numbers]
                    (rays if keyword == "RAY" else lines).append(Ray.of(values[:3], values[3:]))
                case ["CLOSED", flag] if flag in ("0", "1"):
                    closed = flag == "1"
                case ["TRUNC", value]:
                    truncation = None if value.lower() == "none" else float(value)
                case ["FAMILY", name]:
                    family = name
                case _:
                    raise ValueError("unrecognized record")
        except (ValueError, DomainException) as exc:
            raise FormatError(
                f"Malformed contour line {number}: {raw!r}", {"line": number, "reason": str(exc)}
            )
    if closed is None:
        raise FormatError("Contour file has no CLOSED record", {"line": None})
    try:
        return PolyContour(
            vertices=vertices,
            closed=closed,
            rays=tuple(rays),
            lines=tuple(lines),
            truncation=truncation,
            labels=tuple(labels),
            family=family,
        )
    except DomainException as exc:
        raise FormatError(f"Invalid contour: {exc.message}", {"line": None})


def read_contour(path: str | Path) -> PolyContour:
    return parse_contour(Path(path).read_text(encoding="utf-8"))
