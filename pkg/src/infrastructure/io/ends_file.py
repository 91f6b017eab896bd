"""
End-configuration files and classifier verdict records.

One end per line: ``END nx ny nz ax ay az dx dy dz wx wy wz`` (normal, axis
point, axis direction, weight).
"""
from collections.abc import Iterable
from pathlib import Path

from src.domain.shared.exceptions import FormatError, InvalidEnd
from src.domain.symmetry.entities import EndDescriptor


def format_ends(ends: Iterable[EndDescriptor]) -> str:
    lines = []
    for end in ends:
        numbers = [
            *end.normal.tolist(),
            *end.axis_point.tolist(),
            *end.axis_direction.tolist(),
            *end.weight.tolist(),
        ]
        lines.append("END " + " ".join(repr(v) for v in numbers))
    return "\n".join(lines) + "\n"


def write_ends(ends: Iterable[EndDescriptor], path: str | Path) -> Path:
    path = Path(path)
    path.write_text(format_ends(ends), encoding="utf-8")
    return path


def parse_ends(text: str) -> list[EndDescriptor]:
    """
    Raises:
        FormatError: With the offending line number, also for invalid ends
    """
    ends = []
    for number, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        if parts[0] != "END" or len(parts) != 13:
            raise FormatError(
                f"Line {number}: expected END followed by 12 numbers", {"line": number}
            )
        try:
            v = [float(p) for p in parts[1:]]
            ends.append(EndDescriptor(v[0:3], v[3:6], v[6:9], v[9:12]))
        except ValueError:
            raise FormatError(f"Line {number}: non-numeric field", {"line": number})
        except InvalidEnd as exc:
            raise FormatError(f"Line {number}: {exc.message}", {"line": number, **exc.details})
    return ends


def read_ends(path: str | Path) -> list[EndDescriptor]:
    return parse_ends(Path(path).read_text(encoding="utf-8"))
