"""Text formats: point files ("x,y" per line) and chain files ("cx,cy,r" + terminal line)."""
from __future__ import annotations

import re
from pathlib import Path

from .chain import TerminalPair
from .errors import GeometryError
from .geomcore import Circle, Point

_TERMINALS = re.compile(r"^u:\s*([^,\s]+)\s*,\s*([^,\s]+)\s+v:\s*([^,\s]+)\s*,\s*([^,\s]+)$")


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield no, line


def _floats(line: str, count: int, no: int) -> list[float]:
    parts = line.split(",")
    if len(parts) != count:
        raise FormatError(f"expected {count} comma-separated numbers, got {line!r}", no)
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise FormatError(f"not a number in {line!r}", no) from None


def parse_points(text: str) -> list[Point]:
    out = []
    for no, line in _lines(text):
        try:
            out.append(Point(*_floats(line, 2, no)))
        except GeometryError as exc:
            raise FormatError(str(exc), no) from None
    return out


def read_points(path: str | Path) -> list[Point]:
    return parse_points(Path(path).read_text(encoding="utf-8"))


def format_points(points) -> str:
    return "".join(f"{p.x!r},{p.y!r}\n" for p in points)


def parse_chain(text: str) -> tuple[list[Circle], TerminalPair | None]:
    circles: list[Circle] = []
    terminals = None
    for no, line in _lines(text):
        if line.startswith("u:"):
            m = _TERMINALS.match(line)
            if m is None:
                raise FormatError(f"bad terminal line {line!r}", no)
            try:
                ux, uy, vx, vy = (float(g) for g in m.groups())
                terminals = TerminalPair(Point(ux, uy), Point(vx, vy))
            except (ValueError, GeometryError):
                raise FormatError(f"bad terminal coordinates in {line!r}", no) from None
            continue
        if terminals is not None:
            raise FormatError("terminal line must come last", no)
        cx, cy, r = _floats(line, 3, no)
        try:
            circles.append(Circle(Point(cx, cy), r))
        except GeometryError as exc:
            raise FormatError(str(exc), no) from None
    return circles, terminals


def read_chain(path: str | Path) -> tuple[list[Circle], TerminalPair | None]:
    return parse_chain(Path(path).read_text(encoding="utf-8"))


def format_chain(circles, terminals: TerminalPair | None = None) -> str:
    out = "".join(f"{c.center.x!r},{c.center.y!r},{c.radius!r}\n" for c in circles)
    if terminals is not None:
        u, v = terminals
        out += f"u:{u.x!r},{u.y!r} v:{v.x!r},{v.y!r}\n"
    return out
