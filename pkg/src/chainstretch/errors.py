"""Exception hierarchy shared by all modules."""


class GeometryError(ValueError):
    """Input outside an operation's domain (degenerate, collinear, identical...)."""


class DegenerateSegmentError(GeometryError):
    """A query segment passes exactly through a third vertex."""

    def __init__(self, message: str, vertex: int):
        super().__init__(message)
        self.vertex = vertex


class ChainError(GeometryError):
    """Base class for chain validation failures."""


class PropertyOneError(ChainError):
    """Two consecutive circles do not share a boundary point."""


class PropertyTwoError(ChainError):
    """Connecting arcs on an interior circle overlap."""


class TerminalError(ChainError):
    """A terminal point violates the terminal constraints."""
