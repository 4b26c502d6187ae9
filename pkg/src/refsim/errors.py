"""Exception hierarchy shared by the library, the HTTP service and the CLI.

The three leaf categories map onto the CLI exit codes (1/2/3) and the
service's HTTP statuses, so every front end reports failures the same way.
"""

from __future__ import annotations


class RefsimError(Exception):
    """Base class for all errors raised by this package."""


class SystemFileError(RefsimError):
    """A system document failed to parse or validate (CLI exit 1)."""

    def __init__(self, diagnostics: list[str] | str):
        if isinstance(diagnostics, str):
            diagnostics = [diagnostics]
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


class SemanticError(RefsimError):
    """A structurally valid request that cannot be executed (CLI exit 2)."""


class UniverseMismatchError(SemanticError):
    """Operands live on different universes."""


class UnsupportedConnectiveError(SemanticError):
    """The requested operation is undefined for this connective."""


class ExplosionError(RefsimError):
    """A product universe exceeded the configured cell cap (CLI exit 3)."""

    def __init__(self, cells: int, cap: int):
        self.cells = cells
        self.cap = cap
        super().__init__(f"product universe needs {cells} cells, cap is {cap}")


class DecompositionError(SemanticError):
    """A mapping recovered from an equivalence function failed its checks."""
