"""Exception hierarchy. Every error carries a stable machine-readable ``code``."""

from __future__ import annotations


class RigDesignError(Exception):
    code = "error"


class DomainError(RigDesignError, ValueError):
    """An input lies outside the domain of a formula (zero, negative, NaN...)."""

    code = "domain"


class InfeasibleError(RigDesignError):
    """The constraints admit no solution."""

    code = "infeasible"


class DesignValidationError(RigDesignError, ValueError):
    """A caller-chosen value falls outside the interval the design allows."""

    code = "validation"


class ImageFormatError(RigDesignError, ValueError):
    code = "image_format"


class InputError(RigDesignError, ValueError):
    """Malformed input file. ``location`` names the file, row and column when known."""

    code = "input"

    def __init__(self, message: str, path: str | None = None,
                 line: int | None = None, column: str | None = None):
        self.path = path
        self.line = line
        self.column = column
        parts = [p for p in (path, f"line {line}" if line else None,
                             f"column '{column}'" if column else None) if p]
        self.location = ", ".join(parts)
        super().__init__(f"{self.location}: {message}" if parts else message)


class CatalogError(InputError):
    code = "catalog_parse"


class ConfigError(InputError):
    code = "config"
