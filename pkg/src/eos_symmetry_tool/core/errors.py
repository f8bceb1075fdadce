# -*- coding: utf-8 -*-
"""
Error module
Exception hierarchy and diagnostic records shared by the core modules.
"""

from dataclasses import dataclass
from typing import Optional, Sequence


@dataclass(frozen=True)
class Diagnostic:
    """A single positioned validation or parse problem"""

    code: str
    message: str
    location: str = ''
    line: Optional[int] = None
    column: Optional[int] = None

    def format(self, source_name='<model>'):
        """Render as `file:line:col: code: message`"""
        if self.line is not None:
            where = f"{source_name}:{self.line}:{self.column or 1}"
        else:
            where = source_name
        return f"{where}: {self.code}: {self.message}"


class EosError(Exception):
    """Base class of every error raised by the toolkit"""


class ModelError(EosError, ValueError):
    """A net or system violates a structural invariant"""


class UnknownNode(EosError, KeyError):
    """A node, net or event name is not declared"""

    def __str__(self):
        return str(self.args[0]) if self.args else 'unknown node'


class NotEnabled(EosError):
    """Firing was requested for something that is not enabled"""

    def __init__(self, message, clause=None, index=None):
        super().__init__(message)
        self.clause = clause
        self.index = index


class LabelBlowup(EosError):
    """Too many candidate events while expanding channel labels"""


class NonBijective(EosError, ValueError):
    """An automorphism candidate is not a bijection on the net's nodes"""


class ImageNotInTheta(EosError):
    """The image of an event under a candidate automorphism is not an event"""


class IncomparableGraphs(EosError):
    """Two reachability graphs cannot be compared"""


class ModelParseError(EosError):
    """The model text has errors; carries all positioned diagnostics"""

    def __init__(self, diagnostics: Sequence[Diagnostic]):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0].format() if self.diagnostics else 'parse failed'
        more = len(self.diagnostics) - 1
        super().__init__(first if more <= 0 else f"{first} (+{more} more)")
