"""
Attack Tree Checker - Exception Hierarchy
All errors raised by the models, engines and parsers derive from AttackTreeError
"""

from typing import Optional


class AttackTreeError(Exception):
    """Base class for every checker error"""

    kind = "error"


class SystemValidationError(AttackTreeError):
    """Malformed transition system (duplicate ids, undeclared endpoints)"""

    kind = "invalid_system"


class PathError(AttackTreeError):
    """Invalid path, anchoring or concatenation"""

    kind = "invalid_path"


class UnknownPropositionError(AttackTreeError):
    """A goal references a proposition the labeling does not define"""

    kind = "unknown_proposition"

    def __init__(self, name: str):
        super().__init__(f"Unknown proposition: {name!r}")
        self.name = name


class TreeStructureError(AttackTreeError):
    """Arity violations and unresolvable node paths"""

    kind = "invalid_tree"

    def __init__(self, message: str, errors: Optional[list] = None):
        super().__init__(message)
        self.errors = list(errors or [message])


class ArityCapExceeded(AttackTreeError):
    """AND arity above the configured cap"""

    kind = "arity_cap_exceeded"

    def __init__(self, arity: int, cap: int):
        super().__init__(
            f"AND arity {arity} exceeds the configured cap {cap} "
            f"(raise --max-and-arity or ATC_MAX_AND_ARITY)"
        )
        self.arity = arity
        self.cap = cap


class SearchBudgetExceeded(AttackTreeError):
    """A bounded search ran out of budget before reaching a verdict"""

    kind = "budget_exceeded"

    def __init__(self, engine: str, budget: int):
        super().__init__(f"{engine}: budget of {budget} exhausted without a verdict")
        self.engine = engine
        self.budget = budget


class SpecSyntaxError(AttackTreeError):
    """Proposition-expression syntax error with a 1-based position"""

    kind = "syntax_error"

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.reason = message
        self.line = line
        self.column = column


class SchemaError(AttackTreeError):
    """JSON document does not follow the system/tree schema"""

    kind = "schema_error"

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"


class DimacsError(AttackTreeError):
    """Malformed DIMACS CNF input"""

    kind = "dimacs_error"

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class ConfigurationError(AttackTreeError):
    """Bad environment or option value"""

    kind = "configuration_error"
