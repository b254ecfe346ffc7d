from .const import EXIT_PARSE, EXIT_REJECTED, EXIT_RESOURCE


class AtomSpecError(Exception):
    exit_code = EXIT_REJECTED


class UsageError(AtomSpecError):
    pass


class CompositionError(UsageError):
    pass


class CapabilityError(AtomSpecError):
    pass


class RejectionError(AtomSpecError):
    pass


class ResourceError(AtomSpecError):
    exit_code = EXIT_RESOURCE


class ParseError(AtomSpecError):
    exit_code = EXIT_PARSE

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")


class NonAdmissibleRelationError(RejectionError):
    def __init__(self, relation):
        self.relation = relation
        super().__init__(
            f"relation {relation.describe()} is not admissible: "
            "it has a nonzero coefficient on a trivial path"
        )
