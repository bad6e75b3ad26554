"""Exception types shared across the toolkit."""


class QuivertauError(Exception):
    """Base class for all toolkit errors."""


class NotAdmissible(QuivertauError):
    """A path of maximal length does not reduce to zero within the stated bound."""

    def __init__(self, path, bound):
        self.path = path
        self.bound = bound
        super().__init__(
            f"path {path} of length {bound} is nonzero; raise the bound or fix the relations"
        )


class FieldMismatch(QuivertauError):
    """Two algebras (or an algebra and data) live over different fields."""


class ShapeMismatch(QuivertauError):
    """Matrix dimensions are inconsistent with the declared vertex dimensions."""


class NotIndecomposable(QuivertauError):
    """An operation required an indecomposable representation."""


class RelationViolation(QuivertauError):
    """A constructed representation fails a defining relation (internal bug guard)."""


class NoCycle(QuivertauError):
    """A quiver has no non-loop cycle with nonzero composite."""


class NotFound(QuivertauError):
    """A search postcondition could not be met (e.g. no admissible quotient exists)."""


class Undecided(QuivertauError):
    """A randomized or budgeted decision procedure ran out of budget.

    Never silently coerced to a boolean verdict.
    """


class FieldExtension(QuivertauError):
    """End/rad is a division ring strictly larger than the ground field.

    Over a non-closed field an indecomposable with this property is not a
    brick in the usual sense; the condition is surfaced instead of resolved.
    """


class NotMutable(QuivertauError):
    """Mutation was requested at an invalid position of a pair."""


class Incomplete(QuivertauError):
    """An exchange-graph operation required a completed exploration."""


class ParseError(QuivertauError):
    """An input file failed to parse; carries the offending line number."""

    def __init__(self, message, filename=None, line=None):
        self.filename = filename
        self.line = line
        where = f"{filename or '<input>'}:{line}" if line is not None else (filename or "<input>")
        super().__init__(f"{where}: {message}")
