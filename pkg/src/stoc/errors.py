"""Exception hierarchy; the CLI maps these onto exit codes."""


class StocError(Exception):
    """Base class for toolkit errors."""


class InputError(StocError, ValueError):
    """Precondition or schema violation in caller-supplied data (exit 2)."""


class CapExceeded(InputError):
    """A configured enumeration or search cap would be exceeded."""


class EmptySubcode(StocError):
    """A restriction produced no codewords; distinct from bad input."""


class InconsistentBounds(StocError):
    """A lower bound exceeds an upper bound; always a bug somewhere (exit 3)."""

    def __init__(self, lower, upper):
        self.lower = lower
        self.upper = upper
        super().__init__(f"lower bound {lower} exceeds upper bound {upper}")


class Infeasible(StocError):
    """Linear program has no feasible point."""
