class InputError(ValueError):
    """Invalid instance, link vector, or parameter."""


class ParseError(InputError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}" if line is not None else message)


class BudgetError(InputError):
    """The influencer budget is too small for the requested algorithm."""


class SizeError(InputError):
    """Instance exceeds the node cap of an exhaustive search."""
