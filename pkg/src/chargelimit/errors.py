"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A physical parameter is outside its valid domain.

    Raised for inputs that are syntactically fine but physically
    meaningless (negative radius, zero bandwidth, epsilon_r < 1, ...).
    The CLI maps this to exit code 1; genuine usage errors exit 2.
    """
