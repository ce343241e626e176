"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested operation."""


class ParseError(ValueError):
    """Text could not be parsed as a number or a document."""


class InfeasibleError(RuntimeError):
    """No parameter choice satisfies the surgery constraints."""


class NoWitnessError(LookupError):
    """The genus is below the smallest base genus of the construction."""

    def __init__(self, genus: int, threshold: int):
        self.genus = genus
        self.threshold = threshold
        super().__init__(
            f"genus {genus} is below the smallest base genus {threshold}; "
            "no witness exists in this construction"
        )
