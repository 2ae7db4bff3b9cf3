"""Domain errors shared across the package."""


class ShredmatError(Exception):
    """Base class for reportable domain errors (CLI exit code 1)."""


class InconsistentBundle(ShredmatError):
    """The bundle is not the shredding of any matrix."""


class CandidateExplosion(ShredmatError):
    """Part two would enumerate more candidates than the configured cap."""

    def __init__(self, product: int, cap: int):
        self.product = product
        self.cap = cap
        super().__init__(f"{product} candidate permutations exceed cap {cap}")


class TooLarge(ShredmatError):
    """Brute-force enumeration refused above the configured size limit."""


class HypothesisViolated(ShredmatError):
    """Inputs fall outside the hypothesis of the bound being checked."""
