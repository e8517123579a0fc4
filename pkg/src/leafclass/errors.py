"""Exception hierarchy shared by all modules."""


class LeafClassError(Exception):
    """Base class for every error raised by this package."""


class TruncationExceeded(LeafClassError):
    """A derivative past the declared truncation order of a chain was required."""


class UnknownSymbol(LeafClassError):
    pass


class ContextMismatch(LeafClassError):
    pass


class MissingComponent(LeafClassError):
    pass


class ParseError(LeafClassError):
    pass


class OrderMismatch(LeafClassError):
    pass


class NotRegular(LeafClassError):
    pass


class NonzeroBasePoint(LeafClassError):
    pass


class ZeroScalar(LeafClassError):
    pass


class IndexOutOfRange(LeafClassError):
    pass


class ResourceBudgetExceeded(LeafClassError):
    pass


class NotBasic(LeafClassError):
    def __init__(self, failed_check: str, detail: str = ""):
        self.failed_check = failed_check
        super().__init__(f"form is not basic: {failed_check} check failed {detail}".strip())


class PrecisionInsufficient(LeafClassError):
    pass


class MalformedSite(LeafClassError):
    pass


class MissingString(LeafClassError):
    pass


class CandidateNotClosed(LeafClassError):
    pass


class CandidateNotPeriodic(LeafClassError):
    pass


class MalformedPresentation(LeafClassError):
    """Generators or relations of an atlas presentation are inconsistent."""
