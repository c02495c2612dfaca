"""Exception hierarchy.  Everything raised on purpose derives from QAverageError."""


class QAverageError(Exception):
    pass


class DomainError(QAverageError, ValueError):
    """An argument lies outside the domain of the operation."""


class SingularCurveError(DomainError):
    pass


class NotOnCurveError(DomainError):
    pass


class InadmissibleParameter(DomainError):
    """A family parameter gives a singular curve or the wrong torsion order."""

    def __init__(self, N, t, condition: str):
        self.N, self.t, self.condition = N, t, condition
        super().__init__(f"N={N}, t={t}: {condition}")


class InvalidIndex(DomainError):
    pass


class PoleError(DomainError):
    """A series was evaluated at (or numerically at) one of its poles."""


class InsufficientTruncation(QAverageError):
    pass


class CrossCheckError(QAverageError):
    """Two independent evaluation routes disagree beyond tolerance."""


class NoTorsionMatch(QAverageError):
    pass


class AmbiguousRecognition(QAverageError):
    pass
