"""Exception hierarchy shared across netnorm."""


class NetnormError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(NetnormError, ValueError):
    pass


class AsymmetricMatrix(ValidationError):
    def __init__(self, i, j, message=None):
        self.index = (int(i), int(j))
        super().__init__(message or f"weights not symmetric at ({i}, {j})")


class NonzeroDiagonal(ValidationError):
    def __init__(self, i):
        self.index = int(i)
        super().__init__(f"nonzero diagonal entry at {i}")


class NonFiniteEntry(ValidationError):
    def __init__(self, i, j):
        self.index = (int(i), int(j))
        super().__init__(f"non-finite weight at ({i}, {j})")


class DuplicateLabel(ValidationError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"duplicate node label {label!r}")


class LabelMismatch(ValidationError):
    def __init__(self, label, message=None):
        self.label = label
        super().__init__(message or f"label {label!r} is not present in both networks")


class SizeMismatch(ValidationError):
    pass


class NegativeWeight(ValidationError):
    pass


class InvalidProbability(ValidationError):
    pass


class InvalidParams(ValidationError):
    pass


class ParseError(NetnormError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class DuplicateEdge(ParseError):
    def __init__(self, line, src, dst):
        self.edge = (src, dst)
        super().__init__(line, f"duplicate edge ({src}, {dst})")


class SelfLoop(ParseError):
    def __init__(self, line, label):
        self.label = label
        super().__init__(line, f"self-loop on {label!r}")


class NoConvergence(NetnormError):
    """Raised by iterative solvers that exhaust their iteration budget.

    ``last_iterate`` holds the final iterate so callers can fall back to it.
    """

    def __init__(self, max_iter, last_iterate=None, message=None):
        self.max_iter = max_iter
        self.last_iterate = last_iterate
        super().__init__(message or f"no convergence after {max_iter} iterations")


class TooLarge(NetnormError):
    def __init__(self, n, cap):
        self.n = n
        self.cap = cap
        super().__init__(f"exact enumeration needs n <= {cap}, got n = {n}")


class AssumptionWarning(UserWarning):
    """alpha * (R + 1) < 1: the test can never reject."""
