"""Exception types shared across the package."""


class NetworkError(ValueError):
    """Invalid network description."""


class LoopEdgeError(NetworkError):
    pass


class DuplicateEdgeError(NetworkError):
    pass


class EmptyPartitionError(NetworkError):
    pass


class DanglingEndpointError(NetworkError):
    pass


class SingularOperatorError(ArithmeticError):
    """A linear operator that must be inverted is (numerically) singular.

    Carries the smallest and largest singular values, and optionally the
    experiment index and frequency label of the solve that failed.
    """

    def __init__(self, message, smallest=None, largest=None, experiment=None, frequency=None):
        self.smallest = smallest
        self.largest = largest
        self.experiment = experiment
        self.frequency = frequency
        detail = []
        if smallest is not None:
            detail.append(f"smallest singular value {smallest:.3e}")
        if experiment is not None:
            detail.append(f"experiment {experiment}")
        if frequency is not None:
            detail.append(f"frequency {frequency}")
        if detail:
            message = f"{message} ({', '.join(detail)})"
        super().__init__(message)

    def tagged(self, experiment=None, frequency=None):
        msg = str(self.args[0]).split(" (")[0]
        return SingularOperatorError(msg, self.smallest, self.largest, experiment, frequency)


class LineSearchError(RuntimeError):
    """Non-finite merit value met during a line search."""
