"""Exception types shared across the package."""


class CongestError(Exception):
    """Base class for every error raised by this package."""


class GraphFormatError(CongestError, ValueError):
    """Malformed graph text."""


class DisconnectedGraphError(CongestError, ValueError):
    """An operation that needs a connected graph got a disconnected one."""


class NotCompleteError(CongestError, ValueError):
    """A clique algorithm got a graph that is missing some edge."""


class MaxRoundsExceeded(CongestError, RuntimeError):
    def __init__(self, limit: int):
        super().__init__(f"simulation did not finish within {limit} rounds")
        self.limit = limit


class CapacityExceeded(CongestError, RuntimeError):
    """A directed edge carried more messages in one round than allowed."""

    def __init__(self, round_: int, edge: tuple[int, int], load: int, capacity: int):
        super().__init__(
            f"edge {edge[0]}->{edge[1]} carried {load} messages in round {round_} "
            f"(capacity {capacity})"
        )
        self.round = round_
        self.edge = edge
        self.load = load
        self.capacity = capacity


class InvalidConfigError(CongestError, ValueError):
    """Experiment configuration is unusable."""
