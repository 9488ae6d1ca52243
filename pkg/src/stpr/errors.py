"""Exception types shared across the toolkit."""


class StprError(Exception):
    """Base class for all toolkit errors."""


class GeometryError(StprError):
    """Invalid geometric construction (non-finite values, min > max, ...)."""


class ParseError(StprError):
    """Input document is not well-formed."""


class SchemaError(StprError):
    """Input document is well-formed but violates its schema."""


class UnknownFixture(StprError):
    """A scenario references a constraint fixture that cannot be resolved."""


class StartInForbiddenRegion(StprError):
    """Scenario start point is forbidden by one of its constraints."""


class ExternalUnavailable(StprError):
    """An external constraint was evaluated without a live bridge session."""


class AcceptanceTooLow(StprError):
    """Rejection sampling could not accept enough points within its budget."""


class EmptyIndex(StprError):
    """Attempted to build a point-cloud index with no points."""


class StartBlocked(StprError):
    """Planner start state collides with the obstacle index."""


class GoalRegionEmpty(StprError):
    """Every state within the goal radius collides."""


class BridgeError(StprError):
    """The constraint bridge returned an error response."""
