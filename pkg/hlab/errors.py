class HadamardError(Exception):
    pass


class UnderivableOrder(HadamardError):

    def __init__(self, requested, available):
        super().__init__(
            'derivative of order {} requested, only {} available'.format(
                requested, available))
        self.requested = requested
        self.available = available


class QuadratureNoConvergence(HadamardError):
    pass


class OrderTooLarge(HadamardError):
    pass


class SupportTouchesHyperplane(HadamardError):
    pass


class EmptyRegion(HadamardError, ValueError):
    pass


class NotOpenRegion(HadamardError, ValueError):
    pass


class ContainsZero(HadamardError, ValueError):
    pass


class IndeterminateProduct(HadamardError):
    pass


class ApproximateVStar(HadamardError):
    pass


class GridTooCoarse(HadamardError):
    pass


class ConfigError(HadamardError, ValueError):
    """A config literal failed to parse; `path` names the offending field."""

    def __init__(self, path, message):
        super().__init__('{}: {}'.format(path or '<root>', message))
        self.path = path
        self.message = message
