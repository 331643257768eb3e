"""Exception types raised across the package."""


class GlyphError(Exception):
    """Base class for all package errors."""


class DegenerateTriangle(GlyphError, ValueError):
    pass


class MalformedImage(GlyphError, ValueError):
    pass


class EmptyImage(GlyphError, ValueError):
    pass


class BothNull(GlyphError, ValueError):
    pass


class IllegalMultiEdge(GlyphError, ValueError):
    pass


class OperationBroken(GlyphError):
    """A crossover edit would leave the adjacency matrix illegal; the offspring is abandoned."""


class IllegalState(OperationBroken):
    pass


class EmptyTemplates(GlyphError, ValueError):
    pass


class EmptyTrainingSet(GlyphError, ValueError):
    pass


class MalformedStore(GlyphError, ValueError):
    pass
