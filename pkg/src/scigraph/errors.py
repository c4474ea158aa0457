"""Exception hierarchy shared by every scigraph module."""

from __future__ import annotations


class ScigraphError(Exception):
    """Base class for all library errors."""


# graph store
class GraphError(ScigraphError):
    pass


class InvalidLabel(GraphError):
    pass


class InvalidRelType(GraphError):
    pass


class MissingNameProperty(GraphError):
    pass


class NonFiniteFloat(GraphError):
    pass


class InvalidProperty(GraphError):
    """Property value of an unsupported type or outside its allowed range."""


class UnknownNode(GraphError):
    pass


class IncompatibleEndpoints(GraphError):
    pass


class CitesSelfLoop(GraphError):
    pass


class GraphFrozen(GraphError):
    pass


class TypeMismatch(ScigraphError):
    """Text compared against a number (or another incomparable pair)."""


# similarity
class InvalidThreshold(ScigraphError, ValueError):
    pass


# indicators
class IndicatorError(ScigraphError):
    pass


class NotAnArticle(IndicatorError):
    pass


class NotAJournal(IndicatorError):
    pass


class NoArticles(IndicatorError):
    pass


class SelfExceedsTotal(IndicatorError, ValueError):
    pass


# internationality
class ModelError(ScigraphError, ValueError):
    pass


class DimensionMismatch(ModelError):
    pass


class NegativeInput(ModelError):
    pass


class NegativeElasticity(ModelError):
    pass


class NonPositiveScale(ModelError):
    pass


class ZeroInput(ModelError):
    pass


# charts
class ChartError(ScigraphError):
    pass


class UnknownColumn(ChartError):
    pass


class NonIntegerX(ChartError):
    pass


class NonNumericColumn(ChartError):
    pass


class EmptyTable(ChartError):
    pass


# snapshots
class SnapshotError(ScigraphError):
    pass
