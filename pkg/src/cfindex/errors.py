"""Exception hierarchy.

Every error raised by the package derives from :class:`CfiError`. Data and
model failures derive from :class:`DataError` (CLI exit code 1), configuration
problems from :class:`ConfigError` (exit code 2).
"""


class CfiError(Exception):
    pass


class DataError(CfiError):
    pass


class ConfigError(CfiError):
    pass


# --- dataset / ingestion ---------------------------------------------------

class MissingCell(DataError):
    def __init__(self, entity, year, indicator):
        self.entity, self.year, self.indicator = entity, year, indicator
        super().__init__(f"missing cell: entity={entity} year={year} indicator={indicator}")


class DuplicateCell(DataError):
    def __init__(self, entity, year, indicator):
        self.entity, self.year, self.indicator = entity, year, indicator
        super().__init__(f"duplicate cell: entity={entity} year={year} indicator={indicator}")


class NonFiniteValue(DataError):
    def __init__(self, entity, year, indicator, value):
        self.entity, self.year, self.indicator = entity, year, indicator
        super().__init__(
            f"non-finite value {value!r}: entity={entity} year={year} indicator={indicator}"
        )


class UnknownIndicator(DataError):
    def __init__(self, indicator, entity=None, year=None):
        self.entity, self.year, self.indicator = entity, year, indicator
        super().__init__(f"unknown indicator {indicator!r} (entity={entity} year={year})")


class UnknownEntity(DataError):
    def __init__(self, entity):
        self.entity = entity
        super().__init__(f"entity {entity!r} is not declared in the configuration")


class UnknownYear(DataError):
    def __init__(self, year):
        self.year = year
        super().__init__(f"unknown year {year!r}")


class NonPositiveReciprocal(DataError):
    def __init__(self, entity, year, indicator, value):
        self.entity, self.year, self.indicator = entity, year, indicator
        super().__init__(
            f"reciprocal of non-positive value {value!r}: "
            f"entity={entity} year={year} indicator={indicator}"
        )


class HierarchyError(ConfigError):
    pass


# --- transform ---------------------------------------------------------------

class DegenerateRange(DataError):
    def __init__(self, indicator):
        self.indicator = indicator
        super().__init__(f"indicator {indicator!r} has max == min")


class NonPositiveColumnMax(DataError):
    def __init__(self, indicator):
        self.indicator = indicator
        super().__init__(f"column {indicator!r} has a non-positive maximum")


class NegativeCell(DataError):
    def __init__(self, indicator):
        self.indicator = indicator
        super().__init__(f"column {indicator!r} contains negative values")


class ZeroColumn(DataError):
    def __init__(self, indicator):
        self.indicator = indicator
        super().__init__(f"column {indicator!r} is identically zero")


class ZeroMeanColumn(DataError):
    def __init__(self, indicator):
        self.indicator = indicator
        super().__init__(f"column {indicator!r} has non-positive mean")


class SingleEntity(DataError):
    def __init__(self):
        super().__init__("at least two entities are needed for a standard deviation")


class DimensionMismatch(DataError):
    pass


class GridMismatch(DataError):
    pass


# --- ssm ---------------------------------------------------------------------

class NotASimplex(DataError):
    pass


class TooFewEntities(DataError):
    pass


class LengthMismatch(DataError):
    pass


class ZeroRankVariance(DataError):
    pass


# --- emissions ---------------------------------------------------------------

class NegativeQuantity(DataError):
    pass


class UnknownGridRegion(DataError):
    pass


# --- regression ----------------------------------------------------------------

class EmptySample(DataError):
    pass


class RankDeficient(DataError):
    def __init__(self, columns):
        self.columns = list(columns)
        super().__init__(f"design matrix is rank deficient; collinear columns: {', '.join(self.columns)}")
