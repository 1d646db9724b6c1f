"""Exception hierarchy.

Every error carries the CLI exit code it maps to and, where one exists, the
id of the offending entity (concept, resource, line number).
"""

from __future__ import annotations


class SemsimError(Exception):
    exit_code = 1

    def __init__(self, message: str, entity: str | None = None):
        super().__init__(message)
        self.entity = entity

    def record(self) -> dict:
        return {
            "error": type(self).__name__,
            "message": str(self),
            "entity": self.entity,
            "exit_code": self.exit_code,
        }


# -- exit code 2: malformed input -------------------------------------------

class ParseError(SemsimError):
    exit_code = 2


class MissingCorpus(SemsimError):
    exit_code = 2


class EmptyCorpus(ParseError):
    pass


class EmptyVector(ParseError):
    pass


class DuplicateConcept(ParseError):
    pass


# -- exit code 3: structural violations --------------------------------------

class StructureError(SemsimError):
    exit_code = 3


class CycleError(StructureError):
    pass


class DegenerateTaxonomy(StructureError):
    pass


class DuplicateResourceId(StructureError):
    pass


# -- exit code 4: references to things that do not exist ---------------------

class UnknownEntity(SemsimError, LookupError):
    exit_code = 4


class UnknownConcept(UnknownEntity):
    pass


class UnknownResource(UnknownEntity):
    pass


# -- exit code 5: statistics that cannot be computed -------------------------

class StatisticsError(SemsimError):
    exit_code = 5


class ZeroVariance(StatisticsError):
    pass


class ConstantVector(StatisticsError):
    pass


class LengthMismatch(StatisticsError):
    pass


class ZeroIDFSum(StatisticsError):
    pass


class TooFewResources(StatisticsError):
    pass


class CorpusTooSmall(StatisticsError):
    pass
