"""
Error types raised by the hometown pipeline
"""


class HometownError(Exception):
    """Base class for every validation failure in the pipeline"""

    def to_dict(self):
        return {'error': type(self).__name__, 'message': str(self)}


# Geometry
class InvalidCoordinate(HometownError, ValueError):
    pass


class DegenerateCentroid(HometownError):
    """The 3-D mean of the points is (numerically) the zero vector"""


# Clustering
class InputTooLarge(HometownError):
    pass


class InvalidK(HometownError, ValueError):
    pass


class InvalidThreshold(HometownError, ValueError):
    pass


# Prediction
class TooFewPhotos(HometownError):
    pass


class InvalidConfig(HometownError, ValueError):
    pass


# Distance distribution
class InsufficientTail(HometownError):
    pass


class NonPositiveCutoff(HometownError, ValueError):
    pass


class EmptySamples(HometownError, ValueError):
    pass


class NonPositiveSampleInLogScale(HometownError, ValueError):
    pass


class NegativeSample(HometownError, ValueError):
    pass


# Synthetic cohorts
class InvalidParams(HometownError, ValueError):
    pass


# Evaluation
class EmptyCohort(HometownError):
    pass


class NoGroundTruth(HometownError):
    pass


class InvalidThresholds(HometownError, ValueError):
    pass


class EmptyErrors(HometownError, ValueError):
    pass


# Ingestion
class MalformedRow(HometownError):
    """A CSV data row failed validation; line is the 1-based file line"""

    def __init__(self, line, reason):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason

    def to_dict(self):
        data = super().to_dict()
        data['line'] = self.line
        return data


class MalformedDocument(HometownError):
    pass


class MalformedEntry(HometownError):
    """A Flickr JSON entry failed validation; index is 0-based"""

    def __init__(self, index, reason):
        super().__init__(f"entry {index}: {reason}")
        self.index = index
        self.reason = reason

    def to_dict(self):
        data = super().to_dict()
        data['index'] = self.index
        return data


class DuplicateOwner(HometownError):
    pass
