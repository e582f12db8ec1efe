"""Exception hierarchy shared by all ckgeom modules."""


class CKGeomError(Exception):
    """Base class for every error raised by the library."""


class DomainError(CKGeomError, ValueError):
    """Argument outside the domain of an inverse or branch-limited function."""


class PoleError(CKGeomError, ZeroDivisionError):
    """Evaluation at a pole (a vanishing cosine or sine in a denominator)."""


class BranchError(DomainError):
    """Point sits on a branch cut that the operation cannot cross."""


class BranchOverflowError(BranchError):
    """A flow left the principal branch of the Lambda function."""


class RangeError(DomainError):
    """A transformed coordinate left the range of its chart."""


class ChartDomainError(DomainError):
    """Chart coordinates outside the declared chart domain."""


class ChartCoverageError(DomainError):
    """Ambient point not in the image of the requested chart."""


class UnknownSpaceError(CKGeomError, KeyError):
    """Unrecognised space name."""


class DegenerateMetricError(CKGeomError):
    """Metric query that is meaningless because the main metric is degenerate."""


class CausalityError(CKGeomError):
    """Distance requested between points that are not time-like separated."""


class SingularMatrixError(CKGeomError):
    """Matrix that should be invertible turned out singular."""


class IsotropicBaseError(CKGeomError):
    """Base geodesic is isotropic, so metric notions along it are undefined."""


class ImaginaryCurvatureError(CKGeomError):
    """Squared geodesic curvature came out negative."""


class DegenerateError(CKGeomError):
    """Degenerate configuration (a vanishing normaliser)."""


class ZeroLengthError(CKGeomError, ValueError):
    """Scale length of zero passed to the conformal realisation."""


class PoleProjectionError(PoleError):
    """Stereographic projection from the pole itself."""


class InfinityError(CKGeomError):
    """Point at infinity has no finite compact-chart coordinates."""
