"""Exception hierarchy shared by the whole package.

Every error carries an ``exit_code`` so the command line front end can map
failures to distinct process statuses: 2 for malformed configuration or
parameters, 3 for violated preconditions, 4 for a failed certification
(something that must hold did not), 5 for tripped resource guards.
"""


class MoranLabError(Exception):
    """Base class for library errors."""

    exit_code = 3


class InvalidParameter(MoranLabError):
    """Argument malformed or outside its documented domain."""

    exit_code = 2


class OutOfRange(MoranLabError):
    """Index or radius outside the range the schedule covers."""


class InvalidRange(MoranLabError):
    """Empty or backwards exponent interval."""


class ScheduleTooShort(MoranLabError):
    """The finite schedule does not reach far enough for the request."""


class NotCoprime(MoranLabError):
    """Order requested for a base sharing a factor with the modulus."""


class EvenPrime(MoranLabError):
    """p = 2 passed where an odd prime is required."""


class NoPrimeInWindow(MoranLabError):
    """A cube window [(n+offset)^3, (n+offset+1)^3] contains no prime."""


class NotInSupport(MoranLabError):
    """Point lies outside the attractor of the digit system."""


class InvalidInterval(MoranLabError):
    """Avoidance interval is degenerate or empty."""


class GaugeTooSmall(MoranLabError):
    """Sparseness function fails to grow; no index set can be certified."""


class NotWellDistributed(MoranLabError):
    """Exponent set fails the bijection onto the digit product space."""


class TailNotCertifiable(MoranLabError):
    """Schedule exhausted before the tail bound reaches the target accuracy."""


class CounterexampleFound(MoranLabError):
    """An identity that must always hold failed; indicates a bug, surfaced loudly."""

    exit_code = 4


class TooLarge(MoranLabError):
    """Resource guard tripped before an infeasibly large enumeration."""

    exit_code = 5
