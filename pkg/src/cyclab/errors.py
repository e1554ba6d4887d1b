"""Shared error taxonomy. Every failure mode raised by the library lives here
so callers (CLI, HTTP layer, tests) can catch one base class and map the
``code`` attribute to a machine-readable response."""


class CyclabError(Exception):
    code = "error"

    def __init__(self, message="", **context):
        super().__init__(message or self.__doc__ or self.code)
        self.context = context


class NotDivisible(CyclabError):
    """Laurent division had a nonzero remainder."""

    code = "not_divisible"


class LaurentViolation(CyclabError):
    """An exchange produced a non-Laurent expression."""

    code = "laurent_violation"


class CapExceeded(CyclabError):
    """Enumeration exceeded the configured node cap."""

    code = "cap_exceeded"


class NotReduced(CyclabError):
    """The word is not reduced in its Coxeter group."""

    code = "not_reduced"


class InfiniteParabolic(CyclabError):
    """The requested parabolic subgroup is infinite."""

    code = "infinite_parabolic"


class LoopAtVertex(CyclabError):
    """Mutation is undefined at a vertex carrying a loop."""

    code = "loop_at_vertex"


class TwoCycleAtVertex(CyclabError):
    """Mutation is undefined at a vertex on a 2-cycle."""

    code = "two_cycle_at_vertex"


class FrozenVertex(CyclabError):
    """Mutation was requested at a frozen vertex."""

    code = "frozen_vertex"


class NotMutable(CyclabError):
    """The quiver has a loop or 2-cycle touching an exchangeable vertex."""

    code = "not_mutable"


class TruncationTooSmall(CyclabError):
    """The truncated algebra is too short for the requested computation."""

    code = "truncation_too_small"


class DecomposableSummand(CyclabError):
    """A module expected to be indecomposable is not."""

    code = "decomposable_summand"


class NotClusterTilting(CyclabError):
    """The family fails the rigidity checks required for exchange."""

    code = "not_cluster_tilting"


class NoExchange(CyclabError):
    """No exchange exists at the requested summand."""

    code = "no_exchange"


class InterpolationInconsistent(CyclabError):
    """Prime-field counts do not fit a single integer polynomial."""

    code = "interpolation_inconsistent"


class BadSample(CyclabError):
    """Random sampling failed to produce a point on the cell."""

    code = "bad_sample"


class IdentityFailed(CyclabError):
    """A minor identity failed at a sampled point."""

    code = "identity_failed"
