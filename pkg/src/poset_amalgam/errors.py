"""Exception hierarchy shared by every module."""


class PosetError(Exception):
    pass


class CycleDetected(PosetError, ValueError):
    pass


class UnknownElement(PosetError, KeyError):
    pass


class SizeCap(PosetError):
    pass


class NotEmbedding(PosetError, ValueError):
    pass


class NotIsomorphism(PosetError, ValueError):
    pass


class NotInjective(PosetError, ValueError):
    pass


class OrderViolation(PosetError, ValueError):
    def __init__(self, pair, images=None):
        self.pair = pair
        self.images = images
        msg = f"order not preserved/reflected on {pair}"
        if images is not None:
            msg += f" -> {images}"
        super().__init__(msg)


class TypeMismatch(PosetError, ValueError):
    """Raised when the type of the new domain point does not push forward
    onto the type of the new range point."""

    def __init__(self, pushed, target):
        self.pushed = pushed
        self.target = target
        super().__init__(f"type mismatch: pushed {pushed} != target {target}")


class DomainConflict(PosetError, ValueError):
    pass


class PreconditionViolation(PosetError, ValueError):
    pass


class HypothesisViolation(PosetError, ValueError):
    pass


class BoundExhausted(PosetError):
    pass


class CertificateInvalid(PosetError):
    def __init__(self, clause):
        self.clause = clause
        super().__init__(f"certificate invalid: {clause}")


class InternalInvariantBroken(PosetError, AssertionError):
    pass


class ResourceLimit(PosetError):
    def __init__(self, max_nodes):
        self.max_nodes = max_nodes
        super().__init__(f"search exceeded {max_nodes} nodes")


class InconsistentType(PosetError, ValueError):
    """A requested one-point type cannot be realised without changing the
    order among existing points."""
