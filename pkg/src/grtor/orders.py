"""Monomial orders on exponent vectors.

Three orders: degrevlex and deglex (global, 1 minimal) and local-degree
(total degree ascending, ties by degrevlex reversed; 1 maximal).  The
local-degree order makes the leading monomial of a power-series element
pick out its lowest-degree part, which is what standard-basis
computation of tangent cones needs.
"""

DEGREVLEX = "degrevlex"
DEGLEX = "deglex"
LOCAL_DEGREE = "local-degree"

_KINDS = (DEGREVLEX, DEGLEX, LOCAL_DEGREE)


class OrderError(ValueError):
    pass


class MonomialOrder:
    def __init__(self, kind):
        if kind not in _KINDS:
            raise OrderError("unknown order kind %r" % (kind,))
        self.kind = kind

    @property
    def is_local(self):
        return self.kind == LOCAL_DEGREE

    def key(self, expvec):
        """Sort key: m1 > m2 in the order iff key(m1) > key(m2)."""
        deg = sum(expvec)
        if self.kind == DEGREVLEX:
            return (deg, tuple(-e for e in reversed(expvec)))
        if self.kind == DEGLEX:
            return (deg, tuple(expvec))
        # local-degree: lower total degree is larger, ties by degrevlex reversed
        return (-deg, tuple(reversed(expvec)))

    def compare(self, m1, m2):
        """-1, 0 or 1 as m1 <, =, > m2.  Vectors must have equal length."""
        if len(m1) != len(m2):
            raise OrderError("exponent vectors of unequal length: %d vs %d" % (len(m1), len(m2)))
        k1, k2 = self.key(m1), self.key(m2)
        if k1 < k2:
            return -1
        if k1 > k2:
            return 1
        return 0

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.kind == other.kind

    def __hash__(self):
        return hash(("MonomialOrder", self.kind))

    def __repr__(self):
        return "MonomialOrder(%r)" % self.kind


def compare(order, m1, m2):
    """Module-level comparison helper; see MonomialOrder.compare."""
    return order.compare(tuple(m1), tuple(m2))
