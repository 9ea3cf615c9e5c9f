"""Bigraded Hilbert series and the negative consecutive cancellation calculus.

A BigradedSeries is a truncated double series sum c_{i,j} z^i t^j with
nonnegative integer coefficients (z tracks homological degree, t
internal degree).  A negative consecutive cancellation subtracts
z^{i+1} t^a + z^i t^b with a < b; deciding whether one series reaches
another by such cancellations is a bipartite perfect-matching problem
on the coefficient units of the difference.
"""

from collections import namedtuple


class SeriesError(ValueError):
    pass


class CancellationError(ValueError):
    pass


class Cancellation(namedtuple("Cancellation", "i a b")):
    """One step: subtract z^{i+1} t^a + z^i t^b, requiring a < b."""

    @property
    def page(self):
        return self.b - self.a

    def validate(self):
        if self.a >= self.b:
            raise CancellationError("invalid cancellation (i=%d, a=%d, b=%d): needs a < b" % self)
        if self.i < 0 or self.a < 0:
            raise CancellationError("negative index in cancellation %r" % (self,))


class BigradedSeries:
    """Truncated series {(i, j): positive int} with bounds i_max, j_max."""

    def __init__(self, i_max, j_max, coefficients=None):
        if i_max < 0 or j_max < 0:
            raise SeriesError("bounds must be nonnegative")
        self.i_max = i_max
        self.j_max = j_max
        self.coefficients = {}
        if coefficients:
            for (i, j), c in coefficients.items():
                self._set(i, j, c)

    def _set(self, i, j, c):
        if not (0 <= i <= self.i_max and 0 <= j <= self.j_max):
            raise SeriesError("(%d, %d) outside bounds (%d, %d)" % (i, j, self.i_max, self.j_max))
        if c < 0:
            raise SeriesError("negative coefficient %d at (%d, %d)" % (c, i, j))
        if c:
            self.coefficients[(i, j)] = c
        else:
            self.coefficients.pop((i, j), None)

    def get(self, i, j):
        return self.coefficients.get((i, j), 0)

    def copy(self):
        return BigradedSeries(self.i_max, self.j_max, dict(self.coefficients))

    def same_bounds(self, other):
        return self.i_max == other.i_max and self.j_max == other.j_max

    def __eq__(self, other):
        return (isinstance(other, BigradedSeries) and self.same_bounds(other)
                and self.coefficients == other.coefficients)

    def __repr__(self):
        return "BigradedSeries(%d, %d, %r)" % (self.i_max, self.j_max, self.coefficients)

    def equal_on(self, other, cells):
        return all(self.get(i, j) == other.get(i, j) for (i, j) in cells)

    # arithmetic -------------------------------------------------------------

    def add(self, other):
        if not self.same_bounds(other):
            raise SeriesError("truncation mismatch")
        out = self.copy()
        for (i, j), c in other.coefficients.items():
            out._set(i, j, out.get(i, j) + c)
        return out

    def subtract(self, other):
        """Componentwise difference; raises with a witness cell on negativity."""
        if not self.same_bounds(other):
            raise SeriesError("truncation mismatch")
        out = self.copy()
        for (i, j), c in other.coefficients.items():
            d = out.get(i, j) - c
            if d < 0:
                raise SeriesError("negative coefficient %d at (i=%d, j=%d)" % (d, i, j))
            out._set(i, j, d)
        return out

    def layer_sums(self):
        """Evaluate at t=1 per homological layer: [sum_j c_{i,j} for i]."""
        sums = [0] * (self.i_max + 1)
        for (i, _j), c in self.coefficients.items():
            sums[i] += c
        return sums

    def alternating_sum(self):
        return sum(((-1) ** i) * s for i, s in enumerate(self.layer_sums()))

    def total_units(self):
        return sum(self.coefficients.values())

    # cancellation steps ------------------------------------------------------

    def subtract_cancellation(self, canc):
        """Apply one negative consecutive cancellation."""
        canc.validate()
        hi = (canc.i + 1, canc.a)
        lo = (canc.i, canc.b)
        if canc.i + 1 > self.i_max or canc.b > self.j_max:
            raise CancellationError("cancellation %r outside series bounds" % (canc,))
        if self.get(*hi) < 1 or self.get(*lo) < 1:
            raise CancellationError(
                "cancellation %r infeasible: coefficients %d at (i+1,a), %d at (i,b)"
                % (canc, self.get(*hi), self.get(*lo)))
        out = self.copy()
        out._set(hi[0], hi[1], out.get(*hi) - 1)
        out._set(lo[0], lo[1], out.get(*lo) - 1)
        return out

    # text formats -------------------------------------------------------------

    def to_text(self):
        lines = ["%d %d" % (self.i_max, self.j_max)]
        for (i, j) in sorted(self.coefficients):
            lines.append("%d %d %d" % (i, j, self.coefficients[(i, j)]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        rows = [ln.split("#")[0].strip() for ln in text.splitlines()]
        rows = [ln for ln in rows if ln]
        if not rows:
            raise SeriesError("empty series text")
        head = rows[0].split()
        if len(head) != 2:
            raise SeriesError("series header must be 'imax jmax'")
        series = cls(int(head[0]), int(head[1]))
        for ln in rows[1:]:
            parts = ln.split()
            if len(parts) != 3:
                raise SeriesError("series line must be 'i j c': %r" % ln)
            i, j, c = (int(x) for x in parts)
            series._set(i, j, series.get(i, j) + c)
        return series

    def to_diagram(self):
        """Macaulay-style Betti diagram: rows j - i, columns i."""
        if not self.coefficients:
            return "(zero series)\n"
        cols = range(0, max(i for i, _ in self.coefficients) + 1)
        rows_lo = min(j - i for i, j in self.coefficients)
        rows_hi = max(j - i for i, j in self.coefficients)
        width = max(4, max(len(str(c)) for c in self.coefficients.values()) + 2)
        header = " " * 5 + "".join(str(i).rjust(width) for i in cols)
        out = [header]
        for r in range(rows_lo, rows_hi + 1):
            cells = []
            for i in cols:
                c = self.get(i, i + r)
                cells.append((str(c) if c else ".").rjust(width))
            out.append(("%d:" % r).rjust(5) + "".join(cells))
        return "\n".join(out) + "\n"


def series_from_layers(i_max, j_max, layers):
    """Build from {i: {j: c}} nested dicts (zeros allowed, dropped)."""
    s = BigradedSeries(i_max, j_max)
    for i, row in layers.items():
        for j, c in row.items():
            if c:
                s._set(i, j, s.get(i, j) + c)
    return s


class CancellationCertificate:
    """Ordered list of cancellations; canonical order is (page, i, a)."""

    def __init__(self, steps=()):
        self.steps = list(steps)
        for s in self.steps:
            s.validate()

    def sorted(self):
        return CancellationCertificate(sorted(self.steps, key=lambda c: (c.page, c.i, c.a)))

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __eq__(self, other):
        return isinstance(other, CancellationCertificate) and self.steps == other.steps

    def multiset(self):
        out = {}
        for s in self.steps:
            out[s] = out.get(s, 0) + 1
        return out

    def to_text(self):
        lines = ["steps %d" % len(self.steps)]
        for s in self.steps:
            lines.append("%d %d %d" % (s.i, s.a, s.b))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        rows = [ln.split("#")[0].strip() for ln in text.splitlines()]
        rows = [ln for ln in rows if ln]
        if not rows or not rows[0].startswith("steps"):
            raise SeriesError("certificate text must start with 'steps N'")
        steps = []
        for ln in rows[1:]:
            i, a, b = (int(x) for x in ln.split())
            steps.append(Cancellation(i, a, b))
        return cls(steps)

    def __repr__(self):
        return "CancellationCertificate(%r)" % (self.steps,)


class VerifyResult:
    def __init__(self, ok, reason=None):
        self.ok = ok
        self.reason = reason

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "VerifyResult(%r, %r)" % (self.ok, self.reason)


def verify_certificate(source, certificate, target, cells=None):
    """True iff applying the certificate to source succeeds and yields target.

    `cells` optionally restricts the final equality test (used for
    truncation windows); the intermediate feasibility checks are always
    full-grid.
    """
    current = source.copy()
    for step in certificate:
        try:
            current = current.subtract_cancellation(step)
        except CancellationError as exc:
            return VerifyResult(False, "step %r failed: %s" % (step, exc))
    if cells is None:
        if current == target:
            return VerifyResult(True)
        return VerifyResult(False, "result differs from target")
    if current.equal_on(target, cells):
        return VerifyResult(True)
    return VerifyResult(False, "result differs from target on the checked window")


# --- decision by maximum bipartite matching ----------------------------------


def _max_matching(n_left, n_right, adj):
    """Simple augmenting-path maximum bipartite matching.

    adj[l] = list of right nodes reachable from left node l.  Returns
    (size, match_left) with match_left[l] = r or None.
    """
    match_left = [None] * n_left
    match_right = [None] * n_right

    def augment(l, seen):
        for r in adj[l]:
            if r in seen:
                continue
            seen.add(r)
            if match_right[r] is None or augment(match_right[r], seen):
                match_left[l] = r
                match_right[r] = l
                return True
        return False

    size = 0
    for l in range(n_left):
        if augment(l, set()):
            size += 1
    return size, match_left


class Decision:
    """Outcome of decide_cancellation.

    feasible: bool; certificate on success.  On failure: `negative_cell`
    if the difference had a negative coefficient, otherwise
    `unmatched_hard` / `unmatched_boundary` counts of units that cannot
    pair inside the grid (boundary units could in principle pair past
    j_max and are only reported, never silently matched).
    """

    def __init__(self, feasible, certificate=None, negative_cell=None,
                 unmatched_hard=0, unmatched_boundary=0):
        self.feasible = feasible
        self.certificate = certificate
        self.negative_cell = negative_cell
        self.unmatched_hard = unmatched_hard
        self.unmatched_boundary = unmatched_boundary

    def __bool__(self):
        return self.feasible

    def __repr__(self):
        if self.feasible:
            return "Decision(feasible, %d steps)" % len(self.certificate)
        return ("Decision(infeasible, negative_cell=%r, hard=%d, boundary=%d)"
                % (self.negative_cell, self.unmatched_hard, self.unmatched_boundary))


def decide_cancellation(source, target):
    """Decide whether target is reachable from source by negative
    consecutive cancellations; constructive on success.

    The difference D = source - target must be componentwise nonnegative
    and its coefficient units must admit a perfect pairing of cells
    {(i+1, a), (i, b)} with a < b.  Units live at alternating homological
    parity, so this is maximum bipartite matching on the units.
    """
    if not source.same_bounds(target):
        raise SeriesError("truncation mismatch between source and target")
    try:
        diff = source.subtract(target)
    except SeriesError:
        witness = None
        for (i, j) in sorted(set(source.coefficients) | set(target.coefficients)):
            if source.get(i, j) - target.get(i, j) < 0:
                witness = (i, j)
                break
        return Decision(False, negative_cell=witness)

    units = []  # (hom degree, internal degree)
    for (i, j) in sorted(diff.coefficients):
        units.extend([(i, j)] * diff.get(i, j))
    if not units:
        return Decision(True, certificate=CancellationCertificate())

    odd = [u for u in units if u[0] % 2 == 1]
    even = [u for u in units if u[0] % 2 == 0]

    def pairable(u, v):
        # valid cancellation pair between adjacent homological degrees:
        # the higher-degree unit's t-degree must be strictly smaller
        (h1, t1), (h2, t2) = u, v
        if h1 == h2 + 1:
            return t1 < t2
        if h2 == h1 + 1:
            return t2 < t1
        return False

    adj = [[r for r, v in enumerate(even) if pairable(u, v)] for u in odd]
    size, match_left = _max_matching(len(odd), len(even), adj)
    if 2 * size != len(units):
        matched_right = {r for r in match_left if r is not None}
        unmatched = [u for l, u in enumerate(odd) if match_left[l] is None]
        unmatched += [v for r, v in enumerate(even) if r not in matched_right]
        # a unit at homological degree h >= 1 could pair with a partner
        # beyond the j_max truncation; one at h = 0 could not
        boundary = sum(1 for (h, _t) in unmatched if h >= 1)
        hard = len(unmatched) - boundary
        return Decision(False, unmatched_hard=hard, unmatched_boundary=boundary)

    steps = []
    for l, r in enumerate(match_left):
        (h1, t1), (h2, t2) = odd[l], even[r]
        if h1 == h2 + 1:
            steps.append(Cancellation(h2, t1, t2))
        else:
            steps.append(Cancellation(h1, t2, t1))
    cert = CancellationCertificate(steps).sorted()
    return Decision(True, certificate=cert)


def decide_cancellation_bruteforce(source, target):
    """Exhaustive pairing enumeration; oracle for decide_cancellation.

    Only sensible for small unit counts (<= 12 or so).
    """
    if not source.same_bounds(target):
        raise SeriesError("truncation mismatch between source and target")
    try:
        diff = source.subtract(target)
    except SeriesError:
        return False
    units = []
    for (i, j) in sorted(diff.coefficients):
        units.extend([(i, j)] * diff.get(i, j))
    if len(units) % 2:
        return False

    def pairable(u, v):
        (h1, t1), (h2, t2) = u, v
        if h1 == h2 + 1:
            return t1 < t2
        if h2 == h1 + 1:
            return t2 < t1
        return False

    def search(remaining):
        if not remaining:
            return True
        first = remaining[0]
        rest = remaining[1:]
        for k, other in enumerate(rest):
            if pairable(first, other):
                if search(rest[:k] + rest[k + 1:]):
                    return True
        return False

    return search(units)
