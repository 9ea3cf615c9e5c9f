"""Spectral sequence of a filtered complex by exact rank arithmetic.

Pages are computed from the explicit cycle/boundary subquotients

    rZ_i^j = ({z in L_i^j : dz in L_{i-1}^{j+r}} + L_i^{j+1}) / (L_i^{j+1} + d L_{i+1}^j)
    rB_i^j = ((L_i^j cap d L_{i+1}^{j-r+1}) + L_i^{j+1}) / (L_i^{j+1} + d L_{i+1}^j)

with dim rE_i^j = dim rZ_i^j - dim rB_i^j.  Everything reduces to ranks
of level-sorted column echelons, tabulated once per complex.  Page-to-page
drops split into coker(iota) at (i, j) and ker(pi) at (i-1, j+r) in equal
numbers (the differential induces a bijection), which is exactly one
negative consecutive cancellation z^i t^j + z^{i-1} t^{j+r} per unit.

For a complex marked as a degree truncation, entries and cancellations
outside the reliability window are flagged, never reported as numbers.
"""

import random
from collections import namedtuple

from .fields import Field
from .filtered import FilteredComplex
from .linalg import ColumnEchelon, invert, kernel_basis, rank
from .series import (BigradedSeries, Cancellation, CancellationCertificate,
                     verify_certificate)


class SpectralError(ValueError):
    pass


class PageCancellation(namedtuple("PageCancellation", "r i j")):
    """One unit removed at (i, j) on page r, paired with one at (i-1, j+r)."""

    def to_cancellation(self):
        return Cancellation(self.i - 1, self.j, self.j + self.r)


class SpectralPage:
    def __init__(self, r, dims, indeterminate=frozenset()):
        self.r = r  # page index, or None for the infinity page
        self.dims = dims
        self.indeterminate = frozenset(indeterminate)

    def __repr__(self):
        label = "inf" if self.r is None else str(self.r)
        return "SpectralPage(r=%s, %r)" % (label, self.dims.coefficients)


class _Engine:
    """Rank tables for one filtered complex.

    ker2[i][a][b] = dim {z in L_i^a : dz in L_{i-1}^b}
    img2[i][s][c] = dim (d(L_{i+1}^s) cap L_i^c)

    with levels clamped to 0..j_max+1 (j_max+1 plays the role of the zero
    subspace).
    """

    def __init__(self, L):
        self.L = L
        self.field = L.field
        self.T = L.j_max
        self.ker2 = []
        self.img2 = []
        hi = self.T + 2
        for i in range(L.i_max + 1):
            levels = L.levels[i]
            ncols = len(levels)
            ker_i = [[0] * hi for _ in range(hi)]
            for a in range(hi):
                cols = [c for c in range(ncols) if levels[c] >= a]
                if i == 0:
                    for b in range(hi):
                        ker_i[a][b] = len(cols)
                    continue
                d = L.diffs[i]
                tgt_levels = L.levels[i - 1]
                row_order = sorted(range(len(tgt_levels)), key=lambda r: (tgt_levels[r], r))
                ech = ColumnEchelon(self.field, row_order)
                pivot_levels = []
                for c in cols:
                    col = [d[r][c] for r in range(len(tgt_levels))]
                    piv = ech.add(col)
                    if piv is not None:
                        pivot_levels.append(tgt_levels[row_order[piv]])
                pivot_levels.sort()
                for b in range(hi):
                    below = sum(1 for pl in pivot_levels if pl < b)
                    ker_i[a][b] = len(cols) - below
            self.ker2.append(ker_i)

            img_i = [[0] * hi for _ in range(hi)]
            if i < L.i_max:
                d = L.diffs[i + 1]
                src_levels = L.levels[i + 1]
                tgt_levels = L.levels[i]
                row_order = sorted(range(len(tgt_levels)), key=lambda r: (tgt_levels[r], r))
                for s in range(hi):
                    ech = ColumnEchelon(self.field, row_order)
                    pivot_levels = []
                    for c in range(len(src_levels)):
                        if src_levels[c] < s:
                            continue
                        col = [d[r][c] for r in range(len(tgt_levels))]
                        piv = ech.add(col)
                        if piv is not None:
                            pivot_levels.append(tgt_levels[row_order[piv]])
                    pivot_levels.sort()
                    for c in range(hi):
                        img_i[s][c] = sum(1 for pl in pivot_levels if pl >= c)
            self.img2.append(img_i)

    def _clamp(self, x):
        return max(0, min(x, self.T + 1))

    def zrank(self, r, i, j):
        """dim of the level-j graded piece of {z in L_i^j : dz in L^{j+r}}."""
        b = self._clamp(j + r)
        return self.ker2[i][j][b] - self.ker2[i][j + 1][b]

    def brank(self, r, i, j):
        """dim of the level-j graded piece of L_i^j cap d(L_{i+1}^{j-r+1})."""
        s = self._clamp(j - r + 1)
        return self.img2[i][s][j] - self.img2[i][s][j + 1]

    def page_dim(self, r, i, j):
        return self.zrank(r, i, j) - self.brank(r, i, j)

    def coker_count(self, r, i, j):
        """dim coker(iota_{i,j}) from page r to page r+1."""
        return self.zrank(r, i, j) - self.zrank(r + 1, i, j)

    def ker_count(self, r, i, j):
        """dim ker(pi_{i,j}) from page r to page r+1."""
        return self.brank(r + 1, i, j) - self.brank(r, i, j)


def _engine(L):
    eng = getattr(L, "_spectral_engine", None)
    if eng is None:
        eng = _Engine(L)
        L._spectral_engine = eng
    return eng


def _page_window(L, r):
    """Cells (i, j) where the page-r entry of a truncated complex is exact.

    Truncation keeps levels <= T; the cycle condition dz in L^{j+r} only
    probes levels up to j+r, and the discarded part of any differential
    lives in levels >= T+1, so entries with j + r <= T + 1 agree with the
    untruncated complex.
    """
    if L.truncated_at is None:
        return None  # everything reliable
    return lambda i, j: j + r <= L.truncated_at + 1


def page(L, r, audit=False):
    """Page r (r >= 1) of the spectral sequence.

    For truncated complexes, entries with j + r > truncation + 1 are
    flagged indeterminate instead of reported.  With audit=True, echelon
    representative bases of the cycle subquotients are attached (debug
    only; dimensions are the contract, bases are not).
    """
    if r < 1:
        raise SpectralError("pages are indexed from r = 1")
    eng = _engine(L)
    ok = _page_window(L, r)
    dims = BigradedSeries(L.i_max, L.j_max)
    flagged = set()
    for i in range(L.i_max + 1):
        for j in range(L.j_max + 1):
            if ok is not None and not ok(i, j):
                flagged.add((i, j))
                continue
            d = eng.page_dim(r, i, j)
            if d < 0:
                raise SpectralError("negative page dimension at (%d, %d)" % (i, j))
            if d:
                dims._set(i, j, d)
    result = SpectralPage(r, dims, flagged)
    if audit:
        result.audit = _audit_bases(L, r)
    return result


def _audit_bases(L, r):
    """Representative vectors of {z in L_i^j : dz in L^{j+r}} per cell."""
    out = {}
    field = L.field
    for i in range(L.i_max + 1):
        for j in range(L.j_max + 1):
            cols = [c for c, lv in enumerate(L.levels[i]) if lv >= j]
            if not cols:
                continue
            if i == 0:
                vecs = []
                for c in cols:
                    v = [field.zero] * len(L.levels[i])
                    v[c] = field.one
                    vecs.append(v)
            else:
                rows = [rr for rr, lv in enumerate(L.levels[i - 1]) if lv < j + r]
                mat = [[L.diffs[i][rr][c] for c in cols] for rr in rows]
                ker = kernel_basis(field, mat, len(cols))
                vecs = []
                for k in ker:
                    v = [field.zero] * len(L.levels[i])
                    for c, x in zip(cols, k):
                        v[c] = x
                    vecs.append(v)
            if vecs:
                out[(i, j)] = vecs
    return out


def infinity_page(L):
    """The limit page, computed directly as gr of homology with the induced
    filtration (Z_i cap L^j + B_i) / B_i -- not by iterating pages; this is
    the second code path used for cross-validation."""
    dims = _infinity_dims_direct(L)
    flagged = set()
    if L.truncated_at is not None:
        run = run_to_stability(L, _verify=False)
        flagged = {(i, j) for i in range(L.i_max + 1)
                   for j in range(L.j_max + 1)
                   if j > run.window_j} | run.excluded_cells
        kept = {k: v for k, v in dims.coefficients.items() if k not in flagged}
        dims = BigradedSeries(L.i_max, L.j_max, kept)
    return SpectralPage(None, dims, flagged)


def cancellations_at_page(L, r):
    """Multiset of cancellations dying between pages r and r+1, plus the
    boundary-indeterminate units (truncated complexes only).

    Each unit removed as coker(iota) at (i, j) pairs with one removed as
    ker(pi) at (i-1, j+r); the two counts are computed independently and
    must agree (the induced map is a bijection).  A cancellation is exact
    when its partner degree b = j + r stays within the truncation; units
    still alive at cells with j + r beyond it would pair with degrees the
    truncation cannot see, so their fate is reported, not decided."""
    if r < 1:
        raise SpectralError("pages are indexed from r = 1")
    eng = _engine(L)
    T = L.truncated_at
    out = []
    boundary = {}
    for i in range(L.i_max + 1):
        for j in range(L.j_max + 1):
            if T is not None and j + r > T:
                if i >= 1 and j + r == T + 1:
                    alive = eng.page_dim(r, i, j)
                    if alive > 0:
                        boundary[(i, j)] = alive
                continue
            c = eng.coker_count(r, i, j)
            if c < 0:
                raise SpectralError("negative coker count at (%d, %d)" % (i, j))
            if c == 0:
                continue
            k = eng.ker_count(r, i - 1, j + r) if i >= 1 and j + r <= L.j_max else 0
            if k != c:
                raise SpectralError(
                    "coker/ker mismatch at page %d cell (%d, %d): %d vs %d"
                    % (r, i, j, c, k))
            out.extend([PageCancellation(r, i, j)] * c)
    return out, boundary


def delta_counts(L, r):
    """Independent coker(iota) and ker(pi) count tables for page r."""
    eng = _engine(L)
    coker = {}
    ker = {}
    for i in range(L.i_max + 1):
        for j in range(L.j_max + 1):
            c = eng.coker_count(r, i, j)
            if c:
                coker[(i, j)] = c
            k = eng.ker_count(r, i, j)
            if k:
                ker[(i, j)] = k
    return coker, ker


class RunResult:
    def __init__(self, page1, page_infinity, certificate, r_stab, window_j,
                 boundary, excluded_cells, verified):
        self.page1 = page1
        self.page_infinity = page_infinity
        self.certificate = certificate
        self.r_stab = r_stab
        self.window_j = window_j
        self.boundary = boundary  # {page r: {(i, j): units}}
        self.excluded_cells = excluded_cells
        self.verified = verified


def run_to_stability(L, _verify=True):
    """Iterate pages to stabilization, extract the per-page cancellations,
    and assemble the certificate from page 1 to the limit.

    Exact complexes stabilize by page span+1 and the bookkeeping identity
    page1 - sum(certificate) = page_infinity holds on the whole grid.  For
    truncated complexes the certificate keeps only reliable cancellations
    (partner degree within the truncation); the identity is verified on
    the window j <= truncation - r_stab minus cells touched by boundary-
    indeterminate units.
    """
    T = L.truncated_at
    span = max((max(lv) for lv in L.levels if lv), default=0)
    r_hi = span + 1 if T is None else T + 1

    steps = []
    boundary = {}
    excluded_cells = set()
    last_active = 0
    for r in range(1, r_hi + 1):
        cancels, bd = cancellations_at_page(L, r)
        if cancels:
            last_active = r
            steps.extend(pc.to_cancellation() for pc in cancels)
        if bd:
            boundary[r] = bd
            excluded_cells.update(bd)
    cert = CancellationCertificate(steps).sorted()
    r_stab = last_active + 1
    window_j = L.j_max if T is None else T - r_stab

    p1 = page(L, 1)
    pinf_dims = _infinity_dims_direct(L)
    if T is None:
        flagged = frozenset()
        cells = [(i, j) for i in range(L.i_max + 1) for j in range(L.j_max + 1)]
    else:
        flagged = {(i, j) for i in range(L.i_max + 1) for j in range(L.j_max + 1)
                   if j > window_j} | excluded_cells
        kept = {k: v for k, v in pinf_dims.coefficients.items() if k not in flagged}
        pinf_dims = BigradedSeries(L.i_max, L.j_max, kept)
        cells = [(i, j) for i in range(L.i_max + 1) for j in range(L.j_max + 1)
                 if (i, j) not in flagged]
    pinf = SpectralPage(None, pinf_dims, flagged)

    verified = None
    if _verify:
        # page 1 is always full-grid exact (j + 1 <= T + 1 for every cell)
        verified = verify_certificate(p1.dims, cert, pinf.dims, cells=cells)
    return RunResult(p1, pinf, cert, r_stab, window_j, boundary,
                     excluded_cells, verified)


def _infinity_dims_direct(L):
    field = L.field
    dims = BigradedSeries(L.i_max, L.j_max)
    for i in range(L.i_max + 1):
        n = L.dim(i)
        if n == 0:
            continue
        if i == 0:
            zbasis = [[field.one if a == b else field.zero for a in range(n)] for b in range(n)]
        else:
            zbasis = kernel_basis(field, L.diffs[i], n)
        bcols = []
        if i < L.i_max:
            d = L.diffs[i + 1]
            for c in range(L.dim(i + 1)):
                bcols.append([d[r][c] for r in range(n)])

        def dim_zj_plus_b(j):
            if j > L.j_max:
                zj = []
            else:
                bad = [r for r, lv in enumerate(L.levels[i]) if lv < j]
                if bad and zbasis:
                    mat = [[z[r] for z in zbasis] for r in bad]
                    combos = kernel_basis(field, mat, len(zbasis))
                else:
                    combos = [[field.one if a == b else field.zero
                               for a in range(len(zbasis))] for b in range(len(zbasis))]
                zj = []
                for combo in combos:
                    v = [field.zero] * n
                    for coef, z in zip(combo, zbasis):
                        if coef:
                            for r in range(n):
                                v[r] = field.add(v[r], field.mul(coef, z[r]))
                    zj.append(v)
            stacked = zj + [list(b) for b in bcols]
            if not stacked:
                return 0
            return rank(field, [[col[r] for col in stacked] for r in range(n)])

        prev = dim_zj_plus_b(0)
        for j in range(0, L.j_max + 1):
            nxt = dim_zj_plus_b(j + 1)
            h = prev - nxt
            if h < 0:
                raise SpectralError("infinity page has a negative graded piece")
            if h:
                dims._set(i, j, h)
            prev = nxt
    return dims


# --- reproducible random filtered complexes ---------------------------------------


class RandomModel:
    """The generating data of a random complex: free basis vectors and
    matched source->target pairs, from which the expected page 1, page
    infinity and cancellation multiset can be read off."""

    def __init__(self, i_max, j_max, free, pairs):
        self.i_max = i_max
        self.j_max = j_max
        self.free = free    # list of (i, level)
        self.pairs = pairs  # list of (i, src_level, tgt_level), d: L_i -> L_{i-1}

    def expected_page1(self):
        s = BigradedSeries(self.i_max, self.j_max)
        for (i, lv) in self.free:
            s._set(i, lv, s.get(i, lv) + 1)
        for (i, a, b) in self.pairs:
            if b > a:
                s._set(i, a, s.get(i, a) + 1)
                s._set(i - 1, b, s.get(i - 1, b) + 1)
        return s

    def expected_infinity(self):
        s = BigradedSeries(self.i_max, self.j_max)
        for (i, lv) in self.free:
            s._set(i, lv, s.get(i, lv) + 1)
        return s

    def expected_certificate(self):
        steps = [Cancellation(i - 1, a, b) for (i, a, b) in self.pairs if b > a]
        return CancellationCertificate(steps).sorted()


def random_filtered_complex(seed, i_max=3, max_dim=8, max_level=6,
                            field=None, strictly_graded=False, with_model=False):
    """Reproducible random filtered complex with d^2 = 0 by construction:
    a direct sum of matched pairs and free vectors, conjugated by random
    filtered automorphisms (level-preserving block + strictly level-raising
    nilpotent part)."""
    if field is None:
        field = Field(32003)
    rng = random.Random(seed)
    dims = [rng.randint(1, max_dim) for _ in range(i_max + 1)]
    levels = [[rng.randint(0, max_level) for _ in range(dims[i])] for i in range(i_max + 1)]

    target_flags = [set() for _ in range(i_max + 1)]
    source_flags = [set() for _ in range(i_max + 1)]
    pairs_idx = []  # (i, src index in term i, tgt index in term i-1)
    for i in range(i_max, 0, -1):
        sources = [v for v in range(dims[i]) if v not in target_flags[i]]
        targets = [v for v in range(dims[i - 1])]
        rng.shuffle(sources)
        rng.shuffle(targets)
        want = rng.randint(0, min(len(sources), len(targets)))
        taken = set()
        made = 0
        for s in sources:
            if made >= want:
                break
            for t in targets:
                if t in taken:
                    continue
                if strictly_graded:
                    okay = levels[i - 1][t] == levels[i][s]
                else:
                    okay = levels[i - 1][t] >= levels[i][s]
                if okay:
                    taken.add(t)
                    pairs_idx.append((i, s, t))
                    source_flags[i].add(s)
                    target_flags[i - 1].add(t)
                    made += 1
                    break

    diffs = [None]
    for i in range(1, i_max + 1):
        mat = [[field.zero] * dims[i] for _ in range(dims[i - 1])]
        for (ii, s, t) in pairs_idx:
            if ii == i:
                mat[t][s] = field.one
        diffs.append(mat)

    def random_filtered_auto(i):
        n = dims[i]
        lv = levels[i]
        while True:
            m = [[field.zero] * n for _ in range(n)]
            for r in range(n):
                for c in range(n):
                    if r == c:
                        m[r][c] = field.of(rng.randrange(1, field.char or 97))
                    elif lv[r] > lv[c]:
                        if rng.random() < 0.5:
                            m[r][c] = field.of(rng.randrange(1, field.char or 97))
                    elif lv[r] == lv[c] and rng.random() < 0.4:
                        m[r][c] = field.of(rng.randrange(0, field.char or 97))
            try:
                minv = invert(field, m)
                return m, minv
            except ValueError:
                continue

    autos = [random_filtered_auto(i) for i in range(i_max + 1)]
    conj = [None]
    for i in range(1, i_max + 1):
        q_dst, _ = autos[i - 1]
        _, q_src_inv = autos[i]
        a = diffs[i]
        tmp = [[sum_mul(field, q_dst, a, r, c) for c in range(dims[i])] for r in range(dims[i - 1])]
        mat = [[sum_mul(field, tmp, q_src_inv, r, c) for c in range(dims[i])] for r in range(dims[i - 1])]
        conj.append(mat)

    j_max = max((max(lv) for lv in levels if lv), default=0)
    L = FilteredComplex(field, levels, conj, j_max, truncated_at=None)
    if not with_model:
        return L
    free = [(i, levels[i][v]) for i in range(i_max + 1) for v in range(dims[i])
            if v not in source_flags[i] and v not in target_flags[i]]
    pairs = [(i, levels[i][s], levels[i - 1][t]) for (i, s, t) in pairs_idx]
    return L, RandomModel(i_max, j_max, free, pairs)


def sum_mul(field, a, b, r, c):
    s = field.zero
    for t in range(len(b)):
        if a[r][t] and b[t][c]:
            s = field.add(s, field.mul(a[r][t], b[t][c]))
    return s
