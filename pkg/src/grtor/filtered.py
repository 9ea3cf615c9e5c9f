"""The local side: lift a minimal graded free resolution to a filtered
free resolution over the localized polynomial ring, tensor with a
filtered module, and truncate to a finite-dimensional filtered complex
over the residue field.

Filtrations are m-adic on modules and shifted-m-adic on free modules
(F^j = ⊕ m^{j - a_k}); these are the two families the worked examples
use.  All local data carries a degree cap; the associated graded
statements below hold in degrees <= cap.
"""

from .groebner import (CapExceededError, GroebnerError, IdealPresentation,
                       ModulePresentation, graded_twin, ideal_intersection,
                       ideal_product, ideal_sum, leading_monomial_ideal,
                       hilbert_function, normal_form, standard_basis,
                       groebner_basis)
from .poly import LOCAL, Polynomial
from .resolution import minimal_resolution, strand_solve
from .series import BigradedSeries


class LiftError(ValueError):
    pass


class LiftWindowExceededError(LiftError):
    pass


M_ADIC = "m-adic"
SHIFTED_M_ADIC = "shifted-m-adic"


class StableFiltration:
    """m-stable filtration descriptor: m-adic on a module, or
    shifted-m-adic on a free module (componentwise m^{j - a_k})."""

    def __init__(self, kind=M_ADIC, shifts=()):
        if kind not in (M_ADIC, SHIFTED_M_ADIC):
            raise LiftError("unknown filtration kind %r" % (kind,))
        self.kind = kind
        self.shifts = tuple(shifts)

    @property
    def stability_bound(self):
        """m * M^j = M^{j+1} holds for every j >= this bound."""
        if self.kind == M_ADIC:
            return 0
        return max(self.shifts) if self.shifts else 0


def _to_local(local_ring, graded_poly, cap):
    return Polynomial(local_ring, dict(graded_poly.terms)).truncate(cap)


def _to_graded(graded_ring, local_poly):
    return Polynomial(graded_ring, dict(local_poly.terms))


class FilteredResolution:
    """Free resolution over the local ring with shifted-m-adic filtrations
    whose associated graded complex is a given graded resolution, up to
    the degree cap."""

    def __init__(self, ring, shifts_per_term, diffs, cap, graded=None):
        self.ring = ring
        self.shifts = [tuple(s) for s in shifts_per_term]
        self.diffs = diffs  # diffs[0] is None; diffs[i]: F_i -> F_{i-1}
        self.cap = cap
        self.graded = graded  # the graded resolution this lifts

    @property
    def length(self):
        return len(self.shifts) - 1

    def filtration(self, i):
        return StableFiltration(SHIFTED_M_ADIC, self.shifts[i])

    def check_postconditions(self):
        """d o d = 0 up to cap, entries filtered, gr(d) equals the input
        graded differentials.  Raises on violation."""
        for i in range(2, len(self.shifts)):
            prod = _matmul_local(self.ring, self.diffs[i - 1], self.diffs[i], self.cap)
            for row in prod:
                for p in row:
                    if not p.is_zero():
                        raise LiftError("lifted differentials do not compose to zero")
        if self.graded is None:
            return
        for i in range(1, len(self.shifts)):
            src, dst = self.shifts[i], self.shifts[i - 1]
            for a in range(len(dst)):
                for b in range(len(src)):
                    expected = src[b] - dst[a]
                    p = self.diffs[i][a][b]
                    g = self.graded.diffs[i][a][b]
                    if p.is_zero():
                        if not g.is_zero():
                            raise LiftError("lift lost a graded entry at (%d,%d,%d)" % (i, a, b))
                        continue
                    if p.order_degree() < expected:
                        raise LiftError("lift entry (%d,%d,%d) breaks the filtration" % (i, a, b))
                    low = p.homogeneous_component(expected)
                    if dict(low.terms) != dict(g.terms):
                        raise LiftError("gr of the lift differs from the graded "
                                        "resolution at (%d,%d,%d)" % (i, a, b))


def _matmul_local(ring, a, b, cap):
    n, k = len(a), len(b)
    m = len(b[0]) if k else 0
    out = [[ring.zero() for _ in range(m)] for _ in range(n)]
    for i in range(n):
        for j in range(m):
            s = ring.zero()
            for t in range(k):
                if a[i][t].is_zero() or b[t][j].is_zero():
                    continue
                s = s + a[i][t] * b[t][j]
            out[i][j] = s.truncate(cap)
    return out


def lift_resolution(gres, generators, cap):
    """Lift a minimal graded free resolution of gr(M) = k[x]/in(I) over the
    polynomial ring to a filtered free resolution over the local ring.

    `generators` are local polynomials, one per column of the first
    graded differential, with matching initial forms (a standard basis
    subset).  The lift starts from the graded matrices and kills the
    components of d o d order by order using exactness of the graded
    resolution; every correction strictly raises filtration order, so
    the loop stops at the cap.
    """
    if not generators:
        raise LiftError("need the local generators lifting the first differential")
    local_ring = generators[0].ring
    if local_ring.setting != LOCAL:
        raise LiftError("generators must live in a local ring")
    gring = gres.ring
    if gring.quotient:
        raise LiftError("lifting is implemented over the regular case only")
    if len(generators) != gres.rank(1):
        raise LiftError("need one local generator per first-differential column")
    for b, g in enumerate(generators):
        expected = gres.diffs[1][0][b]
        if dict(g.initial_form().terms) != dict(expected.terms):
            raise LiftError("generator %d has initial form %s, expected %s"
                            % (b, g.initial_form(), expected))

    shifts = [tuple(s) for s in gres.shifts]
    diffs = [None, [[g.truncate(cap) for g in generators]]]

    for i in range(2, len(shifts)):
        d = [[_to_local(local_ring, gres.diffs[i][a][b], cap)
              for b in range(len(shifts[i]))]
             for a in range(len(shifts[i - 1]))]
        prev = diffs[i - 1]
        for c in range(len(shifts[i])):
            guard = 0
            last_order = -1
            while True:
                residual = [local_ring.zero() for _ in range(len(shifts[i - 2]))]
                for a in range(len(shifts[i - 2])):
                    s = local_ring.zero()
                    for t in range(len(shifts[i - 1])):
                        if prev[a][t].is_zero() or d[t][c].is_zero():
                            continue
                        s = s + prev[a][t] * d[t][c]
                    residual[a] = s.truncate(cap)
                degrees = [p.order_degree() + shifts[i - 2][a]
                           for a, p in enumerate(residual) if not p.is_zero()]
                if not degrees:
                    break
                target_deg = min(degrees)
                if target_deg <= last_order:
                    raise LiftWindowExceededError(
                        "correction order did not increase at column %d of d_%d" % (c, i))
                last_order = target_deg
                low = [_to_graded(gring, p.homogeneous_component(target_deg - shifts[i - 2][a]))
                       for a, p in enumerate(residual)]
                u = strand_solve(gring, gres.diffs[i - 1], shifts[i - 1],
                                 shifts[i - 2], low, target_deg)
                if u is None:
                    raise LiftWindowExceededError(
                        "no graded correction in degree %d at column %d of d_%d"
                        % (target_deg, c, i))
                for t in range(len(shifts[i - 1])):
                    if not u[t].is_zero():
                        d[t][c] = (d[t][c] - _to_local(local_ring, u[t], cap)).truncate(cap)
                guard += 1
                if guard > cap + 2:
                    raise LiftWindowExceededError("correction failed to converge below the cap")
        diffs.append(d)

    out = FilteredResolution(local_ring, shifts, diffs, cap, graded=gres)
    out.check_postconditions()
    return out


def local_cyclic_graded_data(ideal, cap=None):
    """Standard basis bookkeeping for a cyclic local module R/I: returns
    (minimal initial forms over the graded twin, matching local standard
    basis elements)."""
    ring = ideal.ring
    cap = cap if cap is not None else ring.cap
    sb = standard_basis(ideal, cap)
    gring = graded_twin(ring)
    forms = [_to_graded(gring, g.initial_form()) for g in sb]
    order = sorted(range(len(sb)), key=lambda k: forms[k].degree())
    chosen = []
    for k in order:
        if not chosen:
            chosen.append(k)
            continue
        gb = groebner_basis(IdealPresentation(gring, [forms[c] for c in chosen]))
        if normal_form(forms[k], gb).is_zero():
            continue
        chosen.append(k)
    return [forms[k] for k in chosen], [sb[k] for k in chosen]


def resolve_local_cyclic(ideal, cap=None):
    """Lifted filtered resolution of R/I over the regular local ring:
    minimal graded resolution of k[x]/in(I), then the order-by-order lift."""
    ring = ideal.ring
    cap = cap if cap is not None else ring.cap
    forms, gens = local_cyclic_graded_data(ideal, cap)
    gring = forms[0].ring if forms else graded_twin(ring)
    module = ModulePresentation.cyclic(gring, forms)
    gres = minimal_resolution(module, ring.nvars + 1)
    if [str(p) for p in gres.diffs[1][0]] != [str(f) for f in forms]:
        raise LiftError("graded resolution reordered the minimal generators")
    return lift_resolution(gres, gens, cap)


# --- the truncated filtered complex ---------------------------------------------


class FilteredComplex:
    """Finite complex of finite-dimensional vector spaces over k with a
    descending filtration given by one level per basis vector
    (L_i^j = span of basis vectors of level >= j).

    diffs[i] is the matrix of d: L_i -> L_{i-1} (rows indexed by the
    target basis); d is filtered and squares to zero.  truncated_at = T
    marks the complex as the degree-<= T slice of an infinite complex
    (page data then carries a reliability window); None means exact.
    """

    def __init__(self, field, levels, diffs, j_max, truncated_at=None,
                 var_actions=None, stability_bound=None, validate=True):
        self.field = field
        self.levels = [tuple(lv) for lv in levels]
        self.diffs = diffs  # diffs[0] is None
        self.j_max = j_max
        self.truncated_at = truncated_at
        self.var_actions = var_actions
        self.stability_bound = stability_bound
        if validate:
            self._validate()

    @property
    def i_max(self):
        return len(self.levels) - 1

    def dim(self, i):
        if 0 <= i <= self.i_max:
            return len(self.levels[i])
        return 0

    def _validate(self):
        for lv in self.levels:
            for l in lv:
                if not 0 <= l <= self.j_max:
                    raise LiftError("basis level %d outside 0..%d" % (l, self.j_max))
        for i in range(1, len(self.levels)):
            d = self.diffs[i]
            if len(d) != self.dim(i - 1) or (d and len(d[0]) != self.dim(i)):
                raise LiftError("differential %d has the wrong shape" % i)
            for r in range(self.dim(i - 1)):
                for c in range(self.dim(i)):
                    if d[r][c] and self.levels[i - 1][r] < self.levels[i][c]:
                        raise LiftError("differential %d is not filtered at (%d,%d)" % (i, r, c))
        fld = self.field
        for i in range(2, len(self.levels)):
            a, b = self.diffs[i - 1], self.diffs[i]
            for r in range(self.dim(i - 2)):
                for c in range(self.dim(i)):
                    s = fld.zero
                    for t in range(self.dim(i - 1)):
                        if a[r][t] and b[t][c]:
                            s = fld.add(s, fld.mul(a[r][t], b[t][c]))
                    if s:
                        raise LiftError("d o d nonzero in the filtered complex at degree %d" % i)

    # serialization: header, per-term level vectors, sparse triples ------------

    def to_text(self):
        lines = ["filtered-complex"]
        lines.append("field %s" % ("QQ" if self.field.char == 0 else "Fp %d" % self.field.char))
        lines.append("imax %d" % self.i_max)
        lines.append("jmax %d" % self.j_max)
        lines.append("truncated %d" % (1 if self.truncated_at is not None else 0))
        for i, lv in enumerate(self.levels):
            lines.append("term %d dim %d levels %s" % (i, len(lv), " ".join(str(l) for l in lv)))
        for i in range(1, len(self.levels)):
            triples = []
            d = self.diffs[i]
            for r in range(self.dim(i - 1)):
                for c in range(self.dim(i)):
                    if d[r][c]:
                        triples.append((r, c, d[r][c]))
            lines.append("diff %d nnz %d" % (i, len(triples)))
            for (r, c, v) in triples:
                lines.append("%d %d %s" % (r, c, self.field.format(v)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        from .fields import field_from_name
        rows = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not rows or rows[0] != "filtered-complex":
            raise LiftError("not a filtered-complex serialization")
        field = None
        i_max = j_max = None
        truncated = 0
        levels = {}
        diffs = {}
        k = 1
        while k < len(rows):
            parts = rows[k].split()
            if parts[0] == "field":
                field = field_from_name(" ".join(parts[1:]))
            elif parts[0] == "imax":
                i_max = int(parts[1])
            elif parts[0] == "jmax":
                j_max = int(parts[1])
            elif parts[0] == "truncated":
                truncated = int(parts[1])
            elif parts[0] == "term":
                i = int(parts[1])
                dim = int(parts[3])
                lv = [int(x) for x in parts[5:]]
                if len(lv) != dim:
                    raise LiftError("term %d: %d levels for dim %d" % (i, len(lv), dim))
                levels[i] = lv
            elif parts[0] == "diff":
                i = int(parts[1])
                nnz = int(parts[3])
                mat = [[field.zero] * len(levels[i]) for _ in range(len(levels[i - 1]))]
                for _ in range(nnz):
                    k += 1
                    r, c, v = rows[k].split()
                    mat[int(r)][int(c)] = field.parse(v)
                diffs[i] = mat
            else:
                raise LiftError("bad line in filtered-complex text: %r" % rows[k])
            k += 1
        if field is None or i_max is None or j_max is None:
            raise LiftError("incomplete filtered-complex header")
        level_list = [levels.get(i, []) for i in range(i_max + 1)]
        diff_list = [None] + [diffs.get(i, [[field.zero] * len(level_list[i])
                                            for _ in range(len(level_list[i - 1]))])
                              for i in range(1, i_max + 1)]
        return cls(field, level_list, diff_list, j_max,
                   truncated_at=(j_max if truncated else None))


def filtered_tensor(fres, n_ideal, j_max, validate=True):
    """L = F (x)_R N truncated at internal degree j_max, where N = R/n_ideal
    carries the m-adic filtration (n_ideal empty/None means N = R).

    Basis of each L_i: (free generator b, standard monomial u of N) with
    level = shift_b + deg u; the differential applies the lifted matrix
    entries followed by Mora normal form in N and truncation.
    """
    ring = fres.ring
    field = ring.field
    cap = fres.cap
    if j_max > cap:
        raise CapExceededError("tensor truncation %d exceeds the resolution cap %d" % (j_max, cap))
    if n_ideal is not None and n_ideal.generators:
        nb = standard_basis(n_ideal, cap)
        lm = [p.leading_monomial() for p in nb]
    else:
        nb, lm = [], []

    from .groebner import standard_monomials
    basis_n = []
    n_finite_top = None
    for d in range(0, j_max + 1):
        layer = standard_monomials(lm, ring.nvars, d)
        if not layer and n_finite_top is None:
            n_finite_top = d - 1
        basis_n.extend(layer)
    index_n = {u: k for k, u in enumerate(basis_n)}

    def reduce_in_n(p):
        if nb:
            p = normal_form(p, nb, cap)
        return p.truncate(j_max)

    levels = []
    bases = []
    for i in range(len(fres.shifts)):
        term = []
        for b, s in enumerate(fres.shifts[i]):
            for u in basis_n:
                if s + sum(u) <= j_max:
                    term.append((b, u))
        bases.append(term)
        levels.append([fres.shifts[i][b] + sum(u) for (b, u) in term])

    index = [{key: k for k, key in enumerate(term)} for term in bases]

    diffs = [None]
    for i in range(1, len(fres.shifts)):
        mat = [[field.zero] * len(bases[i]) for _ in range(len(bases[i - 1]))]
        for col, (b, u) in enumerate(bases[i]):
            for a in range(len(fres.shifts[i - 1])):
                p = fres.diffs[i][a][b]
                if p.is_zero():
                    continue
                prod = reduce_in_n(p.monomial_multiple(u))
                for e, c in prod.terms.items():
                    key = (a, e)
                    row = index[i - 1].get(key)
                    if row is None:
                        continue  # past the truncation
                    mat[row][col] = field.add(mat[row][col], c)
        diffs.append(mat)

    var_actions = []
    for i in range(len(fres.shifts)):
        acts = []
        for v in range(ring.nvars):
            exps = tuple(1 if t == v else 0 for t in range(ring.nvars))
            mat = [[field.zero] * len(bases[i]) for _ in range(len(bases[i]))]
            for col, (b, u) in enumerate(bases[i]):
                prod = reduce_in_n(ring.monomial(u).monomial_multiple(exps))
                for e, c in prod.terms.items():
                    row = index[i].get((b, e))
                    if row is not None:
                        mat[row][col] = field.add(mat[row][col], c)
            acts.append(mat)
        var_actions.append(acts)

    bound = max((max(s, default=0) for s in fres.shifts), default=0)
    # when N is finite dimensional and everything fits under j_max, nothing
    # was cut: the complex is exact, not a truncation
    truncated_at = j_max
    if n_finite_top is not None and bound + n_finite_top <= j_max:
        truncated_at = None
    return FilteredComplex(field, levels, diffs, j_max, truncated_at=truncated_at,
                           var_actions=var_actions, stability_bound=bound,
                           validate=validate)


class GrComplex:
    """Associated graded complex of a FilteredComplex: one strand of
    vector spaces per level, with the level-preserving blocks of d."""

    def __init__(self, complex_):
        self.complex = complex_
        self.field = complex_.field

    def strand(self, j):
        """Per-term index lists and matrices of the level-j strand."""
        L = self.complex
        idx = [[k for k, l in enumerate(L.levels[i]) if l == j] for i in range(L.i_max + 1)]
        mats = [None]
        for i in range(1, L.i_max + 1):
            mats.append([[L.diffs[i][r][c] for c in idx[i]] for r in idx[i - 1]])
        return idx, mats

    def homology_series(self):
        """Homology dimensions of every strand: equals page 1 of the
        spectral sequence (independent code path)."""
        from .linalg import rank
        L = self.complex
        out = BigradedSeries(L.i_max, L.j_max)
        for j in range(0, L.j_max + 1):
            idx, mats = self.strand(j)
            ranks = {}
            for i in range(1, L.i_max + 1):
                m = mats[i]
                ranks[i] = rank(self.field, m) if (m and m[0:1] and len(m[0])) else 0
            for i in range(0, L.i_max + 1):
                dim_i = len(idx[i])
                h = dim_i - ranks.get(i, 0) - ranks.get(i + 1, 0)
                if h < 0:
                    raise LiftError("negative strand homology; complex is broken")
                if h:
                    out._set(i, j, h)
        return out


def gr_complex(L):
    return GrComplex(L)


# --- exact low-degree local Tor --------------------------------------------------


class LowTor:
    """Tor_0 = R/(I+J) and Tor_1 = (I cap J)/(I*J) for cyclic local modules,
    with associated graded Hilbert series via initial ideals."""

    def __init__(self, tor0_ideal, tor1_num, tor1_den, series, tor0_colength):
        self.tor0_ideal = tor0_ideal
        self.tor1_num = tor1_num
        self.tor1_den = tor1_den
        self.series = series  # BigradedSeries, layers 0 and 1
        self.tor0_colength = tor0_colength


def tor_local_low(I, J, j_max, cap=None):
    """Exact ideal-arithmetic Tor_0, Tor_1 of (R/I, R/J) with gr series.

    Tor_1's series is the degreewise difference of the standard-monomial
    counts of R/(I*J) and R/(I cap J) (the subquotient filtration,
    computed via initial ideals); an independent oracle for the spectral
    pipeline in homological degrees <= 1.
    """
    ring = I.ring
    cap = cap if cap is not None else ring.cap
    from .groebner import colength as _colength
    total = ideal_sum(I, J)
    inter = ideal_intersection(I, J, cap)
    prod = ideal_product(I, J)

    lm_sum = leading_monomial_ideal(total, cap)
    lm_inter = leading_monomial_ideal(inter, cap)
    lm_prod = leading_monomial_ideal(prod, cap)

    series = BigradedSeries(1, j_max)
    n = ring.nvars
    for j in range(0, j_max + 1):
        h0 = hilbert_function(lm_sum, n, j)
        if h0:
            series._set(0, j, h0)
        h1 = hilbert_function(lm_prod, n, j) - hilbert_function(lm_inter, n, j)
        if h1 < 0:
            raise GroebnerError("intersection is smaller than the product; cap too small")
        if h1:
            series._set(1, j, h1)
    return LowTor(total, inter, prod, series, _colength(total, cap))
