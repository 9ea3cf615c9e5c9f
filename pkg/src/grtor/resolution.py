"""Minimal graded free resolutions over G = k[x]/J, bigraded Betti
numbers, Tor Hilbert series by degreewise linear algebra, and the
closed-form series for stable monomial ideals.

A graded module is presented as a cokernel (ModulePresentation); all
homology is computed strand by strand: a fixed internal degree of
everything in sight is a finite-dimensional vector space over k with a
monomial basis, and kernels/images are rank computations there.
"""

from math import comb

from .groebner import (GroebnerError, ModulePresentation, graded_piece_basis,
                       normal_form, quotient_groebner, syzygies)
from .linalg import ColumnEchelon, rank, solve
from .poly import GRADED
from .series import BigradedSeries


class ResolutionError(ValueError):
    pass


# --- strand bases -------------------------------------------------------------


def free_strand_basis(ring, shifts, degree):
    """Basis [(col, monomial)] of the degree-`degree` piece of ⊕ G(-shifts)."""
    basis = []
    for col, s in enumerate(shifts):
        for mono in graded_piece_basis(ring, degree - s):
            basis.append((col, mono))
    return basis


def vector_strand_coords(ring, vec, index, field):
    """Coordinates of a homogeneous vector of polynomials on a strand basis."""
    coords = [field.zero] * len(index)
    for col, p in enumerate(vec):
        for e, c in p.terms.items():
            key = (col, e)
            if key not in index:
                raise ResolutionError("vector has a term %r outside the strand" % (key,))
            coords[index[key]] = field.add(coords[index[key]], c)
    return coords


def strand_matrix(ring, rows, src_shifts, dst_shifts, degree):
    """Matrix of a homogeneous map between free modules in one internal degree.

    `rows` is the dst x src matrix of polynomials; returns (matrix over k,
    src basis, dst basis) with columns indexed by the source strand basis.
    """
    field = ring.field
    gb = quotient_groebner(ring)
    src = free_strand_basis(ring, src_shifts, degree)
    dst = free_strand_basis(ring, dst_shifts, degree)
    dst_index = {key: n for n, key in enumerate(dst)}
    cols = []
    for (scol, mono) in src:
        vec = [field.zero] * len(dst)
        for drow in range(len(dst_shifts)):
            p = rows[drow][scol]
            if p.is_zero():
                continue
            prod = p.monomial_multiple(mono)
            if gb:
                prod = normal_form(prod, gb)
            for e, c in prod.terms.items():
                vec[dst_index[(drow, e)]] = field.add(vec[dst_index[(drow, e)]], c)
        cols.append(vec)
    matrix = [[cols[j][i] for j in range(len(cols))] for i in range(len(dst))]
    return matrix, src, dst_index


def strand_solve(ring, rows, src_shifts, dst_shifts, target, degree):
    """Solve (matrix of polynomials) * u = target in one internal degree.

    target: homogeneous vector of polynomials of internal degree `degree`
    over dst shifts.  Returns a vector of homogeneous polynomials over the
    source shifts, or None if no solution exists in this strand.
    """
    field = ring.field
    matrix, src, dst_index = strand_matrix(ring, rows, src_shifts, dst_shifts, degree)
    rhs = vector_strand_coords(ring, target, dst_index, field)
    if not src:
        return None if any(rhs) else [ring.zero() for _ in src_shifts]
    sol = solve(field, matrix, rhs) if matrix else (None if any(rhs) else [])
    if sol is None:
        return None
    out = [ring.zero() for _ in src_shifts]
    for coeff, (col, mono) in zip(sol, src):
        if coeff:
            out[col] = out[col] + ring.monomial(mono, coeff)
    return out


# --- presented modules, degreewise ---------------------------------------------


class GradedModulePieces:
    """Degreewise k-bases of a presented graded module with multiplication.

    Elements of the degree-D piece are coordinate vectors on the free
    cover's strand basis, reduced modulo the span of the relations; the
    reduced representatives are supported on non-pivot basis elements.
    """

    def __init__(self, module, j_max):
        self.module = module
        self.ring = module.ring
        self.j_max = j_max
        self.field = self.ring.field
        self.gb = quotient_groebner(self.ring)
        self._free = {}
        self._free_index = {}
        self._echelon = {}
        self._quotient_index = {}
        for d in range(0, j_max + 1):
            basis = free_strand_basis(self.ring, module.column_degrees, d)
            self._free[d] = basis
            self._free_index[d] = {key: n for n, key in enumerate(basis)}
            ech = ColumnEchelon(self.field, range(len(basis)))
            for rel, rdeg in zip(module.relations, module.relation_degrees()):
                for mono in graded_piece_basis(self.ring, d - rdeg):
                    vec = [self.field.zero] * len(basis)
                    for col, p in enumerate(rel):
                        if p.is_zero():
                            continue
                        prod = p.monomial_multiple(mono)
                        if self.gb:
                            prod = normal_form(prod, self.gb)
                        for e, c in prod.terms.items():
                            n = self._free_index[d][(col, e)]
                            vec[n] = self.field.add(vec[n], c)
                    ech.add(vec)
            self._echelon[d] = ech
            pivots = {ech.row_order[p] for p in ech.pivot_positions()}
            quot = [n for n in range(len(basis)) if n not in pivots]
            self._quotient_index[d] = quot

    def dim(self, d):
        if d < 0 or d > self.j_max:
            return 0
        return len(self._quotient_index[d])

    def reduce(self, d, coords):
        """Reduce a free-cover strand vector modulo the relation span and
        return coordinates on the quotient basis."""
        ech = self._echelon[d]
        field = self.field
        vec = list(coords)
        for piv in sorted(ech.columns):
            r = ech.row_order[piv]
            if vec[r]:
                f = vec[r]
                other = ech.columns[piv]
                vec = [field.sub(x, field.mul(f, y)) for x, y in zip(vec, other)]
        return [vec[n] for n in self._quotient_index[d]]

    def multiply_matrix(self, p, d_src):
        """Matrix of multiplication by the homogeneous polynomial p from the
        degree-d_src piece to the degree-(d_src + deg p) piece."""
        d_dst = d_src + p.degree()
        if p.is_zero() or d_src < 0 or d_src > self.j_max or d_dst > self.j_max:
            return [[self.field.zero] * self.dim(d_src) for _ in range(self.dim(d_dst))]
        cols = []
        for n in self._quotient_index[d_src]:
            col, mono = self._free[d_src][n]
            prod = p.monomial_multiple(mono)
            if self.gb:
                prod = normal_form(prod, self.gb)
            vec = [self.field.zero] * len(self._free[d_dst])
            for e, c in prod.terms.items():
                m = self._free_index[d_dst][(col, e)]
                vec[m] = self.field.add(vec[m], c)
            cols.append(self.reduce(d_dst, vec))
        return [[cols[j][i] for j in range(len(cols))] for i in range(self.dim(d_dst))]


# --- submodule spans and minimal generators ------------------------------------


def _submodule_echelon(ring, chosen, row_shifts, degree, free_index, field):
    """Echelon of the degree-`degree` span of the submodule generated by
    `chosen` (list of (vector, internal degree)) inside ⊕ G(-row_shifts)."""
    gb = quotient_groebner(ring)
    ech = ColumnEchelon(field, range(len(free_index)))
    for vec, vdeg in chosen:
        for mono in graded_piece_basis(ring, degree - vdeg):
            coords = [field.zero] * len(free_index)
            for col, p in enumerate(vec):
                if p.is_zero():
                    continue
                prod = p.monomial_multiple(mono)
                if gb:
                    prod = normal_form(prod, gb)
                for e, c in prod.terms.items():
                    n = free_index[(col, e)]
                    coords[n] = field.add(coords[n], c)
            ech.add(coords)
    return ech


def minimal_generators(ring, columns, row_shifts):
    """Minimal generating subset of homogeneous module generators
    (graded Nakayama, processed in ascending internal degree)."""
    field = ring.field
    items = []
    for vec in columns:
        degs = {p.degree() + row_shifts[a] for a, p in enumerate(vec) if not p.is_zero()}
        if not degs:
            continue
        if len(degs) > 1:
            raise ResolutionError("generator is not homogeneous for the row shifts")
        items.append((vec, degs.pop()))
    items.sort(key=lambda it: it[1])
    chosen = []
    d = None
    ech = None
    free_index = None
    for vec, vdeg in items:
        if vdeg != d:
            d = vdeg
            basis = free_strand_basis(ring, row_shifts, d)
            free_index = {key: n for n, key in enumerate(basis)}
            ech = _submodule_echelon(ring, chosen, row_shifts, d, free_index, field)
        coords = vector_strand_coords(ring, vec, free_index, field)
        if ech.add(coords) is not None:
            chosen.append((vec, vdeg))
    return chosen


# --- resolutions ----------------------------------------------------------------


class GradedFreeResolution:
    """Complex of free graded modules with degree shifts and homogeneous
    differentials; diffs[i] maps term i to term i-1 (i >= 1)."""

    def __init__(self, ring, shifts_per_term, diffs, i_max, minimal=True, validate=True):
        self.ring = ring
        self.shifts = [tuple(s) for s in shifts_per_term]
        self.diffs = diffs  # diffs[0] is None
        self.i_max = i_max
        self.minimal = minimal
        if validate:
            self._validate()

    @property
    def length(self):
        return len(self.shifts) - 1

    def rank(self, i):
        if 0 <= i < len(self.shifts):
            return len(self.shifts[i])
        return 0

    def _validate(self):
        gb = quotient_groebner(self.ring)
        for i in range(1, len(self.shifts)):
            d = self.diffs[i]
            src, dst = self.shifts[i], self.shifts[i - 1]
            for a in range(len(dst)):
                for b in range(len(src)):
                    p = d[a][b]
                    if p.is_zero():
                        continue
                    if not p.is_homogeneous() or p.degree() != src[b] - dst[a]:
                        raise ResolutionError(
                            "differential entry (%d,%d) at level %d is not homogeneous "
                            "of degree %d" % (a, b, i, src[b] - dst[a]))
                    if self.minimal and p.degree() == 0:
                        raise ResolutionError("minimal resolution has a unit entry")
        for i in range(2, len(self.shifts)):
            prod = _matmul_poly(self.ring, self.diffs[i - 1], self.diffs[i], gb)
            for row in prod:
                for p in row:
                    if not p.is_zero():
                        raise ResolutionError("d o d is nonzero at homological degree %d" % i)


def _matmul_poly(ring, a, b, gb=None):
    """Product of polynomial matrices, entries reduced mod the quotient."""
    if gb is None:
        gb = quotient_groebner(ring)
    n = len(a)
    k = len(b)
    m = len(b[0]) if k else 0
    out = [[ring.zero() for _ in range(m)] for _ in range(n)]
    for i in range(n):
        for j in range(m):
            s = ring.zero()
            for t in range(k):
                if a[i][t].is_zero() or b[t][j].is_zero():
                    continue
                s = s + a[i][t] * b[t][j]
            if gb and not s.is_zero():
                s = normal_form(s, gb)
            out[i][j] = s
    return out


def _minimize_presentation(module):
    """Strip unit entries from a presentation (Gaussian reduction), so that
    the free cover is minimal."""
    ring = module.ring
    field = ring.field
    degs = list(module.column_degrees)
    rels = [list(r) for r in module.relations]
    changed = True
    while changed:
        changed = False
        for ri, rel in enumerate(rels):
            unit_col = None
            for a, p in enumerate(rel):
                if not p.is_zero() and p.degree() == 0:
                    unit_col = a
                    break
            if unit_col is None:
                continue
            pivot = rel[unit_col]
            inv = field.inv(pivot.coefficient((0,) * ring.nvars))
            new_rels = []
            for rj, other in enumerate(rels):
                if rj == ri:
                    continue
                q = other[unit_col]
                if q.is_zero():
                    new_rels.append([p for a, p in enumerate(other) if a != unit_col])
                    continue
                factor = q.scale(inv)
                adjusted = [other[a] - factor * rel[a] for a in range(len(rel))]
                new_rels.append([p for a, p in enumerate(adjusted) if a != unit_col])
            rels = new_rels
            degs = [dg for a, dg in enumerate(degs) if a != unit_col]
            changed = True
            break
    rels = [r for r in rels if any(not p.is_zero() for p in r)]
    return ModulePresentation(ring, len(degs), degs, rels)


def minimal_resolution(module, i_max):
    """Minimal graded free resolution of a presented module over G = k[x]/J,
    to homological degree i_max, by iterated syzygies with degreewise
    minimal-generator selection.

    Syzygies over G are computed over the polynomial cover with the
    quotient relations adjoined as extra columns, then reduced mod J.
    """
    ring = module.ring
    if ring.setting != GRADED:
        raise ResolutionError("minimal_resolution needs a graded ring")
    module = _minimize_presentation(module)
    gb = quotient_groebner(ring)

    shifts_per_term = [tuple(module.column_degrees)]
    diffs = [None]

    current = []
    for rel in module.relations:
        vec = [normal_form(p, gb) if gb and not p.is_zero() else p for p in rel]
        if any(not p.is_zero() for p in vec):
            current.append(vec)
    current = [vec for vec, _deg in minimal_generators(ring, current, shifts_per_term[0])]

    for i in range(1, i_max + 1):
        if not current:
            break
        row_shifts = shifts_per_term[i - 1]
        col_degs = []
        for vec in current:
            degs = {p.degree() + row_shifts[a] for a, p in enumerate(vec) if not p.is_zero()}
            col_degs.append(degs.pop())
        d = [[current[b][a] for b in range(len(current))] for a in range(len(row_shifts))]
        shifts_per_term.append(tuple(col_degs))
        diffs.append(d)
        if i == i_max:
            break
        # syzygies over G: adjoin quotient multiples of the free basis vectors
        aug_cols = list(current)
        aug_degs = list(col_degs)
        for q in ring.quotient:
            for a in range(len(row_shifts)):
                vec = [ring.zero()] * len(row_shifts)
                vec[a] = q
                aug_cols.append(vec)
                aug_degs.append(q.degree() + row_shifts[a])
        raw = syzygies(ring, aug_cols, row_shifts)
        nxt = []
        for u in raw:
            vec = [u[b] for b in range(len(current))]
            if gb:
                vec = [normal_form(p, gb) if not p.is_zero() else p for p in vec]
            if any(not p.is_zero() for p in vec):
                nxt.append(vec)
        current = [vec for vec, _deg in minimal_generators(ring, nxt, tuple(col_degs))]

    return GradedFreeResolution(ring, shifts_per_term, diffs, i_max)


def betti_series(res, i_max=None, j_max=None):
    """Betti table: beta_{i,j} = number of shift-j columns in homological
    degree i of a minimal resolution."""
    if not res.minimal:
        raise ResolutionError("betti_series needs a minimal resolution")
    if i_max is None:
        i_max = max(res.i_max, res.length)
    all_shifts = [s for term in res.shifts for s in term] or [0]
    if j_max is None:
        j_max = max(all_shifts)
    table = BigradedSeries(i_max, j_max)
    for i, term in enumerate(res.shifts):
        if i > i_max:
            break
        for s in term:
            if s <= j_max:
                table._set(i, s, table.get(i, s) + 1)
    return table


# --- Tor by strandwise tensor-and-homology --------------------------------------


def tor_series(mM, mN, i_max, j_max):
    """Bigraded Hilbert series of Tor^G(M, N): resolve M minimally, tensor
    with N over G, take homology one internal degree at a time."""
    if not mM.ring.compatible(mN.ring) or tuple(
            str(q) for q in mM.ring.quotient) != tuple(str(q) for q in mN.ring.quotient):
        raise ResolutionError("modules must be presented over the same ring")
    ring = mM.ring
    field = ring.field
    res = minimal_resolution(mM, i_max + 1)
    pieces = GradedModulePieces(mN, j_max)

    out = BigradedSeries(i_max, j_max)
    for deg in range(0, j_max + 1):
        spaces = {}
        for i in range(0, min(res.length, i_max + 1) + 1):
            basis = []
            for b, s in enumerate(res.shifts[i]):
                nd = pieces.dim(deg - s)
                basis.extend((b, w) for w in range(nd))
            spaces[i] = basis

        def matrix_for(i):
            src = spaces.get(i, [])
            dst = spaces.get(i - 1, [])
            if not src or not dst:
                return None
            dst_offsets = {}
            off = 0
            for a, s in enumerate(res.shifts[i - 1]):
                dst_offsets[a] = off
                off += pieces.dim(deg - s)
            cols = []
            mats = {}
            for (b, w) in src:
                col = [field.zero] * len(dst)
                sb = res.shifts[i][b]
                for a, sa in enumerate(res.shifts[i - 1]):
                    p = res.diffs[i][a][b]
                    if p.is_zero():
                        continue
                    key = (i, a, b)
                    if key not in mats:
                        mats[key] = pieces.multiply_matrix(p, deg - sb)
                    block = mats[key]
                    for r in range(len(block)):
                        if block[r][w]:
                            col[dst_offsets[a] + r] = field.add(
                                col[dst_offsets[a] + r], block[r][w])
                cols.append(col)
            return [[cols[j][i2] for j in range(len(cols))] for i2 in range(len(dst))]

        ranks = {}
        for i in range(1, min(res.length, i_max + 1) + 1):
            m = matrix_for(i)
            ranks[i] = rank(field, m) if m else 0
        for i in range(0, i_max + 1):
            dim_i = len(spaces.get(i, []))
            if dim_i == 0:
                continue
            h = dim_i - ranks.get(i, 0) - ranks.get(i + 1, 0)
            if h < 0:
                raise ResolutionError("negative homology dimension; resolution is broken")
            if h:
                out._set(i, deg, h)
    return out


def tor_symmetry_check(mM, mN, i_max, j_max):
    """Balancing of Tor: both argument orders give the same series."""
    return tor_series(mM, mN, i_max, j_max) == tor_series(mN, mM, i_max, j_max)


# --- stable monomial ideals ------------------------------------------------------


def _monomial_exponents(p):
    if len(p.terms) != 1:
        raise GroebnerError("generator %s is not a monomial" % p)
    return next(iter(p.terms))


def _max_var(e):
    """1-based index of the largest variable dividing x^e (0 for 1)."""
    for i in range(len(e) - 1, -1, -1):
        if e[i]:
            return i + 1
    return 0


def ek_betti_stable(I, i_max=None, j_max=None):
    """Betti table of a stable monomial ideal from the closed formula
    beta_{i, deg(u)+i} = C(max(u)-1, i) summed over minimal generators u.

    Stability (for every generator u and i < max(u), x_i * u / x_max(u)
    stays in the ideal) is checked and a violating monomial reported.
    """
    ring = I.ring
    gens = [_monomial_exponents(g) for g in I.generators]
    minimal = []
    for e in sorted(gens, key=sum):
        if not any(all(a <= b for a, b in zip(f, e)) for f in minimal):
            minimal.append(e)

    def member(e):
        return any(all(a <= b for a, b in zip(f, e)) for f in minimal)

    for e in minimal:
        mv = _max_var(e)
        for i in range(0, mv - 1):
            swapped = list(e)
            swapped[mv - 1] -= 1
            swapped[i] += 1
            if not member(tuple(swapped)):
                from .poly import format_monomial
                raise GroebnerError(
                    "ideal is not stable: x_%d * %s / x_%d leaves the ideal"
                    % (i + 1, format_monomial(ring, e), mv))

    if i_max is None:
        i_max = max((_max_var(e) - 1 for e in minimal), default=0)
    if j_max is None:
        j_max = max((sum(e) + _max_var(e) - 1 for e in minimal), default=0)
    table = BigradedSeries(i_max, j_max)
    for e in minimal:
        mv = _max_var(e)
        for i in range(0, mv):
            if i > i_max or sum(e) + i > j_max:
                continue
            c = comb(mv - 1, i)
            if c:
                table._set(i, sum(e) + i, table.get(i, sum(e) + i) + c)
    return table


def closed_form_tor_series(n, m, d, e, i_max, j_max):
    """Tor series of M = k[x_1..x_n]/(x_1^d, x_1^{d-1}x_2, .., x_1^{d-1}x_m)
    against k over the hypersurface ring G = k[x]/(x_1^e), truncated:

        (1 + sum_{i=1..m} C(m, i) z^i t^{d+i-1}) * sum_{k>=0} z^{2k} t^{ke}.

    The left factor is the Betti polynomial of M over the polynomial ring
    (Eliahou-Kervaire); the right factor is the standard hypersurface
    periodicity.  For m <= 2 the left factor is 1 + m z t^d +
    (m-1) z^2 t^{d+1}."""
    if not (2 <= d < e):
        raise GroebnerError("need 2 <= d < e")
    if e < 3:
        raise GroebnerError("need e >= 3")
    if not (1 <= m <= n):
        raise GroebnerError("need 1 <= m <= n")
    out = BigradedSeries(i_max, j_max)

    def bump(i, j, c):
        if c and 0 <= i <= i_max and 0 <= j <= j_max:
            out._set(i, j, out.get(i, j) + c)

    k = 0
    while 2 * k <= i_max and k * e <= j_max:
        bump(2 * k, k * e, 1)
        for i in range(1, m + 1):
            bump(2 * k + i, k * e + d + i - 1, comb(m, i))
        k += 1
    return out
