"""Lifted filtered resolutions, the filtered tensor complex, gr, and the
exact low-degree local Tor oracle."""

import pytest

from grtor.fields import Field
from grtor.groebner import CapExceededError, IdealPresentation
from grtor.filtered import (FilteredComplex, LiftError, StableFiltration,
                            filtered_tensor, gr_complex, lift_resolution,
                            local_cyclic_graded_data, resolve_local_cyclic,
                            tor_local_low)
from grtor.linalg import rank
from grtor.poly import LOCAL, Ring
from grtor.spectral import page


def cusp_ring(cap=20):
    return Ring(["X", "Y"], setting=LOCAL, cap=cap)


def test_lift_principal_no_corrections():
    L = cusp_ring()
    fres = resolve_local_cyclic(IdealPresentation(L, ["X^2 - Y^3"]))
    assert fres.shifts == [(0,), (2,)]
    assert str(fres.diffs[1][0][0]) == "X^2 - Y^3"
    fres.check_postconditions()


def test_lift_with_unit_correction():
    # in(I) = (X^2, X*Y, Y^4) needs a third generator; lifting its first
    # syzygy forces a constant correction entry in d_2
    L = cusp_ring()
    I = IdealPresentation(L, ["X^2 + Y^3", "X*Y"])
    fres = resolve_local_cyclic(I)
    assert fres.shifts[1] == (2, 2, 4)
    assert fres.shifts[2] == (3, 5)
    fres.check_postconditions()
    units = [fres.diffs[2][a][b]
             for a in range(3) for b in range(2)
             if not fres.diffs[2][a][b].is_zero()
             and fres.diffs[2][a][b].order_degree() == 0]
    assert units, "expected a constant entry in the corrected differential"


def test_lift_rejects_wrong_initial_forms():
    L = cusp_ring()
    forms, gens = local_cyclic_graded_data(IdealPresentation(L, ["X^2 - Y^3"]))
    from grtor.groebner import ModulePresentation
    from grtor.resolution import minimal_resolution
    gres = minimal_resolution(ModulePresentation.cyclic(forms[0].ring, forms), 3)
    with pytest.raises(LiftError):
        lift_resolution(gres, [L.parse("Y^3 - X^2")], 20)


def test_filtration_descriptor():
    f = StableFiltration("shifted-m-adic", (0, 2, 4))
    assert f.stability_bound == 4
    assert StableFiltration().stability_bound == 0


def test_tensor_unit_module_is_resolution_itself():
    L = cusp_ring()
    fres = resolve_local_cyclic(IdealPresentation(L, ["X^2 - Y^3"]))
    Lc = filtered_tensor(fres, None, 8)
    # L_i = F_i with the shifted filtration: dims are full polynomial strata
    assert Lc.dim(0) == sum(j + 1 for j in range(9))
    assert min(Lc.levels[1]) == 2


def test_tensor_worked_example_shape():
    L = cusp_ring()
    fres = resolve_local_cyclic(IdealPresentation(L, ["X^2 - Y^3"]))
    N = IdealPresentation(L, ["X^2 - Y^5"])
    Lc = filtered_tensor(fres, N, 12)
    assert Lc.truncated_at == 12
    assert Lc.dim(0) == 25 and Lc.dim(1) == 21
    assert Lc.stability_bound == 2


def test_tensor_cap_insufficiency():
    L = cusp_ring(cap=10)
    fres = resolve_local_cyclic(IdealPresentation(L, ["X^2 - Y^3"]))
    with pytest.raises(CapExceededError):
        filtered_tensor(fres, None, 11)


def test_tensor_m_stability_by_rank():
    # level j+1 span equals m * (level j span) past the stability bound
    L = cusp_ring()
    fres = resolve_local_cyclic(IdealPresentation(L, ["X^2 - Y^3"]))
    N = IdealPresentation(L, ["X^2 - Y^5"])
    Lc = filtered_tensor(fres, N, 10)
    field = Lc.field
    for i in range(Lc.i_max + 1):
        n = Lc.dim(i)
        for j in range(Lc.stability_bound, Lc.j_max):
            cols = []
            for act in Lc.var_actions[i]:
                for c in range(n):
                    if Lc.levels[i][c] >= j:
                        cols.append([act[r][c] for r in range(n)])
            got = rank(field, [[col[r] for col in cols] for r in range(n)]) if cols else 0
            expected = sum(1 for lv in Lc.levels[i] if lv >= j + 1)
            assert got == expected, (i, j)


def test_gr_complex_matches_page_one():
    L = cusp_ring()
    fres = resolve_local_cyclic(IdealPresentation(L, ["X^2 + Y^3", "X*Y"]))
    N = IdealPresentation(L, ["X^2 - Y^5"])
    Lc = filtered_tensor(fres, N, 9)
    grc = gr_complex(Lc).homology_series()
    p1 = page(Lc, 1)
    for (i, j), c in p1.dims.coefficients.items():
        assert grc.get(i, j) == c
    for (i, j), c in grc.coefficients.items():
        if (i, j) not in p1.indeterminate:
            assert p1.dims.get(i, j) == c


def test_gr_complex_zero_differential():
    F = Field(0)
    Lc = FilteredComplex(F, [[0, 1], [2]], [None, [[F.zero], [F.zero]]], 2)
    hs = gr_complex(Lc).homology_series()
    assert hs.coefficients == {(0, 0): 1, (0, 1): 1, (1, 2): 1}


def test_strictly_filtered_gr_equals_homology_of_gr():
    # strictly compatible differential: gr homology equals gr of homology
    F = Field(0)
    one = F.one
    Lc = FilteredComplex(F, [[1, 0], [1, 0]], [None, [[one, F.zero], [F.zero, one]]], 1)
    from grtor.spectral import infinity_page
    assert gr_complex(Lc).homology_series() == infinity_page(Lc).dims


def test_tor_local_low_worked_example():
    L = cusp_ring()
    I = IdealPresentation(L, ["X^2 - Y^3"])
    J = IdealPresentation(L, ["X^2 - Y^5"])
    low = tor_local_low(I, J, 12)
    assert low.tor0_colength == 6
    assert {j: low.series.get(0, j) for j in range(5)} == {0: 1, 1: 2, 2: 2, 3: 1, 4: 0}
    assert all(low.series.get(1, j) == 0 for j in range(13))


def test_tor_local_low_self_pair_shifted_series():
    # Tor_1(R/(f), R/(f)) = (f)/(f^2): series is the quotient series shifted
    # by ord(f)
    L = cusp_ring()
    I = IdealPresentation(L, ["X^2 - Y^3"])
    low = tor_local_low(I, I, 10)
    expected = {2: 1}
    expected.update({j: 2 for j in range(3, 11)})
    assert {j: low.series.get(1, j) for j in range(2, 11)} == expected


def test_self_pair_spectral_fates_are_flagged_not_zeroed():
    # the self-pair differential acts by zero: every homological-degree-1
    # unit survives in truth, but the truncated complex alone cannot rule
    # out cancellations past the cap, so those cells must come back
    # flagged indeterminate (the low-Tor oracle is the i <= 1 route)
    from grtor.spectral import run_to_stability
    L = cusp_ring(cap=22)
    I = IdealPresentation(L, ["X^2 - Y^3"])
    run = run_to_stability(filtered_tensor(resolve_local_cyclic(I), I, 14))
    assert len(run.certificate) == 0
    assert bool(run.verified)
    for j in range(2, run.window_j + 1):
        assert (1, j) in run.page_infinity.indeterminate
    # degree-zero fates are always determinate and match the oracle
    low = tor_local_low(I, I, 14)
    for j in range(run.window_j + 1):
        assert run.page_infinity.dims.get(0, j) == low.series.get(0, j)


def test_tor_local_low_unit_sum():
    L = cusp_ring()
    I = IdealPresentation(L, ["X"])
    J = IdealPresentation(L, ["Y - 1"])  # a unit locally
    low = tor_local_low(I, J, 8)
    assert low.tor0_colength == 0
    assert low.series.coefficients.get((0, 0), 0) == 0
    assert all(low.series.get(1, j) == 0 for j in range(9))


def test_serialization_roundtrip():
    L = cusp_ring()
    fres = resolve_local_cyclic(IdealPresentation(L, ["X^2 - Y^3"]))
    Lc = filtered_tensor(fres, IdealPresentation(L, ["X^2 - Y^5"]), 8)
    text = Lc.to_text()
    back = FilteredComplex.from_text(text)
    assert back.to_text() == text
    assert back.levels == Lc.levels
    assert back.truncated_at == 8


def test_from_text_rejects_garbage():
    with pytest.raises(LiftError):
        FilteredComplex.from_text("nonsense\n")


def test_filtered_complex_validates():
    F = Field(0)
    # differential dropping the level (target 0 < source 1) is not filtered
    with pytest.raises(LiftError):
        FilteredComplex(F, [[0], [1]], [None, [[F.one]]], 1)
    # d o d != 0 is rejected
    with pytest.raises(LiftError):
        FilteredComplex(F, [[0], [0], [0]],
                        [None, [[F.one]], [[F.one]]], 1)
    # level outside 0..j_max is rejected
    with pytest.raises(LiftError):
        FilteredComplex(F, [[5]], [None], 1)


def test_low_tor_oracle_matches_pipeline_degree_zero():
    # tor_local_low's gr(Tor_0) series equals the spectral pipeline's i = 0
    # output inside the reliability window
    from grtor.spectral import run_to_stability
    L = cusp_ring(cap=24)
    for gens_m, gens_n in ((["X^2 - Y^3"], ["X^2 - Y^5"]),
                           (["X^2 + Y^3", "X*Y"], ["X^2 - Y^3"]),
                           (["X - Y^2"], ["Y^3 - X^4"])):
        I = IdealPresentation(L, gens_m)
        J = IdealPresentation(L, gens_n)
        fres = resolve_local_cyclic(I)
        Lc = filtered_tensor(fres, J, 12)
        run = run_to_stability(Lc)
        low = tor_local_low(I, J, 12)
        for j in range(run.window_j + 1):
            assert run.page_infinity.dims.get(0, j) == low.series.get(0, j), (gens_m, gens_n, j)


def test_induced_filtration_on_homology_is_stable_in_window():
    # Artin-Rees, testably: for the m-primary worked example the induced
    # filtration on H_0 has gr concentrated in low degrees; the window tail
    # is empty
    from grtor.spectral import run_to_stability
    L = cusp_ring()
    fres = resolve_local_cyclic(IdealPresentation(L, ["X^2 - Y^3"]))
    Lc = filtered_tensor(fres, IdealPresentation(L, ["X^2 - Y^5"]), 12)
    run = run_to_stability(Lc)
    for j in range(4, run.window_j + 1):
        assert run.page_infinity.dims.get(0, j) == 0
