"""Decision procedures: point evaluation, PSD criteria, plateau bounds."""

import math

import numpy as np
import numpy.testing as npt
import pytest

from sobolevlab import criteria
from sobolevlab import momentmatrix as mm
from sobolevlab.criteria import (
    CenterNotBoundedEvaluation,
    CriterionReport,
    bpe_decide,
    bpe_weighted_circles_report,
    comparability_bounds,
    dominance_check,
    eigen_limit_estimate,
    eigen_limit_report,
    gamma_index,
    gamma_via_kernel,
    sobolev_domination_bound,
    toeplitz_rigidity,
    weight_grid_extremes,
    wirtinger_psd_check,
)
from sobolevlab.measures import Atomic, CircleLebesgue, MeasureSum, WeightedCircle
from sobolevlab.momentmatrix import norm_sq, section
from sobolevlab.numkernel import gen_eig_definite
from sobolevlab.polynomials import differentiate, evaluate
from sobolevlab.sobolev import norm_sequence, pencil_of_measures

UNIT = CircleLebesgue(0.0, 1.0)
HALF = CircleLebesgue(0.0, 0.5)
HALF_PLUS_UNIT = MeasureSum(((1.0, HALF), (1.0, UNIT)))
W04 = WeightedCircle(0.0, 1.0, ((0, 1.0), (1, 0.4), (-1, 0.4)))
M_UNIT = mm.of_measure(UNIT)
M_HALF = mm.of_measure(HALF)


# ---------------------------------------------------------------------------
# point-evaluation index
# ---------------------------------------------------------------------------

def closed_form_gamma_unit(a: complex, n: int) -> float:
    # geometric sum: 1 / sum_{k<n} |a|^{2k}
    t = abs(a) ** 2
    if t == 1.0:
        return 1.0 / n
    return (1.0 - t) / (1.0 - t**n)


def test_gamma_unit_circle_closed_form():
    for a in (0.0, 0.5, 0.9, -0.3 + 0.4j, 1.0, 1.1):
        for n in (2, 5, 16, 32):
            want = closed_form_gamma_unit(a, n)
            got = gamma_index(M_UNIT, a, n)
            assert abs(got - want) <= 1e-10 * want


def test_gamma_two_routes_agree():
    for m in (M_UNIT, M_HALF, mm.of_measure(W04)):
        for a in (0.0, 0.3, 0.6j, -0.5 + 0.5j, 0.9):
            for n in (2, 8, 24):
                g1 = gamma_index(m, a, n)
                g2 = gamma_via_kernel(m, a, n)
                assert abs(g1 - g2) <= 1e-9 * g1


def test_gamma_positive_and_nonincreasing_in_n():
    for a in (0.4, 0.95, 1.05):
        vals = [gamma_index(M_HALF, a, n) for n in range(1, 20)]
        assert all(v > 0 for v in vals)
        assert all(b <= a_ * (1 + 1e-12) for a_, b in zip(vals, vals[1:]))


def test_gamma_minimizer_witness_attains_gamma():
    a = 0.7 - 0.2j
    n = 12
    w = criteria._gamma_minimizer(M_HALF, a, n)
    assert abs(evaluate(w, a) - 1.0) <= 1e-10
    assert abs(norm_sq(section(M_HALF, n), w) - gamma_index(M_HALF, a, n)) <= 1e-12


def test_bpe_holds_inside_disk():
    rep = bpe_decide(M_UNIT, 0.9, 32)
    assert rep.verdict == "holds"
    assert abs(rep.details["gamma_end"] - 1.902243e-01) <= 1e-6
    assert rep.details["decay_over_last_doubling"] <= criteria.BPE_HOLD_RATIO
    assert rep.witness is None
    assert rep.constant == pytest.approx(1.0 / rep.details["gamma_end"])
    assert rep.n_list == list(range(2, 33))
    assert rep.parameters["gamma_floor"] == criteria.BPE_GAMMA_FLOOR


def test_bpe_fails_outside_disk_with_witness():
    rep = bpe_decide(M_UNIT, 1.1, 32)
    assert rep.verdict == "fails"
    assert rep.details["decay_over_last_doubling"] >= criteria.BPE_DECAY_RATIO
    # witness: p(a) = 1 with norm^2 == gamma_end, i.e. the evaluation
    # functional needs an ever-larger constant
    w = rep.witness
    assert abs(evaluate(w, 1.1) - 1.0) <= 1e-9
    assert norm_sq(section(M_UNIT, 32), w) == pytest.approx(rep.details["gamma_end"], rel=1e-9)


def test_bpe_boundary_point_is_inconclusive():
    # gamma_n = 1/n exactly: too slow for "fails", too alive for "holds"
    rep = bpe_decide(M_UNIT, 1.0, 32)
    assert rep.verdict == "inconclusive"
    assert rep.details["decay_over_last_doubling"] == pytest.approx(2.0, rel=1e-12)
    assert rep.witness is None


def test_bpe_gamma_floor_cuts_off():
    rep = bpe_decide(M_UNIT, 1.2, 32)
    assert rep.verdict == "fails"
    assert rep.details["gamma_end"] <= 1e-4


def test_bpe_needs_window():
    with pytest.raises(ValueError):
        bpe_decide(M_UNIT, 0.5, 3)


# ---------------------------------------------------------------------------
# PSD criteria
# ---------------------------------------------------------------------------

def test_wirtinger_identity_weight_holds_with_constant_one():
    rep = wirtinger_psd_check(M_UNIT, 1.0, 16)
    assert rep.verdict == "holds"
    assert rep.values[0] >= -1e-12
    assert rep.witness is None


def test_wirtinger_sharp_constant_on_unit_circle():
    # constant c < 1 is beaten by p(z) = z: ||z||^2 = 1 > c * ||1||^2
    rep = wirtinger_psd_check(M_UNIT, 0.9, 4)
    assert rep.verdict == "fails"
    assert rep.values[0] == pytest.approx(-0.1, abs=1e-12)
    w = rep.witness
    assert w[0] == 0.0
    g = section(M_UNIT, len(w))
    lhs = norm_sq(g, w)
    rhs = 0.9 * norm_sq(g, differentiate(w))
    assert lhs - rhs >= 0.1 - 1e-12


def test_wirtinger_cosine_weight_fails_frozen_eigenvalue():
    rep = wirtinger_psd_check(mm.of_measure(W04), 1.0, 3)
    assert rep.verdict == "fails"
    assert rep.values[0] == pytest.approx(-0.0623486272416134, abs=1e-13)
    # re-check the witness against measure norms, not matrix algebra
    w = rep.witness
    assert w[0] == 0.0
    g = section(mm.of_measure(W04), len(w))
    violation = norm_sq(g, w) - 1.0 * norm_sq(g, differentiate(w))
    assert violation > criteria.WITNESS_MARGIN
    assert violation == pytest.approx(-rep.values[0], rel=1e-9)


def test_wirtinger_radius_squared_constant_for_centered_circles():
    # ||p||^2 <= r^2 ||p'||^2 on |z| = r when p(0) = 0
    assert wirtinger_psd_check(M_HALF, 0.25, 16).verdict == "holds"
    big = mm.of_measure(CircleLebesgue(0.0, 2.0))
    assert wirtinger_psd_check(big, 4.0, 16).verdict == "holds"
    # just below the sharp constant, p(z) = z violates by 0.1; the graded
    # section (entries up to 4^15) must not drown that out
    rep = wirtinger_psd_check(big, 3.9, 16)
    assert rep.verdict == "fails"
    assert rep.values[0] == pytest.approx(-0.1, abs=1e-3)


def test_wirtinger_shifted_circle_needs_larger_constant():
    # centering matters: on |z - a| = r the monomial z has norm^2
    # |a|^2 + r^2, so c = r^2 fails once a != 0 (via p(z) = z)
    a = 0.7 - 0.3j
    m = mm.of_measure(CircleLebesgue(a, 2.0))
    rep = wirtinger_psd_check(m, 4.0, 12)
    assert rep.verdict == "fails"
    assert rep.values[0] <= -abs(a) ** 2 * 0.9
    g = section(m, len(rep.witness))
    w = rep.witness
    assert norm_sq(g, w) - 4.0 * norm_sq(g, differentiate(w)) > criteria.WITNESS_MARGIN
    # the critical constant at this section size is the top eigenvalue of
    # (M', N M N); straddling it flips the verdict
    n = 8
    full = section(m, n)
    deleted = section(mm.delete_first(m), n)
    scale = np.arange(1, n + 1, dtype=float)
    c_star = float(
        gen_eig_definite(deleted, scale[:, None] * full * scale[None, :])[-1]
    )
    assert c_star > 4.0
    assert wirtinger_psd_check(m, c_star * (1.0 + 1e-6), n).verdict == "holds"
    assert wirtinger_psd_check(m, c_star * (1.0 - 1e-3), n).verdict == "fails"


def test_wirtinger_graded_diagonal_fails_exactly():
    # moments diag(5^k): entry j of the criterion matrix is 5^(j-1) (j^2 - 5),
    # minimized at j = 2 with value -5
    m = mm.of_measure(CircleLebesgue(0.0, math.sqrt(5.0)))
    rep = wirtinger_psd_check(m, 1.0, 8)
    assert rep.verdict == "fails"
    assert rep.values[0] == pytest.approx(-5.0, rel=1e-12)
    npt.assert_allclose(np.abs(rep.witness), np.eye(9)[2], atol=1e-8)


def test_wirtinger_validation():
    with pytest.raises(ValueError):
        wirtinger_psd_check(M_UNIT, 1.0, 1)
    with pytest.raises(ValueError):
        wirtinger_psd_check(M_UNIT, 1.0, 65)
    with pytest.raises(ValueError):
        wirtinger_psd_check(M_UNIT, 0.0, 8)
    with pytest.raises(ValueError):
        wirtinger_psd_check(M_UNIT, -2.0, 8)


def test_rigidity_identity_multiple_holds():
    rep = toeplitz_rigidity(mm.toeplitz_rule({0: 3.0}, label="3I"), 8)
    assert rep.verdict == "holds"
    assert rep.details["is_identity_multiple"]
    assert rep.details["diagonal_value"] == 3.0
    assert rep.details["offdiag_max"] == 0.0


def test_rigidity_nontrivial_toeplitz_fails():
    rep = toeplitz_rigidity(mm.of_measure(W04), 8)
    assert rep.verdict == "fails"
    assert not rep.details["is_identity_multiple"]
    assert rep.details["offdiag_max"] == pytest.approx(0.4)
    assert rep.witness is not None and rep.witness[0] == 0.0


def test_rigidity_verdict_equals_offdiagonal_test_on_random_toeplitz():
    rng = np.random.default_rng(99)
    for trial in range(20):
        c = {0: complex(rng.uniform(0.5, 2.0))}
        if trial % 2:
            for k in range(1, 4):
                rad = 0.05 * math.sqrt(rng.uniform())
                ang = rng.uniform(0.0, 2.0 * math.pi)
                c[k] = rad * complex(math.cos(ang), math.sin(ang))
        rep = toeplitz_rigidity(mm.toeplitz_rule(c), 8)
        assert (rep.verdict == "holds") == rep.details["is_identity_multiple"]


def test_rigidity_requires_toeplitz():
    with pytest.raises(ValueError):
        toeplitz_rigidity(M_HALF, 8)


def test_dominance_graded_gap_fails_with_high_degree_witness():
    rep = dominance_check(M_HALF, M_UNIT, 1e6, 16)
    assert rep.verdict == "fails"
    # lambda_min = 1e6 / 4^15 - 1 on the diagonal
    assert rep.values[0] == pytest.approx(1e6 / 4.0**15 - 1.0, rel=1e-12)
    w = rep.witness
    assert int(np.argmax(np.abs(w))) == 15
    # witness violation re-checked through measure norms
    lhs = norm_sq(section(M_UNIT, 16), w)
    rhs = 1e6 * norm_sq(section(M_HALF, 16), w)
    assert lhs - rhs == pytest.approx(-rep.values[0], rel=1e-9)


def test_dominance_reverse_direction_holds():
    rep = dominance_check(M_UNIT, M_HALF, 1.0, 16)
    assert rep.verdict == "holds"
    assert rep.witness is None


def test_dominance_validation():
    with pytest.raises(ValueError):
        dominance_check(M_UNIT, M_HALF, 0.0, 4)
    with pytest.raises(ValueError):
        dominance_check(M_UNIT, M_HALF, 1.0, 0)


def test_dominance_holds_implies_settled_sobolev_constant():
    # if M1 <= C M0 entrywise as forms, the Sobolev domination constant
    # (best C with ||q||_{M1}^2 <= C ||q||_{Sobolev}^2) cannot exceed C
    assert dominance_check(M_UNIT, M_HALF, 1.0, 24).verdict == "holds"
    pen = pencil_of_measures(UNIT, HALF)
    seq = norm_sequence(pen, 24, "cond4")
    assert seq.ok()
    assert max(seq.values) <= 1.0 + 1e-10


# ---------------------------------------------------------------------------
# plateau-based bounds
# ---------------------------------------------------------------------------

def test_sobolev_domination_zero_derivative_part():
    rep = sobolev_domination_bound(pencil_of_measures(UNIT, None), 16)
    assert rep.verdict == "holds"
    assert rep.constant == 0.0
    assert rep.n_list[0] == 2 and rep.n_list[-1] == 16


def test_sobolev_domination_frozen_constants():
    rep = sobolev_domination_bound(pencil_of_measures(HALF, UNIT), 32)
    assert rep.verdict == "holds"
    assert rep.constant == pytest.approx(1.0, rel=1e-12)
    atoms = Atomic(((0.3 + 0.0j, 1.0), (-0.2 + 0.4j, 1.0)))
    rep5 = sobolev_domination_bound(pencil_of_measures(UNIT, atoms), 32)
    assert rep5.verdict == "holds"
    assert rep5.constant == pytest.approx(2.0429426345571247, rel=1e-9)
    with pytest.raises(ValueError):
        sobolev_domination_bound(pencil_of_measures(UNIT, None), 1)


def test_sobolev_domination_radius_two_settles_at_two():
    # ratio 4^k / (1 + k^2 4^(k-1)) peaks at k = 1 with value exactly 2
    rep = sobolev_domination_bound(pencil_of_measures(UNIT, CircleLebesgue(0.0, 2.0)), 16)
    assert rep.verdict == "holds"
    assert rep.constant == pytest.approx(2.0, rel=1e-12)


def test_sobolev_domination_inconclusive_paths():
    # window too short for the plateau rule to compare n_max//2 vs n_max
    rep = sobolev_domination_bound(pencil_of_measures(UNIT, UNIT), 3)
    assert rep.verdict == "inconclusive"
    # singular base sections: per-n failures are carried, never raised
    atoms = Atomic(((0.5 + 0.0j, 1.0),))
    rep = sobolev_domination_bound(pencil_of_measures(atoms, None), 8)
    assert rep.verdict == "inconclusive"
    assert rep.details["errors"]


def test_comparability_identical_pencils():
    pen = pencil_of_measures(W04, HALF)
    rep = comparability_bounds(pen, pen, 16)
    assert rep.verdict == "holds"
    assert rep.constant == pytest.approx(1.0, rel=1e-12)
    assert rep.details["lower_constant"] == pytest.approx(1.0, rel=1e-12)


def test_comparability_frozen_two_sided_constants():
    pen_p = pencil_of_measures(HALF, UNIT)
    pen_q = pencil_of_measures(HALF_PLUS_UNIT, UNIT)
    rep = comparability_bounds(pen_p, pen_q, 32)
    assert rep.verdict == "holds"
    # diagonal ratio (4^-k + 1 + k^2) / (4^-k + k^2): max 2 at k = 0,
    # min at the top retained power k = 31
    assert rep.constant == pytest.approx(2.0, rel=1e-12)
    expected_lower = (4.0**-31 + 962.0) / (4.0**-31 + 961.0)
    assert rep.details["lower_constant"] == pytest.approx(expected_lower, rel=1e-12)
    assert all(v >= 1.0 for v in rep.details["lower_values"])
    assert len(rep.details["lower_values"]) == len(rep.n_list)


def test_comparability_requires_window():
    with pytest.raises(ValueError):
        comparability_bounds(pencil_of_measures(UNIT, None), pencil_of_measures(UNIT, None), 1)


# ---------------------------------------------------------------------------
# weighted circles
# ---------------------------------------------------------------------------

def test_weight_grid_extremes():
    gmin, gmax = weight_grid_extremes(((0, 1.0), (1, 0.5), (-1, 0.5)))
    assert gmin == 0.0  # 1 + cos(pi), grid contains pi
    assert gmax == 2.0
    gmin, gmax = weight_grid_extremes(((0, 1.0),))
    assert (gmin, gmax) == (1.0, 1.0)


def test_eigen_limit_estimate_lebesgue_weight():
    assert eigen_limit_estimate(((0, 1.0),), 16) == (1.0, 1.0)


def test_eigen_limit_estimate_brackets_weight_range():
    lam, beta = eigen_limit_estimate(((0, 2.0), (1, 0.5), (-1, 0.5)), 32)
    assert 1.0 - 1e-10 <= lam <= beta <= 3.0 + 1e-10
    assert lam == pytest.approx(1.0045280774269154, rel=1e-9)
    assert beta == pytest.approx(2.9954719225730844, rel=1e-9)


def test_eigen_limit_report_frozen_squeeze():
    rep = eigen_limit_report(((0, 1.0), (1, 0.4), (-1, 0.4)), [4, 8, 16, 32])
    assert rep.verdict == "holds"
    assert rep.details["grid_min"] == pytest.approx(0.2, abs=1e-12)
    assert rep.details["grid_max"] == pytest.approx(1.8, abs=1e-12)
    npt.assert_allclose(
        rep.values, [0.352786, 0.248246, 0.213622, 0.203622], atol=1e-6
    )
    npt.assert_allclose(
        rep.details["beta_values"], [1.647214, 1.751754, 1.786378, 1.796378], atol=1e-6
    )
    assert rep.details["inside_sandwich"] and rep.details["gaps_shrink"]


def test_eigen_limit_report_validation():
    with pytest.raises(ValueError):
        eigen_limit_report(((0, 1.0),), [])
    with pytest.raises(ValueError):
        eigen_limit_report(((0, 1.0),), [4, 4])
    with pytest.raises(ValueError):
        eigen_limit_report(((0, 1.0),), [8, 4])


def test_weighted_circles_report_holds():
    rep = bpe_weighted_circles_report(HALF, [(0.0, 1.0, ((0, 1.0),))], 32)
    assert rep.verdict == "holds"
    assert rep.constant == pytest.approx(math.sqrt(3.25), rel=1e-12)
    assert rep.details["center_gammas"] == [1.0]
    assert rep.details["gamma_min"] == 1.0
    assert rep.details["domination_verdict"] == "holds"
    assert rep.details["mult_op_settled"]


def test_weighted_circles_report_rejects_bad_center():
    with pytest.raises(CenterNotBoundedEvaluation) as info:
        bpe_weighted_circles_report(UNIT, [(1.2 + 0.0j, 0.5, ((0, 1.0),))], 16)
    assert info.value.center == 1.2 + 0.0j


# ---------------------------------------------------------------------------
# report container
# ---------------------------------------------------------------------------

def test_report_to_dict_fixed_order_and_witness_pairs():
    rep = CriterionReport(
        criterion="demo",
        labels={"matrix": "x"},
        n_list=[2, 3],
        values=[0.5, 0.25],
        verdict="holds",
        witness=np.array([1.0 + 2.0j, -0.5j]),
        constant=2.0,
    )
    d = rep.to_dict()
    assert list(d.keys()) == [
        "criterion",
        "labels",
        "n_list",
        "values",
        "verdict",
        "witness",
        "constant",
        "parameters",
        "details",
    ]
    assert d["witness"] == [[1.0, 2.0], [-0.0, -0.5]]
    assert d["n_list"] == [2, 3]
    assert bpe_decide(M_UNIT, 0.5, 8).to_dict()["witness"] is None
