import numpy as np
import pytest

from swapcool.hamiltonian import Spectrum, build_model
from swapcool.network import (
    build_improved_schedule,
    build_tournament_schedule,
    check_scaling_law,
    coefficients_from_json,
    coefficients_to_json,
    improved_schedule_stats,
    improved_terminal_profile,
    m_alpha,
    predict_reduced_state,
    propagate_coefficients,
    rescale_row,
    schedule_from_json,
    schedule_to_json,
    simulate_network_exact,
    xi_statistic,
)
from swapcool.protocol import expand_short_time, protocol_oracle
from swapcool.quantum import PureState, basis_state, uniform_state


def events_of(sched):
    return list(zip(sched.step.tolist(), sched.lo.tolist(), sched.hi.tolist(),
                    sched.tau_common.tolist(), sched.fresh.astype(bool).tolist()))


def test_improved_m1():
    sched = build_improved_schedule(1)
    assert sched.step_star == 1
    assert events_of(sched) == [(0, 0, 1, 0, False)]
    np.testing.assert_array_equal(sched.terminal_tau, [-1, 1])


def test_improved_m2_hand_trace():
    sched = build_improved_schedule(2)
    assert sched.step_star == 3
    assert events_of(sched) == [
        (0, 0, 1, 0, False), (0, 2, 3, 0, False),
        (1, 0, 2, -1, False), (1, 1, 3, 1, False),
        (2, 1, 2, 0, True),
    ]
    np.testing.assert_array_equal(sched.terminal_tau, [-2, -1, 1, 2])


@pytest.mark.parametrize("m", [1, 2, 3, 5, 8, 16, 33])
def test_improved_terminal_profile_and_validity(m):
    sched = build_improved_schedule(m)
    np.testing.assert_array_equal(sched.terminal_tau, improved_terminal_profile(m))
    sched.validate()


def test_improved_stats_match_full_build():
    for m in (1, 2, 7, 20):
        star, terminal = improved_schedule_stats(m)
        sched = build_improved_schedule(m)
        assert star == sched.step_star
        np.testing.assert_array_equal(terminal, sched.terminal_tau)


def test_tau_matrix_replay():
    sched = build_improved_schedule(3)
    tau = sched.tau_matrix()
    assert tau.shape == (6, sched.step_star + 1)
    np.testing.assert_array_equal(tau[:, 0], 0)
    np.testing.assert_array_equal(tau[:, -1], sched.terminal_tau)
    # every pair agrees on tau at its own step
    for s, lo, hi, t, _ in zip(sched.step, sched.lo, sched.hi, sched.tau_common, sched.fresh):
        assert tau[lo, s] == tau[hi, s] == t


def test_tournament_n1_equals_improved_m1():
    t1 = build_tournament_schedule(1)
    i1 = build_improved_schedule(1)
    assert events_of(t1) == events_of(i1)
    np.testing.assert_array_equal(t1.terminal_tau, i1.terminal_tau)


def test_tournament_n4_structure():
    sched = build_tournament_schedule(4)
    assert sched.n_systems == 16
    assert sched.step_star == 4
    assert sched.terminal_tau[-1] == 4       # final forward branch
    assert not sched.fresh.any()
    assert sched.n_pairs == 8 + 4 + 2 + 1
    sched.validate()


def test_coefficients_m1():
    kmat = propagate_coefficients(build_improved_schedule(1))
    np.testing.assert_array_equal(kmat.k, [[0, 1, 0], [0, 1, 0]])


def test_coefficients_m2_rows():
    kmat = propagate_coefficients(build_improved_schedule(2))
    np.testing.assert_array_equal(kmat.row(4), [0, 0, 1, 1, 0])
    np.testing.assert_array_equal(kmat.row(1), [0, 1, 1, 0, 0])
    np.testing.assert_array_equal(kmat.row(2), [0, 0, 1, 0, 0])   # fresh reset
    np.testing.assert_array_equal(kmat.row(3), [0, 0, 1, 0, 0])


@pytest.mark.parametrize("n", range(1, 9))
def test_tournament_unit_coefficients(n):
    kmat = propagate_coefficients(build_tournament_schedule(n))
    expect = np.zeros(2 * n + 1)
    expect[n:2 * n] = 1.0
    np.testing.assert_array_equal(kmat.k[-1], expect)


def test_coefficients_nonnegative_and_paired_rows_equal():
    sched = build_improved_schedule(6)
    kmat = propagate_coefficients(sched)
    assert np.all(kmat.k >= 0)
    # rows of the last-step pair are equal afterwards (they were averaged)
    last = sched.step == sched.step.max()
    lo, hi = int(sched.lo[last][0]), int(sched.hi[last][0])
    np.testing.assert_array_equal(kmat.k[lo], kmat.k[hi])


def test_coefficients_deterministic():
    a = propagate_coefficients(build_improved_schedule(12)).k
    b = propagate_coefficients(build_improved_schedule(12)).k
    np.testing.assert_array_equal(a, b)


def test_scaling_law_lambda1_zero_deviation():
    kmat = propagate_coefficients(build_improved_schedule(8))
    report = check_scaling_law(kmat, kmat, 1)
    assert report.global_median == 0.0
    assert report.global_max == 0.0


def test_scaling_law_shape_mismatch():
    k8 = propagate_coefficients(build_improved_schedule(8))
    k16 = propagate_coefficients(build_improved_schedule(16))
    with pytest.raises(ValueError):
        check_scaling_law(k8, k16, 3)


def test_scaling_law_eight_cuts_reported():
    k8 = propagate_coefficients(build_improved_schedule(8))
    k16 = propagate_coefficients(build_improved_schedule(16))
    report = check_scaling_law(k8, k16, 2)
    assert len(report.cuts) == 8
    axes = {c["axis"] for c in report.cuts}
    assert axes == {"row", "column"}


def test_rescale_row_identity():
    base = propagate_coefficients(build_improved_schedule(16))
    row = rescale_row(base, 16)
    np.testing.assert_allclose(row, base.k[-1], atol=1e-12)


def test_rescale_row_tournament_invariance():
    # all-ones rows are exactly invariant under the rescaling
    base = propagate_coefficients(build_tournament_schedule(4))
    row = rescale_row(base, 8)
    # K^(2n)[2^n, k'] = 1 on k' in [0, n); rescaled doubles the support and halves nothing
    inner = row[8 + 1: 8 + 7]    # k' in (0, 7): strictly inside the scaled plateau
    np.testing.assert_allclose(inner, 2.0)


def test_xi_eigenstate_zero():
    spec = build_model("b", 8, 1.0)
    phi = basis_state(8, 0)
    row = np.ones(2 * 3 + 1)
    assert xi_statistic(spec, phi, 3, 0.01, row) == pytest.approx(0.0, abs=1e-15)


def test_xi_zero_row():
    spec = build_model("b", 8, 1.0)
    assert xi_statistic(spec, uniform_state(8), 3, 0.01, np.zeros(7)) == 0.0


def test_xi_matches_dense_evaluation():
    from swapcool.protocol import deviation_term
    from swapcool.flow import flow_exact

    spec = build_model("c", 8, 1.0)
    phi = uniform_state(8)
    m, dt = 3, 0.02
    row = np.arange(1.0, 2 * m + 2)
    target = flow_exact(phi, spec, m * dt)
    dense = 0.0
    for col in range(2 * m + 1):
        dev = deviation_term(spec, flow_exact(phi, spec, (col - m) * dt))
        dense += row[col] * float(np.real(
            target.amplitudes.conj() @ dev.matrix @ target.amplitudes))
    assert xi_statistic(spec, phi, m, dt, row) == pytest.approx(dt * dt * dense, abs=1e-13)


def test_m_alpha_model_a():
    spec = build_model("a", 8, 1.0)
    phi = uniform_state(8)
    for alpha in (0, 1, 2, 5):
        assert m_alpha(spec, phi, 0.01, alpha) == 195


def test_m_alpha_nonincreasing_in_alpha():
    spec = build_model("b", 64, 1.0)
    phi = uniform_state(64)
    values = [m_alpha(spec, phi, 0.01, a) for a in range(5)]
    assert values == sorted(values, reverse=True)


def test_m_alpha_zero_when_target_met():
    spec = build_model("d", 32, 1.0)    # ground weight 4/32 at t=0
    phi = uniform_state(32)
    assert m_alpha(spec, phi, 0.01, 4) == 0


def test_predict_reduced_state_m1_matches_expansion():
    spec = build_model("a", 8, 1.0)
    phi = uniform_state(8)
    sched = build_improved_schedule(1)
    kmat = propagate_coefficients(sched)
    pred = predict_reduced_state(sched, 2, kmat, spec, phi, 0.05)
    rho_a_pred, _ = expand_short_time(phi, spec, 0.05)
    np.testing.assert_allclose(pred.matrix, rho_a_pred.matrix, atol=1e-13)


def test_predict_reduced_state_dt0():
    spec = build_model("b", 4, 1.0)
    phi = uniform_state(4)
    sched = build_improved_schedule(2)
    kmat = propagate_coefficients(sched)
    pred = predict_reduced_state(sched, 4, kmat, spec, phi, 0.0)
    np.testing.assert_allclose(pred.matrix, phi.projector(), atol=1e-14)


def test_predict_reduced_state_unit_trace():
    spec = build_model("b", 8, 1.0)
    phi = uniform_state(8)
    sched = build_improved_schedule(2)
    kmat = propagate_coefficients(sched)
    for j in (1, 2, 3, 4):
        pred = predict_reduced_state(sched, j, kmat, spec, phi, 0.02)
        assert np.trace(pred.matrix).real == pytest.approx(1.0, abs=1e-12)


def test_exact_network_m1_equals_protocol_oracle():
    spec = Spectrum(np.array([-1.0, 0.0, 1.0]))
    phi = uniform_state(3)
    sched = build_improved_schedule(1)
    reduced = simulate_network_exact(sched, spec, phi, 0.3)
    oracle = protocol_oracle(phi, spec, 0.3)
    np.testing.assert_allclose(reduced[1].matrix, oracle.rho_a.matrix, atol=1e-12)
    np.testing.assert_allclose(reduced[0].matrix, oracle.rho_b.matrix, atol=1e-12)


def test_exact_network_first_term_quadratic():
    from swapcool.flow import flow_exact

    spec = Spectrum(np.array([-1.0, 0.0]))
    phi = PureState(np.array([2.0, 1.0]) / np.sqrt(5.0))
    sched = build_improved_schedule(2)
    errs = []
    for dt in (0.02, 0.01):
        rho4 = simulate_network_exact(sched, spec, phi, dt)[3].matrix
        target = flow_exact(phi, spec, 2 * dt)
        diff = np.linalg.eigvalsh(rho4 - target.projector())
        errs.append(0.5 * np.abs(diff).sum())
    assert 3.2 < errs[0] / errs[1] < 4.8


def test_exact_network_energy_bookkeeping_on_fresh():
    # the only energy jumps happen at fresh replacements, by E0 - tr(rho H) per member
    spec = Spectrum(np.array([-1.0, 0.0]))
    phi = PureState(np.array([2.0, 1.0]) / np.sqrt(5.0))
    sched = build_improved_schedule(2)
    reduced, trace = simulate_network_exact(sched, spec, phi, 0.05,
                                            return_energy_trace=True)
    e0 = float(np.real(np.abs(phi.amplitudes) ** 2 @ spec.eigenvalues))
    for rec in trace:
        assert rec["total_after"] == pytest.approx(rec["total_after_fresh"], abs=1e-10)
        if rec["fresh"]:
            jump = rec["total_after_fresh"] - rec["total_before"]
            expect = sum(e0 - e for e in rec["replaced_energies"])
            assert jump == pytest.approx(expect, abs=1e-10)
        else:
            assert rec["total_after_fresh"] == pytest.approx(rec["total_before"], abs=1e-12)
    assert sum(r["fresh"] for r in trace) == 1
    assert reduced[3].min_eigenvalue() > -1e-10


def test_exact_network_rejects_large_joint():
    spec = build_model("a", 8, 1.0)
    sched = build_improved_schedule(2)
    with pytest.raises(ValueError):
        simulate_network_exact(sched, spec, uniform_state(8), 0.01)


def test_schedule_json_round_trip():
    sched = build_improved_schedule(3)
    payload = schedule_to_json(sched)
    assert "tau" in payload
    back = schedule_from_json(payload)
    assert events_of(back) == events_of(sched)
    assert back.step_star == sched.step_star
    np.testing.assert_array_equal(back.terminal_tau, sched.terminal_tau)


def test_coefficients_json_round_trip():
    kmat = propagate_coefficients(build_improved_schedule(4))
    back = coefficients_from_json(coefficients_to_json(kmat))
    assert back.m == kmat.m
    np.testing.assert_array_equal(back.k, kmat.k)


def test_coefficient_csv_header():
    kmat = propagate_coefficients(build_improved_schedule(1))
    lines = kmat.to_csv().strip().split("\n")
    assert lines[0] == "j,k1,k2,k3"
    assert lines[1].startswith("1,")


def test_xi_result_bundle():
    from swapcool.network import xi_result

    spec = build_model("a", 8, 1.0)
    phi = uniform_state(8)
    base = propagate_coefficients(build_improved_schedule(8))
    point = xi_result(spec, phi, 0.01, 2, base)
    assert point.dim == 8
    assert point.m_alpha == 195
    assert np.isfinite(point.xi)
    spec_d = build_model("d", 32, 1.0)
    zero = xi_result(spec_d, uniform_state(32), 0.01, 4, base)
    assert zero.m_alpha == 0 and zero.xi == 0.0


def test_improved_validity_at_scale():
    # replay-check the update rules on a production-sized schedule
    sched = build_improved_schedule(256)
    sched.validate()
    assert sched.step_star == 39287
    assert 0.4 <= sched.step_star / 256 ** 2 <= 1.0
