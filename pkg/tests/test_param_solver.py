import math

import pytest

from config import LabSettings
from errors import ParameterWindowError
from param_solver import (
    RELAXED,
    STRICT,
    admissibility_R,
    audit_inequalities,
    check_a,
    power_ratio_f,
    parameter_window,
    sigma_limit,
    solve_x0,
    solve_x1,
    trace_sum_truncation,
)
from zeta_engine import zeta_profile


def test_k4_thresholds(k4):
    profile = zeta_profile(k4)
    x0 = solve_x0(k4)
    x1 = solve_x1(k4)
    assert x0 == pytest.approx(0.28, abs=0.02)
    assert x1 == pytest.approx(0.38, abs=0.02)
    assert abs(profile.h(x0)) <= 1e-10
    assert abs(profile.zeta(x1) - 2.0) <= 1e-10
    assert 0 < x0 < profile.radius
    assert 0 < x1 < profile.radius


def test_thresholds_on_suite(suite_graphs):
    for name, g in suite_graphs:
        profile = zeta_profile(g)
        x0, x1 = solve_x0(g), solve_x1(g)
        assert 0 < x0 < profile.radius, name
        assert 0 < x1 < profile.radius, name
        assert abs(profile.h(x0)) <= 1e-10, name
        assert abs(profile.zeta(x1) - 2.0) <= 1e-10, name


def test_coarser_tolerance_still_certifies(billiard):
    lab = LabSettings(root_tol=1e-6)
    x0 = solve_x0(billiard, lab)
    assert abs(zeta_profile(billiard).h(x0)) <= lab.certificate_tol


def test_relaxed_window_defaults(k4):
    window = parameter_window(k4, RELAXED)
    assert window.a_low == 0.0
    assert window.a_high == window.x0
    assert window.a_default == pytest.approx(window.x0 / 2)
    assert 0 < window.l_sigma <= 1
    assert window.sigma_default == pytest.approx(window.l_sigma / 2)
    assert window.inv_2m_lambda == pytest.approx(1 / 24)


def test_strict_window_empty_for_k4(k4):
    window = parameter_window(k4, STRICT)
    assert not window.strict_window_nonempty
    assert window.a_default is None
    assert window.l_sigma is None
    assert window.sigma_default is None
    assert not window.chain_holds


def test_window_to_dict_keys(billiard):
    document = parameter_window(billiard).to_dict()
    assert document["mode"] == "relaxed"
    assert document["a_range"] == [0.0, document["x0"]]
    assert set(document) >= {"lambda", "radius", "x0", "x1", "l_sigma", "sigma_default"}


def test_unknown_mode_rejected(k4):
    with pytest.raises(ValueError):
        parameter_window(k4, "loose")


def test_check_a():
    check_a(0.1, 0.3, 0.4, RELAXED)
    with pytest.raises(ParameterWindowError):
        check_a(0.3, 0.3, 0.4, RELAXED)
    with pytest.raises(ParameterWindowError):
        check_a(0.0, 0.3, 0.4, RELAXED)
    with pytest.raises(ParameterWindowError, match="empty"):
        check_a(0.35, 0.3, 0.4, STRICT)
    check_a(0.35, 0.4, 0.3, STRICT)


def test_sigma_limit_rejects_a_outside_window(k4):
    x0 = solve_x0(k4)
    with pytest.raises(ParameterWindowError):
        sigma_limit(k4, x0 * 1.01)


def test_sigma_limit_in_unit_interval(suite_graphs):
    for name, g in suite_graphs[:6]:
        limit = sigma_limit(g, solve_x0(g) / 2)
        assert 0 < limit <= 1, name


def test_R_at_zero_exceeds_one(k4):
    a = solve_x0(k4) / 2
    sigma = sigma_limit(k4, a) / 2
    # zeta'(0) = 0 for a simple graph, so R(0) = 1 / (1 - a zeta'(a))
    _, first, _ = zeta_profile(k4).derivatives(a)
    assert admissibility_R(k4, a, sigma, 0.0) == pytest.approx(1 / (1 - a * first))
    assert admissibility_R(k4, a, sigma, 0.0) > 1


def test_R_positive_inside_window(billiard):
    a = solve_x0(billiard) / 2
    sigma = sigma_limit(billiard, a) / 2
    for x in (0.1, 0.25, 0.5, 0.75, 1.0):
        assert admissibility_R(billiard, a, sigma, x) > 0


def test_R_sigma_outside_window(k4):
    a = solve_x0(k4) / 2
    limit = sigma_limit(k4, a)
    with pytest.raises(ParameterWindowError):
        admissibility_R(k4, a, limit * 1.5, 0.5)
    assert math.isfinite(admissibility_R(k4, a, limit * 1.5, 0.5, enforce=False))


def test_R_rejects_x_outside_unit_interval(k4):
    with pytest.raises(ParameterWindowError):
        admissibility_R(k4, 0.1, 0.1, 1.5)


def test_power_ratio_f_decreasing():
    values = [power_ratio_f(x) for x in (2.0, 4.0, 8.0, 16.0)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_trace_sum_truncation_meets_tolerance():
    K = trace_sum_truncation(6, 1e-12)
    assert 12 / (12 ** K * 11) < 1e-12
    assert 12 / (12 ** (K - 1) * 11) >= 1e-12


def test_k4_audit(k4):
    report = audit_inequalities(k4)
    entries = {entry.claim_id: entry for entry in report.entries}
    assert (report.n, report.m) == (4, 6)
    assert entries["lambda_lower_bound"].holds
    assert entries["lambda_upper_bound"].holds
    assert entries["line_graph_edge_count"].holds
    assert entries["hashimoto_irreducible"].holds
    assert entries["h_monotone_decreasing"].holds
    assert entries["zeta_grows_at_radius"].holds
    assert entries["f_monotone_decreasing"].holds
    assert not entries["hashimoto_symmetric"].holds
    assert not entries["strict_window_nonempty"].holds
    assert not entries["zeta_above_two_at_inverse_2m_lambda"].holds
    # tr(T^2) = 0 for a simple graph
    assert not entries["even_trace_at_least_lambda_power_k2"].holds
    assert "even_trace_at_least_lambda_power_k2" in report.failed()


def test_audit_reports_every_claim(billiard):
    ids = [entry.claim_id for entry in audit_inequalities(billiard).entries]
    assert len(ids) == len(set(ids))
    for claim in ("zeta_upper_bound_at_inverse_2m_lambda", "trace_sum_at_inverse_2m_lambda",
                  "h_positive_at_inverse_2m_lambda", "ordering_chain", "x1_below_inverse_2m_lambda",
                  "inverse_2m_lambda_below_x0", "even_trace_at_least_lambda_power_k8"):
        assert claim in ids


def test_audit_entries_carry_paper_locations(k4, billiard):
    for g in (k4, billiard):
        entries = {entry.claim_id: entry for entry in audit_inequalities(g).entries}
        assert all(entry.paper_location for entry in entries.values())
        assert entries["zeta_upper_bound_at_inverse_2m_lambda"].paper_location == "Lemma 6"
        assert entries["zeta_above_two_at_inverse_2m_lambda"].paper_location == "Lemma 10"
        assert entries["ordering_chain"].paper_location == "Eq. (13)"
        assert entries["even_trace_at_least_lambda_power_k4"].paper_location == "Lemma 3 (proof)"
        locations = {entry.paper_location for entry in entries.values()}
        for lemma in range(2, 11):
            if lemma == 4:
                continue
            assert any(loc.startswith(f"Lemma {lemma}") for loc in locations), lemma


@pytest.mark.parametrize("graph", ["k4", "billiard", "k23"])
def test_thresholds_invariant_under_relabelling(graph, request):
    g = request.getfixturevalue(graph)
    names = list(g.vertices)
    renamed = g.relabel(dict(zip(names, [f"v{i}" for i in reversed(range(len(names)))])))
    assert solve_x0(renamed) == pytest.approx(solve_x0(g), abs=1e-12)
    assert solve_x1(renamed) == pytest.approx(solve_x1(g), abs=1e-12)
