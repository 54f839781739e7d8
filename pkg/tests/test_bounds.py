import math

import pytest

from encbound import bounds
from encbound.entropy import binary_entropy


def test_runs_threshold_examples():
    tb = bounds.runs_threshold(8, 3)
    assert tb.threshold == 6 and tb.probability == pytest.approx(1 / 8)
    tb = bounds.runs_threshold(2, 0)
    assert tb.threshold == 1 and tb.probability == 1.0
    tb = bounds.runs_threshold(1024, 10)
    assert tb.threshold == 20 and tb.probability == pytest.approx(2**-10)
    assert not tb.asymptotic


def test_ramsey_threshold_examples():
    assert bounds.ramsey_threshold(16, 2).threshold == 14
    assert bounds.ramsey_threshold(16, 2).probability == pytest.approx(0.25)
    assert bounds.ramsey_threshold(3, 1).threshold == 7
    with pytest.raises(ValueError):
        bounds.ramsey_threshold(2, 1)


def test_ramsey_intro_variant():
    tb = bounds.ramsey_intro_variant(16)
    assert tb.threshold == 16  # ceil(4 log 16)
    assert tb.probability == pytest.approx(16.0 ** -math.log2(16))


def test_urns_threshold_examples():
    tb = bounds.urns_threshold(1024, 3)
    assert tb.threshold == 9
    assert 9 * math.log2(9 / math.e) >= 13
    assert 8 * math.log2(8 / math.e) < 13


def test_urns_threshold_monotone_in_s():
    prev = 0
    for s in range(0, 30):
        t = bounds.urns_threshold(100, s).threshold
        assert t >= prev
        prev = t


def test_linear_probing_threshold_example():
    tb = bounds.linear_probing_threshold(4, 2)
    assert tb.threshold == 18
    lhs = 17 * math.log2(4 / math.e) - math.log2(18) - 3
    assert lhs >= 2 > 16 * math.log2(4 / math.e) - math.log2(17) - 3
    with pytest.raises(ValueError):
        bounds.linear_probing_threshold(math.e, 1)


def test_linear_probing_boundary_still_finite():
    tb = bounds.linear_probing_threshold(math.e + 0.01, 0)
    assert tb.threshold > 100  # large but finite near the validity edge


def test_linear_probing_series_converges():
    v4 = bounds.linear_probing_expected_search(4.0)
    assert v4 > 1
    assert bounds.linear_probing_expected_search(10.0) < v4
    with pytest.raises(ValueError):
        bounds.linear_probing_expected_search(2.0)


def test_cuckoo_tails_shape():
    tb = bounds.cuckoo_tails(1024, 10)
    assert tb.threshold == pytest.approx(10 + 10 + 4.0)
    assert tb.probability == pytest.approx(2**-10)
    assert tb.asymptotic
    assert tb.params["failure_bound"] == pytest.approx(1 / 1024)


def test_two_choice_thresholds_examples():
    tb = bounds.two_choice_thresholds(2**16, 16, 16)
    assert tb.params["component_threshold"] == pytest.approx(32.0)
    assert tb.params["maxload_threshold"] == 7  # ceil(log log 2^16) + 3
    assert tb.asymptotic
    with pytest.raises(ValueError):
        bounds.two_choice_thresholds(2**16, 8, 16)


def test_expander_constants():
    beta = 1.5 * math.log2(1.5) + 2.5 * math.log2(math.e)
    assert bounds.EXPANDER_BETA == pytest.approx(beta)
    assert bounds.EXPANDER_BETA == pytest.approx(4.48418, abs=1e-4)
    assert bounds.expander_alpha_threshold() == pytest.approx(0.002, abs=5e-4)


def test_expander_savings_shape():
    n = 2**20
    s1 = bounds.expander_savings(n, 1).savings_s
    assert s1 == pytest.approx(0.5 * math.log2(n) - bounds.EXPANDER_BETA)
    tb = bounds.expander_savings(100, 4)
    assert tb.asymptotic and tb.clamped  # negative savings at small n


def test_inversions_tail_examples():
    tb = bounds.inversions_tail(100, 0.05)
    exponent = 100 * math.log2(0.05 * math.e**2)
    assert tb.params["exponent"] == pytest.approx(exponent)
    assert exponent == pytest.approx(-143.7, abs=0.5)
    with pytest.raises(ValueError):
        bounds.inversions_tail(100, 1 / math.e**2)


def test_records_tail_examples():
    assert bounds.records_tail(1024, 3).params["rate"] == pytest.approx(
        3 * (1 - binary_entropy(1 / 3))
    )
    assert bounds.records_tail(1024, 3).params["rate"] == pytest.approx(0.245112, abs=1e-5)
    assert bounds.records_tail(1024, 8).params["rate"] == pytest.approx(3.65, abs=2e-2)
    with pytest.raises(ValueError):
        bounds.records_tail(1024, 2)


def test_bst_height_constant_check():
    lhs, ok = bounds.bst_height_constant_check(9.943483)
    assert ok and lhs > 2
    lhs, ok = bounds.bst_height_constant_check(9.9)
    assert not ok and lhs < 2
    with pytest.raises(ValueError):
        bounds.bst_height_constant_check(4.0)


def test_bst_check_monotone_in_c():
    prev = -math.inf
    for c in [5.0, 6.0, 8.0, 9.9, 9.943483, 12.0, 50.0]:
        lhs, _ = bounds.bst_height_constant_check(c)
        assert lhs > prev
        prev = lhs


def test_chernoff_basic_examples():
    tb = bounds.chernoff_basic(100, 0.2)
    assert tb.probability == pytest.approx(math.exp(-2), abs=1e-12)
    assert bounds.chernoff_basic(100, 0.0).probability == 1.0


def test_chernoff_kl_examples():
    tb = bounds.chernoff_kl(20, 0.5, 0.2)
    assert tb.probability == pytest.approx(0.19286, abs=1e-4)
    assert bounds.chernoff_kl(20, 0.5, 0.0).probability == 1.0
    with pytest.raises(ValueError):
        bounds.chernoff_kl(20, 0.5, 0.6)


def test_chernoff_kl_dominates_basic_at_half():
    for n in (10, 50, 200):
        for i in range(1, 50):
            eps = i / 100
            kl = bounds.chernoff_kl(n, 0.5, eps).probability
            basic = bounds.chernoff_basic(n, eps).probability
            assert kl <= basic + 1e-12


def test_percolation_examples():
    tb = bounds.percolation_cycle_tail(400, 0.25, 4)
    assert tb.threshold == pytest.approx(30.46, abs=0.01)
    assert tb.probability == pytest.approx(1 / 16)
    tb = bounds.percolation_cycle_tail(64, 0.2, 6)
    assert tb.threshold == pytest.approx(12 / math.log2(5 / 3))
    with pytest.raises(ValueError):
        bounds.percolation_cycle_tail(65, 0.25, 4)  # not a perfect square
    with pytest.raises(ValueError):
        bounds.percolation_cycle_tail(64, 0.4, 4)


def test_triangle_bounds_examples():
    tb = bounds.triangle_bounds(200, 0.2)
    assert tb.probability == pytest.approx(0.008)
    assert tb.params["lower_no_triangle"] == pytest.approx(0.992)
    assert bounds.triangle_bounds(200, 1.5).params["lower_no_triangle"] == 0.0


def test_triangle_expected_count():
    for n in (100, 1000):
        for c in (0.5, 2.0):
            got = bounds.triangle_expected_count(n, c)
            assert got == pytest.approx(c, rel=5 / n)


def test_moser_tail_examples():
    tb = bounds.moser_tail(8, 10)
    assert tb.threshold == 34 and tb.probability == pytest.approx(2**-10)
    tb = bounds.moser_tail(1, 0)
    assert tb.threshold == 0 and tb.probability == 1.0


def test_moser_degree_validity():
    assert bounds.moser_degree_valid(8, 7)
    assert not bounds.moser_degree_valid(8, 32)
    assert not bounds.moser_degree_valid(3, 1)


def test_thresholds_monotone_in_s():
    for fn, args in [
        (bounds.runs_threshold, (64,)),
        (bounds.ramsey_threshold, (16,)),
        (bounds.urns_threshold, (64,)),
        (bounds.linear_probing_threshold, (4.0,)),
    ]:
        prev = 0
        for s in range(1, 20):
            t = fn(*args, s).threshold
            assert t >= prev
            prev = t


def test_bounds_always_in_unit_interval():
    cases = [
        bounds.runs_threshold(2, 0),
        bounds.expander_savings(10, 4),
        bounds.inversions_tail(3, 0.13),
        bounds.triangle_bounds(10, 2.0),
        bounds.moser_tail(1, 0),
    ]
    for tb in cases:
        assert 0 <= tb.probability <= 1
