import math

import numpy as np
import pytest

import qdirac


def small_trunc(n_max=6, k_max=96):
    return qdirac.TruncationSpec(n_max=n_max, k_max=k_max, k_tail=4096, margin=8)


def test_q_weight_values():
    assert qdirac.q_weight(0.25, 0) == pytest.approx(math.sqrt(0.75), abs=1e-15)
    family = qdirac.q_weight_family(0.0)
    assert family.c_plus(3, 5) == 1.0
    assert family.c_minus(2, 7) == 1.0


def test_invalid_q_raises_with_code():
    with pytest.raises(qdirac.QdiracError) as info:
        qdirac.q_weight_family(1.0)
    assert info.value.code == "InvalidQ"


def test_validate_matches_closed_form():
    report = qdirac.validate(qdirac.q_weight_family(0.25), small_trunc(20, 200))
    assert report.passed
    for n, s in enumerate(report.s):
        assert s == pytest.approx(0.25 ** (n / 2), rel=1e-10)
    assert report.kappa >= 0.75 - 1e-12


def test_constant_family_fails_divergent():
    report = qdirac.validate(qdirac.constant_family(), small_trunc(4, 64))
    assert not report.passed
    assert report.conditions["s"]["error"] == "DivergentSum"


def test_inverse_product_telescopes():
    trunc = small_trunc()
    value = 1.0 / qdirac.finite_tail_product(qdirac.q_weight_family(0.25), "plus", 1, 0, trunc)
    assert value == pytest.approx(1.0 / math.sqrt(0.75), rel=1e-12)


def test_solve_A_round_trip():
    family = qdirac.q_weight_family(0.5)
    g = np.random.default_rng(0).uniform(-1, 1, 41)
    f = qdirac.solve_A(family, 2, g)
    a = qdirac.build_A(family, 2, 40)
    b = np.array([family.b(2, k) for k in range(41)])
    assert np.max(np.abs(a @ f - g) / b) < 1e-13


def test_kernel_and_identities():
    family = qdirac.q_weight_family(0.5)
    trunc = small_trunc()
    op = qdirac.GluedDirac(family, trunc)
    cert = op.certify_kernel()
    assert cert["total_nullity"] == 1
    assert cert["nullity"][0] == 1
    report = qdirac.verify_identities(qdirac.ParametrixSet(family, trunc), op, samples=3, seed=1)
    assert report["dq_pass"] and report["qd_pass"]
    assert report["dq_max_residual"] <= 1e-10


def test_t1_rank_one_singular_value():
    pset = qdirac.ParametrixSet(qdirac.q_weight_family(0.25), small_trunc())
    assert pset.top_singular_value("T1", 2) == pytest.approx(pset.hs_norm("T1", 2), rel=1e-10)
    m = pset.matrix("T1", 2)
    assert np.linalg.matrix_rank(m, tol=1e-12 * np.abs(m).max()) == 1


def test_hs_bounds():
    family = qdirac.q_weight_family(0.5)
    report = qdirac.validate(family, small_trunc(11, 128))
    rows = qdirac.hs_norms(qdirac.ParametrixSet(family, small_trunc(10, 128)), report, 1, 10)
    assert len(rows) == 30
    assert all(row["pass"] for row in rows)


def test_classical():
    rows = qdirac.classical_hs_norms(1, 4, 128)
    assert all(row["pass"] for row in rows)
    t3 = [row for row in rows if row["kind"] == "T3"]
    for row in t3:
        assert row["hs_sq"] == pytest.approx(1 / (2 * row["n"]), rel=1e-7)
    assert qdirac.classical_kernel_dimension(128, 4) == 1
    residual, gluing = qdirac.classical_parametrix_residual(128, 4, 3)
    assert residual < 1e-6 and gluing < 1e-8


def test_run_command_is_deterministic():
    text = "truncation:\n  n_max: 6\n  k_max: 96\nsamples: 2\n"
    first = qdirac.run("verify", text)
    second = qdirac.run("verify", text)
    assert first == second
    assert first[0]
    assert "verify.yaml" in first[2]


def test_bad_config_raises():
    with pytest.raises(qdirac.QdiracError) as info:
        qdirac.ExperimentConfig.parse("nonsense_key: 1\n")
    assert info.value.code == "ConfigParse"
