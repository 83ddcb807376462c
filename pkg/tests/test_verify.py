import json

import pytest

import addcomb.transform as transform
from addcomb.verify import (
    Report,
    run_identity_suite,
    run_inequality_suite,
    run_subgroup_suite,
)


def test_trials_validation():
    with pytest.raises(ValueError):
        run_identity_suite(1, 0)
    with pytest.raises(ValueError):
        run_inequality_suite(1, 0)
    with pytest.raises(ValueError):
        run_subgroup_suite([])


def test_identity_suite_small():
    s = run_identity_suite(seed=7, trials=12)
    assert s.passed
    assert s.n_failed == 0
    # every identity family appears
    names = set(s.stats)
    for expected in (
        "parseval-int",
        "parseval-complex",
        "convolution-energy",
        "inverse-roundtrip",
        "product-formula",
        "nested-convolution-swap",
        "scalar-product",
        "multi-scalar-product",
        "correlation-power-sum",
    ):
        assert expected in names
    assert any(n.startswith("shift-duality") for n in names)
    assert any(n.startswith("shift-energy-total") for n in names)


def test_inequality_suite_small():
    s = run_inequality_suite(seed=7, trials=15)
    assert s.passed
    names = set(s.stats)
    for expected in (
        "shift-quotient-bound-",
        "shift-quotient-bound+",
        "triple-shift-product-bound",
        "katz-koester+",
        "katz-koester-",
        "weighted-shift-bound-k1l1-",
        "weighted-shift-bound-k2l1+",
        "shift-energy-bound-a-k1l1-",
        "shift-energy-bound-b-k1l1+",
        "level-threshold-energy-",
        "level-threshold-count+",
        "kernel-triangle-bound",
        "kernel-cycle-bound-k3",
        "kernel-cycle-bound-k5",
        "top-vector-sum-upper",
        "top-vector-sum-lower",
        "top-vector-sup-kernel",
        "top-vector-sup-factor",
    ):
        assert expected in names, expected
    assert any(n.startswith("holder-shift-bound") for n in names)
    # equality-case zero-slack checks ran
    assert any(n.endswith("-equality") for n in names)


def test_subgroup_suite_small():
    s = run_subgroup_suite([7, 13], seed=3)
    assert s.passed
    assert "golden-energy" in s.stats
    assert "golden-spectrum" in s.stats
    assert "mu-vs-jacobi" in s.stats


def test_reports_are_deterministic():
    r1 = Report([run_identity_suite(5, 9), run_inequality_suite(5, 4),
                 run_subgroup_suite([7], 5)])
    r2 = Report([run_identity_suite(5, 9), run_inequality_suite(5, 4),
                 run_subgroup_suite([7], 5)])
    assert r1.to_json() == r2.to_json()
    r3 = Report([run_identity_suite(6, 9)])
    assert r3.to_json() != r1.to_json()


def test_report_json_parses():
    r = Report([run_identity_suite(1, 3)])
    obj = json.loads(r.to_json())
    assert obj["pass"] is True
    assert obj["suites"][0]["name"] == "identities"
    rows = obj["suites"][0]["rows"]
    assert all({"suite", "eq", "lhs", "rhs", "slack", "pass"} <= set(r) for r in rows)
    # no wall-clock data may leak into the serialized report
    assert "runtime" not in json.dumps(obj)


def test_mutation_is_caught(monkeypatch):
    """An injected off-by-one in correlate must produce a counterexample."""
    import addcomb.verify as verify_mod

    real = transform.correlate

    def broken(f, g):
        out = real(f, g)
        shifted = out.values[1:] + out.values[:1]
        return transform.GroupFn(out.group, shifted)

    monkeypatch.setattr(verify_mod, "correlate", broken)
    s = run_identity_suite(seed=2, trials=3)
    assert not s.passed
    assert s.halted == "product-formula"
    bad = s.stats[s.halted].worst
    assert not bad.passed
    assert "f" in bad.detail and "N" in bad.detail  # replayable instance
