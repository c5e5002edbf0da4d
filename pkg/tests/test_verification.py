import pytest
from mpmath import mpf

from modules import verification
from modules.errors import OracleNonConvergence
from modules.integral_expansion import SConstants
from modules.verification import CHECK_GROUPS, OracleSettings, run_group, verify_all


@pytest.mark.parametrize("name", ["constants", "polylog", "d_table", "coeff_expansion"])
def test_cheap_groups_pass(name):
    records = run_group(name)
    assert records
    assert all(r.passed for r in records), [r.name for r in records if not r.passed]


def test_group_error_becomes_failed_record(monkeypatch):
    def broken():
        raise OracleNonConvergence("did not settle")

    monkeypatch.setitem(CHECK_GROUPS, "broken", broken)
    records = run_group("broken")
    assert len(records) == 1
    assert records[0].name == "broken group"
    assert not records[0].passed


def test_verify_all_keeps_group_order():
    records = verify_all(60, jobs=1, groups=["d_table", "constants"])
    names = [r.name for r in records]
    assert names.index("zeta(2) = pi^2/6") > 0
    assert len(records) == len(run_group("d_table")) + len(run_group("constants"))


@pytest.mark.slow
def test_verify_all_in_worker_processes():
    records = verify_all(60, jobs=2)
    assert all(r.passed for r in records), [r.name for r in records if not r.passed]
    assert len({r.name for r in records}) > len(verification.CHECK_GROUPS)


def test_oracle_budget_reaches_euler_sums(monkeypatch):
    seen = []

    def fake_catalog(terms, levels):
        seen.append(("catalog", terms, levels))
        return []

    def fake_direct(p, q, N=None, levels=None, **kwargs):
        seen.append(((p, q), N, levels))
        return mpf(0)

    monkeypatch.setattr(verification, "euler_sum_catalog", fake_catalog)
    monkeypatch.setattr(verification, "s_pm_direct", fake_direct)
    run_group("euler_sums", OracleSettings(1234, 3))
    assert ("catalog", 1234, 3) in seen
    assert ((4, 3), 1234, 3) in seen


def test_oracle_budget_reaches_s_constants(monkeypatch):
    seen = {}

    def fake_constants(**kwargs):
        seen.update(kwargs)
        return SConstants({})

    monkeypatch.setattr(verification, "s_constants", fake_constants)
    assert run_group("s_constants", OracleSettings(4321, 5)) == []
    assert seen == {"oracle_terms": 4321, "oracle_levels": 5}
