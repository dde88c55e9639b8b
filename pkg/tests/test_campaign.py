import json

import pytest

from ou_kit.campaign import (
    CHECK_GROUPS,
    TRIALS,
    CampaignConfig,
    ConfigError,
    default_jobs,
    replay,
    run_campaign,
)
from ou_kit.io import dumps_stable


def test_factorization_campaign_int():
    report = run_campaign(CampaignConfig(rings=["int"], m_values=[2], n_values=[1], trials=100, seed=1, checks=["theorem32"]))
    assert report.passed
    assert all(r.trials == 100 for r in report.results)


def test_axioms_campaign_degenerate_config():
    report = run_campaign(CampaignConfig(rings=["mod:6"], m_values=[1], n_values=[0], trials=10, seed=1, checks=["axioms"]))
    assert report.passed and report.failure_count == 0


def test_every_check_is_registered():
    for group, checks in CHECK_GROUPS.items():
        for check in checks:
            assert check in TRIALS and check.startswith(group + "/")


def test_fault_injection_is_caught_and_replays():
    cfg = CampaignConfig(rings=["int"], m_values=[1, 2], n_values=[1], trials=5, seed=3, checks=["theta-eta", "forms"], fault="psi-sign")
    report = run_campaign(cfg)
    assert not report.passed
    records = [rec for r in report.results for rec in r.failures]
    assert records
    for rec in records:
        # records survive a JSON round trip and reproduce on their own
        rec = json.loads(json.dumps(rec))
        status, payload = replay(rec)
        assert status == "fail"
        assert payload["detail"] == rec["detail"]


def test_fault_is_removed_afterwards():
    run_campaign(CampaignConfig(rings=["int"], m_values=[1], n_values=[0], trials=2, checks=["forms"], fault="psi-sign"))
    clean = run_campaign(CampaignConfig(rings=["int"], m_values=[1], n_values=[0], trials=2, checks=["forms"]))
    assert clean.passed


def test_replay_of_passing_trial():
    status, _ = replay({"check": "theorem32/factorize", "ring": "int", "m": 2, "n": 1, "seed": 1, "trial": 0})
    assert status == "pass"


@pytest.mark.parametrize("record", [{}, {"check": "nope", "ring": "int", "m": 1, "n": 0, "seed": 0, "trial": 0}])
def test_replay_rejects_bad_records(record):
    with pytest.raises(ConfigError):
        replay(record)


@pytest.mark.parametrize(
    "kwargs",
    [{"trials": 0}, {"jobs": 0}, {"m_values": [0]}, {"n_values": [-1]}, {"checks": ["bogus"]}, {"fault": "bogus"}],
)
def test_invalid_configs(kwargs):
    with pytest.raises(ConfigError):
        run_campaign(CampaignConfig(**kwargs))


def test_invalid_ring():
    with pytest.raises(ValueError):
        run_campaign(CampaignConfig(rings=["zz"]))


def test_body_independent_of_jobs():
    kw = dict(rings=["int", "twisted"], m_values=[1, 2], n_values=[0, 2], trials=7, seed=9)
    a = run_campaign(CampaignConfig(jobs=1, **kw))
    b = run_campaign(CampaignConfig(jobs=3, **kw))
    assert dumps_stable(a.body()) == dumps_stable(b.body())


def test_report_layout():
    report = run_campaign(CampaignConfig(rings=["int"], m_values=[1], n_values=[0], trials=3, checks=["symplectic"]))
    doc = report.to_dict()
    assert doc["kind"] == "report" and doc["format_version"] == 1
    assert "timing" in doc and "wall_time" not in json.dumps(doc["body"])
    assert [c["config"]["size"] for c in doc["body"]["checks"]] == [4, 6]


def test_diagnostics_record_observations():
    report = run_campaign(CampaignConfig(rings=["int"], m_values=[1], n_values=[2], trials=5, checks=["diagnostics"]))
    obs = {r.name: r.observations for r in report.results}
    assert obs["diagnostics/L-unitarity"] == {"L_unitary": 5, "L_star_unitary": 5}
    assert report.passed


def test_default_jobs_env(monkeypatch):
    monkeypatch.setenv("OU_KIT_JOBS", "4")
    assert default_jobs() == 4
    monkeypatch.setenv("OU_KIT_JOBS", "junk")
    assert default_jobs() == 1
    monkeypatch.delenv("OU_KIT_JOBS")
    assert default_jobs() == 1
