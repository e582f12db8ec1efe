import pytest

from ckgeom import verify


@pytest.mark.parametrize("suite", ["expm", "curvature", "killing", "contraction"])
def test_fast_suites_pass(suite):
    checks = verify.run(suite, seed=7)
    assert checks and all(c.passed for c in checks)


def test_space_subset_limits_checks():
    checks = verify.run("power", seed=7, spaces=["AdS"])
    assert checks and all("AdS" in c.name for c in checks)
    assert all(c.passed for c in checks)


def test_cone_alias():
    names = [c.name for c in verify.run("cone", seed=7)]
    assert "cone points stay on the cone" in names


def test_unknown_suite():
    with pytest.raises(KeyError):
        verify.run("nonsense")


def test_seed_changes_samples_not_verdicts():
    a = verify.run("lambda", seed=7)
    b = verify.run("lambda", seed=8)
    assert [c.name for c in a] == [c.name for c in b]
    assert all(c.passed for c in a + b)
    assert verify.format_report(a) == verify.format_report(verify.run("lambda", seed=7))


def test_report_format():
    checks = [verify.Check("demo", "ok", 1e-12, 1e-9), verify.Check("demo", "bad", 1.0, 1e-9)]
    lines = verify.format_report(checks).splitlines()
    assert lines[0].startswith("PASS") and lines[1].startswith("FAIL")
    assert lines[-1] == "1/2 properties passed"


def test_count_checks_pass_on_exact_zero():
    assert verify.Check("demo", "count", 0.0, 0.0).passed
    assert not verify.Check("demo", "count", 1.0, 0.0).passed
