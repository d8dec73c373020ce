from bosonic_moments import verify


def test_run_all_passes_with_small_budget():
    results = verify.run_all(
        max_modes=3, max_photons=3, seed=2024, mc_samples=2000, skip_mc=False
    )
    names = [r.name for r in results]
    assert names == [
        "combinatorics",
        "interferometer",
        "ladder",
        "irreps",
        "moments",
        "anticoncentration",
        "moments-mc",
        "anticoncentration-mc",
    ]
    for res in results:
        assert res.passed, (res.name, res.failures[:3])
        assert res.checks > 0


def test_run_all_skip_mc():
    results = verify.run_all(max_modes=3, max_photons=2, skip_mc=True)
    assert all(not r.stochastic for r in results)
    assert len(results) == 6


def test_suite_result_records_first_failure():
    res = verify.SuiteResult("demo")
    res.check(True, "fine")
    res.check(False, "broken case x=3")
    assert not res.passed
    assert res.failures == ["broken case x=3"]
    assert res.checks == 2
