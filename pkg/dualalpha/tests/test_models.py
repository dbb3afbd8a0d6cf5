import pytest
from pydantic import ValidationError

from dualalpha.config import Settings
from dualalpha.models.request import BuildParams, RunConfig, Tolerances


def test_radius_means_squared_alpha():
    cfg = RunConfig(points="p.csv", radius=0.5)
    assert cfg.a1 == 0.25
    assert cfg.build_params().a1 == 0.25


@pytest.mark.parametrize(
    "kwargs",
    [
        {},
        {"alpha": 1.0, "radius": 1.0},
        {"radius": 1.0, "weights": "w.txt"},
        {"alpha": 1.0, "prime": 1},
        {"alpha": 1.0, "prime": 9},
        {"alpha": 1.0, "threads": 0},
    ],
)
def test_run_config_rejects(kwargs):
    with pytest.raises(ValidationError):
        RunConfig(points="p.csv", **kwargs)


def test_negative_alpha_allowed_with_weights():
    cfg = RunConfig(points="p.csv", weights="w.txt", alpha=-0.5)
    assert cfg.a1 == -0.5


def test_tolerance_overrides():
    tol = RunConfig(points="p.csv", alpha=1.0, eps_c_rel=1e-6).tolerances()
    assert tol.eps_c(1.0) == pytest.approx(2e-6)
    assert tol.eps_pivot(4.0) == pytest.approx(4e-10)


def test_build_params_bounds():
    with pytest.raises(ValidationError):
        BuildParams(d=-1)
    assert BuildParams(d=0).constraints == "neighbors"


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("DUALALPHA_EPS_C_REL", "1e-7")
    monkeypatch.setenv("DUALALPHA_GRAPH_METHOD", "kdtree")
    s = Settings()
    assert s.EPS_C_REL == 1e-7
    assert s.GRAPH_METHOD == "kdtree"


def test_tolerances_are_frozen():
    with pytest.raises(ValidationError):
        Tolerances().eps_c_rel = 1.0


def test_run_config_carries_prime_and_out():
    cfg = RunConfig(points="p.csv", alpha=1.0, prime=7, out="c.alpha")
    assert cfg.prime == 7
    assert str(cfg.out) == "c.alpha"
    assert RunConfig(points="p.csv", alpha=1.0).prime == Settings().DEFAULT_PRIME
