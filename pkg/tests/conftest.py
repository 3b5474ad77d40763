import pytest
from hypothesis import settings as _hyp_settings

from painleve1 import IntegratorConfig, PoleData, integrate
from painleve1.harness import run_compare, zero_ic_preset, zero_pole_preset

_hyp_settings.register_profile("deterministic", derandomize=True)
_hyp_settings.load_profile("deterministic")


@pytest.fixture(scope="session")
def zero_ic_report():
    return run_compare(zero_ic_preset(), -60.0, IntegratorConfig())


@pytest.fixture(scope="session")
def zero_pole_report():
    return run_compare(zero_pole_preset(), -60.0, IntegratorConfig())


@pytest.fixture(scope="session")
def zero_pole_traj_deep():
    return integrate(PoleData(0.0, 0.0), -90.0, IntegratorConfig())
