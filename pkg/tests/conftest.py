import numpy as np
import pytest

from zdkit.characters import real_primitive_character
from zdkit.lfunc import model_from_character, zeta_model
from zdkit.zerofind import dirichlet_critical_zeros, zeta_critical_zeros
from zdkit.zerostats import ZeroDataset, poitou_function


@pytest.fixture(scope="session")
def zeta_zd_1000():
    ords = zeta_critical_zeros(1000.0)
    return ZeroDataset("zeta", tuple(ords), T_max=1000.0, source="computed")


@pytest.fixture(scope="session")
def chi_real(request):
    return real_primitive_character(request.param)


def _chi_dataset(q, T):
    chi = real_primitive_character(q)
    ords = dirichlet_critical_zeros(chi, T)
    return ZeroDataset(f"chi_mod_{q}", tuple(ords), T_max=T, source="computed")


@pytest.fixture(scope="session")
def chi_datasets_450():
    """Real primitive character zero datasets to height 450, keyed by q."""
    return {q: _chi_dataset(q, 450.0) for q in (3, 4, 5, 7)}


@pytest.fixture(scope="session")
def chi_models():
    return {q: model_from_character(real_primitive_character(q)) for q in (3, 4, 5, 7)}


@pytest.fixture(scope="session")
def zeta():
    return zeta_model()


@pytest.fixture(scope="session")
def poitou():
    return poitou_function()


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
