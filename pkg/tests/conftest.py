import pytest

from src.config.settings import EngineConfig
from src.services import cache as cache_module
from src.services.constructions import alt, cyclic, elementary_abelian_semidirect, frobenius, quaternion, sl2_5_matrices, sym


@pytest.fixture(autouse=True)
def isolated_engine(monkeypatch, tmp_path):
    """No test reads or writes the user's table cache; the closed-form sweep stays small."""
    monkeypatch.setattr(EngineConfig, "CACHE_ENABLED", False)
    monkeypatch.setattr(EngineConfig, "CACHE_DIR", str(tmp_path / "tables"))
    monkeypatch.setattr(cache_module, "_cache", None)
    monkeypatch.setattr(EngineConfig, "CLOSED_FORM_MAX_P", 31)


@pytest.fixture(scope="session")
def sym3():
    return sym(3)


@pytest.fixture(scope="session")
def sym4():
    return sym(4)


@pytest.fixture(scope="session")
def alt4():
    return alt(4)


@pytest.fixture(scope="session")
def alt5():
    return alt(5)


@pytest.fixture(scope="session")
def c9():
    return cyclic(9)


@pytest.fixture(scope="session")
def q8():
    return quaternion(8)


@pytest.fixture(scope="session")
def frob_5_1_2():
    return frobenius(5, 1, 2)


@pytest.fixture(scope="session")
def frob_17_1_4():
    return frobenius(17, 1, 4)


@pytest.fixture(scope="session")
def navarro():
    """C_11^2 x| SL(2,5), order 14520."""
    return elementary_abelian_semidirect(11, 2, sl2_5_matrices(11))
