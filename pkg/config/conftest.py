import pytest
import os
import shutil
import tempfile
import sys

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from qalgebra import build_algebra, homogeneous_config


@pytest.fixture(scope="session")
def alg22():
    """a = c = 2 over F_5: the exterior algebra on two generators (q = -1 = 4)"""
    return build_algebra(homogeneous_config(5, 2, 2))


@pytest.fixture(scope="session")
def alg23():
    """a = 2, c = 3 over F_5: exterior algebra on three generators"""
    return build_algebra(homogeneous_config(5, 3, 2))


@pytest.fixture(scope="session")
def alg32():
    """a = 3, c = 2 over F_7 with q = 2 of order 3"""
    return build_algebra(homogeneous_config(7, 2, 3))


@pytest.fixture
def qci_env():
    """Set QCI_* variables for one test and restore them afterwards"""
    original_env = {}
    test_env = {
        'QCI_SEED': '7',
        'QCI_RADIUS': '3',
        'QCI_ISO_TRIALS': '12',
    }

    for key, value in test_env.items():
        original_env[key] = os.environ.get(key)
        os.environ[key] = value

    yield test_env

    # Restore original environment
    for key, value in original_env.items():
        if value is None:
            os.environ.pop(key, None)
        else:
            os.environ[key] = value


@pytest.fixture
def clean_env():
    """Remove QCI_* variables for one test"""
    saved = {k: v for k, v in os.environ.items() if k.startswith('QCI_')}
    for k in saved:
        os.environ.pop(k)
    yield
    os.environ.update(saved)


@pytest.fixture
def temp_cache_dir():
    """Temporary directory for the fragment cache"""
    path = tempfile.mkdtemp(prefix='qci-cache-')
    yield path
    shutil.rmtree(path, ignore_errors=True)

