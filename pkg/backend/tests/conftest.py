import pytest

from app.config import get_settings


@pytest.fixture(autouse=True)
def fresh_settings():
    """Environment overrides made in a test must not leak into the next one."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
