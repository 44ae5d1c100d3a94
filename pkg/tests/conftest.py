import pytest

from ntlab.classnumber import build_hurwitz_table
from ntlab.ffield import make_field_ctx


@pytest.fixture(scope="session")
def htable():
    # one shared table covering 4p for p <= 2000 and the odd-index sweeps
    return build_hurwitz_table(8000)


@pytest.fixture(scope="session")
def ctx7():
    return make_field_ctx(7)


@pytest.fixture(scope="session")
def ctx11():
    return make_field_ctx(11)


@pytest.fixture(scope="session")
def ctx13():
    return make_field_ctx(13)
