import pytest

from sumprod.field import make_field

# fields named in the acceptance criteria
SMALL_FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3)]


@pytest.fixture(params=SMALL_FIELDS, ids=lambda pl: f"F{pl[0]}^{pl[1]}")
def field(request):
    return make_field(*request.param)


@pytest.fixture
def f5():
    return make_field(5)
