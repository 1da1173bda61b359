import pytest

import theory_gen


@pytest.fixture
def intro():
    return theory_gen.intro_theory()


@pytest.fixture
def justdef():
    return theory_gen.justdef_theory()


@pytest.fixture
def loop():
    return theory_gen.loop_theory()
