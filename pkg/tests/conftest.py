from __future__ import annotations

import pytest

import speclimit as sl


@pytest.fixture(scope="session")
def box():
    return sl.box(mass=1.0, width=1.0)


@pytest.fixture(scope="session")
def osc():
    return sl.harmonic(mass=1.0, stiffness=1.0)


@pytest.fixture(scope="session")
def hyd():
    return sl.get_preset("hydrogen-atomic")


@pytest.fixture(scope="session")
def morse_h2():
    return sl.get_preset("morse-h2")
