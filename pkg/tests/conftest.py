import math

import pytest

from ncx import MesdParams, build_mesd


@pytest.fixture
def mesd_pi3():
    return build_mesd(MesdParams(theta=math.pi / 3))


@pytest.fixture
def mesd_pi4():
    return build_mesd(MesdParams(theta=math.pi / 4))
