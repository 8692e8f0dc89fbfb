from __future__ import annotations

import pytest

from cartanplane.sampling import Rng


@pytest.fixture
def rng():
    return Rng(0xC0FFEE)
