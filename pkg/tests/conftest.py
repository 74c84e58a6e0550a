import sys
from pathlib import Path

import pytest

from fisher_regime import kernels

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(params=kernels.available())
def backend(request):
    return request.param
