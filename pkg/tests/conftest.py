import sys
from pathlib import Path

import pytest

# リポジトリのルートをパスに追加
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.core.profiles import DataProfile, RadialProfile  # noqa: E402
from src.core.transform import Dimension  # noqa: E402


@pytest.fixture
def dim2() -> Dimension:
    return Dimension(2)


@pytest.fixture
def dim4() -> Dimension:
    return Dimension(4)


@pytest.fixture
def radial_bump() -> RadialProfile:
    return RadialProfile.bump(0.8)


@pytest.fixture
def off_range_data() -> DataProfile:
    """値域外のデータ（台が (0.2, 0.6) のバンプ）"""
    return DataProfile.bump(0.2, 0.6)
