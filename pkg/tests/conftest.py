"""pytest設定とフィクスチャ"""

import tempfile
from pathlib import Path
from tempfile import NamedTemporaryFile

import pytest
import yaml

from bm_poisson.cones import ConeDescriptor
from bm_poisson.config import Config, LimitsConfig, OutputConfig, SamplingConfig
from bm_poisson.models import DatabaseManager


@pytest.fixture
def mock_config():
    """テスト用の設定オブジェクト"""
    return Config(
        limits=LimitsConfig(max_sequences=200_000, max_states=50_000, max_interval=500),
        sampling=SamplingConfig(seed=7, samples=20_000),
        output=OutputConfig(format="csv", db_path="./test_runs.db"),
    )


@pytest.fixture
def temp_config_file():
    """一時的な設定ファイル"""
    config_data = {
        "limits": {"max_sequences": 1000, "max_states": 2000, "max_interval": 300},
        "sampling": {"seed": 11, "samples": 5000},
        "output": {"format": "json", "db_path": "/tmp/bm-poisson-test.db"},
    }

    with NamedTemporaryFile(mode="w", suffix=".yaml", delete=False) as f:
        yaml.dump(config_data, f, default_flow_style=False)
        temp_file = f.name

    yield temp_file

    # クリーンアップ
    Path(temp_file).unlink(missing_ok=True)


@pytest.fixture
def temp_db():
    """テスト用の一時データベースを作成"""
    with tempfile.NamedTemporaryFile(suffix=".db", delete=False) as f:
        db_path = f.name

    db_manager = DatabaseManager(db_path)
    db_manager.initialize_schema()

    yield db_manager

    # クリーンアップ
    Path(db_path).unlink(missing_ok=True)


@pytest.fixture
def monotone():
    return ConeDescriptor("orthant", 1)


@pytest.fixture
def planar():
    return ConeDescriptor("orthant", 2)
