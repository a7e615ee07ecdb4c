from __future__ import annotations

from pathlib import Path

import pytest

from chronoscale.ingest import IngestConfig, build_dataset, load_dataset_file, parse_table
from chronoscale.layout import Viewport
from chronoscale.model import Dataset

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def decades6_path() -> Path:
    return FIXTURES / "decades6.csv"


@pytest.fixture(scope="session")
def decades6(decades6_path: Path) -> Dataset:
    dataset = load_dataset_file(str(decades6_path))
    assert isinstance(dataset, Dataset)
    return dataset


@pytest.fixture(scope="session")
def flat6(decades6_path: Path) -> Dataset:
    """Same six measures with no curated anchors: one period spanning them all."""
    text = decades6_path.read_text().replace("true", "false")
    dataset = build_dataset(parse_table(text), IngestConfig(), title="flat6")
    assert isinstance(dataset, Dataset)
    return dataset


@pytest.fixture(scope="session")
def unit_viewport() -> Viewport:
    """Inner width 1 with zero margins, so x positions read as fractions."""
    return Viewport(width=1.0, height=1.0,
                    margin_left=0.0, margin_right=0.0, margin_top=0.0, margin_bottom=0.0,
                    tiers_band=(0.2, 0.8), timeline_band=(0.05, 0.15))
