from pathlib import Path

import pytest

from saddlecert.sysfile import parse_system

SYSTEMS = Path(__file__).resolve().parent.parent / "systems"


def load(name, mode="float"):
    return parse_system((SYSTEMS / name).read_text(encoding="utf-8"), mode)


@pytest.fixture
def planar():
    return load("planar.txt")


@pytest.fixture
def planar_iv():
    return load("planar.txt", "interval")
