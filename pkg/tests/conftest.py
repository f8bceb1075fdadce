import os
import sys

import pytest

# Add src to path the same way main.py does
ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SRC = os.path.join(ROOT, 'src')
if SRC not in sys.path:
    sys.path.insert(0, SRC)

from eos_symmetry_tool.core.model_parser import load  # noqa: E402
from eos_symmetry_tool.core.symmetry import eos_automorphisms  # noqa: E402

MODELS = os.path.join(ROOT, 'models')


def model_path(name):
    return os.path.join(MODELS, name)


@pytest.fixture(scope='session')
def s8():
    return load(model_path('eos-s8.eos'))


@pytest.fixture(scope='session')
def kitchen():
    return load(model_path('kitchen.eos'))


@pytest.fixture(scope='session')
def kitchen_hub():
    return load(model_path('kitchen_hub.eos'))


@pytest.fixture(scope='session')
def kitchen_group(kitchen):
    return eos_automorphisms(kitchen.eos)


@pytest.fixture(scope='session')
def s8_group(s8):
    return eos_automorphisms(s8.eos)
