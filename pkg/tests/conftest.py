import pytest

from causalspaces.core.pfun import InputFamily
from causalspaces.core.preorder import Preorder, join
from causalspaces.core.settings import settings
from causalspaces.core.space import induce, space_meet
from causalspaces.services.classify import build_hierarchy, enumerate_cc_bruteforce


@pytest.fixture
def binary1() -> InputFamily:
    return InputFamily.uniform("A", 2)


@pytest.fixture
def binary2() -> InputFamily:
    return InputFamily.uniform("AB", 2)


@pytest.fixture
def binary3() -> InputFamily:
    return InputFamily.uniform("ABC", 2)


@pytest.fixture
def indefinite_space(binary3):
    """Hist(A -> {B,C}) on binary inputs: free choice but not causally complete."""
    return induce(Preorder.total("A", {"B", "C"}), binary3)


@pytest.fixture
def theta3(binary3):
    """Meet of two total-plus-point spaces: complete but not tight."""
    left = induce(join([Preorder.total("A", "B"), Preorder.discrete("C")]), binary3)
    right = induce(join([Preorder.discrete("A"), Preorder.total("C", "B")]), binary3)
    return space_meet(left, right)


@pytest.fixture(scope="session")
def complete_spaces_2():
    return enumerate_cc_bruteforce(InputFamily.uniform("AB", 2))


@pytest.fixture(scope="session")
def complete_spaces_3():
    return enumerate_cc_bruteforce(InputFamily.uniform("ABC", 2))


@pytest.fixture(scope="session")
def hierarchy_3(complete_spaces_3):
    return build_hierarchy(complete_spaces_3)


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    monkeypatch.setattr(settings, "OUTPUT_DIR", str(tmp_path / "output"))
    monkeypatch.setattr(settings, "CHECKPOINT_SECONDS", 0.0)
    return tmp_path / "output"
