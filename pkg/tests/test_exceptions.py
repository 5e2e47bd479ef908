import inspect
import pytest
from bdry_ext import exceptions
from bdry_ext.exceptions import BdryExtError, NumericalError, ValidationError

ERRORS = [
    cls
    for _, cls in inspect.getmembers(exceptions, inspect.isclass)
    if issubclass(cls, BdryExtError) and cls not in (BdryExtError, ValidationError, NumericalError)
]


@pytest.mark.parametrize("cls", ERRORS, ids=lambda cls: cls.__name__)
def test_documented(cls):
    assert cls.__doc__ and cls.__doc__.strip().startswith("Raised")


@pytest.mark.parametrize("cls", ERRORS, ids=lambda cls: cls.__name__)
def test_exit_code_family(cls):
    assert issubclass(cls, ValidationError) != issubclass(cls, NumericalError)
