import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from psl2rp.fpgroup import build_group
from psl2rp.rp import check_rp
from psl2rp.subgroups import maximal_subgroups

TESTED_PRIMES = (7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
FAILING = (17, 23, 29, 41)


@functools.lru_cache(maxsize=None)
def group(p):
    return build_group(p)


@functools.lru_cache(maxsize=None)
def maximals(p):
    return maximal_subgroups(group(p))


@functools.lru_cache(maxsize=None)
def rp_report(p):
    return check_rp(maximals(p))


@pytest.fixture(scope="session")
def G7():
    return group(7)


@pytest.fixture(scope="session")
def mx7():
    return maximals(7)


@pytest.fixture(scope="session")
def G13():
    return group(13)


@pytest.fixture(scope="session")
def mx13():
    return maximals(13)
