"""Shared fixtures.

Null banks are expensive (the weighted chi-square banks draw 10^6
realizations each), so a single session-wide cache directory lets every
test that needs a bank build it once and reload it afterwards.
"""

import pytest


@pytest.fixture(scope="session")
def bank_dir(tmp_path_factory) -> str:
    return str(tmp_path_factory.mktemp("banks"))
