import pytest

from cwlab import fixtures
from cwlab.core import Outcome


def path_to_line(line: int) -> tuple[Outcome, ...]:
    """Inverse of the 3L+1+o numbering."""
    path = []
    while line:
        parent, o = divmod(line - 1, 3)
        path.append(Outcome(o))
        line = parent
    return tuple(reversed(path))


@pytest.fixture(scope="session")
def trees():
    return {name: fixtures.load(name) for name in fixtures.CATALOG}
