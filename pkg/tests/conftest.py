import random

import pytest

from zariski_chambers import helpers
from zariski_chambers.exactalg import IntSymMatrix


@pytest.fixture(autouse=True)
def config_home(tmp_path, monkeypatch):
    """Keep config.ini and the log folder inside the test's tmp directory."""
    monkeypatch.setattr(helpers, 'HOMEDIR', str(tmp_path))
    return tmp_path / '.zariski-chambers'


def random_symmetric(rng: random.Random, n: int, low: int = -3, high: int = 3) -> IntSymMatrix:
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = rng.randint(low, high)
    return IntSymMatrix(rows)


def random_matrices(count: int, max_n: int, seed: int):
    rng = random.Random(seed)
    return [random_symmetric(rng, rng.randint(1, max_n)) for _ in range(count)]
