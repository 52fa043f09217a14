import subprocess
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


def generate_dataset(path: Path, n_train: int, n_val: int, n_test: int,
                     n_inc: int, seed: int, delta: float = 0.05,
                     extra=()) -> Path:
    """Produce a dataset through the core toolkit's CLI (the one interface)."""
    cmd = ["scatter-dsm", "gen", "--family", "circles",
           "--n-train", str(n_train), "--n-val", str(n_val),
           "--n-test", str(n_test), "--ni", str(n_inc),
           "--delta", str(delta), "--seed", str(seed),
           "--out", str(path), *extra]
    subprocess.run(cmd, check=True, capture_output=True)
    return path


@pytest.fixture(scope="session")
def small_container(tmp_path_factory) -> Path:
    """A tiny 4-incidence dataset shared by the fast unit tests."""
    path = tmp_path_factory.mktemp("data") / "small.scat"
    return generate_dataset(path, 6, 2, 3, n_inc=4, seed=303, extra=("--n", "32"))
