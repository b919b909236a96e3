import os
import zipfile
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]

REAL_FILES = {
    "point": ("GunPointAgeSpan_TRAIN.txt", 2, 67),
    "male": ("GunPointMaleVersusFemale_TRAIN.txt", 2, 64),
}


def find_real_dataset(key):
    """Locate a GunPoint training file in $NPFKM_DATA_DIR, ./data or tests/data."""
    name = REAL_FILES[key][0]
    dirs = [os.environ.get("NPFKM_DATA_DIR"), ROOT / "data", ROOT / "tests" / "data"]
    for d in dirs:
        if d and (Path(d) / name).is_file():
            return Path(d) / name
    return None


def bundled_gunpoint(dest):
    """Extract the original GunPoint training split shipped inside the aeon wheel, if present."""
    wheels = sorted((ROOT / "examples").glob("aeon-*.whl"))
    member = "aeon/datasets/data/GunPoint/GunPoint_TRAIN.tsv"
    for wheel in wheels:
        with zipfile.ZipFile(wheel) as zf:
            if member in zf.namelist():
                out = Path(dest) / "GunPoint_TRAIN.tsv"
                out.write_bytes(zf.read(member))
                return out
    return None


def gunpoint_like(n=24, length=150, seed=0):
    """Hand-gesture-like series: flat start, raised plateau, return, small noise.

    Offsets, amplitudes and timings vary per series so raw scale matters.
    """
    rng = np.random.default_rng(seed)
    t = np.arange(length)
    rows = []
    for _ in range(n):
        amp = rng.uniform(0.5, 2.5)
        start = rng.uniform(0.2, 0.4) * length
        width = rng.uniform(0.25, 0.45) * length
        base = rng.uniform(-1.0, 1.0)
        rise = 1.0 / (1.0 + np.exp(-(t - start) / 3.0))
        fall = 1.0 / (1.0 + np.exp((t - start - width) / 3.0))
        rows.append(base + amp * rise * fall + 0.02 * rng.normal(size=length))
    return np.array(rows)


def write_ucr(path, X, labels, delimiter=","):
    with open(path, "w") as fh:
        for lab, row in zip(labels, X):
            fh.write(delimiter.join([f"{float(lab):.7e}"] + [f"{v:.7e}" for v in row]) + "\n")
    return path


@pytest.fixture(scope="session")
def synthetic_file(tmp_path_factory):
    """UCR-style file: 20 class-2 series interleaved with 8 class-1 series."""
    X = gunpoint_like(28, 150, seed=7)
    labels = [1 if i % 7 == 3 or i % 7 == 5 else 2 for i in range(28)]
    path = tmp_path_factory.mktemp("data") / "Synthetic_TRAIN.txt"
    return write_ucr(path, X, labels, delimiter=" ")


@pytest.fixture(scope="session")
def gunpoint_file(tmp_path_factory):
    return bundled_gunpoint(tmp_path_factory.mktemp("gunpoint"))


# ---- acceptance summary -------------------------------------------------

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(num, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    num, title = marker.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[rep.outcome]
        if rep.outcome == "skipped" and isinstance(rep.longrepr, tuple):
            details = [rep.longrepr[2]]
        else:
            details = [v for k, v in item.user_properties if k == "detail"]
        prev = _ACCEPTANCE.get(num)
        if prev is None or prev[0] == "PASS" or status == "FAIL":
            _ACCEPTANCE[num] = (status, title, details)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        status, title, details = _ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {status}  {title}")
        for text in details:
            for line in str(text).splitlines():
                terminalreporter.write_line(f"    {line}")
