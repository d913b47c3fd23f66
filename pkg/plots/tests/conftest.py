import numpy as np
import pytest

METHODS = ("RARX", "VF", "DI", "TC", "CS")


def fmt(v):
    return "%.17g" % v


@pytest.fixture
def study_csv(tmp_path):
    """Synthetic 50-run study file matching the producer's column contract."""
    rng = np.random.default_rng(99)
    lines = ["run,method,lambda1_opt,lambda2_opt,cod,atf,failed"]
    for run in range(50):
        for method in METHODS:
            lam1 = rng.uniform(0.2, 0.7)
            lam2 = "" if method == "RARX" else fmt(rng.uniform(0.6, 1.0))
            cod = rng.uniform(30.0, 99.0)
            atf = rng.uniform(-50.0, 90.0)
            lines.append(f"{run},{method},{fmt(lam1)},{lam2},{fmt(cod)},{fmt(atf)},0")
    path = tmp_path / "study.csv"
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def remark_csv(tmp_path):
    rng_grid = np.linspace(0.005, 0.995, 200)
    l1 = (3 * 0.3) ** (1.0 / 3.0)
    lines = ["lambda2,f,g"]
    for lam2 in rng_grid:
        l2 = (3 * lam2) ** (1.0 / 3.0)
        f = 0.5 * l1 * l1 * (l2 - l1 / 3.0)
        g = (0.3 * lam2) ** 0.5
        lines.append(f"{fmt(lam2)},{fmt(f)},{fmt(g)}")
    path = tmp_path / "remark.csv"
    path.write_text("\n".join(lines) + "\n")
    return path
