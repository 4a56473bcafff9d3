"""Build the extension with cargo, import it, and exercise the main entry points.

Usage: python3 crates/python/python/smoke_test.py [--no-build] [--release]
"""

import argparse
import importlib.util
import shutil
import subprocess
import sys
import sysconfig
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parents[3]


def build(release: bool) -> Path:
    cmd = ["cargo", "build", "-p", "cheeger-lab-python", "--features", "extension-module"]
    if release:
        cmd.append("--release")
    subprocess.run(cmd, cwd=ROOT, check=True)
    return ROOT / "target" / ("release" if release else "debug") / "libcheeger_lab_py.so"


def load(library: Path):
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    target = Path(tempfile.mkdtemp()) / f"cheeger_lab{suffix}"
    shutil.copy(library, target)
    spec = importlib.util.spec_from_file_location("cheeger_lab", target)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def check(cl) -> None:
    p3 = cl.Graph(3, [(0, 1, 1), (1, 2, "1")])
    assert p3.mu == [Fraction(1), Fraction(2), Fraction(1)], p3.mu
    hs = [cl.cheeger_k(p3, k)[0] for k in (1, 2, 3)]
    assert hs == [0, 1, 1], hs

    c3 = cl.Graph.generate("cycle", 3)
    assert c3.beta == 1 and not c3.is_forest()
    assert cl.cheeger_k(c3, 2)[0] == 1
    value, a, _ = cl.dirichlet_k(c3, 2)
    assert value == Fraction(1, 2) and len(a) == 2
    chain = cl.beta_chain(c3, 2)
    assert chain["all_hold"] and chain["maxmin"] == Fraction(1, 2)

    cert = cl.forest_certificate(p3, 2)
    assert cert["dirichlet_set"] == ["0", "2"] and cert["equal"], cert

    k2 = cl.Graph(2, [(0, 1, "3/7")])
    lam = cl.laplacian_spectrum(k2)
    assert abs(lam[1] - 2 * cl.cheeger_k(k2, 2)[0]) < 1e-9, lam

    report = cl.compute(c3, [1, 2, 3])
    assert report["rows"][1]["bracket"]["lower"]["exact"] == "1/2"
    assert report["fingerprint"]["beta"] == 1

    assert cl.Graph.from_json(c3.to_json()).to_tsv() == c3.to_tsv()
    s, phi = cl.sweep_round(p3, [1.0, 0.5, -1.0])
    assert phi <= 1 and s

    ia, ib = cl.common_union(4, [[0], [1], [2, 3]], [[0, 1], [2]])
    assert ia and ib

    try:
        cl.cheeger_k(cl.Graph.generate("path", 14), 3, budget=10)
    except cl.BudgetExceeded:
        pass
    else:
        raise AssertionError("budget was not enforced")
    try:
        cl.Graph(2, [(0, 0, 1)], mu=[1, 1])
    except cl.CheegerError:
        pass
    else:
        raise AssertionError("self-loop accepted")

    verdict = cl.verify("pigeonhole", seed=3, graphs=200, n_max=8)
    assert verdict["passed"], verdict


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--no-build", action="store_true", help="use the existing debug build")
    parser.add_argument("--release", action="store_true")
    args = parser.parse_args()
    library = (
        ROOT / "target" / ("release" if args.release else "debug") / "libcheeger_lab_py.so"
        if args.no_build
        else build(args.release)
    )
    check(load(library))
    print("smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
