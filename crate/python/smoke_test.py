#!/usr/bin/env python3
"""Smoke test for the dsieve Python module.

Builds the extension if needed, imports it from the cargo target directory,
and exercises the main types and operations end to end. Exits nonzero on the
first failure.

Usage: python3 python/smoke_test.py [--release]
"""

import shutil
import subprocess
import sys
import sysconfig
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_and_import(release: bool):
    profile = "release" if release else "debug"
    cmd = ["cargo", "build", "-p", "dsieve-py"]
    if release:
        cmd.append("--release")
    subprocess.run(cmd, cwd=ROOT, check=True)
    built = ROOT / "target" / profile / "libdsieve.so"
    if not built.exists():  # e.g. macOS
        built = ROOT / "target" / profile / "libdsieve.dylib"
    staging = Path(tempfile.mkdtemp(prefix="dsieve-py-"))
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    shutil.copy2(built, staging / f"dsieve{suffix}")
    sys.path.insert(0, str(staging))
    import dsieve

    return dsieve


def main():
    release = "--release" in sys.argv
    ds = build_and_import(release)

    # curve parsing and Jacobian orders
    index2 = ds.Curve.from_file(str(ROOT / "curves" / "index2.curve"))
    assert index2.label == "index2"
    assert index2.genus == 2
    assert index2.jacobian_order(place=3) == 9
    assert index2.jacobian_order(place=5) == 25
    assert index2.jacobian_order(place=17) == 271

    c0 = ds.Curve.from_file(str(ROOT / "curves" / "c0_f3.curve"))
    assert c0.count() == 0
    assert c0.lpoly() == [1, -4, 9, -12, 9]
    assert c0.jacobian_order(n=3) == 1008

    e67 = ds.Curve.from_file(str(ROOT / "curves" / "e67a1.curve"))
    assert e67.reduce(67)["good"] is False
    assert e67.count(place=3) == 6

    # explicit Mumford arithmetic on y^2 = x^5 + x + 1 over F_11
    jac = ds.Jacobian([1, 1, 0, 0, 0, 1], 11)
    assert jac.genus == 2
    d = jac.embed(0, 1)  # P = (0, 1)
    n = ds.Curve(
        "model = hyperelliptic\nbase = F(11)\nf = [1, 1, 0, 0, 0, 1]\n"
    ).jacobian_order()
    assert jac.mul(n, d) == jac.identity()
    assert jac.add(d, jac.neg(d)) == jac.identity()
    assert (n % jac.order(d, n)) == 0

    # sieve scans and certificates
    scan = ds.hypex(index2, 2, 20, provenance="external 2-descent")
    hits = [row["v"] for row in scan["places"] if row["hit"]]
    assert hits == [3, 5, 11, 13, 17, 19]
    assert any("rank 0" in a for a in scan["assumptions"])

    assert ds.local_solubility("x^2+3; x^3-19", "7") is True
    assert ds.local_solubility("x^2+3", "real") is False
    cert = ds.hasse_certify(19)
    assert cert["pass"] is True
    packet = ds.packet_certify("x^2+3; x^3-19", "2x^3+2x+2")
    assert packet["pass"] is True
    assert any("does not obstruct" in c["statement"] for c in packet["claims"])

    # chains and torsion bounds
    state = ds.chain(e67, 17, 600, 4)
    assert state["target_reached"] is True
    assert ds.torsion_bound(e67, [3, 5, 7, 11, 13, 17]) == 1

    # heuristics
    emp = ds.emptying(index2, d=2, bound=30, trials=200, seed=7)
    assert emp["rows"][-1]["analytic"] >= emp["rows"][0]["analytic"]
    con = ds.contrast("x^2+3; x^3-19", "2x^3+2x+2", bound=30, trials=200, seed=7)
    assert all(r["actual_model_emptying"] == 0.0 for r in con["rows"])
    smooth = ds.smoothness(index2, 17, 0.687)
    assert smooth["smooth_bound"] == 7
    assert smooth["smooth_count"] == 2

    # constant-curve checks
    th = ds.threshold(c0, 2, nmax=4)
    assert [r["r_n"] for r in th["rows"]] == [0, 0, 4, 0]
    assert th["first_n"] == 4
    assert ds.dm_check(2)["brute_force_count"] == 0
    assert ds.factor_split()["pass"] is True

    print("smoke test: all checks passed")


if __name__ == "__main__":
    main()
