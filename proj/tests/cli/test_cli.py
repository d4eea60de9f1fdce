"""End-to-end checks of the realspec command line tool."""

import csv
import filecmp
import io
import json
import subprocess
import sys
import tempfile
from pathlib import Path

EXE = sys.argv[1]
ROOT = Path(sys.argv[2])
failures = []


def run(*args, env=None):
    return subprocess.run([EXE, *map(str, args)], capture_output=True, text=True, env=env)


def check(name, cond, info=""):
    print(f"{'ok  ' if cond else 'FAIL'} {name} {info}")
    if not cond:
        failures.append(name)


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def quad_value(*args):
    r = run("quad", *args)
    if r.returncode != 0:
        return None, r
    return float(rows(r.stdout)[0]["value"]), r


def test_exact():
    r = run("exact")
    check("exact exit", r.returncode == 0, r.stderr)
    table = {row["label"]: row for row in rows(r.stdout)}
    check("exact uniform", abs(float(table["uniform"]["value"]) - 49 / 72) < 1e-15)
    check("exact gaussian", abs(float(table["gaussian"]["value"]) - 0.5 ** 0.5) < 1e-15)
    check("exact provenance", table["power_law_a2"]["provenance"] == "reference")


def test_quad():
    for args, ref, tol in [
        (("--family", "gamma", "--gamma", 0.5, "--route", "conv"), 0.784155, 5e-7),
        (("--family", "powerlaw", "--a", 2, "--route", "conv"), 0.7076005, 1e-6),
        (("--family", "uniform", "--route", "cf"), 0.680556, 5e-7),
        (("--family", "gaussian", "--hadamard-K", 2), 0.757164, 1e-5),
    ]:
        v, r = quad_value(*args)
        check(f"quad {' '.join(map(str, args))}", v is not None and abs(v - ref) < tol, f"{v} {r.stderr.strip()}")


def test_mc_and_fit(tmp):
    cfg = ROOT / "configs" / "smoke.json"
    a, b = tmp / "a.csv", tmp / "b.csv"
    r1 = run("mc", cfg, "-o", a)
    r2 = run("mc", cfg, "-o", b, "--threads", 3)
    check("mc exit", r1.returncode == 0 and r2.returncode == 0, r1.stderr + r2.stderr)
    check("mc identical across worker counts", filecmp.cmp(a, b, shallow=False))
    data = rows(a.read_text())
    check("mc rows", len(data) == 20, str(len(data)))
    g1 = [d for d in data if d["family"] == "gaussian" and d["K"] == "1" and d["k"] == "2"][0]
    check("mc gaussian K=1", abs(float(g1["phat"]) - 0.5 ** 0.5) < 4 * float(g1["stderr"]), g1["phat"])
    manifest = json.loads(Path(str(a) + ".manifest.json").read_text())
    for key in ("config", "git_describe", "seed", "workers", "wall_time_s"):
        check(f"manifest {key}", key in manifest)

    r = run("fit", a)
    check("fit exit", r.returncode == 0, r.stderr)
    fits = rows(r.stdout)
    check("fit rows", len(fits) == 2 and all(float(f["theta"]) > 0 for f in fits), r.stdout)

    r = run("fit", a, "--fix-pinf", 0.5)
    check("fit model violation exit 5", r.returncode == 5, r.stderr)


def test_exit_codes(tmp):
    r = run("quad", "--family", "gaussian", "--hadamard-K", 3)
    check("density unknown exit 3", r.returncode == 3, r.stderr)
    r = run("quad", "--family", "smooth_bounded", "--eta", -0.8)
    check("unsupported route exit 3", r.returncode == 3, r.stderr)
    r = run("quad", "--family", "gamma", "--gamma", -1)
    check("parameter domain exit 4", r.returncode == 4, r.stderr)
    bad = tmp / "bad.json"
    bad.write_text(json.dumps({"name": "bad", "distribution": {"family": "gaussian"}, "n": 1, "K": 1,
                               "mode": "ordinary", "samples": 1000, "seed": 1}))
    r = run("mc", bad, "-o", tmp / "bad.csv")
    check("config error exit 4", r.returncode == 4, r.stderr)
    r = run("quad", "--family", "gaussian", "--route", "cf", "--tol", 1e-300)
    check("nonconvergence exit 2", r.returncode == 2, r.stderr)


def test_correlations():
    r = run("correlations", "-K", 2, "--samples", 100000, "--no-divide-by-K")
    check("correlations exit", r.returncode == 0, r.stderr)
    data = rows(r.stdout)
    check("correlations rows", len(data) == 4, r.stdout)
    check("correlations C1", abs(float(data[0]["C"]) - 2 ** 0.5) < 0.03, data[0]["C"])


with tempfile.TemporaryDirectory() as d:
    tmp = Path(d)
    test_exact()
    test_quad()
    test_mc_and_fit(tmp)
    test_exit_codes(tmp)
    test_correlations()

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
