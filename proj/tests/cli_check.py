"""Exit codes and report content of the command line tool."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

exe = sys.argv[1]
failures = []


def run(*args):
    p = subprocess.run([exe, *args], capture_output=True, text=True)
    return p.returncode, p.stdout, p.stderr


def expect(name, cond):
    print(("ok   " if cond else "FAIL ") + name)
    if not cond:
        failures.append(name)


code, out, _ = run("casimir", "amap", "--algebra", "sl(2|1)", "--json")
expect("amap sl(2|1) exits 0", code == 0)
expect("amap sl(2|1) lambda = 2", json.loads(out)["lambda"] == "2")

code, out, _ = run("shapovalov", "det", "--algebra", "sl2", "--chi", "2a", "--oracle", "formula", "--json")
rep = json.loads(out)
expect("det sl2 2a exits 0", code == 0)
expect("det sl2 2a matches the formula", rep["entries"][0]["oracle_match"] is True)

code, _, err = run("casimir", "quadratic", "--algebra", "poi(0|3)")
expect("quadratic on an odd form exits 1", code == 1 and "FormParityMismatch" in err)

code, _, _ = run("shapovalov", "det", "--algebra", "sl(2|1)", "--chi", "a1+2*a2", "--oracle", "formula")
expect("literal odd rule mismatch exits 2", code == 2)

expect("unknown subcommand exits 1", run("frobnicate")[0] == 1)
expect("missing --algebra exits 1", run("casimir", "amap")[0] == 1)
expect("unknown family exits 1", run("algebra", "verify", "--algebra", "zz(3)")[0] == 1)
expect("bad weight exits 1", run("shapovalov", "det", "--algebra", "sl2", "--chi", "b")[0] == 1)
expect("help exits 0", run("--help")[0] == 0)

with tempfile.TemporaryDirectory() as d:
    spec = Path(d) / "g.json"
    code, out, _ = run("algebra", "build", "--algebra", "sl(2|1)", "--json")
    spec.write_text(json.dumps(json.loads(out)["spec"]))
    code, out, _ = run("algebra", "verify", "--algebra", str(spec), "--out", d)
    expect("verify from a spec file exits 0", code == 0)
    expect("report files written", (Path(d) / "algebra_verify.json").exists() and (Path(d) / "algebra_verify.txt").exists())

a = run("shapovalov", "conjecture", "--target", "poi03", "--chi", "e1", "2*e1", "--json", "-j", "1")[1]
b = run("shapovalov", "conjecture", "--target", "poi03", "--chi", "e1", "2*e1", "--json", "-j", "3")[1]
expect("reports are byte-identical across job counts", a == b and a != "")

sys.exit(1 if failures else 0)
