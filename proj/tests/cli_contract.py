"""End-to-end checks of the command line tool: exit codes, output files and JSON schemas."""

import json
import pathlib
import subprocess
import sys
import tempfile

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

CLI = sys.argv[1]
SCHEMAS = pathlib.Path(sys.argv[2])

failures = []


def check(cond, what):
    print(("ok    " if cond else "FAIL  ") + what)
    if not cond:
        failures.append(what)


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True, timeout=600)


def load_registry():
    resources = []
    for path in SCHEMAS.glob("*.schema.json"):
        doc = json.loads(path.read_text())
        resources.append((doc["$id"], Resource.from_contents(doc)))
    return Registry().with_resources(resources)


REGISTRY = load_registry()


def validate(doc, schema_name, what):
    schema = json.loads((SCHEMAS / schema_name).read_text())
    errors = list(Draft202012Validator(schema, registry=REGISTRY).iter_errors(doc))
    for e in errors[:3]:
        print(f"      {list(e.absolute_path)}: {e.message}")
    check(not errors, f"{what} matches {schema_name}")


for path in SCHEMAS.glob("*.schema.json"):
    Draft202012Validator.check_schema(json.loads(path.read_text()))

# analyze
r = run("analyze", "--gallery", "fold_fold_broken", "--b", "-0.0005")
check(r.returncode == 0, "analyze with a cycle exits 0")
doc = json.loads(r.stdout)
validate(doc, "analyze.schema.json", "analyze output")
x_star = doc["cycle"]["x_star"]
check(abs(x_star - 0.0316) <= 0.02 * 0.0316, f"fold/fold cycle position {x_star} near 0.0316")

r = run("analyze", "--gallery", "fold_fold_broken", "--b", "0.0005")
check(r.returncode == 0, "analyze without a cycle exits 0")
doc = json.loads(r.stdout)
validate(doc, "analyze.schema.json", "analyze output without cycle")
check(doc["no_cycle"] is True, "wrong-sign b reports no cycle")

r = run("analyze", "--gallery", "fold_fold_sym", "--b", "-0.001")
check(r.returncode == 2, "degenerate signs exit 2")

r = run("analyze", "--gallery", "no_such_system", "--b", "-0.001")
check(r.returncode == 1, "unknown gallery name exits 1")

r = run("analyze", "--gallery", "fold_fold_broken")
check(r.returncode == 1, "missing --b exits 1")

with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)

    bad = tmp / "bad.json"
    bad.write_text(json.dumps({"gallery": "fold_fold_broken", "bogus_key": 1}))
    r = run("analyze", "--config", str(bad), "--b", "-0.001")
    check(r.returncode == 1, "config with an unknown key exits 1")

    # predict
    r = run("gallery")
    check(r.returncode == 0, "gallery exits 0")
    names = [line.split()[0] for line in r.stdout.splitlines() if line.strip()]
    check("fold_fold_broken" in names and "model_polycycle_polycycle" in names, "gallery lists builtin systems")
    for name in names:
        r = run("predict", "--gallery", name)
        if r.returncode == 0:
            validate(json.loads(r.stdout), "predict.schema.json", f"predict {name}")
        else:
            check(r.returncode in (1, 2) and r.stderr, f"predict {name} fails with a message")

    # sweep
    out = tmp / "sweep"
    r = run("sweep", "--gallery", "fold_fold_broken", "--grid", "1e-2,0.5,20", "--out", str(out))
    check(r.returncode == 0, "sweep exits 0")
    for f in ("sweep.csv", "report.json", "position.dat", "period.dat"):
        check((out / f).is_file(), f"sweep writes {f}")
    report = json.loads((out / "report.json").read_text())
    validate(report, "sweep_report.schema.json", "sweep report")
    check(report["position"]["verdict"]["pass"], "fold/fold position verdict passes")
    rows = (out / "sweep.csv").read_text().splitlines()
    check(rows[0] == "b,x_star,period,stability,delta_residual" and len(rows) == 21, "sweep.csv header and rows")

    short = tmp / "short"
    r = run("sweep", "--gallery", "fold_fold_broken", "--grid", "1e-2,0.5,3", "--out", str(short))
    check(r.returncode == 2, "sweep with too few cycles exits 2")
    check(not (short / "report.json").exists(), "failed sweep writes no report")

    # table
    r = run("table", "--rows", "nonexistent_row")
    check(r.returncode == 1, "unknown table row exits 1")

    outs = []
    for k in (1, 2):
        d = tmp / f"table{k}"
        r = run("table", "--rows", "fold_fold,orbit_fold,polycycle_fold", "--out", str(d))
        check(r.returncode == 0, f"table run {k} exits 0")
        outs.append(d)
    for f in ("table.csv", "table.json"):
        check((outs[0] / f).read_bytes() == (outs[1] / f).read_bytes(), f"repeated table runs give identical {f}")
    table = json.loads((outs[0] / "table.json").read_text())
    validate(table, "table.schema.json", "table.json")
    check([row["id"] for row in table["rows"]] == ["fold_fold", "orbit_fold", "polycycle_fold"], "table row order")

    d = tmp / "single"
    r = run("table", "--rows", "fold_fold", "--out", str(d))
    single = json.loads((d / "table.json").read_text())
    check(r.returncode == 0 and len(single["rows"]) == 1, "--rows selects a single row")

print(f"{len(failures)} contract checks failed")
sys.exit(1 if failures else 0)
