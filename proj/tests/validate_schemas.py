"""Runs fpp subcommands and validates their JSON against schemas/."""
import json
import pathlib
import subprocess
import sys

import jsonschema
from referencing import Registry, Resource

fpp, root = sys.argv[1], pathlib.Path(sys.argv[2])
schemas = {p.name: json.loads(p.read_text()) for p in (root / "schemas").glob("*.schema.json")}
registry = Registry().with_resources(
    (name, Resource.from_contents(s)) for name, s in schemas.items())


def check(schema, doc, what):
    validator = jsonschema.Draft202012Validator(schemas[schema], registry=registry)
    errors = sorted(validator.iter_errors(doc), key=lambda e: e.path)
    if errors:
        print(f"FAIL {what}: {errors[0].message} at {list(errors[0].path)}")
        return 1
    print(f"ok   {what}")
    return 0


def run(*args, codes=(0,)):
    res = subprocess.run([fpp, *args], capture_output=True, text=True)
    if res.returncode not in codes:
        raise SystemExit(f"{args}: exit {res.returncode}\n{res.stderr}")
    return json.loads(res.stdout)


failed = 0
failed += check("catalog.schema.json", run("catalog", "--format", "json"), "catalog")
for method in ("closed", "pide", "mc"):
    doc = run("pia", "--example", "7", "--method", method, "--sweep", "3", "--paths", "300",
              "--dt", "1e-3", "--grid-n", "63", "--format", "json")
    failed += check("pia.schema.json", doc, f"pia {method}")
doc = run("pia", "--spec-file", str(root / "presets/two_sided_fixed.json"), "--method", "pide",
          "--x", "0.5", "--format", "json")
failed += check("pia.schema.json", doc, "pia spec file")
doc = run("verify", "--example", "2", "--paths", "300", "--dt", "1e-3", "--grid-n", "63", codes=(0, 2))
failed += check("verify.schema.json", doc, "verify")
failed += check("invert.schema.json", run("invert", "--example", "1", "--q", "0.3", "--family", "modbeta"),
                "invert")
failed += check("invert.schema.json",
                run("invert", "--example", "2", "--q", "0.999999", codes=(1,)), "invert unreachable")
for preset in sorted((root / "presets").glob("*.json")):
    failed += check("process.schema.json", json.loads(preset.read_text()), f"preset {preset.name}")
for entry in run("catalog", "--format", "json")["examples"]:
    failed += check("process.schema.json", entry["process"], f"catalog process {entry['id']}")
for density in ({"type": "beta", "alpha": 2, "beta": 3},
                {"type": "modified_beta", "alpha": 2, "beta": 3, "a": 0, "b": 2},
                {"type": "uniform", "a": 0, "b": 1},
                {"type": "tabulated", "x": [0, 1], "g": [1, 1]}):
    failed += check("density.schema.json", density, f"density {density['type']}")
sys.exit(1 if failed else 0)
