"""Validate every shipped experiment config against the JSON schemas."""

import json
import sys
from pathlib import Path

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

root = Path(sys.argv[1])
schemas = {p.name: json.loads(p.read_text()) for p in (root / "schemas").glob("*.json")}
registry = Registry().with_resources(
    (name, Resource.from_contents(body)) for name, body in schemas.items())
for body in schemas.values():
    Draft202012Validator.check_schema(body)
validator = Draft202012Validator(schemas["experiment.schema.json"], registry=registry)

bad = 0
for path in sorted((root / "configs").glob("*.json")):
    errors = list(validator.iter_errors(json.loads(path.read_text())))
    print(f"{'ok  ' if not errors else 'FAIL'} {path.name}")
    for e in errors:
        print(f"    {e.json_path}: {e.message}")
    bad += bool(errors)

invalid = {"name": "x", "distribution": {"family": "gaussian"}, "n": 2, "K": 1, "mode": "sideways",
           "samples": 1000, "seed": 1}
rejected = not validator.is_valid(invalid)
print(f"{'ok  ' if rejected else 'FAIL'} unknown mode rejected")
sys.exit(1 if bad or not rejected else 0)
