"""Runs CLI subcommands and validates their JSON output against schemas/.

Usage: validate_schemas.py <pbrlab executable> <schemas dir>
"""

import json
import pathlib
import subprocess
import sys

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

CASES = [
    ("states", ["states", "--theta", "1.0471975512"]),
    ("states", ["states", "--theta", "45", "--deg", "--family", "soc", "--phi", "30"]),
    ("spectrum", ["spectrum", "--variant", "xyz", "--a", "1", "--b", "2", "--c", "3", "--format", "json"]),
    ("spectrum", ["spectrum", "--variant", "soc", "--a", "1", "--b", "0.5", "--c", "-1", "--d", "1", "--format", "json"]),
    ("solver_result", ["solve", "--theta", "0.7853981634", "--d", "1", "--split", "2", "--b", "0.5"]),
    ("solver_result", ["solve", "--theta", "0.7853981634", "--d", "1", "--split", "2"]),
    ("solver_result", ["solve", "--theta", "1.0471975512", "--d", "2", "--split", "2", "--method", "bisect"]),
    ("tally_summary", ["run", "--theta", "1.0471975512", "--runs", "2000", "--format", "json"]),
    ("tally_summary", ["run", "--variant", "soc", "--theta", "0.9", "--runs", "2000", "--noise", "0.04",
                       "--policy", "roundrobin", "--format", "json"]),
    ("feasibility_report", ["feasibility", "--theta", "1.0471975512"]),
    ("feasibility_report", ["feasibility", "--variant", "soc", "--theta", "45", "--deg"]),
    ("feasibility_report", ["feasibility", "--theta", "1.0471975512", "--overlap", "b", "--branch", "1"]),
    ("bound", ["bound", "--eps", "0.01"]),
    ("verify_report", ["verify-all", "--seed", "3", "--format", "json"]),
]


def main() -> int:
    exe, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    resources = []
    for path in schema_dir.glob("*.schema.json"):
        doc = json.loads(path.read_text())
        resources.append((doc["$id"], Resource.from_contents(doc)))
    registry = Registry().with_resources(resources)

    failures = 0
    for schema_name, args in CASES:
        schema = json.loads((schema_dir / f"{schema_name}.schema.json").read_text())
        proc = subprocess.run([exe, *args], capture_output=True, text=True, check=False)
        if proc.returncode != 0:
            print(f"FAIL {' '.join(args)}: exit {proc.returncode}\n{proc.stderr}")
            failures += 1
            continue
        errors = list(Draft202012Validator(schema, registry=registry).iter_errors(json.loads(proc.stdout)))
        for err in errors:
            print(f"FAIL {' '.join(args)}: {err.json_path}: {err.message}")
        failures += bool(errors)
        if not errors:
            print(f"ok   {schema_name}: {' '.join(args)}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
