#!/usr/bin/env python3
"""Validate fixture specs and freshly generated CLI JSON outputs against the
shipped schemas in schemas/.

Usage: validate_schemas.py <repo_root> <cli_binary>
"""

import json
import pathlib
import subprocess
import sys
import tempfile

from jsonschema import Draft202012Validator
from referencing import Registry, Resource


def main() -> int:
    repo = pathlib.Path(sys.argv[1])
    cli = sys.argv[2]

    schemas = {}
    registry = Registry()
    for path in sorted((repo / "schemas").glob("*.schema.json")):
        doc = json.loads(path.read_text())
        schemas[path.name] = doc
        registry = registry.with_resource(doc["$id"], Resource.from_contents(doc))

    def validator(name):
        return Draft202012Validator(schemas[name], registry=registry)

    failures = 0

    def validate(name, instance, label):
        nonlocal failures
        errors = sorted(validator(name).iter_errors(instance), key=str)
        if errors:
            failures += 1
            print(f"FAIL {label} against {name}:")
            for err in errors[:5]:
                print(f"  {'/'.join(map(str, err.absolute_path))}: {err.message}")
        else:
            print(f"ok   {label} against {name}")

    for fixture in sorted((repo / "data").glob("*.json")):
        validate("recurrence-spec.schema.json", json.loads(fixture.read_text()), fixture.name)

    report = subprocess.run(
        [cli, "analyze", str(repo / "data" / "grz4.json"), "--p", "64", "--q", "226", "--json"],
        capture_output=True, text=True, check=True)
    validate("analyze-report.schema.json", json.loads(report.stdout), "analyze --json output")

    with tempfile.TemporaryDirectory() as tmp:
        cert_path = pathlib.Path(tmp) / "a105641.poscert.json"
        subprocess.run(
            [cli, "certify", str(repo / "data" / "a105641.json"),
             "--p", "3", "--q", "7/2", "--output", str(cert_path)],
            capture_output=True, text=True, check=True)
        validate("certificate.schema.json", json.loads(cert_path.read_text()),
                 "generated certificate")

    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
