#!/usr/bin/env python3
"""Check every file in the schemas directory against the draft-07 metaschema."""

import json
import pathlib
import sys

try:
    import jsonschema
except ImportError:
    print("jsonschema not installed; skipping")
    sys.exit(0)

root = pathlib.Path(sys.argv[1])
paths = sorted(root.glob("*.json"))
if not paths:
    sys.exit(f"no schemas under {root}")
for path in paths:
    jsonschema.Draft7Validator.check_schema(json.loads(path.read_text()))
    print(f"ok {path.name}")
