"""Regenerate the bundled catalog of groups of order <= 8."""

import pathlib

from projent.groups import build_catalog, catalog_json

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "projent" / "data" / "groups_le8.json"

if __name__ == "__main__":
    OUT.write_text(catalog_json(build_catalog()))
    print(f"wrote {OUT}")
