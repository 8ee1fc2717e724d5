# -*- coding: utf-8 -*-

"""Generate one API reference page per beamsynth module, plus the navigation for them."""

from pathlib import Path

import mkdocs_gen_files

PACKAGE_ROOT = Path("src", "kiara_plugin", "beamsynth")

nav = mkdocs_gen_files.Nav()

for path in sorted(PACKAGE_ROOT.rglob("*.py")):
    module_path = path.relative_to("src").with_suffix("")
    parts = list(module_path.parts)
    if parts[-1] == "__init__":
        parts = parts[:-1]

    doc_path = Path(*parts).with_suffix(".md")
    nav[parts] = doc_path.as_posix()

    with mkdocs_gen_files.open(Path("reference", doc_path), "w") as fd:
        fd.write(f"::: {'.'.join(parts)}\n")

    mkdocs_gen_files.set_edit_path(Path("reference", doc_path), path)

with mkdocs_gen_files.open("reference/SUMMARY.md", "w") as nav_file:
    nav_file.writelines(nav.build_literate_nav())
