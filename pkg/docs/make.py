#!/usr/bin/env python3
from pathlib import Path
import shutil

from pdoc import pdoc

here = Path(__file__).parent
out = here / "api"
if out.exists():
    shutil.rmtree(out)

modules = ["fewswitch." + m for m in ("core", "graphs", "colorings", "compgraph", "switchpaths", "torus", "harness", "cli")]
pdoc(*modules, output_directory=out)

# ...and rename the .html files to .md so that mkdocs picks them up!
for f in out.glob("**/*.html"):
    f.rename(f.with_suffix(".md"))
