__all__ = ["core", "graphs", "colorings", "compgraph", "switchpaths", "torus", "harness", "cli"]
__docformat__ = "markdown"
import numpy as np

from fewswitch import colorings, compgraph, core, graphs, harness, switchpaths, torus

np.set_printoptions(precision=5, threshold=1000, edgeitems=5, linewidth=120)

_modules = (core, graphs, colorings, compgraph, switchpaths, torus, harness)


def __getattr__(attr):
    for module in _modules:
        if attr in vars(module):
            core.dblog(f"Looking fewswitch.{attr} in {module.__name__}", enable=core.settings.LOG_CLI > 1)
            return getattr(module, attr)
    if attr in vars(colorings.family_set):
        return getattr(colorings.family_set, attr)
    raise AttributeError(f"module 'fewswitch' has no attribute {attr!r}")
