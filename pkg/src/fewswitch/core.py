import os
import time
import cProfile
import pstats
from contextlib import ContextDecorator
from typing import Any, Callable, Final, Iterable, List, Optional

import numpy as np

# =================================
#   Utils
# =================================


class Timing(ContextDecorator):
    def __init__(self, prefix="", on_exit=None, enabled=True):
        self.prefix, self.on_exit, self.enabled = prefix, on_exit, enabled
        self.et = 0

    def __enter__(self):
        self.st = time.perf_counter_ns()
        return self

    def __exit__(self, *exc):
        self.et = time.perf_counter_ns() - self.st
        if self.enabled:
            print(f"{self.prefix}{self.et*1e-6:6.2f} ms" + (self.on_exit(self.et) if self.on_exit else ""))

    @property
    def ms(self) -> float:
        return self.et * 1e-6


def colored(st, color: Optional[str], background=False):
    return (
        f"\u001b[{10*background+60*(color.upper() == color)+30+['black', 'red', 'green', 'yellow', 'blue', 'magenta', 'cyan', 'white'].index(color.lower())}m{st}\u001b[0m"
        if color is not None
        else st
    )


def _format_fcn(fcn):
    return f"{fcn[0]}:{fcn[1]}:{fcn[2]}"


class Profiling(ContextDecorator):
    def __init__(self, enabled=True, sort="cumtime", frac=0.2, fn=None, ts=1):
        self.enabled, self.sort, self.frac, self.fn, self.time_scale = enabled, sort, frac, fn, 1e3 / ts

    def __enter__(self):
        self.pr = cProfile.Profile()
        if self.enabled:
            self.pr.enable()

    def __exit__(self, *exc):
        if self.enabled:
            self.pr.disable()
            if self.fn:
                self.pr.dump_stats(self.fn)
            stats = pstats.Stats(self.pr).strip_dirs().sort_stats(self.sort)
            for fcn in stats.fcn_list[0 : int(len(stats.fcn_list) * self.frac)]:  # type: ignore[attr-defined]
                (_primitive_calls, num_calls, tottime, cumtime, callers) = stats.stats[fcn]  # type: ignore[attr-defined]
                scallers = sorted(callers.items(), key=lambda x: -x[1][2])
                print(
                    f"n:{num_calls:8d}  tm:{tottime*self.time_scale:7.2f}ms  tot:{cumtime*self.time_scale:7.2f}ms",
                    colored(_format_fcn(fcn), "yellow") + " " * (50 - len(_format_fcn(fcn))),
                    colored(f"<- {(scallers[0][1][2]/tottime)*100:3.0f}% {_format_fcn(scallers[0][0])}", "BLACK") if len(scallers) else "",
                )


def dblog(*msg, enable=True):
    if enable:
        print(*msg)


def list_map(f: Callable, *xs: Iterable) -> List[Any]:
    return list(map(f, *xs))


def loop_erase(seq: List[int]) -> List[int]:
    """Removes closed sub-walks, keeping the first visit of every vertex.

    Deleting a contiguous block of edges never increases the number of colour
    changes along a walk, so loop erasure is safe for switch-minimal paths.
    """
    out: List[int] = []
    pos = {}
    for v in seq:
        if v in pos:
            cut = pos[v]
            for w in out[cut + 1 :]:
                del pos[w]
            del out[cut + 1 :]
        else:
            pos[v] = len(out)
            out.append(v)
    return out


# =================================
#   Settings
# =================================


class Settings:
    LOG_SEARCH = int(os.environ.get("LOG_SEARCH", 0))
    LOG_WITNESS = int(os.environ.get("LOG_WITNESS", 0))
    LOG_HARNESS = int(os.environ.get("LOG_HARNESS", 0))
    LOG_TORUS = int(os.environ.get("LOG_TORUS", 0))
    LOG_CLI = int(os.environ.get("LOG_CLI", 1))
    LOG_REPORT = int(os.environ.get("LOG_REPORT", 0))
    NODE_BUDGET = int(os.environ.get("FEWSWITCH_NODE_BUDGET", 2_000_000))
    WORKERS = int(os.environ.get("FEWSWITCH_WORKERS", 1))
    SEED = int(os.environ.get("FEWSWITCH_SEED", 0))
    MAX_HYPERCUBE_DIM = 24
    MAX_EXHAUSTIVE_EDGES = 24

    def __repr__(self):
        fields = {k: getattr(self, k) for k in dir(self) if k.isupper()}
        return f"<Settings: {fields}>"


settings = Settings()

# =================================
#   Errors
# =================================


class FewSwitchError(Exception):
    pass


class InvalidParameter(FewSwitchError, ValueError):
    pass


class NotAnAutomorphism(InvalidParameter):
    def __init__(self, msg, edge=None):
        super().__init__(msg)
        self.edge = edge


class NotUniqueFarthest(InvalidParameter):
    pass


class InternalAssertion(FewSwitchError, AssertionError):
    def __init__(self, msg, payload=None):
        super().__init__(msg)
        self.payload = payload


# =================================
#   Values
# =================================

RED: Final[int] = 0
BLUE: Final[int] = 1
COLOR_LETTERS: Final[str] = "RB"


def color_letter(color: int) -> str:
    return COLOR_LETTERS[int(color)]


def color_of_letter(letter: str) -> int:
    if letter not in COLOR_LETTERS:
        raise InvalidParameter(f"unknown color letter {letter!r}, expected one of {COLOR_LETTERS!r}")
    return COLOR_LETTERS.index(letter)


class Unreachable:
    def __repr__(self):
        return "Unreachable"

    def __reduce__(self):
        return (_unreachable, ())


def _unreachable():
    return unreachable


unreachable = Unreachable()


def is_unreachable(x) -> bool:
    return x is unreachable


def rng_for(seed: int, index: int = 0) -> np.random.Generator:
    "Sample `index` of a run seeded with `seed`; the (seed, index) pair is mixed by numpy's SeedSequence."
    if seed < 0 or index < 0:
        raise InvalidParameter(f"seed and index must be non-negative, got {seed=} {index=}")
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))
