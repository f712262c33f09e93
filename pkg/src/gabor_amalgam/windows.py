"""Named analytic window generators.

Windows are defined by closed-form profiles so they can be re-sampled at
any grid resolution (the continuity diagnostics depend on that).  The
compactly supported families start at 0 and live on [0, width); the
Gaussian is centered at 0 and wraps symmetrically around the period.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridSpec, SampledFunction, sym_rep_array


def _box(x, width):
    return ((x >= 0) & (x < width)).astype(np.complex128)


def _hat(x, width):
    inside = (x >= 0) & (x < width)
    y = np.where(inside, 1.0 - np.abs(2.0 * x / width - 1.0), 0.0)
    return y.astype(np.complex128)


def _raised_cosine(x, width):
    inside = (x >= 0) & (x < width)
    y = np.where(inside, 0.5 * (1.0 - np.cos(2.0 * np.pi * x / width)), 0.0)
    return y.astype(np.complex128)


_SUPPORTED = {
    "box": (_box, 1),
    "hat": (_hat, 1),
    "gauss": (None, 1),  # handled separately: needs the period for wrapping
    "raised-cosine": (_raised_cosine, 1),
}


@dataclass(frozen=True)
class WindowSpec:
    """Analytic window description: a name plus its shape parameters."""

    name: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.name not in _SUPPORTED:
            raise ValueError(f"unknown window {self.name!r}; choose from {sorted(_SUPPORTED)}")
        _, nparams = _SUPPORTED[self.name]
        params = tuple(float(p) for p in self.params)
        if len(params) != nparams:
            raise ValueError(f"window {self.name!r} takes {nparams} parameter(s), got {len(params)}")
        if params[0] <= 0:
            raise ValueError(f"window {self.name!r} parameter must be positive")
        object.__setattr__(self, "params", params)

    def sample(self, grid: GridSpec) -> SampledFunction:
        x = grid.points()
        if self.name == "gauss":
            sigma = self.params[0]
            xs = sym_rep_array(x, grid.L)
            vals = np.exp(-np.pi * (xs / sigma) ** 2).astype(np.complex128)
        else:
            width = self.params[0]
            if width > grid.L:
                raise ValueError(f"window width {width} exceeds the period {grid.L}")
            fn, _ = _SUPPORTED[self.name]
            vals = fn(x, width)
        return SampledFunction(grid, vals)

    def describe(self) -> str:
        return self.name + ":" + ",".join(f"{p:g}" for p in self.params)


def make_window(grid: GridSpec, name: str, *params) -> SampledFunction:
    """Sample the named window on the grid."""
    return WindowSpec(name, tuple(params)).sample(grid)
