"""Periodic grids, sampled functions, and time-frequency shifts.

All signals are complex samples of an L-periodic function taken at the
n = L*s points {0, 1/s, ..., L - 1/s}.  A time shift is admissible when it
is an integer multiple of the grid step 1/s, a modulation frequency when it
is an integer multiple of 1/L; both wrap around the period.  Integrals are
Riemann sums weighted by the grid step, so every operator built on top of
this module is an exact finite-dimensional object with a dense matrix
oracle, not a truncation of an infinite one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatch, NonCommensurateFrequency, NonCommensurateShift

#: relative slack when deciding whether a value lands on the grid
COMMENSURATE_RTOL = 1e-9


def _to_index(value, scale, err, what):
    """Round ``value * scale`` to an integer, rejecting anything off-grid."""
    t = float(value) * scale
    k = round(t)
    if abs(t - k) > COMMENSURATE_RTOL * max(1.0, abs(t)):
        raise err(f"{what} {value!r} is not an integer multiple of 1/{scale}")
    return int(k)


def sym_rep(x, L):
    """Symmetric representative of x modulo L, in (-L/2, L/2]."""
    r = float(x) % L
    if r > L / 2:
        r -= L
    return r


def sym_rep_array(x, L):
    r = np.asarray(x, dtype=float) % L
    return np.where(r > L / 2, r - L, r)


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid: period ``L`` with ``s`` samples per unit.

    ``d`` is fixed to 1; the field exists so discretization parameters
    serialize with an explicit dimension.
    """

    L: int
    s: int
    d: int = 1

    def __post_init__(self):
        if self.d != 1:
            raise ValueError("only one-dimensional grids are supported")
        if not isinstance(self.L, int) or self.L <= 0:
            raise ValueError(f"period L must be a positive integer, got {self.L!r}")
        if not isinstance(self.s, int) or self.s <= 0:
            raise ValueError(f"samples per unit s must be a positive integer, got {self.s!r}")

    @property
    def n(self) -> int:
        """Total number of samples per period."""
        return self.L * self.s

    @property
    def delta(self) -> float:
        """Grid step."""
        return 1.0 / self.s

    def points(self) -> np.ndarray:
        """Sample locations in [0, L)."""
        return np.arange(self.n) / self.s

    def shift_samples(self, x) -> int:
        """Canonical sample offset of the time shift ``x`` (mod one period)."""
        return _to_index(x, self.s, NonCommensurateShift, "time shift") % self.n

    def freq_index(self, omega) -> int:
        """Canonical index of ``omega`` in units of 1/L (mod the grid band)."""
        return _to_index(omega, self.L, NonCommensurateFrequency, "frequency") % self.n

    def sym_shift(self, x) -> float:
        """Shift reduced to the symmetric representative in (-L/2, L/2]."""
        return sym_rep(x, self.L)


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Complex samples of an L-periodic function on a :class:`GridSpec`.

    Instances are immutable: the sample array is copied on construction and
    marked read-only, so values can be shared freely across workers.
    """

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v.real)) or not np.all(np.isfinite(v.imag)):
            raise ValueError("samples must be finite")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def zero(cls, grid):
        return cls(grid, np.zeros(grid.n))

    @classmethod
    def constant(cls, grid, value=1.0):
        return cls(grid, np.full(grid.n, value, dtype=np.complex128))

    @classmethod
    def impulse(cls, grid, index=0):
        v = np.zeros(grid.n, dtype=np.complex128)
        v[index % grid.n] = 1.0
        return cls(grid, v)

    def with_values(self, values) -> "SampledFunction":
        return SampledFunction(self.grid, values)

    @property
    def sup_norm(self) -> float:
        return float(np.abs(self.values).max()) if self.grid.n else 0.0

    def __add__(self, other):
        _check_same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        _check_same_grid(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, other):
        if isinstance(other, SampledFunction):
            _check_same_grid(self, other)
            return self.with_values(self.values * other.values)
        return self.with_values(self.values * other)

    __rmul__ = __mul__

    def __neg__(self):
        return self.with_values(-self.values)


def _check_same_grid(f, g):
    if f.grid != g.grid:
        raise GridMismatch(f"grids differ: {f.grid} vs {g.grid}")


@dataclass(frozen=True)
class TFShift:
    """A point (x, omega) of the time-frequency plane."""

    x: float
    omega: float

    def canonical(self, grid: GridSpec) -> "TFShift":
        """Representative with x in [0, L) and omega in [0, s)."""
        return TFShift(
            grid.shift_samples(self.x) * grid.delta,
            grid.freq_index(self.omega) / grid.L,
        )


def translate(f: SampledFunction, x) -> SampledFunction:
    """Cyclic translation T_x: output[l] = f[(l - x*s) mod n]."""
    return f.with_values(np.roll(f.values, f.grid.shift_samples(x)))


def modulate(f: SampledFunction, omega) -> SampledFunction:
    """Modulation M_omega: output[l] = exp(2*pi*i*omega*l/s) * f[l]."""
    m = f.grid.freq_index(omega)
    n = f.grid.n
    phase = np.exp((2j * np.pi * m / n) * np.arange(n))
    return f.with_values(phase * f.values)


def tf_shift(f: SampledFunction, lam) -> SampledFunction:
    """Time-frequency shift pi(lam) = M_omega T_x (modulate after translate)."""
    if not isinstance(lam, TFShift):
        lam = TFShift(*lam)
    return modulate(translate(f, lam.x), lam.omega)


def inner_product(f: SampledFunction, g: SampledFunction) -> complex:
    """Riemann inner product delta * sum f * conj(g); conjugate-linear in g."""
    _check_same_grid(f, g)
    return complex(f.grid.delta * np.sum(f.values * np.conj(g.values)))


def lp_norm(f: SampledFunction, p) -> float:
    """Discrete L^p norm with the grid-step quadrature weight; max for p=inf."""
    a = np.abs(f.values)
    if np.isinf(p):
        return float(a.max()) if a.size else 0.0
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return float((f.grid.delta * np.sum(a**p)) ** (1.0 / p))


@dataclass(frozen=True)
class TFLattice:
    """Separable lattice (alpha Z) x (beta Z) restricted to the grid.

    Admissibility: alpha must be a positive multiple of the grid step that
    divides the period, 1/beta a positive multiple of the grid step, and
    beta*L an integer.  Then one period carries exactly L/alpha time nodes
    and s/beta frequency nodes, and all analysis/synthesis sums are finite.
    """

    grid: GridSpec
    alpha: float
    beta: float

    def __post_init__(self):
        g = self.grid
        a = _to_index(self.alpha, g.s, NonCommensurateShift, "lattice step alpha")
        if a <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha!r}")
        if g.n % a:
            raise ValueError(f"alpha={self.alpha!r} does not divide the period L={g.L}")
        b = _to_index(1.0 / float(self.beta), g.s, NonCommensurateFrequency, "lattice step 1/beta")
        if b <= 0:
            raise ValueError(f"beta must be positive, got {self.beta!r}")
        if g.n % b:
            raise ValueError(f"beta={self.beta!r}: beta*L is not an integer")
        object.__setattr__(self, "alpha", a * g.delta)
        object.__setattr__(self, "beta", g.s / b)

    @property
    def a_samples(self) -> int:
        """Samples per time step alpha."""
        return round(self.alpha * self.grid.s)

    @property
    def time_nodes(self) -> int:
        """Number of time nodes per period, L/alpha."""
        return self.grid.n // self.a_samples

    @property
    def freq_nodes(self) -> int:
        """Number of frequency nodes in the grid band, s/beta.

        This also equals the number of grid samples covering one cell
        [0, 1/beta), which is what makes the discrete model exactly
        periodic in both variables.
        """
        return round(self.grid.s / self.beta)

    @property
    def freq_index_step(self) -> int:
        """Modulation index (omega*L) of the frequency step beta."""
        return self.grid.n // self.freq_nodes

    @property
    def n_points(self) -> int:
        return self.time_nodes * self.freq_nodes

    def time_values(self) -> np.ndarray:
        return np.arange(self.time_nodes) * self.alpha

    def freq_values(self) -> np.ndarray:
        return np.arange(self.freq_nodes) * self.beta

    def time_sym_indices(self) -> np.ndarray:
        """Symmetric integer representatives of the time-node indices."""
        k = np.arange(self.time_nodes)
        return np.where(k > self.time_nodes / 2, k - self.time_nodes, k)

    def freq_sym_indices(self) -> np.ndarray:
        """Symmetric integer representatives of the frequency-node indices."""
        t = np.arange(self.freq_nodes)
        return np.where(t > self.freq_nodes / 2, t - self.freq_nodes, t)

    def point(self, k, t) -> TFShift:
        """Lattice point (k*alpha, t*beta)."""
        return TFShift(k * self.alpha, t * self.beta)
