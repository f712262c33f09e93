"""Wiener amalgam norms W(L^p, L^q_v) and coefficient-space norms.

The period is tiled by the unit cells [k, k+1), k = 0..L-1; the amalgam
norm takes the discrete local L^p norm on each cell and combines the cell
values in l^q against a moderate weight evaluated at the symmetric cell
representative.  Coefficient arrays indexed by a time-frequency lattice get
the matching sequence norm: per time node, the L^p(Q_beta) norm of the
trigonometric polynomial with that node's frequency coefficients, combined
over time nodes in l^q_v.

For 1 < p < inf the sequence norm is the exact discrete counterpart of the
Fourier-side definition; for p in {1, inf} the same quadrature value is
reported without an exactness claim (distributional inversion has no grid
analogue).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatch, LatticeMismatch, NonIntegerPeriod
from .grid import GridSpec, SampledFunction, TFLattice, inner_product, sym_rep, sym_rep_array, translate
from .weights import WeightSpec, weight_eval


def conjugate_exponent(p) -> float:
    if np.isinf(p):
        return 1.0
    if p == 1:
        return math.inf
    return p / (p - 1.0)


def _check_exponent(p, name):
    if not (p == math.inf or (np.isreal(p) and 1 <= p)):
        raise ValueError(f"{name} must lie in [1, inf], got {p!r}")


@dataclass(frozen=True)
class AmalgamParams:
    """Exponents (p, q) plus the weight pair (v moderate, w submultiplicative)."""

    p: float
    q: float
    v: WeightSpec = field(default_factory=WeightSpec.trivial)
    w: WeightSpec = field(default_factory=WeightSpec.trivial)

    def __post_init__(self):
        _check_exponent(self.p, "p")
        _check_exponent(self.q, "q")

    @property
    def p_conj(self) -> float:
        return conjugate_exponent(self.p)

    @property
    def q_conj(self) -> float:
        return conjugate_exponent(self.q)

    def dual(self) -> "AmalgamParams":
        """Köthe-dual parameters (p', q', 1/v)."""
        return AmalgamParams(self.p_conj, self.q_conj, self.v.reciprocal(), self.w)


def _local_lp(blocks: np.ndarray, p, delta: float) -> np.ndarray:
    a = np.abs(blocks)
    if np.isinf(p):
        return a.max(axis=1)
    return (delta * (a**p).sum(axis=1)) ** (1.0 / p)


def _combine_lq(locals_: np.ndarray, weights: np.ndarray, q) -> float:
    vals = locals_ * weights
    if np.isinf(q):
        return float(vals.max(initial=0.0))
    return float((vals**q).sum() ** (1.0 / q))


def _cell_norms(f: SampledFunction, p, cell_offset=0.0):
    g = f.grid
    if g.L < 1:
        raise NonIntegerPeriod("period must contain at least one unit cell")
    off = g.shift_samples(cell_offset)
    vals = np.roll(f.values, -off) if off else f.values
    return _local_lp(vals.reshape(g.L, g.s), p, g.delta)


def amalgam_norm(f: SampledFunction, params: AmalgamParams, cell_offset=0.0) -> float:
    """The norm of W(L^p, L^q_v) over the unit-cell covering of one period.

    ``cell_offset`` shifts the covering to {[k+offset, k+1+offset)}; any
    commensurate offset yields an equivalent norm, which is what makes the
    translation bound exact (see :func:`translation_norm_bound_check`).
    """
    local = _cell_norms(f, params.p, cell_offset)
    anchors = sym_rep_array(np.arange(f.grid.L) + float(cell_offset), f.grid.L)
    weights = np.array([weight_eval(params.v, x) for x in anchors])
    return _combine_lq(local, weights, params.q)


@dataclass(frozen=True)
class NormReport:
    norm: float
    p: float
    q: float
    weight: str
    cells: tuple[tuple[int, float], ...]


def amalgam_norm_report(f: SampledFunction, params: AmalgamParams) -> NormReport:
    local = _cell_norms(f, params.p)
    anchors = sym_rep_array(np.arange(f.grid.L), f.grid.L)
    weights = np.array([weight_eval(params.v, x) for x in anchors])
    return NormReport(
        norm=_combine_lq(local, weights, params.q),
        p=params.p,
        q=params.q,
        weight=params.v.describe(),
        cells=tuple((int(k), float(v)) for k, v in enumerate(local)),
    )


@dataclass(frozen=True)
class KothePairing:
    value: complex
    f_norm: float
    g_dual_norm: float
    bound: float
    ratio: float
    holds: bool


def kothe_pairing(f: SampledFunction, g: SampledFunction, params: AmalgamParams,
                  rtol: float = 1e-12) -> KothePairing:
    """Pairing <f, g> with the Hölder bound against the Köthe-dual norm.

    Reports the empirical constant |<f,g>| / (||f||_{p,q,v} ||g||_{p',q',1/v});
    the discrete Hölder chain keeps it at or below 1.
    """
    value = inner_product(f, g)
    fn = amalgam_norm(f, params)
    gn = amalgam_norm(g, params.dual())
    bound = fn * gn
    if bound > 0:
        ratio = abs(value) / bound
        holds = ratio <= 1.0 + rtol
    else:
        ratio = 0.0
        holds = abs(value) <= rtol
    return KothePairing(value, fn, gn, bound, ratio, holds)


# -- coefficient spaces ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class GaborCoefficients:
    """Coefficient array c[k, t] over the lattice points (k*alpha, t*beta).

    Rows follow the time nodes k = 0..L/alpha-1, columns the frequency
    nodes t = 0..s/beta-1 of the grid band (symmetric representatives are
    used for truncation decisions).
    """

    lattice: TFLattice
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.complex128)
        want = (self.lattice.time_nodes, self.lattice.freq_nodes)
        if e.shape != want:
            raise ValueError(f"expected entries of shape {want}, got {e.shape}")
        if not np.all(np.isfinite(e.real)) or not np.all(np.isfinite(e.imag)):
            raise ValueError("coefficients must be finite")
        e = e.copy()
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def grid(self) -> GridSpec:
        return self.lattice.grid

    @classmethod
    def zeros(cls, lattice: TFLattice):
        return cls(lattice, np.zeros((lattice.time_nodes, lattice.freq_nodes)))

    def with_entries(self, entries) -> "GaborCoefficients":
        return GaborCoefficients(self.lattice, entries)

    def energy(self) -> float:
        return float(np.sum(np.abs(self.entries) ** 2))


def multiplier_samples(c: GaborCoefficients) -> np.ndarray:
    """Per time node, the trig polynomial m_k(x) = sum_t c[k,t] e^{2pi i t beta x}
    sampled on the s/beta grid points of Q_beta = [0, 1/beta)."""
    J = c.lattice.freq_nodes
    return np.fft.ifft(c.entries, axis=1) * J


def sequence_norm(c: GaborCoefficients, params: AmalgamParams) -> float:
    """Sequence-space norm: l^q_v over time nodes of ||m_k||_{L^p(Q_beta)}."""
    lat = c.lattice
    mk = multiplier_samples(c)
    local = _local_lp(mk, params.p, lat.grid.delta)
    anchors = sym_rep_array(lat.time_values(), lat.grid.L)
    weights = np.array([weight_eval(params.v, x) for x in anchors])
    return _combine_lq(local, weights, params.q)


def sequence_norm_quadrature(c: GaborCoefficients, params: AmalgamParams) -> float:
    """Same norm with the trig polynomials evaluated point by point.

    Slow; kept as the independent cross-check of the FFT evaluation.
    """
    lat = c.lattice
    J = lat.freq_nodes
    x = np.arange(J) / lat.grid.s
    freqs = lat.freq_values()
    mk = np.empty((lat.time_nodes, J), dtype=np.complex128)
    for k in range(lat.time_nodes):
        mk[k] = sum(c.entries[k, t] * np.exp(2j * np.pi * freqs[t] * x) for t in range(J))
    local = _local_lp(mk, params.p, lat.grid.delta)
    anchors = sym_rep_array(lat.time_values(), lat.grid.L)
    weights = np.array([weight_eval(params.v, xv) for xv in anchors])
    return _combine_lq(local, weights, params.q)


# -- inequality checks -----------------------------------------------------


@dataclass(frozen=True)
class TranslationBound:
    x: float
    translated_norm: float
    base_norm: float
    bound_constant: float
    ratio: float
    holds: bool


def translation_norm_bound_check(f: SampledFunction, x, params: AmalgamParams,
                                 rtol: float = 1e-12) -> TranslationBound:
    """Verify ||T_x f|| <= C_v w(x) ||f|| in the amalgam norm.

    The translated norm is taken over the covering shifted by x, i.e. the
    equivalent covering in which T_x maps cells onto cells; for integer x
    this is the plain cell covering.
    """
    base = amalgam_norm(f, params)
    shifted = amalgam_norm(translate(f, x), params, cell_offset=x)
    cv = params.v.C_v
    wx = weight_eval(params.w, sym_rep(x, f.grid.L))
    bound = cv * wx
    ratio = shifted / base if base > 0 else 0.0
    return TranslationBound(float(x), shifted, base, bound, ratio, ratio <= bound * (1 + rtol))


@dataclass(frozen=True)
class SolidityCheck:
    product_norm: float
    multiplier_sup: float
    base_norm: float
    bound: float
    holds: bool


def solidity_check(f: SampledFunction, m: SampledFunction, params: AmalgamParams,
                   rtol: float = 1e-12) -> SolidityCheck:
    """Verify the solidity bound ||m f|| <= sup|m| ||f||."""
    if f.grid != m.grid:
        raise GridMismatch("multiplier and function grids differ")
    lhs = amalgam_norm(m * f, params)
    sup = m.sup_norm
    base = amalgam_norm(f, params)
    rhs = sup * base
    return SolidityCheck(lhs, sup, base, rhs, lhs <= rhs * (1 + rtol) + 1e-300)
