"""Single-window Gabor machinery on a periodic grid.

Analysis and synthesis run over the finite lattice (alpha Z x beta Z)
restricted to one period and one grid band.  Both have a literal
inner-product implementation (the oracle) and an FFT path that folds the
windowed signal over the 1/beta cells; the two agree to roundoff.

The frame-type operator synthesis_h o analysis_g is assembled directly in
its Walnut form: a weighted-shift operator whose multipliers are the
periodized window correlations G_j and whose shifts step by 1/beta.  On the
grid this representation is exact, which is what the oracle tests check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .amalgam import AmalgamParams, GaborCoefficients, amalgam_norm
from .errors import GridMismatch, LatticeMismatch, OutOfRange
from .grid import SampledFunction, TFLattice, inner_product, sym_rep_array, tf_shift
from .shift_algebra import ShiftOperator
from .weights import WeightSpec, weight_eval
from .windows import WindowSpec


@dataclass(frozen=True)
class GaborSystem:
    """A window together with the lattice indexing its time-frequency shifts.

    ``window_spec`` optionally records the analytic generator so the system
    can be re-sampled at other resolutions (needed by the grid-refinement
    diagnostics).
    """

    window: SampledFunction
    lattice: TFLattice
    window_spec: WindowSpec | None = None

    def __post_init__(self):
        if self.window.grid != self.lattice.grid:
            raise GridMismatch("window and lattice live on different grids")
        if self.window.sup_norm == 0.0:
            raise ValueError("window must be nonzero")

    @property
    def grid(self):
        return self.window.grid

    def atom(self, k: int, t: int) -> SampledFunction:
        """The lattice atom pi(k*alpha, t*beta) applied to the window."""
        return tf_shift(self.window, self.lattice.point(k, t))

    def resample(self, s: int) -> "GaborSystem":
        """Regenerate the system at a different resolution (needs the spec)."""
        if self.window_spec is None:
            raise ValueError("system carries no analytic window; cannot resample")
        from .grid import GridSpec

        grid = GridSpec(self.grid.L, int(s))
        return GaborSystem(self.window_spec.sample(grid),
                           TFLattice(grid, self.lattice.alpha, self.lattice.beta),
                           self.window_spec)


def _check_coeffs(sys: GaborSystem, c: GaborCoefficients):
    if c.lattice != sys.lattice:
        raise LatticeMismatch("coefficients indexed by a different lattice")


def analysis(sys: GaborSystem, f: SampledFunction, method: str = "fft") -> GaborCoefficients:
    """Gabor coefficients c[k, t] = <f, pi(k*alpha, t*beta) g>.

    ``method='fft'`` folds the windowed signal over the 1/beta cells and
    transforms along frequency; ``method='direct'`` evaluates every inner
    product literally and serves as the oracle.
    """
    if f.grid != sys.grid:
        raise GridMismatch("signal and system grids differ")
    lat = sys.lattice
    K, J, a = lat.time_nodes, lat.freq_nodes, lat.a_samples
    if method == "direct":
        ent = np.empty((K, J), dtype=np.complex128)
        for k in range(K):
            for t in range(J):
                ent[k, t] = inner_product(f, sys.atom(k, t))
        return GaborCoefficients(lat, ent)
    if method != "fft":
        raise ValueError(f"unknown analysis method {method!r}")
    g = sys.window.values
    folds = sys.grid.n // J
    ent = np.empty((K, J), dtype=np.complex128)
    for k in range(K):
        u = f.values * np.conj(np.roll(g, k * a))
        ent[k] = np.fft.fft(u.reshape(folds, J).sum(axis=0))
    return GaborCoefficients(lat, ent * sys.grid.delta)


def synthesis(sys: GaborSystem, c: GaborCoefficients, method: str = "fft") -> SampledFunction:
    """Finite expansion sum_{k,t} c[k,t] pi(k*alpha, t*beta) g.

    Per time node this is m_k * T_{k alpha} g with m_k the trigonometric
    polynomial carrying that node's frequency coefficients.
    """
    _check_coeffs(sys, c)
    lat = sys.lattice
    K, J, a = lat.time_nodes, lat.freq_nodes, lat.a_samples
    if method == "direct":
        out = np.zeros(sys.grid.n, dtype=np.complex128)
        for k in range(K):
            for t in range(J):
                out += c.entries[k, t] * sys.atom(k, t).values
        return SampledFunction(sys.grid, out)
    if method != "fft":
        raise ValueError(f"unknown synthesis method {method!r}")
    g = sys.window.values
    folds = sys.grid.n // J
    out = np.zeros(sys.grid.n, dtype=np.complex128)
    for k in range(K):
        mk = np.fft.ifft(c.entries[k]) * J
        out += np.tile(mk, folds) * np.roll(g, k * a)
    return SampledFunction(sys.grid, out)


def coefficient_mask(lattice: TFLattice, N, M) -> np.ndarray:
    """Boolean (K, J) mask keeping |k| <= N and |t| <= M in symmetric indices."""
    ks = np.abs(lattice.time_sym_indices())
    ts = np.abs(lattice.freq_sym_indices())
    return (ks[:, None] <= N) & (ts[None, :] <= M)


def partial_sum(sys: GaborSystem, c: GaborCoefficients, N, M) -> SampledFunction:
    """Box truncation of the expansion: |k|_inf <= N time nodes, |j|_inf <= M
    frequency nodes (max-norm boxes in the symmetric index representatives)."""
    if N < 0 or M < 0:
        raise ValueError("N and M must be nonnegative")
    _check_coeffs(sys, c)
    masked = np.where(coefficient_mask(sys.lattice, N, M), c.entries, 0.0)
    return synthesis(sys, c.with_entries(masked))


def fejer_weight(j, M: int, beta) -> float:
    """Triangular regularizing weight r_{j,M} = 1 - |j| / (beta (M+1)).

    ``j`` is a frequency value in beta Z; the weight is only defined for
    |j| <= beta (M+1) (it reaches 0 on the boundary).
    """
    if M < 0:
        raise OutOfRange("M must be nonnegative")
    cap = float(beta) * (M + 1)
    if abs(j) > cap * (1 + 1e-12):
        raise OutOfRange(f"frequency {j} outside the admissible box |j| <= {cap}")
    return 1.0 - abs(float(j)) / cap


def regularized_sum(sys: GaborSystem, c: GaborCoefficients, N, M) -> SampledFunction:
    """Fejér-regularized partial sum: each kept frequency column is scaled by
    the triangular weight, which per time node turns m_k into its Fejér mean."""
    if N < 0 or M < 0:
        raise ValueError("N and M must be nonnegative")
    _check_coeffs(sys, c)
    lat = sys.lattice
    ts = lat.freq_sym_indices()
    keep = np.abs(ts) <= M
    weights = np.where(keep, 1.0 - np.abs(ts) / (float(M) + 1.0), 0.0)
    masked = np.where(coefficient_mask(lat, N, M), c.entries, 0.0) * weights[None, :]
    return synthesis(sys, c.with_entries(masked))


# -- Walnut form -----------------------------------------------------------


def _correlation(gv: np.ndarray, hv: np.ndarray, a: int, K: int, offset: int) -> np.ndarray:
    out = np.zeros(gv.shape[0], dtype=np.complex128)
    for k in range(K):
        out += np.conj(np.roll(gv, offset + k * a)) * np.roll(hv, k * a)
    return out


def walnut_correlation(g: SampledFunction, h: SampledFunction, lattice: TFLattice, j: int) -> SampledFunction:
    """Periodized window correlation
    G_j(x) = sum_k conj(g(x - j/beta - alpha k)) h(x - alpha k),
    with k running over the time nodes of one period."""
    if g.grid != h.grid or g.grid != lattice.grid:
        raise GridMismatch("windows and lattice must share one grid")
    offset = (int(j) * lattice.freq_nodes) % g.grid.n
    return SampledFunction(g.grid, _correlation(g.values, h.values, lattice.a_samples,
                                                lattice.time_nodes, offset))


@dataclass(frozen=True)
class WalnutBuild:
    """Walnut assembly of synthesis_h o analysis_g plus its bookkeeping."""

    operator: ShiftOperator
    kept: int
    pruned: int
    pruned_mass: float
    summability: float
    window_bound: float
    empirical_constant: float


def walnut_build(g: SampledFunction, h: SampledFunction, lattice: TFLattice,
                 w: WeightSpec | None = None, prune_rel: float = 1e-14) -> WalnutBuild:
    """Assemble beta^{-1} sum_j G_j T_{j/beta} and its summability report.

    Correlations with sup|G_j| below ``prune_rel`` times the largest are
    dropped (their mass is reported).  ``summability`` is the weighted sum
    sum_j sup|G_j| w(j/beta) over all j, and ``window_bound`` the product
    ||g||_{W(L^inf, L^1_w)} ||h||_{W(L^inf, L^1_w)} that dominates it.
    """
    if g.grid != h.grid or g.grid != lattice.grid:
        raise GridMismatch("windows and lattice must share one grid")
    grid = g.grid
    J = lattice.freq_nodes
    count = grid.n // J
    sups = np.empty(count)
    correlations = []
    for j in range(count):
        G = _correlation(g.values, h.values, lattice.a_samples, lattice.time_nodes, j * J)
        correlations.append(G)
        sups[j] = np.abs(G).max(initial=0.0)
    weight = w if w is not None else WeightSpec.trivial()
    shift_units = sym_rep_array(np.arange(count) * (J * grid.delta), grid.L)
    wvals = np.array([weight_eval(weight, x) for x in shift_units])
    summability = float(np.sum(sups * wvals))
    params = AmalgamParams(np.inf, 1.0, v=weight, w=weight)
    window_bound = amalgam_norm(g, params) * amalgam_norm(h, params)
    cutoff = prune_rel * sups.max(initial=0.0)
    terms = {}
    pruned = 0
    pruned_mass = 0.0
    inv_beta = 1.0 / lattice.beta
    for j in range(count):
        if sups[j] > cutoff:
            terms[j * J * grid.delta] = inv_beta * correlations[j]
        else:
            pruned += 1
            pruned_mass += inv_beta * sups[j] * wvals[j]
    op = ShiftOperator(grid, terms)
    emp = summability / window_bound if window_bound > 0 else 0.0
    return WalnutBuild(op, len(terms), pruned, pruned_mass, summability, window_bound, emp)


def walnut_operator(g: SampledFunction, h: SampledFunction, lattice: TFLattice,
                    prune_rel: float = 1e-14) -> ShiftOperator:
    """The weighted-shift form of synthesis_h o analysis_g."""
    return walnut_build(g, h, lattice, prune_rel=prune_rel).operator
