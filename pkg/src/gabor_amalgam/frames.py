"""Multi-window frame operators, dual atoms, and reconstruction.

The frame operator of a multi-window system is the sum of the per-system
Walnut operators, hence itself a weighted-shift operator.  Whenever its
spectrum stays away from zero it is inverted through the Neumann series,
and the dual atoms are the inverse applied to every lattice atom.  For a
single window the inverse commutes with the lattice shifts, so only the
dual window needs computing; a verification pass keeps that shortcut
honest.  For genuinely multi-window systems no such structure is assumed:
atoms are materialized one by one and the commutation defect is only ever
reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .amalgam import AmalgamParams, GaborCoefficients, amalgam_norm
from .errors import GridMismatch, IndexMismatch, NotAFrame
from .gabor import GaborSystem, analysis, coefficient_mask, synthesis, walnut_operator
from .grid import GridSpec, SampledFunction, lp_norm, tf_shift
from .shift_algebra import (
    DENSE_EIG_CUTOFF,
    NeumannInversion,
    ShiftOperator,
    _extreme_eigs_dense,
    _extreme_eigs_lanczos,
    neumann_inverse,
)
from .util import parallel_fill


@dataclass(frozen=True)
class MultiWindowSystem:
    """A finite family of Gabor systems sharing one grid."""

    systems: tuple[GaborSystem, ...]

    def __post_init__(self):
        systems = tuple(self.systems)
        if not systems:
            raise ValueError("need at least one system")
        grid = systems[0].grid
        for sys in systems[1:]:
            if sys.grid != grid:
                raise GridMismatch("all systems must share one grid")
        object.__setattr__(self, "systems", systems)

    @classmethod
    def single(cls, sys: GaborSystem):
        return cls((sys,))

    @property
    def grid(self) -> GridSpec:
        return self.systems[0].grid

    def __len__(self):
        return len(self.systems)

    def resample(self, s: int) -> "MultiWindowSystem":
        return MultiWindowSystem(tuple(sys.resample(s) for sys in self.systems))


def multi_frame_operator(msys: MultiWindowSystem, prune_rel: float = 1e-14) -> ShiftOperator:
    """Frame operator S = sum_i synthesis_i o analysis_i in Walnut form."""
    total = ShiftOperator.zero(msys.grid)
    for sys in msys.systems:
        total = total + walnut_operator(sys.window, sys.window, sys.lattice, prune_rel=prune_rel)
    return total


@dataclass(frozen=True)
class FrameBounds:
    A: float
    B: float

    @property
    def condition(self) -> float:
        return self.B / self.A if self.A > 0 else math.inf


def frame_bounds(S: ShiftOperator, dense_cutoff: int = DENSE_EIG_CUTOFF,
                 selfadjoint_rtol: float = 1e-10, frame_rtol: float = 1e-10,
                 tol: float = 1e-10, maxiter: int = 10000) -> FrameBounds:
    """Extreme eigenvalues of the (self-adjoint) frame operator.

    Raises :class:`NotAFrame` when the lower bound is at noise level
    relative to the upper one.
    """
    herm_defect = (S - S.adjoint()).aw_norm()
    if herm_defect > selfadjoint_rtol * max(S.aw_norm(), 1e-300):
        raise ValueError(f"operator is not self-adjoint (defect {herm_defect:.3e})")
    if S.grid.n <= dense_cutoff:
        lo, hi = _extreme_eigs_dense(S.to_dense())
    else:
        lo, hi = _extreme_eigs_lanczos(S, tol, maxiter)
    if lo <= frame_rtol * max(hi, 1e-300):
        raise NotAFrame(f"lower frame bound {lo:.3e} vanishes against B = {hi:.3e}")
    return FrameBounds(lo, hi)


@dataclass(frozen=True)
class FrameInversion:
    """Frame operator, its bounds, and the certified Neumann inverse."""

    operator: ShiftOperator
    inverse: ShiftOperator
    bounds: FrameBounds
    neumann: NeumannInversion


def invert_frame_operator(source, *, tol: float = 1e-12, max_terms: int = 100000,
                          prune: float = 1e-14, dense_cutoff: int = DENSE_EIG_CUTOFF,
                          residual_tol: float | None = None) -> FrameInversion:
    """Invert the frame operator of a system (or a given self-adjoint S).

    Since S is self-adjoint, the Neumann series runs on S^2 with the squared
    frame bounds, and S^{-1} = (S^2)^{-1} S.  The two-sided identity check
    from the Neumann step is enforced.
    """
    if isinstance(source, MultiWindowSystem):
        S = multi_frame_operator(source)
    elif isinstance(source, GaborSystem):
        S = multi_frame_operator(MultiWindowSystem.single(source))
    else:
        S = source
    bounds = frame_bounds(S, dense_cutoff=dense_cutoff)
    inv = neumann_inverse(S, bounds.A**2, bounds.B**2, tol=tol, max_terms=max_terms,
                          prune=prune, residual_tol=residual_tol)
    return FrameInversion(S, inv.operator, bounds, inv)


# -- dual atoms -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DualAtomSet:
    """Dual atoms S^{-1} pi(lambda) g^i, materialized per lattice index.

    ``atoms[i]`` has shape (time_nodes_i, freq_nodes_i, n).  When a system
    was filled through the single-window commutation shortcut, the recorded
    residual is the worst relative defect of the shortcut on the verified
    subset.
    """

    system: MultiWindowSystem
    atoms: tuple[np.ndarray, ...]
    via_shortcut: tuple[bool, ...]
    shortcut_residual: tuple[float, ...]

    def atom(self, i: int, k: int, t: int) -> SampledFunction:
        return SampledFunction(self.system.grid, self.atoms[i][k, t])

    def dual_window(self, i: int = 0) -> SampledFunction:
        return self.atom(i, 0, 0)

    def count(self) -> int:
        return sum(a.shape[0] * a.shape[1] for a in self.atoms)


def dual_atoms(msys: MultiWindowSystem, S_inv: ShiftOperator, *,
               shortcut: str = "auto", verify_points: int = 16) -> DualAtomSet:
    """Apply S^{-1} to every lattice atom of every system.

    ``shortcut='auto'`` uses the lattice-commutation shortcut (dual window
    plus time-frequency shifts) for single-window systems and verifies it
    against direct application on up to ``verify_points`` random indices;
    'never' forces direct materialization; 'always' insists on the shortcut
    (only valid for single-window systems).
    """
    if S_inv.grid != msys.grid:
        raise GridMismatch("inverse operator grid differs from the system grid")
    if shortcut not in ("auto", "never", "always"):
        raise ValueError(f"unknown shortcut mode {shortcut!r}")
    use_shortcut = (shortcut == "always") or (shortcut == "auto" and len(msys) == 1)
    if shortcut == "always" and len(msys) != 1:
        raise ValueError("the commutation shortcut is only valid for single-window systems")
    atoms = []
    flags = []
    residuals = []
    rng = np.random.default_rng(0xA70A5)
    for sys in msys.systems:
        lat = sys.lattice
        K, J = lat.time_nodes, lat.freq_nodes
        block = np.empty((K, J, msys.grid.n), dtype=np.complex128)
        if use_shortcut:
            gd = S_inv.apply(sys.window)

            def fill_row(k, _sys=sys, _gd=gd, _block=block, _J=J):
                for t in range(_J):
                    _block[k, t] = tf_shift(_gd, _sys.lattice.point(k, t)).values

            parallel_fill(range(K), fill_row)
            worst = 0.0
            total = K * J
            picks = min(verify_points, total)
            chosen = rng.choice(total, size=picks, replace=False) if picks < total else np.arange(total)
            for flat in chosen:
                k, t = divmod(int(flat), J)
                direct = S_inv.apply(sys.atom(k, t)).values
                denom = np.linalg.norm(direct)
                if denom > 0:
                    worst = max(worst, np.linalg.norm(direct - block[k, t]) / denom)
            flags.append(True)
            residuals.append(float(worst))
        else:
            def fill_row(k, _sys=sys, _block=block, _J=J):
                for t in range(_J):
                    _block[k, t] = S_inv.apply(_sys.atom(k, t)).values

            parallel_fill(range(K), fill_row)
            flags.append(False)
            residuals.append(0.0)
        atoms.append(block)
    return DualAtomSet(msys, tuple(atoms), tuple(flags), tuple(residuals))


@dataclass(frozen=True)
class CommutationReport:
    """Relative defect of S^{-1} pi(lambda) g = pi(lambda) S^{-1} g per system."""

    residuals: tuple[float, ...]


def lattice_commutation_check(msys: MultiWindowSystem, S_inv: ShiftOperator) -> CommutationReport:
    out = []
    for sys in msys.systems:
        gd = S_inv.apply(sys.window)
        worst = 0.0
        for k in range(sys.lattice.time_nodes):
            for t in range(sys.lattice.freq_nodes):
                direct = S_inv.apply(sys.atom(k, t)).values
                shifted = tf_shift(gd, sys.lattice.point(k, t)).values
                denom = np.linalg.norm(direct)
                if denom > 0:
                    worst = max(worst, np.linalg.norm(direct - shifted) / denom)
        out.append(float(worst))
    return CommutationReport(tuple(out))


# -- reconstruction ---------------------------------------------------------


@dataclass(frozen=True)
class ErrorTriple:
    l2: float
    linf: float
    amalgam: float
    l2_relative: float


@dataclass(frozen=True)
class ReconstructionReport:
    N: float
    M: float
    mode: str
    primal_from_dual: "SampledFunction"
    dual_from_primal: "SampledFunction"
    errors_primal_from_dual: ErrorTriple
    errors_dual_from_primal: ErrorTriple


def _same_system(a: MultiWindowSystem, b: MultiWindowSystem) -> bool:
    if a is b:
        return True
    if len(a) != len(b) or a.grid != b.grid:
        return False
    return all(
        sa.lattice == sb.lattice and np.array_equal(sa.window.values, sb.window.values)
        for sa, sb in zip(a.systems, b.systems))


def _error_triple(f: SampledFunction, rec: SampledFunction, params: AmalgamParams) -> ErrorTriple:
    diff = f - rec
    l2 = lp_norm(diff, 2)
    ref = lp_norm(f, 2)
    return ErrorTriple(l2, lp_norm(diff, np.inf), amalgam_norm(diff, params),
                       l2 / ref if ref > 0 else l2)


def _fejer_column_weights(lattice, M) -> np.ndarray:
    ts = np.abs(lattice.freq_sym_indices())
    return np.where(ts <= M, 1.0 - ts / (float(M) + 1.0), 0.0)


def reconstruct(msys: MultiWindowSystem, duals: DualAtomSet, f: SampledFunction,
                N=None, M=None, mode: str = "raw",
                params: AmalgamParams | None = None) -> tuple[SampledFunction, ReconstructionReport]:
    """Both dual expansions of f truncated to |k| <= N, |j| <= M.

    The primary return is sum_i sum_lambda <f, dual atom> primal atom; the
    mirrored expansion (analysis against the primal atoms, synthesis with
    the duals) is computed alongside and both error triples are reported.
    ``mode='fejer'`` additionally scales each frequency column by the
    triangular weight r_{j,M}.
    """
    if not _same_system(duals.system, msys):
        raise IndexMismatch("dual atoms belong to a different system")
    if f.grid != msys.grid:
        raise GridMismatch("signal grid differs from the system grid")
    if mode not in ("raw", "fejer"):
        raise ValueError(f"unknown mode {mode!r}")
    if params is None:
        params = AmalgamParams(2.0, 2.0)
    delta = msys.grid.delta
    rec_a = np.zeros(msys.grid.n, dtype=np.complex128)
    rec_b = np.zeros(msys.grid.n, dtype=np.complex128)
    for i, sys in enumerate(msys.systems):
        lat = sys.lattice
        n_cap = max(lat.time_nodes, lat.freq_nodes)
        Ni = n_cap if N is None else N
        Mi = n_cap if M is None else M
        mask = coefficient_mask(lat, Ni, Mi).astype(float)
        if mode == "fejer":
            mask = mask * _fejer_column_weights(lat, Mi)[None, :]
        block = duals.atoms[i]
        # <f, dual atom> then synthesis with the primal window
        c_dual = delta * np.tensordot(np.conj(block), f.values, axes=([2], [0]))
        rec_a += synthesis(sys, GaborCoefficients(lat, c_dual * mask)).values
        # <f, primal atom> then accumulation of dual atoms
        c_primal = analysis(sys, f).entries * mask
        rec_b += np.tensordot(c_primal, block, axes=([0, 1], [0, 1]))
    fa = SampledFunction(msys.grid, rec_a)
    fb = SampledFunction(msys.grid, rec_b)
    report = ReconstructionReport(
        N=float(-1 if N is None else N), M=float(-1 if M is None else M), mode=mode,
        primal_from_dual=fa, dual_from_primal=fb,
        errors_primal_from_dual=_error_triple(f, fa, params),
        errors_dual_from_primal=_error_triple(f, fb, params),
    )
    return fa, report


# -- frame inequality and diagnostics ---------------------------------------


@dataclass(frozen=True)
class FrameCheckRow:
    energy_l2_sq: float
    coefficient_energy: float
    lower: float
    upper: float
    holds: bool


@dataclass(frozen=True)
class FrameCheckReport:
    bounds: FrameBounds
    rows: tuple[FrameCheckRow, ...]
    all_hold: bool


def frame_inequality_check(msys: MultiWindowSystem, batch, bounds: FrameBounds | None = None,
                           rtol: float = 1e-10) -> FrameCheckReport:
    """Verify A ||f||^2 <= sum |<f, atom>|^2 <= B ||f||^2 for each signal."""
    if bounds is None:
        bounds = frame_bounds(multi_frame_operator(msys))
    rows = []
    for f in batch:
        nf2 = lp_norm(f, 2) ** 2
        energy = 0.0
        for sys in msys.systems:
            energy += analysis(sys, f).energy()
        lo, hi = bounds.A * nf2, bounds.B * nf2
        slack = rtol * max(1.0, hi)
        rows.append(FrameCheckRow(nf2, energy, lo, hi,
                                  lo - slack <= energy <= hi + slack))
    return FrameCheckReport(bounds, tuple(rows), all(r.holds for r in rows))


@dataclass(frozen=True)
class ContinuityLevel:
    s: int
    h: float
    omegas: tuple[float, ...]


@dataclass(frozen=True)
class ContinuityTable:
    """Dual-window modulus of continuity across grid refinements.

    ``ratios[m][i]`` is omega at level m+1 over omega at level m for system
    i; values near 1/2 track a Lipschitz dual, stagnation near 1 a jump.
    """

    levels: tuple[ContinuityLevel, ...]
    ratios: tuple[tuple[float, ...], ...]


def continuity_diagnostic(msys: MultiWindowSystem, s_levels, *, tol: float = 1e-10,
                          max_terms: int = 100000, prune: float = 1e-14,
                          dense_cutoff: int = DENSE_EIG_CUTOFF) -> ContinuityTable:
    """Recompute the dual windows at several resolutions and difference them.

    omega(h) = max_l |gd[l+1] - gd[l]| at grid step h = 1/s.  Requires every
    system to carry its analytic window spec.
    """
    levels = []
    for s in sorted(int(s) for s in s_levels):
        re_sys = msys.resample(s)
        inv = invert_frame_operator(re_sys, tol=tol, max_terms=max_terms, prune=prune,
                                    dense_cutoff=dense_cutoff)
        omegas = []
        for sys in re_sys.systems:
            gd = inv.neumann.operator.apply(sys.window).values
            omegas.append(float(np.abs(np.roll(gd, -1) - gd).max()))
        levels.append(ContinuityLevel(s, 1.0 / s, tuple(omegas)))
    ratios = []
    for prev, cur in zip(levels, levels[1:]):
        ratios.append(tuple(
            cur.omegas[i] / prev.omegas[i] if prev.omegas[i] > 0 else math.inf
            for i in range(len(prev.omegas))))
    return ContinuityTable(tuple(levels), tuple(ratios))
