"""The Banach *-algebra of L^inf-weighted shift operators.

An element is a finite family {(x, m_x)} acting on sampled functions as
f -> sum_x m_x * T_x f.  Composition convolves the shifts while translating
the multipliers, the involution is the discrete l2 adjoint, and the algebra
norm is sum_x sup|m_x| * w(x).  On a periodic grid the shifts reduce modulo
the period, so each grid carries a finite-dimensional instance of the
algebra; a dense n x n matrix oracle is available for property checks.

Inversion uses the Neumann series for (M*M)^{-1} built from a two-sided
quadratic-form bracket A <= M*M <= B, followed by M^{-1} = (M*M)^{-1} M*.
Since exact inversion lives in an infinite algebra, truncation and
multiplier pruning are inevitable here; both are tracked and reported so an
inverse always carries an explicit error budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    GridMismatch,
    GridTooLarge,
    NotConverged,
    SingularOperator,
)
from .grid import GridSpec, SampledFunction, sym_rep_array
from .weights import WeightSpec, weight_eval

DENSE_EIG_CUTOFF = 1024
DENSE_ORACLE_MAX = 4096


class ShiftOperator:
    """Finite weighted-shift operator sum_x m_x T_x on one grid.

    Terms are stored sorted by canonical shift (in samples) with read-only
    multiplier rows; instances are immutable values.  ``terms`` maps a shift
    (in grid units, canonical mod the period) to its multiplier samples;
    multipliers may be arrays or :class:`SampledFunction` instances.
    """

    __slots__ = ("grid", "shifts", "mults")

    def __init__(self, grid: GridSpec, terms=()):
        if isinstance(terms, dict):
            terms = terms.items()
        bucket = {}
        for shift, mult in terms:
            k = grid.shift_samples(shift)
            vals = mult.values if isinstance(mult, SampledFunction) else np.asarray(mult, dtype=np.complex128)
            if vals.shape != (grid.n,):
                raise ValueError(f"multiplier for shift {shift!r} has shape {vals.shape}, expected ({grid.n},)")
            if not np.all(np.isfinite(vals.real)) or not np.all(np.isfinite(vals.imag)):
                raise ValueError("multipliers must be finite")
            if k in bucket:
                bucket[k] = bucket[k] + vals
            else:
                bucket[k] = vals.astype(np.complex128, copy=True)
        keep = sorted(k for k, v in bucket.items() if np.abs(v).max(initial=0.0) > 0.0)
        shifts = np.asarray(keep, dtype=np.int64)
        mults = np.zeros((len(keep), grid.n), dtype=np.complex128)
        for i, k in enumerate(keep):
            mults[i] = bucket[k]
        self._init_raw(grid, shifts, mults)

    def _init_raw(self, grid, shifts, mults):
        shifts.setflags(write=False)
        mults.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "shifts", shifts)
        object.__setattr__(self, "mults", mults)

    def __setattr__(self, name, value):
        raise AttributeError("ShiftOperator is immutable")

    @classmethod
    def _from_raw(cls, grid, shifts, mults):
        """Trusted constructor: shifts already canonical, sorted, unique."""
        op = cls.__new__(cls)
        op._init_raw(grid, np.ascontiguousarray(shifts, dtype=np.int64),
                     np.ascontiguousarray(mults, dtype=np.complex128))
        return op

    @classmethod
    def identity(cls, grid):
        return cls(grid, {0.0: np.ones(grid.n)})

    @classmethod
    def zero(cls, grid):
        return cls(grid, {})

    @classmethod
    def multiplication(cls, m: SampledFunction):
        return cls(m.grid, {0.0: m})

    @classmethod
    def pure_shift(cls, grid, x):
        return cls(grid, {x: np.ones(grid.n)})

    # -- inspection -------------------------------------------------------

    @property
    def n_terms(self) -> int:
        return len(self.shifts)

    def shift_values(self) -> np.ndarray:
        """Shifts in grid units, canonical in [0, L)."""
        return self.shifts * self.grid.delta

    def sym_shift_values(self) -> np.ndarray:
        """Shifts in grid units, symmetric representatives in (-L/2, L/2]."""
        return sym_rep_array(self.shifts * self.grid.delta, self.grid.L)

    def sup_norms(self) -> np.ndarray:
        """Per-term sup|m_x|, in shift order."""
        if not self.n_terms:
            return np.zeros(0)
        return np.abs(self.mults).max(axis=1)

    def term(self, x) -> SampledFunction:
        """Multiplier at shift x (zero function when absent)."""
        k = self.grid.shift_samples(x)
        idx = np.searchsorted(self.shifts, k)
        if idx < self.n_terms and self.shifts[idx] == k:
            return SampledFunction(self.grid, self.mults[idx])
        return SampledFunction.zero(self.grid)

    def __repr__(self):
        return f"ShiftOperator(n={self.grid.n}, terms={self.n_terms})"

    # -- algebra ----------------------------------------------------------

    def apply(self, f):
        """Evaluate sum_x m_x * T_x f (ascending shift order)."""
        if isinstance(f, SampledFunction):
            if f.grid != self.grid:
                raise GridMismatch("operator and function grids differ")
            return SampledFunction(self.grid, self.matvec(f.values))
        return self.matvec(np.asarray(f, dtype=np.complex128))

    def matvec(self, vec: np.ndarray) -> np.ndarray:
        if not self.n_terms:
            return np.zeros(self.grid.n, dtype=np.complex128)
        return _kernels.apply_shift_terms(self.shifts, self.mults, np.ascontiguousarray(vec, dtype=np.complex128))

    def compose(self, other: "ShiftOperator") -> "ShiftOperator":
        """Operator product self o other (apply ``other`` first)."""
        if self.grid != other.grid:
            raise GridMismatch("cannot compose operators on different grids")
        if not self.n_terms or not other.n_terms:
            return ShiftOperator.zero(self.grid)
        n = self.grid.n
        out_shifts = np.unique((self.shifts[:, None] + other.shifts[None, :]) % n)
        out_rows = np.full(n, -1, dtype=np.int64)
        out_rows[out_shifts] = np.arange(len(out_shifts))
        mults = _kernels.compose_shift_terms(self.shifts, self.mults, other.shifts, other.mults,
                                             out_shifts, out_rows)
        return ShiftOperator._from_raw(self.grid, out_shifts, mults)

    def __matmul__(self, other):
        return self.compose(other)

    def adjoint(self) -> "ShiftOperator":
        """Involution: sum_x conj(m_{-x}(. - x)) T_x; equals the l2 adjoint."""
        n = self.grid.n
        new_shifts = (-self.shifts) % n
        order = np.argsort(new_shifts)
        mults = np.empty_like(self.mults)
        for pos, i in enumerate(order):
            mults[pos] = np.conj(np.roll(self.mults[i], -int(self.shifts[i])))
        return ShiftOperator._from_raw(self.grid, new_shifts[order], mults)

    def __add__(self, other):
        if not isinstance(other, ShiftOperator):
            return NotImplemented
        if self.grid != other.grid:
            raise GridMismatch("cannot add operators on different grids")
        merged = np.union1d(self.shifts, other.shifts)
        rows = np.full(self.grid.n, -1, dtype=np.int64)
        rows[merged] = np.arange(len(merged))
        mults = np.zeros((len(merged), self.grid.n), dtype=np.complex128)
        if self.n_terms:
            mults[rows[self.shifts]] += self.mults
        if other.n_terms:
            mults[rows[other.shifts]] += other.mults
        return ShiftOperator._from_raw(self.grid, merged, mults)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, c):
        if isinstance(c, ShiftOperator):
            return NotImplemented
        return ShiftOperator._from_raw(self.grid, self.shifts.copy(), self.mults * complex(c))

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1.0)

    def prune(self, threshold: float, w: WeightSpec | None = None):
        """Drop terms with sup|m_x| < threshold; returns (operator, loss).

        ``loss`` is the algebra norm (with weight ``w``) of everything
        dropped, i.e. an upper bound for the operator-norm perturbation.
        """
        if threshold <= 0 or not self.n_terms:
            return self, 0.0
        sup = self.sup_norms()
        keep = sup >= threshold
        if keep.all():
            return self, 0.0
        ws = _weight_at_shifts(self, w)
        loss = float(np.sum(sup[~keep] * ws[~keep]))
        return ShiftOperator._from_raw(self.grid, self.shifts[keep], self.mults[keep]), loss

    def aw_norm(self, w: WeightSpec | None = None) -> float:
        """Algebra norm sum_x sup|m_x| * w(x), weight at symmetric shifts."""
        if not self.n_terms:
            return 0.0
        return float(np.sum(self.sup_norms() * _weight_at_shifts(self, w)))

    def to_dense(self, max_n: int = DENSE_ORACLE_MAX) -> np.ndarray:
        """Matrix of ``apply`` in the sample basis (oracle; small grids only)."""
        n = self.grid.n
        if n > max_n:
            raise GridTooLarge(f"dense oracle limited to n <= {max_n}, grid has n = {n}")
        dense = np.zeros((n, n), dtype=np.complex128)
        rows = np.arange(n)
        for i in range(self.n_terms):
            dense[rows, (rows - self.shifts[i]) % n] += self.mults[i]
        return dense


def _weight_at_shifts(M: ShiftOperator, w: WeightSpec | None) -> np.ndarray:
    if w is None:
        return np.ones(M.n_terms)
    return np.array([weight_eval(w, x) for x in M.sym_shift_values()])


# -- norm and spectrum estimates -----------------------------------------


def _row_col_sums(M: ShiftOperator):
    """Max absolute row/column sums of the dense matrix, computed term-wise."""
    n = M.grid.n
    row = np.zeros(n)
    col = np.zeros(n)
    for i in range(M.n_terms):
        a = np.abs(M.mults[i])
        row += a
        col += np.roll(a, -int(M.shifts[i]))
    return float(row.max(initial=0.0)), float(col.max(initial=0.0))


def _is_selfadjoint(M: ShiftOperator, rtol=1e-10) -> bool:
    diff = M - M.adjoint()
    return diff.aw_norm() <= rtol * max(M.aw_norm(), 1e-300)


def _extreme_eigs_dense(dense: np.ndarray):
    h = 0.5 * (dense + dense.conj().T)
    vals = np.linalg.eigvalsh(h)
    return float(vals[0]), float(vals[-1])


def _extreme_eigs_lanczos(op: ShiftOperator, tol, maxiter):
    from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

    n = op.grid.n
    lin = LinearOperator((n, n), matvec=op.matvec, dtype=np.complex128)
    v0 = np.random.default_rng(0x5EED).standard_normal(n)
    try:
        top = eigsh(lin, k=1, which="LA", tol=tol, maxiter=maxiter, v0=v0, return_eigenvectors=False)
        bot = eigsh(lin, k=1, which="SA", tol=tol, maxiter=maxiter, v0=v0, return_eigenvectors=False)
    except ArpackNoConvergence as exc:
        raise NotConverged(f"Lanczos eigenvalue estimation failed: {exc}") from exc
    return float(bot[0]), float(top[0])


def operator_norm_bounds(M: ShiftOperator, p, dense_cutoff: int = DENSE_EIG_CUTOFF,
                         tol: float = 1e-10, maxiter: int = 10000):
    """Certified bracket (lower, upper) for the operator norm on l^p.

    For p in {1, inf} the matrix norms are exact column/row sums and the
    bracket collapses.  For p = 2 small grids use a dense eigen/singular
    solve; larger grids combine a Lanczos lower estimate with the rigorous
    interpolation bound sqrt(norm_1 * norm_inf).
    """
    if not M.n_terms:
        return 0.0, 0.0
    row, col = _row_col_sums(M)
    if p == 1:
        return col, col
    if np.isinf(p):
        return row, row
    if p != 2:
        raise ValueError("operator_norm_bounds supports p in {1, 2, inf}")
    if M.grid.n <= dense_cutoff:
        dense = M.to_dense()
        if _is_selfadjoint(M):
            lo, hi = _extreme_eigs_dense(dense)
            v = max(abs(lo), abs(hi))
        else:
            v = float(np.linalg.norm(dense, 2))
        return v, v
    gram = M.adjoint() @ M
    _, top = _extreme_eigs_lanczos(gram, tol, maxiter)
    lower = math.sqrt(max(top, 0.0))
    return lower, min(math.sqrt(row * col), M.aw_norm())


def quadratic_form_bounds(M: ShiftOperator, dense_cutoff: int = DENSE_EIG_CUTOFF,
                          tol: float = 1e-10, maxiter: int = 10000,
                          singular_rtol: float = 1e-14):
    """Two-sided bracket (A, B) with A <= M*M <= B as quadratic forms.

    Dense eigensolve up to ``dense_cutoff``; Lanczos beyond.  Raises
    :class:`SingularOperator` when the lower bound sits at noise level.
    """
    gram = M.adjoint() @ M
    if not gram.n_terms:
        raise SingularOperator("operator is zero")
    if M.grid.n <= dense_cutoff:
        lo, hi = _extreme_eigs_dense(gram.to_dense())
    else:
        lo, hi = _extreme_eigs_lanczos(gram, tol, maxiter)
    if lo <= singular_rtol * max(hi, 1e-300):
        raise SingularOperator(f"lower quadratic-form bound {lo:.3e} is at noise level (B = {hi:.3e})")
    return lo, hi


# -- Neumann inversion ----------------------------------------------------


@dataclass(frozen=True)
class NeumannInversion:
    """Inverse operator plus the certification data gathered on the way."""

    operator: ShiftOperator
    terms_used: int
    A: float
    B: float
    last_term_awnorm: float
    tail_estimate: float
    prune_loss: float
    residual_left: float
    residual_right: float


def neumann_inverse(M: ShiftOperator, A: float | None = None, B: float | None = None, *,
                    tol: float = 1e-12, max_terms: int = 100000, prune: float = 1e-14,
                    w: WeightSpec | None = None, probes: int = 8,
                    residual_tol: float | None = None) -> NeumannInversion:
    """Invert M through the Neumann series for (M*M)^{-1}.

    With c = 2/(A+B) the series (M*M)^{-1} = c * sum_k (I - c M*M)^k
    converges whenever 0 < A <= M*M <= B; the result is c * (truncated sum)
    composed with M*.  Truncation stops once the newest term's algebra norm
    drops below ``tol`` times the accumulated algebra norm (cheap, and it is
    the norm in which convergence is guaranteed).  Multipliers below
    ``prune`` are dropped after every step; the dropped algebra-norm mass is
    accumulated in ``prune_loss``.

    A two-sided identity check on random probes certifies the result;
    failure raises :class:`NotConverged`.
    """
    if A is None or B is None:
        A, B = quadratic_form_bounds(M)
    if A <= 0:
        raise SingularOperator(f"lower bound A = {A} is not positive")
    if not (A <= B and math.isfinite(B)):
        raise ValueError(f"need 0 < A <= B < inf, got A={A}, B={B}")
    grid = M.grid
    c = 2.0 / (A + B)
    gram = M.adjoint() @ M
    step = ShiftOperator.identity(grid) - c * gram
    term = ShiftOperator.identity(grid)
    acc = term
    prune_loss = 0.0
    ratio = (B - A) / (B + A)
    terms_used = max_terms
    t_norm = term.aw_norm(w)
    converged = False
    for k in range(1, max_terms + 1):
        term = term @ step
        term, loss = term.prune(prune, w)
        prune_loss += loss
        acc = acc + term
        t_norm = term.aw_norm(w)
        if t_norm <= tol * acc.aw_norm(w):
            terms_used = k
            converged = True
            break
    if not converged:
        raise NotConverged(f"Neumann series still moving after {max_terms} terms "
                           f"(last term norm {t_norm:.3e})")
    inv_gram = c * acc
    R = inv_gram @ M.adjoint()
    R, loss = R.prune(prune, w)
    prune_loss += loss

    res_l, res_r = _identity_residuals(M, R, probes)
    if residual_tol is None:
        residual_tol = tol * max(100.0, 10.0 * (A + B) / (2.0 * A))
    if max(res_l, res_r) > residual_tol:
        raise NotConverged(
            f"inverse failed the identity check: residuals ({res_l:.3e}, {res_r:.3e}) "
            f"exceed {residual_tol:.3e}")
    tail = c * t_norm * ratio / (1.0 - ratio) if ratio < 1.0 else math.inf
    return NeumannInversion(R, terms_used, A, B, t_norm, tail, prune_loss, res_l, res_r)


def _identity_residuals(M: ShiftOperator, R: ShiftOperator, probes: int):
    rng = np.random.default_rng(0x1F2E3D)
    n = M.grid.n
    res_l = res_r = 0.0
    for _ in range(max(1, probes)):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        nv = np.linalg.norm(v)
        res_l = max(res_l, np.linalg.norm(R.matvec(M.matvec(v)) - v) / nv)
        res_r = max(res_r, np.linalg.norm(M.matvec(R.matvec(v)) - v) / nv)
    return float(res_l), float(res_r)


# -- diagnostics ----------------------------------------------------------


@dataclass(frozen=True)
class DecayRow:
    radius: float
    tail: float
    ratio: float


@dataclass(frozen=True)
class DecayProfile:
    total: float
    rows: tuple[DecayRow, ...]


def coefficient_decay_profile(M: ShiftOperator, w: WeightSpec | None, radii) -> DecayProfile:
    """Weighted tail mass T(K) = sum_{|x| > K} sup|m_x| w(x) per radius K.

    A finite, rapidly vanishing tail is the observable signature of the
    inverse staying inside the weighted algebra.
    """
    total = M.aw_norm(w)
    sup = M.sup_norms()
    ws = _weight_at_shifts(M, w)
    xs = np.abs(M.sym_shift_values())
    rows = []
    for K in radii:
        tail = float(np.sum(sup[xs > K] * ws[xs > K]))
        rows.append(DecayRow(float(K), tail, tail / total if total > 0 else 0.0))
    return DecayProfile(total, tuple(rows))


@dataclass(frozen=True)
class ContinuityRow:
    shift: float
    omegas: tuple[float, ...]
    flagged: bool


@dataclass(frozen=True)
class ContinuityReport:
    h_steps: tuple[int, ...]
    rows: tuple[ContinuityRow, ...]


def continuity_flag(M: ShiftOperator, h_steps=(1, 2, 4), ratio_threshold: float = 0.75,
                    atol: float = 1e-14) -> ContinuityReport:
    """Discrete modulus of continuity of every multiplier at several scales.

    omega(h) = max_l |m_x[l+h] - m_x[l]| for each step h (in samples).  A
    multiplier is flagged when omega at the finest step fails to drop below
    ``ratio_threshold`` times omega at the coarsest step, the fingerprint of
    a jump discontinuity surviving refinement.
    """
    steps = tuple(sorted(int(h) for h in h_steps))
    if not steps or steps[0] < 1:
        raise ValueError("h_steps must be positive integers")
    rows = []
    for i in range(M.n_terms):
        m = M.mults[i]
        omegas = tuple(float(np.abs(np.roll(m, -h) - m).max()) for h in steps)
        coarse = omegas[-1]
        flagged = coarse > atol and omegas[0] > ratio_threshold * coarse
        rows.append(ContinuityRow(float(M.shifts[i] * M.grid.delta), omegas, flagged))
    return ContinuityReport(steps, tuple(rows))
