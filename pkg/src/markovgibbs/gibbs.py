"""Perron eigendata, stochasticization, and exact cylinder measures.

An edge potential assigns a real value to every edge of a primitive
transition matrix.  Its weight matrix ``exp(values)`` has a unique dominant
positive eigenvalue (the Perron root); dividing out the root and the left
eigenvector produces a column-stochastic matrix ``Q`` whose entries are the
exponentials of the normalized potential.  Together with its stationary
vector, ``Q`` evaluates the Gibbs measure of the potential on cylinder sets
in closed form.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import PreconditionError, SolverError
from .shiftcore import (
    TransitionMatrix,
    ShiftStructure,
    _word_rows,
    is_admissible,
    require_primitive,
    simple_cycles,
    structure,
)

__all__ = [
    "Potential",
    "PerronData",
    "GibbsChain",
    "weight_matrix",
    "perron",
    "normalize",
    "cylinder_measure",
    "gibbs_ratio_bounds",
    "ks_entropy",
    "cycle_sum",
    "chains_cohomologous",
    "cohomologous_with_constant",
]


class Potential:
    """Real values attached to the edges of a transition matrix.

    Models a function of one-sided sequences that depends only on the first
    two symbols: ``values[(i, j)]`` is the value on the cylinder of
    sequences starting ``i, j``.  Exactly the edges of the base matrix must
    carry values.
    """

    def __init__(self, base: TransitionMatrix, values):
        vals = {(int(i), int(j)): float(v) for (i, j), v in dict(values).items()}
        edges = set(base.edges)
        missing = edges - set(vals)
        extra = set(vals) - edges
        if missing or extra:
            raise PreconditionError(
                f"potential must be defined exactly on the edges; "
                f"missing {sorted(missing)}, extraneous {sorted(extra)}"
            )
        if not all(math.isfinite(v) for v in vals.values()):
            raise PreconditionError("potential values must be finite")
        self.base = base
        self.values = {e: vals[e] for e in base.edges}

    @classmethod
    def constant(cls, base: TransitionMatrix, value: float) -> "Potential":
        return cls(base, {e: value for e in base.edges})

    @classmethod
    def from_matrix(cls, base: TransitionMatrix, matrix) -> "Potential":
        """Pick edge values out of a dense array; off-edge cells are ignored."""
        values = {}
        for i, j in base.edges:
            cell = matrix[i - 1][j - 1]
            if cell is None:
                raise PreconditionError(f"missing potential value on edge ({i}, {j})")
            values[(i, j)] = float(cell)
        return cls(base, values)

    def __getitem__(self, edge):
        return self.values[edge]

    def __repr__(self):
        return f"Potential(n={self.base.n}, {len(self.values)} edges)"


@dataclass(frozen=True)
class PerronData:
    """Dominant eigendata of a non-negative matrix.

    ``left`` is normalized to sum 1 and ``right`` scaled so that
    ``left @ right == 1``; both are entrywise positive.
    """

    root: float
    left: np.ndarray
    right: np.ndarray


def weight_matrix(potential: Potential) -> np.ndarray:
    """Entrywise exponential of the potential, zero off the edges."""
    n = potential.base.n
    out = np.zeros((n, n))
    for (i, j), v in potential.values.items():
        out[i - 1, j - 1] = math.exp(v)
    return out


def perron(matrix, *, residual_tol=1e-12, step_tol=1e-14, max_iter=1_000_000) -> PerronData:
    """Perron root and positive left/right eigenvectors by power iteration.

    Iterates from the uniform vector with L1 renormalization, stopping once
    successive iterates settle below ``step_tol`` and both eigen-residuals
    fall below ``residual_tol`` relative to the root.  The iteration runs
    on the diagonally shifted matrix ``M + sI`` with ``s`` the maximum row
    sum: the shift leaves eigenvectors alone but separates the dominant
    root from negative and complex eigenvalues, which otherwise stall the
    iteration on matrices with a near ``+/-`` eigenvalue pair.  Root and
    residuals are reported for the unshifted matrix.  Non-convergence
    raises :class:`SolverError`.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise PreconditionError("matrix must be square")
    if (m < 0).any():
        raise PreconditionError("matrix must be non-negative")
    if (m.sum(axis=1) == 0).any() or (m.sum(axis=0) == 0).any():
        raise PreconditionError("matrix must have no zero row or column")
    n = m.shape[0]
    shift = float(m.sum(axis=1).max())
    work = m + shift * np.eye(n)
    work_t = work.T
    v = np.full(n, 1.0 / n)
    u = np.full(n, 1.0 / n)
    root = None
    for _ in range(max_iter):
        wv = work @ v
        wu = work_t @ u
        v_next = wv / wv.sum()
        u_next = wu / wu.sum()
        delta = max(np.abs(v_next - v).max(), np.abs(u_next - u).max())
        v, u = v_next, u_next
        if delta <= step_tol:
            candidate = float(u @ (m @ v) / (u @ v))
            if candidate <= 0:
                raise SolverError("power iteration produced a non-positive root")
            left_res = np.abs(u @ m - candidate * u).max()
            right_res = np.abs(m @ v - candidate * v).max()
            if left_res <= residual_tol * candidate and right_res <= residual_tol * candidate:
                root = candidate
                break
    if root is None:
        raise SolverError(
            "power iteration did not converge; the support pattern may not be primitive"
        )
    if v.min() <= 0 or u.min() <= 0:
        raise SolverError("eigenvectors are not strictly positive")
    left = u / u.sum()
    right = v / (left @ v)
    left.setflags(write=False)
    right.setflags(write=False)
    return PerronData(root, left, right)


class GibbsChain:
    """Column-stochastic matrix of a Gibbs measure plus its stationary vector.

    ``q[i-1, j-1]`` is positive exactly on the edges and each column sums
    to 1; ``pi`` solves ``q @ pi == pi`` with positive entries summing to 1
    and equals the measure of the length-1 cylinders.  ``exact``, when
    present, holds the same entries as :class:`~fractions.Fraction` values
    keyed by edge, enabling exact comparisons downstream.
    """

    def __init__(self, base: TransitionMatrix, q: np.ndarray, pi: np.ndarray, exact=None):
        require_primitive(base)
        q = np.asarray(q, dtype=float)
        pi = np.asarray(pi, dtype=float)
        mask = base.entries == 1
        if q.shape != (base.n, base.n):
            raise PreconditionError("stochastic matrix has the wrong shape")
        if (q[~mask] != 0).any():
            raise PreconditionError("stochastic matrix must vanish off the edges")
        if (q[mask] <= 0).any() or (q[mask] > 1).any():
            raise PreconditionError("edge entries must lie in (0, 1]")
        if np.abs(q.sum(axis=0) - 1.0).max() > 1e-9:
            raise PreconditionError("columns must sum to 1")
        if pi.shape != (base.n,) or pi.min() <= 0:
            raise PreconditionError("stationary vector must be positive")
        q.setflags(write=False)
        pi.setflags(write=False)
        self.base = base
        self.q = q
        self.pi = pi
        self.exact = None if exact is None else dict(exact)

    @classmethod
    def from_stochastic(cls, base: TransitionMatrix, entries) -> "GibbsChain":
        """Build a chain directly from column-stochastic edge entries.

        ``entries`` maps edges to values.  If every value is rational
        (:class:`~fractions.Fraction` or int), column sums must equal 1
        exactly and the exact entries are retained; float input is accepted
        with column sums within 1e-9 of 1 and rescaled to machine-exact
        stochasticity.
        """
        require_primitive(base)
        vals = {(int(i), int(j)): v for (i, j), v in dict(entries).items()}
        if set(vals) != set(base.edges):
            raise PreconditionError("entries must be given exactly on the edges")
        exact_mode = all(isinstance(v, (Fraction, int, numbers.Integral)) for v in vals.values())
        n = base.n
        if exact_mode:
            exact = {e: Fraction(v) for e, v in vals.items()}
            if any(v <= 0 for v in exact.values()):
                raise PreconditionError("edge entries must be positive")
            for col in range(1, n + 1):
                s = sum((v for (i, j), v in exact.items() if j == col), Fraction(0))
                if s != 1:
                    raise PreconditionError(f"column {col} sums to {s}, expected exactly 1")
            q = np.zeros((n, n))
            for (i, j), v in exact.items():
                q[i - 1, j - 1] = float(v)
        else:
            exact = None
            q = np.zeros((n, n))
            for (i, j), v in vals.items():
                q[i - 1, j - 1] = float(v)
            sums = q.sum(axis=0)
            if np.abs(sums - 1.0).max() > 1e-9:
                raise PreconditionError("columns must sum to 1 within 1e-9")
            q = q / sums
        pi = _stationary(q)
        return cls(base, q, pi, exact)

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def edge_mask(self) -> np.ndarray:
        return self.base.entries == 1

    @property
    def structure(self) -> ShiftStructure:
        return structure(self.base)

    def value(self, i: int, j: int) -> float:
        if not self.base.has_edge(i, j):
            raise PreconditionError(f"({i}, {j}) is not an edge")
        return float(self.q[i - 1, j - 1])

    def exact_value(self, i: int, j: int):
        """Exact entry on an edge, or None when the chain is numeric."""
        if self.exact is None:
            return None
        return self.exact[(i, j)]

    def normalized_potential(self) -> Potential:
        """The potential ``log q`` on edges; its stochasticization is the chain itself."""
        return Potential(self.base, {e: math.log(self.q[e[0] - 1, e[1] - 1]) for e in self.base.edges})

    def __repr__(self):
        mode = "exact" if self.exact is not None else "numeric"
        return f"GibbsChain(n={self.n}, {mode})"


def _stationary(q: np.ndarray) -> np.ndarray:
    """Positive solution of q @ pi == pi with entries summing to 1."""
    n = q.shape[0]
    system = np.vstack([q - np.eye(n), np.ones((1, n))])
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    pi, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    pi = pi / pi.sum()
    if pi.min() <= 0:
        raise SolverError("stationary vector is not strictly positive")
    if np.abs(q @ pi - pi).max() > 1e-12:
        raise SolverError("stationary vector residual exceeds 1e-12")
    return pi


def normalize(potential: Potential):
    """Stochasticize a potential.

    Returns ``(chain, perron_data)`` where the chain's matrix is
    ``root**-1 * left[i] * exp(values[i, j]) / left[j]`` on edges.  Columns
    are rescaled to machine-exact stochasticity (the drift is at the
    eigensolver residual scale, well below every comparison tolerance
    used).  Applying ``normalize`` to the chain's own normalized potential
    reproduces the same matrix with root 1 and uniform left eigenvector.
    """
    require_primitive(potential.base)
    m = weight_matrix(potential)
    data = perron(m)
    q = (data.left[:, None] * m / data.left[None, :]) / data.root
    q = q / q.sum(axis=0)
    pi = _stationary(q)
    return GibbsChain(potential.base, q, pi), data


def cylinder_measure(chain: GibbsChain, word) -> float:
    """Measure of the set of sequences starting with the given word.

    The closed form is the product of the chain entries along the word's
    edges times the stationary mass of the final symbol.  The empty word
    has measure 1; inadmissible words have measure 0.
    """
    w = tuple(int(s) for s in word)
    if not w:
        return 1.0
    if not is_admissible(chain.base, w):
        return 0.0
    product = 1.0
    for i, j in zip(w, w[1:]):
        product *= chain.q[i - 1, j - 1]
    return product * float(chain.pi[w[-1] - 1])


def gibbs_ratio_bounds(chain: GibbsChain, potential: Potential, pressure: float, max_len: int = 10):
    """Extrema of measure-to-Birkhoff-weight ratios over short cylinders.

    For each admissible word ``w`` of length up to ``max_len`` the ratio
    ``mu([w]) / exp(-|w| * pressure + S)`` is bracketed, where ``S`` sums
    the potential along the word's own edges plus one continuation term for
    the final symbol, taken maximal for the lower bound and minimal for the
    upper bound.  Finite positive output certifies the defining Gibbs
    inequalities at the explored depth.
    """
    if potential.base != chain.base:
        raise PreconditionError("potential and chain must share the base matrix")
    if max_len < 1:
        raise PreconditionError("max_len must be at least 1")
    n = chain.n
    fmat = np.zeros((n, n))
    for (i, j), v in potential.values.items():
        fmat[i - 1, j - 1] = v
    cont_min = np.empty(n)
    cont_max = np.empty(n)
    for s in range(1, n + 1):
        succ = chain.base.successors(s)
        vals = [potential.values[(s, j)] for j in succ]
        cont_min[s - 1] = min(vals)
        cont_max[s - 1] = max(vals)
    lo = math.inf
    hi = 0.0
    for length in range(1, max_len + 1):
        rows = _word_rows(chain.base, length)
        heads = rows[:, :-1] - 1
        tails = rows[:, 1:] - 1
        edge_sum = fmat[heads, tails].sum(axis=1)
        mu = chain.q[heads, tails].prod(axis=1) * chain.pi[rows[:, -1] - 1]
        last = rows[:, -1] - 1
        ratio_low = mu / np.exp(-length * pressure + edge_sum + cont_max[last])
        ratio_high = mu / np.exp(-length * pressure + edge_sum + cont_min[last])
        lo = min(lo, float(ratio_low.min()))
        hi = max(hi, float(ratio_high.max()))
    return lo, hi


def ks_entropy(chain: GibbsChain) -> float:
    """Entropy of the stationary chain, in nats per symbol.

    Computes ``-sum over edges of pi[j] * q[i, j] * log q[i, j]``; edges
    carrying the value 1 contribute nothing.
    """
    mask = chain.edge_mask
    q = chain.q
    logq = np.zeros_like(q)
    logq[mask] = np.log(q[mask])
    return float(-(q * logq * chain.pi[None, :])[mask].sum())


def cycle_sum(chain: GibbsChain, cycle) -> float:
    """Sum of the normalized potential (log of chain entries) along a cycle."""
    w = tuple(int(s) for s in cycle)
    if len(w) < 2 or w[0] != w[-1]:
        raise PreconditionError("cycle must close up: first and last symbols equal")
    if not is_admissible(chain.base, w):
        raise PreconditionError(f"cycle {w} is not admissible")
    return float(sum(math.log(chain.q[i - 1, j - 1]) for i, j in zip(w, w[1:])))


def chains_cohomologous(chain_a: GibbsChain, chain_b: GibbsChain, tol: float = 1e-10):
    """Compare cycle sums of two chains over every simple cycle.

    Two potentials differ by a coboundary plus a constant exactly when
    their normalized versions agree on all cycle sums, and sums over simple
    cycles generate all of them.  Returns ``(True, None)`` or ``(False,
    witness_cycle)``.  When both chains carry exact entries the comparison
    is exact.
    """
    if chain_a.base != chain_b.base:
        raise PreconditionError("chains must share the base matrix")
    exact = chain_a.exact is not None and chain_b.exact is not None
    for cycle in simple_cycles(chain_a.base):
        if exact:
            prod_a = math.prod((chain_a.exact[(i, j)] for i, j in zip(cycle, cycle[1:])), start=Fraction(1))
            prod_b = math.prod((chain_b.exact[(i, j)] for i, j in zip(cycle, cycle[1:])), start=Fraction(1))
            if prod_a != prod_b:
                return False, cycle
        elif abs(cycle_sum(chain_a, cycle) - cycle_sum(chain_b, cycle)) > tol:
            return False, cycle
    return True, None


def cohomologous_with_constant(f: Potential, g: Potential, tol: float = 1e-10):
    """Whether two potentials differ by a coboundary plus a constant.

    Returns ``(True, None)`` when all simple-cycle sums of the normalized
    potentials agree within ``tol``, else ``(False, witness_cycle)``.
    """
    if f.base != g.base:
        raise PreconditionError("potentials must share the base matrix")
    chain_f, _ = normalize(f)
    chain_g, _ = normalize(g)
    return chains_cohomologous(chain_f, chain_g, tol)
