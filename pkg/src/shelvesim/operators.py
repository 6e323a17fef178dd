"""Dense operator and superoperator algebra for finite-dimensional open systems.

Everything here works on plain complex matrices wrapped in thin immutable
containers.  Density matrices are vectorized by column stacking
(``rho.reshape(-1, order="F")``), and every superoperator in the package is
expressed in that convention.  Rates are dimensionless (units of the emitter
decay rate), so no unit handling happens at this level.
"""

import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg

__all__ = [
    "OperatorMatrix",
    "DensityMatrix",
    "SuperOperator",
    "ShelvesimError",
    "DimensionMismatchError",
    "DegenerateSteadyStateError",
    "SteadyStateConvergenceError",
    "kron",
    "dissipator",
    "build_liouvillian",
    "steady_state",
    "propagate",
    "expectation",
    "vectorize",
    "unvectorize",
]

# Tolerances used by construction-time checks.
HERMITICITY_ATOL = 1e-12
TRACE_ATOL = 1e-10
EIGENVALUE_FLOOR = -1e-9
# Relative residual required of the steady-state solve.
STEADY_STATE_RTOL = 1e-9
# Condition number of the eigenvector matrix beyond which propagation falls
# back to the scaling-and-squaring matrix exponential.
EIGENBASIS_COND_LIMIT = 1e12


class ShelvesimError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(ShelvesimError, ValueError):
    """Operands act on Hilbert spaces of different dimension."""


class DegenerateSteadyStateError(ShelvesimError):
    """The generator has more than one steady state; the bordered solve is singular."""


class SteadyStateConvergenceError(ShelvesimError):
    """The steady-state residual could not be refined below tolerance."""


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, order="C")
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """A dense complex square matrix acting on a Hilbert space of dimension ``dim``."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"operator must be a square matrix, got shape {a.shape}")
        object.__setattr__(self, "entries", _freeze(a))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T)

    def is_hermitian(self, atol: float = HERMITICITY_ATOL) -> bool:
        return bool(np.max(np.abs(self.entries - self.entries.conj().T)) <= atol)

    @staticmethod
    def identity(dim: int) -> "OperatorMatrix":
        return OperatorMatrix(np.eye(dim, dtype=np.complex128))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A physical state: unit trace, Hermitian, positive within numerical floor."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {a.shape}")
        tr = np.trace(a)
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValueError(f"trace must be 1 within {TRACE_ATOL}, got {tr}")
        herm = np.max(np.abs(a - a.conj().T))
        if herm > TRACE_ATOL:
            raise ValueError(f"not Hermitian: max|rho - rho^dag| = {herm}")
        w = np.linalg.eigvalsh((a + a.conj().T) / 2)
        if w.min() < EIGENVALUE_FLOOR:
            raise ValueError(f"negative eigenvalue {w.min()} below floor {EIGENVALUE_FLOOR}")
        object.__setattr__(self, "entries", _freeze(a))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @staticmethod
    def pure(dim: int, index: int) -> "DensityMatrix":
        a = np.zeros((dim, dim), dtype=np.complex128)
        a[index, index] = 1.0
        return DensityMatrix(a)


@dataclass(frozen=True, eq=False)
class SuperOperator:
    """A dense matrix of shape (dim^2, dim^2) acting on column-stacked density matrices."""

    dim: int
    entries: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        a = np.asarray(self.entries)
        d2 = self.dim * self.dim
        if a.shape != (d2, d2):
            raise ValueError(f"superoperator for dim {self.dim} must have shape {(d2, d2)}, got {a.shape}")
        object.__setattr__(self, "entries", _freeze(a))


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(rho).reshape(-1, order="F")


def unvectorize(v: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    return np.asarray(v).reshape((dim, dim), order="F")


def kron(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    """Tensor product with the first factor as the slow index.

    The package-wide ordering is (emitter ⊗ sensor): the left factor varies
    slowest in the combined basis.
    """
    return OperatorMatrix(np.kron(a.entries, b.entries))


# Sweeps rebuild the same collapse operators and (often) the same Hamiltonian
# at every grid point; assembling their superoperators dominates the cost of
# small solves, so unit-rate dissipators and commutator parts are memoized by
# matrix content.  Capped to modest dimensions to bound memory.
_CACHE_DIM_LIMIT = 24


def _unit_dissipator(cm: np.ndarray) -> np.ndarray:
    d = cm.shape[0]
    eye = np.eye(d, dtype=np.complex128)
    cdc = cm.conj().T @ cm
    return (
        np.kron(cm.conj(), cm)
        - 0.5 * np.kron(eye, cdc)
        - 0.5 * np.kron(cdc.T, eye)
    )


@lru_cache(maxsize=8)
def _unit_dissipator_cached(dim: int, c_bytes: bytes) -> np.ndarray:
    cm = np.frombuffer(c_bytes, dtype=np.complex128).reshape(dim, dim)
    out = _unit_dissipator(cm)
    out.flags.writeable = False
    return out


def dissipator(c: OperatorMatrix, rate: float) -> SuperOperator:
    """Vectorized Lindblad dissipator ``rate * (c rho c^dag - {c^dag c, rho}/2)``."""
    if rate < 0:
        raise ValueError(f"dissipation rate must be nonnegative, got {rate}")
    if c.dim <= _CACHE_DIM_LIMIT:
        unit = _unit_dissipator_cached(c.dim, c.entries.tobytes())
    else:
        unit = _unit_dissipator(c.entries)
    return SuperOperator(c.dim, rate * unit)


def _commutator_super(h: np.ndarray) -> np.ndarray:
    d = h.shape[0]
    eye = np.eye(d, dtype=np.complex128)
    return -1j * (np.kron(eye, h) - np.kron(h.T, eye))


@lru_cache(maxsize=8)
def _commutator_super_cached(dim: int, h_bytes: bytes) -> np.ndarray:
    h = np.frombuffer(h_bytes, dtype=np.complex128).reshape(dim, dim)
    out = _commutator_super(h)
    out.flags.writeable = False
    return out


def _commutator_part(h: np.ndarray) -> np.ndarray:
    if h.shape[0] <= _CACHE_DIM_LIMIT:
        return _commutator_super_cached(h.shape[0], h.tobytes())
    return _commutator_super(h)


def build_liouvillian(h: OperatorMatrix, collapses) -> SuperOperator:
    """Assemble the generator of a Lindblad master equation.

    Parameters
    ----------
    h : OperatorMatrix
        Hamiltonian; must be Hermitian to within ``HERMITICITY_ATOL``.
    collapses : iterable of (OperatorMatrix, float)
        Collapse operators with their nonnegative rates.  May be empty, in
        which case the generator is purely unitary.
    """
    if not h.is_hermitian():
        dev = np.max(np.abs(h.entries - h.entries.conj().T))
        raise ValueError(f"Hamiltonian is not Hermitian: max deviation {dev}")
    sup = _commutator_part(h.entries)
    for c, rate in collapses:
        if c.dim != h.dim:
            raise DimensionMismatchError(
                f"collapse operator dim {c.dim} does not match Hamiltonian dim {h.dim}"
            )
        sup = sup + dissipator(c, rate).entries
    return SuperOperator(h.dim, sup)


def _trace_row(dim: int) -> np.ndarray:
    row = np.zeros(dim * dim, dtype=np.complex128)
    row[:: dim + 1] = 1.0
    return row


def steady_state(l: SuperOperator) -> DensityMatrix:
    """Unique stationary state of a trace-preserving generator.

    Solves the bordered linear system obtained by replacing the first
    diagonal-element row of ``l`` with the trace condition, then refines the
    solution iteratively until ``||L vec(rho)||_inf <= 1e-9 ||L||_inf``.

    Raises
    ------
    DegenerateSteadyStateError
        If the stationary manifold has dimension greater than one (the
        bordered system is singular).
    SteadyStateConvergenceError
        If refinement cannot reach the residual tolerance.
    """
    d = l.dim
    lm = l.entries
    a = lm.copy()
    a[0, :] = _trace_row(d)
    b = np.zeros(d * d, dtype=np.complex128)
    b[0] = 1.0

    norm_l = np.max(np.abs(lm).sum(axis=1))
    tol = STEADY_STATE_RTOL * norm_l

    def residual(x):
        return np.max(np.abs(lm @ x))

    try:
        with warnings.catch_warnings():
            # exact singularity surfaces as NaN in the solution; the LAPACK
            # zero-pivot warning is redundant with the error raised below
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu = scipy.linalg.lu_factor(a)
    except np.linalg.LinAlgError as exc:  # exactly singular factorization
        raise DegenerateSteadyStateError(str(exc)) from exc
    with np.errstate(all="ignore"):
        x = scipy.linalg.lu_solve(lu, b)
        if not np.all(np.isfinite(x)):
            raise DegenerateSteadyStateError(
                "bordered steady-state system is singular; "
                "the stationary manifold is degenerate"
            )
        for _ in range(10):
            if residual(x) <= tol:
                break
            r = b - a @ x
            dx = scipy.linalg.lu_solve(lu, r)
            if not np.all(np.isfinite(dx)):
                raise DegenerateSteadyStateError(
                    "iterative refinement diverged; degenerate stationary manifold"
                )
            x = x + dx
    if residual(x) > tol:
        # Distinguish a degenerate manifold from plain ill-conditioning.
        w = np.linalg.eigvals(lm)
        near_zero = int(np.sum(np.abs(w) <= 1e-10 * max(norm_l, 1.0)))
        if near_zero > 1:
            raise DegenerateSteadyStateError(
                f"{near_zero} near-zero eigenvalues: stationary manifold is degenerate"
            )
        raise SteadyStateConvergenceError(
            f"residual {residual(x):.3e} above tolerance {tol:.3e} after refinement"
        )
    rho = unvectorize(x, d)
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho)


def _orthonormalize_degenerate_clusters(w: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Replace eigenvector-cluster bases of (near-)degenerate eigenvalues by
    orthonormal ones; any basis of a true eigenspace is valid, and this keeps
    the eigenvector matrix well conditioned."""
    v = v.copy()
    used = np.zeros(len(w), dtype=bool)
    for i in range(len(w)):
        if used[i]:
            continue
        cluster = np.where(~used & (np.abs(w - w[i]) <= 1e-8 * max(1.0, abs(w[i]))))[0]
        used[cluster] = True
        if len(cluster) > 1:
            q, _ = np.linalg.qr(v[:, cluster])
            v[:, cluster] = q
    return v


def _propagator_pieces(l: SuperOperator):
    """Eigendecomposition of the generator, cached on the SuperOperator.

    Returns ``None`` when the eigenbasis is unusable (ill-conditioned or the
    decomposition fails to reconstruct the generator, as for defective
    matrices); propagation then uses the matrix exponential.
    """
    cache = l._cache
    if "eig" not in cache:
        w, v = np.linalg.eig(l.entries)
        v = _orthonormalize_degenerate_clusters(w, v)
        cond = np.linalg.cond(v)
        if cond > EIGENBASIS_COND_LIMIT:
            cache["eig"] = None
        else:
            vinv = np.linalg.inv(v)
            scale = max(1.0, np.max(np.abs(l.entries)))
            recon = np.max(np.abs((v * w) @ vinv - l.entries))
            cache["eig"] = None if recon > 1e-7 * scale else (w, v, vinv)
    return cache["eig"]


def propagator_matrix(l: SuperOperator, tau: float) -> np.ndarray:
    """Dense matrix ``exp(L tau)``, via the cached eigenbasis when well conditioned."""
    if tau < 0:
        raise ValueError(f"propagation time must be nonnegative, got {tau}")
    pieces = _propagator_pieces(l)
    if pieces is None:
        return scipy.linalg.expm(l.entries * tau)
    w, v, vinv = pieces
    return (v * np.exp(w * tau)) @ vinv


def propagate(l: SuperOperator, rho0: DensityMatrix, tau: float) -> DensityMatrix:
    """Evolve ``rho0`` for a time ``tau`` under the generator ``l``.

    The eigendecomposition of ``l`` is computed once and cached, so repeated
    calls at many times are cheap.  If the eigenbasis is ill-conditioned
    (condition number above 1e12) each call falls back to
    ``scipy.linalg.expm``.
    """
    if tau < 0:
        raise ValueError(f"propagation time must be nonnegative, got {tau}")
    if rho0.dim != l.dim:
        raise DimensionMismatchError(f"state dim {rho0.dim} does not match generator dim {l.dim}")
    if tau == 0.0:
        return rho0
    v0 = vectorize(rho0.entries)
    pieces = _propagator_pieces(l)
    if pieces is None:
        vt = scipy.linalg.expm(l.entries * tau) @ v0
    else:
        w, v, vinv = pieces
        vt = v @ (np.exp(w * tau) * (vinv @ v0))
    rho = unvectorize(vt, l.dim)
    rho = (rho + rho.conj().T) / 2
    # trace must survive to 1e-9; sub-tolerance rounding noise is normalized
    # away so the result satisfies the density-matrix invariants exactly
    tr = np.trace(rho).real
    if abs(tr - 1.0) > 1e-9:
        raise SteadyStateConvergenceError(
            f"propagation lost the trace: deviation {abs(tr - 1.0):.3e} exceeds 1e-9"
        )
    return DensityMatrix(rho / tr)


def expectation(op: OperatorMatrix, rho: DensityMatrix) -> complex:
    """``tr(op rho)`` as a complex number; callers discard the imaginary part
    for Hermitian observables (it is below 1e-10 there)."""
    if op.dim != rho.dim:
        raise DimensionMismatchError(f"operator dim {op.dim} does not match state dim {rho.dim}")
    return complex(np.trace(op.entries @ rho.entries))
