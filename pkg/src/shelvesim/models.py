"""Builders that turn physical parameter sets into concrete model systems.

Four systems are provided: the bare three-level shelving emitter, the same
emitter cascaded with a filter sensor mode, the rubidium-87 D2 hyperfine
realization, and the cavity-QED variant of the cascade (same construction,
arbitrary coupling allowed).

Conventions fixed here and used everywhere else:

* emitter basis order ``(|g>, |a>, |e>)``;
* rubidium atomic basis order ``(|1,-1>, |1,0>, |1,1>, |0,0>)`` with the
  excited ``F_e = 0`` state last;
* combined Hilbert spaces are ordered (emitter ⊗ sensor);
* all rates and energies are in units of the emitter decay rate.
"""

import math
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from .operators import OperatorMatrix, kron
from .spin import wigner3j, zeeman_x_coupling

__all__ = [
    "LambdaParams",
    "SensorConfig",
    "RbParams",
    "ModelSystem",
    "build_lambda_emitter",
    "build_cascaded_sensor",
    "build_rb87_system",
    "build_cavity_qed",
    "transition",
    "lowering",
    "DEFAULT_COUPLING",
    "default_n_max",
]

# Filter-semantics default for the sensor coupling: small enough to sit on the
# coupling-independent plateau, large enough to keep high-order moments above
# the double-precision floor.
DEFAULT_COUPLING = 1e-3


def default_n_max(order: int) -> int:
    """Default Fock truncation for correlations of a given order."""
    return order + 3


@dataclass(frozen=True)
class LambdaParams:
    """Drive and decay parameters of the three-level shelving emitter."""

    omega: float          # Rabi frequency of the strong optical drive
    omega_r: float        # Rabi frequency of the weak shelving drive
    delta_a: float = 0.0  # detuning of the |g> <-> |a> drive
    delta_e: float = 0.0  # detuning of the |g> <-> |e> drive
    gamma1: float = 1.0   # decay rate |e> -> |g>
    gamma2: float = 1.0   # decay rate |e> -> |a>

    def __post_init__(self):
        if self.omega < 0 or self.omega_r < 0:
            raise ValueError("Rabi frequencies must be nonnegative")
        if self.gamma1 <= 0 or self.gamma2 <= 0:
            raise ValueError("decay rates must be strictly positive")


@dataclass(frozen=True)
class SensorConfig:
    """Filter/cavity mode parameters."""

    kappa: float            # mode bandwidth (intensity decay rate)
    g_c: float = DEFAULT_COUPLING  # emitter-mode coupling, > 0
    delta_b: float = 0.0    # mode detuning from the strong drive
    n_max: int | None = None  # Fock truncation; None defers to the correlation order

    def __post_init__(self):
        if self.kappa <= 0:
            raise ValueError("kappa must be strictly positive")
        if self.g_c <= 0:
            raise ValueError("g_c must be strictly positive (the zero-coupling limit is taken by extrapolation, not literally)")
        if self.n_max is not None and self.n_max < 1:
            raise ValueError("n_max must be at least 1")

    def resolved_n_max(self, order: int = 2) -> int:
        return self.n_max if self.n_max is not None else default_n_max(order)


@dataclass(frozen=True)
class RbParams:
    """Parameters of the rubidium-87 D2 ``F_g = 1 -> F_e = 0`` emitter.

    ``v_eg`` is the magnitude of the interaction energy of the sigma+ drive
    on the ``|1,-1> <-> |0,0>`` transition; all quantities are in units of
    the total natural linewidth.
    """

    v_eg: float
    omega_b_field: float   # transverse magnetic coupling strength
    delta_e: float = 0.0   # optical detuning
    delta_s: float = 0.0   # sensor detuning from the laser
    gamma_total: float = 1.0

    def __post_init__(self):
        if self.v_eg < 0 or self.omega_b_field < 0:
            raise ValueError("couplings must be nonnegative")
        if self.gamma_total <= 0:
            raise ValueError("gamma_total must be strictly positive")


@dataclass(frozen=True, eq=False)
class ModelSystem:
    """A built physical model: Hamiltonian, collapse set, named observables."""

    hamiltonian: OperatorMatrix
    collapses: tuple          # of (OperatorMatrix, rate)
    observables: MappingProxyType
    basis_labels: tuple
    hilbert_factors: tuple    # dimensions of the tensor factors

    @property
    def dim(self) -> int:
        return self.hamiltonian.dim

    def observable(self, name: str) -> OperatorMatrix:
        try:
            return self.observables[name]
        except KeyError:
            raise KeyError(
                f"unknown observable {name!r}; available: {sorted(self.observables)}"
            ) from None


def transition(dim: int, i: int, j: int) -> OperatorMatrix:
    """The matrix unit ``|i><j|`` in a ``dim``-dimensional space."""
    m = np.zeros((dim, dim), dtype=np.complex128)
    m[i, j] = 1.0
    return OperatorMatrix(m)


def lowering(n_max: int) -> OperatorMatrix:
    """Bosonic annihilation operator truncated at ``n_max`` quanta."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    return OperatorMatrix(np.diag(np.sqrt(np.arange(1, n_max + 1)), 1))


# basis indices of the emitter
_G, _A, _E = 0, 1, 2


def _lambda_hamiltonian(p: LambdaParams) -> np.ndarray:
    h = np.zeros((3, 3), dtype=np.complex128)
    h[_A, _A] = p.delta_a
    h[_E, _E] = p.delta_e
    h[_E, _G] = p.omega
    h[_G, _E] = p.omega
    h[_G, _A] = p.omega_r
    h[_A, _G] = p.omega_r
    return h


def build_lambda_emitter(p: LambdaParams) -> ModelSystem:
    """Bare three-level emitter: strong drive on |g><->|e>, weak drive on |g><->|a>."""
    h = OperatorMatrix(_lambda_hamiltonian(p))
    sigma_ge = transition(3, _G, _E)
    sigma_ae = transition(3, _A, _E)
    obs = {
        "sigma_gg": transition(3, _G, _G),
        "sigma_aa": transition(3, _A, _A),
        "sigma_ee": transition(3, _E, _E),
        "sigma_ge": sigma_ge,
        "target_transition": sigma_ge,
    }
    return ModelSystem(
        hamiltonian=h,
        collapses=((sigma_ge, p.gamma1), (sigma_ae, p.gamma2)),
        observables=MappingProxyType(obs),
        basis_labels=("g", "a", "e"),
        hilbert_factors=(3,),
    )


def _sensor_factor_obs(atom_dim: int, n_max: int):
    nf = n_max + 1
    b = lowering(n_max)
    eye_atom = OperatorMatrix.identity(atom_dim)
    b_full = kron(eye_atom, b)
    n_full = kron(eye_atom, OperatorMatrix(b.entries.conj().T @ b.entries))
    return b, b_full, n_full, nf


def build_cascaded_sensor(
    p: LambdaParams, s: SensorConfig, *, allow_strong_coupling: bool = False
) -> ModelSystem:
    """Emitter weakly coupled to a lossy sensor mode collecting the |e> -> |g> emission.

    The sensor is a filter stand-in, so unless ``allow_strong_coupling`` is
    set the coupling must satisfy ``g_c <= 1e-2 * max(kappa, 1)``; the
    cavity-QED builder lifts that guard.
    """
    if s.n_max is None:
        raise ValueError("SensorConfig.n_max must be set to build a concrete model")
    if not allow_strong_coupling and s.g_c > 1e-2 * max(s.kappa, 1.0):
        raise ValueError(
            f"g_c = {s.g_c} is too large for filter semantics "
            f"(limit {1e-2 * max(s.kappa, 1.0)}); use build_cavity_qed for physical couplings"
        )
    b, b_full, n_full, nf = _sensor_factor_obs(3, s.n_max)
    eye_f = OperatorMatrix.identity(nf)

    h_atom = kron(OperatorMatrix(_lambda_hamiltonian(p)), eye_f).entries
    h = h_atom + s.delta_b * n_full.entries
    coupling = s.g_c * kron(transition(3, _E, _G), b).entries
    h = h + coupling + coupling.conj().T

    collapses = (
        (kron(transition(3, _G, _E), eye_f), p.gamma1),
        (kron(transition(3, _A, _E), eye_f), p.gamma2),
        (b_full, s.kappa),
    )
    obs = {
        "sigma_ee": kron(transition(3, _E, _E), eye_f),
        "sigma_gg": kron(transition(3, _G, _G), eye_f),
        "sigma_aa": kron(transition(3, _A, _A), eye_f),
        "target_transition": kron(transition(3, _G, _E), eye_f),
        "b": b_full,
        "b_dag_b": n_full,
    }
    labels = tuple(f"{a}|{n}" for a in ("g", "a", "e") for n in range(nf))
    return ModelSystem(
        hamiltonian=OperatorMatrix(h),
        collapses=collapses,
        observables=MappingProxyType(obs),
        basis_labels=labels,
        hilbert_factors=(3, nf),
    )


def build_cavity_qed(p: LambdaParams, s: SensorConfig) -> ModelSystem:
    """Same construction as the cascaded sensor, with physical (finite) coupling allowed."""
    return build_cascaded_sensor(p, s, allow_strong_coupling=True)


# rubidium atomic basis indices: ground Zeeman triplet then the excited state
_RB_LABELS = ("1,-1", "1,0", "1,1", "0,0")
_RB_GROUND_M = (-1, 0, 1)
_RB_E = 3


def rb_drive_couplings(v_eg: float) -> dict[int, float]:
    """Interaction energies of the sigma+ drive onto each ground sublevel.

    Computed through the Wigner-Eckart theorem: the reduced Rabi frequency is
    fixed so that the magnitude on the ``m = -1`` sublevel equals ``v_eg``;
    the 3j selection rule then leaves that single coupling nonzero.
    """
    q = +1  # sigma+ polarization
    # |V_{-1}| = Omega_L * |3j(0 1 1; 0 1 -1)| = Omega_L / sqrt(3)
    omega_l = v_eg * math.sqrt(3)
    out = {}
    for m_g in _RB_GROUND_M:
        threej = wigner3j(0, 1, 1, 0, q, m_g)
        out[m_g] = (-1) ** (0 - 0 + 1) * threej * omega_l
    return out


def build_rb87_system(p: RbParams, s: SensorConfig) -> ModelSystem:
    """Rubidium-87 D2 ``F_g = 1 -> F_e = 0`` emitter cascaded with a sensor.

    The sigma+ drive couples ``|1,-1> <-> |0,0>``, a transverse magnetic
    field mixes the ground Zeeman triplet, spontaneous decay feeds all three
    sublevels at one third of the total linewidth each, and the sensor mode
    collects the ``|0,0> -> |1,-1>`` emission.
    """
    if s.n_max is None:
        raise ValueError("SensorConfig.n_max must be set to build a concrete model")
    if s.delta_b != 0.0:
        raise ValueError("for the rubidium system the sensor detuning is RbParams.delta_s; leave SensorConfig.delta_b at 0")
    b, b_full, n_full, nf = _sensor_factor_obs(4, s.n_max)
    eye_f = OperatorMatrix.identity(nf)

    h_atom = np.zeros((4, 4), dtype=np.complex128)
    h_atom[_RB_E, _RB_E] = p.delta_e
    couplings = rb_drive_couplings(p.v_eg)
    for idx, m_g in enumerate(_RB_GROUND_M):
        v = couplings[m_g]
        h_atom[_RB_E, idx] += v
        h_atom[idx, _RB_E] += np.conj(v)
    fx = zeeman_x_coupling(1).entries  # ground triplet ordered m = -1, 0, +1
    h_atom[:3, :3] += math.sqrt(2) * p.omega_b_field * fx

    h = kron(OperatorMatrix(h_atom), eye_f).entries + p.delta_s * n_full.entries
    coupling = s.g_c * kron(transition(4, _RB_E, 0), b).entries
    h = h + coupling + coupling.conj().T

    collapses = tuple(
        (kron(transition(4, idx, _RB_E), eye_f), p.gamma_total / 3) for idx in range(3)
    ) + ((b_full, s.kappa),)

    obs = {
        "sigma_ee": kron(transition(4, _RB_E, _RB_E), eye_f),
        "target_transition": kron(transition(4, 0, _RB_E), eye_f),
        "b": b_full,
        "b_dag_b": n_full,
    }
    for idx, lbl in enumerate(_RB_LABELS[:3]):
        obs[f"pop_{lbl}"] = kron(transition(4, idx, idx), eye_f)
    labels = tuple(f"{a}|{n}" for a in _RB_LABELS for n in range(nf))
    return ModelSystem(
        hamiltonian=OperatorMatrix(h),
        collapses=collapses,
        observables=MappingProxyType(obs),
        basis_labels=labels,
        hilbert_factors=(4, nf),
    )
