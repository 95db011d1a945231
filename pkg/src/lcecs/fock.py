"""Truncated Fock-space engine for the qubit + two LC oscillator system.

The Hilbert space is qubit (x) Fock(n1) (x) Fock(n2) with the qubit index
slowest, i.e. amplitude index q*n1*n2 + k1*n2 + k2.  Hamiltonians are sparse
and exactly Hermitian by construction; segments are propagated with the
scaling-and-truncated-Taylor action of the matrix exponential on the state
vector (`scipy.sparse.linalg.expm_multiply`), which matches a dense matrix
exponential to solver accuracy while staying fast at the cutoffs needed for
large initial amplitudes.

Same conventions as the analytic side: sigma_z |0> = -|0>, ħ = 1,
frequencies in rad/ns, times in ns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply
from scipy.stats import poisson

from .coherent import CoherentSuperposition
from .protocol import DeviceParams, EcsBranchPair

DEFAULT_TAIL_TOL = 1e-10
IMPOSSIBLE_OUTCOME_TOL = 1e-15

_SIGMA_Z = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)  # sigma_z|0> = -|0>
_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_X90 = np.array([[1.0, 1j], [1j, 1.0]], dtype=complex) / math.sqrt(2.0)


def poisson_tail(mean: float, n: int) -> float:
    """P(X >= n) for X ~ Poisson(mean); the coherent-state population beyond
    Fock level n-1 at amplitude sqrt(mean)."""
    if mean == 0.0:
        return 0.0
    return float(poisson.sf(n - 1, mean))


def fock_cutoff(amplitude: float, tail_tol: float = DEFAULT_TAIL_TOL) -> int:
    """Smallest cutoff n >= 2 whose Poisson tail at the given coherent
    amplitude stays below tail_tol, with a 3-sigma photon-number floor."""
    mean = amplitude**2
    n = max(2, math.ceil(mean + 3.0 * amplitude) + 1)
    while poisson_tail(mean, n) >= tail_tol:
        n += 1
    return n


def _mode_amplitude_bound(p: DeviceParams, i: int) -> float:
    """Worst coherent amplitude reachable along the protocol trajectory of
    mode i: |alpha_i| + 2 lambda_i / omega_i."""
    mode = p.modes[i]
    return abs(p.alphas[i]) + 2.0 * mode.displacement_ratio


@dataclass(frozen=True)
class TruncationConfig:
    """Fock cutoffs per mode (levels 0..n-1) and the tolerated Poisson tail."""

    n1: int
    n2: int
    tail_tol: float = DEFAULT_TAIL_TOL

    def __post_init__(self) -> None:
        if self.n1 < 2 or self.n2 < 2:
            raise ValueError(f"cutoffs must be >= 2, got ({self.n1}, {self.n2})")
        if not (0.0 < self.tail_tol < 1.0):
            raise ValueError(f"tail_tol must be in (0, 1), got {self.tail_tol}")

    @classmethod
    def auto(cls, p: DeviceParams, tail_tol: float = DEFAULT_TAIL_TOL) -> "TruncationConfig":
        """Cutoffs sized from the worst-case trajectory amplitude of each mode."""
        return cls(
            n1=fock_cutoff(_mode_amplitude_bound(p, 0), tail_tol),
            n2=fock_cutoff(_mode_amplitude_bound(p, 1), tail_tol),
            tail_tol=tail_tol,
        )

    @property
    def dim_modes(self) -> int:
        return self.n1 * self.n2

    @property
    def dim_total(self) -> int:
        return 2 * self.n1 * self.n2

    def grown(self, extra: int) -> "TruncationConfig":
        return TruncationConfig(self.n1 + extra, self.n2 + extra, self.tail_tol)


@dataclass(frozen=True)
class FockState:
    """Complex amplitude vector over qubit (x) Fock(n1) (x) Fock(n2), or over
    the two modes alone after the qubit has been measured out."""

    amplitudes: np.ndarray
    trunc: TruncationConfig

    def __post_init__(self) -> None:
        if self.amplitudes.shape not in ((self.trunc.dim_total,), (self.trunc.dim_modes,)):
            raise ValueError(
                f"amplitude vector of length {self.amplitudes.shape} does not match "
                f"cutoffs ({self.trunc.n1}, {self.trunc.n2}) with or without the qubit"
            )

    @property
    def has_qubit(self) -> bool:
        return self.amplitudes.shape == (self.trunc.dim_total,)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def _mode_tensor(self) -> np.ndarray:
        if self.has_qubit:
            return self.amplitudes.reshape(2, self.trunc.n1, self.trunc.n2)
        return self.amplitudes.reshape(self.trunc.n1, self.trunc.n2)

    def mode_leakage(self) -> tuple[float, float]:
        """Population in the top two Fock levels of each mode."""
        dens = np.abs(self._mode_tensor()) ** 2
        ax1, ax2 = (-2, -1)
        pop1 = dens.sum(axis=ax2)
        pop2 = dens.sum(axis=ax1)
        if self.has_qubit:
            pop1, pop2 = pop1.sum(axis=0), pop2.sum(axis=0)
        return float(pop1[-2:].sum()), float(pop2[-2:].sum())

    def normalized(self) -> "FockState":
        n = self.norm()
        if n <= 1e-150:
            raise ValueError("cannot normalize a zero state")
        return FockState(self.amplitudes / n, self.trunc)


@dataclass(frozen=True)
class PulseSegment:
    """One piecewise-constant control segment: duration plus the qubit flip
    amplitude, qubit splitting and coupling scale that are active during it."""

    duration: float
    delta: float
    epsilon: float
    lambda_scale: float = 1.0

    def __post_init__(self) -> None:
        if self.duration < 0.0:
            raise ValueError(f"duration must be >= 0, got {self.duration}")
        if not 0.0 <= self.lambda_scale <= 1.0:
            raise ValueError(f"lambda_scale must be in [0, 1], got {self.lambda_scale}")


def _mode_operators(n: int) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Number operator and position quadrature a + a^dag at cutoff n."""
    ladder = sp.diags(np.sqrt(np.arange(1, n)), 1, format="csr", dtype=complex)
    number = sp.diags(np.arange(n, dtype=float), 0, format="csr", dtype=complex)
    return number, (ladder + ladder.conjugate().transpose()).tocsr()


def build_hamiltonian(p: DeviceParams, seg: PulseSegment, trunc: TruncationConfig) -> sp.csr_matrix:
    """Assemble the sparse Hamiltonian for one control segment:

        H = sum_i omega_i n_i - (epsilon/2) sigma_z - (delta/2) sigma_x
            + sum_i lambda_i * lambda_scale * (a_i + a_i^dag) sigma_z

    Raises if either cutoff leaves a Poisson tail >= tail_tol at the
    worst-case trajectory amplitude of its mode.
    """
    for i, n in enumerate((trunc.n1, trunc.n2)):
        bound = _mode_amplitude_bound(p, i)
        tail = poisson_tail(bound**2, n)
        if tail >= trunc.tail_tol:
            raise ValueError(
                f"mode {i + 1} cutoff n={n} leaves Poisson tail {tail:.3e} >= "
                f"tail_tol {trunc.tail_tol:.1e} at amplitude bound {bound:.3f}"
            )

    sz = sp.csr_matrix(_SIGMA_Z)
    sx = sp.csr_matrix(_SIGMA_X)
    eye_q = sp.identity(2, format="csr", dtype=complex)
    eye1 = sp.identity(trunc.n1, format="csr", dtype=complex)
    eye2 = sp.identity(trunc.n2, format="csr", dtype=complex)
    num1, x1 = _mode_operators(trunc.n1)
    num2, x2 = _mode_operators(trunc.n2)

    h = (
        p.mode1.omega * sp.kron(eye_q, sp.kron(num1, eye2))
        + p.mode2.omega * sp.kron(eye_q, sp.kron(eye1, num2))
        - 0.5 * seg.epsilon * sp.kron(sz, sp.kron(eye1, eye2))
        - 0.5 * seg.delta * sp.kron(sx, sp.kron(eye1, eye2))
        + seg.lambda_scale * p.mode1.lambda_ * sp.kron(sz, sp.kron(x1, eye2))
        + seg.lambda_scale * p.mode2.lambda_ * sp.kron(sz, sp.kron(eye1, x2))
    )
    return h.tocsr()


def coherent_vector(alpha: complex, n: int, tail_tol: float = DEFAULT_TAIL_TOL) -> np.ndarray:
    """Unit-norm truncated coherent state e^{-|a|^2/2} a^k / sqrt(k!).

    Raises if the Poisson tail beyond level n-1 is not below tail_tol; the
    renormalization applied afterwards is then smaller than tail_tol.
    """
    tail = poisson_tail(abs(alpha) ** 2, n)
    if tail >= tail_tol:
        raise ValueError(
            f"coherent amplitude |alpha|={abs(alpha):.3f} has Poisson tail {tail:.3e} "
            f">= tail_tol {tail_tol:.1e} at cutoff n={n}"
        )
    out = np.zeros(n, dtype=complex)
    out[0] = 1.0
    for k in range(1, n):
        out[k] = out[k - 1] * alpha / math.sqrt(k)
    out *= math.exp(-0.5 * abs(alpha) ** 2)
    return out / np.linalg.norm(out)


def propagate(state: FockState, hamiltonian: sp.spmatrix, t: float) -> FockState:
    """Apply e^{-i H t} to the state vector.

    Matches dense matrix-exponential application to ~1e-12; norm is preserved
    to the same level per call.
    """
    if hamiltonian.shape[0] != state.amplitudes.shape[0]:
        raise ValueError(
            f"Hamiltonian dimension {hamiltonian.shape[0]} does not match state "
            f"dimension {state.amplitudes.shape[0]}"
        )
    if t == 0.0:
        return state
    result = expm_multiply((-1j * t) * hamiltonian, state.amplitudes)
    if not np.all(np.isfinite(result.view(float))):
        raise ValueError("propagation produced non-finite amplitudes")
    return FockState(result, state.trunc)


def run_schedule(initial: FockState, p: DeviceParams, schedule: list[PulseSegment]) -> FockState:
    """Propagate through an ordered list of piecewise-constant segments."""
    if not schedule:
        raise ValueError("schedule must contain at least one segment")
    state = initial
    for seg in schedule:
        if seg.duration == 0.0:
            continue
        state = propagate(state, build_hamiltonian(p, seg, state.trunc), seg.duration)
    return state


def standard_schedule(p: DeviceParams, free_time: float) -> list[PulseSegment]:
    """Pulse / free evolution / pulse, with epsilon and the couplings held at
    their nominal values throughout (lambda_scale = 1)."""
    pulse = PulseSegment(p.t_pulse, p.delta_pulse, p.epsilon, 1.0)
    free = PulseSegment(free_time, p.delta0, p.epsilon, 1.0)
    return [pulse, free, pulse]


def qubit_x90(state: FockState) -> FockState:
    """Instantaneous pulse rotation |0> -> (|0>+i|1>)/sqrt(2),
    |1> -> (i|0>+|1>)/sqrt(2); the qubit half of the idealized pulse."""
    if not state.has_qubit:
        raise ValueError("qubit rotation needs a state that still carries the qubit")
    blocks = state.amplitudes.reshape(2, state.trunc.dim_modes)
    return FockState((_X90 @ blocks).reshape(-1), state.trunc)


def measure_qubit(state: FockState, outcome: int) -> tuple[float, FockState]:
    """Projective sigma_z measurement: probability of ``outcome`` and the
    normalized two-mode state left behind."""
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome}")
    if not state.has_qubit:
        raise ValueError("state no longer carries the qubit")
    sector = state.amplitudes.reshape(2, state.trunc.dim_modes)[outcome]
    probability = float(np.linalg.norm(sector) ** 2)
    if probability < IMPOSSIBLE_OUTCOME_TOL:
        raise ValueError(
            f"outcome {outcome} has probability {probability:.3e}; "
            "conditioning on an impossible event"
        )
    return probability, FockState(sector / math.sqrt(probability), state.trunc)


def sample_measurement(state: FockState, seed: int) -> int:
    """Draw one sigma_z outcome from the Born probabilities; the same seed
    always yields the same outcome."""
    if not state.has_qubit:
        raise ValueError("state no longer carries the qubit")
    sector0 = state.amplitudes.reshape(2, state.trunc.dim_modes)[0]
    p0 = float(np.linalg.norm(sector0) ** 2) / float(np.linalg.norm(state.amplitudes) ** 2)
    return 0 if np.random.default_rng(seed).random() < p0 else 1


def reduced_density(state: FockState, keep: int) -> np.ndarray:
    """Reduced density matrix of mode ``keep`` (1 or 2) of a two-mode state."""
    if keep not in (1, 2):
        raise ValueError(f"keep must be 1 or 2, got {keep}")
    if state.has_qubit:
        raise ValueError("reduced_density expects a two-mode state; measure the qubit first")
    m = state.amplitudes.reshape(state.trunc.n1, state.trunc.n2)
    if keep == 1:
        return m @ m.conjugate().transpose()
    return m.transpose() @ m.conjugate()


def i_concurrence(state: FockState) -> float:
    """Pure-state concurrence sqrt(2 (1 - Tr rho_A^2)) of a normalized
    two-mode state, computed from the Schmidt spectrum."""
    if state.has_qubit:
        raise ValueError("i_concurrence expects a two-mode state; measure the qubit first")
    singular = np.linalg.svd(
        state.amplitudes.reshape(state.trunc.n1, state.trunc.n2), compute_uv=False
    )
    purity = float(np.sum(singular**4))
    return math.sqrt(max(0.0, 2.0 * (1.0 - purity)))


def fidelity_mod_phase(a: FockState, b: FockState) -> float:
    """|<b|a>|^2 for normalized states; insensitive to a global phase."""
    if a.amplitudes.shape != b.amplitudes.shape:
        raise ValueError(
            f"dimension mismatch: {a.amplitudes.shape} vs {b.amplitudes.shape}"
        )
    return float(abs(np.vdot(b.amplitudes, a.amplitudes)) ** 2)


def embed(state: CoherentSuperposition, trunc: TruncationConfig) -> FockState:
    """Truncated-Fock embedding of a branch superposition (qubit included).

    The result is not renormalized, so its norm matches the exact
    superposition norm up to the truncation tail.
    """
    out = np.zeros(trunc.dim_total, dtype=complex)
    for b in state.branches:
        qubit = np.zeros(2, dtype=complex)
        qubit[b.qubit] = 1.0
        out += b.weight * np.kron(
            qubit,
            np.kron(
                coherent_vector(b.alpha1, trunc.n1, trunc.tail_tol),
                coherent_vector(b.alpha2, trunc.n2, trunc.tail_tol),
            ),
        )
    return FockState(out, trunc)


def embed_pair(pair: EcsBranchPair, trunc: TruncationConfig) -> FockState:
    """Truncated-Fock embedding of a two-mode branch pair (no qubit)."""
    out = pair.weight_plus * np.kron(
        coherent_vector(pair.beta1_plus, trunc.n1, trunc.tail_tol),
        coherent_vector(pair.beta2_plus, trunc.n2, trunc.tail_tol),
    )
    if pair.weight_minus != 0.0:
        out = out + pair.weight_minus * np.kron(
            coherent_vector(pair.beta1_minus, trunc.n1, trunc.tail_tol),
            coherent_vector(pair.beta2_minus, trunc.n2, trunc.tail_tol),
        )
    return FockState(out, trunc)
