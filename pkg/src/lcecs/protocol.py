"""Closed-form states and concurrences of the two-mode entangling protocol.

The sequence is: prepare the qubit in |0> and the modes in coherent states,
apply a fast pi/2 flip pulse, evolve freely under the conditional
displacement for a time t, apply the pulse again, then measure the qubit.
Every intermediate state is an exact :class:`CoherentSuperposition`; the
measurement outcome leaves an entangled pair of coherent branches in the two
modes whose concurrence has a closed form.

Conventions (fixed here and mirrored by the numeric engine):

* sigma_z |0> = -|0>, sigma_z |1> = +|1>, so free evolution puts the phase
  e^{-i epsilon t / 2} on the |0> branch and displaces it by +kappa(t).
* The pulse is an instantaneous qubit rotation |0> -> (|0>+i|1>)/sqrt(2),
  |1> -> (i|0>+|1>)/sqrt(2), composed with free mode rotation over
  t_p = pi / (2 delta_pulse).
* The branch-independent driven-oscillator path phase is dropped; analytic
  and numeric states therefore agree up to a global phase only.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .coherent import (
    Branch,
    CoherentSuperposition,
    ModeParams,
    coherent_overlap,
    delta_phase,
    free_rotate,
    kappa,
)

_SQRT_HALF = 1.0 / math.sqrt(2.0)
DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class DeviceParams:
    """Physical parameters of the qubit + two-LC-mode device.

    All frequencies are angular (rad/ns): ``epsilon`` is the qubit energy
    splitting, ``delta_pulse`` the flip amplitude reached during a pulse and
    ``delta0`` the residual flip amplitude while idle.  ``alpha1``/``alpha2``
    are the initial coherent amplitudes of the modes (0 for ground state).
    """

    mode1: ModeParams
    mode2: ModeParams
    epsilon: float
    delta_pulse: float
    delta0: float = 0.0
    alpha1: complex = 0j
    alpha2: complex = 0j

    def __post_init__(self) -> None:
        if not (self.delta_pulse > 0.0):
            raise ValueError(f"delta_pulse must be > 0, got {self.delta_pulse}")
        if self.delta0 < 0.0:
            raise ValueError(f"delta0 must be >= 0, got {self.delta0}")

    @property
    def t_pulse(self) -> float:
        """Pulse duration pi / (2 delta_pulse) in ns."""
        return math.pi / (2.0 * self.delta_pulse)

    @property
    def is_symmetric(self) -> bool:
        return self.mode1 == self.mode2

    def pulse_regime_ratio(self) -> float:
        """delta_pulse / max(epsilon, lambda_i); the fast-pulse treatment
        assumes this is large."""
        scale = max(abs(self.epsilon), self.mode1.lambda_, self.mode2.lambda_)
        return math.inf if scale == 0.0 else self.delta_pulse / scale

    @property
    def modes(self) -> tuple[ModeParams, ModeParams]:
        return (self.mode1, self.mode2)

    @property
    def alphas(self) -> tuple[complex, complex]:
        return (self.alpha1, self.alpha2)


def default_device_params() -> DeviceParams:
    """Desk-scale defaults: omega_i = lambda_i = epsilon = delta_pulse = 40 rad/ns,
    modes initially in the ground state."""
    mode = ModeParams(omega=40.0, lambda_=40.0)
    return DeviceParams(mode1=mode, mode2=mode, epsilon=40.0, delta_pulse=40.0)


def kappa_zero(p: DeviceParams) -> complex:
    """Displacement scale (lambda/omega) e^{-i omega t_p} of mode 1.

    This is the label scale of the standard entangled pair generated at
    free time pi/omega on a symmetric device.
    """
    return p.mode1.displacement_ratio * cmath.exp(-1j * p.mode1.omega * p.t_pulse)


def _rotated_alphas(p: DeviceParams, t: float) -> tuple[complex, complex]:
    return tuple(free_rotate(a, m.omega, t) for a, m in zip(p.alphas, p.modes))


def state_after_first_pulse(p: DeviceParams) -> CoherentSuperposition:
    """(|0> + i|1>)/sqrt(2) with both mode labels rotated by the pulse time."""
    a1, a2 = _rotated_alphas(p, p.t_pulse)
    return CoherentSuperposition.from_branches(
        [
            Branch(_SQRT_HALF, 0, a1, a2),
            Branch(1j * _SQRT_HALF, 1, a1, a2),
        ]
    )


def protocol_phase(p: DeviceParams, t: float) -> float:
    """Real phase theta weighting the two branches as e^{-i theta} / e^{+i theta}
    after free evolution for t following the first pulse.

    theta = (epsilon/2) t + i (delta_1 + delta_2); the delta_i are purely
    imaginary so theta is real (checked to rounding).
    """
    a1p, a2p = _rotated_alphas(p, p.t_pulse)
    correction = 1j * (delta_phase(p.mode1, a1p, t) + delta_phase(p.mode2, a2p, t))
    return 0.5 * p.epsilon * t + correction.real


def branch_labels(p: DeviceParams, t: float) -> tuple[tuple[complex, complex], tuple[complex, complex]]:
    """Coherent labels ((b1+, b2+), (b1-, b2-)) after free evolution for t:
    b_{i,+-} = alpha'_i e^{-i omega_i t} +- kappa_i(t)."""
    plus = []
    minus = []
    for a, m in zip(_rotated_alphas(p, p.t_pulse), p.modes):
        drift = free_rotate(a, m.omega, t)
        k = kappa(m, t)
        plus.append(drift + k)
        minus.append(drift - k)
    return (plus[0], plus[1]), (minus[0], minus[1])


def tripartite_state(p: DeviceParams, t: float) -> CoherentSuperposition:
    """Qubit-mode-mode entangled state after pulse + free evolution for t."""
    theta = protocol_phase(p, t)
    (b1p, b2p), (b1m, b2m) = branch_labels(p, t)
    return CoherentSuperposition.from_branches(
        [
            Branch(_SQRT_HALF * cmath.exp(-1j * theta), 0, b1p, b2p),
            Branch(1j * _SQRT_HALF * cmath.exp(1j * theta), 1, b1m, b2m),
        ]
    )


def _pulse_map(state: CoherentSuperposition, p: DeviceParams) -> CoherentSuperposition:
    """Idealized pulse: qubit x-rotation by pi/2 composed with mode free
    rotation over the pulse duration."""
    tp = p.t_pulse
    out: list[Branch] = []
    for b in state.branches:
        a1 = free_rotate(b.alpha1, p.mode1.omega, tp)
        a2 = free_rotate(b.alpha2, p.mode2.omega, tp)
        if b.qubit == 0:  # |0> -> (|0> + i|1>)/sqrt(2)
            out.append(Branch(b.weight * _SQRT_HALF, 0, a1, a2))
            out.append(Branch(b.weight * 1j * _SQRT_HALF, 1, a1, a2))
        else:  # |1> -> (i|0> + |1>)/sqrt(2)
            out.append(Branch(b.weight * 1j * _SQRT_HALF, 0, a1, a2))
            out.append(Branch(b.weight * _SQRT_HALF, 1, a1, a2))
    return CoherentSuperposition.from_branches(out)


def state_after_second_pulse(p: DeviceParams, t: float) -> CoherentSuperposition:
    """Four-branch state just before measurement: pulse, free evolution for t,
    pulse again."""
    return _pulse_map(tripartite_state(p, t), p)


@dataclass(frozen=True)
class EcsBranchPair:
    """Two-mode entangled coherent state mu |b1+ b2+> + nu |b1- b2->."""

    weight_plus: complex
    weight_minus: complex
    beta1_plus: complex
    beta2_plus: complex
    beta1_minus: complex
    beta2_minus: complex

    def __post_init__(self) -> None:
        if self.weight_plus == 0.0 and self.weight_minus == 0.0:
            raise ValueError("branch pair needs at least one nonzero weight")

    def mode_overlaps(self) -> tuple[complex, complex]:
        """Per-mode overlaps p_i = <b_{i-}|b_{i+}>."""
        return (
            coherent_overlap(self.beta1_plus, self.beta1_minus),
            coherent_overlap(self.beta2_plus, self.beta2_minus),
        )

    def norm_squared(self) -> float:
        p1, p2 = self.mode_overlaps()
        mu, nu = self.weight_plus, self.weight_minus
        return abs(mu) ** 2 + abs(nu) ** 2 + 2.0 * (mu * nu.conjugate() * p1 * p2).real

    def normalized(self) -> "EcsBranchPair":
        n2 = self.norm_squared()
        if n2 <= DEGENERATE_TOL:
            raise ValueError(f"cannot normalize: squared norm {n2:.3e} is degenerate")
        n = math.sqrt(n2)
        return EcsBranchPair(
            self.weight_plus / n,
            self.weight_minus / n,
            self.beta1_plus,
            self.beta2_plus,
            self.beta1_minus,
            self.beta2_minus,
        )

def collapse(state: CoherentSuperposition, outcome: int) -> tuple[float, EcsBranchPair]:
    """Project a normalized qubit-mode-mode state onto qubit ``outcome``.

    Returns the outcome probability (squared norm of the selected sector,
    via exact overlaps) and the surviving two-mode pair, normalized.  The
    first sector branch fills the plus slot.  Raises if the sector is empty,
    carries no weight, or holds more than two distinct branches.
    """
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome}")
    branches = state.sector(outcome)
    if not branches:
        raise ValueError(f"qubit-{outcome} sector is empty")
    if len(branches) > 2:
        raise ValueError(f"qubit-{outcome} sector has {len(branches)} branches; not a coherent pair")

    if len(branches) == 1:
        (b,) = branches
        pair = EcsBranchPair(b.weight, 0.0, b.alpha1, b.alpha2, b.alpha1, b.alpha2)
    else:
        bp, bm = branches
        pair = EcsBranchPair(bp.weight, bm.weight, bp.alpha1, bp.alpha2, bm.alpha1, bm.alpha2)
    probability = pair.norm_squared()
    if probability <= 1e-15:
        raise ValueError(
            f"outcome {outcome} has probability {probability:.3e}; conditioning on an impossible event"
        )
    return probability, pair.normalized()


def concurrence_general(pair: EcsBranchPair) -> float:
    """Concurrence of a pure two-mode pair with non-orthogonal branches:

        C = 2 |mu nu| sqrt(1-|p1|^2) sqrt(1-|p2|^2) / N^2,
        N^2 = |mu|^2 + |nu|^2 + 2 Re(mu conj(nu) p1 p2),

    with p_i = <b_{i-}|b_{i+}>.  Equals sqrt(2 (1 - Tr rho_A^2)) of the
    embedded pure state, and is invariant under a common weight phase and
    under exchanging the plus and minus slots.
    """
    n2 = pair.norm_squared()
    if n2 <= DEGENERATE_TOL:
        raise ValueError(f"degenerate pair: squared norm {n2:.3e}")
    p1, p2 = pair.mode_overlaps()
    numerator = (
        2.0
        * abs(pair.weight_plus * pair.weight_minus)
        * math.sqrt(max(0.0, 1.0 - abs(p1) ** 2))
        * math.sqrt(max(0.0, 1.0 - abs(p2) ** 2))
    )
    return numerator / n2


def _check_sign(sign: int) -> int:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return sign


def concurrence_eq8(kappa0_abs: float, phi: float, sign: int = 1) -> float:
    """Closed-form concurrence of the standard pair
    (|2k0 2k0> +- e^{i phi} |-2k0 -2k0>)/N generated from ground-state modes:

        C = (1 - e^{-16 |k0|^2}) / (1 +- e^{-16 |k0|^2} cos phi).
    """
    _check_sign(sign)
    if kappa0_abs < 0.0:
        raise ValueError(f"kappa0_abs must be >= 0, got {kappa0_abs}")
    x = math.exp(-16.0 * kappa0_abs**2)
    denominator = 1.0 + sign * x * math.cos(phi)
    if denominator <= DEGENERATE_TOL:
        raise ValueError("degenerate: the conditioning outcome has vanishing probability")
    return (1.0 - x) / denominator


def concurrence_eq11(kappa0_abs: float, phi: float, im_alpha_prime: float, sign: int = 1) -> float:
    """Closed-form concurrence for modes prepared in coherent states, at the
    standard point (symmetric device, free time pi/omega):

        C = (1 - e^{-16 |k0|^2}) / (1 +- e^{-16 |k0|^2} cos(phi - 16 |k0| Im a')),

    where a' = alpha e^{-i omega t_p} is the post-pulse initial label.
    Reduces to the ground-state form when Im a' = 0.
    """
    _check_sign(sign)
    if kappa0_abs < 0.0:
        raise ValueError(f"kappa0_abs must be >= 0, got {kappa0_abs}")
    x = math.exp(-16.0 * kappa0_abs**2)
    denominator = 1.0 + sign * x * math.cos(phi - 16.0 * kappa0_abs * im_alpha_prime)
    if denominator <= DEGENERATE_TOL:
        raise ValueError("degenerate: the conditioning outcome has vanishing probability")
    return (1.0 - x) / denominator
