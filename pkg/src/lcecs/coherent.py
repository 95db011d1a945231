"""Exact algebra of coherent-state labels for one qubit and two LC modes.

States are stored as weighted branches ``w |q>|alpha1>|alpha2>`` with complex
coherent labels. All inner products go through the closed-form coherent-state
overlap, so norms, probabilities and phases are exact -- no Fock truncation
enters anywhere in this module.

Units: angular frequencies in rad/ns, times in ns, amplitudes dimensionless.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable

MERGE_TOL = 1e-12     # coherent labels closer than this are the same state
NORM_TOL = 1e-12      # "normalized" means within this of unit norm
MAX_BRANCHES = 64     # keeps pairwise overlap sums exact and cheap


def coherent_overlap(alpha: complex, beta: complex) -> complex:
    """Overlap <beta|alpha> = exp(-|alpha|^2/2 - |beta|^2/2 + conj(beta)*alpha)."""
    return cmath.exp(
        -0.5 * (alpha.real**2 + alpha.imag**2)
        - 0.5 * (beta.real**2 + beta.imag**2)
        + beta.conjugate() * alpha
    )


@dataclass(frozen=True)
class ModeParams:
    """One LC mode: resonance frequency and qubit coupling, both in rad/ns."""

    omega: float
    lambda_: float

    def __post_init__(self) -> None:
        if not (self.omega > 0.0) or not math.isfinite(self.omega):
            raise ValueError(f"mode frequency must be positive and finite, got {self.omega}")
        if self.lambda_ < 0.0 or not math.isfinite(self.lambda_):
            raise ValueError(f"coupling must be >= 0 and finite, got {self.lambda_}")

    @property
    def displacement_ratio(self) -> float:
        """lambda/omega, the dimensionless displacement scale of this mode."""
        return self.lambda_ / self.omega


def kappa(mode: ModeParams, t: float) -> complex:
    """Conditional-displacement trajectory (lambda/omega)(1 - exp(-i omega t)).

    Starts at 0, traces the circle of radius lambda/omega centered at
    lambda/omega, and closes after a full period 2 pi / omega.
    """
    return mode.displacement_ratio * (1.0 - cmath.exp(-1j * mode.omega * t))


def free_rotate(alpha: complex, omega: float, t: float) -> complex:
    """Free-oscillator rotation of a coherent label: alpha -> alpha e^{-i omega t}."""
    return alpha * cmath.exp(-1j * omega * t)


def delta_phase(mode: ModeParams, alpha_prime: complex, t: float) -> complex:
    """Branch phase increment picked up by a displaced trajectory that starts
    from a nonzero coherent label.

    Returns (lambda/2 omega)[(e^{i omega t}-1) conj(a') + (1-e^{-i omega t}) a'],
    which is purely imaginary for every input (the two terms are negated
    conjugates of each other).
    """
    rot = cmath.exp(1j * mode.omega * t)
    return (mode.lambda_ / (2.0 * mode.omega)) * (
        (rot - 1.0) * alpha_prime.conjugate() + (1.0 - 1.0 / rot) * alpha_prime
    )


@dataclass(frozen=True)
class Branch:
    """One branch ``weight |qubit>|alpha1>|alpha2>`` of a superposition."""

    weight: complex
    qubit: int
    alpha1: complex
    alpha2: complex

    def __post_init__(self) -> None:
        if self.qubit not in (0, 1):
            raise ValueError(f"qubit label must be 0 or 1, got {self.qubit}")

    def same_labels(self, other: "Branch", tol: float = MERGE_TOL) -> bool:
        return (
            self.qubit == other.qubit
            and abs(self.alpha1 - other.alpha1) <= tol
            and abs(self.alpha2 - other.alpha2) <= tol
        )


def _branch_overlap(bra: Branch, ket: Branch) -> complex:
    """<bra-labels | ket-labels>, zero for orthogonal qubit sectors."""
    if bra.qubit != ket.qubit:
        return 0.0
    return coherent_overlap(ket.alpha1, bra.alpha1) * coherent_overlap(ket.alpha2, bra.alpha2)


@dataclass(frozen=True)
class CoherentSuperposition:
    """Exact superposition of coherent branches over qubit x mode1 x mode2."""

    branches: tuple[Branch, ...]

    def __post_init__(self) -> None:
        if len(self.branches) > MAX_BRANCHES:
            raise ValueError(f"{len(self.branches)} branches exceeds the cap of {MAX_BRANCHES}")

    @classmethod
    def from_branches(cls, branches: Iterable[Branch]) -> "CoherentSuperposition":
        """Build a superposition, adding weights of branches whose qubit and
        coherent labels coincide within MERGE_TOL and dropping exact zeros."""
        merged: list[Branch] = []
        for b in branches:
            for i, m in enumerate(merged):
                if m.same_labels(b):
                    merged[i] = Branch(m.weight + b.weight, m.qubit, m.alpha1, m.alpha2)
                    break
            else:
                merged.append(b)
        return cls(tuple(b for b in merged if b.weight != 0.0))

    def __len__(self) -> int:
        return len(self.branches)

    def norm_squared(self) -> float:
        """<psi|psi> via pairwise coherent overlaps (exact)."""
        if not self.branches or all(b.weight == 0.0 for b in self.branches):
            raise ValueError("degenerate superposition: no branches with nonzero weight")
        total = 0.0
        for j, bj in enumerate(self.branches):
            total += abs(bj.weight) ** 2
            for bk in self.branches[j + 1 :]:
                # <bj|bk> term plus its conjugate
                total += 2.0 * (bj.weight.conjugate() * bk.weight * _branch_overlap(bj, bk)).real
        return total

    def norm(self) -> float:
        return math.sqrt(max(self.norm_squared(), 0.0))

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm() - 1.0) <= NORM_TOL

    def normalized(self) -> "CoherentSuperposition":
        n = self.norm()
        if n <= 1e-150:
            raise ValueError("cannot normalize a superposition with vanishing norm")
        return CoherentSuperposition(
            tuple(Branch(b.weight / n, b.qubit, b.alpha1, b.alpha2) for b in self.branches)
        )

    def sector(self, qubit: int) -> tuple[Branch, ...]:
        """Branches whose qubit label equals ``qubit``, in stored order."""
        return tuple(b for b in self.branches if b.qubit == qubit)


def superposition_norm(state: CoherentSuperposition) -> float:
    """Exact norm of a branch superposition (pairwise coherent overlaps)."""
    return state.norm()


def single_branch(weight: complex, qubit: int, alpha1: complex, alpha2: complex) -> CoherentSuperposition:
    return CoherentSuperposition((Branch(weight, qubit, alpha1, alpha2),))
