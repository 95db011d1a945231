"""Closed-form protocol states and concurrences: branch bookkeeping checked
symbolically against hand-built targets, concurrence formulas against each
other and against exact bounds."""

import cmath
import math
from dataclasses import replace

import numpy as np
import pytest

from lcecs import (
    Branch,
    CoherentSuperposition,
    DeviceParams,
    EcsBranchPair,
    ModeParams,
    collapse,
    concurrence_eq8,
    concurrence_eq11,
    concurrence_general,
    default_device_params,
    kappa,
    kappa_zero,
    protocol_phase,
    state_after_first_pulse,
    state_after_second_pulse,
    superposition_norm,
    tripartite_state,
)

SQRT_HALF = 1 / math.sqrt(2)


def random_device(rng, symmetric=False, alpha_scale=1.2):
    omega1 = rng.uniform(20, 60)
    omega2 = omega1 if symmetric else rng.uniform(20, 60)
    lam1 = rng.uniform(0.2, 1.1) * omega1
    lam2 = lam1 if symmetric else rng.uniform(0.2, 1.1) * omega2
    alpha1 = complex(rng.uniform(-alpha_scale, alpha_scale), rng.uniform(-alpha_scale, alpha_scale))
    alpha2 = alpha1 if symmetric else complex(
        rng.uniform(-alpha_scale, alpha_scale), rng.uniform(-alpha_scale, alpha_scale)
    )
    return DeviceParams(
        mode1=ModeParams(omega1, lam1),
        mode2=ModeParams(omega2, lam2),
        epsilon=rng.uniform(0, 60),
        delta_pulse=rng.uniform(20, 60),
        alpha1=alpha1,
        alpha2=alpha2,
    )


# ---------------------------------------------------------------------------
# first pulse
# ---------------------------------------------------------------------------


def test_first_pulse_from_ground_state():
    state = state_after_first_pulse(default_device_params())
    assert len(state) == 2
    weights = {b.qubit: b.weight for b in state.branches}
    assert weights[0] == pytest.approx(SQRT_HALF)
    assert weights[1] == pytest.approx(1j * SQRT_HALF)
    for b in state.branches:
        assert b.alpha1 == 0 and b.alpha2 == 0


def test_first_pulse_rotates_initial_amplitudes():
    # alpha1 = 1, omega1 = 40, delta_pulse = 40 -> alpha' = e^{-i pi/2} = -i
    p = replace(default_device_params(), alpha1=1.0 + 0j)
    state = state_after_first_pulse(p)
    for b in state.branches:
        assert b.alpha1 == pytest.approx(-1j, abs=1e-14)


def test_first_pulse_instantaneous_limit_keeps_amplitudes():
    p = replace(default_device_params(), delta_pulse=1e9, alpha1=0.8 - 0.5j, alpha2=0.3j)
    state = state_after_first_pulse(p)
    for b in state.branches:
        assert b.alpha1 == pytest.approx(0.8 - 0.5j, abs=1e-6)
        assert b.alpha2 == pytest.approx(0.3j, abs=1e-6)


# ---------------------------------------------------------------------------
# free evolution
# ---------------------------------------------------------------------------


def test_tripartite_state_at_zero_time_is_the_first_pulse_state():
    p = replace(default_device_params(), alpha1=0.5 + 0.1j, alpha2=-0.2j)
    a = tripartite_state(p, 0.0)
    b = state_after_first_pulse(p)
    assert len(a) == len(b) == 2
    for ba, bb in zip(a.branches, b.branches):
        assert ba.weight == pytest.approx(bb.weight, abs=1e-14)
        assert ba.alpha1 == pytest.approx(bb.alpha1, abs=1e-14)
        assert ba.alpha2 == pytest.approx(bb.alpha2, abs=1e-14)


def test_tripartite_state_ground_modes_at_half_period():
    # branches sit at +-2 lambda/omega with phases e^{-+ i pi eps / (2 omega)}
    p = default_device_params()
    t = math.pi / 40.0
    state = tripartite_state(p, t)
    by_qubit = {b.qubit: b for b in state.branches}
    assert by_qubit[0].alpha1 == pytest.approx(2.0, abs=1e-13)
    assert by_qubit[1].alpha1 == pytest.approx(-2.0, abs=1e-13)
    half_phi = math.pi * p.epsilon / (2 * 40.0)
    assert by_qubit[0].weight == pytest.approx(SQRT_HALF * cmath.exp(-1j * half_phi), abs=1e-13)
    assert by_qubit[1].weight == pytest.approx(
        1j * SQRT_HALF * cmath.exp(1j * half_phi), abs=1e-13
    )


def test_protocol_phase_reduces_to_half_epsilon_t_for_ground_modes():
    p = default_device_params()
    t = 0.0421
    assert protocol_phase(p, t) == pytest.approx(0.5 * p.epsilon * t, abs=1e-13)


def test_tripartite_state_is_normalized():
    rng = np.random.default_rng(23)
    for _ in range(20):
        p = random_device(rng)
        t = rng.uniform(0, 0.2)
        assert superposition_norm(tripartite_state(p, t)) == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------------------
# second pulse
# ---------------------------------------------------------------------------


def expected_after_second_pulse(p, t):
    """Hand-built four-branch target from the published grouping."""
    theta = protocol_phase(p, t)
    labels = []
    for mode, alpha in ((p.mode1, p.alpha1), (p.mode2, p.alpha2)):
        a_rot = alpha * cmath.exp(-1j * mode.omega * p.t_pulse) * cmath.exp(-1j * mode.omega * t)
        k = kappa(mode, t)
        prime = cmath.exp(-1j * mode.omega * p.t_pulse)
        labels.append(((a_rot + k) * prime, (a_rot - k) * prime))
    (b1p, b1m), (b2p, b2m) = labels
    em, ep = cmath.exp(-1j * theta) / 2, cmath.exp(1j * theta) / 2
    return [
        Branch(em, 0, b1p, b2p),
        Branch(-ep, 0, b1m, b2m),
        Branch(1j * em, 1, b1p, b2p),
        Branch(1j * ep, 1, b1m, b2m),
    ]


def test_second_pulse_reproduces_published_grouping():
    rng = np.random.default_rng(29)
    for _ in range(20):
        p = random_device(rng)
        t = rng.uniform(0.005, 0.2)
        got = state_after_second_pulse(p, t)
        want = expected_after_second_pulse(p, t)
        assert len(got) == 4
        for wb in want:
            matches = [
                gb
                for gb in got.branches
                if gb.qubit == wb.qubit
                and abs(gb.alpha1 - wb.alpha1) < 1e-10
                and abs(gb.alpha2 - wb.alpha2) < 1e-10
            ]
            assert len(matches) == 1
            assert matches[0].weight == pytest.approx(wb.weight, abs=1e-12)


def test_second_pulse_immediately_after_first_flips_the_qubit():
    # two pi/2 pulses compose to a flip: single branch on |1> with unit weight
    p = replace(default_device_params(), alpha1=0.7j, alpha2=0.2)
    state = state_after_second_pulse(p, 0.0)
    assert len(state) == 1
    (branch,) = state.branches
    assert branch.qubit == 1
    assert abs(branch.weight) == pytest.approx(1.0, abs=1e-14)


def test_second_pulse_q0_sector_is_the_minus_combination_at_zero_epsilon():
    p = replace(default_device_params(), epsilon=0.0)
    state = state_after_second_pulse(p, math.pi / 40.0)
    q0 = state.sector(0)
    assert len(q0) == 2
    assert q0[0].weight == pytest.approx(-q0[1].weight, abs=1e-14)
    assert q0[0].alpha1 == pytest.approx(-q0[1].alpha1, abs=1e-13)


# ---------------------------------------------------------------------------
# collapse
# ---------------------------------------------------------------------------


def test_collapse_probabilities_on_the_standard_protocol():
    p = default_device_params()
    t = math.pi / 40.0
    state = state_after_second_pulse(p, t)
    x = math.exp(-16.0)
    p0, _ = collapse(state, 0)
    p1, _ = collapse(state, 1)
    assert p0 + p1 == pytest.approx(1.0, abs=1e-12)
    # exact Born values: (1 -+ e^{-16} cos(pi))/2
    assert p0 == pytest.approx(0.5 * (1 + x), abs=1e-12)
    assert p1 == pytest.approx(0.5 * (1 - x), abs=1e-12)


def test_collapse_probabilities_sum_to_one_generally():
    rng = np.random.default_rng(31)
    for _ in range(20):
        p = random_device(rng)
        state = state_after_second_pulse(p, rng.uniform(0.005, 0.2))
        total = collapse(state, 0)[0] + collapse(state, 1)[0]
        assert total == pytest.approx(1.0, abs=1e-12)


def test_collapse_product_state_probability_from_weights_alone():
    state = CoherentSuperposition.from_branches(
        [Branch(0.6, 0, 0.4j, -0.1), Branch(0.8j, 1, 0.4j, -0.1)]
    )
    prob, pair = collapse(state, 0)
    assert prob == pytest.approx(0.36, abs=1e-14)
    assert pair.weight_minus == 0.0
    assert concurrence_general(pair) == 0.0


def test_collapse_outcomes_map_to_plus_and_minus_pairs():
    # outcome 1 keeps the + combination, outcome 0 the - combination
    rng = np.random.default_rng(37)
    for _ in range(10):
        p = random_device(rng, symmetric=True)
        t = math.pi / p.mode1.omega
        state = state_after_second_pulse(p, t)
        theta = protocol_phase(p, t)
        for outcome, sign in ((1, 1.0), (0, -1.0)):
            _, pair = collapse(state, outcome)
            ratio = pair.weight_minus / pair.weight_plus
            assert ratio == pytest.approx(sign * cmath.exp(2j * theta), abs=1e-11)


def test_collapse_rejects_empty_sector_and_impossible_outcome():
    with pytest.raises(ValueError):
        collapse(single_branch_state(), 1)
    # epsilon t = pi makes outcome 1 impossible when the modes decouple
    p = replace(default_device_params(), mode1=ModeParams(40.0, 0.0), mode2=ModeParams(40.0, 0.0))
    state = state_after_second_pulse(p, math.pi / 40.0)
    with pytest.raises(ValueError):
        collapse(state, 1)


def single_branch_state():
    return CoherentSuperposition.from_branches([Branch(1.0, 0, 0j, 0j)])


# ---------------------------------------------------------------------------
# concurrence
# ---------------------------------------------------------------------------


def standard_pair(k0, phi, sign):
    return EcsBranchPair(
        SQRT_HALF, sign * cmath.exp(1j * phi) * SQRT_HALF, 2 * k0, 2 * k0, -2 * k0, -2 * k0
    )


def test_concurrence_general_reproduces_the_standard_closed_form():
    for k_abs in (0.25, 0.5, 1.0):
        k0 = k_abs * cmath.exp(-0.41j)
        for phi in (0.0, 0.8, math.pi / 2, math.pi):
            for sign in (1, -1):
                want = concurrence_eq8(k_abs, phi, sign)
                got = concurrence_general(standard_pair(k0, phi, sign))
                assert got == pytest.approx(want, abs=1e-12)


def test_concurrence_vanishes_for_identical_branches():
    pair = EcsBranchPair(SQRT_HALF, SQRT_HALF, 0.9j, -0.4, 0.9j, -0.4)
    assert concurrence_general(pair) == pytest.approx(0.0, abs=1e-15)


def test_concurrence_invariances():
    rng = np.random.default_rng(41)
    for _ in range(50):
        pair = EcsBranchPair(
            complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
            complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
            complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
            complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
            complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
            complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
        )
        base = concurrence_general(pair)
        assert 0.0 <= base <= 1.0 + 1e-9
        phase = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        rotated = EcsBranchPair(
            pair.weight_plus * phase,
            pair.weight_minus * phase,
            pair.beta1_plus,
            pair.beta2_plus,
            pair.beta1_minus,
            pair.beta2_minus,
        )
        assert concurrence_general(rotated) == pytest.approx(base, rel=1e-12)
        swapped = EcsBranchPair(
            pair.weight_minus,
            pair.weight_plus,
            pair.beta1_minus,
            pair.beta2_minus,
            pair.beta1_plus,
            pair.beta2_plus,
        )
        assert concurrence_general(swapped) == pytest.approx(base, rel=1e-12)


def test_concurrence_eq8_reference_points():
    assert concurrence_eq8(0.0, 1.3, 1) == 0.0
    # phi = 0, minus sign: (1-x)/(1-x) = 1 for any displacement
    for k_abs in (0.1, 0.5, 2.0):
        assert concurrence_eq8(k_abs, 0.0, -1) == pytest.approx(1.0, abs=1e-15)
    # |k0| >= 0.5 keeps C within 2x/(1-x) of 1 across phases
    x = math.exp(-4.0)
    for phi in np.linspace(0, 2 * math.pi, 17):
        for sign in (1, -1):
            c = concurrence_eq8(0.5, phi, sign)
            assert abs(1.0 - c) <= 2 * x / (1 - x) + 1e-15


def test_concurrence_eq8_rejects_bad_arguments():
    with pytest.raises(ValueError):
        concurrence_eq8(-0.1, 0.0, 1)
    with pytest.raises(ValueError):
        concurrence_eq8(0.5, 0.0, 2)


def test_collapsed_pairs_match_the_arbitrary_amplitude_closed_form():
    # symmetric device at t = pi/omega: concurrence depends on the initial
    # amplitude only through Im alpha' in the cosine
    rng = np.random.default_rng(43)
    for _ in range(20):
        p = random_device(rng, symmetric=True)
        t = math.pi / p.mode1.omega
        state = state_after_second_pulse(p, t)
        k_abs = abs(kappa_zero(p))
        phi = p.epsilon * t
        im_ap = (p.alpha1 * cmath.exp(-1j * p.mode1.omega * p.t_pulse)).imag
        for outcome, sign in ((1, 1), (0, -1)):
            _, pair = collapse(state, outcome)
            want = concurrence_eq11(k_abs, phi, im_ap, sign)
            assert concurrence_general(pair) == pytest.approx(want, abs=1e-12)


def test_concurrence_eq11_reduces_to_eq8_for_real_post_pulse_amplitude():
    for k_abs in (0.3, 0.8):
        for phi in (0.0, 1.1, math.pi):
            assert concurrence_eq11(k_abs, phi, 0.0, 1) == concurrence_eq8(k_abs, phi, 1)


def test_near_unity_concurrence_for_arbitrary_amplitudes():
    # once the branch overlap is below 1e-6 the concurrence exceeds 1 - 2e-6
    # for every initial amplitude
    for im_ap in (-3.0, -0.5, 0.0, 1.0, 4.0):
        for phi in (0.0, 1.0, math.pi):
            for sign in (1, -1):
                assert concurrence_eq11(1.0, phi, im_ap, sign) >= 1.0 - 2e-6


def test_device_params_validation_and_regime_ratio():
    with pytest.raises(ValueError):
        replace(default_device_params(), delta_pulse=0.0)
    with pytest.raises(ValueError):
        replace(default_device_params(), delta0=-1.0)
    p = default_device_params()
    assert p.pulse_regime_ratio() == pytest.approx(1.0)
    assert p.t_pulse == pytest.approx(math.pi / 80.0)
