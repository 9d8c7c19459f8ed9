"""Trojan-horse detection: the auxiliary-qubit circuit and its analysis.

A verifier guards each data qubit with a fresh auxiliary qubit: H on
the auxiliary, CNOT from it onto every qubit found in the data
position, then the detection gate T on (auxiliary, qubit k) for k
ascending, and finally a computational measurement of the auxiliary.
A legal position holds exactly one qubit and the circuit reduces to
the identity, so the auxiliary never flips.  A multi-qubit intrusion
flips it with average probability one half.

The closed-form output state is a sum of signed amplitudes where the
sign is (-1) to the number of adjacent 11 pairs in a bit string (the
tau function below); it is checked against direct circuit evolution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import qsim


def tau(bits) -> int:
    """Number of adjacent 11 pairs in a bit string."""
    if isinstance(bits, str):
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"need a nonempty string of 0/1, got {bits!r}")
        seq = [int(c) for c in bits]
    else:
        seq = [int(b) for b in bits]
        if not seq or any(b not in (0, 1) for b in seq):
            raise ValueError(f"need a nonempty sequence of 0/1, got {bits!r}")
    return sum(x & y for x, y in zip(seq, seq[1:]))


def _tau_int(value: int) -> int:
    return bin(value & (value >> 1)).count("1")


def _check_qubit_slots(state: qsim.StateVector, slots: Sequence[int] | None):
    if slots is None:
        slots = list(range(len(state.dims)))
    else:
        slots = list(slots)
    if not slots:
        raise ValueError("detector needs at least one data qubit")
    for s in slots:
        if state.dims[s] != 2:
            raise ValueError(f"slot {s} has dimension {state.dims[s]}, need a qubit")
    return slots


def run_detector(
    state: qsim.StateVector,
    aux_slot: int,
    data_slots: Sequence[int],
    t_order: Sequence[int] | None = None,
) -> qsim.StateVector:
    """Unitary part of the detection circuit on an existing joint state.

    t_order overrides the qubit order of the T stage only; the default
    is the listed data order.
    """
    if t_order is None:
        t_order = data_slots
    elif sorted(t_order) != sorted(data_slots):
        raise ValueError("t_order must permute the data slots")
    state = qsim.apply_matrix(state, qsim.hadamard(), [aux_slot])
    for d in data_slots:
        state = qsim.apply_matrix(state, qsim.cnot(), [aux_slot, d])
    for d in t_order:
        state = qsim.apply_matrix(state, qsim.t_detect(), [aux_slot, d])
    return state


def _joint_with_aux(data: qsim.StateVector, aux: int):
    if aux not in (0, 1):
        raise ValueError(f"auxiliary qubit value must be 0 or 1, got {aux}")
    return qsim.tensor(qsim.ket(aux, 2), data)


def detect(
    data: qsim.StateVector,
    aux: int,
    rng,
    slots: Sequence[int] | None = None,
) -> tuple[bool, qsim.StateVector]:
    """Run one detector over the listed qubit slots of data.

    Returns whether the auxiliary flipped, plus the post-measurement
    data state (auxiliary factored out).  Extra slots of data, such as
    an attacker's ancilla, ride along untouched.
    """
    slots = _check_qubit_slots(data, slots)
    joint = _joint_with_aux(data, aux)
    joint = run_detector(joint, 0, [s + 1 for s in slots])
    outcome, collapsed = qsim.measure_slot(joint, 0, rng)
    # aux is in a definite state after collapse; peel it off
    rest = collapsed.amps.reshape(2, -1)[outcome]
    return outcome != aux, qsim.StateVector(rest, data.dims)


def flip_probabilities(
    data: qsim.StateVector, slots: Sequence[int] | None = None
) -> tuple[float, float]:
    """Exact flip probabilities (aux prepared 0, aux prepared 1).

    Only defined for two or more qubits in the position; a single
    qubit never flips the auxiliary (the circuit is the identity).
    """
    slots = _check_qubit_slots(data, slots)
    if len(slots) < 2:
        raise ValueError("flip probabilities need at least two qubits in the position")
    out = []
    for aux in (0, 1):
        joint = run_detector(_joint_with_aux(data, aux), 0, [s + 1 for s in slots])
        probs = np.abs(joint.amps.reshape(2, -1)) ** 2
        out.append(float(probs[1 - aux].sum()))
    return out[0], out[1]


@dataclass(frozen=True)
class DetectorTrace:
    """Stage-by-stage states of one detector run (before measurement)."""

    aux_prepared: int
    eta1: qsim.StateVector
    eta2: qsim.StateVector
    eta3: qsim.StateVector
    p_flip: float

    def __post_init__(self):
        if not 0.0 <= self.p_flip <= 1.0 + 1e-12:
            raise ValueError(f"flip probability {self.p_flip} outside [0, 1]")


def trace_stages(data: qsim.StateVector, aux: int) -> DetectorTrace:
    """Record the joint state after H, after the CNOTs, after the Ts."""
    slots = _check_qubit_slots(data, None)
    joint = _joint_with_aux(data, aux)
    data_slots = [s + 1 for s in slots]
    eta1 = qsim.apply_matrix(joint, qsim.hadamard(), [0])
    eta2 = eta1
    for d in data_slots:
        eta2 = qsim.apply_matrix(eta2, qsim.cnot(), [0, d])
    eta3 = eta2
    for d in data_slots:
        eta3 = qsim.apply_matrix(eta3, qsim.t_detect(), [0, d])
    p_flip = float((np.abs(eta3.amps.reshape(2, -1)) ** 2)[1 - aux].sum())
    return DetectorTrace(aux_prepared=aux, eta1=eta1, eta2=eta2, eta3=eta3, p_flip=p_flip)


def eta3_closed_form(data: qsim.StateVector, aux: int) -> qsim.StateVector:
    """Closed-form post-circuit state for an m-qubit intrusion, m in 2..4.

    The amplitude at auxiliary value g and data string e sums the input
    amplitudes over all strings u agreeing with e on qubit 1, each
    signed by the adjacent-11 count of (u XOR e)g and of its
    complement-XOR partner, the latter negated when aux was prepared 1.
    """
    if aux not in (0, 1):
        raise ValueError(f"auxiliary qubit value must be 0 or 1, got {aux}")
    m = len(data.dims)
    if not 2 <= m <= 4 or any(d != 2 for d in data.dims):
        raise ValueError("closed form covers 2 to 4 qubits in one position")
    full = (1 << m) - 1
    out = np.zeros(1 << (m + 1), dtype=complex)
    scale = 2.0 ** (-(m + 1) / 2.0)
    for g in (0, 1):
        for e in range(1 << m):
            e1_mask = e & (1 << (m - 1))
            acc = 0.0 + 0.0j
            for rest in range(1 << (m - 1)):
                u = e1_mask | rest
                c = complex(data.amps[u])
                if c == 0:
                    continue
                # bit strings read qubit 1 first; append the aux value g
                plain = ((u ^ e) << 1) | g
                flipped = ((u ^ (e ^ full)) << 1) | g
                term = (-1.0) ** _tau_int(plain)
                term += (-1.0) ** (_tau_int(flipped) + aux)
                acc += term * c
            out[(g << m) | e] = scale * acc
    return qsim.StateVector(out, (2,) * (m + 1))


# ---------------------------------------------------------------------------
# The two-copy counterfeiting experiment


def _multi_copy_joint(copies: int, base: qsim.StateVector | None):
    if base is None:
        base = qsim.basis_state(0, 1)
    if base.dim != 4:
        raise ValueError("base must be a single two-qubit pair state")
    if copies not in (1, 2):
        raise ValueError(f"experiment covers 1 or 2 copies, got {copies}")
    pair = qsim.with_dims(base, (2, 2))
    data = pair if copies == 1 else qsim.tensor(pair, pair)
    # data slot layout is copy-major; position k holds qubit k of each copy
    positions = [[k + 2 * c for c in range(copies)] for k in (0, 1)]
    return data, positions


def _survival_distribution(copies: int, base: qsim.StateVector | None):
    """Joint probability that each detector keeps its prepared value,
    averaged over uniform auxiliary preparations; plus per-position
    keep probabilities."""
    data, positions = _multi_copy_joint(copies, base)
    keep_both = 0.0
    keep_each = np.zeros(2)
    for a1 in (0, 1):
        for a2 in (0, 1):
            joint = qsim.tensor(qsim.ket(a1, 2), qsim.ket(a2, 2), data)
            for aux_slot, pos in enumerate(positions):
                joint = run_detector(joint, aux_slot, [s + 2 for s in pos])
            probs = np.abs(joint.amps.reshape(2, 2, -1)) ** 2
            keep_both += 0.25 * float(probs[a1, a2].sum())
            keep_each[0] += 0.25 * float(probs[a1, :].sum())
            keep_each[1] += 0.25 * float(probs[:, a2].sum())
    return keep_both, (float(keep_each[0]), float(keep_each[1]))


def multi_copy_experiment(
    copies: int = 2, base: qsim.StateVector | None = None
) -> float:
    """Probability that at least one detector flips when every position
    of the note is screened once."""
    keep_both, _ = _survival_distribution(copies, base)
    return 1.0 - keep_both


def multi_copy_position_flips(
    copies: int = 2, base: qsim.StateVector | None = None
) -> tuple[float, float]:
    """Marginal flip probability of each position's detector."""
    _, keep_each = _survival_distribution(copies, base)
    return 1.0 - keep_each[0], 1.0 - keep_each[1]
