"""Exact state-vector simulation of the two-qubit operator algebra.

The protocol acts on two-qubit slots with the Grover reflection V and
a permutation family U(a), combined into eight coded operations
U(a)V(b).  Two U variants are first class everywhere:

* ``cyclic``: U maps |x> to |x+1 mod 4>, so exponents compose mod 4.
* ``xor``: U(a) flips the two qubits by the bits of a, so codes
  compose by XOR, matching how additive key shares recombine.

States are immutable amplitude vectors over an ordered list of
subsystem dimensions.  Inside a two-qubit slot the first qubit is the
high bit of the basis index.  All matrices are exact in double
precision (entries are 0, +-1, +-1/2, +-1/sqrt(2)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

VARIANTS = ("cyclic", "xor")

NORM_TOL = 1e-12


def _check_variant(variant: str):
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


# ---------------------------------------------------------------------------
# Gate matrices


def grover_v() -> np.ndarray:
    """Two-qubit Grover reflection, an involution mixing all four states."""
    return 0.5 * np.ones((4, 4)) - np.eye(4)


def u_cyclic() -> np.ndarray:
    """Cyclic shift |x> -> |x+1 mod 4>."""
    m = np.zeros((4, 4))
    for x in range(4):
        m[(x + 1) % 4, x] = 1.0
    return m


def u_xor(a: int) -> np.ndarray:
    """Bit-flip operator |x> -> |x XOR a> on a two-qubit slot."""
    if not 0 <= a <= 3:
        raise ValueError(f"code a must be in 0..3, got {a}")
    m = np.zeros((4, 4))
    for x in range(4):
        m[x ^ a, x] = 1.0
    return m


def hadamard() -> np.ndarray:
    return np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)


def cnot() -> np.ndarray:
    """CNOT with the first (high-bit) qubit as control."""
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
        ]
    )


def t_detect() -> np.ndarray:
    """Detection gate on (auxiliary, data); inverts CNOT.(H x I)."""
    return np.array(
        [
            [1.0, 0.0, 0.0, 1.0],
            [0.0, 1.0, 1.0, 0.0],
            [1.0, 0.0, 0.0, -1.0],
            [0.0, 1.0, -1.0, 0.0],
        ]
    ) / np.sqrt(2.0)


_FIXED_GATES = {
    "V": grover_v,
    "U_cyclic": u_cyclic,
    "H": hadamard,
    "CNOT": cnot,
    "T": t_detect,
}


def gate(name: str, a: int | None = None) -> np.ndarray:
    """Named gate lookup; U_xor takes its flip mask as a parameter."""
    if name == "U_xor":
        if a is None:
            raise ValueError("U_xor needs its code a")
        return u_xor(a)
    if name in _FIXED_GATES:
        if a is not None:
            raise ValueError(f"gate {name} takes no parameter")
        return _FIXED_GATES[name]()
    raise ValueError(f"unknown gate {name!r}")


def u_power(a: int, variant: str) -> np.ndarray:
    """The permutation part of a coded operation."""
    if not 0 <= a <= 3:
        raise ValueError(f"code a must be in 0..3, got {a}")
    _check_variant(variant)
    if variant == "cyclic":
        return np.linalg.matrix_power(u_cyclic(), a)
    return u_xor(a)


@dataclass(frozen=True)
class OpCode:
    """One of the eight coded operations U(a)V(b), in a chosen variant."""

    a: int
    b: int
    variant: str = "xor"

    def __post_init__(self):
        if not 0 <= self.a <= 3:
            raise ValueError(f"code a must be in 0..3, got {self.a}")
        if self.b not in (0, 1):
            raise ValueError(f"code b must be 0 or 1, got {self.b}")
        _check_variant(self.variant)

    def matrix(self) -> np.ndarray:
        m = u_power(self.a, self.variant)
        if self.b:
            m = m @ grover_v()
        return m


def all_op_codes(variant: str) -> list[OpCode]:
    """The eight coded operations in a fixed enumeration order."""
    _check_variant(variant)
    return [OpCode(a, b, variant) for b in (0, 1) for a in range(4)]


# ---------------------------------------------------------------------------
# States


@dataclass(frozen=True)
class StateVector:
    """Normalized amplitudes over an ordered list of subsystem dims."""

    amps: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        dims = tuple(int(d) for d in self.dims)
        if any(d < 2 for d in dims):
            raise ValueError(f"subsystem dims must be >= 2, got {dims}")
        if amps.shape != (int(np.prod(dims)),):
            raise ValueError(
                f"amplitude length {amps.shape} does not match dims {dims}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm} deviates from 1 beyond {NORM_TOL}")
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.amps.shape[0]


def ket(index: int, dim: int) -> StateVector:
    amps = np.zeros(dim, dtype=complex)
    amps[index] = 1.0
    return StateVector(amps, (dim,))


def from_amplitudes(amps: Sequence[complex], dims: Sequence[int]) -> StateVector:
    return StateVector(np.asarray(amps, dtype=complex), tuple(dims))


def with_dims(state: StateVector, dims: Sequence[int]) -> StateVector:
    """Reinterpret the subsystem split without touching amplitudes."""
    return StateVector(state.amps, tuple(dims))


def tensor(*states: StateVector) -> StateVector:
    if not states:
        raise ValueError("tensor of no states")
    amps = states[0].amps
    dims: tuple[int, ...] = states[0].dims
    for s in states[1:]:
        amps = np.kron(amps, s.amps)
        dims = dims + s.dims
    return StateVector(amps, dims)


def basis_state(a: int, b: int) -> StateVector:
    """Two-qubit carrier state: |a> for b=0, the conjugated V|a> for b=1."""
    if not 0 <= a <= 3:
        raise ValueError(f"code a must be in 0..3, got {a}")
    if b not in (0, 1):
        raise ValueError(f"code b must be 0 or 1, got {b}")
    amps = np.zeros(4, dtype=complex)
    amps[a] = 1.0
    if b:
        amps = grover_v() @ amps
    return StateVector(amps, (4,))


def pair_state(code: OpCode) -> StateVector:
    """The issued state U(a)V(b)|00>; coincides with basis_state(a, b)."""
    return StateVector(code.matrix() @ ket(0, 4).amps, (4,))


def _apply_matrix(
    amps: np.ndarray, dims: tuple[int, ...], matrix: np.ndarray, slots: Sequence[int]
) -> np.ndarray:
    slots = list(slots)
    if len(set(slots)) != len(slots):
        raise ValueError(f"slots must be distinct, got {slots}")
    for s in slots:
        if not 0 <= s < len(dims):
            raise ValueError(f"slot {s} out of range for {len(dims)} subsystems")
    d_op = int(np.prod([dims[s] for s in slots]))
    if matrix.shape != (d_op, d_op):
        raise ValueError(
            f"matrix shape {matrix.shape} does not act on slots of total dim {d_op}"
        )
    rest = [i for i in range(len(dims)) if i not in slots]
    perm = slots + rest
    moved = amps.reshape(dims).transpose(perm).reshape(d_op, -1)
    moved = matrix @ moved
    out_dims = [dims[p] for p in perm]
    return moved.reshape(out_dims).transpose(np.argsort(perm)).reshape(-1)


def apply_matrix(
    state: StateVector, matrix: np.ndarray, slots: Sequence[int]
) -> StateVector:
    """Apply a unitary to the listed slots (tensor order = listed order)."""
    return StateVector(
        _apply_matrix(state.amps, state.dims, np.asarray(matrix, dtype=complex), slots),
        state.dims,
    )


def apply_op(state: StateVector, slot: int, code: OpCode) -> StateVector:
    """Apply a coded operation to one dimension-4 slot."""
    if state.dims[slot] != 4:
        raise ValueError(f"slot {slot} has dimension {state.dims[slot]}, need 4")
    return apply_matrix(state, code.matrix(), [slot])


def outcome_probabilities(
    state: StateVector, slot: int, basis_bit: int = 0
) -> np.ndarray:
    """Exact Born distribution for measuring one dim-4 slot.

    basis_bit 1 measures in the conjugated basis (the V images of the
    computational states).
    """
    if state.dims[slot] != 4:
        raise ValueError(f"slot {slot} has dimension {state.dims[slot]}, need 4")
    if basis_bit not in (0, 1):
        raise ValueError(f"basis bit must be 0 or 1, got {basis_bit}")
    amps = state.amps
    if basis_bit:
        amps = _apply_matrix(amps, state.dims, grover_v().astype(complex), [slot])
    axes = tuple(i for i in range(len(state.dims)) if i != slot)
    probs = np.abs(amps.reshape(state.dims)) ** 2
    if axes:
        probs = probs.sum(axis=axes)
    return probs.reshape(4)


def measure(
    state: StateVector, slot: int, basis_bit: int, rng
) -> tuple[int, StateVector]:
    """Projective measurement of a dim-4 slot; collapse stays in the
    caller's frame (conjugated-basis collapse leaves a V-basis state)."""
    probs = outcome_probabilities(state, slot, basis_bit)
    outcome = int(rng.choice(4, p=probs / probs.sum()))
    proj_vec = np.zeros(4, dtype=complex)
    proj_vec[outcome] = 1.0
    if basis_bit:
        proj_vec = grover_v() @ proj_vec
    proj = np.outer(proj_vec, proj_vec.conj())
    amps = _apply_matrix(state.amps, state.dims, proj, [slot])
    amps = amps / np.linalg.norm(amps)
    return outcome, StateVector(amps, state.dims)


def measure_slot(state: StateVector, slot: int, rng) -> tuple[int, StateVector]:
    """Computational-basis measurement of a slot of any dimension."""
    d = state.dims[slot]
    axes = tuple(i for i in range(len(state.dims)) if i != slot)
    probs = np.abs(state.amps.reshape(state.dims)) ** 2
    if axes:
        probs = probs.sum(axis=axes)
    probs = probs.reshape(d)
    outcome = int(rng.choice(d, p=probs / probs.sum()))
    proj = np.zeros((d, d), dtype=complex)
    proj[outcome, outcome] = 1.0
    amps = _apply_matrix(state.amps, state.dims, proj, [slot])
    amps = amps / np.linalg.norm(amps)
    return outcome, StateVector(amps, state.dims)


# ---------------------------------------------------------------------------
# Density matrices and entropy


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite operator."""

    entries: np.ndarray
    dims: tuple[int, ...] = field(default=())

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"entries must be square, got shape {entries.shape}")
        dims = tuple(int(d) for d in self.dims) or (entries.shape[0],)
        if int(np.prod(dims)) != entries.shape[0]:
            raise ValueError(f"dims {dims} do not factor dimension {entries.shape[0]}")
        if not np.allclose(entries, entries.conj().T, atol=1e-12):
            raise ValueError("density matrix is not Hermitian within 1e-12")
        tr = complex(np.trace(entries))
        if abs(tr - 1.0) > 1e-12:
            raise ValueError(f"trace {tr} deviates from 1 beyond 1e-12")
        if float(np.linalg.eigvalsh(entries).min()) < -1e-10:
            raise ValueError("density matrix has an eigenvalue below -1e-10")
        entries = entries.copy()
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def density_from_state(state: StateVector) -> DensityMatrix:
    return DensityMatrix(np.outer(state.amps, state.amps.conj()), state.dims)


def mixture(parts: Iterable[tuple[float, StateVector]]) -> DensityMatrix:
    """Probabilistic mixture of pure states with matching dims."""
    parts = list(parts)
    if not parts:
        raise ValueError("mixture of no states")
    dims = parts[0][1].dims
    entries = np.zeros((parts[0][1].dim, parts[0][1].dim), dtype=complex)
    total = 0.0
    for p, s in parts:
        if p < 0:
            raise ValueError(f"mixture weight {p} is negative")
        if s.dims != dims:
            raise ValueError("mixture components have mismatched dims")
        entries += p * np.outer(s.amps, s.amps.conj())
        total += p
    if abs(total - 1.0) > 1e-12:
        raise ValueError(f"mixture weights sum to {total}, not 1")
    return DensityMatrix(entries, dims)


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Trace out every subsystem not listed in keep (order preserved)."""
    keep = list(keep)
    dims = rho.dims
    n = len(dims)
    if sorted(set(keep)) != sorted(keep) or any(not 0 <= k < n for k in keep):
        raise ValueError(f"keep list {keep} invalid for {n} subsystems")
    tensor_form = rho.entries.reshape(dims + dims)
    drop = [i for i in range(n) if i not in keep]
    for count, i in enumerate(sorted(drop)):
        axis = i - count
        tensor_form = np.trace(tensor_form, axis1=axis, axis2=axis + n - count)
    kept_dims = [dims[i] for i in sorted(keep)]
    d = int(np.prod(kept_dims))
    out = tensor_form.reshape(d, d)
    if keep != sorted(keep):
        # reorder the kept subsystems to the requested order
        perm = [sorted(keep).index(k) for k in keep]
        m = len(kept_dims)
        out = (
            out.reshape(kept_dims + kept_dims)
            .transpose(perm + [p + m for p in perm])
            .reshape(d, d)
        )
        kept_dims = [dims[k] for k in keep]
    return DensityMatrix(out, tuple(kept_dims))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy in bits; eigenvalues within 1e-10 of zero are clamped."""
    eigs = np.linalg.eigvalsh(rho.entries)
    if float(eigs.min()) < -1e-10:
        raise ValueError("input is not positive semidefinite within tolerance")
    eigs = np.clip(eigs, 0.0, None)
    nz = eigs[eigs > 1e-10]
    return float(-(nz * np.log2(nz)).sum()) + 0.0
