"""Issuing and checking of banknotes by cohorts of share-holding centers.

A banknote is a serial label plus m two-qubit pair states.  The first
center of an issuing cohort prepares each pair from its own decoded
share; every later center multiplies in its coded operation, guarding
each incoming qubit with a Trojan detector first.  A checking cohort
applies its own coded operations plus a random blinding layer, and a
trusted measurer, told every blinding bit over a side channel, measures
each pair in the XOR basis and accepts only the all-zero outcome.

Share recombination is additive (XOR), so the checking pass cancels the
issuing pass only in the xor operator variant; the cyclic variant is
kept for fidelity to the source construction and fails exactly when a
pair's operation codes sum to an odd value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import qsim, trojan
from .field import PrecomputedShare, validate_label


@dataclass(frozen=True)
class Banknote:
    """Serial label plus the m pair states carrying the secret."""

    label: str
    pairs: tuple[qsim.StateVector, ...]
    variant: str = "xor"

    def __post_init__(self):
        validate_label(self.label)
        if not self.pairs:
            raise ValueError("banknote needs at least one pair")
        for p in self.pairs:
            if p.dims[0] != 4:
                raise ValueError("each pair state must lead with a dimension-4 slot")
        if self.variant not in qsim.VARIANTS:
            raise ValueError(f"variant must be one of {qsim.VARIANTS}")

    @property
    def m(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class BlindingRecord:
    """One checking center's secret extra-V layer, one bit per pair."""

    center: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if self.center < 1:
            raise ValueError(f"center index must be >= 1, got {self.center}")
        if not self.bits or any(b not in (0, 1) for b in self.bits):
            raise ValueError("blinding bits must be a nonempty 0/1 sequence")


@dataclass(frozen=True)
class CheckReport:
    """Measurer verdict: per-pair outcomes and the bases used."""

    outcomes: tuple[int, ...]
    accepted: bool
    basis_used: tuple[int, ...]

    def __post_init__(self):
        if self.accepted != all(c == 0 for c in self.outcomes):
            raise ValueError("accepted flag contradicts the outcomes")
        if len(self.basis_used) != len(self.outcomes):
            raise ValueError("basis list length differs from outcome count")


def _check_cohort(shares: Sequence[PrecomputedShare], m: int | None = None) -> int:
    if not shares:
        raise ValueError("cohort is empty")
    label = shares[0].label
    if m is None:
        m = shares[0].m
    xs = set()
    for s in shares:
        if s.m != m:
            raise ValueError(f"share has {s.m} pairs, cohort expects {m}")
        if s.label != label:
            raise ValueError(f"share label {s.label!r} differs from {label!r}")
        if s.x.bits in xs:
            raise ValueError("cohort contains duplicate share points")
        xs.add(s.x.bits)
    return m


def _guard_qubits(pair: qsim.StateVector, rng) -> qsim.StateVector:
    """Trojan-screen both qubits of one incoming pair state."""
    as_qubits = qsim.with_dims(pair, (2, 2) + pair.dims[1:])
    for qubit in (0, 1):
        flipped, as_qubits = trojan.detect(
            as_qubits, int(rng.integers(0, 2)), rng, slots=[qubit]
        )
        if flipped:
            raise RuntimeError("Trojan detector flipped on an honest hop")
    return qsim.with_dims(as_qubits, pair.dims)


def _apply_share_ops(
    pairs: Sequence[qsim.StateVector], share: PrecomputedShare, variant: str
) -> list[qsim.StateVector]:
    return [
        qsim.apply_op(p, 0, qsim.OpCode(a, b, variant))
        for p, (a, b) in zip(pairs, share.decoded)
    ]


def issue(
    shares: Sequence[PrecomputedShare], m: int, variant: str, rng
) -> Banknote:
    """Sequential issuing pass over a cohort of centers.

    The first center prepares the pairs, each later center screens the
    incoming qubits and multiplies in its own coded operations.
    """
    if m != _check_cohort(shares, m):
        raise ValueError("inconsistent pair count")
    first = shares[0]
    pairs: list[qsim.StateVector] = [
        qsim.basis_state(a, b) for a, b in first.decoded
    ]
    for share in shares[1:]:
        pairs = [_guard_qubits(p, rng) for p in pairs]
        pairs = _apply_share_ops(pairs, share, variant)
    return Banknote(label=first.label, pairs=tuple(pairs), variant=variant)


def run_check_circuit(
    banknote: Banknote, shares: Sequence[PrecomputedShare], variant: str, rng
) -> tuple[Banknote, list[BlindingRecord]]:
    """Unitary part of checking: every center's operations plus its
    secret blinding layer.  Measurement is the measurer's job."""
    m = _check_cohort(shares)
    if banknote.m != m:
        raise ValueError(f"banknote has {banknote.m} pairs, shares expect {m}")
    if banknote.label != shares[0].label:
        raise ValueError(
            f"banknote label {banknote.label!r} does not match shares {shares[0].label!r}"
        )
    pairs = list(banknote.pairs)
    blinds = []
    for idx, share in enumerate(shares, start=1):
        pairs = _apply_share_ops(pairs, share, variant)
        bits = tuple(int(rng.integers(0, 2)) for _ in range(m))
        pairs = [
            qsim.apply_op(p, 0, qsim.OpCode(0, x, variant)) if x else p
            for p, x in zip(pairs, bits)
        ]
        blinds.append(BlindingRecord(center=idx, bits=bits))
    return Banknote(label=banknote.label, pairs=tuple(pairs), variant=variant), blinds


def _combined_bases(blinds: Sequence[BlindingRecord], m: int) -> tuple[int, ...]:
    if not blinds:
        raise ValueError("no blinding records delivered")
    centers = sorted(b.center for b in blinds)
    if centers != list(range(1, len(blinds) + 1)):
        raise ValueError(f"blinding records incomplete or duplicated: centers {centers}")
    bases = [0] * m
    for b in blinds:
        if len(b.bits) != m:
            raise ValueError(f"blinding record has {len(b.bits)} bits, expected {m}")
        for i, x in enumerate(b.bits):
            bases[i] ^= x
    return tuple(bases)


def measurer_verify(
    banknote: Banknote, blinds: Sequence[BlindingRecord], rng
) -> CheckReport:
    """Trusted measurer: XOR the blinding bits into per-pair bases,
    measure, accept only the all-zero outcome string."""
    bases = _combined_bases(blinds, banknote.m)
    outcomes = []
    for pair, basis in zip(banknote.pairs, bases):
        outcome, _ = qsim.measure(pair, 0, basis, rng)
        outcomes.append(outcome)
    return CheckReport(
        outcomes=tuple(outcomes),
        accepted=all(c == 0 for c in outcomes),
        basis_used=bases,
    )


def acceptance_probability(
    banknote: Banknote, blinds: Sequence[BlindingRecord]
) -> float:
    """Exact Born probability that the measurer sees all zeros."""
    bases = _combined_bases(blinds, banknote.m)
    prob = 1.0
    for pair, basis in zip(banknote.pairs, bases):
        prob *= float(qsim.outcome_probabilities(pair, 0, basis)[0])
    return prob


def check(
    banknote: Banknote, shares: Sequence[PrecomputedShare], variant: str, rng
) -> CheckReport:
    """Full checking pass: circuit, blind collection, measurement."""
    transformed, blinds = run_check_circuit(banknote, shares, variant, rng)
    return measurer_verify(transformed, blinds, rng)


# ---------------------------------------------------------------------------
# Banknote files


def serialize(banknote: Banknote) -> bytes:
    """Text encoding: header lines, then one amplitude line per pair.

    Amplitudes print as 17-significant-digit real/imag columns, which
    round-trips doubles exactly.
    """
    for p in banknote.pairs:
        if p.dims != (4,):
            raise ValueError("only single-slot pair states serialize")
    lines = [
        f"label={banknote.label}",
        f"m={banknote.m}",
        f"variant={banknote.variant}",
    ]
    for i, p in enumerate(banknote.pairs, start=1):
        cols = " ".join(f"{z.real:.17g} {z.imag:.17g}" for z in p.amps)
        lines.append(f"pair={i} {cols}")
    return ("\n".join(lines) + "\n").encode()


def deserialize(blob: bytes) -> Banknote:
    text = blob.decode()
    lines = text.splitlines()
    if len(lines) < 4:
        raise ValueError("banknote file too short")
    header = {}
    for line, key in zip(lines[:3], ("label", "m", "variant")):
        prefix = key + "="
        if not line.startswith(prefix):
            raise ValueError(f"expected line starting with {prefix!r}, got {line!r}")
        header[key] = line[len(prefix):]
    try:
        m = int(header["m"])
    except ValueError as exc:
        raise ValueError(f"malformed pair count {header['m']!r}") from exc
    if m < 1:
        raise ValueError("banknote needs at least one pair")
    if len(lines) != 3 + m:
        raise ValueError(f"expected {m} pair lines, got {len(lines) - 3}")
    pairs = []
    for i, line in enumerate(lines[3:], start=1):
        prefix = f"pair={i} "
        if not line.startswith(prefix):
            raise ValueError(f"expected pair line {i}, got {line!r}")
        cols = line[len(prefix):].split()
        if len(cols) != 8:
            raise ValueError(f"pair {i} has {len(cols)} columns, expected 8")
        vals = [float(c) for c in cols]
        amps = np.array(
            [complex(vals[2 * k], vals[2 * k + 1]) for k in range(4)]
        )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > qsim.NORM_TOL:
            raise ValueError(f"pair {i} norm {norm} violates normalization")
        pairs.append(qsim.StateVector(amps, (4,)))
    return Banknote(label=header["label"], pairs=tuple(pairs), variant=header["variant"])
