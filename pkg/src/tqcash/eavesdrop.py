"""Fake-signal and intercept-resend analysis of a dishonest insider.

The attacker hands a participant a probe pair entangled with a private
four-level ancilla, the participant applies one of the eight coded
operations uniformly at random, and the attacker's knowledge is capped
by the von Neumann entropy of the resulting average state w.  For real
probe amplitudes and the cyclic operator variant, the sixteen
eigenvalues of w collapse to four closed-form quarter-sums plus twelve
zeros, which this module cross-checks numerically.

Amplitude letters follow the fixed order a..h, i j k q, m n r s: data
basis first (00, 01, 10, 11), ancilla second, so amplitude number
4*data + ancilla.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import qsim

LETTERS = "abcdefghijkqmnrs"


@dataclass(frozen=True)
class FakeSignal:
    """Sixteen probe amplitudes over (data pair) x (attacker ancilla)."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (16,):
            raise ValueError(f"probe needs 16 amplitudes, got shape {amps.shape}")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"probe norm {norm} deviates from 1 beyond 1e-12")
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_named(cls, **values: complex) -> "FakeSignal":
        """Build a probe from letter=amplitude keywords; the rest are 0."""
        amps = np.zeros(16, dtype=complex)
        for name, value in values.items():
            if name not in LETTERS:
                raise ValueError(f"unknown amplitude letter {name!r}")
            amps[LETTERS.index(name)] = value
        return cls(amps)

    def letter(self, name: str) -> complex:
        if name not in LETTERS:
            raise ValueError(f"unknown amplitude letter {name!r}")
        return complex(self.amps[LETTERS.index(name)])

    @property
    def is_real(self) -> bool:
        return bool(np.max(np.abs(self.amps.imag)) <= 1e-12)

    def state(self) -> qsim.StateVector:
        return qsim.StateVector(self.amps, (4, 4))


def legal_probe(a: int = 0, b: int = 0) -> FakeSignal:
    """An honest carrier state with a passive ancilla."""
    amps = np.kron(qsim.basis_state(a, b).amps, qsim.ket(0, 4).amps)
    return FakeSignal(amps)


def max_information_probes() -> list[FakeSignal]:
    """The eight probe families saturating the two-bit bound."""
    h = 0.5
    return [
        FakeSignal.from_named(a=1),
        FakeSignal.from_named(e=1),
        FakeSignal.from_named(i=1),
        FakeSignal.from_named(m=1),
        FakeSignal.from_named(a=-h, e=h, i=h, m=h),
        FakeSignal.from_named(a=h, e=-h, i=h, m=h),
        FakeSignal.from_named(a=h, e=h, i=-h, m=h),
        FakeSignal.from_named(a=h, e=h, i=h, m=-h),
    ]


def random_probe(rng, complex_amplitudes: bool = False) -> FakeSignal:
    v = rng.normal(size=16)
    if complex_amplitudes:
        v = v + 1j * rng.normal(size=16)
    return FakeSignal(v / np.linalg.norm(v))


def build_w(theta: FakeSignal, variant: str) -> qsim.DensityMatrix:
    """Average state after a uniformly random coded operation on the
    data pair, ancilla untouched."""
    parts = []
    for code in qsim.all_op_codes(variant):
        op = np.kron(code.matrix(), np.eye(4))
        parts.append((0.125, qsim.StateVector(op @ theta.amps, (4, 4))))
    return qsim.mixture(parts)


# ---------------------------------------------------------------------------
# Closed-form spectrum


def x_transform() -> np.ndarray:
    """The orthogonal change of basis that block-diagonalizes w for real
    probes under the cyclic variant."""
    x = np.zeros((16, 16))
    r = 1 / np.sqrt(2.0)
    for k in range(8):
        x[k, k] = r
        x[k, k + 8] = -r
    for k in range(4):
        x[8 + k, k] = 0.5
        x[8 + k, k + 4] = -0.5
        x[8 + k, k + 8] = 0.5
        x[8 + k, k + 12] = -0.5
        x[12 + k, k] = 0.5
        x[12 + k, k + 4] = 0.5
        x[12 + k, k + 8] = 0.5
        x[12 + k, k + 12] = 0.5
    return x


def closed_form_values(theta: FakeSignal) -> tuple[float, float, float, float]:
    """The four quarter-sum eigenvalues for a real probe."""
    if not theta.is_real:
        raise ValueError("closed form is derived for real probe amplitudes")
    a, b, c, d, e, f, g, h, i, j, k, q, m, n, r, s = theta.amps.real
    lam12 = 0.25 * (
        (a - i) ** 2
        + (b - j) ** 2
        + (c - k) ** 2
        + (e - m) ** 2
        + (f - n) ** 2
        + (d - q) ** 2
        + (g - r) ** 2
        + (h - s) ** 2
    )
    lam3 = 0.25 * (
        (a - e + i - m) ** 2
        + (b - f + j - n) ** 2
        + (c - g + k - r) ** 2
        + (d - h + q - s) ** 2
    )
    lam4 = 0.25 * (
        (a + e + i + m) ** 2
        + (b + f + j + n) ** 2
        + (c + g + k + r) ** 2
        + (d + h + q + s) ** 2
    )
    return float(lam12), float(lam12), float(lam3), float(lam4)


@dataclass(frozen=True)
class SpectrumReport:
    """Numeric spectrum of w next to its closed-form prediction."""

    numeric: np.ndarray
    closed_form: tuple[float, float, float, float] | None
    entropy_bits: float
    max_deviation: float | None

    def __post_init__(self):
        numeric = np.asarray(self.numeric, dtype=float)
        if numeric.shape != (16,):
            raise ValueError("numeric spectrum must have 16 values")
        if float(numeric.min()) < -1e-10:
            raise ValueError("spectrum has an eigenvalue below -1e-10")
        if abs(float(numeric.sum()) - 1.0) > 1e-9:
            raise ValueError("spectrum does not sum to 1 within 1e-9")
        numeric = numeric.copy()
        numeric.flags.writeable = False
        object.__setattr__(self, "numeric", numeric)


def closed_form_eigs(theta: FakeSignal) -> SpectrumReport:
    """Numeric spectrum of the cyclic-variant w, compared against the
    closed form when the probe is real."""
    w = build_w(theta, "cyclic")
    numeric = np.sort(np.linalg.eigvalsh(w.entries))[::-1]
    entropy = qsim.von_neumann_entropy(w)
    if theta.is_real:
        closed = closed_form_values(theta)
        predicted = np.sort(np.array(list(closed) + [0.0] * 12))[::-1]
        deviation = float(np.max(np.abs(numeric - predicted)))
    else:
        closed = None
        deviation = None
    return SpectrumReport(
        numeric=numeric,
        closed_form=closed,
        entropy_bits=entropy,
        max_deviation=deviation,
    )


def info_bound(theta: FakeSignal, variant: str) -> float:
    """Upper bound, in bits, on what the attacker learns per pair."""
    return qsim.von_neumann_entropy(build_w(theta, variant))


# ---------------------------------------------------------------------------
# Explicit attack strategies


def intercept_resend(variant: str, trials: int, rng=None) -> tuple[float, float]:
    """Measure-and-resend on honest carrier pairs.

    The attacker measures both qubits computationally and resends the
    observed basis state.  Returns (error probability, Shannon mutual
    information in bits); trials = 0 computes the error exactly, any
    positive count estimates it by sampling.  The mutual information
    is always the exact value of the strategy.
    """
    if trials < 0:
        raise ValueError(f"trial count must be >= 0, got {trials}")
    codes = qsim.all_op_codes(variant)
    # joint distribution p(op, outcome) and per-op resend fidelities
    p_joint = np.zeros((8, 4))
    fidelity = np.zeros((8, 4))
    for oi, code in enumerate(codes):
        true_state = qsim.pair_state(code)
        probs = np.abs(true_state.amps) ** 2
        p_joint[oi] = probs / 8.0
        fidelity[oi] = probs  # |<true|y>|^2 equals the outcome probability
    exact_error = float(1.0 - (p_joint * fidelity).sum())
    p_outcome = p_joint.sum(axis=0)
    h_outcome = float(-(p_outcome[p_outcome > 0] * np.log2(p_outcome[p_outcome > 0])).sum())
    cond = 0.0
    for oi in range(8):
        row = p_joint[oi]
        nz = row[row > 0]
        cond -= float((nz * np.log2(nz * 8.0)).sum())
    mi = h_outcome - cond
    if trials == 0:
        return exact_error, mi
    if rng is None:
        raise ValueError("sampling mode needs an rng")
    errors = 0
    for _ in range(trials):
        code = codes[int(rng.integers(0, 8))]
        true_state = qsim.pair_state(code)
        outcome, _ = qsim.measure(true_state, 0, 0, rng)
        # resent state reproduces the original only with this fidelity
        if rng.random() >= float(np.abs(true_state.amps[outcome]) ** 2):
            errors += 1
    return errors / trials, mi


def strategy_mi(
    povm: Sequence[np.ndarray], variant: str, theta: FakeSignal | None = None
) -> float:
    """Shannon information, in bits, that a projective measurement on
    the attacker's full space extracts about the operation code."""
    if theta is None:
        theta = legal_probe()
    projectors = [np.asarray(p, dtype=complex) for p in povm]
    total = np.zeros((16, 16), dtype=complex)
    for p in projectors:
        if p.shape != (16, 16):
            raise ValueError(f"projector shape {p.shape}, expected (16, 16)")
        if not np.allclose(p, p.conj().T, atol=1e-10):
            raise ValueError("projector is not Hermitian")
        if not np.allclose(p @ p, p, atol=1e-10):
            raise ValueError("projector is not idempotent")
        total += p
    if not np.allclose(total, np.eye(16), atol=1e-10):
        raise ValueError("projectors do not resolve the identity")
    for i, p in enumerate(projectors):
        for q in projectors[i + 1:]:
            if not np.allclose(p @ q, 0.0, atol=1e-10):
                raise ValueError("projectors are not pairwise orthogonal")
    codes = qsim.all_op_codes(variant)
    p_joint = np.zeros((8, len(projectors)))
    for oi, code in enumerate(codes):
        op = np.kron(code.matrix(), np.eye(4))
        member = op @ theta.amps
        for k, p in enumerate(projectors):
            p_joint[oi, k] = max(float(np.real(member.conj() @ p @ member)), 0.0) / 8.0
    p_out = p_joint.sum(axis=0)
    mi = 0.0
    for oi in range(8):
        for k in range(len(projectors)):
            pj = p_joint[oi, k]
            if pj > 1e-15 and p_out[k] > 1e-15:
                mi += pj * np.log2(pj / (0.125 * p_out[k]))
    return float(mi)


def computational_projectors() -> list[np.ndarray]:
    """Per-data-outcome projectors |y><y| x I on the 16-dim space."""
    out = []
    for y in range(4):
        e = np.zeros(4)
        e[y] = 1.0
        out.append(np.kron(np.outer(e, e), np.eye(4)))
    return out


def conjugated_projectors() -> list[np.ndarray]:
    """Same, in the conjugated pair basis."""
    v = qsim.grover_v()
    out = []
    for y in range(4):
        e = np.zeros(4)
        e[y] = 1.0
        vec = v @ e
        out.append(np.kron(np.outer(vec, vec), np.eye(4)))
    return out


# ---------------------------------------------------------------------------
# Probe sweeps


@dataclass(frozen=True)
class SweepReport:
    """Aggregate of a random-probe sweep."""

    count: int
    variant: str
    complex_probes: bool
    max_entropy: float
    argmax_amps: tuple[complex, ...]
    min_entropy: float
    argmin_amps: tuple[complex, ...]
    max_closed_form_deviation: float | None
    entropies: tuple[float, ...] = ()


def sweep(
    count: int, rng, variant: str, complex_probes: bool = False
) -> SweepReport:
    """Evaluate the information bound over random probes; for real
    probes under the cyclic variant, also track the worst closed-form
    eigenvalue deviation."""
    if count < 1:
        raise ValueError(f"probe count must be >= 1, got {count}")
    track_closed = (variant == "cyclic") and not complex_probes
    max_s, min_s = -1.0, 3.0
    argmax = argmin = None
    worst_dev = 0.0 if track_closed else None
    entropies = []
    for _ in range(count):
        theta = random_probe(rng, complex_probes)
        if track_closed:
            report = closed_form_eigs(theta)
            s = report.entropy_bits
            worst_dev = max(worst_dev, report.max_deviation)
        else:
            s = info_bound(theta, variant)
        entropies.append(s)
        if s > max_s:
            max_s, argmax = s, theta
        if s < min_s:
            min_s, argmin = s, theta
    return SweepReport(
        count=count,
        variant=variant,
        complex_probes=complex_probes,
        max_entropy=max_s,
        argmax_amps=tuple(complex(z) for z in argmax.amps),
        min_entropy=min_s,
        argmin_amps=tuple(complex(z) for z in argmin.amps),
        max_closed_form_deviation=worst_dev,
        entropies=tuple(entropies),
    )
