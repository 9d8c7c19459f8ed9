"""Batch command-line interface.

One subcommand per claim: issue/check drive the threshold protocol on
real files, the attack commands quantify the two eavesdropping
strategies, analyze/verify expose the spectral and algebraic facts, and
demo flaw reproduces the cyclic-variant checking defect.  Every run is
fully determined by its flags and seed; reports written twice with the
same arguments are byte-identical.

Exit codes: 0 success or accept, 1 protocol reject, 2 usage error,
3 verification-suite failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, eavesdrop, field, protocol, qsim, reporting, trojan

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_USAGE = 2
EXIT_VERIFY = 3

SPECTRUM_TOL = 1e-9
IDENTITY_TOL = 1e-12


class UsageError(ValueError):
    """Bad parameters or malformed inputs; maps to exit code 2."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated knobs for one run."""

    command: str
    t: int | None = None
    n: int | None = None
    m: int | None = None
    variant: str | None = None
    seed: int = 0
    trials: int = 0
    samples: int | None = None
    complex_probes: bool = False
    state_kind: str | None = None
    probe_spec: str | None = None
    label: str | None = None
    cohort: tuple[int, ...] | None = None
    note_path: str | None = None
    shares_dir: str | None = None
    out_path: str | None = None
    report_prefix: str | None = None
    figures: bool = False

    def __post_init__(self):
        if self.t is not None and self.t < 1:
            raise UsageError(f"t must be >= 1, got {self.t}")
        if self.n is not None and self.t is not None and self.n < self.t:
            raise UsageError(f"need t <= n, got t={self.t}, n={self.n}")
        if self.m is not None and self.m < 1:
            raise UsageError(f"m must be >= 1, got {self.m}")
        if self.m is not None and self.n is not None and self.n > 2 ** (3 * self.m) - 1:
            raise UsageError(
                f"n={self.n} exceeds the {2 ** (3 * self.m) - 1} share points of a "
                f"degree-{3 * self.m} field"
            )
        if self.seed < 0:
            raise UsageError(f"seed must be >= 0, got {self.seed}")
        if self.trials < 0:
            raise UsageError(f"trials must be >= 0, got {self.trials}")
        if self.samples is not None and self.samples < 1:
            raise UsageError(f"samples must be >= 1, got {self.samples}")
        if self.variant is not None and self.variant not in qsim.VARIANTS:
            raise UsageError(f"variant must be one of {qsim.VARIANTS}")
        if self.figures and not self.report_prefix:
            raise UsageError("--figures requires --report")
        if self.label is not None:
            try:
                field.validate_label(self.label)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
        if self.cohort is not None:
            if len(set(self.cohort)) != len(self.cohort):
                raise UsageError("cohort indices must be distinct")
            if any(j < 1 for j in self.cohort):
                raise UsageError("cohort indices are 1-based")


def _config_record(cfg: ScenarioConfig) -> dict:
    rec = {"record": "config", "command": cfg.command, "seed": cfg.seed,
           "version": __version__}
    for key in ("t", "n", "m", "variant", "trials", "samples", "complex_probes",
                "state_kind", "probe_spec", "label", "cohort", "note_path",
                "shares_dir", "out_path"):
        value = getattr(cfg, key)
        if value not in (None, False):
            rec[key] = list(value) if isinstance(value, tuple) else value
    return rec


def _figures():
    # imported on demand so matplotlib loads only when figures are requested
    from . import figures

    return figures


def _emit(cfg: ScenarioConfig, records: list[dict], summary: str,
          figure_jobs: list[tuple[str, object]] = ()) -> None:
    sys.stdout.write(summary)
    if not cfg.report_prefix:
        return
    written = [
        reporting.write_jsonl(cfg.report_prefix + ".jsonl", records),
        reporting.write_text(cfg.report_prefix + ".txt", summary),
    ]
    if cfg.figures:
        for name, job in figure_jobs:
            written.append(job(cfg.report_prefix + "_" + name + ".png"))
    for path in written:
        sys.stdout.write(f"wrote {path}\n")


# ---------------------------------------------------------------------------
# issue / check


def _cmd_issue(cfg: ScenarioConfig) -> int:
    rng = np.random.default_rng(cfg.seed)
    key = field.SecretKey.random(cfg.m, rng)
    shares = field.make_shares(key, cfg.t, cfg.n, rng, label=cfg.label)
    pre = field.precompute_cohort(shares, list(range(1, cfg.t + 1)))
    note = protocol.issue(pre, cfg.m, cfg.variant, rng)
    out = Path(cfg.out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(protocol.serialize(note))
    shares_dir = Path(cfg.shares_dir) if cfg.shares_dir else out.parent
    shares_dir.mkdir(parents=True, exist_ok=True)
    share_paths = field.write_share_files(shares, shares_dir)
    records = [_config_record(cfg)]
    records.append({"record": "banknote", "path": str(out), "label": cfg.label,
                    "pairs": cfg.m, "variant": cfg.variant})
    for path in share_paths:
        records.append({"record": "share_file", "path": str(path)})
    summary = reporting.kv_block([
        ("command", cfg.command),
        ("label", cfg.label),
        ("threshold", f"{cfg.t} of {cfg.n}"),
        ("pairs", cfg.m),
        ("variant", cfg.variant),
        ("seed", cfg.seed),
        ("banknote", str(out)),
        ("share files", len(share_paths)),
    ])
    _emit(cfg, records, summary)
    return EXIT_OK


def _load_cohort(cfg: ScenarioConfig, note: protocol.Banknote):
    share_files = sorted(Path(cfg.shares_dir).glob("center_*.share"))
    if not share_files:
        raise UsageError(f"no center_*.share files in {cfg.shares_dir}")
    recs = [field.read_share_file(p) for p in share_files]
    first = recs[0]
    for rec in recs[1:]:
        if (rec.t, rec.n, rec.m, rec.label, rec.field) != (
            first.t, first.n, first.m, first.label, first.field
        ):
            raise UsageError("share files disagree on parameters")
    if first.label != note.label:
        raise UsageError(
            f"share label {first.label!r} does not match banknote {note.label!r}"
        )
    if first.m != note.m:
        raise UsageError(f"share m={first.m} does not match banknote m={note.m}")
    by_index = {rec.x.bits: rec for rec in recs}
    cohort = cfg.cohort or tuple(sorted(by_index)[-first.t:])
    if len(cohort) != first.t:
        raise UsageError(f"cohort must name exactly t={first.t} centers")
    missing = [j for j in cohort if j not in by_index]
    if missing:
        raise UsageError(f"no share file for center(s) {missing}")
    chosen = [by_index[j] for j in cohort]
    xs = [rec.x for rec in chosen]
    pre = [
        field.precompute((rec.x, rec.s), xs, first.m, label=first.label)
        for rec in chosen
    ]
    return pre, cohort


def _cmd_check(cfg: ScenarioConfig) -> int:
    note = protocol.deserialize(Path(cfg.note_path).read_bytes())
    pre, cohort = _load_cohort(cfg, note)
    variant = cfg.variant or note.variant
    rng = np.random.default_rng(cfg.seed)
    transformed, blinds = protocol.run_check_circuit(note, pre, variant, rng)
    p_accept = protocol.acceptance_probability(transformed, blinds)
    result = protocol.measurer_verify(transformed, blinds, rng)
    records = [_config_record(cfg)]
    rows = []
    for i, c in enumerate(result.outcomes, 1):
        records.append({"record": "outcome", "pair": i, "c": f"{c:02b}"})
        rows.append((i, f"{c:02b}"))
    records.append({
        "record": "verdict",
        "accepted": result.accepted,
        "acceptance_probability": p_accept,
        "cohort": list(cohort),
        "variant": variant,
    })
    summary = reporting.kv_block([
        ("command", cfg.command),
        ("banknote", cfg.note_path),
        ("cohort", ",".join(str(j) for j in cohort)),
        ("variant", variant),
        ("seed", cfg.seed),
    ])
    summary += "\n" + reporting.table(("pair", "c"), rows)
    summary += "\n" + reporting.kv_block([
        ("acceptance probability", p_accept),
        ("accepted", "yes" if result.accepted else "no"),
    ])
    _emit(cfg, records, summary)
    return EXIT_OK if result.accepted else EXIT_REJECT


# ---------------------------------------------------------------------------
# attacks


def _cmd_fake_signal(cfg: ScenarioConfig) -> int:
    rng = np.random.default_rng(cfg.seed)
    records = [_config_record(cfg)]
    family_rows = []
    family_max = 0.0
    for idx, probe in enumerate(eavesdrop.max_information_probes(), 1):
        bound = eavesdrop.info_bound(probe, cfg.variant)
        family_max = max(family_max, bound)
        records.append({
            "record": "probe_family",
            "family": idx,
            "entropy_bits": bound,
            "amps": list(probe.amps),
        })
        family_rows.append((idx, bound))
    swp = eavesdrop.sweep(cfg.samples, rng, cfg.variant, cfg.complex_probes)
    max_entropy = max(family_max, swp.max_entropy)
    records.append({
        "record": "sweep",
        "samples": swp.count,
        "complex_probes": swp.complex_probes,
        "max_entropy_bits": swp.max_entropy,
        "min_entropy_bits": swp.min_entropy,
        "max_closed_form_deviation": swp.max_closed_form_deviation,
        "argmax_amps": list(swp.argmax_amps),
    })
    exact_error, exact_mi = eavesdrop.intercept_resend(cfg.variant, 0)
    intercept = {
        "record": "intercept_resend",
        "exact_error": exact_error,
        "exact_information_bits": exact_mi,
    }
    sampled_error = None
    if cfg.trials:
        sampled_error, _ = eavesdrop.intercept_resend(cfg.variant, cfg.trials, rng)
        intercept["sampled_error"] = sampled_error
        intercept["trials"] = cfg.trials
    records.append(intercept)
    pairs = [
        ("command", cfg.command),
        ("variant", cfg.variant),
        ("seed", cfg.seed),
        ("random probes", swp.count),
        ("max entropy (bits)", max_entropy),
        ("min sweep entropy (bits)", swp.min_entropy),
        ("saturating families", f"{len(family_rows)} at 2 bits"),
        ("intercept-resend error", exact_error),
        ("intercept-resend information (bits)", exact_mi),
    ]
    if swp.max_closed_form_deviation is not None:
        pairs.insert(5, ("eigenvalue max deviation", swp.max_closed_form_deviation))
    if sampled_error is not None:
        pairs.append((f"sampled error ({cfg.trials} trials)", sampled_error))
    summary = reporting.kv_block(pairs)
    jobs = [("entropy",
             lambda p, e=swp.entropies: _figures().entropy_histogram(e, p))]
    _emit(cfg, records, summary, jobs)
    if max_entropy > 2.0 + SPECTRUM_TOL:
        return EXIT_VERIFY
    if (swp.max_closed_form_deviation is not None
            and swp.max_closed_form_deviation > SPECTRUM_TOL):
        return EXIT_VERIFY
    return EXIT_OK


def _intrusion_state(kind: str, m: int, rng) -> qsim.StateVector:
    dim = 2 ** m
    if kind == "basis":
        amps = np.zeros(dim)
        amps[0] = 1.0
    elif kind == "uniform":
        amps = np.full(dim, dim ** -0.5)
    elif kind == "random":
        amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        amps = amps / np.linalg.norm(amps)
    else:
        raise UsageError(f"unknown intrusion state kind {kind!r}")
    return qsim.StateVector(amps, (2,) * m)


def _cmd_trojan(cfg: ScenarioConfig) -> int:
    if cfg.m < 2:
        raise UsageError("intrusion register needs at least 2 qubits")
    rng = np.random.default_rng(cfg.seed)
    data = _intrusion_state(cfg.state_kind, cfg.m, rng)
    p0, p1 = trojan.flip_probabilities(data)
    average = 0.5 * (p0 + p1)
    gap = abs(p0 + p1 - 1.0)
    flips = 0
    for _ in range(cfg.trials):
        aux = int(rng.integers(0, 2))
        flipped, _ = trojan.detect(data, aux, rng)
        flips += int(flipped)
    sampled = flips / cfg.trials if cfg.trials else None
    legal = max(
        trojan.trace_stages(qsim.ket(0, 2), aux).p_flip for aux in (0, 1)
    )
    one_copy = trojan.multi_copy_experiment(copies=1)
    two_copy = trojan.multi_copy_experiment(copies=2)
    records = [_config_record(cfg)]
    records.append({"record": "intrusion", "kind": cfg.state_kind, "qubits": cfg.m,
                    "amps": list(data.amps)})
    records.append({"record": "flip_exact", "p0": p0, "p1": p1,
                    "average": average, "complementarity_gap": gap})
    if sampled is not None:
        records.append({"record": "flip_sampled", "trials": cfg.trials,
                        "flips": flips, "rate": sampled})
    records.append({"record": "legal_flip", "p_flip": legal})
    records.append({"record": "copy_experiment", "one_copy": one_copy,
                    "two_copy": two_copy})
    pairs = [
        ("command", cfg.command),
        ("intrusion", f"{cfg.state_kind}, {cfg.m} qubits"),
        ("seed", cfg.seed),
        ("flip probability (aux 0)", p0),
        ("flip probability (aux 1)", p1),
        ("average flip probability", average),
        ("complementarity gap", gap),
        ("legal single-qubit flip", legal),
        ("single-copy flip", one_copy),
        ("two-copy flip", two_copy),
    ]
    if sampled is not None:
        pairs.append((f"sampled flip rate ({cfg.trials} trials)", sampled))
    summary = reporting.kv_block(pairs)
    labels = ["aux 0", "aux 1", "average", "legal", "two-copy"]
    values = [p0, p1, average, legal, two_copy]
    if sampled is not None:
        labels.append("sampled")
        values.append(sampled)
    jobs = [("flips", lambda p, lb=labels, vl=values: _figures().bar_figure(
        lb, vl, p, ylabel="flip probability"))]
    _emit(cfg, records, summary, jobs)
    if legal > IDENTITY_TOL or abs(two_copy - 0.75) > IDENTITY_TOL:
        return EXIT_VERIFY
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze / verify / demo


def _parse_probe(text: str) -> eavesdrop.FakeSignal:
    amps = np.zeros(16)
    seen = set()
    for chunk in text.split(","):
        name, sep, value = chunk.partition("=")
        name = name.strip()
        if not sep:
            raise UsageError(f"probe term {chunk!r} is not letter=value")
        if name not in eavesdrop.LETTERS:
            raise UsageError(f"unknown probe letter {name!r}")
        if name in seen:
            raise UsageError(f"probe letter {name!r} given twice")
        seen.add(name)
        try:
            amps[eavesdrop.LETTERS.index(name)] = float(value)
        except ValueError as exc:
            raise UsageError(f"bad probe value {value!r}") from exc
    norm = float(np.linalg.norm(amps))
    if norm < 1e-12:
        raise UsageError("probe has zero norm")
    return eavesdrop.FakeSignal(amps / norm)


def _cmd_eigenvalues(cfg: ScenarioConfig) -> int:
    theta = _parse_probe(cfg.probe_spec)
    records = [_config_record(cfg)]
    records.append({"record": "probe", "amps": list(theta.amps)})
    if cfg.variant == "cyclic":
        report = eavesdrop.closed_form_eigs(theta)
        numeric = report.numeric
        closed = report.closed_form
        entropy = report.entropy_bits
        deviation = report.max_deviation
    else:
        w = eavesdrop.build_w(theta, cfg.variant)
        numeric = np.sort(np.linalg.eigvalsh(w.entries))[::-1]
        closed = None
        entropy = qsim.von_neumann_entropy(w)
        deviation = None
    records.append({
        "record": "spectrum",
        "numeric": list(numeric),
        "closed_form": None if closed is None else list(closed),
        "entropy_bits": entropy,
        "max_deviation": deviation,
    })
    pairs = [
        ("command", cfg.command),
        ("variant", cfg.variant),
        ("probe", cfg.probe_spec),
        ("entropy (bits)", entropy),
    ]
    if deviation is not None:
        pairs.append(("closed-form max deviation", deviation))
    summary = reporting.kv_block(pairs)
    summary += "\n" + reporting.table(
        ("rank", "eigenvalue"),
        [(k + 1, float(numeric[k])) for k in range(len(numeric))],
    )
    jobs = [("spectrum",
             lambda p, nm=numeric, cl=closed: _figures().spectrum_figure(nm, cl, p))]
    _emit(cfg, records, summary, jobs)
    if deviation is not None and deviation > SPECTRUM_TOL:
        return EXIT_VERIFY
    return EXIT_OK


def _identity_checks() -> list[tuple[str, float]]:
    def dev(matrix) -> float:
        return float(np.max(np.abs(matrix)))

    i4 = np.eye(4)
    v = qsim.grover_v()
    u = qsim.u_cyclic()
    checks = [
        ("grover_involution", dev(v @ v - i4)),
        ("cyclic_order_four", dev(np.linalg.matrix_power(u, 4) - i4)),
        ("cyclic_commutes_with_grover", dev(u @ v - v @ u)),
        ("xor_involution",
         max(dev(qsim.u_xor(a) @ qsim.u_xor(a) - i4) for a in range(4))),
        ("xor_commutes_with_grover",
         max(dev(qsim.u_xor(a) @ v - v @ qsim.u_xor(a)) for a in range(4))),
        ("coded_ops_unitary",
         max(dev(c.matrix().conj().T @ c.matrix() - i4)
             for variant in qsim.VARIANTS for c in qsim.all_op_codes(variant))),
        ("detector_inverts_entangler",
         dev(qsim.t_detect() @ qsim.cnot() @ np.kron(qsim.hadamard(), np.eye(2))
             - i4)),
    ]
    basis = np.column_stack([qsim.basis_state(x, 1).amps for x in range(4)])
    checks.append(("conjugated_basis_orthonormal", dev(basis.conj().T @ basis - i4)))
    checks.append(("bases_quarter_overlap", dev(np.abs(basis) ** 2 - 0.25)))
    x = eavesdrop.x_transform()
    checks.append(("spectrum_transform_orthogonal", dev(x @ x.T - np.eye(16))))
    rng = np.random.default_rng(0)
    key = field.SecretKey.random(2, rng)
    shares = field.make_shares(key, 3, 5, rng, label="selfcheck")
    pre = field.precompute_cohort(shares, [2, 4, 5])
    xor_sum = 0
    for share in pre:
        xor_sum ^= share.k.bits
    checks.append(("share_xor_recombination",
                   float(xor_sum != field.encode_key(key, shares.field).bits)))
    error, info = eavesdrop.intercept_resend("cyclic", 0)
    checks.append(("intercept_error_three_eighths", abs(error - 0.375)))
    checks.append(("intercept_information_one_bit", abs(info - 1.0)))
    checks.append(("two_copy_flip_three_quarters",
                   abs(trojan.multi_copy_experiment(copies=2) - 0.75)))
    checks.append(("legal_probe_bound_two_bits",
                   abs(eavesdrop.info_bound(eavesdrop.legal_probe(), "cyclic") - 2.0)))
    return checks


def _cmd_identities(cfg: ScenarioConfig) -> int:
    checks = _identity_checks()
    records = [_config_record(cfg)]
    rows = []
    all_ok = True
    for name, deviation in checks:
        ok = deviation <= IDENTITY_TOL
        all_ok = all_ok and ok
        records.append({"record": "identity", "name": name,
                        "deviation": deviation, "tolerance": IDENTITY_TOL,
                        "ok": ok})
        rows.append((name, deviation, "ok" if ok else "FAIL"))
    summary = reporting.kv_block([
        ("command", cfg.command),
        ("checks", len(checks)),
        ("result", "all ok" if all_ok else "FAILURES"),
    ])
    summary += "\n" + reporting.table(("identity", "deviation", "status"), rows)
    names = [name for name, _ in checks]
    devs = [deviation for _, deviation in checks]
    jobs = [("deviations",
             lambda p, nm=names, dv=devs: _figures().deviation_figure(nm, dv, p))]
    _emit(cfg, records, summary, jobs)
    return EXIT_OK if all_ok else EXIT_VERIFY


def _cmd_flaw(cfg: ScenarioConfig) -> int:
    rng = np.random.default_rng(cfg.seed)
    # fixed key pair a=01, b=0: the two checking passes double the shift
    pre = [field.PrecomputedShare.from_pairs([(1, 0)], label="flawdemo")]
    note = protocol.issue(pre, 1, "cyclic", rng)
    result = protocol.check(note, pre, "cyclic", rng)
    c1 = result.outcomes[0]
    det_ok = c1 == 2 and not result.accepted
    rejected = 0
    for _ in range(cfg.trials):
        key = field.SecretKey.random(1, rng)
        pre = [field.PrecomputedShare.from_pairs(key.pairs, label="flawdemo")]
        note = protocol.issue(pre, 1, "cyclic", rng)
        if not protocol.check(note, pre, "cyclic", rng).accepted:
            rejected += 1
    rate = rejected / cfg.trials if cfg.trials else None
    rate_ok = rate is None or 0.4 <= rate <= 0.6
    records = [_config_record(cfg)]
    records.append({"record": "deterministic_defect", "key_pair": "01",
                    "c": f"{c1:02b}", "expected_c": "10",
                    "accepted": result.accepted})
    if rate is not None:
        records.append({"record": "rejection_rate", "trials": cfg.trials,
                        "rejected": rejected, "rate": rate,
                        "window": [0.4, 0.6]})
    pairs = [
        ("command", cfg.command),
        ("variant", "cyclic"),
        ("seed", cfg.seed),
        ("honest key 01 outcome c", f"{c1:02b} (expected 10)"),
        ("honest banknote accepted", "yes" if result.accepted else "no"),
    ]
    if rate is not None:
        pairs.append((f"rejection rate ({cfg.trials} random keys)", rate))
    summary = reporting.kv_block(pairs)
    jobs = []
    if rate is not None:
        jobs = [("rate", lambda p, a=cfg.trials - rejected, r=rejected:
                 _figures().bar_figure(["accepted", "rejected"], [a, r], p,
                                       ylabel="honest round trips"))]
    _emit(cfg, records, summary, jobs)
    return EXIT_OK if det_ok and rate_ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# argument wiring


def _add_report_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--report", metavar="PREFIX",
                        help="write PREFIX.jsonl and PREFIX.txt")
    parser.add_argument("--figures", action="store_true",
                        help="also render PNG figures next to the report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tqcash",
        description="Threshold quantum-cash simulator and verification toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("issue", help="split a fresh key and issue a banknote")
    p.add_argument("--t", type=int, required=True, help="checking threshold")
    p.add_argument("--n", type=int, required=True, help="number of centers")
    p.add_argument("--m", type=int, required=True, help="qubit pairs per note")
    p.add_argument("--variant", choices=qsim.VARIANTS, default="xor")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--label", default="note")
    p.add_argument("--out", required=True, help="banknote output path")
    p.add_argument("--shares-dir", help="share file directory (default: note's)")
    _add_report_flags(p)

    p = sub.add_parser("check", help="run the checking pass on a banknote file")
    p.add_argument("--note", required=True, help="banknote path")
    p.add_argument("--shares-dir", required=True)
    p.add_argument("--cohort", help="comma-separated center indices (default: last t)")
    p.add_argument("--variant", choices=qsim.VARIANTS,
                   help="override the banknote's variant")
    p.add_argument("--seed", type=int, default=0)
    _add_report_flags(p)

    attack = sub.add_parser("attack", help="quantify an eavesdropping strategy")
    kinds = attack.add_subparsers(dest="attack_kind", required=True)

    p = kinds.add_parser("fake-signal", help="entangled-probe information bounds")
    p.add_argument("--samples", type=int, default=1000,
                   help="random probes to sweep")
    p.add_argument("--variant", choices=qsim.VARIANTS, default="cyclic")
    p.add_argument("--complex", dest="complex_probes", action="store_true",
                   help="draw complex probe amplitudes")
    p.add_argument("--trials", type=int, default=0,
                   help="intercept-resend Monte Carlo trials (0 = exact only)")
    p.add_argument("--seed", type=int, default=0)
    _add_report_flags(p)

    p = kinds.add_parser("trojan", help="multi-qubit substitution detection")
    p.add_argument("--m", type=int, default=3, help="intrusion register qubits")
    p.add_argument("--state", choices=("basis", "random", "uniform"),
                   default="basis", help="intrusion state family")
    p.add_argument("--trials", type=int, default=1000,
                   help="sampled detector runs")
    p.add_argument("--seed", type=int, default=0)
    _add_report_flags(p)

    analyze = sub.add_parser("analyze", help="spectral analysis")
    what = analyze.add_subparsers(dest="analyze_what", required=True)
    p = what.add_parser("eigenvalues", help="spectrum of the averaged probe state")
    p.add_argument("--probe", default="a=1",
                   help="comma-separated letter=value amplitudes, normalized")
    p.add_argument("--variant", choices=qsim.VARIANTS, default="cyclic")
    p.add_argument("--seed", type=int, default=0)
    _add_report_flags(p)

    verify = sub.add_parser("verify", help="self-checks")
    what = verify.add_subparsers(dest="verify_what", required=True)
    p = what.add_parser("identities", help="operator and protocol identities")
    p.add_argument("--seed", type=int, default=0)
    _add_report_flags(p)

    demo = sub.add_parser("demo", help="reproduce a documented behavior")
    what = demo.add_subparsers(dest="demo_what", required=True)
    p = what.add_parser("flaw", help="cyclic-variant honest rejection")
    p.add_argument("--trials", type=int, default=10000,
                   help="random honest round trips")
    p.add_argument("--seed", type=int, default=0)
    _add_report_flags(p)

    return parser


def _config_from(args: argparse.Namespace) -> ScenarioConfig:
    cohort = None
    if getattr(args, "cohort", None):
        try:
            cohort = tuple(int(part) for part in args.cohort.split(","))
        except ValueError as exc:
            raise UsageError(f"bad cohort {args.cohort!r}") from exc
    command = args.command
    for extra in ("attack_kind", "analyze_what", "verify_what", "demo_what"):
        part = getattr(args, extra, None)
        if part:
            command = f"{command} {part}"
    return ScenarioConfig(
        command=command,
        t=getattr(args, "t", None),
        n=getattr(args, "n", None),
        m=getattr(args, "m", None),
        variant=getattr(args, "variant", None),
        seed=getattr(args, "seed", 0),
        trials=getattr(args, "trials", 0),
        samples=getattr(args, "samples", None),
        complex_probes=getattr(args, "complex_probes", False),
        state_kind=getattr(args, "state", None),
        probe_spec=getattr(args, "probe", None),
        label=getattr(args, "label", None),
        cohort=cohort,
        note_path=getattr(args, "note", None),
        shares_dir=getattr(args, "shares_dir", None),
        out_path=getattr(args, "out", None),
        report_prefix=getattr(args, "report", None),
        figures=getattr(args, "figures", False),
    )


HANDLERS = {
    "issue": _cmd_issue,
    "check": _cmd_check,
    "attack fake-signal": _cmd_fake_signal,
    "attack trojan": _cmd_trojan,
    "analyze eigenvalues": _cmd_eigenvalues,
    "verify identities": _cmd_identities,
    "demo flaw": _cmd_flaw,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config_from(args)
        return HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECT


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
