"""GF(2^N) arithmetic, Shamir sharing, and key bit-layout codecs.

Field elements are integers whose binary digits are polynomial
coefficients over GF(2); arithmetic is done modulo a fixed irreducible
polynomial of degree N.  For a banknote secret of m pairs the field
degree is N = 3m and pair i occupies bits [3(i-1), 3i) of an element,
laid out as (a_i high bit, a_i low bit, b_i) with pair 1 in the least
significant bits.

The default modulus for each degree is the lexicographically smallest
irreducible polynomial, found deterministically at setup, so runs are
reproducible without any out-of-band parameter agreement.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence


def clmul(a: int, b: int) -> int:
    """Carry-less product of two coefficient bit vectors."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, m: int) -> int:
    """Reduce the bit vector a modulo the polynomial m."""
    dm = m.bit_length() - 1
    while a.bit_length() - 1 >= dm and a:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    """Polynomial long division, returns (quotient, remainder)."""
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = b.bit_length() - 1
    q = 0
    while a.bit_length() - 1 >= db and a:
        shift = a.bit_length() - 1 - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(poly: int) -> bool:
    """Deterministic irreducibility test (Rabin) for a GF(2) polynomial."""
    n = poly.bit_length() - 1
    if n < 1:
        return False

    def x_pow_pow2(k: int) -> int:
        # x^(2^k) mod poly via k squarings
        h = poly_mod(0b10, poly)
        for _ in range(k):
            h = poly_mod(clmul(h, h), poly)
        return h

    if x_pow_pow2(n) != poly_mod(0b10, poly):
        return False
    for p in _prime_factors(n):
        h = x_pow_pow2(n // p)
        if poly_gcd(poly, h ^ poly_mod(0b10, poly)) != 1:
            return False
    return True


def smallest_irreducible(n: int) -> int:
    """Lexicographically smallest irreducible polynomial of degree n."""
    if n < 1:
        raise ValueError(f"degree must be positive, got {n}")
    if n == 1:
        return 0b10
    # Degree >= 2 irreducibles need a nonzero constant term, so step by 2.
    for cand in range((1 << n) + 1, 1 << (n + 1), 2):
        if is_irreducible(cand):
            return cand
    raise AssertionError("unreachable: irreducibles exist for every degree")


class BinaryField:
    """GF(2^n) under a fixed irreducible modulus.

    Two instances compare equal iff they use the same modulus, so
    elements from independently constructed fields interoperate.
    """

    def __init__(self, n: int, modulus: int | None = None):
        if n < 1:
            raise ValueError(f"field degree must be positive, got {n}")
        if modulus is None:
            modulus = smallest_irreducible(n)
        if modulus.bit_length() - 1 != n:
            raise ValueError(
                f"modulus {modulus:#x} has degree {modulus.bit_length() - 1}, expected {n}"
            )
        if not is_irreducible(modulus):
            raise ValueError(f"modulus {modulus:#x} is reducible over GF(2)")
        self.n = n
        self.modulus = modulus
        self.order = 1 << n

    def __eq__(self, other) -> bool:
        return isinstance(other, BinaryField) and self.modulus == other.modulus

    def __hash__(self) -> int:
        return hash(("BinaryField", self.modulus))

    def __repr__(self) -> str:
        return f"BinaryField(n={self.n}, modulus={self.modulus:#x})"

    def element(self, bits: int) -> "FieldElement":
        return FieldElement(bits, self)

    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def random_element(self, rng) -> "FieldElement":
        return FieldElement(rand_bits(rng, self.n), self)


def rand_bits(rng, nbits: int) -> int:
    """Uniform integer in [0, 2^nbits) from a numpy Generator."""
    v = 0
    for lo in range(0, nbits, 32):
        width = min(32, nbits - lo)
        v |= int(rng.integers(0, 1 << width)) << lo
    return v


@dataclass(frozen=True)
class FieldElement:
    """An N-bit element of GF(2^N), tied to its field's modulus."""

    bits: int
    field: BinaryField

    def __post_init__(self):
        if not 0 <= self.bits < self.field.order:
            raise ValueError(
                f"element {self.bits:#x} out of range for GF(2^{self.field.n})"
            )

    def _check(self, other: "FieldElement"):
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.field != self.field:
            raise ValueError("field modulus mismatch")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.bits ^ other.bits, self.field)

    __sub__ = __add__  # characteristic 2

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(
            poly_mod(clmul(self.bits, other.bits), self.field.modulus), self.field
        )

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return self * other.inverse()

    def inverse(self) -> "FieldElement":
        if self.bits == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        t, new_t = 0, 1
        r, new_r = self.field.modulus, self.bits
        while new_r:
            q, rem = poly_divmod(r, new_r)
            r, new_r = new_r, rem
            t, new_t = new_t, t ^ clmul(q, new_t)
        # r is now gcd = 1; t may exceed the field width before reduction
        return FieldElement(poly_mod(t, self.field.modulus), self.field)

    def __repr__(self) -> str:
        return f"FieldElement({self.bits:#x}, GF(2^{self.field.n}))"


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def inv(x: FieldElement) -> FieldElement:
    return x.inverse()


# ---------------------------------------------------------------------------
# Banknote secrets and their bit layout


@dataclass(frozen=True)
class SecretKey:
    """Banknote secret: m pairs (a_i, b_i), a_i two bits, b_i one bit."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(self.pairs) < 1:
            raise ValueError("secret needs at least one pair")
        for a, b in self.pairs:
            if not 0 <= a <= 3:
                raise ValueError(f"a value {a} outside {{0..3}}")
            if b not in (0, 1):
                raise ValueError(f"b value {b} outside {{0,1}}")

    @property
    def m(self) -> int:
        return len(self.pairs)

    @classmethod
    def random(cls, m: int, rng) -> "SecretKey":
        return cls(
            tuple((int(rng.integers(0, 4)), int(rng.integers(0, 2))) for _ in range(m))
        )


def field_for_pairs(m: int, modulus: int | None = None) -> BinaryField:
    """The GF(2^3m) field carrying an m-pair secret."""
    if m < 1:
        raise ValueError(f"pair count must be positive, got {m}")
    return BinaryField(3 * m, modulus)


def encode_key(key: SecretKey, field: BinaryField) -> FieldElement:
    """Pack (a_i, b_i) pairs into a field element, pair 1 lowest."""
    if field.n != 3 * key.m:
        raise ValueError(f"field degree {field.n} does not fit {key.m} pairs")
    bits = 0
    for i, (a, b) in enumerate(key.pairs):
        bits |= ((a << 1) | b) << (3 * i)
    return FieldElement(bits, field)


def decode_pairs(element: FieldElement, m: int) -> tuple[tuple[int, int], ...]:
    """Unpack a field element into m (a_i, b_i) pairs."""
    if element.field.n != 3 * m:
        raise ValueError(f"field degree {element.field.n} does not fit {m} pairs")
    out = []
    for i in range(m):
        chunk = (element.bits >> (3 * i)) & 0b111
        out.append((chunk >> 1, chunk & 1))
    return tuple(out)


def decode_key(element: FieldElement, m: int) -> SecretKey:
    return SecretKey(decode_pairs(element, m))


# ---------------------------------------------------------------------------
# Shamir sharing


@dataclass(frozen=True)
class ShareSet:
    """All n evaluation points of the dealer's sharing polynomial."""

    label: str
    points: tuple[tuple[FieldElement, FieldElement], ...]
    t: int
    n: int
    m: int

    def __post_init__(self):
        validate_label(self.label)
        if len(self.points) != self.n:
            raise ValueError(f"expected {self.n} points, got {len(self.points)}")
        if not 1 <= self.t <= self.n:
            raise ValueError(f"need 1 <= t <= n, got t={self.t}, n={self.n}")
        xs = [x.bits for x, _ in self.points]
        if 0 in xs:
            raise ValueError("share points must be nonzero")
        if len(set(xs)) != len(xs):
            raise ValueError("share points must be distinct")

    @property
    def field(self) -> BinaryField:
        return self.points[0][0].field


def validate_label(label: str):
    if not label or any(c.isspace() or c == "=" for c in label):
        raise ValueError(f"label {label!r} must be nonempty without spaces or '='")


def poly_eval(coeffs: Sequence[FieldElement], x: FieldElement) -> FieldElement:
    """Horner evaluation; coeffs[0] is the constant term."""
    acc = x.field.zero()
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def make_shares(
    key: SecretKey,
    t: int,
    n: int,
    rng,
    label: str = "note",
    field: BinaryField | None = None,
    xs: Sequence[FieldElement] | None = None,
) -> ShareSet:
    """Split a secret into n points of a random degree-(t-1) polynomial.

    The constant term is the packed secret; x_j defaults to the first n
    nonzero field elements.  n is capped at 2^N - 1 because the x_j must
    be distinct and nonzero.
    """
    if field is None:
        field = field_for_pairs(key.m)
    if not 1 <= t <= n:
        raise ValueError(f"need 1 <= t <= n, got t={t}, n={n}")
    if n > field.order - 1:
        raise ValueError(
            f"n={n} exceeds the {field.order - 1} distinct nonzero points of GF(2^{field.n})"
        )
    if xs is None:
        xs = [field.element(j) for j in range(1, n + 1)]
    else:
        xs = list(xs)
        if len(xs) != n:
            raise ValueError(f"expected {n} x values, got {len(xs)}")
    coeffs = [encode_key(key, field)]
    coeffs += [field.random_element(rng) for _ in range(t - 1)]
    points = tuple((x, poly_eval(coeffs, x)) for x in xs)
    return ShareSet(label=label, points=points, t=t, n=n, m=key.m)


def lagrange_coefficient(
    xs: Iterable[FieldElement], xj: FieldElement
) -> FieldElement:
    """Interpolation weight at zero for the point xj within the cohort xs.

    The weight is the product of x_l / (x_l - x_j) over the other cohort
    points, where subtraction is XOR.
    """
    xs = list(xs)
    seen = {x.bits for x in xs}
    if len(seen) != len(xs):
        raise ValueError("cohort points must be distinct")
    if 0 in seen:
        raise ValueError("cohort points must be nonzero")
    if xj.bits not in seen:
        raise ValueError(f"point {xj.bits:#x} is not in the cohort")
    acc = xj.field.one()
    for xl in xs:
        if xl.bits == xj.bits:
            continue
        acc = acc * (xl / (xl + xj))
    return acc


def interpolate_at_zero(
    points: Sequence[tuple[FieldElement, FieldElement]]
) -> FieldElement:
    """Recover the polynomial's constant term from t evaluation points."""
    xs = [x for x, _ in points]
    acc = xs[0].field.zero()
    for x, s in points:
        acc = acc + s * lagrange_coefficient(xs, x)
    return acc


@dataclass(frozen=True)
class PrecomputedShare:
    """A center's additive contribution K_j and its decoded pair values."""

    k: FieldElement
    decoded: tuple[tuple[int, int], ...]
    x: FieldElement
    label: str = "note"

    def __post_init__(self):
        if self.decoded != decode_pairs(self.k, len(self.decoded)):
            raise ValueError("decoded pairs do not match the field element")

    @property
    def m(self) -> int:
        return len(self.decoded)

    @classmethod
    def from_pairs(
        cls,
        pairs: Sequence[tuple[int, int]],
        field: BinaryField | None = None,
        x: FieldElement | None = None,
        label: str = "note",
    ) -> "PrecomputedShare":
        """Build a share directly from pair values (mainly for tests/demos)."""
        key = SecretKey(tuple(pairs))
        if field is None:
            field = field_for_pairs(key.m)
        k = encode_key(key, field)
        if x is None:
            x = field.one()
        return cls(k=k, decoded=key.pairs, x=x, label=label)


def precompute(
    share: tuple[FieldElement, FieldElement],
    cohort: Sequence[FieldElement],
    m: int,
    label: str = "note",
) -> PrecomputedShare:
    """Turn one raw share into its cohort-specific additive contribution."""
    xj, sj = share
    coeff = lagrange_coefficient(cohort, xj)
    kj = sj * coeff
    return PrecomputedShare(k=kj, decoded=decode_pairs(kj, m), x=xj, label=label)


def precompute_cohort(
    shares: ShareSet, indices: Sequence[int]
) -> list[PrecomputedShare]:
    """Precompute for the cohort given by 1-based center indices."""
    if len(indices) != shares.t:
        raise ValueError(f"cohort size {len(indices)} differs from t={shares.t}")
    if len(set(indices)) != len(indices):
        raise ValueError("cohort indices must be distinct")
    for j in indices:
        if not 1 <= j <= shares.n:
            raise ValueError(f"center index {j} outside 1..{shares.n}")
    cohort = [shares.points[j - 1][0] for j in indices]
    return [
        precompute(shares.points[j - 1], cohort, shares.m, label=shares.label)
        for j in indices
    ]


# ---------------------------------------------------------------------------
# Share files, one per center


def _hex_width(n: int) -> int:
    return (n + 3) // 4


def share_file_text(shares: ShareSet, j: int) -> str:
    """Render center j's share record (1-based center index)."""
    if not 1 <= j <= shares.n:
        raise ValueError(f"center index {j} outside 1..{shares.n}")
    x, s = shares.points[j - 1]
    field = shares.field
    w = _hex_width(field.n)
    return (
        f"label={shares.label}\n"
        f"params={shares.t},{shares.n},{shares.m}\n"
        f"modulus={field.modulus:x}\n"
        f"x={x.bits:0{w}x}\n"
        f"S={s.bits:0{w}x}\n"
    )


def write_share_files(shares: ShareSet, directory: str | Path) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for j in range(1, shares.n + 1):
        path = directory / f"center_{j}.share"
        path.write_text(share_file_text(shares, j))
        paths.append(path)
    return paths


@dataclass(frozen=True)
class ShareRecord:
    """One center's share as read back from its file."""

    label: str
    t: int
    n: int
    m: int
    x: FieldElement
    s: FieldElement

    @property
    def field(self) -> BinaryField:
        return self.x.field


def parse_share_file(text: str) -> ShareRecord:
    lines = text.splitlines()
    if len(lines) != 5:
        raise ValueError(f"share file must have exactly 5 lines, got {len(lines)}")
    fields = {}
    for line, key in zip(lines, ("label", "params", "modulus", "x", "S")):
        prefix = key + "="
        if not line.startswith(prefix):
            raise ValueError(f"expected line starting with {prefix!r}, got {line!r}")
        fields[key] = line[len(prefix):]
    try:
        t, n, m = (int(v) for v in fields["params"].split(","))
    except ValueError as exc:
        raise ValueError(f"malformed params line {fields['params']!r}") from exc
    modulus = int(fields["modulus"], 16)
    field = BinaryField(modulus.bit_length() - 1, modulus)
    if field.n != 3 * m:
        raise ValueError(f"modulus degree {field.n} does not match m={m}")
    w = _hex_width(field.n)
    for key in ("x", "S"):
        if len(fields[key]) != w:
            raise ValueError(f"{key} must be exactly {w} hex digits, got {fields[key]!r}")
    x = field.element(int(fields["x"], 16))
    s = field.element(int(fields["S"], 16))
    if x.bits == 0:
        raise ValueError("share point x must be nonzero")
    validate_label(fields["label"])
    if not 1 <= t <= n:
        raise ValueError(f"need 1 <= t <= n, got t={t}, n={n}")
    return ShareRecord(label=fields["label"], t=t, n=n, m=m, x=x, s=s)


def read_share_file(path: str | Path) -> ShareRecord:
    return parse_share_file(Path(path).read_text())
