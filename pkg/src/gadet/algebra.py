"""Blade-indexed multivector arithmetic over the real Clifford algebras G(p, q).

Basis blades are encoded as n-bit masks: bit a-1 set means generator e_a is a
factor of the blade, so the blade's grade is the popcount of its mask.  A
multivector is a dense vector of 2**n coefficients indexed by blade mask.

Coefficients come in two backends:

* exact -- ``int`` / ``fractions.Fraction`` (default; identities verify to
  literal zero),
* float -- ``float``, with tolerance-based equality (relative 1e-9,
  absolute 1e-12).

A value containing any float coefficient is float-backed; mixing an exact
multivector with a float one follows normal numeric coercion and yields a
float result.  All values are immutable and every operation is a pure
function of its inputs.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from operator import itemgetter
from operator import mul as _operator_mul
from typing import Iterable, Union

from .errors import SignatureMismatchError

Scalar = Union[int, Fraction, float]

#: Equality tolerances for the float backend.
REL_TOL = 1e-9
ABS_TOL = 1e-12

_MIN_N = 1
_MAX_N = 6


# ---------------------------------------------------------------------------
# conjugations


@dataclass(frozen=True)
class Conjugation:
    """A grade-sign conjugation.

    ``kind`` is one of ``"grade_involution"``, ``"reversion"``, ``"delta"``,
    ``"bar"``; ``j`` is set only for ``"delta"``.  delta(1) acts identically
    to the grade involution and delta(2) to the reversion.
    """

    kind: str
    j: int | None = None

    def __str__(self) -> str:
        if self.kind == "delta":
            return f"delta{self.j}"
        return self.kind


GRADE_INVOLUTION = Conjugation("grade_involution")
REVERSION = Conjugation("reversion")
BAR = Conjugation("bar")


def delta(j: int) -> Conjugation:
    """The j-th triangle conjugation, with grade sign (-1)**binom(k, 2**(j-1))."""
    return Conjugation("delta", int(j))


def _grade_sign(conj: Conjugation, k: int) -> int:
    if conj.kind == "grade_involution":
        return -1 if k & 1 else 1
    if conj.kind == "reversion":
        return -1 if (k * (k - 1) // 2) & 1 else 1
    if conj.kind == "delta":
        return -1 if math.comb(k, 2 ** (conj.j - 1)) & 1 else 1
    if conj.kind == "bar":
        return 1 if k == 0 else -1
    raise ValueError(f"unknown conjugation kind {conj.kind!r}")


def charpoly_degree(n: int) -> int:
    """Degree N = 2**floor((n+1)/2) of the characteristic polynomial."""
    return 2 ** ((n + 1) // 2)


# ---------------------------------------------------------------------------
# signature


class Signature:
    """The algebra G(p, q): p generators squaring to +1, q to -1, n = p+q.

    Instances are interned per (p, q), so signatures compare by identity and
    every multivector of one algebra shares the same blade tables.  Derived
    quantities: N = 2**floor((n+1)/2) (characteristic polynomial degree) and
    m = floor(log2 n) + 1 (number of delta conjugations).
    """

    _instances: dict[tuple[int, int], "Signature"] = {}

    __slots__ = (
        "p", "q", "n", "N", "m", "dim", "eta", "grades",
        "_geta", "_getb", "_segments", "_conj_signs", "_identity", "_zero",
    )

    def __new__(cls, p: int, q: int) -> "Signature":
        key = (int(p), int(q))
        sig = cls._instances.get(key)
        if sig is None:
            sig = super().__new__(cls)
            sig._build(*key)
            cls._instances[key] = sig
        return sig

    def _build(self, p: int, q: int) -> None:
        if p < 0 or q < 0:
            raise ValueError(f"p and q must be non-negative, got ({p}, {q})")
        n = p + q
        if not _MIN_N <= n <= _MAX_N:
            raise ValueError(f"n = p + q must be in [{_MIN_N}, {_MAX_N}], got {n}")
        self.p = p
        self.q = q
        self.n = n
        self.N = charpoly_degree(n)
        self.m = n.bit_length()  # floor(log2 n) + 1 for n >= 1
        self.dim = 1 << n
        self.eta = (1,) * p + (-1,) * q
        self.grades = tuple(i.bit_count() for i in range(self.dim))
        self._build_product_tables()
        self._conj_signs = {}
        self._identity = None
        self._zero = None

    def _blade_product(self, a: int, b: int) -> tuple[int, int]:
        """Product of basis blades a and b: result mask and sign.

        The sign counts the transpositions needed to interleave the two
        generator lists into canonical ascending order; each generator shared
        by both blades then contracts to its eta factor.
        """
        swaps = 0
        x = a >> 1
        while x:
            swaps += (x & b).bit_count()
            x >>= 1
        sign = -1 if swaps & 1 else 1
        common = a & b
        while common:
            low = common & -common
            if self.eta[low.bit_length() - 1] < 0:
                sign = -sign
            common ^= low
        return a ^ b, sign

    def _build_product_tables(self) -> None:
        # Flat layout: for each output blade k, the contributing (i, j) pairs,
        # positive-sign pairs first.  Products then run as one C-level gather
        # (itemgetter), one multiply pass, and two slice-sums per output.
        dim = self.dim
        by_output = [([], []) for _ in range(dim)]
        for i in range(dim):
            for j in range(dim):
                k, sign = self._blade_product(i, j)
                by_output[k][0 if sign > 0 else 1].append((i, j))
        flat_a: list[int] = []
        flat_b: list[int] = []
        segments = []
        for plus, minus in by_output:
            start = len(flat_a)
            for i, j in plus:
                flat_a.append(i)
                flat_b.append(j)
            mid = len(flat_a)
            for i, j in minus:
                flat_a.append(i)
                flat_b.append(j)
            segments.append((slice(start, mid), slice(mid, len(flat_a))))
        self._geta = itemgetter(*flat_a)
        self._getb = itemgetter(*flat_b)
        self._segments = tuple(segments)

    def conjugation_signs(self, conj: Conjugation) -> tuple[int, ...]:
        """Per-blade sign vector of a conjugation (cached)."""
        key = (conj.kind, conj.j)
        signs = self._conj_signs.get(key)
        if signs is None:
            if conj.kind == "delta" and not 1 <= (conj.j or 0) <= self.m:
                raise ValueError(
                    f"delta({conj.j}) is not defined for n = {self.n} (1 <= j <= {self.m})"
                )
            per_grade = [_grade_sign(conj, k) for k in range(self.n + 1)]
            signs = tuple(per_grade[g] for g in self.grades)
            self._conj_signs[key] = signs
        return signs

    def available_conjugations(self) -> tuple[Conjugation, ...]:
        """Every conjugation defined for this algebra."""
        return (GRADE_INVOLUTION, REVERSION,
                *(delta(j) for j in range(1, self.m + 1)), BAR)

    def blade_name(self, bits: int) -> str:
        """Canonical blade token, e.g. 0b110 -> 'e23'; the scalar blade is '1'."""
        if bits == 0:
            return "1"
        return "e" + "".join(str(a + 1) for a in range(self.n) if bits >> a & 1)

    @property
    def identity(self) -> "Multivector":
        """The identity element e (exact backend)."""
        if self._identity is None:
            self._identity = Multivector.scalar(self, 1)
        return self._identity

    @property
    def zero(self) -> "Multivector":
        """The zero multivector (exact backend)."""
        if self._zero is None:
            self._zero = Multivector(self, (0,) * self.dim)
        return self._zero

    def __repr__(self) -> str:
        return f"Signature({self.p}, {self.q})"

    def __str__(self) -> str:
        return f"G({self.p},{self.q})"

    def __reduce__(self):
        return (Signature, (self.p, self.q))


def all_signatures(max_n: int = _MAX_N) -> tuple[Signature, ...]:
    """Every supported signature with 1 <= p + q <= max_n, ordered by (n, -p)."""
    return tuple(
        Signature(p, n - p) for n in range(1, max_n + 1) for p in range(n, -1, -1)
    )


# ---------------------------------------------------------------------------
# multivector


def _normalize_exact(c):
    if type(c) is int:
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return int(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


def _common_denominator(coeffs) -> int:
    d = 1
    for c in coeffs:
        cd = c.denominator
        if cd != 1:
            d = d * cd // math.gcd(d, cd)
    return d


def _ratio(num: int, den: int):
    f = Fraction(num, den)
    return f.numerator if f.denominator == 1 else f


def _close(x, y) -> bool:
    return math.isclose(x, y, rel_tol=REL_TOL, abs_tol=ABS_TOL)


class Multivector:
    """A dense multivector of G(p, q); immutable.

    ``coeffs`` holds one coefficient per blade mask.  Construct with any
    iterable of 2**n numbers, or through :meth:`scalar`, :meth:`blade`,
    :meth:`basis_blade`, :meth:`from_terms`.
    """

    __slots__ = ("sig", "coeffs", "_float")

    def __init__(self, sig: Signature, coeffs: Iterable[Scalar]):
        coeffs = tuple(coeffs)
        if len(coeffs) != sig.dim:
            raise ValueError(
                f"expected {sig.dim} coefficients for {sig}, got {len(coeffs)}"
            )
        if any(isinstance(c, float) for c in coeffs):
            coeffs = tuple(float(c) for c in coeffs)
            is_float = True
        else:
            coeffs = tuple(_normalize_exact(c) for c in coeffs)
            is_float = False
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_float", is_float)

    @classmethod
    def _raw(cls, sig: Signature, coeffs: tuple, is_float: bool) -> "Multivector":
        # Internal: coefficients already in normal form.
        mv = object.__new__(cls)
        object.__setattr__(mv, "sig", sig)
        object.__setattr__(mv, "coeffs", coeffs)
        object.__setattr__(mv, "_float", is_float)
        return mv

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def scalar(cls, sig: Signature, value: Scalar) -> "Multivector":
        """value * e."""
        z = 0.0 if isinstance(value, float) else 0
        return cls(sig, (value,) + (z,) * (sig.dim - 1))

    @classmethod
    def basis_blade(cls, sig: Signature, bits: int, coeff: Scalar = 1) -> "Multivector":
        """coeff times the blade with the given mask."""
        if not 0 <= bits < sig.dim:
            raise ValueError(f"blade mask {bits} out of range for {sig}")
        z = 0.0 if isinstance(coeff, float) else 0
        coeffs = [z] * sig.dim
        coeffs[bits] = coeff
        return cls(sig, coeffs)

    @classmethod
    def blade(cls, sig: Signature, *indices: int, coeff: Scalar = 1) -> "Multivector":
        """coeff * e_{i1...ik} from ascending generator indices (1-based)."""
        bits = 0
        for a in indices:
            if not 1 <= a <= sig.n:
                raise ValueError(f"generator index {a} out of range for {sig}")
            bit = 1 << (a - 1)
            if bits & bit:
                raise ValueError(f"repeated generator index {a}")
            bits |= bit
        return cls.basis_blade(sig, bits, coeff)

    @classmethod
    def from_terms(cls, sig: Signature, terms: dict[int, Scalar]) -> "Multivector":
        """Build from a {blade mask: coefficient} mapping."""
        coeffs = [0] * sig.dim
        for bits, c in terms.items():
            if not 0 <= bits < sig.dim:
                raise ValueError(f"blade mask {bits} out of range for {sig}")
            coeffs[bits] = coeffs[bits] + c
        return cls(sig, coeffs)

    # -- basic queries -----------------------------------------------------

    @property
    def is_float(self) -> bool:
        return self._float

    def coefficient(self, bits: int) -> Scalar:
        return self.coeffs[bits]

    def scalar_part(self) -> Scalar:
        return self.coeffs[0]

    def trace(self) -> Scalar:
        """Tr(U) = N * <U>_0."""
        return self.sig.N * self.coeffs[0]

    def _magnitude(self) -> float:
        return max(abs(c) for c in self.coeffs)

    def is_zero(self) -> bool:
        if self._float:
            return all(_close(c, 0.0) for c in self.coeffs)
        return not any(self.coeffs)

    def is_scalar(self) -> bool:
        """True when all grades >= 1 vanish (tolerance-scaled for floats)."""
        rest = self.coeffs[1:]
        if not self._float:
            return not any(rest)
        scale = max(1.0, self._magnitude())
        return all(abs(c) <= max(ABS_TOL, REL_TOL * scale) for c in rest)

    # -- grade structure ---------------------------------------------------

    def grade(self, k: int) -> "Multivector":
        """Projection onto grade k."""
        sig = self.sig
        if not 0 <= k <= sig.n:
            raise ValueError(f"grade {k} out of range for {sig}")
        z = 0.0 if self._float else 0
        coeffs = tuple(
            c if g == k else z for c, g in zip(self.coeffs, sig.grades)
        )
        return Multivector._raw(sig, coeffs, self._float)

    def grades(self) -> tuple[int, ...]:
        """Sorted grades with a nonzero coefficient."""
        present = {g for c, g in zip(self.coeffs, self.sig.grades) if c}
        return tuple(sorted(present))

    # -- conjugations ------------------------------------------------------

    def conjugate(self, conj: Conjugation) -> "Multivector":
        signs = self.sig.conjugation_signs(conj)
        coeffs = tuple(c if s > 0 else -c for c, s in zip(self.coeffs, signs))
        return Multivector._raw(self.sig, coeffs, self._float)

    def grade_involution(self) -> "Multivector":
        return self.conjugate(GRADE_INVOLUTION)

    def reversion(self) -> "Multivector":
        return self.conjugate(REVERSION)

    def delta(self, j: int) -> "Multivector":
        return self.conjugate(delta(j))

    def bar(self) -> "Multivector":
        """2<U>_0 - U: negates every grade except 0."""
        return self.conjugate(BAR)

    # -- arithmetic --------------------------------------------------------

    def _check_sig(self, other: "Multivector") -> None:
        if other.sig is not self.sig:
            raise SignatureMismatchError(
                f"operands from different algebras: {self.sig} vs {other.sig}"
            )

    def __add__(self, other):
        if isinstance(other, Multivector):
            self._check_sig(other)
            return Multivector(self.sig, map(_add, self.coeffs, other.coeffs))
        if isinstance(other, (int, Fraction, float)):
            coeffs = list(self.coeffs)
            coeffs[0] = coeffs[0] + other
            return Multivector(self.sig, coeffs)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Multivector):
            self._check_sig(other)
            return Multivector(self.sig, map(_sub, self.coeffs, other.coeffs))
        if isinstance(other, (int, Fraction, float)):
            coeffs = list(self.coeffs)
            coeffs[0] = coeffs[0] - other
            return Multivector(self.sig, coeffs)
        return NotImplemented

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return Multivector._raw(
            self.sig, tuple(-c for c in self.coeffs), self._float
        )

    def _scale(self, s: Scalar) -> "Multivector":
        if type(s) is int and s == 1:
            return self
        return Multivector(self.sig, (s * c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Multivector):
            self._check_sig(other)
            return self._geometric_product(other)
        if isinstance(other, (int, Fraction, float)):
            return self._scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, float)):
            return self._scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._scale(Fraction(1, 1) / other)
        if isinstance(other, float):
            return self._scale(1.0 / other)
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = self.sig.identity
        for _ in range(k):
            result = result * self
        return result

    def _geometric_product(self, other: "Multivector") -> "Multivector":
        sig = self.sig
        a, b = self.coeffs, other.coeffs
        # Scalar operands reduce to a scale; this also covers the identity.
        if not any(a[1:]):
            return other._scale(a[0])
        if not any(b[1:]):
            return self._scale(b[0])
        if self._float or other._float:
            prods = list(map(_operator_mul, sig._geta(a), sig._getb(b)))
            coeffs = tuple(
                float(sum(prods[plus]) - sum(prods[minus]))
                for plus, minus in sig._segments
            )
            return Multivector._raw(sig, coeffs, True)
        # Exact path: factor out the (small) common denominators, convolve in
        # plain int arithmetic, divide back once.
        da = _common_denominator(a)
        db = _common_denominator(b)
        if da != 1:
            a = tuple(int(c * da) for c in a)
        if db != 1:
            b = tuple(int(c * db) for c in b)
        prods = list(map(_operator_mul, sig._geta(a), sig._getb(b)))
        den = da * db
        if den == 1:
            coeffs = tuple(
                sum(prods[plus]) - sum(prods[minus])
                for plus, minus in sig._segments
            )
        else:
            coeffs = tuple(
                _ratio(sum(prods[plus]) - sum(prods[minus]), den)
                for plus, minus in sig._segments
            )
        return Multivector._raw(sig, coeffs, False)

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, float)):
            other = Multivector.scalar(self.sig, other)
        if not isinstance(other, Multivector):
            return NotImplemented
        self._check_sig(other)
        if self._float or other._float:
            return all(map(_close, self.coeffs, other.coeffs))
        return self.coeffs == other.coeffs

    __hash__ = None  # tolerance-based equality is incompatible with hashing

    # -- conversion and display --------------------------------------------

    def to_float(self) -> "Multivector":
        if self._float:
            return self
        return Multivector._raw(
            self.sig, tuple(float(c) for c in self.coeffs), True
        )

    def to_exact(self) -> "Multivector":
        """Exact-backend copy; floats convert to their exact binary value."""
        if not self._float:
            return self
        return Multivector(self.sig, (Fraction(c) for c in self.coeffs))

    def __str__(self) -> str:
        sig = self.sig
        order = sorted(range(sig.dim), key=lambda i: (sig.grades[i], i))
        parts: list[str] = []
        for i in order:
            c = self.coeffs[i]
            if not c:
                continue
            negative = c < 0
            mag = -c if negative else c
            if i == 0:
                token = _format_scalar(mag)
            elif mag == 1 and not isinstance(mag, float):
                token = sig.blade_name(i)
            else:
                token = f"{_format_scalar(mag)}*{sig.blade_name(i)}"
            if not parts:
                parts.append(f"-{token}" if negative else token)
            else:
                parts.append(f"- {token}" if negative else f"+ {token}")
        return " ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"<{self.sig} {self}>"


def _add(x, y):
    return x + y


def _sub(x, y):
    return x - y


def _format_scalar(c: Scalar) -> str:
    if isinstance(c, float):
        return repr(c)
    return str(c)


# ---------------------------------------------------------------------------
# operation aliases (functional spelling of the Multivector methods)


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    return a * b


def grade_projection(u: Multivector, k: int) -> Multivector:
    return u.grade(k)


def conjugate(u: Multivector, conj: Conjugation) -> Multivector:
    return u.conjugate(conj)


def scalar_part(u: Multivector) -> Scalar:
    return u.scalar_part()


def trace(u: Multivector) -> Scalar:
    return u.trace()


def random_multivector(
    sig: Signature,
    rng: random.Random,
    *,
    float_backend: bool = False,
) -> Multivector:
    """A random multivector: integer coefficients uniform in [-9, 9] (exact
    backend) or uniform floats in [-9, 9] (float backend)."""
    if float_backend:
        coeffs = tuple(rng.uniform(-9.0, 9.0) for _ in range(sig.dim))
        return Multivector._raw(sig, coeffs, True)
    coeffs = tuple(rng.randint(-9, 9) for _ in range(sig.dim))
    return Multivector._raw(sig, coeffs, False)
