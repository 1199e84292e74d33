"""Independent ground truth: the complex matrix representation of G(p, q).

Generators map to Kronecker chains of the three anticommuting 2x2 matrices
(even n) or to a two-block form whose last generator is a scaled product of
the others with opposite signs in the two blocks (odd n).  The determinant of
the represented matrix defines Det(U); it is computed by fraction-free
elimination over exact Gaussian rationals (default) or by partial-pivot
elimination over complex floats, entirely independent of the multivector
recursions it cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from .algebra import Multivector, Scalar, Signature
from .charpoly import CharPoly
from .errors import ConsistencyError, NonConvergenceError

#: Float-backend tolerance for "this value must be real" checks.
REAL_TOL = 1e-8
#: Relative tolerance for the eigenvalue Vieta reconstruction check.
EIGEN_RECON_TOL = 1e-8


def _exact(value):
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


class ComplexRational:
    """A complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _exact(re))
        object.__setattr__(self, "im", _exact(im))

    def __setattr__(self, name, value):
        raise AttributeError("ComplexRational is immutable")

    def __add__(self, other):
        if isinstance(other, ComplexRational):
            return ComplexRational(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return ComplexRational(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, ComplexRational):
            return ComplexRational(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return ComplexRational(self.re - other, self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, ComplexRational):
            return ComplexRational(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, (int, Fraction)):
            return ComplexRational(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ComplexRational(other)
        if not isinstance(other, ComplexRational):
            return NotImplemented
        norm = other.re * other.re + other.im * other.im
        return ComplexRational(
            Fraction(self.re * other.re + self.im * other.im, norm),
            Fraction(self.im * other.re - self.re * other.im, norm),
        )

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, ComplexRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(self.re) + 1j * complex(self.im)

    def conjugate(self):
        return ComplexRational(self.re, -self.im)

    def __repr__(self):
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}j)"


_CR_ZERO = ComplexRational(0)
_CR_ONE = ComplexRational(1)
_CR_I = ComplexRational(0, 1)


@dataclass(frozen=True)
class ComplexMatrix:
    """A square matrix over exact Gaussian rationals or complex floats."""

    rows: tuple[tuple, ...]

    @property
    def dim(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, dim: int, *, float_backend: bool = False) -> "ComplexMatrix":
        one, zero = (1 + 0j, 0j) if float_backend else (_CR_ONE, _CR_ZERO)
        return cls(tuple(
            tuple(one if r == c else zero for c in range(dim)) for r in range(dim)
        ))

    def __mul__(self, other):
        if isinstance(other, ComplexMatrix):
            cols = tuple(zip(*other.rows))
            return ComplexMatrix(tuple(
                tuple(sum((a * b for a, b in zip(row, col)), _zero_like(row[0]))
                      for col in cols)
                for row in self.rows
            ))
        return NotImplemented

    def __add__(self, other):
        return ComplexMatrix(tuple(
            tuple(a + b for a, b in zip(ra, rb))
            for ra, rb in zip(self.rows, other.rows)
        ))

    def __sub__(self, other):
        return ComplexMatrix(tuple(
            tuple(a - b for a, b in zip(ra, rb))
            for ra, rb in zip(self.rows, other.rows)
        ))

    def scale(self, s) -> "ComplexMatrix":
        return ComplexMatrix(tuple(tuple(e * s for e in row) for row in self.rows))

    def subtract_scalar(self, s) -> "ComplexMatrix":
        """self - s*I."""
        return ComplexMatrix(tuple(
            tuple(e - s if r == c else e for c, e in enumerate(row))
            for r, row in enumerate(self.rows)
        ))

    def trace(self):
        return sum((self.rows[i][i] for i in range(self.dim)),
                   _zero_like(self.rows[0][0]))

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(e) for e in row] for row in self.rows],
                        dtype=np.complex128)


def _zero_like(entry):
    return 0j if isinstance(entry, complex) else _CR_ZERO


def _kron(a: tuple, b: tuple) -> tuple:
    db = len(b)
    return tuple(
        tuple(a[r // db][c // db] * b[r % db][c % db]
              for c in range(len(a) * db))
        for r in range(len(a) * db)
    )


_SIGMA1 = ((_CR_ZERO, _CR_ONE), (_CR_ONE, _CR_ZERO))
_SIGMA2 = ((_CR_ZERO, -_CR_I), (_CR_I, _CR_ZERO))
_SIGMA3 = ((_CR_ONE, _CR_ZERO), (_CR_ZERO, -_CR_ONE))
_ID2 = ((_CR_ONE, _CR_ZERO), (_CR_ZERO, _CR_ONE))


def _even_generator_rows(n: int, eta) -> list[tuple]:
    """Generator matrices for even n: slot ceil(a/2) carries sigma1/sigma2,
    sigma3 pads before, identity after; negative-eta generators scale by i."""
    w = n // 2
    mats = []
    for a in range(1, n + 1):
        slot = (a + 1) // 2
        base = _SIGMA1 if a % 2 == 1 else _SIGMA2
        chain = [_SIGMA3] * (slot - 1) + [base] + [_ID2] * (w - slot)
        rows = reduce(_kron, chain)
        if eta[a - 1] < 0:
            rows = tuple(tuple(e * _CR_I for e in row) for row in rows)
        mats.append(rows)
    return mats


def _block_diag(a: tuple, b: tuple) -> tuple:
    da, db = len(a), len(b)
    zero = _CR_ZERO
    rows = []
    for r in range(da):
        rows.append(tuple(a[r]) + (zero,) * db)
    for r in range(db):
        rows.append((zero,) * da + tuple(b[r]))
    return tuple(rows)


def _mat_mul_rows(a: tuple, b: tuple) -> tuple:
    cols = tuple(zip(*b))
    return tuple(
        tuple(sum((x * y for x, y in zip(row, col)), _CR_ZERO) for col in cols)
        for row in a
    )


class Representation:
    """Cached generator and blade matrices for one signature, self-checked."""

    def __init__(self, sig: Signature):
        self.sig = sig
        self.generators = tuple(
            ComplexMatrix(rows) for rows in self._generator_rows(sig)
        )
        self._check_relations()
        self._blades = self._build_blades()
        self._check_faithful()
        self._blade_entries = [
            [(r, c, e) for r, row in enumerate(m.rows) for c, e in enumerate(row) if e]
            for m in self._blades
        ]
        self._blade_entries_float = [
            [(r, c, complex(e)) for r, c, e in entries]
            for entries in self._blade_entries
        ]

    @staticmethod
    def _generator_rows(sig: Signature):
        n, eta = sig.n, sig.eta
        if n % 2 == 0:
            return _even_generator_rows(n, eta)
        small = _even_generator_rows(n - 1, eta[: n - 1])
        half = 2 ** ((n - 1) // 2)
        identity_small = tuple(
            tuple(_CR_ONE if r == c else _CR_ZERO for c in range(half))
            for r in range(half)
        )
        pseudo = reduce(_mat_mul_rows, small, identity_small)
        square = _mat_mul_rows(pseudo, pseudo)
        s = square[0][0]
        if any(square[r][c] != (s if r == c else _CR_ZERO)
               for r in range(half) for c in range(half)) or s not in (1, -1):
            raise ConsistencyError("product of even-part generators does not square to +-I")
        # (c * pseudo)**2 must equal eta_nn * I.
        scale = _CR_ONE if s == eta[n - 1] else _CR_I
        scaled = tuple(tuple(e * scale for e in row) for row in pseudo)
        negated = tuple(tuple(-e for e in row) for row in scaled)
        full = [_block_diag(rows, rows) for rows in small]
        full.append(_block_diag(scaled, negated))
        return full

    def _check_relations(self) -> None:
        sig = self.sig
        for a in range(sig.n):
            ga = self.generators[a]
            for b in range(a, sig.n):
                gb = self.generators[b]
                anti = ga * gb + gb * ga
                expect = 2 * sig.eta[a] if a == b else 0
                for r, row in enumerate(anti.rows):
                    for c, entry in enumerate(row):
                        want = expect if r == c else 0
                        if entry != want:
                            raise ConsistencyError(
                                f"generator relation failed for (e{a+1}, e{b+1}) in {sig}"
                            )

    def _build_blades(self) -> tuple[ComplexMatrix, ...]:
        blades = [ComplexMatrix.identity(self.sig.N)]
        for bits in range(1, self.sig.dim):
            low = bits & -bits
            rest = bits ^ low
            blades.append(self.generators[low.bit_length() - 1] * blades[rest])
        return tuple(blades)

    def _check_faithful(self) -> None:
        # Faithfulness on the real algebra reduces to: no two blade matrices
        # are proportional.  Normalize each by its first nonzero entry and
        # require all keys distinct; also require non-scalar blades traceless
        # (this is what makes Tr(U) = N * <U>_0).
        seen = {}
        for bits, mat in enumerate(self._blades):
            pivot = next((e for row in mat.rows for e in row if e), None)
            if pivot is None:
                raise ConsistencyError(f"blade {bits} represents as zero in {self.sig}")
            key = tuple(tuple((x / pivot).re for x in row) +
                        tuple((x / pivot).im for x in row) for row in mat.rows)
            if key in seen:
                raise ConsistencyError(
                    f"blades {seen[key]} and {bits} are proportional in {self.sig}"
                )
            seen[key] = bits
            if bits and mat.trace() != 0:
                raise ConsistencyError(
                    f"non-scalar blade {bits} has nonzero trace in {self.sig}"
                )

    def matrix(self, u: Multivector) -> ComplexMatrix:
        N = self.sig.N
        if u.is_float:
            acc = [[0j] * N for _ in range(N)]
            entries = self._blade_entries_float
        else:
            acc = [[_CR_ZERO] * N for _ in range(N)]
            entries = self._blade_entries
        for bits, coeff in enumerate(u.coeffs):
            if coeff:
                for r, c, value in entries[bits]:
                    acc[r][c] = acc[r][c] + coeff * value
        return ComplexMatrix(tuple(tuple(row) for row in acc))


_REPRESENTATIONS: dict[Signature, Representation] = {}


def build_representation(sig: Signature) -> Representation:
    """The (cached, construction-checked) representation of G(p, q)."""
    rep = _REPRESENTATIONS.get(sig)
    if rep is None:
        rep = Representation(sig)
        _REPRESENTATIONS[sig] = rep
    return rep


def represent(u: Multivector) -> ComplexMatrix:
    """The matrix of u: the linear extension of the blade matrices."""
    return build_representation(u.sig).matrix(u)


def _det_bareiss(matrix: ComplexMatrix) -> ComplexRational:
    """Fraction-free elimination; exact for Gaussian-rational entries."""
    d = matrix.dim
    a = [list(row) for row in matrix.rows]
    sign = 1
    prev = _CR_ONE
    for k in range(d - 1):
        if not a[k][k]:
            for r in range(k + 1, d):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return _CR_ZERO
        pivot = a[k][k]
        for i in range(k + 1, d):
            row_i = a[i]
            row_k = a[k]
            lead = row_i[k]
            for j in range(k + 1, d):
                row_i[j] = (row_i[j] * pivot - lead * row_k[j]) / prev
        prev = pivot
    result = a[d - 1][d - 1]
    return result if sign > 0 else -result


def _require_real_exact(value: ComplexRational, context: str):
    if value.im != 0:
        raise ConsistencyError(f"{context} has nonzero imaginary part: {value}")
    return value.re


def _require_real_float(value: complex, context: str) -> float:
    if abs(value.imag) > REAL_TOL * max(1.0, abs(value.real)):
        raise ConsistencyError(f"{context} has nonzero imaginary part: {value}")
    return value.real


def det_matrix(u: Multivector) -> Scalar:
    """Det(u) = det(beta(u)); exact Bareiss or float partial-pivot LU."""
    mat = represent(u)
    if u.is_float:
        det = complex(np.linalg.det(mat.to_numpy()))
        return _require_real_float(det, "det(beta(u))")
    det = _det_bareiss(mat)
    return _require_real_exact(det, "det(beta(u))")


def charpoly_matrix(u: Multivector) -> CharPoly:
    """Characteristic coefficients from the trace recursion on beta(u)."""
    sig = u.sig
    mat = represent(u)
    N = sig.N
    mk = mat
    coeffs = []
    for k in range(1, N + 1):
        t = mk.trace()
        if u.is_float:
            ck = _require_real_float(t, f"trace of step-{k} matrix") / k
        else:
            re = _require_real_exact(t, f"trace of step-{k} matrix")
            ck = _exact(Fraction(re, k))
        coeffs.append(ck)
        if k < N:
            mk = mat * mk.subtract_scalar(ck)
    return CharPoly(sig, tuple(coeffs))


def eigenvalues(u: Multivector) -> tuple[complex, ...]:
    """The N roots of phi_U, by eigenvalue iteration on the companion matrix
    of the characteristic polynomial; sorted by (real, imaginary).

    Elementary symmetric polynomials of the result must reconstruct the C(k)
    within relative 1e-8 or ConsistencyError is raised.
    """
    cp = charpoly_matrix(u)
    N = u.sig.N
    coeffs = [float(c) for c in cp.coeffs]
    # The C(k) are real, so the companion is a real matrix; the real-path
    # eigensolver resolves 2x2 blocks analytically (exact double roots).
    companion = np.zeros((N, N), dtype=np.float64)
    companion[0, :] = coeffs
    for i in range(1, N):
        companion[i, i - 1] = 1.0
    try:
        roots = np.linalg.eigvals(companion)
    except np.linalg.LinAlgError as exc:
        raise NonConvergenceError(f"eigenvalue iteration failed: {exc}") from exc
    # Vieta reconstruction: coefficients of prod(lambda - root) must give
    # back the characteristic coefficients.
    recomposed = np.poly(roots)
    for k in range(1, N + 1):
        expected = coeffs[k - 1]
        got = -complex(recomposed[k])
        if abs(got - expected) > EIGEN_RECON_TOL * max(1.0, abs(expected)):
            raise ConsistencyError(
                f"eigenvalues do not reconstruct C({k}): {got} vs {expected}"
            )
    ordered = sorted((complex(z) for z in roots), key=lambda z: (z.real, z.imag))
    return tuple(ordered)
