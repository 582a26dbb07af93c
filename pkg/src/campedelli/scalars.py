"""Exact coefficient fields: Q(zeta_9), prime fields F_p with a chosen ninth
root of unity, and the quadratic extensions F_{p^2}.

Every scalar type here is immutable and supports +, -, *, / and ==, so the
polynomial layer can stay field-generic.  The cyclotomic field is represented
as Q[t]/(t^6 + t^3 + 1); the residue class of t is the ninth root of unity
``zeta`` and ``zeta**3`` is the cube root ``omega``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

#: minimal polynomial of zeta_9: Phi_9(t) = t^6 + t^3 + 1
PHI9 = (1, 0, 0, 1, 0, 0, 1)

#: primes used by default for finite-field screens; all are 1 mod 9
DEFAULT_PRIMES = (19, 37, 73, 109)


class BadPrimeError(ValueError):
    pass


class DenominatorCollisionError(ZeroDivisionError):
    pass


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to a rational number")


_ZERO6 = (Fraction(0),) * 6


def cyc_reduce(coeffs) -> "Cyc":
    """Reduce a list of rational coefficients of t^0, t^1, ... modulo Phi_9.

    Accepts any degree; uses t^6 = -t^3 - 1 repeatedly.
    """
    work = [_as_fraction(c) for c in coeffs]
    for k in range(len(work) - 1, 5, -1):
        c = work[k]
        if c:
            work[k - 3] -= c
            work[k - 6] -= c
        work[k] = Fraction(0)
    work = work[:6] + [Fraction(0)] * (6 - len(work))
    return Cyc(tuple(work[:6]))


class Cyc:
    """Element of Q(zeta_9) in canonical coordinates c0 + c1*z + ... + c5*z^5."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=_ZERO6):
        if len(coeffs) != 6:
            raise ValueError("need exactly 6 coordinates")
        object.__setattr__(self, "coeffs", tuple(_as_fraction(c) for c in coeffs))

    def __setattr__(self, *a):
        raise AttributeError("Cyc is immutable")

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def from_rational(x) -> "Cyc":
        return Cyc((_as_fraction(x),) + _ZERO6[:5])

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyc.from_rational(other)
        if not isinstance(other, Cyc):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    # -- ring operations ------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return Cyc(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyc(tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return Cyc(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        ia = [i for i in range(6) if a[i]]
        ib = [j for j in range(6) if b[j]]
        acc = [Fraction(0)] * 11
        for i in ia:
            ai = a[i]
            for j in ib:
                acc[i + j] += ai * b[j]
        # reduce degrees 10..6 via t^6 = -t^3 - 1
        for k in range(10, 5, -1):
            c = acc[k]
            if c:
                acc[k - 3] -= c
                acc[k - 6] -= c
        return Cyc(tuple(acc[:6]))

    __rmul__ = __mul__

    def inverse(self) -> "Cyc":
        """Multiplicative inverse, via the 6x6 rational multiplication matrix."""
        if not self:
            raise ZeroDivisionError("inverse of 0 in Q(zeta_9)")
        # columns of M are the coordinates of self * t^j
        cols = []
        power = Cyc.from_rational(1)
        for _ in range(6):
            cols.append((self * power).coeffs)
            power = power * ZETA
        # solve M x = e0 by Gaussian elimination on the augmented system
        mat = [[cols[j][i] for j in range(6)] + [Fraction(1 if i == 0 else 0)]
               for i in range(6)]
        n = 6
        for col in range(n):
            piv = next(r for r in range(col, n) if mat[r][col])
            mat[col], mat[piv] = mat[piv], mat[col]
            inv = 1 / mat[col][col]
            mat[col] = [v * inv for v in mat[col]]
            for r in range(n):
                if r != col and mat[r][col]:
                    f = mat[r][col]
                    mat[r] = [v - f * w for v, w in zip(mat[r], mat[col])]
        return Cyc(tuple(mat[i][n] for i in range(6)))

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Cyc.from_rational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- rendering ------------------------------------------------------------

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mag = -c if c < 0 else c
            if i == 0:
                body = str(mag)
            elif mag == 1:
                body = "z" if i == 1 else f"z^{i}"
            else:
                body = f"{mag}*z" if i == 1 else f"{mag}*z^{i}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts) if parts else "0"

    def __repr__(self):
        return f"Cyc({self})"


def _coerce(x):
    if isinstance(x, Cyc):
        return x
    if isinstance(x, (int, Fraction)):
        return Cyc.from_rational(x)
    return None


def cyc_from_str(text: str) -> Cyc:
    """Parse the rendering produced by ``str(Cyc)``."""
    text = text.strip()
    if text == "0":
        return Cyc()
    coeffs = [Fraction(0)] * 6
    # normalize "a - b" to "a + -b" then split on " + "
    norm = text.replace("- ", "+ -").replace("-z", "-1*z")
    if norm.startswith("+ "):
        norm = norm[2:]
    for chunk in norm.split("+ "):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "z" in chunk:
            if "*" in chunk:
                cpart, zpart = chunk.split("*", 1)
                coeff = Fraction(cpart)
            else:
                zpart = chunk
                coeff = Fraction(-1 if zpart.startswith("-") else 1)
                zpart = zpart.lstrip("-")
            power = 1 if zpart == "z" else int(zpart.split("^")[1])
            coeffs[power] += coeff
        else:
            coeffs[0] += Fraction(chunk)
    return Cyc(tuple(coeffs))


ZETA = Cyc((0, 1, 0, 0, 0, 0))
OMEGA = ZETA ** 3


class CycField:
    """Field-object facade over :class:`Cyc`, so code can stay field-generic."""

    characteristic = 0

    zero = Cyc()
    one = Cyc.from_rational(1)
    zeta = ZETA
    omega = OMEGA

    def from_int(self, n: int) -> Cyc:
        return Cyc.from_rational(n)

    def from_fraction(self, fr) -> Cyc:
        return Cyc.from_rational(fr)

    def from_cyc(self, a: Cyc) -> Cyc:
        return a

    def __repr__(self):
        return "QQ(zeta9)"


QZ9 = CycField()


# ---------------------------------------------------------------------------
# prime fields
# ---------------------------------------------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(n ** 0.5) + 1):
        if n % d == 0:
            return False
    return True


@lru_cache(maxsize=None)
def smallest_primitive_root(p: int) -> int:
    factors = []
    m = p - 1
    d = 2
    while d * d <= m:
        if m % d == 0:
            factors.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        factors.append(m)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ValueError(f"no primitive root mod {p}")


def default_zeta_image(p: int) -> int:
    """Deterministic order-9 element of F_p*: the (p-1)/9-th power of the
    smallest primitive root."""
    if not _is_prime(p) or p % 9 != 1:
        raise BadPrimeError(f"{p} is not a prime congruent to 1 mod 9")
    return pow(smallest_primitive_root(p), (p - 1) // 9, p)


class Fp:
    __slots__ = ("value", "field")

    def __init__(self, value: int, field: "PrimeField"):
        object.__setattr__(self, "value", value % field.p)
        object.__setattr__(self, "field", field)

    def __setattr__(self, *a):
        raise AttributeError("Fp is immutable")

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other % self.field.p
        if isinstance(other, Fp):
            return self.field.p == other.field.p and self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.value))

    def _val(self, other):
        if isinstance(other, Fp):
            if other.field.p != self.field.p:
                raise ValueError("mixed prime fields")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        if isinstance(other, Fraction):
            return self.field.fraction_residue(other)
        return None

    def __add__(self, other):
        v = self._val(other)
        if v is None:
            return NotImplemented
        return Fp(self.value + v, self.field)

    __radd__ = __add__

    def __neg__(self):
        return Fp(-self.value, self.field)

    def __sub__(self, other):
        v = self._val(other)
        if v is None:
            return NotImplemented
        return Fp(self.value - v, self.field)

    def __rsub__(self, other):
        v = self._val(other)
        if v is None:
            return NotImplemented
        return Fp(v - self.value, self.field)

    def __mul__(self, other):
        v = self._val(other)
        if v is None:
            return NotImplemented
        return Fp(self.value * v, self.field)

    __rmul__ = __mul__

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError(f"inverse of 0 mod {self.field.p}")
        return Fp(pow(self.value, -1, self.field.p), self.field)

    def __truediv__(self, other):
        v = self._val(other)
        if v is None:
            return NotImplemented
        return self * Fp(v, self.field).inverse()

    def __rtruediv__(self, other):
        v = self._val(other)
        if v is None:
            return NotImplemented
        return Fp(v, self.field) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return Fp(pow(self.value, n, self.field.p), self.field)

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"Fp({self.value} mod {self.field.p})"


class PrimeField:
    """F_p with p = 1 mod 9 and a designated ninth root of unity."""

    characteristic: int

    def __init__(self, p: int, zeta_image: int | None = None):
        if not _is_prime(p) or p % 9 != 1:
            raise BadPrimeError(f"{p} is not a prime congruent to 1 mod 9")
        if zeta_image is None:
            zeta_image = default_zeta_image(p)
        if pow(zeta_image, 9, p) != 1 or pow(zeta_image, 3, p) == 1:
            raise BadPrimeError(
                f"{zeta_image} does not have multiplicative order 9 mod {p}")
        self.p = p
        self.characteristic = p
        self.zeta_residue = zeta_image
        self.zero = Fp(0, self)
        self.one = Fp(1, self)
        self.zeta = Fp(zeta_image, self)
        self.omega = self.zeta ** 3

    def from_int(self, n: int) -> Fp:
        return Fp(n, self)

    def fraction_residue(self, fr: Fraction) -> int:
        den = fr.denominator % self.p
        if den == 0:
            raise DenominatorCollisionError(
                f"denominator of {fr} vanishes mod {self.p}")
        return fr.numerator * pow(den, -1, self.p) % self.p

    def from_fraction(self, fr) -> Fp:
        return Fp(self.fraction_residue(_as_fraction(fr)), self)

    def from_cyc(self, a: Cyc) -> Fp:
        """The ring homomorphism Q(zeta_9) -> F_p sending zeta to the
        designated ninth root."""
        acc = 0
        z = 1
        for c in a.coeffs:
            if c:
                acc += self.fraction_residue(c) * z
            z = z * self.zeta_residue % self.p
        return Fp(acc, self)

    def elements(self):
        return [Fp(v, self) for v in range(self.p)]

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p \
            and other.zeta_residue == self.zeta_residue

    def __hash__(self):
        return hash(("PrimeField", self.p, self.zeta_residue))

    def __repr__(self):
        return f"GF({self.p})"


def specialize_mod_p(a: Cyc, p: int, zeta_image: int | None = None) -> Fp:
    return PrimeField(p, zeta_image).from_cyc(a)


# ---------------------------------------------------------------------------
# quadratic extensions, used only by the enumeration screens
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    for n in range(2, p):
        if pow(n, (p - 1) // 2, p) == p - 1:
            return n
    raise ValueError(f"no quadratic non-residue mod {p}")


class Fp2:
    """Element a + b*s of F_p[s]/(s^2 - n)."""

    __slots__ = ("a", "b", "field")

    def __init__(self, a: int, b: int, field: "QuadraticExtField"):
        object.__setattr__(self, "a", a % field.p)
        object.__setattr__(self, "b", b % field.p)
        object.__setattr__(self, "field", field)

    def __setattr__(self, *a):
        raise AttributeError("Fp2 is immutable")

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __eq__(self, other):
        if isinstance(other, int):
            return self.b == 0 and self.a == other % self.field.p
        if isinstance(other, Fp2):
            return (self.field.p == other.field.p and self.a == other.a
                    and self.b == other.b)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, "ext", self.a, self.b))

    def _pair(self, other):
        if isinstance(other, Fp2):
            if other.field.p != self.field.p:
                raise ValueError("mixed fields")
            return other.a, other.b
        if isinstance(other, int):
            return other % self.field.p, 0
        if isinstance(other, Fraction):
            return self.field.base.fraction_residue(other), 0
        return None

    def __add__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        return Fp2(self.a + pr[0], self.b + pr[1], self.field)

    __radd__ = __add__

    def __neg__(self):
        return Fp2(-self.a, -self.b, self.field)

    def __sub__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        return Fp2(self.a - pr[0], self.b - pr[1], self.field)

    def __rsub__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        return Fp2(pr[0] - self.a, pr[1] - self.b, self.field)

    def __mul__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        c, d = pr
        n = self.field.n
        return Fp2(self.a * c + self.b * d * n, self.a * d + self.b * c,
                   self.field)

    __rmul__ = __mul__

    def inverse(self):
        p, n = self.field.p, self.field.n
        norm = (self.a * self.a - self.b * self.b * n) % p
        if norm == 0:
            raise ZeroDivisionError("inverse of 0 in F_p^2")
        inv = pow(norm, -1, p)
        return Fp2(self.a * inv, -self.b * inv, self.field)

    def __truediv__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        return self * Fp2(pr[0], pr[1], self.field).inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __str__(self):
        return f"{self.a}+{self.b}s"

    __repr__ = __str__


class QuadraticExtField:
    """F_{p^2} = F_p[s]/(s^2 - n) for the smallest non-residue n."""

    def __init__(self, p: int):
        self.base = PrimeField(p)
        self.p = p
        self.characteristic = p
        self.n = smallest_nonresidue(p)
        self.order = p * p
        self.zero = Fp2(0, 0, self)
        self.one = Fp2(1, 0, self)
        self.zeta = Fp2(self.base.zeta_residue, 0, self)
        self.omega = self.zeta ** 3

    def from_int(self, k: int) -> Fp2:
        return Fp2(k, 0, self)

    def from_fraction(self, fr) -> Fp2:
        return Fp2(self.base.fraction_residue(_as_fraction(fr)), 0, self)

    def from_cyc(self, a: Cyc) -> Fp2:
        v = self.base.from_cyc(a)
        return Fp2(v.value, 0, self)

    def elements(self):
        return [Fp2(a, b, self) for a in range(self.p) for b in range(self.p)]

    def __repr__(self):
        return f"GF({self.p}^2)"
