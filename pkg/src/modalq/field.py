"""Exact arithmetic in GF(p) and GF(p^k).

Elements are stored as tuples of ``k`` coefficients (lowest degree first),
each reduced mod ``p``. The same element can be addressed by its integer
index ``sum(c_i * p**i)``; enumeration order is increasing index, which is
lexicographic in the coefficients read from the highest degree down.

The numeric kernels work on indices, using a log/antilog table for
extension fields and plain modular arithmetic for prime fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
import itertools
import re

import numpy as np

from .errors import DomainError, FieldMismatchError

# products of two elements must fit in int64 inside the kernels
MAX_PRIME = 2**31 - 1
# log/antilog tables are q entries each
MAX_EXTENSION_ORDER = 2**20

# monic moduli, coefficients low-to-high
BUILTIN_MODULI = {
    4: (2, 2, (1, 1, 1)),  # x^2 + x + 1
    8: (2, 3, (1, 1, 0, 1)),  # x^3 + x + 1
    9: (3, 2, (1, 0, 1)),  # x^2 + 1
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# --- polynomial helpers over GF(p), coefficient tuples low-to-high ---

def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_mod(a, m, p):
    """Remainder of ``a`` modulo the monic-or-not polynomial ``m`` over GF(p)."""
    a = _trim(x % p for x in a)
    m = _trim(x % p for x in m)
    if not m:
        raise ZeroDivisionError("polynomial division by zero")
    lead_inv = pow(m[-1], -1, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        f = a[-1] * lead_inv % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - f * mc) % p
        a = _trim(a)
    return a


def poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def is_irreducible(modulus, p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    m = _trim(x % p for x in modulus)
    deg = len(m) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not poly_mod(m, list(low) + [1], p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A finite field GF(p^k). ``modulus`` is required iff ``k > 1``."""

    p: int
    k: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"characteristic {self.p} is not prime")
        if self.p > MAX_PRIME:
            raise DomainError(f"characteristic {self.p} exceeds {MAX_PRIME}")
        if self.k < 1:
            raise DomainError("extension degree must be >= 1")
        if self.k == 1:
            if self.modulus is not None:
                raise DomainError("prime fields take no modulus")
            return
        if self.modulus is None:
            raise DomainError(f"GF({self.p}^{self.k}) needs a modulus")
        mod = tuple(int(c) for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if len(mod) != self.k + 1 or mod[-1] != 1:
            raise DomainError(f"modulus must be monic of degree {self.k}, got {mod}")
        if any(not 0 <= c < self.p for c in mod):
            raise DomainError("modulus coefficients must lie in [0, p)")
        if self.q > MAX_EXTENSION_ORDER:
            raise DomainError(f"extension field order {self.q} exceeds {MAX_EXTENSION_ORDER}")
        if not is_irreducible(mod, self.p):
            raise DomainError(f"modulus {mod} is reducible over GF({self.p})")

    @classmethod
    def builtin(cls, q: int) -> "FieldSpec":
        if q in BUILTIN_MODULI:
            p, k, mod = BUILTIN_MODULI[q]
            return cls(p, k, mod)
        if is_prime(q):
            return cls(q)
        raise DomainError(f"no built-in field of order {q}")

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``"3"``, ``"4"``, ``"2^2"`` or ``"2^2:1,1,1"``."""
        text = text.strip()
        m = re.fullmatch(r"(\d+)(?:\^(\d+))?(?::([\d,\s]+))?", text)
        if not m:
            raise DomainError(f"cannot parse field spec {text!r}")
        p = int(m.group(1))
        k = int(m.group(2) or 1)
        if m.group(3) is not None:
            mod = tuple(int(t) for t in m.group(3).split(","))
            return cls(p, k, mod)
        if k == 1:
            return cls.builtin(p)
        return cls.builtin(p**k)

    @property
    def q(self) -> int:
        return self.p**self.k

    def __str__(self):
        if self.k == 1:
            return str(self.p)
        return f"{self.p}^{self.k}:" + ",".join(map(str, self.modulus))

    def label(self) -> str:
        return f"GF({self.q})"

    # --- element construction ---

    def from_index(self, n: int) -> "FieldElement":
        if not 0 <= n < self.q:
            raise DomainError(f"index {n} out of range for {self.label()}")
        coeffs = []
        for _ in range(self.k):
            n, r = divmod(n, self.p)
            coeffs.append(r)
        return FieldElement(tuple(coeffs), self)

    def element(self, value) -> "FieldElement":
        """Build an element from an index (int) or a coefficient sequence."""
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise FieldMismatchError("element from another field")
            return value
        if isinstance(value, (int, np.integer)):
            if self.k == 1:
                return FieldElement((int(value) % self.p,), self)
            return self.from_index(int(value))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.k:
            raise DomainError(f"{len(coeffs)} coefficients for a degree-{self.k} field")
        coeffs += [0] * (self.k - len(coeffs))
        return FieldElement(tuple(coeffs), self)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement((0,) * self.k, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement((1,) + (0,) * (self.k - 1), self)

    def elements(self) -> list["FieldElement"]:
        return [self.from_index(i) for i in range(self.q)]

    # --- kernel tables ---

    @cached_property
    def primitive_element(self) -> "FieldElement":
        n = self.q - 1
        prime_factors = [f for f in range(2, n + 1) if n % f == 0 and is_prime(f)]
        for i in range(1, self.q):
            g = self.from_index(i)
            if all(g ** (n // f) != self.one for f in prime_factors):
                return g
        raise AssertionError("finite field without a generator")

    @cached_property
    def kernel_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """(exp, log) index tables; empty for prime fields."""
        if self.k == 1:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        n = self.q - 1
        exp = np.zeros(n, dtype=np.int64)
        log = np.zeros(self.q, dtype=np.int64)
        g = self.primitive_element
        x = self.one
        for i in range(n):
            exp[i] = x.index
            log[x.index] = i
            x = x * g
        exp.setflags(write=False)
        log.setflags(write=False)
        return exp, log

    @property
    def kernel_args(self) -> tuple:
        exp, log = self.kernel_tables
        return self.p, self.k, exp, log


@dataclass(frozen=True)
class FieldElement:
    coeffs: tuple[int, ...]
    spec: FieldSpec = field(repr=False)

    def __post_init__(self):
        if len(self.coeffs) != self.spec.k:
            raise DomainError("coefficient count must equal the extension degree")
        if any(not 0 <= c < self.spec.p for c in self.coeffs):
            raise DomainError("coefficients must be reduced mod p")

    @property
    def index(self) -> int:
        n = 0
        for c in reversed(self.coeffs):
            n = n * self.spec.p + c
        return n

    def __int__(self):
        return self.index

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other):
        if not isinstance(other, FieldElement):
            other = self.spec.element(other)
        if other.spec != self.spec:
            raise FieldMismatchError(f"{self.spec.label()} vs {other.spec.label()}")
        return other

    def __add__(self, other):
        return add(self, self._check(other))

    __radd__ = __add__

    def __neg__(self):
        p = self.spec.p
        return FieldElement(tuple((-c) % p for c in self.coeffs), self.spec)

    def __sub__(self, other):
        return add(self, -self._check(other))

    def __rsub__(self, other):
        return add(self._check(other), -self)

    def __mul__(self, other):
        return mul(self, self._check(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return mul(self, inv(self._check(other)))

    def __rtruediv__(self, other):
        return mul(self._check(other), inv(self))

    def __pow__(self, n: int):
        if n < 0:
            return inv(self) ** (-n)
        result, base = self.spec.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __str__(self):
        if self.spec.k == 1:
            return str(self.coeffs[0])
        terms = []
        for i in range(self.spec.k - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) or "0"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    if a.spec != b.spec:
        raise FieldMismatchError(f"{a.spec.label()} vs {b.spec.label()}")
    p = a.spec.p
    return FieldElement(tuple((x + y) % p for x, y in zip(a.coeffs, b.coeffs)), a.spec)


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    if a.spec != b.spec:
        raise FieldMismatchError(f"{a.spec.label()} vs {b.spec.label()}")
    spec = a.spec
    if spec.k == 1:
        return FieldElement(((a.coeffs[0] * b.coeffs[0]) % spec.p,), spec)
    prod = poly_mul(_trim(a.coeffs), _trim(b.coeffs), spec.p)
    rem = poly_mod(prod, spec.modulus, spec.p) if prod else []
    rem += [0] * (spec.k - len(rem))
    return FieldElement(tuple(rem), spec)


def inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse; Euclid for prime fields, a^(q-2) otherwise."""
    if a.is_zero():
        raise ZeroDivisionError("zero has no inverse")
    spec = a.spec
    if spec.k == 1:
        return FieldElement((pow(a.coeffs[0], -1, spec.p),), spec)
    return a ** (spec.q - 2)


def enumerate_elements(spec: FieldSpec) -> list[FieldElement]:
    return spec.elements()
