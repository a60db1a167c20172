"""Prime fields F_p and one-level extensions F_p[Z]/<P>.

Elements are plain Python values so that hot loops stay cheap:

* prime field: ``int`` in ``[0, p)``;
* extension of degree f: ``tuple`` of f ints, low-to-high coefficients in ``Z``.

All arithmetic goes through the owning :class:`FieldCtx`.  Contexts are frozen
and hashable; two contexts are equal when they describe the same field.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DivisionByZero, NotMonic, NotPrime, Reducible, TooLarge

WORD_BOUND = 1 << 63

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


# -- int-list polynomials over F_p (private helpers) -------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    dm = len(m) - 1
    inv_lc = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lc % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([x % p for x in out])


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _x_pow_mod(e: int, m: list[int], p: int) -> list[int]:
    result, base = [1], _pmod([0, 1], m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def _is_irreducible(m: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial of degree >= 1."""
    f = len(m) - 1
    x = [0, 1]
    if _x_pow_mod(p**f, m, p) != _pmod(x, m, p):
        return False
    for q in _prime_factors(f):
        h = _x_pow_mod(p ** (f // q), m, p)
        diff = _trim([(a - b) % p for a, b in _zip_pad(h, x)])
        if len(_pgcd(m, diff, p)) != 1:
            return False
    return True


def _zip_pad(a: Sequence[int], b: Sequence[int]):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


# -- contexts ----------------------------------------------------------------

@dataclass(frozen=True)
class FieldCtx:
    """A finite field of characteristic ``p`` and degree 1 or ``f``.

    Build instances with :func:`make_prime_field` / :func:`make_extension`;
    the constructor itself does not validate.
    """

    p: int
    modulus: tuple[int, ...] | None = None
    _zero: object = field(init=False, repr=False, compare=False)
    _one: object = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.modulus is None:
            object.__setattr__(self, "_zero", 0)
            object.__setattr__(self, "_one", 1)
        else:
            f = len(self.modulus) - 1
            object.__setattr__(self, "_zero", (0,) * f)
            object.__setattr__(self, "_one", (1,) + (0,) * (f - 1))

    # -- basic structure --------------------------------------------------
    @property
    def degree(self) -> int:
        return 1 if self.modulus is None else len(self.modulus) - 1

    @property
    def is_prime_field(self) -> bool:
        return self.modulus is None

    @property
    def order(self) -> int:
        return self.p**self.degree

    @property
    def zero(self):
        return self._zero

    @property
    def one(self):
        return self._one

    @property
    def base(self) -> "FieldCtx":
        return self if self.modulus is None else FieldCtx(self.p)

    def gen(self):
        """The residue class of ``Z`` (only for extensions)."""
        if self.modulus is None:
            raise ValueError("prime field has no generator Z")
        return (0, 1) + (0,) * (self.degree - 2)

    def __call__(self, x):
        """Coerce an int, a base-field element or a coefficient list."""
        p = self.p
        if self.modulus is None:
            if isinstance(x, (tuple, list)):
                raise TypeError("cannot coerce a coefficient list into a prime field")
            return int(x) % p
        f = self.degree
        if isinstance(x, (tuple, list)):
            coeffs = [int(c) % p for c in x]
            if len(coeffs) > f:
                coeffs = _pmod(coeffs, list(self.modulus), p)
            return tuple(coeffs) + (0,) * (f - len(coeffs))
        return (int(x) % p,) + (0,) * (f - 1)

    def embed(self, a):
        """Map an element of the prime subfield into this field."""
        return self(a)

    def is_zero(self, a) -> bool:
        return a == self._zero

    def in_base(self, a) -> bool:
        return self.modulus is None or not any(a[1:])

    # -- arithmetic -------------------------------------------------------
    def add(self, a, b):
        if self.modulus is None:
            return (a + b) % self.p
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        if self.modulus is None:
            return (a - b) % self.p
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        if self.modulus is None:
            return -a % self.p
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a, b):
        if self.modulus is None:
            return a * b % self.p
        p, f, m = self.p, self.degree, self.modulus
        prod = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for k in range(2 * f - 2, f - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(f):
                    prod[k - f + i] -= c * m[i]
        return tuple(c % p for c in prod[:f])

    def scale(self, c: int, a):
        """Multiply by a prime-field scalar."""
        if self.modulus is None:
            return c * a % self.p
        p = self.p
        return tuple(c * x % p for x in a)

    def inv(self, a):
        if a == self._zero:
            raise DivisionByZero("inverse of zero")
        p = self.p
        if self.modulus is None:
            return pow(a, p - 2, p)
        # extended Euclid on (a, modulus) over F_p
        r0, r1 = list(self.modulus), _trim(list(a))
        s0, s1 = [], [1]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        c = pow(r1[0], p - 2, p)
        return self([c * x for x in s1])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.modulus is None:
            return pow(a, e, self.p)
        result, base = self._one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def sum(self, items: Iterable):
        if self.modulus is None:
            return sum(items) % self.p
        acc = [0] * self.degree
        for x in items:
            for i, c in enumerate(x):
                acc[i] += c
        p = self.p
        return tuple(c % p for c in acc)

    # -- vectors ----------------------------------------------------------
    def dot(self, u: Sequence, v: Sequence):
        if self.modulus is None:
            return sum(x * y for x, y in zip(u, v)) % self.p
        return self.sum(self.mul(x, y) for x, y in zip(u, v) if x != self._zero and y != self._zero)

    def axpy(self, c, x: Sequence, y: Sequence) -> list:
        """Return ``c*x + y``."""
        if self.modulus is None:
            p = self.p
            return [(c * a + b) % p for a, b in zip(x, y)]
        return [self.add(self.mul(c, a), b) for a, b in zip(x, y)]

    def scale_vec(self, c, x: Sequence) -> list:
        if self.modulus is None:
            p = self.p
            return [c * a % p for a in x]
        return [self.mul(c, a) for a in x]

    def zero_vec(self, n: int) -> list:
        return [self._zero] * n

    # -- randomness -------------------------------------------------------
    def random(self, rng: random.Random):
        if self.modulus is None:
            return rng.randrange(self.p)
        return tuple(rng.randrange(self.p) for _ in range(self.degree))

    def random_element(self, seed: int):
        return self.random(random.Random(seed))

    def random_vec(self, n: int, rng: random.Random) -> list:
        return [self.random(rng) for _ in range(n)]

    # -- serialisation ----------------------------------------------------
    def to_json(self, a):
        return a if self.modulus is None else list(a)

    def from_json(self, obj):
        return self(obj)

    def describe(self) -> dict:
        if self.modulus is None:
            return {"char": self.p}
        return {"char": self.p, "ext": list(self.modulus)}

    def format(self, a, var: str = "z") -> str:
        """Human-readable element, using symmetric residues."""
        p = self.p

        def sym(c: int) -> int:
            return c - p if c > p // 2 else c

        if self.modulus is None:
            return str(sym(a))
        terms = []
        for i in range(len(a) - 1, -1, -1):
            c = sym(a[i])
            if c == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        if not terms:
            return "0"
        text = " + ".join(terms).replace("+ -", "- ")
        return text if len(terms) == 1 else f"({text})"


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    return _trim([(x - y) % p for x, y in _zip_pad(a, b)])


def _pdivmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = _trim(list(a))
    db = len(b) - 1
    inv_lc = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - db, 0)
    while len(a) - 1 >= db and a:
        c = a[-1] * inv_lc % p
        shift = len(a) - 1 - db
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return _trim(q), a


def make_prime_field(p: int) -> FieldCtx:
    """F_p for an odd prime ``3 <= p < 2**63``."""
    p = int(p)
    if p >= WORD_BOUND:
        raise TooLarge(f"{p} does not fit a machine word")
    if p == 2 or not is_prime(p):
        raise NotPrime(f"{p} is not an odd prime")
    return FieldCtx(p)


def make_extension(base: FieldCtx, modulus) -> FieldCtx:
    """F_p[Z]/<P> for a monic irreducible ``P`` of degree >= 2.

    ``modulus`` is a low-to-high coefficient list or anything with a
    ``coeffs`` attribute (e.g. a :class:`~seqdecomp.unipoly.UniPoly`).
    """
    if not base.is_prime_field:
        raise ValueError("towers of extensions are not supported")
    coeffs = getattr(modulus, "coeffs", modulus)
    m = _trim([int(c) % base.p for c in coeffs])
    if len(m) < 3:
        raise Reducible(f"extension modulus must have degree >= 2, got {len(m) - 1}")
    if m[-1] != 1:
        raise NotMonic("extension modulus must be monic")
    if not _is_irreducible(m, base.p):
        raise Reducible(f"{m} factors over F_{base.p}")
    return FieldCtx(base.p, tuple(m))


def field_from_json(obj: dict) -> FieldCtx:
    base = make_prime_field(obj["char"])
    if obj.get("ext") is None:
        return base
    return make_extension(base, obj["ext"])
