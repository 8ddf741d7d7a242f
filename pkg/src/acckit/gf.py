"""Exact arithmetic over GF(p^e) with elements encoded as integers.

An element with coefficient vector (c_0, ..., c_{e-1}) over GF(p) is stored
as the integer sum c_i * p^i.  Element 0 is therefore the additive identity
and element 1 the multiplicative identity, and for prime fields the encoding
coincides with ordinary residues mod p.  A ``GF`` object validates its
parameters once and is immutable afterwards; every operation is a pure
function of integer inputs, so field objects can be shared freely across
workers.
"""

from __future__ import annotations

import numpy as np

MAX_FIELD_SIZE = 1 << 16

# Full add/mul lookup tables are built for fields up to this size; larger
# fields fall back to direct modular / polynomial arithmetic.
_TABLE_LIMIT = 512

# Built-in irreducible monic moduli, ascending coefficients (c_0, ..., c_e).
_DEFAULT_MODULI = {
    (2, 2): (1, 1, 1),              # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),           # x^3 + x + 1
    (2, 4): (1, 1, 0, 0, 1),        # x^4 + x + 1
    (2, 5): (1, 0, 1, 0, 0, 1),     # x^5 + x^2 + 1
    (2, 6): (1, 1, 0, 0, 0, 0, 1),  # x^6 + x + 1
    (3, 2): (1, 0, 1),              # x^2 + 1
    (3, 3): (1, 2, 0, 1),           # x^3 + 2x + 1
    (3, 4): (1, 1, 1, 1, 1),        # x^4 + x^3 + x^2 + x + 1
    (5, 2): (2, 0, 1),              # x^2 + 2
    (5, 3): (1, 1, 0, 1),           # x^3 + x + 1
    (7, 2): (1, 0, 1),              # x^2 + 1
    (11, 2): (1, 0, 1),             # x^2 + 1
}


class FieldError(ValueError):
    """Invalid field specification or out-of-range element."""


def is_prime(n: int) -> bool:
    """Trial-division primality test, adequate for n < 2^16."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# Polynomial helpers over GF(p).  Polynomials are tuples of ascending
# coefficients with no trailing zeros (except the zero polynomial ()).
# ---------------------------------------------------------------------------

def _poly_trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a, mod, p):
    """Remainder of a divided by mod (monic) over GF(p)."""
    a = list(a)
    dm = len(mod) - 1
    while len(a) - 1 >= dm and a:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - dm
            for i, c in enumerate(mod):
                a[shift + i] = (a[shift + i] - lead * c) % p
        a.pop()
    return _poly_trim(a)


def _poly_eval(c, x, p):
    y = 0
    for coeff in reversed(c):
        y = (y * x + coeff) % p
    return y


def _all_monic_polys(degree, p):
    """Yield every monic polynomial of the given degree over GF(p)."""
    for idx in range(p**degree):
        coeffs = []
        rem = idx
        for _ in range(degree):
            coeffs.append(rem % p)
            rem //= p
        coeffs.append(1)
        yield tuple(coeffs)


def _is_irreducible(mod, p):
    e = len(mod) - 1
    if e < 1 or mod[-1] != 1:
        return False
    if any(_poly_eval(mod, x, p) == 0 for x in range(p)):
        return False
    if e <= 3:
        # degree <= 3 with no roots has no nontrivial factorization
        return True
    for deg in range(2, e // 2 + 1):
        for g in _all_monic_polys(deg, p):
            if not _poly_mod(mod, g, p):
                return False
    return True


class GF:
    """Finite field GF(p^e) with integer-encoded elements.

    Parameters
    ----------
    p : int
        Prime characteristic (p < 2^16).
    e : int
        Extension degree; the field has s = p^e elements (s <= 2^16).
    modulus : sequence of int or None
        Monic irreducible polynomial of degree e over GF(p), given as
        ascending coefficients (c_0, ..., c_e).  Required only when e > 1
        and no built-in modulus exists; validated in all cases.
    """

    __slots__ = ("p", "e", "s", "modulus", "add_table", "mul_table",
                 "_inv_table", "_pbasis")

    def __init__(self, p: int, e: int = 1, modulus=None):
        if not isinstance(p, int) or not is_prime(p):
            raise FieldError(f"characteristic must be prime, got {p!r}")
        if p >= MAX_FIELD_SIZE:
            raise FieldError(f"characteristic {p} exceeds the 2^16 cap")
        if not isinstance(e, int) or e < 1:
            raise FieldError(f"extension degree must be >= 1, got {e!r}")
        s = p**e
        if s > MAX_FIELD_SIZE:
            raise FieldError(f"field size {s} exceeds the 2^16 cap")
        self.p = p
        self.e = e
        self.s = s
        if e == 1:
            if modulus is not None:
                raise FieldError("modulus only applies to extension fields")
            self.modulus = None
        else:
            if modulus is None:
                try:
                    modulus = _DEFAULT_MODULI[(p, e)]
                except KeyError:
                    raise FieldError(
                        f"no built-in modulus for GF({p}^{e}); supply one"
                    ) from None
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != e + 1:
                raise FieldError(
                    f"modulus must have {e + 1} coefficients, got {len(modulus)}"
                )
            if modulus[-1] != 1:
                raise FieldError("modulus must be monic")
            if not _is_irreducible(modulus, p):
                raise FieldError(f"modulus {modulus} is reducible over GF({p})")
            self.modulus = modulus
        self._pbasis = tuple(p**i for i in range(e))
        self.add_table = None
        self.mul_table = None
        self._inv_table = None
        if s <= _TABLE_LIMIT:
            self._build_tables()

    # -- encoding ----------------------------------------------------------

    def _decode(self, a: int) -> list[int]:
        coeffs = []
        for _ in range(self.e):
            coeffs.append(a % self.p)
            a //= self.p
        return coeffs

    def _encode(self, coeffs) -> int:
        return sum(int(c) % self.p * b for c, b in zip(coeffs, self._pbasis))

    def _check(self, a: int) -> int:
        if not 0 <= a < self.s:
            raise FieldError(f"{a} is not an element of GF({self.s})")
        return a

    # -- table construction --------------------------------------------------

    def _build_tables(self):
        s, p = self.s, self.p
        if self.e == 1:
            idx = np.arange(s, dtype=np.int64)
            self.add_table = ((idx[:, None] + idx[None, :]) % p).astype(np.int32)
            self.mul_table = ((idx[:, None] * idx[None, :]) % p).astype(np.int32)
        else:
            add = np.zeros((s, s), dtype=np.int32)
            mul = np.zeros((s, s), dtype=np.int32)
            for a in range(s):
                for b in range(a, s):
                    v = self._add_raw(a, b)
                    add[a, b] = v
                    add[b, a] = v
                    v = self._mul_raw(a, b)
                    mul[a, b] = v
                    mul[b, a] = v
            self.add_table = add
            self.mul_table = mul
        inv = np.zeros(s, dtype=np.int32)
        for a in range(1, s):
            row = self.mul_table[a]
            hits = np.nonzero(row == 1)[0]
            if len(hits) != 1:
                raise FieldError(
                    f"element {a} of GF({s}) lacks a unique inverse; "
                    f"modulus {self.modulus} is not irreducible"
                )
            inv[a] = hits[0]
        self._inv_table = inv

    # -- raw arithmetic (table-free) ----------------------------------------

    def _add_raw(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        ca, cb = self._decode(a), self._decode(b)
        return self._encode([x + y for x, y in zip(ca, cb)])

    def _mul_raw(self, a, b):
        if self.e == 1:
            return (a * b) % self.p
        prod = _poly_mul(_poly_trim(self._decode(a)),
                         _poly_trim(self._decode(b)), self.p)
        return self._encode(_poly_mod(prod, self.modulus, self.p))

    # -- public operations ---------------------------------------------------

    def elements(self) -> list[int]:
        """All field elements in canonical index order 0, 1, ..., s-1."""
        return list(range(self.s))

    def add(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        if self.add_table is not None:
            return int(self.add_table[a, b])
        return self._add_raw(a, b)

    def neg(self, a: int) -> int:
        self._check(a)
        if self.e == 1:
            return (-a) % self.p
        return self._encode([-c for c in self._decode(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        if self.mul_table is not None:
            return int(self.mul_table[a, b])
        return self._mul_raw(a, b)

    def inv(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.s})")
        if self._inv_table is not None:
            return int(self._inv_table[a])
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.s - 2)

    def pow(self, a: int, k: int) -> int:
        """Square-and-multiply power; pow(a, 0) = 1 for every a."""
        self._check(a)
        if k < 0:
            raise FieldError("exponent must be nonnegative")
        if self.e == 1:
            return pow(a, k, self.p) if k else 1
        result = 1
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    # -- misc ----------------------------------------------------------------

    def spec_string(self) -> str:
        if self.e == 1:
            return str(self.p)
        coeffs = ",".join(str(c) for c in self.modulus)
        return f"{self.p}^{self.e}:{coeffs}"

    def __eq__(self, other):
        return (isinstance(other, GF)
                and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus))

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        if self.e == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.e}, modulus={self.modulus})"


def parse_field(text: str) -> GF:
    """Parse a field spec: ``p``, ``p^e``, or ``p^e:c0,c1,...,ce``.

    Example: ``3^2:1,0,1`` is GF(9) with modulus 1 + 0x + x^2.
    """
    text = text.strip()
    modulus = None
    if ":" in text:
        text, coeff_part = text.split(":", 1)
        try:
            modulus = tuple(int(c) for c in coeff_part.split(","))
        except ValueError:
            raise FieldError(f"bad modulus coefficients: {coeff_part!r}") from None
    if "^" in text:
        p_part, e_part = text.split("^", 1)
    else:
        p_part, e_part = text, "1"
    try:
        p, e = int(p_part), int(e_part)
    except ValueError:
        raise FieldError(f"bad field spec: {text!r}") from None
    if e == 1 and modulus is not None:
        raise FieldError("modulus only applies to extension fields")
    return GF(p, e, modulus)
