"""Exact coefficient rings: the integers, the rationals, and prime fields.

Every value handled by this package is an element of one of these three
rings, kept in canonical form at all times (Fractions in lowest terms,
prime-field residues in [0, p)).  There is no floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Ring:
    """One of Z, Q, or GF(p), with exact element arithmetic.

    Elements are plain Python objects: int for Z and GF(p) (residues in
    [0, p)), Fraction for Q.  `canon` is the single entry point that maps
    raw input to canonical form; all constructors route through it.
    """

    INT = "Z"
    RAT = "Q"
    MOD = "GF"

    def __init__(self, kind: str, p: int | None = None):
        if kind == self.MOD:
            if p is None or not _is_prime(p):
                raise ValueError(f"GF({p}): modulus must be prime")
        elif kind not in (self.INT, self.RAT):
            raise ValueError(f"unknown ring kind {kind!r}")
        self.kind = kind
        self.p = p

    # -- identity ---------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and self.kind == other.kind
            and self.p == other.p
        )

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        if self.kind == self.MOD:
            return f"GF({self.p})"
        return self.kind

    @property
    def is_field(self) -> bool:
        return self.kind != self.INT

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == self.MOD else 0

    # -- element arithmetic ------------------------------------------------

    def canon(self, x):
        """Canonical form of x; accepts int, Fraction, or same-ring values."""
        if self.kind == self.INT:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return int(x)
            return int(x)
        if self.kind == self.RAT:
            return Fraction(x)
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
            return (x.numerator * pow(den, -1, self.p)) % self.p
        return int(x) % self.p

    def zero(self):
        return self.canon(0)

    def one(self):
        return self.canon(1)

    def add(self, a, b):
        c = a + b
        return c % self.p if self.kind == self.MOD else c

    def sub(self, a, b):
        c = a - b
        return c % self.p if self.kind == self.MOD else c

    def mul(self, a, b):
        c = a * b
        return c % self.p if self.kind == self.MOD else c

    def neg(self, a):
        return (-a) % self.p if self.kind == self.MOD else -a

    def is_zero(self, a) -> bool:
        return a == 0

    def inv(self, a):
        """Multiplicative inverse; fields only."""
        if self.kind == self.RAT:
            return 1 / Fraction(a)
        if self.kind == self.MOD:
            return pow(a, -1, self.p)
        raise ValueError("Z is not a field")

    def div(self, a, b):
        """Exact quotient a/b; over Z raises unless b divides a."""
        if self.kind == self.INT:
            q, r = divmod(a, b)
            if r != 0:
                raise ValueError(f"{b} does not divide {a} in Z")
            return q
        return self.mul(a, self.inv(b))

    # -- text form (used by the scenario files and reports) -----------------

    def format(self, a) -> str:
        if self.kind == self.RAT:
            f = Fraction(a)
            return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
        return str(a)

    def parse(self, s: str):
        s = s.strip()
        if "/" in s:
            num, den = s.split("/", 1)
            return self.canon(Fraction(int(num), int(den)))
        return self.canon(int(s))


ZZ = Ring(Ring.INT)
QQ = Ring(Ring.RAT)


def GF(p: int) -> Ring:
    return Ring(Ring.MOD, p)


def ring_from_name(name: str) -> Ring:
    """Ring named as in scenario files: "Z", "Q", or "GF(p)"."""
    name = name.strip()
    if name == "Z":
        return ZZ
    if name == "Q":
        return QQ
    if name.startswith("GF(") and name.endswith(")"):
        return GF(int(name[3:-1]))
    raise ValueError(f"unknown ring {name!r} (expected Z, Q, or GF(p))")
