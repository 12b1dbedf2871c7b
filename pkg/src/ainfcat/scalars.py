"""Exact scalar arithmetic: F2, Q and truncated Novikov series over either.

A Novikov value is a tuple of (exponent, coefficient) pairs with exponents
strictly increasing rationals below the cutoff and coefficients nonzero in
the base field.  The zero series is the empty tuple.  All operations
re-truncate at the cutoff, so arithmetic is exact for exponents < cutoff.
"""

from fractions import Fraction


class TagMismatch(TypeError):
    """Raised when two scalars from different field tags are combined."""


class NovikovPrecision(ArithmeticError):
    """Raised when a result is not determined below the truncation cutoff."""


class NovikovDivision(ZeroDivisionError):
    """Raised when a Novikov quotient is not representable below the cutoff."""


def _f2(x):
    return int(x) & 1


class Field:
    """A field tag: F2, Q, or a truncated Novikov series field over one of them.

    Values are plain Python objects: ints 0/1 for F2, Fraction for Q, and
    tuples of (Fraction exponent, base coefficient) pairs for Novikov tags.
    Values are canonical, so == and hash work directly.
    """

    def __init__(self, base, cutoff=None):
        if base not in ("F2", "Q"):
            raise ValueError("base must be 'F2' or 'Q'")
        if cutoff is not None:
            cutoff = Fraction(cutoff)
            if cutoff <= 0:
                raise ValueError("Novikov cutoff must be positive")
        self.base = base
        self.cutoff = cutoff

    # -- identification ----------------------------------------------------

    @property
    def is_novikov(self):
        return self.cutoff is not None

    @property
    def tag(self):
        if self.cutoff is None:
            return self.base
        return "Novikov%s(%s)" % (self.base, self.cutoff)

    def __eq__(self, other):
        return (isinstance(other, Field)
                and self.base == other.base and self.cutoff == other.cutoff)

    def __hash__(self):
        return hash((self.base, self.cutoff))

    def __repr__(self):
        return "Field(%s)" % self.tag

    def check_same(self, other):
        if self != other:
            raise TagMismatch("field tags differ: %s vs %s" % (self.tag, other.tag))

    # -- base-field helpers --------------------------------------------------

    def _bzero(self):
        return 0 if self.base == "F2" else Fraction(0)

    def _bone(self):
        return 1 if self.base == "F2" else Fraction(1)

    def _badd(self, a, b):
        return _f2(a + b) if self.base == "F2" else a + b

    def _bmul(self, a, b):
        return _f2(a * b) if self.base == "F2" else a * b

    def _bneg(self, a):
        return a if self.base == "F2" else -a

    def _binv(self, a):
        if self.base == "F2":
            if _f2(a) == 0:
                raise ZeroDivisionError("inverse of 0 in F2")
            return 1
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return Fraction(1) / a

    # -- constructors --------------------------------------------------------

    def zero(self):
        return () if self.is_novikov else self._bzero()

    def one(self):
        if self.is_novikov:
            return ((Fraction(0), self._bone()),)
        return self._bone()

    def from_int(self, n):
        if self.base == "F2":
            c = _f2(n)
        else:
            c = Fraction(n)
        if not self.is_novikov:
            return c
        return () if c == 0 else ((Fraction(0), c),)

    def monomial(self, exponent, coeff=1):
        """c * T^exponent, truncated at the cutoff."""
        if not self.is_novikov:
            raise TagMismatch("monomial() needs a Novikov tag, got %s" % self.tag)
        exponent = Fraction(exponent)
        if exponent < 0:
            raise ValueError("Novikov exponents must be >= 0")
        c = _f2(coeff) if self.base == "F2" else Fraction(coeff)
        if c == 0 or exponent >= self.cutoff:
            return ()
        return ((exponent, c),)

    def normalize(self, pairs):
        """Canonicalize a list of (exponent, coeff) pairs into a Novikov value."""
        acc = {}
        for e, c in pairs:
            e = Fraction(e)
            c = _f2(c) if self.base == "F2" else Fraction(c)
            if e >= self.cutoff:
                continue
            acc[e] = self._badd(acc.get(e, self._bzero()), c)
        return tuple(sorted((e, c) for e, c in acc.items() if c != 0))

    # -- arithmetic ------------------------------------------------------

    def is_zero(self, a):
        return a == self.zero()

    def add(self, a, b):
        if not self.is_novikov:
            return self._badd(a, b)
        return self.normalize(list(a) + list(b))

    def neg(self, a):
        if not self.is_novikov:
            return self._bneg(a)
        return tuple((e, self._bneg(c)) for e, c in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not self.is_novikov:
            return self._bmul(a, b)
        pairs = []
        for e1, c1 in a:
            for e2, c2 in b:
                e = e1 + e2
                if e < self.cutoff:
                    pairs.append((e, self._bmul(c1, c2)))
        return self.normalize(pairs)

    def scale(self, c, a):
        """Multiply the value a by a base-field coefficient c."""
        if not self.is_novikov:
            return self._bmul(c, a)
        return self.normalize([(e, self._bmul(c, x)) for e, x in a])

    def valuation(self, a):
        """Smallest exponent of a Novikov value; None for the zero series."""
        if not self.is_novikov:
            raise TagMismatch("valuation() needs a Novikov tag, got %s" % self.tag)
        return a[0][0] if a else None

    def div(self, a, b):
        """a / b.  For Novikov tags requires val(a) >= val(b); exact below cutoff."""
        if not self.is_novikov:
            return self._bmul(a, self._binv(b))
        if not b:
            raise ZeroDivisionError("division by the zero Novikov series")
        if not a:
            return ()
        vb = b[0][0]
        if a[0][0] < vb:
            raise NovikovDivision(
                "quotient not representable: val %s < val %s" % (a[0][0], vb))
        cb_inv = self._binv(b[0][1])
        rem = a
        quo = []
        while rem:
            e = rem[0][0] - vb
            if e >= self.cutoff:
                break
            c = self._bmul(rem[0][1], cb_inv)
            quo.append((e, c))
            # rem -= (c T^e) * b
            rem = self.sub(rem, self.mul(((e, c),), b))
        return self.normalize(quo)

    def inv(self, a):
        """Multiplicative inverse; Novikov values need an exponent-0 leading term."""
        if not self.is_novikov:
            return self._binv(a)
        if not a:
            raise ZeroDivisionError("inverse of the zero Novikov series")
        if a[0][0] != 0:
            raise NovikovDivision(
                "leading exponent %s > 0: inverse leaves the truncated ring" % a[0][0])
        return self.div(self.one(), a)

    # -- serialization (JSON definition format) -------------------------------

    def to_json(self, a):
        if self.base == "F2" and not self.is_novikov:
            return int(a)
        if self.base == "Q" and not self.is_novikov:
            return str(a)
        coeff = (lambda c: int(c)) if self.base == "F2" else (lambda c: str(c))
        return [[str(e), coeff(c)] for e, c in a]

    def from_json(self, obj):
        if not self.is_novikov:
            if self.base == "F2":
                return _f2(int(obj))
            return Fraction(str(obj))
        pairs = [(Fraction(str(e)), Fraction(str(c)) if self.base == "Q" else int(c))
                 for e, c in obj]
        for e, _ in pairs:
            if e < 0:
                raise ValueError("Novikov exponents must be >= 0")
        return self.normalize(pairs)

    def to_str(self, a):
        if not self.is_novikov:
            return str(a)
        if not a:
            return "0"
        return " + ".join("%s*T^%s" % (c, e) for e, c in a)


F2 = Field("F2")
Q = Field("Q")


def novikov_f2(cutoff):
    return Field("F2", cutoff)


def novikov_q(cutoff):
    return Field("Q", cutoff)


def field_from_tag(tag, cutoff=None):
    """Build a Field from a tag string like 'Q' or 'NovikovF2', plus cutoff."""
    if tag in ("F2", "Q"):
        if cutoff is not None:
            raise ValueError("cutoff given for plain field %s" % tag)
        return Field(tag)
    if tag == "NovikovF2":
        return Field("F2", cutoff)
    if tag == "NovikovQ":
        return Field("Q", cutoff)
    raise ValueError("unknown field tag %r" % tag)
