"""Free associative algebras over QQ or GF(p).

Elements are sparse maps from words (tuples of generator indices) to
coefficients.  Every generator carries a positive integer weight; the
weighted length of a word is its degree.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

Word = tuple[int, ...]


class StructureError(ValueError):
    """Operands live in different free algebras."""


# -- coefficient fields --------------------------------------------------------


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
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


class RationalField:
    """The field QQ; elements are ``fractions.Fraction``."""

    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, str):
            return parse_rational(x)
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def format(self, c) -> str:
        return str(c)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """GF(p) with elements stored as ints in [0, p)."""

    def __init__(self, p: int):
        p = int(p)
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p >= 2**31:
            raise ValueError("modulus must be below 2**31")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1

    def __call__(self, x) -> int:
        if isinstance(x, str):
            x = parse_rational(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in GF({self.p})")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def format(self, c) -> str:
        # symmetric representative reads better: p-1 prints as -1
        return str(c - self.p if c > self.p // 2 else c)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_rational(text: str) -> Fraction:
    """Parse "a", "-a" or "a/b" exactly; rejects zero denominators."""
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational number: {text!r}") from None
    if d == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(n, d)


class Residue:
    """An element of GF(p) that remembers its modulus."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.value = value % p

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.p != self.p:
                raise StructureError("residues modulo different primes")
            return other.value
        return PrimeField(self.p)(other)

    def __add__(self, other):
        return Residue(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return Residue(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return Residue(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return Residue(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.p)

    def inverse(self) -> Residue:
        return Residue(pow(self.value, -1, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Residue({self.value}, {self.p})"


# -- words ---------------------------------------------------------------------


def word_degree(word: Word, degrees: Sequence[int]) -> int:
    return sum(degrees[i] for i in word)


@lru_cache(maxsize=None)
def words_of_degree(degrees: tuple[int, ...], n: int) -> tuple[Word, ...]:
    """All words of weighted degree exactly ``n``, in lexicographic order."""
    if n < 0:
        return ()
    if n == 0:
        return ((),)
    out: list[Word] = []
    for i, d in enumerate(degrees):
        if d <= n:
            out.extend((i,) + w for w in words_of_degree(degrees, n - d))
    return tuple(out)


@lru_cache(maxsize=None)
def words_up_to(degrees: tuple[int, ...], n: int) -> tuple[Word, ...]:
    """Words of degree at most ``n`` in degree-lexicographic order."""
    out: list[Word] = []
    for m in range(n + 1):
        out.extend(words_of_degree(degrees, m))
    return tuple(out)


def count_words(degrees: Sequence[int], n: int) -> int:
    """Number of words of degree exactly n (no enumeration)."""
    counts = [1] + [0] * max(n, 0)
    for m in range(1, n + 1):
        counts[m] = sum(counts[m - d] for d in degrees if d <= m)
    return counts[n] if n >= 0 else 0


# -- the free algebra and its elements -----------------------------------------


class FreeAlgebra:
    """K<x_1, ..., x_g> with weighted generators.

    >>> F = FreeAlgebra("xy")
    >>> x, y = F.gens()
    >>> x * y - 2 * y * x
    x*y - 2*y*x
    """

    def __init__(self, names: Iterable[str], degrees: Sequence[int] | None = None,
                 field=QQ):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names) or any(not n for n in self.names):
            raise StructureError("generator names must be unique and nonempty")
        if degrees is None:
            degrees = (1,) * len(self.names)
        self.degrees = tuple(int(d) for d in degrees)
        if len(self.degrees) != len(self.names):
            raise StructureError("one degree per generator")
        if any(d < 1 for d in self.degrees):
            raise StructureError("generator degrees must be positive")
        self.field = field

    @property
    def ngens(self) -> int:
        return len(self.names)

    def _key(self):
        return (self.names, self.degrees, self.field)

    def __eq__(self, other):
        return isinstance(other, FreeAlgebra) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"FreeAlgebra({list(self.names)}, {list(self.degrees)}, {self.field!r})"

    def with_field(self, field) -> FreeAlgebra:
        return FreeAlgebra(self.names, self.degrees, field)

    def extended(self, name: str, degree: int = 1) -> FreeAlgebra:
        return FreeAlgebra(self.names + (name,), self.degrees + (degree,), self.field)

    def gen(self, i) -> NcPolynomial:
        if isinstance(i, str):
            i = self.names.index(i)
        return NcPolynomial(self, {(i,): self.field.one})

    def gens(self) -> tuple[NcPolynomial, ...]:
        return tuple(self.gen(i) for i in range(self.ngens))

    def zero(self) -> NcPolynomial:
        return NcPolynomial(self, {})

    def one(self) -> NcPolynomial:
        return self.scalar(1)

    def scalar(self, c) -> NcPolynomial:
        return NcPolynomial(self, {(): self.field(c)})

    def word(self, letters: Sequence) -> NcPolynomial:
        w = tuple(self.names.index(a) if isinstance(a, str) else int(a) for a in letters)
        return NcPolynomial(self, {w: self.field.one})

    def degree(self, word: Word) -> int:
        return word_degree(word, self.degrees)

    def words_of_degree(self, n: int) -> tuple[Word, ...]:
        return words_of_degree(self.degrees, n)

    def words_up_to(self, n: int) -> tuple[Word, ...]:
        return words_up_to(self.degrees, n)

    def sort_key(self, word: Word):
        """Degree-lexicographic key."""
        return (self.degree(word), word)

    def word_str(self, word: Word) -> str:
        if not word:
            return "1"
        return "*".join(self.names[i] for i in word)


class NcPolynomial:
    """Immutable element of a free algebra; ``terms`` never holds a zero."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: FreeAlgebra, terms: Mapping[Word, object] | None = None):
        self.ring = ring
        f = ring.field
        clean: dict[Word, object] = {}
        for w, c in (terms or {}).items():
            c = f(c)
            if c != f.zero:
                clean[tuple(w)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _trusted(cls, ring, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    # -- structure --

    def _check(self, other: NcPolynomial):
        if not isinstance(other, NcPolynomial):
            raise StructureError(f"cannot combine NcPolynomial with {type(other).__name__}")
        if other.ring != self.ring:
            raise StructureError(f"{self.ring!r} vs {other.ring!r}")

    def _lift(self, other) -> NcPolynomial:
        if isinstance(other, NcPolynomial):
            self._check(other)
            return other
        return self.ring.scalar(other)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, NcPolynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.scalar(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic --

    def __add__(self, other):
        other = self._lift(other)
        f = self.ring.field
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = f.add(out.get(w, f.zero), c)
            if s == f.zero:
                out.pop(w, None)
            else:
                out[w] = s
        return NcPolynomial._trusted(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        f = self.ring.field
        return NcPolynomial._trusted(self.ring, {w: f.neg(c) for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> NcPolynomial:
        f = self.ring.field
        c = f(c)
        if c == f.zero:
            return self.ring.zero()
        return NcPolynomial._trusted(self.ring, {w: f.mul(c, a) for w, a in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, NcPolynomial):
            return self.scale(other)
        self._check(other)
        f = self.ring.field
        out: dict[Word, object] = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u + v
                out[w] = f.add(out.get(w, f.zero), f.mul(a, b))
        return NcPolynomial._trusted(self.ring, {w: c for w, c in out.items() if c != f.zero})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    # -- degrees --

    def degree(self) -> int:
        """Maximal weighted degree of a term; -1 for the zero polynomial."""
        return max((self.ring.degree(w) for w in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({self.ring.degree(w) for w in self.terms}) <= 1

    def homogeneous_part(self, n: int) -> NcPolynomial:
        if n < 0:
            raise ValueError("degree must be nonnegative")
        deg = self.ring.degree
        return NcPolynomial._trusted(self.ring, {w: c for w, c in self.terms.items() if deg(w) == n})

    def homogeneous_parts(self) -> dict[int, NcPolynomial]:
        parts: dict[int, dict] = {}
        for w, c in self.terms.items():
            parts.setdefault(self.ring.degree(w), {})[w] = c
        return {n: NcPolynomial._trusted(self.ring, t) for n, t in sorted(parts.items())}

    def leading_part(self) -> NcPolynomial:
        if not self.terms:
            raise ValueError("leading part of the zero polynomial")
        return self.homogeneous_part(self.degree())

    def leading_word(self) -> Word:
        if not self.terms:
            raise ValueError("leading word of the zero polynomial")
        return max(self.terms, key=self.ring.sort_key)

    # -- change of ring --

    def map_coefficients(self, ring: FreeAlgebra, fn) -> NcPolynomial:
        return NcPolynomial(ring, {w: fn(c) for w, c in self.terms.items()})

    def sorted_terms(self) -> list[tuple[Word, object]]:
        """Terms from the largest word down in degree-lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: self.ring.sort_key(t[0]), reverse=True)

    def __repr__(self):
        if not self.terms:
            return "0"
        f = self.ring.field
        pieces = []
        # highest degree first, alphabetical within a degree
        for w, c in sorted(self.terms.items(), key=lambda t: (-self.ring.degree(t[0]), t[0])):
            s = f.format(c)
            neg = s.startswith("-")
            if neg:
                s = s[1:]
            if w:
                body = self.ring.word_str(w) if s == "1" else f"{s}*{self.ring.word_str(w)}"
            else:
                body = s
            pieces.append(("- " if neg else "+ ") + body)
        text = " ".join(pieces)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


# -- homogenization -----------------------------------------------------------


def homogeneous_part(f: NcPolynomial, n: int) -> NcPolynomial:
    return f.homogeneous_part(n)


def leading_part(f: NcPolynomial) -> NcPolynomial:
    return f.leading_part()


def homogenize(f: NcPolynomial, t: int) -> NcPolynomial:
    """Pad each homogeneous part of ``f`` on the right with powers of generator ``t``.

    ``t`` must index a degree-one generator of ``f.ring`` that does not occur in ``f``.
    """
    ring = f.ring
    if f.is_zero():
        raise ValueError("cannot homogenize zero")
    if ring.degrees[t] != 1:
        raise StructureError("the homogenizing generator must have degree 1")
    d = f.degree()
    out = {}
    for w, c in f.terms.items():
        if t in w:
            raise StructureError("polynomial already involves the homogenizing generator")
        out[w + (t,) * (d - ring.degree(w))] = c
    return NcPolynomial._trusted(ring, out)


def specialize(f: NcPolynomial, t: int, value: int) -> NcPolynomial:
    """Set the generator ``t`` to 1 (delete it from words) or 0 (drop terms containing it)."""
    if value == 0:
        return NcPolynomial._trusted(f.ring, {w: c for w, c in f.terms.items() if t not in w})
    if value != 1:
        raise ValueError("specialization value must be 0 or 1")
    fld = f.ring.field
    out: dict[Word, object] = {}
    for w, c in f.terms.items():
        v = tuple(i for i in w if i != t)
        out[v] = fld.add(out.get(v, fld.zero), c)
    return NcPolynomial._trusted(f.ring, {w: c for w, c in out.items() if c != fld.zero})


def change_ring(f: NcPolynomial, ring: FreeAlgebra, index_map: Mapping[int, int] | None = None
                ) -> NcPolynomial:
    """Re-express ``f`` in ``ring``, renumbering letters through ``index_map``."""
    if index_map is None:
        index_map = {i: ring.names.index(n) for i, n in enumerate(f.ring.names) if n in ring.names}
    return NcPolynomial(ring, {tuple(index_map[i] for i in w): c for w, c in f.terms.items()})

