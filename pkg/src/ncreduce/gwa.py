"""Generalized Weyl algebras D(sigma, a) over D = k[h] with affine sigma.

Elements are kept in the normal form sum_i d_i(h) v_i where v_i = X^i for
i > 0, v_0 = 1 and v_i = Y^(-i) for i < 0.  The defining rules are

    X d = sigma(d) X,   Y d = sigma^-1(d) Y,   Y X = a,   X Y = sigma(a).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .dvr import Valuation, _as_valuation, vp
from .freealg import QQ, FreeAlgebra, NcPolynomial, PrimeField, RationalField
from .presentations import FILTERED, HilbertTable, Presentation


class BadPrimeError(ArithmeticError):
    """The GWA data does not reduce to a GWA at this prime."""


class CatalogError(KeyError):
    pass


# -- k[h] ----------------------------------------------------------------------


class UniPoly:
    """Dense univariate polynomial in h, ascending coefficients, no trailing zeros."""

    __slots__ = ("field", "coeffs")

    def __init__(self, coeffs=(), field=QQ):
        self.field = field
        cs = [field(c) for c in coeffs]
        while cs and cs[-1] == field.zero:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def h(cls, field=QQ) -> UniPoly:
        return cls((0, 1), field)

    @classmethod
    def const(cls, c, field=QQ) -> UniPoly:
        return cls((c,), field)

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def _other(self, other) -> UniPoly:
        if isinstance(other, UniPoly):
            if other.field != self.field:
                raise ValueError("polynomials over different fields")
            return other
        return UniPoly.const(other, self.field)

    def __add__(self, other):
        other = self._other(other)
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (f.zero,) * (n - len(self.coeffs))
        b = other.coeffs + (f.zero,) * (n - len(other.coeffs))
        return UniPoly([f.add(x, y) for x, y in zip(a, b)], f)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([self.field.neg(c) for c in self.coeffs], self.field)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        other = self._other(other)
        f = self.field
        if not self.coeffs or not other.coeffs:
            return UniPoly((), f)
        out = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] = f.add(out[i + j], f.mul(x, y))
        return UniPoly(out, f)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = UniPoly.const(1, self.field)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == UniPoly.const(other, self.field)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def compose_affine(self, alpha, beta) -> UniPoly:
        """f(alpha*h + beta) by Horner's rule."""
        lin = UniPoly((beta, alpha), self.field)
        out = UniPoly((), self.field)
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def map_field(self, field, fn=None) -> UniPoly:
        fn = fn or field
        return UniPoly([fn(c) for c in self.coeffs], field)

    def __call__(self, x):
        f = self.field
        out = f.zero
        for c in reversed(self.coeffs):
            out = f.add(f.mul(out, f(x)), c)
        return out

    def __repr__(self):
        if not self.coeffs:
            return "0"
        pieces = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == self.field.zero:
                continue
            s = self.field.format(c)
            neg = s.startswith("-")
            s = s.lstrip("-")
            mono = "" if k == 0 else ("h" if k == 1 else f"h^{k}")
            if mono:
                body = mono if s == "1" else f"{s}*{mono}"
            else:
                body = s
            pieces.append(("- " if neg else "+ ") + body)
        text = " ".join(pieces)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


# -- data --------------------------------------------------------------------------


@dataclass(frozen=True)
class AffineAuto:
    """sigma(h) = alpha*h + beta."""

    alpha: object
    beta: object
    field: object = QQ

    def __post_init__(self):
        object.__setattr__(self, "alpha", self.field(self.alpha))
        object.__setattr__(self, "beta", self.field(self.beta))
        if self.alpha == self.field.zero:
            raise ValueError("sigma(h) = alpha*h + beta needs alpha != 0")

    def power(self, k: int) -> tuple[object, object]:
        """(A, B) with sigma^k(h) = A*h + B."""
        f = self.field
        if k >= 0:
            a, b = self.alpha, self.beta
        else:
            a = f.inv(self.alpha)
            b = f.neg(f.mul(self.beta, a))
            k = -k
        A, B = f.one, f.zero
        for _ in range(k):
            A, B = f.mul(a, A), f.add(f.mul(a, B), b)
        return A, B

    def inverse(self) -> AffineAuto:
        A, B = self.power(-1)
        return AffineAuto(A, B, self.field)


def sigma_apply(s: AffineAuto, f: UniPoly, k: int = 1) -> UniPoly:
    """f(sigma^k(h))."""
    if k == 0:
        return f
    A, B = s.power(k)
    return f.compose_affine(A, B)


@dataclass(frozen=True)
class GwaData:
    sigma: AffineAuto
    a: UniPoly
    name: str = ""

    def __post_init__(self):
        if self.a.field != self.sigma.field:
            raise ValueError("sigma and a must share a coefficient field")

    @property
    def field(self):
        return self.sigma.field

    def __eq__(self, other):
        return (isinstance(other, GwaData) and self.sigma == other.sigma
                and self.a == other.a)

    def __hash__(self):
        return hash((self.sigma, self.a))


class GwaElement:
    """sum_i d_i(h) v_i in normal form; zero components are never stored."""

    __slots__ = ("data", "components")

    def __init__(self, data: GwaData, components: Mapping[int, UniPoly] | None = None):
        self.data = data
        self.components = {int(i): d for i, d in (components or {}).items() if not d.is_zero()}

    @classmethod
    def X(cls, data):
        return cls(data, {1: UniPoly.const(1, data.field)})

    @classmethod
    def Y(cls, data):
        return cls(data, {-1: UniPoly.const(1, data.field)})

    @classmethod
    def h(cls, data):
        return cls(data, {0: UniPoly.h(data.field)})

    @classmethod
    def scalar(cls, data, c):
        return cls(data, {0: UniPoly.const(c, data.field)})

    @classmethod
    def poly(cls, data, f: UniPoly, i: int = 0):
        return cls(data, {i: f})

    def _other(self, other) -> GwaElement:
        if isinstance(other, GwaElement):
            return other
        if isinstance(other, UniPoly):
            return GwaElement(self.data, {0: other})
        return GwaElement.scalar(self.data, other)

    def __add__(self, other):
        other = self._other(other)
        out = dict(self.components)
        for i, d in other.components.items():
            out[i] = out[i] + d if i in out else d
        return GwaElement(self.data, out)

    __radd__ = __add__

    def __neg__(self):
        return GwaElement(self.data, {i: -d for i, d in self.components.items()})

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        return gwa_multiply(self, self._other(other), self.data)

    def __rmul__(self, other):
        return gwa_multiply(self._other(other), self, self.data)

    def __pow__(self, n: int):
        out = GwaElement.scalar(self.data, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, GwaElement):
            return self.components == other.components
        if isinstance(other, (int, Fraction, UniPoly)):
            return self == self._other(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.components.items()))

    def is_zero(self) -> bool:
        return not self.components

    def __repr__(self):
        if not self.components:
            return "0"
        pieces = []
        for i in sorted(self.components, reverse=True):
            d = self.components[i]
            mono = "" if i == 0 else ("X" if i == 1 else "Y" if i == -1 else
                                       f"X^{i}" if i > 0 else f"Y^{-i}")
            ds = repr(d)
            if not mono:
                pieces.append(ds)
            elif ds == "1":
                pieces.append(mono)
            elif ds == "-1":
                pieces.append("-" + mono)
            elif len([c for c in d.coeffs if c != d.field.zero]) > 1:
                pieces.append(f"({ds})*{mono}")
            else:
                pieces.append(f"{ds}*{mono}")
        return " + ".join(pieces).replace("+ -", "- ")


def _cross_factor(data: GwaData, i: int, j: int) -> UniPoly:
    """c with v_i v_j = c v_{i+j}."""
    one = UniPoly.const(1, data.field)
    if (i >= 0 and j >= 0) or (i <= 0 and j <= 0):
        return one
    s, a = data.sigma, data.a
    out = one
    if i > 0:
        # X^i Y^m: peel XY = sigma(a) from the middle
        for k in range(min(i, -j)):
            out = out * sigma_apply(s, a, i - k)
    else:
        m = -i
        for k in range(1, min(m, j) + 1):
            out = out * sigma_apply(s, a, -(m - k))
    return out


def gwa_multiply(u: GwaElement, w: GwaElement, data: GwaData | None = None) -> GwaElement:
    data = data or u.data
    if u.data != data or w.data != data:
        raise ValueError("elements belong to different generalized Weyl algebras")
    out: dict[int, UniPoly] = {}
    s = data.sigma
    for i, d in u.components.items():
        for j, e in w.components.items():
            term = d * sigma_apply(s, e, i) * _cross_factor(data, i, j)
            k = i + j
            out[k] = out[k] + term if k in out else term
    return GwaElement(data, out)


def gwa_commutator_check(data: GwaData) -> UniPoly:
    """XY - YX = sigma(a) - a."""
    return sigma_apply(data.sigma, data.a, 1) - data.a


# -- reduction at p ------------------------------------------------------------------


@dataclass(frozen=True)
class PrimeVerdict:
    good: bool
    reason: str | None = None
    coefficient: str | None = None
    value: Fraction | None = None
    valuation: int | None = None
    nondomain: bool = False

    def __bool__(self):
        return self.good


def _coefficients(data: GwaData):
    yield "alpha", data.sigma.alpha
    yield "beta", data.sigma.beta
    for k, c in enumerate(data.a.coeffs):
        yield f"a[h^{k}]", c


def bad_prime_detect(data: GwaData, v) -> PrimeVerdict:
    if not isinstance(data.field, RationalField):
        raise ValueError("bad_prime_detect expects data over QQ")
    v = _as_valuation(v)
    alpha_val = vp(data.sigma.alpha, v)
    if alpha_val != 0:
        what = "sigma(h) loses its h-term" if alpha_val > 0 else "sigma(h) explodes"
        return PrimeVerdict(False, f"{what}: v_{v.p}(alpha = {data.sigma.alpha}) = {alpha_val}",
                            "alpha", data.sigma.alpha, alpha_val)
    for name, c in _coefficients(data):
        e = vp(c, v)
        if e < 0:
            return PrimeVerdict(False, f"v_{v.p}({name} = {c}) = {e} is negative", name, c, e)
    nondomain = all(vp(c, v) >= 1 for c in data.a.coeffs)
    return PrimeVerdict(True, None, nondomain=nondomain)


def gwa_reduce(data: GwaData, v) -> GwaData:
    v = _as_valuation(v)
    verdict = bad_prime_detect(data, v)
    if not verdict.good:
        raise BadPrimeError(f"bad prime {v.p}: {verdict.reason}")
    fp = v.residue_field
    sigma = AffineAuto(fp(data.sigma.alpha), fp(data.sigma.beta), fp)
    return GwaData(sigma, data.a.map_field(fp), data.name)


# -- catalog --------------------------------------------------------------------------


def _param(params, key, default=None):
    if key in params:
        return QQ(params[key])
    if default is None:
        raise CatalogError(f"missing parameter {key!r}")
    return QQ(default)


def _nonzero_q(params, key="q") -> Fraction:
    q = _param(params, key)
    if q == 0:
        raise ValueError(f"{key} must be nonzero")
    return q


def _weyl(params):
    return AffineAuto(1, 1), UniPoly((0, 1))


def _quantum_weyl(params):
    q = _nonzero_q(params)
    return AffineAuto(1 / q, -1 / q), UniPoly((0, 1))


def _quantum_plane(params):
    q = _nonzero_q(params)
    return AffineAuto(q, 0), UniPoly((0, 1))


def _usl2(params):
    # h = H, X = E, Y = F, Casimir 4FE + H^2 + 2H = c
    c = _param(params, "c", 0)
    return AffineAuto(1, -2), UniPoly((c / 4, Fraction(-1, 2), Fraction(-1, 4)))


def _uq_sl2(params):
    # h = K, X = E, Y = F with EK = q^-2 KE and EF - FE = K/(q - q^-1)
    q = _nonzero_q(params)
    if q * q == 1:
        raise ValueError("uq_sl2 needs q^2 != 1")
    c = _param(params, "c", 0)
    kappa = 1 / ((q - 1 / q) * (1 / (q * q) - 1))
    return AffineAuto(1 / (q * q), 0), UniPoly((c, kappa))


def _quantum_heisenberg(params):
    # central quotient H = lam of XY - qYX = H
    q = _nonzero_q(params)
    lam = _param(params, "lam", 1)
    return AffineAuto(q, lam), UniPoly((0, 1))


CATALOG = {
    "weyl": (_weyl, ()),
    "quantum_weyl": (_quantum_weyl, ("q",)),
    "quantum_plane": (_quantum_plane, ("q",)),
    "usl2": (_usl2, ("c",)),
    "uq_sl2": (_uq_sl2, ("q", "c")),
    "quantum_heisenberg": (_quantum_heisenberg, ("q", "lam")),
}


def gwa_catalog(name: str, params: Mapping[str, object] | None = None) -> GwaData:
    """Named GWAs over QQ; parameters are exact rationals (strings allowed)."""
    params = dict(params or {})
    try:
        build, keys = CATALOG[name]
    except KeyError:
        raise CatalogError(f"unknown catalog entry {name!r}; known: {', '.join(sorted(CATALOG))}") from None
    unknown = set(params) - set(keys)
    if unknown:
        raise CatalogError(f"{name} takes parameters {list(keys)}, got {sorted(unknown)}")
    sigma, a = build(params)
    return GwaData(sigma, a, name)


# -- presentations and dimensions ------------------------------------------------------


def natural_degree_of_h(data: GwaData) -> int:
    """Weight of h making Y*X and a(h) the same filtration degree (2 for linear a)."""
    return 2 if data.a.degree() <= 1 else 1


def _poly_in_h(f: UniPoly, ring: FreeAlgebra, hidx: int) -> NcPolynomial:
    return NcPolynomial(ring, {(hidx,) * k: c for k, c in enumerate(f.coeffs)})


def gwa_to_presentation(data: GwaData, degree_of_h: int = 2) -> Presentation:
    """Generators X, Y, h with the four defining rules as relations (filtered)."""
    ring = FreeAlgebra(("X", "Y", "h"), (1, 1, degree_of_h), data.field)
    X, Y, h = ring.gens()
    H = UniPoly.h(data.field)
    s = data.sigma
    rels = [
        X * h - _poly_in_h(sigma_apply(s, H, 1), ring, 2) * X,
        Y * h - _poly_in_h(sigma_apply(s, H, -1), ring, 2) * Y,
        Y * X - _poly_in_h(data.a, ring, 2),
        X * Y - _poly_in_h(sigma_apply(s, data.a, 1), ring, 2),
    ]
    return Presentation(ring, tuple(rels), FILTERED)


def gwa_dims(data: GwaData, N: int, degree_of_h: int = 2) -> HilbertTable:
    """Count basis elements h^j v_i with j*degree_of_h + |i| <= n."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    dims = []
    for n in range(N + 1):
        dims.append(sum(2 * (n - j * degree_of_h) + 1 for j in range(n // degree_of_h + 1)))
    return HilbertTable(N, tuple(dims), data.field, FILTERED)


def gwa_zero_divisor(data: GwaData) -> tuple[GwaElement, GwaElement] | None:
    """(Y, X) when a = 0, the pair with YX = a = 0."""
    if data.a.is_zero():
        return GwaElement.Y(data), GwaElement.X(data)
    return None
