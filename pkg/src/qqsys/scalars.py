"""Exact scalar arithmetic: rationals, and the field of rational functions
of a formal q with fractional exponents.

Two coefficient regimes are used throughout the package: computations at
finite t specialize q and t to generic rationals (plain Fraction), while
t -> infinity and quantum-torus computations keep q formal (QExp).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd


def _lcm(a: int, b: int) -> int:
    return a // _igcd(a, b) * b


class QPoly:
    """Sparse Laurent polynomial in q with rational exponents and Fraction
    coefficients.  Immutable by convention: never mutate ``terms`` after
    construction."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        # terms: dict {Fraction exponent: Fraction coefficient}, no zeros
        self.terms = terms or {}

    # -- constructors -------------------------------------------------
    @staticmethod
    def const(c) -> "QPoly":
        c = Fraction(c)
        return QPoly({Fraction(0): c} if c else {})

    @staticmethod
    def qpow(r, coeff=1) -> "QPoly":
        c = Fraction(coeff)
        return QPoly({Fraction(r): c} if c else {})

    # -- predicates ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {Fraction(0): Fraction(1)}

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other: "QPoly") -> "QPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return QPoly(out)

    def __neg__(self) -> "QPoly":
        return QPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "QPoly") -> "QPoly":
        return self + (-other)

    def __mul__(self, other: "QPoly") -> "QPoly":
        if not self.terms or not other.terms:
            return QPoly({})
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return QPoly(out)

    def scale(self, c) -> "QPoly":
        c = Fraction(c)
        if not c:
            return QPoly({})
        return QPoly({e: cc * c for e, cc in self.terms.items()})

    def shift(self, r) -> "QPoly":
        r = Fraction(r)
        return QPoly({e + r: c for e, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, QPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def min_exp(self) -> Fraction:
        return min(self.terms)

    def max_exp(self) -> Fraction:
        return max(self.terms)

    def subs(self, qval: Fraction) -> Fraction:
        """Evaluate at a rational q; exponents must clear to integers at
        some root, so we demand integer exponents here."""
        total = Fraction(0)
        for e, c in self.terms.items():
            if e.denominator != 1:
                raise ValueError("fractional exponent; substitute a root of q instead")
            total += c * Fraction(qval) ** int(e)
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms):
            c = self.terms[e]
            if e == 0:
                bits.append(f"{c}")
            elif e == 1:
                bits.append(f"{c}*q")
            else:
                bits.append(f"{c}*q^({e})")
        return " + ".join(bits)


# -- integer polynomial helpers for gcd (dense lists, low degree first) --

def _zx_from(terms: dict) -> tuple[list[int], int]:
    """Integer-coefficient dense polynomial from integer-exponent terms,
    shifted so the lowest exponent is 0.  Returns (coeffs, content_sign)."""
    lo = min(terms)
    hi = max(terms)
    den = 1
    for c in terms.values():
        den = _lcm(den, c.denominator)
    coeffs = [0] * (hi - lo + 1)
    for e, c in terms.items():
        coeffs[e - lo] = int(c * den)
    return coeffs, lo


def _zx_degree(p: list[int]) -> int:
    d = len(p) - 1
    while d >= 0 and p[d] == 0:
        d -= 1
    return d


def _zx_content(p: list[int]) -> int:
    g = 0
    for c in p:
        g = _igcd(g, abs(c))
    return g or 1


def _zx_primitive(p: list[int]) -> list[int]:
    g = _zx_content(p)
    d = _zx_degree(p)
    return [c // g for c in p[: d + 1]]


def _zx_pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of a by b (b nonzero)."""
    a = a[: _zx_degree(a) + 1]
    b = b[: _zx_degree(b) + 1]
    db = len(b) - 1
    lb = b[-1]
    r = list(a)
    while _zx_degree(r) >= db and _zx_degree(r) >= 0:
        dr = _zx_degree(r)
        r = [c * lb for c in r]
        lead = r[dr]
        q = lead // lb  # exact: lead is divisible after scaling
        for i in range(db + 1):
            r[dr - db + i] -= q * b[i]
        r = r[: _zx_degree(r) + 1]
        if not r:
            return []
    return r


def _zx_gcd(a: list[int], b: list[int]) -> list[int]:
    a = _zx_primitive(a) if _zx_degree(a) >= 0 else []
    b = _zx_primitive(b) if _zx_degree(b) >= 0 else []
    if not a:
        return b
    if not b:
        return a
    while True:
        if _zx_degree(b) < 0 or not b:
            break
        r = _zx_pseudo_rem(a, b)
        if not r:
            a = b
            b = []
            break
        a, b = b, _zx_primitive(r)
    return a


def _zx_divexact(a: list[int], b: list[int]) -> list[Fraction]:
    """Exact division in Q[x]; a = q*b."""
    da, db = _zx_degree(a), _zx_degree(b)
    rem = [Fraction(c) for c in a[: da + 1]]
    q = [Fraction(0)] * (da - db + 1)
    lb = Fraction(b[db])
    for i in range(da - db, -1, -1):
        c = rem[db + i] / lb
        q[i] = c
        if c:
            for j in range(db + 1):
                rem[i + j] -= c * Fraction(b[j])
    if any(rem[: db + 1 + max(0, da - db)]):
        if any(rem):
            raise ArithmeticError("inexact polynomial division")
    return q


class QExp:
    """Element of the field of rational functions of q, allowing rational
    exponents.  Canonical form: after clearing exponent denominators, the
    numerator/denominator pair is gcd-reduced and the denominator's lowest
    term is 1*q^0.  Equality of canonical forms is decidable."""

    __slots__ = ("num", "den")

    def __init__(self, num: QPoly, den: QPoly, reduce: bool = True):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce:
            num, den = self._canonical(num, den)
        self.num = num
        self.den = den

    # -- canonicalization ---------------------------------------------
    @staticmethod
    def _canonical(num: QPoly, den: QPoly) -> tuple[QPoly, QPoly]:
        if num.is_zero():
            return QPoly({}), QPoly.const(1)
        if den.is_monomial():
            (e, c), = den.terms.items()
            num = QPoly({e2 - e: c2 / c for e2, c2 in num.terms.items()})
            return num, QPoly.const(1)
        # clear exponent denominators
        L = 1
        for e in num.terms:
            L = _lcm(L, e.denominator)
        for e in den.terms:
            L = _lcm(L, e.denominator)
        nt = {int(e * L): c for e, c in num.terms.items()}
        dt = {int(e * L): c for e, c in den.terms.items()}
        nz, nlo = _zx_from(nt)
        dz, dlo = _zx_from(dt)
        g = _zx_gcd(nz, dz)
        if _zx_degree(g) > 0:
            nq = _zx_divexact(nz, g)
            dq = _zx_divexact(dz, g)
        else:
            nq = [Fraction(c) for c in nz]
            dq = [Fraction(c) for c in dz]
        # lowest den term -> 1*q^0
        dmin = 0
        while not dq[dmin]:
            dmin += 1
        scale = dq[dmin]
        new_num = {}
        for i, c in enumerate(nq):
            if c:
                new_num[Fraction(nlo - dlo - dmin + i, L)] = c / scale
        new_den = {}
        for i, c in enumerate(dq):
            if c:
                new_den[Fraction(i - dmin, L)] = c / scale
        return QPoly(new_num), QPoly(new_den)

    # -- constructors --------------------------------------------------
    @staticmethod
    def const(c) -> "QExp":
        return QExp(QPoly.const(c), QPoly.const(1), reduce=False)

    @staticmethod
    def qpow(r, coeff=1) -> "QExp":
        return QExp(QPoly.qpow(r, coeff), QPoly.const(1), reduce=False)

    @staticmethod
    def from_poly(p: QPoly) -> "QExp":
        return QExp(p, QPoly.const(1), reduce=False)

    @staticmethod
    def coerce(x) -> "QExp":
        if isinstance(x, QExp):
            return x
        if isinstance(x, QPoly):
            return QExp.from_poly(x)
        return QExp.const(x)

    # -- predicates ------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def __bool__(self):
        return not self.is_zero()

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        other = QExp.coerce(other)
        if self.den == other.den:
            return QExp(self.num + other.num, self.den)
        return QExp(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return QExp(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-QExp.coerce(other))

    def __rsub__(self, other):
        return QExp.coerce(other) + (-self)

    def __mul__(self, other):
        other = QExp.coerce(other)
        if self.den.is_one() and other.den.is_one():
            return QExp(self.num * other.num, self.den, reduce=False)
        return QExp(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inv(self) -> "QExp":
        if self.is_zero():
            raise ZeroDivisionError("inverting zero")
        return QExp(self.den, self.num)

    def __truediv__(self, other):
        return self * QExp.coerce(other).inv()

    def __rtruediv__(self, other):
        return QExp.coerce(other) * self.inv()

    def __pow__(self, k: int) -> "QExp":
        if k == 0:
            return QExp.const(1)
        if k < 0:
            return self.inv() ** (-k)
        out = QExp.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QExp.const(other)
        if not isinstance(other, QExp):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def subs_root(self, root: Fraction, order: int) -> Fraction:
        """Evaluate at q = root**order, i.e. substitute q^(1/order) = root."""
        scaled_n = QPoly({e * order: c for e, c in self.num.terms.items()})
        scaled_d = QPoly({e * order: c for e, c in self.den.terms.items()})
        return scaled_n.subs(root) / scaled_d.subs(root)

    def __repr__(self):
        if self.den.is_one():
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"


ZERO = QExp.const(0)
ONE = QExp.const(1)


def qq_pochhammer(r, p_exp, m: int) -> QExp:
    """(q^r; q^p_exp)_m as a QExp, for m >= 0."""
    out = QExp.const(1)
    for k in range(m):
        out = out * (QExp.const(1) - QExp.qpow(Fraction(r) + k * Fraction(p_exp)))
    return out


class ScalarDomain:
    """Coefficient regime: either exact rational specializations of (q, t)
    or a formal q (no t).  Rational values are stored via quartic roots so
    that all half- and quarter-integer powers occurring in the theory stay
    rational."""

    def __init__(self, mode: str, q4: Fraction | None = None, t4: Fraction | None = None):
        if mode not in ("specialized", "formal"):
            raise ValueError(f"unknown scalar mode {mode!r}")
        self.mode = mode
        if mode == "specialized":
            if q4 is None or t4 is None:
                raise ValueError("specialized domain needs q4 and t4")
            self.q4 = Fraction(q4)
            self.t4 = Fraction(t4)
            self._genericity_screen()
        else:
            self.q4 = None
            self.t4 = None

    @staticmethod
    def rational(q4, t4) -> "ScalarDomain":
        return ScalarDomain("specialized", Fraction(q4), Fraction(t4))

    @staticmethod
    def formal() -> "ScalarDomain":
        return ScalarDomain("formal")

    def _genericity_screen(self):
        q, t = self.q4 ** 4, self.t4 ** 4
        if q in (0, 1, -1) or t in (0, 1, -1):
            raise ValueError("q, t must be nonzero and not +-1")
        seen = set()
        for i in range(-6, 7):
            for j in range(-6, 7):
                v = q ** i * t ** j
                if (i, j) != (0, 0) and v == 1:
                    raise ValueError(f"degenerate specialization: q^{i} t^{j} = 1")
                if v in seen:
                    raise ValueError("specialization fails pairwise-distinct power screen")
                seen.add(v)

    @property
    def q(self):
        return self.q4 ** 4 if self.mode == "specialized" else QExp.qpow(1)

    @property
    def t(self):
        if self.mode != "specialized":
            raise ValueError("formal domain has no t")
        return self.t4 ** 4

    def q_pow(self, r):
        r = Fraction(r)
        if self.mode == "specialized":
            e = r * 4
            if e.denominator != 1:
                raise ValueError(f"q^{r} not representable with quartic root")
            v = self.q4 ** int(e)
            return v.numerator if v.denominator == 1 else v
        return QExp.qpow(r)

    def t_pow(self, r):
        r = Fraction(r)
        if self.mode != "specialized":
            raise ValueError("formal domain has no t")
        e = r * 4
        if e.denominator != 1:
            raise ValueError(f"t^{r} not representable with quartic root")
        v = self.t4 ** int(e)
        return v.numerator if v.denominator == 1 else v

    def one(self):
        return Fraction(1) if self.mode == "specialized" else ONE

    def zero(self):
        return Fraction(0) if self.mode == "specialized" else ZERO

    def __repr__(self):
        if self.mode == "specialized":
            return f"ScalarDomain(q={self.q}, t={self.t})"
        return "ScalarDomain(formal q)"
