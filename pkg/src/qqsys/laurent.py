"""Multivariate Laurent polynomials and rational functions over exact
scalars (Fraction or formal-q QExp), plus q-Pochhammer and symmetric
function utilities.

Exponent vectors live on an integer lattice scaled by a per-value common
denominator, so half- and quarter-integer exponents are exact.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd as _igcd

from .scalars import QExp


def _as_scalar_zero(c):
    return c == 0 if isinstance(c, (int, Fraction)) else c.is_zero()


def _shrink(c):
    """Plain ints are much faster than Fractions in the hot loops."""
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _lcm(a: int, b: int) -> int:
    return a // _igcd(a, b) * b


class MultiLaurent:
    """Sparse Laurent polynomial in ``nvars`` variables.  ``denom`` is the
    global exponent denominator; keys of ``terms`` are exponent vectors
    scaled by ``denom``."""

    __slots__ = ("nvars", "denom", "terms")

    def __init__(self, nvars: int, terms=None, denom: int = 1, normalize: bool = True):
        self.nvars = nvars
        self.denom = denom
        self.terms = terms or {}
        if normalize:
            self._normalize()

    def _normalize(self):
        dead = []
        for k, c in self.terms.items():
            if _as_scalar_zero(c):
                dead.append(k)
            elif type(c) is Fraction and c.denominator == 1:
                self.terms[k] = c.numerator
        for k in dead:
            del self.terms[k]
        if self.denom > 1 and self.terms:
            g = self.denom
            for k in self.terms:
                for e in k:
                    g = _igcd(g, abs(e))
                    if g == 1:
                        return
            if g > 1:
                self.terms = {tuple(e // g for e in k): c for k, c in self.terms.items()}
                self.denom //= g
        elif self.denom > 1 and not self.terms:
            self.denom = 1

    # -- constructors ---------------------------------------------------
    @staticmethod
    def zero(nvars: int) -> "MultiLaurent":
        return MultiLaurent(nvars, {}, normalize=False)

    @staticmethod
    def const(nvars: int, c) -> "MultiLaurent":
        if _as_scalar_zero(c):
            return MultiLaurent.zero(nvars)
        return MultiLaurent(nvars, {(0,) * nvars: c}, normalize=False)

    @staticmethod
    def var(nvars: int, i: int, exp=1, coeff=1) -> "MultiLaurent":
        return MultiLaurent.monomial(nvars, {i: exp}, coeff)

    @staticmethod
    def monomial(nvars: int, exps, coeff=1) -> "MultiLaurent":
        """Monomial with possibly fractional exponents.

        ``exps`` is a dict {var index: exponent} or a full vector."""
        if not isinstance(exps, dict):
            exps = dict(enumerate(exps))
        den = 1
        fr = {i: Fraction(e) for i, e in exps.items()}
        for e in fr.values():
            den = _lcm(den, e.denominator)
        key = [0] * nvars
        for i, e in fr.items():
            key[i] = int(e * den)
        return MultiLaurent(nvars, {tuple(key): coeff}, denom=den)

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def const_value(self):
        if not self.terms:
            return Fraction(0)
        (k, c), = self.terms.items()
        if any(k):
            raise ValueError("not a constant")
        return c

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def exponent_of(self, key) -> tuple[Fraction, ...]:
        return tuple(Fraction(e, self.denom) for e in key)

    def exponents(self):
        for k in self.terms:
            yield self.exponent_of(k)

    def __eq__(self, other):
        if not isinstance(other, MultiLaurent):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        a, b = self.aligned(other)
        return a.terms == b.terms

    def __hash__(self):
        return hash((self.nvars, self.denom, frozenset(self.terms.items())))

    # -- lattice alignment -------------------------------------------------
    def rescaled(self, den: int) -> "MultiLaurent":
        if den == self.denom:
            return self
        f = den // self.denom
        return MultiLaurent(self.nvars, {tuple(e * f for e in k): c for k, c in self.terms.items()},
                            denom=den, normalize=False)

    def aligned(self, other: "MultiLaurent"):
        d = _lcm(self.denom, other.denom)
        return self.rescaled(d), other.rescaled(d)

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction, QExp)):
            other = MultiLaurent.const(self.nvars, other)
        a, b = self.aligned(other)
        out = dict(a.terms)
        for k, c in b.terms.items():
            if k in out:
                s = out[k] + c
                if _as_scalar_zero(s):
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = c
        return MultiLaurent(self.nvars, out, denom=a.denom)

    __radd__ = __add__

    def __neg__(self):
        return MultiLaurent(self.nvars, {k: -c for k, c in self.terms.items()},
                            denom=self.denom, normalize=False)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, QExp)):
            other = MultiLaurent.const(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QExp)):
            return self.scale(other)
        a, b = self.aligned(other)
        if not a.terms or not b.terms:
            return MultiLaurent.zero(self.nvars)
        if len(a.terms) > len(b.terms):
            a, b = b, a
        n = self.nvars
        # Kronecker packing: exponent vectors become single ints so the
        # convolution runs on machine-int dict keys
        lo = [0] * n
        hi = [0] * n
        first = True
        for src in (a.terms, b.terms):
            smin = [0] * n
            smax = [0] * n
            f2 = True
            for k in src:
                for i in range(n):
                    e = k[i]
                    if f2 or e < smin[i]:
                        smin[i] = e
                    if f2 or e > smax[i]:
                        smax[i] = e
                f2 = False
            for i in range(n):
                lo[i] += smin[i]
                hi[i] += smax[i]
            if first:
                alo = smin
                first = False
            else:
                blo = smin
        strides = [1] * n
        s = 1
        for i in range(n):
            strides[i] = s
            s *= hi[i] - lo[i] + 1

        def pack(k, base):
            tot = 0
            for i in range(n):
                tot += (k[i] - base[i]) * strides[i]
            return tot

        pa = [(pack(k, alo), c) for k, c in a.terms.items()]
        pb = [(pack(k, blo), c) for k, c in b.terms.items()]
        out: dict = {}
        get = out.get
        for ka, ca in pa:
            for kb, cb in pb:
                k = ka + kb
                p = ca * cb
                cur = get(k)
                if cur is None:
                    out[k] = p
                else:
                    out[k] = cur + p
        res: dict = {}
        for k, c in out.items():
            if _as_scalar_zero(c):
                continue
            vec = [0] * n
            rem = k
            for i in range(n - 1, -1, -1):
                d, rem = divmod(rem, strides[i])
                vec[i] = d + lo[i]
            res[tuple(vec)] = c
        return MultiLaurent(self.nvars, res, denom=a.denom)

    __rmul__ = __mul__

    def scale(self, c):
        if _as_scalar_zero(c):
            return MultiLaurent.zero(self.nvars)
        return MultiLaurent(self.nvars, {k: cc * c for k, cc in self.terms.items()},
                            denom=self.denom, normalize=False)

    def mul_monomial(self, exps, coeff=1) -> "MultiLaurent":
        m = MultiLaurent.monomial(self.nvars, exps, coeff)
        return self * m

    def __pow__(self, k: int) -> "MultiLaurent":
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial")
            (key, c), = self.terms.items()
            if isinstance(c, QExp):
                cinv = c.inv() ** (-k)
            else:
                cinv = Fraction(1) / Fraction(c) ** (-k)
            return MultiLaurent(self.nvars, {tuple(e * k for e in key): cinv},
                                denom=self.denom)
        out = MultiLaurent.const(self.nvars, Fraction(1))
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # -- substitutions ----------------------------------------------------
    def permute_signed(self, perm, signs) -> "MultiLaurent":
        """x_i -> x_{perm[i]}^{signs[i]} on every term."""
        out: dict = {}
        for k, c in self.terms.items():
            nk = [0] * self.nvars
            for i, e in enumerate(k):
                if e:
                    nk[perm[i]] += e * signs[i]
            nk = tuple(nk)
            if nk in out:
                s = out[nk] + c
                if _as_scalar_zero(s):
                    del out[nk]
                else:
                    out[nk] = s
            else:
                out[nk] = c
        return MultiLaurent(self.nvars, out, denom=self.denom)

    def scale_vars(self, factors) -> "MultiLaurent":
        """x_i -> factors[i] * x_i, with scalar factors (may be None for 1)."""
        out: dict = {}
        for k, c in self.terms.items():
            f = c
            for i, e in enumerate(k):
                if e and factors[i] is not None:
                    fi = factors[i]
                    if isinstance(fi, QExp):
                        f = f * (fi ** e if self.denom == 1 else fi ** e)
                    else:
                        f = f * Fraction(fi) ** e
            # factors are given for the *scaled* lattice exponent e, i.e. the
            # caller passes the denom-th root of the true variable factor.
            if k in out:
                s = out[k] + f
                if _as_scalar_zero(s):
                    del out[k]
                else:
                    out[k] = s
            else:
                if not _as_scalar_zero(f):
                    out[k] = f
        return MultiLaurent(self.nvars, out, denom=self.denom, normalize=False)

    def subs_values(self, roots):
        """Evaluate: x_i = roots[i]**denom (roots are denom-th roots of the
        evaluation point, enabling exact fractional exponents).  A None root
        leaves that variable symbolic; the result is then a MultiLaurent."""
        partial = any(r is None for r in roots)
        if partial:
            out = MultiLaurent.zero(self.nvars)
            acc: dict = {}
            for k, c in self.terms.items():
                v = c
                nk = [0] * self.nvars
                for i, e in enumerate(k):
                    if not e:
                        continue
                    if roots[i] is None:
                        nk[i] = e
                    else:
                        v = v * (roots[i] ** e)
                nk = tuple(nk)
                if nk in acc:
                    s = acc[nk] + v
                    if _as_scalar_zero(s):
                        del acc[nk]
                    else:
                        acc[nk] = s
                else:
                    acc[nk] = v
            out = MultiLaurent(self.nvars, acc, denom=self.denom)
            return out
        total = None
        for k, c in self.terms.items():
            v = c
            for i, e in enumerate(k):
                if e:
                    r = roots[i]
                    v = v * (r ** e)
            total = v if total is None else total + v
        if total is None:
            return Fraction(0)
        return total

    def subs_var(self, i: int, value: "MultiLaurent") -> "MultiLaurent":
        """Substitute variable i by a monomial MultiLaurent (same nvars)."""
        if not value.is_monomial():
            raise ValueError("substitution value must be a monomial")
        (vkey, vc), = value.terms.items()
        vexp = value.exponent_of(vkey)
        out = MultiLaurent.zero(self.nvars)
        for k, c in self.terms.items():
            e = Fraction(k[i], self.denom)
            rest = {j: Fraction(kk, self.denom) for j, kk in enumerate(k) if j != i and kk}
            new_exps = dict(rest)
            coeff = c
            if e:
                for j, ve in enumerate(vexp):
                    if ve:
                        new_exps[j] = new_exps.get(j, Fraction(0)) + ve * e
                if not (isinstance(vc, (int, Fraction)) and vc == 1):
                    if e.denominator != 1:
                        raise ValueError("fractional power of substitution with nontrivial coefficient")
                    coeff = coeff * (vc ** int(e) if not isinstance(vc, QExp) else vc ** int(e))
            out = out + MultiLaurent.monomial(self.nvars, new_exps, coeff)
        return out

    def extended(self, nvars_new: int) -> "MultiLaurent":
        if nvars_new < self.nvars:
            raise ValueError("cannot shrink variable space")
        pad = (0,) * (nvars_new - self.nvars)
        return MultiLaurent(nvars_new, {k + pad: c for k, c in self.terms.items()},
                            denom=self.denom, normalize=False)

    def min_key(self):
        return min(self.terms)

    def __repr__(self):
        return to_text(self)


# ---------------------------------------------------------------------------
# plain-text serialization: terms sorted lexicographically by exponent vector


def _coeff_text(c) -> str:
    if isinstance(c, QExp):
        if c.is_laurent() and c.num.is_monomial():
            (e, cc), = c.num.terms.items()
            if e == 0:
                return str(cc)
            return f"{cc}*q^({e})"
        if c.is_laurent():
            bits = []
            for e in sorted(c.num.terms):
                cc = c.num.terms[e]
                if e == 0:
                    bits.append(f"{cc}")
                else:
                    bits.append(f"{cc}*q^({e})")
            return "{" + " + ".join(bits) + "}"
        return "{" + repr(c) + "}"
    return str(Fraction(c))


def _exp_text(e: Fraction) -> str:
    if e.denominator == 1 and e > 0:
        return str(e)
    return f"({e})"


def to_text(p: MultiLaurent, names=None) -> str:
    if p.is_zero():
        return "0"
    names = names or [f"x{i+1}" for i in range(p.nvars)]
    bits = []
    for k in sorted(p.terms):
        c = p.terms[k]
        parts = [_coeff_text(c)]
        for i, e in enumerate(k):
            if e:
                parts.append(f"{names[i]}^{_exp_text(Fraction(e, p.denom))}")
        bits.append("*".join(parts))
    return " + ".join(bits)


def from_text(s: str, nvars: int, names=None) -> MultiLaurent:
    """Parse the plain-text form produced by :func:`to_text` for Fraction
    and Laurent-in-q coefficients."""
    names = names or [f"x{i+1}" for i in range(nvars)]
    index = {n: i for i, n in enumerate(names)}
    s = s.strip()
    if s == "0":
        return MultiLaurent.zero(nvars)
    out = MultiLaurent.zero(nvars)
    for term in s.split(" + "):
        coeff = Fraction(1)
        qpart = None
        exps: dict = {}
        for factor in term.split("*"):
            factor = factor.strip()
            if not factor:
                continue
            if factor.startswith("{"):
                inner = factor[1:-1]
                qp = QExp.const(0)
                for piece in inner.split(" + "):
                    piece = piece.strip()
                    if "*q^" in piece:
                        cstr, estr = piece.split("*q^")
                        qp = qp + QExp.qpow(Fraction(estr.strip("()")), Fraction(cstr))
                    else:
                        qp = qp + QExp.const(Fraction(piece))
                qpart = qp
            elif factor.startswith("q^"):
                e = Fraction(factor[2:].strip("()"))
                qpart = (qpart or QExp.const(1)) * QExp.qpow(e)
            elif "^" in factor:
                name, estr = factor.split("^")
                exps[index[name]] = Fraction(estr.strip("()"))
            elif factor in index:
                exps[index[factor]] = Fraction(1)
            else:
                coeff = coeff * Fraction(factor)
        c = qpart * coeff if qpart is not None else coeff
        out = out + MultiLaurent.monomial(nvars, exps, c)
    return out


# ---------------------------------------------------------------------------
# rational functions


class PoleError(ArithmeticError):
    pass


class FormalQ:
    """Shift-factor provider when q is an honest lattice variable of the
    coefficient ring (slot q_slot), keeping all scalar arithmetic rational."""

    mode = "symbolic"

    def __init__(self, nvars: int, q_slot: int):
        self.nvars = nvars
        self.q_slot = q_slot

    def slot_exponent(self, r):
        return self.q_slot, Fraction(r)

    def q_pow(self, r):
        return MultiLaurent.monomial(self.nvars, {self.q_slot: Fraction(r)}, Fraction(1))

    def one(self):
        return Fraction(1)

    def zero(self):
        return Fraction(0)


def _canonical_factor(f: MultiLaurent):
    """Split f into (canonical factor, monomial-and-scalar content): the
    canonical factor has minimal key at the origin with unit coefficient."""
    k0 = f.min_key()
    c0 = f.terms[k0]
    if not any(k0) and isinstance(c0, (int, Fraction)) and c0 == 1:
        return f, None
    inv = (c0.inv() if isinstance(c0, QExp) else Fraction(1) / Fraction(c0))
    mono = MultiLaurent(f.nvars, {tuple(-e for e in k0): inv}, denom=f.denom)
    return f * mono, MultiLaurent(f.nvars, {k0: c0}, denom=f.denom, normalize=False)


class RationalFunction:
    """Quotient of MultiLaurent polynomials with the denominator kept as a
    multiset of canonical factors (no polynomial gcd; common factors are
    shared structurally).  Equality is by cross-multiplication after
    cancelling shared factors, or by seeded random evaluation."""

    __slots__ = ("_num", "_den")

    def __init__(self, num: MultiLaurent, den=None, normalize: bool = True):
        if den is None:
            den = {}
        if isinstance(den, MultiLaurent):
            if den.is_zero():
                raise ZeroDivisionError("zero denominator")
            if den.is_monomial():
                num = num * (den ** (-1))
                den = {}
            else:
                fac, content = _canonical_factor(den)
                if content is not None:
                    num = num * (content ** (-1))
                den = {fac: 1}
        if num.is_zero():
            den = {}
        self._num = num
        self._den = dict(den)

    # -- constructors ------------------------------------------------------
    @staticmethod
    def const(nvars: int, c) -> "RationalFunction":
        return RationalFunction(MultiLaurent.const(nvars, c))

    @staticmethod
    def of(p: MultiLaurent) -> "RationalFunction":
        return RationalFunction(p)

    @staticmethod
    def coerce(x, nvars: int) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, MultiLaurent):
            return RationalFunction.of(x)
        return RationalFunction.const(nvars, x)

    @staticmethod
    def _make(num: MultiLaurent, den: dict) -> "RationalFunction":
        rf = RationalFunction.__new__(RationalFunction)
        rf._num = num
        rf._den = {} if num.is_zero() else den
        return rf

    @staticmethod
    def from_factors(num: MultiLaurent, factors) -> "RationalFunction":
        """num / prod(factors), keeping each denominator factor separate."""
        den: dict = {}
        for f in factors:
            if f.is_monomial():
                num = num * (f ** (-1))
                continue
            fac, content = _canonical_factor(f)
            den[fac] = den.get(fac, 0) + 1
            if content is not None:
                num = num * (content ** (-1))
        return RationalFunction._make(num, den)

    @property
    def num(self) -> MultiLaurent:
        return self._num

    @property
    def den(self) -> MultiLaurent:
        return self.den_poly()

    def den_poly(self) -> MultiLaurent:
        out = MultiLaurent.const(self._num.nvars, Fraction(1))
        for f, mult in self._den.items():
            for _ in range(mult):
                out = out * f
        return out

    def den_factors(self) -> dict:
        return dict(self._den)

    @property
    def nvars(self):
        return self._num.nvars

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_poly(self) -> bool:
        return not self._den

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = RationalFunction.coerce(other, self.nvars)
        if self._den == other._den:
            return RationalFunction._make(self._num + other._num, self._den)
        union: dict = dict(self._den)
        for f, m in other._den.items():
            union[f] = max(union.get(f, 0), m)
        n1 = self._num
        n2 = other._num
        for f, m in union.items():
            d1 = m - self._den.get(f, 0)
            d2 = m - other._den.get(f, 0)
            for _ in range(d1):
                n1 = n1 * f
            for _ in range(d2):
                n2 = n2 * f
        return rf_reduce(RationalFunction._make(n1 + n2, union))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._make(-self._num, self._den)

    def __sub__(self, other):
        return self + (-RationalFunction.coerce(other, self.nvars))

    def __rsub__(self, other):
        return RationalFunction.coerce(other, self.nvars) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QExp)):
            return RationalFunction._make(self._num.scale(other), self._den)
        if isinstance(other, MultiLaurent):
            other = RationalFunction.of(other)
        if self.is_zero() or other.is_zero():
            return RationalFunction.const(self.nvars, Fraction(0))
        den = dict(self._den)
        for f, m in other._den.items():
            den[f] = den.get(f, 0) + m
        num = self._num * other._num
        # cancel a numerator that equals a denominator factor outright
        if len(den) and num.is_monomial() is False:
            fac, content = _canonical_factor(num)
            if fac in den:
                den[fac] -= 1
                if not den[fac]:
                    del den[fac]
                num = content if content is not None else MultiLaurent.const(self.nvars, Fraction(1))
        return RationalFunction._make(num, den)

    __rmul__ = __mul__

    def inv(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverting zero rational function")
        num = self.den_poly()
        if self._num.is_monomial():
            return RationalFunction._make(num * (self._num ** (-1)), {})
        fac, content = _canonical_factor(self._num)
        if content is not None:
            num = num * (content ** (-1))
        return RationalFunction._make(num, {fac: 1})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, QExp):
            return self * other.inv()
        other = RationalFunction.coerce(other, self.nvars)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        if other._num.is_monomial():
            num = self._num * (other._num ** (-1))
            den = dict(self._den)
        else:
            fac, content = _canonical_factor(other._num)
            num = self._num if content is None else self._num * (content ** (-1))
            den = dict(self._den)
            den[fac] = den.get(fac, 0) + 1
        for f, m in other._den.items():
            for _ in range(m):
                num = num * f
        return RationalFunction._make(num, den)

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other, self.nvars) * self.inv()

    def subs_values(self, roots):
        d = None
        for f, m in self._den.items():
            fv = f.subs_values(roots)
            if _as_scalar_zero(fv):
                raise PoleError("sample hit a pole")
            for _ in range(m):
                d = fv if d is None else d * fv
        n = self._num.subs_values(roots)
        if d is None:
            return RationalFunction.of(n) if isinstance(n, MultiLaurent) else n
        if isinstance(n, MultiLaurent) or isinstance(d, MultiLaurent):
            nml = n if isinstance(n, MultiLaurent) else MultiLaurent.const(self.nvars, n)
            dml = d if isinstance(d, MultiLaurent) else MultiLaurent.const(self.nvars, d)
            return RationalFunction(nml, dml)
        if isinstance(n, QExp) or isinstance(d, QExp):
            return QExp.coerce(n) / QExp.coerce(d)
        return Fraction(n) / Fraction(d)

    def map_parts(self, fn) -> "RationalFunction":
        """Apply a multiplicative Laurent-polynomial map (substitution,
        signed permutation, ...) to numerator and denominator factors."""
        den: dict = {}
        num = fn(self._num)
        for f, m in self._den.items():
            fac, content = _canonical_factor(fn(f))
            den[fac] = den.get(fac, 0) + m
            if content is not None:
                num = num * (content ** (-m))
        return RationalFunction._make(num, den)

    def __repr__(self):
        if self.is_poly():
            return repr(self._num)
        return f"({self._num!r}) / ({self.den_poly()!r})"


def divide_exact(f: MultiLaurent, g: MultiLaurent):
    """Exact quotient f/g in the Laurent ring, or None if g does not divide
    f.  Leading-term elimination under lex order; cheap for small g."""
    if f.is_zero():
        return f
    if g.is_zero():
        raise ZeroDivisionError
    import heapq
    from operator import add as _add, sub as _sub
    a, b = f.aligned(g)
    # quick per-variable degree-span rejection
    for i in range(a.nvars):
        fa = [k[i] for k in a.terms]
        fb = [k[i] for k in b.terms]
        if max(fa) - min(fa) < max(fb) - min(fb):
            return None
    fmap = dict(a.terms)
    gitems = list(b.terms.items())
    glead = max(b.terms)
    gc = b.terms[glead]
    if isinstance(gc, QExp):
        gcinv = gc.inv()
    else:
        gcinv = Fraction(1, 1) / Fraction(gc)
    heap = [tuple(-e for e in k) for k in fmap]
    heapq.heapify(heap)
    quot: dict = {}
    cap = 2 * len(fmap) + 8
    while fmap:
        cap -= 1
        if cap < 0:
            return None
        flead = None
        while heap:
            cand = tuple(-e for e in heapq.heappop(heap))
            if cand in fmap:
                flead = cand
                break
        if flead is None:
            break
        tkey = tuple(map(_sub, flead, glead))
        tc = fmap[flead] * gcinv
        tc = _shrink(tc) if isinstance(tc, Fraction) else tc
        quot[tkey] = tc
        if len(quot) > len(a.terms) + 2:
            return None
        for gk, gv in gitems:
            k = tuple(map(_add, tkey, gk))
            cur = fmap.get(k)
            if cur is None:
                s = -tc * gv
                if not _as_scalar_zero(s):
                    fmap[k] = s
                    heapq.heappush(heap, tuple(-e for e in k))
            else:
                s = cur - tc * gv
                if _as_scalar_zero(s):
                    del fmap[k]
                else:
                    fmap[k] = s
    if fmap:
        return None
    return MultiLaurent(a.nvars, quot, denom=a.denom)


def rf_reduce(rf: "RationalFunction") -> "RationalFunction":
    """Cancel denominator factors that exactly divide the numerator."""
    if rf.is_zero() or rf.is_poly():
        return rf
    num = rf.num
    den = dict(rf.den_factors())
    changed = False
    for f in sorted(den, key=lambda p: len(p.terms)):
        while den.get(f, 0) > 0:
            q = divide_exact(num, f)
            if q is None:
                break
            num = q
            den[f] -= 1
            changed = True
            if not den[f]:
                del den[f]
    if not changed:
        return rf
    return RationalFunction._make(num, den)


def rf_sum(rfs) -> "RationalFunction":
    """Sum a list of rational functions over the single union denominator
    (one pass, no cascading denominator growth)."""
    rfs = [r for r in rfs if not r.is_zero()]
    if not rfs:
        raise ValueError("rf_sum needs at least the zero context; use const")
    if len(rfs) == 1:
        return rfs[0]
    union: dict = {}
    for r in rfs:
        for f, m in r.den_factors().items():
            union[f] = max(union.get(f, 0), m)
    total = None
    for r in rfs:
        extras = None
        dfs = r.den_factors()
        for f, m in union.items():
            need = m - dfs.get(f, 0)
            for _ in range(need):
                extras = f if extras is None else extras * f
        n = r.num if extras is None else r.num * extras
        total = n if total is None else total + n
    return rf_reduce(RationalFunction._make(total, union))


class Equality:
    """Equality policy for rational functions: 'exact' cross-multiplies and
    expands; 'prob' evaluates at seeded random rational points
    (Schwartz-Zippel style).  Exact mode is the ground truth."""

    def __init__(self, mode: str = "exact", samples: int = 3, seed: int = 0,
                 redraw_budget: int = 10):
        assert mode in ("exact", "prob")
        self.mode = mode
        self.samples = samples
        self.seed = seed
        self.redraw_budget = redraw_budget

    @staticmethod
    def default_for(nvars: int, force_exact: bool = False, seed: int = 0) -> "Equality":
        if force_exact or nvars <= 2:
            return Equality("exact")
        return Equality("prob", samples=3, seed=seed)


def _random_root(rng: random.Random) -> Fraction:
    num = rng.randint(10 ** 5, 10 ** 6)
    den = rng.randint(7, 997)
    if rng.random() < 0.5:
        num = -num
    return Fraction(num, den)


def rf_equal(A: RationalFunction, B: RationalFunction, policy: Equality | None = None) -> bool:
    if A.nvars != B.nvars:
        raise ValueError("variable count mismatch")
    policy = policy or Equality("exact")
    if policy.mode == "exact":
        # cancel shared denominator factors, then cross-multiply
        fa = A.den_factors()
        fb = B.den_factors()
        left = A.num
        right = B.num
        for f, m in fb.items():
            extra = m - min(m, fa.get(f, 0))
            for _ in range(extra):
                left = left * f
        for f, m in fa.items():
            extra = m - min(m, fb.get(f, 0))
            for _ in range(extra):
                right = right * f
        return (left - right).is_zero()
    rng = random.Random(policy.seed)
    d = 1
    for p in (A.num, B.num):
        d = _lcm(d, p.denom)
    for f in list(A.den_factors()) + list(B.den_factors()):
        d = _lcm(d, f.denom)
    done = 0
    budget = policy.redraw_budget
    while done < policy.samples:
        roots = [_random_root(rng) for _ in range(A.nvars)]
        try:
            ra = _subs_scaled(A, roots, d)
            rb = _subs_scaled(B, roots, d)
        except PoleError:
            budget -= 1
            if budget < 0:
                raise PoleError("exhausted redraw budget in probabilistic equality")
            continue
        if ra != rb:
            return False
        done += 1
    return True


def _subs_scaled(A: RationalFunction, roots, d: int):
    num = A.num.rescaled(d).subs_values(roots)
    den = None
    for f, m in A.den_factors().items():
        fv = f.rescaled(d).subs_values(roots)
        if _as_scalar_zero(fv):
            raise PoleError("sample hit a pole")
        for _ in range(m):
            den = fv if den is None else den * fv
    if den is None:
        if isinstance(num, MultiLaurent):
            return RationalFunction.of(num)
        return num
    if isinstance(num, MultiLaurent) or isinstance(den, MultiLaurent):
        nml = num if isinstance(num, MultiLaurent) else MultiLaurent.const(A.nvars, num)
        dml = den if isinstance(den, MultiLaurent) else MultiLaurent.const(A.nvars, den)
        return RationalFunction(nml, dml)
    if isinstance(num, QExp) or isinstance(den, QExp):
        return QExp.coerce(num) / QExp.coerce(den)
    return Fraction(num) / Fraction(den)


# ---------------------------------------------------------------------------
# Pochhammer machinery


def pochhammer_fin(a, p, m: int):
    """prod_{k=0}^{m-1} (1 - p^k a); m = 0 gives 1.  Works for scalars and
    for MultiLaurent a with scalar p."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if isinstance(a, MultiLaurent):
        out = MultiLaurent.const(a.nvars, Fraction(1))
        pk = None
        for k in range(m):
            factor = MultiLaurent.const(a.nvars, Fraction(1)) - (a.scale(pk) if pk is not None else a)
            out = out * factor
            pk = p if pk is None else pk * p
        return out
    if m == 0:
        return QExp.const(1) if isinstance(a, QExp) or isinstance(p, QExp) else Fraction(1)
    out = 1 - a
    val = a
    for _ in range(1, m):
        val = val * p
        out = out * (1 - val)
    return out


def poch_coeffs(p, order: int, inverse: bool):
    """Coefficients c_n of the expansion of (z; p)_inf^{+-1} = sum c_n z^n,
    for n <= order.  p is a scalar (Fraction or QExp)."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    one = QExp.const(1) if isinstance(p, QExp) else Fraction(1)
    coeffs = [one]
    ppow = one
    poch = one  # (p;p)_n
    for n in range(1, order + 1):
        ppow = ppow * p
        poch = poch * (one - ppow)
        if inverse:
            coeffs.append(one / poch)
        else:
            # (-1)^n p^{n(n-1)/2} / (p;p)_n
            half = one
            for _ in range(n * (n - 1) // 2):
                half = half * p
            c = half / poch
            coeffs.append(-c if n % 2 else c)
    return coeffs


def poch_ratio(u, p, m: int):
    """Exact telescoped ratio (u; p)_inf / (u p^m; p)_inf = (u; p)_m, with the
    standard negative-m convention (u;p)_{-k} = 1/(u p^{-k}; p)_k."""
    if m >= 0:
        return pochhammer_fin(u, p, m)
    val = pochhammer_fin(u * (p ** m), p, -m)
    if isinstance(val, QExp):
        return val.inv()
    return Fraction(1) / val


def poch_series_inverse(a: MultiLaurent, p, order: int, grade_fn, inverse: bool = True) -> MultiLaurent:
    """Truncated expansion of (a; p)_inf^{+-1} to total grade <= order, where
    ``a`` is a monomial with strictly positive grade under ``grade_fn``
    (which takes an exponent-Fraction-vector and returns its cone grade)."""
    if not a.is_monomial():
        raise ValueError("series argument must be a monomial")
    (key,), = (list(a.terms.keys()),)
    g = grade_fn(a.exponent_of(key))
    if g <= 0:
        raise ValueError("series argument must have strictly positive grade")
    nmax = int(Fraction(order) / g)
    coeffs = poch_coeffs(p, nmax, inverse)
    out = MultiLaurent.const(a.nvars, coeffs[0])
    apow = None
    for n in range(1, nmax + 1):
        apow = a if apow is None else apow * a
        out = out + apow.scale(coeffs[n])
    return out


# ---------------------------------------------------------------------------
# symmetric function helpers.  Values may be scalars or MultiLaurent.


def elementary_sym(k: int, xs):
    """e_k of the given values."""
    if k < 0 or k > len(xs):
        raise ValueError("k out of range for e_k")
    coeffs = [Fraction(1)] + [Fraction(0)] * k
    for x in xs:
        for j in range(min(k, len(coeffs) - 1), 0, -1):
            coeffs[j] = coeffs[j] + coeffs[j - 1] * x
    return coeffs[k]


def complete_sym(k: int, xs):
    """h_k of the given values."""
    if k < 0:
        raise ValueError("k out of range for h_k")
    if k == 0:
        return Fraction(1)
    if not xs:
        return Fraction(0)
    # h over n vars via recurrence table
    prev = [Fraction(1)] + [Fraction(0)] * k  # zero variables
    for x in xs:
        cur = [Fraction(1)] + [Fraction(0)] * k
        for j in range(1, k + 1):
            cur[j] = prev[j] + cur[j - 1] * x
        prev = cur
    return prev[k]


def ehat_sym(k: int, xs):
    """Coefficient of z^k in prod_i (1 + z x_i)(1 + z / x_i); requires the
    values be invertible (Laurent monomials or nonzero scalars)."""
    n = len(xs)
    if k < 0 or k > 2 * n:
        raise ValueError("k out of range for ehat_k")
    coeffs = [Fraction(1)] + [Fraction(0)] * k
    for x in xs:
        if isinstance(x, MultiLaurent):
            xinv = x ** (-1)
        elif isinstance(x, QExp):
            xinv = x.inv()
        else:
            xinv = Fraction(1) / Fraction(x)
        tilde = x + xinv
        # multiply by (1 + z*tilde + z^2)
        new = list(coeffs)
        for j in range(k, 0, -1):
            new[j] = new[j] + coeffs[j - 1] * tilde
        for j in range(k, 1, -1):
            new[j] = new[j] + coeffs[j - 2]
        coeffs = new
    return coeffs[k]


def ehat_b_sym(sqrt_xs):
    """prod_i (1 + x_i)/sqrt(x_i) = prod_i (sqrt(x_i) + 1/sqrt(x_i)), given
    the square roots of the values."""
    out = None
    for s in sqrt_xs:
        if isinstance(s, MultiLaurent):
            sinv = s ** (-1)
        elif isinstance(s, QExp):
            sinv = s.inv()
        else:
            sinv = Fraction(1) / Fraction(s)
        f = s + sinv
        out = f if out is None else out * f
    if out is None:
        return Fraction(1)
    return out


def ehat_d_sym(sqrt_xs, sign: int):
    """Half-spin orbit sum: sum over eps with prod eps = sign of
    prod_i x_i^{eps_i/2}, given square roots of the values."""
    n = len(sqrt_xs)
    total = None
    for mask in range(1 << n):
        par = 1 - 2 * (bin(mask).count("1") % 2)
        if par != sign:
            continue
        term = None
        for i, s in enumerate(sqrt_xs):
            if (mask >> i) & 1:
                if isinstance(s, MultiLaurent):
                    f = s ** (-1)
                elif isinstance(s, QExp):
                    f = s.inv()
                else:
                    f = Fraction(1) / Fraction(s)
            else:
                f = s
            term = f if term is None else term * f
        total = term if total is None else total + term
    return total


def sym_fun(kind: str, k: int, xs, sqrt_xs=None):
    """Dispatcher for the symmetric-function families used as eigenvalue
    building blocks: 'e', 'h', 'ehat', 'ehat_B', 'ehat_D+', 'ehat_D-'."""
    if kind == "e":
        return elementary_sym(k, xs)
    if kind == "h":
        return complete_sym(k, xs)
    if kind == "ehat":
        return ehat_sym(k, xs)
    if kind == "ehat_B":
        return ehat_b_sym(sqrt_xs if sqrt_xs is not None else xs)
    if kind == "ehat_D+":
        return ehat_d_sym(sqrt_xs if sqrt_xs is not None else xs, +1)
    if kind == "ehat_D-":
        return ehat_d_sym(sqrt_xs if sqrt_xs is not None else xs, -1)
    raise ValueError(f"unknown symmetric function kind {kind!r}")
