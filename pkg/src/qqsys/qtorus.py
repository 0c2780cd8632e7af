"""The noncommutative quantum torus over formal q: normal-ordered Laurent
elements, the opposite quantum-Q-system solver for the index-space
operators, truncated graded series, the factored time-translation elements
and their commutation and intertwining checks.
"""

from __future__ import annotations

from fractions import Fraction

from .qsystem import backward_relation, forward_relation, relation_instances
from .rootdata import RootData, root_data
from .scalars import QExp, QPoly
from .series import Cone

F0 = Fraction(0)
F1 = Fraction(1)
HALF = Fraction(1, 2)

TORUS_DEN = 4  # exponent lattice denominator for both Lambda and T parts


def _key(vec) -> tuple:
    out = []
    for x in vec:
        e = Fraction(x) * TORUS_DEN
        if e.denominator != 1:
            raise ValueError(f"exponent {x} off the quarter-integer lattice")
        out.append(int(e))
    return tuple(out)


def _unkey(k) -> tuple:
    return tuple(Fraction(e, TORUS_DEN) for e in k)


class QTorusElement:
    """Finite sum of normal-ordered monomials Lambda^u T^v with QExp
    coefficients; T_i Lambda_j = q^{delta_ij} Lambda_j T_i."""

    __slots__ = ("N", "terms")

    def __init__(self, N: int, terms=None, normalize: bool = True):
        self.N = N
        self.terms = terms or {}
        if normalize:
            dead = [k for k, c in self.terms.items() if c.is_zero()]
            for k in dead:
                del self.terms[k]

    # -- constructors ----------------------------------------------------
    @staticmethod
    def monomial(N: int, u, v, coeff=None) -> "QTorusElement":
        c = QExp.coerce(coeff if coeff is not None else 1)
        return QTorusElement(N, {(_key(u), _key(v)): c})

    @staticmethod
    def one(N: int) -> "QTorusElement":
        return QTorusElement.monomial(N, (0,) * N, (0,) * N)

    @staticmethod
    def zero(N: int) -> "QTorusElement":
        return QTorusElement(N, {})

    # -- inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_laurent(self) -> bool:
        return all(c.is_laurent() for c in self.terms.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, QTorusElement):
            return NotImplemented
        return self.N == other.N and (self - other).is_zero()

    def __hash__(self):
        raise TypeError("unhashable")

    # -- algebra --------------------------------------------------------------
    def __add__(self, other: "QTorusElement") -> "QTorusElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            if s is None:
                out[k] = c
            else:
                s = s + c
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
        return QTorusElement(self.N, out, normalize=False)

    def __neg__(self):
        return QTorusElement(self.N, {k: -c for k, c in self.terms.items()}, normalize=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "QTorusElement":
        c = QExp.coerce(c)
        if c.is_zero():
            return QTorusElement.zero(self.N)
        return QTorusElement(self.N, {k: cc * c for k, cc in self.terms.items()},
                             normalize=False)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QExp)):
            return self.scale(other)
        out: dict = {}
        for (u1, v1), c1 in self.terms.items():
            for (u2, v2), c2 in other.terms.items():
                # T^{v1} Lambda^{u2} = q^{u2.v1} Lambda^{u2} T^{v1}
                e = Fraction(sum(a * b for a, b in zip(u2, v1)), TORUS_DEN * TORUS_DEN)
                c = c1 * c2 * QExp.qpow(e)
                k = (tuple(a + b for a, b in zip(u1, u2)),
                     tuple(a + b for a, b in zip(v1, v2)))
                s = out.get(k)
                if s is None:
                    if not c.is_zero():
                        out[k] = c
                else:
                    s = s + c
                    if s.is_zero():
                        del out[k]
                    else:
                        out[k] = s
        return QTorusElement(self.N, out, normalize=False)

    __rmul__ = scale

    def subs_index(self, lam):
        """Right action on the polynomial index: evaluate Lambda at q^lam and
        return {shift vector: QExp scalar} grouped by the T part."""
        out: dict = {}
        for (u, v), c in self.terms.items():
            e = sum((Fraction(l) * Fraction(uu, TORUS_DEN) for l, uu in zip(lam, u)), F0)
            val = c * QExp.qpow(e)
            sh = _unkey(v)
            s = out.get(sh)
            out[sh] = val if s is None else s + val
        return {k: v for k, v in out.items() if not v.is_zero()}

    def __repr__(self):
        bits = []
        for (u, v), c in sorted(self.terms.items()):
            bits.append(f"({c!r}) L^{_unkey(u)} T^{_unkey(v)}")
        return " + ".join(bits) or "0"


def qt_elem(N: int, pairs) -> QTorusElement:
    """Element from [(coeff, u, v), ...]."""
    out = QTorusElement.zero(N)
    for c, u, v in pairs:
        out = out + QTorusElement.monomial(N, u, v, c)
    return out


class NoLaurentQuotient(ArithmeticError):
    pass


def qt_solve(A: QTorusElement, C: QTorusElement, side: str = "left",
             max_steps: int = 20000) -> QTorusElement:
    """Solve A X = C (side='left') or X A = C (side='right') by peeling the
    lex-extreme monomial; raises NoLaurentQuotient when the remainder fails
    to terminate (no Laurent quotient exists)."""
    if A.is_zero():
        raise ZeroDivisionError("division by zero element")
    N = A.N
    lead_a = max(A.terms)
    ca = A.terms[lead_a]
    ua, va = lead_a
    rem = QTorusElement(N, dict(C.terms), normalize=False)
    out = QTorusElement.zero(N)
    steps = max_steps
    while not rem.is_zero():
        steps -= 1
        if steps < 0:
            raise NoLaurentQuotient("nonzero remainder: no Laurent quotient")
        lead_c = max(rem.terms)
        cc = rem.terms[lead_c]
        uc, vc = lead_c
        ux = tuple(a - b for a, b in zip(uc, ua))
        vx = tuple(a - b for a, b in zip(vc, va))
        if side == "left":
            # (Lambda^{ua} T^{va})(Lambda^{ux} T^{vx}) picks q^{ux.va}
            e = Fraction(sum(a * b for a, b in zip(ux, va)), TORUS_DEN * TORUS_DEN)
        else:
            e = Fraction(sum(a * b for a, b in zip(ua, vx)), TORUS_DEN * TORUS_DEN)
        x = cc / (ca * QExp.qpow(e))
        mono = QTorusElement(N, {(ux, vx): x}, normalize=False)
        out = out + mono
        rem = rem - (A * mono if side == "left" else mono * A)
    return out


# ---------------------------------------------------------------------------
# the index-space solutions of the opposite quantum Q-systems


class TorusFamily:
    """Solutions D(a, n) of the opposite quantum Q-system with initial data
    D(a,0) = Lambda^{omega*_a}, D(a,1) = Lambda^{omega*_a} T^{omega_a}."""

    def __init__(self, tag: str, N: int):
        self.tag = tag
        self.N = N
        self.rd = root_data(tag, N)
        self.cache: dict = {}
        self._busy: set = set()

    def initial(self, a: int, n: int) -> QTorusElement:
        ws = self.rd.weight_star(a)
        w = self.rd.weight(a)
        if n == 0:
            return QTorusElement.monomial(self.N, ws, (0,) * self.N)
        return QTorusElement.monomial(self.N, ws, w)

    def D(self, a: int, n: int) -> QTorusElement:
        if a == 0:
            return QTorusElement.one(self.N)
        if a == self.N + 1:
            return QTorusElement.zero(self.N)
        key = (a, n)
        if key in self.cache:
            return self.cache[key]
        if key in self._busy:
            raise RuntimeError(f"cyclic dependency solving {key}")
        self._busy.add(key)
        try:
            if n in (0, 1):
                out = self.initial(a, n)
            elif n >= 2:
                rel = forward_relation(self.tag, self.N, a, n).opposite()
                # opposite left pair: first = lower time, second = target
                first = self.D(*rel.hi)
                rhs = self._rhs(rel)
                out = qt_solve(first, rhs.scale(QExp.qpow(-rel.lhs_q)), side="left")
            else:
                rel = backward_relation(self.tag, self.N, a, n).opposite()
                second = self.D(*rel.lo)
                rhs = self._rhs(rel)
                out = qt_solve(second, rhs.scale(QExp.qpow(-rel.lhs_q)), side="right")
        finally:
            self._busy.discard(key)
        self.cache[key] = out
        return out

    def _rhs(self, rel) -> QTorusElement:
        total = QTorusElement.zero(self.N)
        for qe, sign, factors in rel.rhs:
            if any(b == self.N + 1 for b, _ in factors):
                continue
            prod = QTorusElement.one(self.N)
            for b, m in factors:
                prod = prod * self.D(b, m)
            total = total + prod.scale(QExp.qpow(qe) * Fraction(sign))
        return total

    # -- verification -----------------------------------------------------------
    def check_relation(self, rel) -> bool:
        """Opposite-form relation as an exact torus identity."""
        opp = rel.opposite()
        lhs = (self.D(*opp.hi) * self.D(*opp.lo)).scale(QExp.qpow(opp.lhs_q))
        return lhs == self._rhs(opp)

    def check_commutation(self, e: Fraction, first, second) -> bool:
        """Opposite of the direct q-commutation: D_a. D_b. = q^{-e} D_b. D_a."""
        A = self.D(*first)
        B = self.D(*second)
        return A * B == (B * A).scale(QExp.qpow(-e))


# ---------------------------------------------------------------------------
# graded truncated series in the Lambda^{-alpha*} cone


class TorusSeries:
    """Truncated series: slices[grade] are homogeneous QTorusElements in the
    grading by the positive coroot cone of the Lambda exponents; valid for
    grades min_grade <= g <= order."""

    __slots__ = ("N", "cone", "slices", "order", "min_grade")

    def __init__(self, N: int, cone: Cone, slices: dict, order, min_grade=F0):
        self.N = N
        self.cone = cone
        self.order = Fraction(order)
        self.min_grade = Fraction(min_grade)
        self.slices = {g: s for g, s in slices.items()
                       if not s.is_zero() and g <= self.order}

    @staticmethod
    def grade_of(cone: Cone, ukey) -> Fraction:
        # grade of Lambda^u is c_1 + ... where u = -sum c_a alpha*_a
        return cone.grade(_unkey(ukey))

    @staticmethod
    def from_element(N: int, cone: Cone, el: QTorusElement, order) -> "TorusSeries":
        slices: dict = {}
        ming = None
        for (u, v), c in el.terms.items():
            g = TorusSeries.grade_of(cone, u)
            ming = g if ming is None else min(ming, g)
            slices.setdefault(g, QTorusElement.zero(N))
            slices[g] = slices[g] + QTorusElement(N, {(u, v): c}, normalize=False)
        return TorusSeries(N, cone, slices, order, ming if ming is not None else F0)

    @staticmethod
    def one(N: int, cone: Cone, order) -> "TorusSeries":
        return TorusSeries(N, cone, {F0: QTorusElement.one(N)}, order)

    def __add__(self, other: "TorusSeries") -> "TorusSeries":
        order = min(self.order, other.order)
        out = dict(self.slices)
        for g, s in other.slices.items():
            out[g] = out.get(g, QTorusElement.zero(self.N)) + s
        return TorusSeries(self.N, self.cone, out, order,
                           min(self.min_grade, other.min_grade))

    def scale(self, c) -> "TorusSeries":
        return TorusSeries(self.N, self.cone, {g: s.scale(c) for g, s in self.slices.items()},
                           self.order, self.min_grade)

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def __mul__(self, other: "TorusSeries") -> "TorusSeries":
        order = min(self.order + other.min_grade, other.order + self.min_grade)
        out: dict = {}
        for g1, s1 in self.slices.items():
            for g2, s2 in other.slices.items():
                g = g1 + g2
                if g > order:
                    continue
                p = s1 * s2
                if g in out:
                    out[g] = out[g] + p
                else:
                    out[g] = p
        return TorusSeries(self.N, self.cone, out, order, self.min_grade + other.min_grade)

    def inv(self) -> "TorusSeries":
        """Inverse of a series with unit constant slice."""
        c0 = self.slices.get(F0)
        if c0 is None or list(c0.terms) != [((0,) * self.N, (0,) * self.N)]:
            raise ValueError("series inverse needs a scalar unit constant slice")
        c0val = c0.terms[((0,) * self.N, (0,) * self.N)]
        grades = sorted(g for g in self.slices if g > 0)
        out = {F0: QTorusElement.one(self.N).scale(c0val.inv())}
        if grades:
            from math import gcd
            L = 1
            for g in grades:
                L = L * g.denominator // gcd(L, g.denominator)
            step = Fraction(1, L)
            g = step
            while g <= self.order:
                acc = QTorusElement.zero(self.N)
                for g2 in grades:
                    if g2 > g:
                        break
                    rest = out.get(g - g2)
                    if rest is not None:
                        acc = acc + self.slices[g2] * rest
                if not acc.is_zero():
                    out[g] = acc.scale(-c0val.inv())
                g += step
        return TorusSeries(self.N, self.cone, out, self.order)

    def element_part(self) -> QTorusElement:
        total = QTorusElement.zero(self.N)
        for s in self.slices.values():
            total = total + s
        return total

    def eq_to(self, other: "TorusSeries", up_to=None):
        """Compare on all slices of grade <= min(valid orders, up_to);
        returns (equal, compared_order)."""
        order = min(self.order, other.order)
        if up_to is not None:
            order = min(order, Fraction(up_to))
        grades = set(self.slices) | set(other.slices)
        for g in sorted(grades):
            if g > order:
                continue
            a = self.slices.get(g, QTorusElement.zero(self.N))
            b = other.slices.get(g, QTorusElement.zero(self.N))
            if not (a - b).is_zero():
                return False, order
        return True, order


# ---------------------------------------------------------------------------
# time-translation elements


class GaussianPower:
    """Formal power g_T^x: enters only through its adjoint action
    Lambda^u T^v -> q^{x u.u/2} Lambda^u T^{v + x u}."""

    def __init__(self, x):
        self.x = Fraction(x)

    def ad(self, el: QTorusElement) -> QTorusElement:
        out = {}
        for (u, v), c in el.terms.items():
            uu = Fraction(sum(a * a for a in u), TORUS_DEN * TORUS_DEN)
            nv = []
            for a, b in zip(u, v):
                d = self.x * a
                if d.denominator != 1:
                    raise ValueError("Gaussian power leaves the exponent lattice")
                nv.append(b + int(d))
            key = (u, tuple(nv))
            val = c * QExp.qpow(self.x * uu / 2)
            out[key] = out[key] + val if key in out else val
        return QTorusElement(el.N, out)

    def ad_inv(self, el: QTorusElement) -> QTorusElement:
        return GaussianPower(-self.x).ad(el)

    def __repr__(self):
        return f"g_T^{self.x}"


class SeriesFactor:
    def __init__(self, series: TorusSeries):
        self.series = series
        self._inv = None

    def inv(self) -> TorusSeries:
        if self._inv is None:
            self._inv = self.series.inv()
        return self._inv

    def ad(self, el_series: TorusSeries) -> TorusSeries:
        return self.series * el_series * self.inv()

    def __repr__(self):
        return f"S(order<={self.series.order})"


class FactoredG:
    """Alternating product of Gaussian powers and unit-constant series whose
    adjoint action realizes the discrete time translation."""

    def __init__(self, N: int, cone: Cone, factors, order):
        self.N = N
        self.cone = cone
        self.factors = factors
        self.order = Fraction(order)

    def ad(self, el: QTorusElement) -> TorusSeries:
        cur = TorusSeries.from_element(self.N, self.cone, el, self.order)
        for f in reversed(self.factors):
            if isinstance(f, GaussianPower):
                slices = {g: f.ad(s) for g, s in cur.slices.items()}
                cur = TorusSeries(self.N, self.cone, slices, cur.order, cur.min_grade)
            else:
                cur = f.ad(cur)
        return cur


def poch_series(N: int, cone: Cone, w, step_exp, order, prefactor_qexp=F0,
                sign: int = 1) -> TorusSeries:
    """(sign q^{prefactor} Lambda^w ; q^{step})_infty^{-1} as a truncated
    graded series; the argument must have positive cone grade."""
    from .laurent import poch_coeffs
    base = QTorusElement.monomial(N, w, (0,) * N,
                                  QExp.qpow(prefactor_qexp) * Fraction(sign))
    g = cone.grade([Fraction(x) for x in w])
    if g <= 0:
        raise ValueError("series argument must have positive grade")
    nmax = int(Fraction(order) / g)
    coeffs = poch_coeffs(QExp.qpow(Fraction(step_exp)), nmax, inverse=True)
    slices = {F0: QTorusElement.one(N)}
    powb = QTorusElement.one(N)
    for n in range(1, nmax + 1):
        powb = powb * base
        slices[g * n] = powb.scale(coeffs[n])
    return TorusSeries(N, cone, slices, order)


def lambda_cone(rd: RootData) -> Cone:
    if rd.tag == "A1":
        # weight offsets along the all-ones direction carry no grade
        return Cone(rd.alpha_star, rd.N, free=[(F1,) * rd.N])
    return Cone(rd.alpha_star, rd.N)


def g_build(tag: str, N: int, order) -> FactoredG:
    """The factored time-translation element of the family."""
    rd = root_data(tag, N)
    cone = lambda_cone(rd)
    order = Fraction(order)

    def h(vec, step=1, pre=F0, sign=1):
        return poch_series(N, cone, vec, step, order, pre, sign)

    def neg(vec):
        return tuple(-Fraction(x) for x in vec)

    def g_lam() -> TorusSeries:
        out = TorusSeries.one(N, cone, order)
        for a in range(1, N):
            out = out * h(neg(rd.root_star(a)))
        return out

    eN = tuple(F1 if i == N - 1 else F0 for i in range(N))
    factors: list
    if tag == "A1":
        factors = [GaussianPower(1), SeriesFactor(g_lam())]
    elif tag == "D1":
        factors = [GaussianPower(1), SeriesFactor(g_lam() * h(neg(rd.root_star(N))))]
    elif tag == "B1":
        hN = h(neg(rd.root_star(N)))  # (Lambda_N^{-2}; q)
        factors = [GaussianPower(HALF), SeriesFactor(hN),
                   GaussianPower(HALF), SeriesFactor(hN * g_lam())]
    elif tag == "C1":
        hN = h(neg(rd.root_star(N)))  # (Lambda_N^{-1}; q)
        gl = g_lam()
        factors = [GaussianPower(1), SeriesFactor(gl),
                   GaussianPower(1), SeriesFactor(gl * hN)]
    elif tag == "A2odd":
        factors = [GaussianPower(1), SeriesFactor(g_lam() * h(neg(rd.root_star(N)), step=2))]
    elif tag == "D2":
        factors = [GaussianPower(1), SeriesFactor(g_lam() * h(neg(rd.root_star(N)), step=HALF))]
    elif tag == "A2even":
        gl = g_lam()
        factors = [GaussianPower(1), SeriesFactor(gl * h(neg(eN), pre=HALF)),
                   GaussianPower(1), SeriesFactor(gl * h(neg(eN)))]
    elif tag == "B1p":
        two_eN = tuple(2 * x for x in eN)
        factors = [GaussianPower(HALF), SeriesFactor(h(neg(two_eN), pre=HALF)),
                   GaussianPower(HALF),
                   SeriesFactor(h(neg(eN), step=HALF) * h(neg(eN), step=HALF, pre=HALF, sign=-1) * g_lam())]
    elif tag == "A2oddp":
        gl = g_lam()
        two_eN = tuple(2 * x for x in eN)
        factors = [GaussianPower(1), SeriesFactor(gl * h(neg(two_eN), step=2)),
                   GaussianPower(1),
                   SeriesFactor(gl * h(neg(eN)) * h(neg(eN), pre=1, sign=-1))]
    elif tag == "A2evenp":
        factors = [GaussianPower(1), SeriesFactor(g_lam() * h(neg(eN)))]
    else:
        raise ValueError(tag)
    return FactoredG(N, cone, factors, order)


# ---------------------------------------------------------------------------
# hard-particle conserved quantities (type A dictionary)


def hard_particle(N: int, m: int) -> QTorusElement:
    """Generating element of independent vertex sets of size m on the path
    with 2N-1 ordered vertices, with the standard occupation weights."""
    if not 0 <= m <= N:
        raise ValueError("order out of range")
    vhalf = Fraction(1, 2 * N)  # v^{1/2} = q^{1/(2N)}
    ys = []
    for idx in range(1, 2 * N):
        if idx % 2 == 1:
            a = (idx + 1) // 2
            w = [F0] * N
            w[a - 1] = F1
            ys.append(QTorusElement.monomial(N, (0,) * N, w, QExp.qpow(-vhalf)))
        else:
            a = idx // 2
            u = [F0] * N
            u[a] = F1
            u[a - 1] = -F1
            w = [F0] * N
            w[a] = F1
            ys.append(QTorusElement.monomial(N, u, w, QExp.qpow(-vhalf) * Fraction(-1)))

    total = QTorusElement.zero(N)

    def rec(start, chosen, acc):
        nonlocal total
        if chosen == m:
            total = total + acc
            return
        for i in range(start, 2 * N - 1):
            rec(i + 2, chosen + 1, acc * ys[i])

    rec(0, 0, QTorusElement.one(N))
    return total


def torus_from_dop(op, N: int, q_slot: int) -> QTorusElement:
    """Convert an index-space difference operator with Laurent-polynomial
    coefficients (over the formal-q slot) into a torus element."""
    from .xop import key_shift
    out = QTorusElement.zero(N)
    for vkey, c in op.terms.items():
        if not c.is_poly():
            raise ValueError("operator coefficient is not Laurent")
        v = key_shift(vkey)
        num = c.num
        for k, coeff in num.terms.items():
            u = [Fraction(k[i], num.denom) for i in range(N)]
            qe = Fraction(k[q_slot], num.denom)
            out = out + QTorusElement.monomial(N, u, v, QExp.qpow(qe) * coeff)
    return out
