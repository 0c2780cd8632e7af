"""Series primitives: truncated expansions of rational functions in a
positive root cone, and exact Laurent expansion in tau = t^(-1/2) used to
take t -> infinity limits of finite-t operators and Hamiltonians.
"""

from __future__ import annotations

from fractions import Fraction

from .laurent import MultiLaurent, RationalFunction, _as_scalar_zero

F0 = Fraction(0)


class Cone:
    """Positive cone spanned by simple-root vectors inside the first nx
    coordinates of the exponent lattice.  ``free`` directions are solved
    for but excluded from the grade (coset offsets)."""

    def __init__(self, roots, nx: int, free=()):
        self.roots = [tuple(Fraction(x) for x in r) for r in roots]
        self.free = [tuple(Fraction(x) for x in r) for r in free]
        self.nx = nx

    def coords(self, vec):
        """Solve vec = -sum c_a alpha_a (+ free part) exactly."""
        vec = [Fraction(x) for x in vec[: self.nx]]
        cols = self.roots + [tuple(-x for x in f) for f in self.free]
        r = len(cols)
        rows = [[cols[a][i] for a in range(r)] + [-vec[i]] for i in range(self.nx)]
        # Gaussian elimination with consistency check
        piv_cols = []
        ri = 0
        for col in range(r):
            piv = None
            for k in range(ri, self.nx):
                if rows[k][col] != 0:
                    piv = k
                    break
            if piv is None:
                continue
            rows[ri], rows[piv] = rows[piv], rows[ri]
            pv = rows[ri][col]
            rows[ri] = [x / pv for x in rows[ri]]
            for k in range(self.nx):
                if k != ri and rows[k][col] != 0:
                    f = rows[k][col]
                    rows[k] = [a - f * b for a, b in zip(rows[k], rows[ri])]
            piv_cols.append(col)
            ri += 1
        for k in range(ri, self.nx):
            if rows[k][r] != 0:
                raise ValueError("vector not in the cone span")
        sol = [F0] * r
        for i, col in enumerate(piv_cols):
            sol[col] = rows[i][r]
        return tuple(sol[: len(self.roots)])

    def grade(self, vec) -> Fraction:
        return sum(self.coords(vec), F0)


class ConeSeries:
    """A MultiLaurent whose terms are graded by a cone, complete for grades
    min_grade <= g <= order."""

    __slots__ = ("data", "cone", "order", "min_grade")

    def __init__(self, data: MultiLaurent, cone: Cone, order, min_grade=F0, truncate: bool = True):
        self.cone = cone
        self.order = Fraction(order)
        self.min_grade = Fraction(min_grade)
        if truncate:
            kept = {}
            for k, c in data.terms.items():
                g = cone.grade(data.exponent_of(k))
                if g <= self.order:
                    kept[k] = c
            data = MultiLaurent(data.nvars, kept, denom=data.denom)
        self.data = data

    @staticmethod
    def one(nvars: int, cone: Cone, order) -> "ConeSeries":
        return ConeSeries(MultiLaurent.const(nvars, Fraction(1)), cone, order, truncate=False)

    def __add__(self, other: "ConeSeries") -> "ConeSeries":
        order = min(self.order, other.order)
        return ConeSeries(self.data + other.data, self.cone, order,
                          min(self.min_grade, other.min_grade))

    def __sub__(self, other: "ConeSeries") -> "ConeSeries":
        return self + other.scale(Fraction(-1))

    def scale(self, c) -> "ConeSeries":
        return ConeSeries(self.data.scale(c), self.cone, self.order, self.min_grade,
                          truncate=False)

    def __mul__(self, other: "ConeSeries") -> "ConeSeries":
        order = min(self.order + other.min_grade, other.order + self.min_grade)
        return ConeSeries(self.data * other.data, self.cone, order,
                          self.min_grade + other.min_grade)

    def slice(self, grade) -> MultiLaurent:
        grade = Fraction(grade)
        kept = {k: c for k, c in self.data.terms.items()
                if self.cone.grade(self.data.exponent_of(k)) == grade}
        return MultiLaurent(self.data.nvars, kept, denom=self.data.denom)

    def coefficients_by_grade(self) -> dict:
        out: dict = {}
        for k, c in self.data.terms.items():
            g = self.cone.grade(self.data.exponent_of(k))
            out.setdefault(g, {})[k] = c
        return {g: MultiLaurent(self.data.nvars, t, denom=self.data.denom)
                for g, t in out.items()}

    def inv(self) -> "ConeSeries":
        """Inverse of a series with an invertible (monomial) lowest slice."""
        by = self.coefficients_by_grade()
        gmin = min(by) if by else F0
        head = by[gmin]
        if not head.is_monomial():
            raise ValueError("lowest slice is not a monomial; cannot invert")
        hinv = head ** (-1)
        rest = self.data - head
        cap = self.order - gmin
        # self = head (1 + u) with u of strictly positive grade
        u = ConeSeries(hinv * rest, self.cone, cap).data
        acc = MultiLaurent.const(self.data.nvars, Fraction(1))
        powu = MultiLaurent.const(self.data.nvars, Fraction(1))
        sign = -1
        if u.terms:
            gstep = min(self.cone.grade(u.exponent_of(k)) for k in u.terms)
            if gstep <= 0:
                raise ValueError("inverse expansion needs positive-grade tail")
            for _ in range(int(Fraction(cap) / gstep) + 1):
                powu = ConeSeries(powu * u, self.cone, cap).data
                if not powu.terms:
                    break
                acc = acc + powu.scale(Fraction(sign))
                sign = -sign
        return ConeSeries(hinv * acc, self.cone, self.order - 2 * gmin, -gmin)

    def __repr__(self):
        return f"ConeSeries(order<={self.order}, {len(self.data.terms)} terms)"


def expand_in_cone(rf: RationalFunction, cone: Cone, order, domain=None) -> ConeSeries:
    """Truncated cone expansion of num/den.  The denominator must have a
    unique minimal-grade term (generically true for the operator
    coefficients this is applied to)."""
    order = Fraction(order)
    num, den = rf.num, rf.den
    grades = [(cone.grade(den.exponent_of(k)), k) for k in den.terms]
    gmin = min(g for g, _ in grades)
    heads = [k for g, k in grades if g == gmin]
    if len(heads) != 1:
        raise ValueError("denominator has a non-unique minimal-grade term")
    k0 = heads[0]
    c0 = den.terms[k0]
    inv_head = MultiLaurent(den.nvars, {tuple(-e for e in k0): _inv_scalar(c0)},
                            denom=den.denom)
    tail = (den - MultiLaurent(den.nvars, {k0: c0}, denom=den.denom, normalize=False)) * inv_head
    # den = head (1 + tail), all tail terms have positive grade
    num_grades = [cone.grade(num.exponent_of(k)) for k in num.terms]
    nmin = min(num_grades) if num_grades else F0
    shift = nmin - gmin  # overall grade of num/den
    geo = MultiLaurent.const(den.nvars, Fraction(1))
    powt = MultiLaurent.const(den.nvars, Fraction(1))
    if tail.terms:
        gstep = min(cone.grade(tail.exponent_of(k)) for k in tail.terms)
        if gstep <= 0:
            raise ValueError("non-positive grade in denominator tail")
        kmax = int((order - shift) / gstep) + 1 if order >= shift else 0
        for k in range(1, kmax + 1):
            powt = ConeSeries(powt * tail, cone, order - shift, truncate=True).data
            if not powt.terms:
                break
            geo = geo + (powt if k % 2 == 0 else -powt)
    out = num * inv_head * geo
    return ConeSeries(out, cone, order, min_grade=shift)


def _inv_scalar(c):
    from .scalars import QExp
    if isinstance(c, QExp):
        return c.inv()
    return Fraction(1) / Fraction(c)


# ---------------------------------------------------------------------------
# exact Laurent expansion in tau = t^(-1/2)


class TauPoly:
    """Finite Laurent polynomial in tau = t^(-1/2) with MultiLaurent
    coefficients: represents sums of t-powers times Laurent polynomials."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}

    @staticmethod
    def of(p: MultiLaurent, t_exp=F0) -> "TauPoly":
        key = Fraction(t_exp) * -2
        if key.denominator != 1:
            raise ValueError("t-exponent must be a half-integer")
        return TauPoly(p.nvars, {int(key): p})

    @staticmethod
    def const(nvars: int, c, t_exp=F0) -> "TauPoly":
        return TauPoly.of(MultiLaurent.const(nvars, c), t_exp)

    def is_zero(self):
        return not self.terms

    def val(self) -> int:
        return min(self.terms)

    def __add__(self, other: "TauPoly") -> "TauPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, MultiLaurent.zero(self.nvars)) + v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return TauPoly(self.nvars, out)

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def scale(self, c):
        return TauPoly(self.nvars, {k: v.scale(c) for k, v in self.terms.items()})

    def mul_trunc(self, other: "TauPoly", hi: int) -> "TauPoly":
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = k1 + k2
                if k > hi:
                    continue
                p = v1 * v2
                if k in out:
                    s = out[k] + p
                    if s.is_zero():
                        del out[k]
                    else:
                        out[k] = s
                elif not p.is_zero():
                    out[k] = p
        return TauPoly(self.nvars, out)

    def inv_trunc(self, hi: int) -> "TauPoly":
        """Truncated inverse up to tau^hi relative to the inverse's own
        valuation -val(self); the lowest tau-slice must be a monomial."""
        v = self.val()
        head = self.terms[v]
        if not head.is_monomial():
            raise ValueError("lowest tau-slice is not a monomial")
        hinv = head ** (-1)
        # self = head tau^v (1 + u), u of strictly positive tau-valuation
        u_terms = {k - v: p * hinv for k, p in self.terms.items() if k != v}
        u = TauPoly(self.nvars, u_terms)
        target = hi + v  # geometric series order needed
        out = TauPoly.const(self.nvars, Fraction(1))
        powu = TauPoly.const(self.nvars, Fraction(1))
        sign = -1
        if not u.is_zero():
            for _ in range(max(target, 0) + 1):
                powu = powu.mul_trunc(u, target)
                if powu.is_zero():
                    break
                out = out + powu.scale(Fraction(sign))
                sign = -sign
        shifted = {k2 - v: p * hinv for k2, p in out.terms.items() if k2 - v <= hi}
        return TauPoly(self.nvars, shifted)


def tau_limit(factors, hi: int = 0) -> dict:
    """Exact tau-expansion of a product prod F_i^{e_i} up to tau^hi.

    factors: iterable of (TauPoly, +1 | -1).  Returns {k: MultiLaurent} for
    the tau^k coefficients with k <= hi (the caller asserts that slices
    below the expected valuation vanish and reads the limit from slice 0).
    """
    items = list(factors)
    if not items:
        raise ValueError("empty product")
    vals = [f.val() if e == 1 else -f.val() for f, e in items]
    total = TauPoly.const(items[0][0].nvars, Fraction(1))
    total_val_bound = 0
    for idx, (f, e) in enumerate(items):
        cap = hi - sum(vals[idx + 1:])
        if e == 1:
            g = f
        else:
            g = f.inv_trunc(cap - total_val_bound)
        total = total.mul_trunc(g, cap)
        total_val_bound += vals[idx]
        if total.is_zero():
            return {}
    return dict(total.terms)
