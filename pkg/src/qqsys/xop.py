"""The q-difference operator algebra in N variables: finite sums of
rational-function coefficients times lattice shift operators, acting as
f(x) -> sum_v c_v(x) f(q^v x).

Shift vectors live on the half-integer lattice (stored doubled); the same
class serves x-space operators and index-space (Lambda) Pieri operators.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .laurent import (Equality, FormalQ, MultiLaurent, PoleError, RationalFunction,
                      rf_equal, _as_scalar_zero, _lcm)
from .rootdata import dominant_rep, weyl_elements, weyl_orbit
from .scalars import QExp

SHIFT_DEN = 2  # shift lattice denominator: half-shifts suffice everywhere


def shift_key(v) -> tuple:
    out = []
    for x in v:
        e = Fraction(x) * SHIFT_DEN
        if e.denominator != 1:
            raise ValueError(f"shift {x} not on the half-integer lattice")
        out.append(int(e))
    return tuple(out)


def key_shift(key) -> tuple:
    return tuple(Fraction(e, SHIFT_DEN) for e in key)


def shift_poly(p: MultiLaurent, vkey, domain, nx: int) -> MultiLaurent:
    """Substitute x_i -> q^{v_i} x_i for the first nx variables, where vkey
    is a doubled shift key.  In symbolic mode the q-power lands on the
    dedicated exponent slot instead of the coefficient."""
    if not any(vkey):
        return p
    if getattr(domain, "mode", None) == "symbolic":
        slot, unit = domain.slot_exponent(Fraction(1))
        den = p.denom
        deltas = {}
        L = den
        for k in p.terms:
            e = Fraction(sum(vkey[i] * k[i] for i in range(nx)), SHIFT_DEN * den) * unit
            deltas[k] = e
            if e:
                L = _lcm(L, e.denominator)
        f = L // den
        out = {}
        for k, c in p.terms.items():
            nk = list(x * f for x in k)
            nk[slot] += int(deltas[k] * L)
            out[tuple(nk)] = c
        return MultiLaurent(p.nvars, out, denom=L)
    out = {}
    for k, c in p.terms.items():
        e = Fraction(sum(vkey[i] * k[i] for i in range(nx)), SHIFT_DEN * p.denom)
        out[k] = c * domain.q_pow(e) if e else c
    return MultiLaurent(p.nvars, out, denom=p.denom, normalize=False)


def shift_rf(rf: RationalFunction, vkey, domain, nx: int) -> RationalFunction:
    if not any(vkey):
        return rf
    return rf.map_parts(lambda p: shift_poly(p, vkey, domain, nx))


class DifferenceOperator:
    """terms: map from doubled shift key to RationalFunction coefficient."""

    __slots__ = ("nvars", "nx", "varset", "domain", "terms")

    def __init__(self, nvars: int, domain, terms=None, varset: str = "x",
                 nx: int | None = None, normalize: bool = True):
        self.nvars = nvars
        self.nx = nvars if nx is None else nx
        self.varset = varset
        self.domain = domain
        self.terms = terms or {}
        if normalize:
            dead = [k for k, c in self.terms.items() if c.is_zero()]
            for k in dead:
                del self.terms[k]

    # -- constructors -----------------------------------------------------
    @staticmethod
    def zero(nvars, domain, varset="x", nx=None):
        return DifferenceOperator(nvars, domain, {}, varset, nx, normalize=False)

    @staticmethod
    def identity(nvars, domain, varset="x", nx=None):
        nxv = nvars if nx is None else nx
        one = RationalFunction.const(nvars, Fraction(1))
        return DifferenceOperator(nvars, domain, {(0,) * nxv: one}, varset, nx, normalize=False)

    @staticmethod
    def scalar(nvars, domain, c, varset="x", nx=None):
        nxv = nvars if nx is None else nx
        rf = RationalFunction.coerce(c, nvars)
        return DifferenceOperator(nvars, domain, {(0,) * nxv: rf}, varset, nx)

    @staticmethod
    def from_terms(nvars, domain, pairs, varset="x", nx=None):
        """pairs: iterable of (shift vector in Fractions, coefficient)."""
        op = DifferenceOperator.zero(nvars, domain, varset, nx)
        for v, c in pairs:
            op = op + DifferenceOperator.single(nvars, domain, v, c, varset, nx)
        return op

    @staticmethod
    def single(nvars, domain, v, c, varset="x", nx=None):
        rf = RationalFunction.coerce(c, nvars)
        return DifferenceOperator(nvars, domain, {shift_key(v): rf}, varset, nx)

    def clone_with(self, terms):
        return DifferenceOperator(self.nvars, self.domain, terms, self.varset, self.nx)

    # -- algebra -----------------------------------------------------------
    def _check(self, other):
        if self.nvars != other.nvars or self.varset != other.varset or self.nx != other.nx:
            raise ValueError("operator variable sets differ")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            if k in out:
                s = out[k] + c
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = c
        return self.clone_with(out)

    def __neg__(self):
        return DifferenceOperator(self.nvars, self.domain,
                                  {k: -c for k, c in self.terms.items()},
                                  self.varset, self.nx, normalize=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if isinstance(c, (RationalFunction, MultiLaurent)):
            if c.is_zero():
                return DifferenceOperator.zero(self.nvars, self.domain, self.varset, self.nx)
        elif _as_scalar_zero(c):
            return DifferenceOperator.zero(self.nvars, self.domain, self.varset, self.nx)
        return self.clone_with({k: coef * c for k, coef in self.terms.items()})

    def mul_left_fn(self, f):
        """Multiplication operator f(x) composed on the left: f * self."""
        rf = RationalFunction.coerce(f, self.nvars)
        return self.clone_with({k: rf * c for k, c in self.terms.items()})

    def __mul__(self, other):
        """Operator composition self  o  other."""
        if not isinstance(other, DifferenceOperator):
            return self.scale(other)
        self._check(other)
        from .laurent import rf_sum
        buckets: dict = {}
        for v1, c1 in self.terms.items():
            for v2, c2 in other.terms.items():
                k = tuple(a + b for a, b in zip(v1, v2))
                buckets.setdefault(k, []).append(c1 * shift_rf(c2, v1, self.domain, self.nx))
        out: dict = {}
        for k, parts in buckets.items():
            s = rf_sum(parts) if any(not p.is_zero() for p in parts) else None
            if s is not None and not s.is_zero():
                out[k] = s
        return self.clone_with(out)

    def __rmul__(self, other):
        return self.scale(other)

    def pow(self, k: int):
        out = DifferenceOperator.identity(self.nvars, self.domain, self.varset, self.nx)
        for _ in range(k):
            out = out * self
        return out

    # -- actions ------------------------------------------------------------
    def apply_poly(self, f: MultiLaurent) -> RationalFunction:
        from .laurent import rf_sum
        parts = [c * RationalFunction.of(shift_poly(f, v, self.domain, self.nx))
                 for v, c in self.terms.items()]
        parts = [p for p in parts if not p.is_zero()]
        if not parts:
            return RationalFunction.const(self.nvars, Fraction(0))
        return rf_sum(parts)

    def apply_rf(self, f: RationalFunction) -> RationalFunction:
        from .laurent import rf_sum
        parts = [c * shift_rf(f, v, self.domain, self.nx)
                 for v, c in self.terms.items()]
        parts = [p for p in parts if not p.is_zero()]
        if not parts:
            return RationalFunction.const(self.nvars, Fraction(0))
        return rf_sum(parts)

    def eval_apply(self, f: MultiLaurent, roots, lattice_den: int):
        """Value of (self . f) at the point x_i = roots[i]**lattice_den;
        raises PoleError when a coefficient denominator vanishes."""
        from .laurent import _subs_scaled
        total = None
        for v, c in self.terms.items():
            cv = _subs_scaled(c, roots, lattice_den)
            fv = shift_poly(f, v, self.domain, self.nx).rescaled(lattice_den)
            val = cv * fv.subs_values(roots)
            total = val if total is None else total + val
        if total is None:
            return Fraction(0)
        return total

    # -- transforms ------------------------------------------------------------
    def map_coeffs(self, fn):
        return self.clone_with({k: fn(c) for k, c in self.terms.items()})

    def weyl_image(self, perm, signs):
        """w(c Gamma^v) = c(w x) Gamma^{w v} for a signed permutation w."""
        fullperm = list(perm) + list(range(self.nx, self.nvars))
        fullsigns = list(signs) + [1] * (self.nvars - self.nx)
        out = {}
        for k, c in self.terms.items():
            nk = [0] * self.nx
            for i, e in enumerate(k):
                nk[perm[i]] = e * signs[i]
            wc = c.map_parts(lambda p: p.permute_signed(fullperm, fullsigns))
            nk = tuple(nk)
            if nk in out:
                out[nk] = out[nk] + wc
            else:
                out[nk] = wc
        return self.clone_with(out)

    def conjugate_by_fn(self, f) -> "DifferenceOperator":
        """f^{-1} . self . f for a multiplication operator f: the coefficient
        of Gamma^v becomes c_v(x) f(q^v x)/f(x)."""
        rf = RationalFunction.coerce(f, self.nvars)
        out = {}
        for v, c in self.terms.items():
            out[v] = c * shift_rf(rf, v, self.domain, self.nx) / rf
        return self.clone_with(out)

    def serialize(self) -> str:
        lines = []
        for k in sorted(self.terms):
            v = key_shift(k)
            lines.append(f"{self.terms[k]!r} | {','.join(str(x) for x in v)}")
        return "\n".join(lines)

    def __repr__(self):
        return f"DifferenceOperator({self.varset}, {len(self.terms)} terms)"


def q_factor(domain, nvars: int, qe, exps=None) -> MultiLaurent:
    """The monomial x^exps q^{qe} in the coefficient ring of the domain."""
    qe = Fraction(qe)
    exps = dict(exps or {})
    if getattr(domain, "mode", None) == "symbolic":
        if qe:
            slot, e = domain.slot_exponent(qe)
            exps[slot] = exps.get(slot, Fraction(0)) + e
        return MultiLaurent.monomial(nvars, exps, Fraction(1))
    return MultiLaurent.monomial(nvars, exps, domain.q_pow(qe))


def gaussian_conj(A: DifferenceOperator, k: int) -> DifferenceOperator:
    """gamma^{-k} A gamma^{k}: the substitution
    Gamma^v -> q^{k (v.v)/2} x^{k v} Gamma^v applied to every term."""
    out = {}
    for vkey, c in A.terms.items():
        v = key_shift(vkey)
        norm2 = sum(x * x for x in v)
        mono = q_factor(A.domain, A.nvars, Fraction(k) * norm2 / 2,
                        {i: k * v[i] for i in range(A.nx)})
        out[vkey] = c * mono
    return A.clone_with(out)


def dop_equal(A: DifferenceOperator, B: DifferenceOperator,
              policy: Equality | None = None) -> bool:
    A._check(B)
    keys = set(A.terms) | set(B.terms)
    zero = RationalFunction.const(A.nvars, Fraction(0))
    for k in sorted(keys):
        ca = A.terms.get(k, zero)
        cb = B.terms.get(k, zero)
        if not rf_equal(ca, cb, policy):
            return False
    return True


def weyl_symmetrize(phi: RationalFunction, pi, rtype: str, nvars: int, domain,
                    nx: int | None = None) -> DifferenceOperator:
    """Sum over distinct Weyl images of phi * Gamma^pi: each distinct image
    of the weight pi contributes once (the stabilizer fixes phi)."""
    nxv = nvars if nx is None else nx
    pi = tuple(Fraction(x) for x in pi)
    seen = {}
    for perm, signs in weyl_elements(rtype, nxv):
        img = [Fraction(0)] * nxv
        for i, x in enumerate(pi):
            img[perm[i]] = x * signs[i]
        key = tuple(img)
        if key in seen:
            continue
        seen[key] = (perm, signs)
    op = DifferenceOperator.zero(nvars, domain, "x", nxv)
    base = DifferenceOperator(nvars, domain, {shift_key(pi): phi}, "x", nxv)
    for key, (perm, signs) in sorted(seen.items()):
        op = op + base.weyl_image(perm, signs)
    return op


# ---------------------------------------------------------------------------
# symmetric polynomials in the Weyl-orbit-sum basis


class NotInSpan(ArithmeticError):
    pass


class SymmetricPolynomial:
    """Invariant Laurent polynomial in the orbit-sum basis m_mu, for the
    Weyl group determined by rtype ('A', 'B'/'C'/'BC' hyperoctahedral, or
    'D' even-sign)."""

    __slots__ = ("rtype", "N", "nvars", "coeffs")

    def __init__(self, rtype: str, N: int, coeffs: dict, nvars: int | None = None):
        self.rtype = "B" if rtype in ("C", "BC") else rtype
        self.N = N
        self.nvars = N if nvars is None else nvars
        self.coeffs = {mu: c for mu, c in coeffs.items() if not _as_scalar_zero(c)}

    @staticmethod
    def monomial_orbit(rtype: str, N: int, mu, nvars: int | None = None) -> MultiLaurent:
        nv = N if nvars is None else nvars
        out = MultiLaurent.zero(nv)
        for w in weyl_orbit("B" if rtype in ("C", "BC") else rtype, mu):
            out = out + MultiLaurent.monomial(nv, dict(enumerate(w)), Fraction(1))
        return out

    def expand(self) -> MultiLaurent:
        out = MultiLaurent.zero(self.nvars)
        for mu, c in self.coeffs.items():
            out = out + SymmetricPolynomial.monomial_orbit(self.rtype, self.N, mu, self.nvars).scale(c)
        return out

    @staticmethod
    def from_laurent(p: MultiLaurent, rtype: str, N: int) -> "SymmetricPolynomial":
        rt = "B" if rtype in ("C", "BC") else rtype
        coeffs = {}
        seen = {}
        for k, c in p.terms.items():
            e = tuple(Fraction(x, p.denom) for x in k[:N])
            if any(k[N:]):
                raise ValueError("nonzero exponents outside the x slots")
            rep = dominant_rep(rt, e)
            seen.setdefault(rep, {})[e] = c
        for rep, members in seen.items():
            orbit = weyl_orbit(rt, rep)
            c0 = members[rep] if rep in members else None
            if c0 is None or len(members) != len(orbit):
                raise ValueError("polynomial is not Weyl invariant")
            for e, c in members.items():
                if not _as_scalar_zero(c - c0):
                    raise ValueError("polynomial is not Weyl invariant")
            coeffs[rep] = c0
        return SymmetricPolynomial(rt, N, coeffs, p.nvars)

    def __repr__(self):
        items = ", ".join(f"m{list(map(str, mu))}: {c}" for mu, c in sorted(self.coeffs.items()))
        return f"SymPoly({items})"


def _fzero(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return x == 0
    if isinstance(x, QExp):
        return x.is_zero()
    if isinstance(x, RationalFunction):
        return x.is_zero()
    if isinstance(x, MultiLaurent):
        return x.is_zero()
    raise TypeError(type(x))


def linsolve(A: list, b: list):
    """Solve A x = b by fraction-free-ish Gaussian elimination over any
    exact field elements supporting +,-,*,/ and zero-test.  Returns None if
    singular."""
    n = len(A)
    M = [row[:] + [b[i]] for i, row in enumerate(A)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if not _fzero(M[r][col]):
                piv = r
                break
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        for r in range(n):
            if r == col:
                continue
            f = M[r][col]
            if _fzero(f):
                continue
            ratio = f / pv
            M[r] = [M[r][j] - ratio * M[col][j] for j in range(n + 1)]
    return [M[i][n] / M[i][i] for i in range(n)]


def _random_roots(rng: random.Random, n: int) -> list[Fraction]:
    return [Fraction(rng.randint(50, 400) * (1 if rng.random() < 0.5 else -1),
                     rng.randint(7, 97)) for _ in range(n)]


def dop_to_matrix(A: DifferenceOperator, rtype: str, basis: list, seed: int = 0,
                  image_basis: list | None = None, max_redraw: int = 12):
    """Matrix of A on the orbit-sum basis {m_mu : mu in basis}, computed by
    evaluation-interpolation at seeded random rational points plus one
    holdout point whose residual must vanish exactly.

    Returns M with (A . m_{basis[j]}) = sum_i M[i][j] m_{image_basis[i]}.
    Raises NotInSpan if the holdout residual is nonzero.
    """
    from math import gcd

    N = len(basis[0]) if basis else A.nx
    image_basis = basis if image_basis is None else image_basis
    K = len(image_basis)
    rng = random.Random(seed)
    polys = [SymmetricPolynomial.monomial_orbit(rtype, N, mu, A.nvars) for mu in basis]
    img_polys = [SymmetricPolynomial.monomial_orbit(rtype, N, mu, A.nvars) for mu in image_basis]
    lat = 1
    for p in img_polys + polys:
        lat = lat * p.denom // gcd(lat, p.denom)
    for c in A.terms.values():
        for q in [c.num] + list(c.den_factors()):
            lat = lat * q.denom // gcd(lat, q.denom)
    img_scaled = [p.rescaled(lat) for p in img_polys]
    redraw = max_redraw
    while True:
        try:
            samples = [_random_roots(rng, A.nvars) for _ in range(K + 1)]
            S = [[img_scaled[i].subs_values(samples[j]) for i in range(K)]
                 for j in range(K)]
            cols = []
            for p in polys:
                rhs = [A.eval_apply(p, samples[j], lat) for j in range(K)]
                sol = linsolve(S, rhs)
                if sol is None:
                    raise PoleError("singular sample")
                cols.append(sol)
            # holdout certificate: the interpolated expansion must reproduce
            # the operator image exactly at a fresh point
            hold = samples[K]
            hold_vals = [p.subs_values(hold) for p in img_scaled]
            for jcol, p in enumerate(polys):
                lhs = A.eval_apply(p, hold, lat)
                rhs = None
                for i in range(K):
                    term = cols[jcol][i] * hold_vals[i]
                    rhs = term if rhs is None else rhs + term
                resid = lhs - (rhs if rhs is not None else Fraction(0))
                if not _fzero(resid):
                    raise NotInSpan(
                        f"image of m_{basis[jcol]} not in the span of the requested window")
            return [[cols[j][i] for j in range(len(basis))] for i in range(K)]
        except PoleError:
            redraw -= 1
            if redraw < 0:
                raise PoleError("exhausted redraw budget in dop_to_matrix")
