"""Pieri operators: the explicit finite-t first Pieri operator, its
independent construction by conjugating the dual eigenvalue operator with
the infinite-product weight, the t -> infinity Toda Hamiltonians (both as
displayed closed forms and as machine-derived limits), the grouped-shift
action on the polynomial index, and Pieri-coefficient expansion.
"""

from __future__ import annotations

from fractions import Fraction

from .koornops import OpEnv, koorn_phi, km_op
from .laurent import (FormalQ, MultiLaurent, RationalFunction, rf_sum,
                      pochhammer_fin)
from .macpoly import PolynomialFamily, dual_params_rational
from .rootdata import (ParamMono, RootData, dual_params, is_g_partition,
                       root_data)
from .scalars import ScalarDomain
from .series import TauPoly, tau_limit
from .xop import DifferenceOperator, shift_key

F0 = Fraction(0)
F1 = Fraction(1)
HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# the limit Toda Hamiltonians (displayed closed forms), in Lambda variables
# with the formal q carried as the last exponent slot


class LambdaAlgebra:
    def __init__(self, N: int):
        self.N = N
        self.nvars = N + 1
        self.q_slot = N
        self.domain = FormalQ(self.nvars, self.q_slot)

    def L(self, i: int, e=1) -> MultiLaurent:
        return MultiLaurent.monomial(self.nvars, {i: Fraction(e)}, F1)

    def q(self, e=1) -> MultiLaurent:
        return MultiLaurent.monomial(self.nvars, {self.q_slot: Fraction(e)}, F1)

    def one(self) -> MultiLaurent:
        return MultiLaurent.const(self.nvars, F1)

    def ratio(self, i: int, j: int) -> MultiLaurent:
        """Lambda_{j+1}/Lambda_j style monomial: L_i / L_j."""
        return MultiLaurent.monomial(self.nvars, {i: F1, j: -F1}, F1)

    def op(self, terms) -> DifferenceOperator:
        out = {}
        for v, c in terms:
            key = shift_key(v)
            rf = RationalFunction.coerce(c, self.nvars)
            if key in out:
                out[key] = out[key] + rf
            else:
                out[key] = rf
        return DifferenceOperator(self.nvars, self.domain, out, "L", nx=self.N)

    def e_vec(self, i: int, e=1):
        v = [F0] * self.N
        v[i] = Fraction(e)
        return v


def toda_h(tag: str, N: int, a: int = 1) -> DifferenceOperator:
    """The limit first Pieri operator (Toda Hamiltonian) of the family; for
    type A all orders a are available."""
    al = LambdaAlgebra(N)
    one = al.one()
    if tag == "A1":
        import itertools
        terms = []
        for I in itertools.combinations(range(N), a):
            coef = one
            for i in I:
                if i - 1 not in I and i != 0:
                    coef = coef * (one - al.ratio(i, i - 1))
            v = [F0] * N
            for i in I:
                v[i] = F1
            terms.append((v, coef))
        return al.op(terms)
    if a != 1:
        raise ValueError("only the first Hamiltonian has a closed form here")
    rd = root_data(tag, N)
    terms = []
    # raising bulk: T_1 + sum_{i>=2} (1 - Lambda_i/Lambda_{i-1}) T_i
    terms.append((al.e_vec(0), one))
    for i in range(1, N):
        terms.append((al.e_vec(i), one - al.ratio(i, i - 1)))
    # lowering bulk: (1 - Lambda^{-alpha*_i}) T_i^{-1}; the last label is
    # always handled by the per-family boundary terms below (two labels for
    # the D-type dual)
    n_rstar = N - 2 if rd.rstar_type == "D" else N - 1
    for i in range(1, n_rstar + 1):
        mono = MultiLaurent.monomial(al.nvars,
                                     {k: -Fraction(x) for k, x in enumerate(rd.root_star(i)) if x},
                                     F1)
        terms.append((al.e_vec(i - 1, -1), one - mono))
    lamN = al.L(N - 1)
    lamN1 = al.L(N - 2) if N >= 2 else None
    if tag == "D1":
        inv2 = MultiLaurent.monomial(al.nvars, {N - 1: -F1, N - 2: -F1}, F1)
        terms.append((al.e_vec(N - 2, -1), (one - al.ratio(N - 1, N - 2)) * (one - inv2)))
        terms.append((al.e_vec(N - 1, -1), one - inv2))
    elif tag in ("B1",):
        u = lamN ** (-2)
        terms.append((al.e_vec(N - 1, -1), (one - u) * (one - al.q() * u)))
        terms.append(([F0] * N, MultiLaurent.monomial(al.nvars, {N - 1: -F1, N - 2: -F1, al.q_slot: -F1}, F1)
                      - u.scale(F1) - u * al.q(-1)))
    elif tag in ("C1",):
        terms.append((al.e_vec(N - 1, -1), one - lamN ** (-1)))
    elif tag == "A2odd":
        terms.append((al.e_vec(N - 1, -1), one - lamN ** (-2)))
    elif tag == "D2":
        u = lamN ** (-1)
        terms.append((al.e_vec(N - 1, -1), (one - u) * (one - al.q(HALF) * u)))
        terms.append(([F0] * N, -u - u * al.q(-HALF)))
    elif tag == "A2even":
        u = lamN ** (-1)
        terms.append((al.e_vec(N - 1, -1), one - u))
        terms.append(([F0] * N, -u))
    elif tag == "B1p":
        u = lamN ** (-1)
        terms.append((al.e_vec(N - 1, -1),
                      (one - u) * (one + al.q() * u) * (one - al.q() * u * u)))
        terms.append(([F0] * N,
                      u * (al.q(HALF) - al.q(-HALF))
                      - u * u * (al.q(HALF) + al.q(-HALF))
                      + MultiLaurent.monomial(al.nvars, {N - 1: -F1, N - 2: -F1, al.q_slot: -HALF}, F1)))
    elif tag == "A2oddp":
        u = lamN ** (-1)
        terms.append((al.e_vec(N - 1, -1), (one - u) * (one + al.q() * u)))
    elif tag == "A2evenp":
        u = lamN ** (-1)
        terms.append((al.e_vec(N - 1, -1), one - u))
        terms.append(([F0] * N, -u * al.q(-HALF)))
    else:
        raise ValueError(tag)
    _ = lamN1
    return al.op(terms)


# ---------------------------------------------------------------------------
# explicit finite-t first Pieri operator


def h1_explicit(star, N: int, domain: ScalarDomain) -> DifferenceOperator:
    """The first Pieri operator in the spectral variables s (T_i: s_i -> q s_i),
    given the DUAL parameter values (a*, b*, c*, d*)."""
    nv = N
    one = MultiLaurent.const(nv, F1)
    s = lambda i, e=1: MultiLaurent.var(nv, i, e)  # noqa: E731
    t, q = domain.t, domain.q
    astar = [Fraction(x) for x in star]
    terms = {}
    for i in range(N):
        # raising coefficient
        num = one
        fden = []
        for j in range(i):
            num = num * (s(i) - s(j).scale(Fraction(1, 1) / t))
            fden.append(s(i) - s(j))
            num = num * (s(i).scale(q) - s(j).scale(t))
            fden.append(s(i).scale(q) - s(j))
        terms[shift_key([F1 if k == i else F0 for k in range(N)])] = \
            RationalFunction.from_factors(num, fden)
        # lowering coefficient
        num = one
        fden = []
        for u in astar:
            num = num * (one - s(i).scale(Fraction(1, 1) / u))
            num = num * (one.scale(q) - s(i).scale(u))
        fden += [one - s(i, 2), one.scale(q) - s(i, 2), one.scale(q) - s(i, 2),
                 one.scale(q * q) - s(i, 2)]
        for j in range(i + 1, N):
            num = num * (s(i).scale(Fraction(1, 1) / t) - s(j))
            fden.append(s(i) - s(j))
            num = num * (s(i).scale(t) - s(j).scale(q))
            fden.append(s(i) - s(j).scale(q))
        for j in range(N):
            if j == i:
                continue
            num = num * (one.scale(q) - (s(i) * s(j)).scale(t))
            fden.append(one.scale(q) - s(i) * s(j))
            num = num * (one - (s(i) * s(j)).scale(Fraction(1, 1) / t))
            fden.append(one - s(i) * s(j))
        terms[shift_key([-F1 if k == i else F0 for k in range(N)])] = \
            RationalFunction.from_factors(num, fden)
    const = varphi_const(star, N, domain) * (Fraction(1, 1) / (_sigma_of(star, domain) * t ** (N - 1)))
    if not const.is_zero():
        terms[(0,) * N] = const
    return DifferenceOperator(nv, domain, terms, "L", nx=N)


def varphi_const(params, N: int, domain: ScalarDomain) -> RationalFunction:
    """The additive part of the first eigenvalue operator at the given
    parameters, as a function of the variables (used with the duals for the
    Pieri operator)."""
    nv = N
    one = MultiLaurent.const(nv, F1)
    t, q = domain.t, domain.q
    qh = domain.q_pow(HALF)
    total = None
    for eps in (1, -1):
        pref = Fraction(1, 2) / ((1 - t) * (1 - t / q))
        for u in params:
            pref = pref * (1 - Fraction(eps) * Fraction(u) / qh)
        prod = RationalFunction.const(nv, F1)
        for i in range(N):
            xi = MultiLaurent.var(nv, i)
            xinv = MultiLaurent.var(nv, i, -1)
            prod = prod * RationalFunction.from_factors(
                (one - xi.scale(Fraction(eps) * t / qh)) * (one - xinv.scale(Fraction(eps) * t / qh)),
                [one - xi.scale(Fraction(eps) / qh), one - xinv.scale(Fraction(eps) / qh)])
        term = (prod - RationalFunction.const(nv, t ** N)) * pref
        total = term if total is None else total + term
    return total


def varphi_symbolic(env: OpEnv) -> RationalFunction:
    """Same additive part over a symbolic environment (for identities like
    its vanishing when the last two parameters are +-q^(1/2))."""
    nv = env.nvars
    one = env.one()
    qh = _sqrt_ml(env, env.qv)
    qhinv = qh ** (-1)
    total = None
    for eps in (1, -1):
        pref_num = one.scale(HALF)
        for u in env.params:
            pref_num = pref_num * (one - u * qhinv.scale(Fraction(eps)))
        p = RationalFunction.from_factors(
            pref_num, [one - env.tv, one - env.tv * env.qv ** (-1)])
        prod = RationalFunction.const(nv, F1)
        for i in range(env.N):
            xi = env.x(i)
            xinv = env.x(i, -1)
            prod = prod * RationalFunction.from_factors(
                (one - env.tv * xi * qhinv.scale(Fraction(eps))) *
                (one - env.tv * xinv * qhinv.scale(Fraction(eps))),
                [one - xi * qhinv.scale(Fraction(eps)),
                 one - xinv * qhinv.scale(Fraction(eps))])
        tN = env.one()
        for _ in range(env.N):
            tN = tN * env.tv
        term = (prod - RationalFunction.of(tN)) * p
        total = term if total is None else total + term
    return total


def _sqrt_ml(env: OpEnv, val: MultiLaurent) -> MultiLaurent:
    from .koornops import _sqrt_value
    return _sqrt_value(env, val)


# ---------------------------------------------------------------------------
# the conjugation route: Delta-cocycles


def _delta_factor_list_pairfix(star, N: int, q, t):
    """Pair factors carry the 1/t companion; returns the full factored
    Delta: prod_i (q/s_i^2)/(prod_u q/(u s_i)) * prod_{i<j,e} (q s_j^e/s_i)/(q s_j^e/(t s_i))."""
    out = []
    for i in range(N):
        out.append((q, {i: -2}, 1))
        for u in star:
            out.append((q / Fraction(u), {i: -1}, -1))
    for i in range(N):
        for j in range(i + 1, N):
            for e in (1, -1):
                out.append((q, {j: e, i: -1}, 1))
                out.append((q / t, {j: e, i: -1}, -1))
    return out


def delta_cocycle(star, N: int, domain: ScalarDomain, v) -> RationalFunction:
    """Delta(q^v s) / Delta(s) as an exact rational function: every
    Pochhammer factor telescopes by the integer shift v . exponent."""
    q, t = domain.q, domain.t
    nv = N
    out = RationalFunction.const(nv, F1)
    for coeff, exps, sign in _delta_factor_list_pairfix(star, N, q, t):
        m = sum(int(v[i]) * e for i, e in exps.items())
        if m == 0:
            continue
        base = MultiLaurent.monomial(nv, exps, coeff)
        if m > 0:
            # (A;q)_inf -> (q^m A;q)_inf removes the first m factors
            piece = RationalFunction.of(pochhammer_fin(base, q, m))
            out = out * (piece if sign > 0 else piece.inv())
        else:
            piece = RationalFunction.of(pochhammer_fin(base.scale(q ** m), q, -m))
            out = out * (piece.inv() if sign > 0 else piece)
    return out.inv()


def h1_conjugation(star, N: int, domain: ScalarDomain) -> DifferenceOperator:
    """The first Pieri operator built by conjugating the dual first
    eigenvalue operator with the weight Delta and the leading normalization."""
    a_star = Fraction(star[0])
    # dual of the dual returns the original a-parameter; the normalizer uses
    # the original a = sigma of the starred side
    env = OpEnv.generic_rational(N, domain, star, _sigma_of(star, domain))
    theta = _sigma_of(star, domain) * domain.t ** (N - 1)
    _ = a_star
    terms = {}
    for i in range(N):
        for e in (1, -1):
            phi = koorn_phi(env, i, e)
            v = [0] * N
            v[i] = e
            coc = delta_cocycle(star, N, domain, v)
            # the translation-conjugation contributes (a t^{N-i})^{-e} with
            # a the *original* parameter: a = sigma(star)
            pref = Fraction(1, 1) / (theta * (_sigma_of(star, domain) * domain.t ** (N - 1 - i)) ** e)
            terms[shift_key([F1 * e if k == i else F0 for k in range(N)])] = \
                (phi * coc) * pref
    const = varphi_const(star, N, domain) * (Fraction(1, 1) / theta)
    if not const.is_zero():
        terms[(0,) * N] = const
    return DifferenceOperator(N, domain, terms, "L", nx=N)


def _sigma_of(star, domain: ScalarDomain) -> Fraction:
    from .macpoly import _sqrt_frac
    a, b, c, d = (Fraction(x) for x in star)
    return _sqrt_frac(a * b * c * d / domain.q)


# ---------------------------------------------------------------------------
# index-side action and Pieri expansion


def index_action(op: DifferenceOperator, lam, eval_coeff):
    """Group the operator terms by shift vector and evaluate the scalar
    coefficients with ``eval_coeff(rf) -> value``; returns
    {shift tuple: value}."""
    from .xop import key_shift
    out = {}
    for k, c in op.terms.items():
        val = eval_coeff(c)
        sh = key_shift(k)
        if sh in out:
            out[sh] = out[sh] + val
        else:
            out[sh] = val
    return out


def eval_at_lambda_finite(rd: RootData, lam, domain: ScalarDomain, nvars: int):
    """Evaluator for s-variable coefficients at s = q^lam t^rho."""
    def ev(rf: RationalFunction):
        den = 1
        from math import gcd
        for f in [rf.num] + list(rf.den_factors()):
            den = den * f.denom // gcd(den, f.denom)
        roots = [domain.q_pow(Fraction(lam[i]) / den) * domain.t_pow(Fraction(rd.rho[i]) / den)
                 for i in range(rd.N)]
        from .laurent import _subs_scaled
        return _subs_scaled(rf, roots, den)
    return ev


def eval_at_lambda_formal(lam, nvars: int, q_slot: int):
    """Evaluator for Lambda-variable coefficients at Lambda = q^lam (formal
    q kept as the exponent slot)."""
    def ev(rf: RationalFunction):
        den = 1
        from math import gcd
        for f in [rf.num] + list(rf.den_factors()):
            den = den * f.denom // gcd(den, f.denom)
        roots = []
        for i in range(nvars):
            if i == q_slot:
                roots.append(None)
            elif i < len(lam):
                roots.append(MultiLaurent.monomial(nvars, {q_slot: Fraction(lam[i]) / den}, F1))
            else:
                roots.append(None)
        from .laurent import _subs_scaled
        return _subs_scaled(rf, roots, den)
    return ev


# ---------------------------------------------------------------------------
# machine-derived t -> infinity limits of the explicit first Pieri operator


class _H1Limit:
    """Builds the limit of the explicit first Pieri operator at the family
    specialization, coefficient by coefficient, via exact tau-expansion."""

    def __init__(self, rd: RootData):
        self.rd = rd
        self.N = rd.N
        self.al = LambdaAlgebra(rd.N)
        self.star = dual_params(rd.params)
        self.a_param = rd.params[0]

    def sfac(self, terms) -> TauPoly:
        """A linear combination of s-monomials as a TauPoly over the Lambda
        ring; terms: (ParamMono-or-None coeff, extra (sign, qe, te), s_exps)."""
        al = self.al
        rho = self.rd.rho
        out: dict = {}
        for coeff, extra, sexps in terms:
            sign, qe, te = extra
            if coeff is not None:
                sign *= coeff.sign
                qe = qe + coeff.qe
                te = te + coeff.te
            texp = Fraction(te)
            exps = {}
            for i, e in sexps.items():
                texp += Fraction(rho[i]) * e
                exps[i] = exps.get(i, F0) + Fraction(e)
            if qe:
                exps[al.q_slot] = Fraction(qe)
            ml = MultiLaurent.monomial(al.nvars, exps, Fraction(sign))
            key = int(-2 * texp)
            if Fraction(-2 * texp).denominator != 1:
                raise ValueError("t-exponent off the half-integer lattice")
            out[key] = out.get(key, MultiLaurent.zero(al.nvars)) + ml
        return TauPoly(al.nvars, out)

    def raising(self, i: int):
        P = (None, (1, F0, F0), {})
        facs = []
        for j in range(i):
            facs.append((self.sfac([(None, (1, F0, F0), {i: 1}),
                                    (None, (-1, F0, -1), {j: 1})]), 1))
            facs.append((self.sfac([(None, (1, F0, F0), {i: 1}),
                                    (None, (-1, F0, F0), {j: 1})]), -1))
            facs.append((self.sfac([(None, (1, 1, F0), {i: 1}),
                                    (None, (-1, F0, 1), {j: 1})]), 1))
            facs.append((self.sfac([(None, (1, 1, F0), {i: 1}),
                                    (None, (-1, F0, F0), {j: 1})]), -1))
        _ = P
        return facs

    def lowering(self, i: int):
        facs = []
        for u in self.star:
            uinv = ParamMono(u.sign, -u.qe, -u.te)
            facs.append((self.sfac([(None, (1, F0, F0), {}),
                                    (uinv, (-1, F0, F0), {i: 1})]), 1))
            facs.append((self.sfac([(None, (1, 1, F0), {}),
                                    (u, (-1, F0, F0), {i: 1})]), 1))
        for qe in (F0, F1, F1, Fraction(2)):
            facs.append((self.sfac([(None, (1, qe, F0), {}),
                                    (None, (-1, F0, F0), {i: 2})]), -1))
        for j in range(i + 1, self.N):
            facs.append((self.sfac([(None, (1, F0, -1), {i: 1}),
                                    (None, (-1, F0, F0), {j: 1})]), 1))
            facs.append((self.sfac([(None, (1, F0, F0), {i: 1}),
                                    (None, (-1, F0, F0), {j: 1})]), -1))
            facs.append((self.sfac([(None, (1, F0, 1), {i: 1}),
                                    (None, (-1, 1, F0), {j: 1})]), 1))
            facs.append((self.sfac([(None, (1, F0, F0), {i: 1}),
                                    (None, (-1, 1, F0), {j: 1})]), -1))
        for j in range(self.N):
            if j == i:
                continue
            facs.append((self.sfac([(None, (1, 1, F0), {}),
                                    (None, (-1, F0, 1), {i: 1, j: 1})]), 1))
            facs.append((self.sfac([(None, (1, 1, F0), {}),
                                    (None, (-1, F0, F0), {i: 1, j: 1})]), -1))
            facs.append((self.sfac([(None, (1, F0, F0), {}),
                                    (None, (-1, F0, -1), {i: 1, j: 1})]), 1))
            facs.append((self.sfac([(None, (1, F0, F0), {}),
                                    (None, (-1, F0, F0), {i: 1, j: 1})]), -1))
        return facs

    def constant(self) -> RationalFunction:
        """The additive part: phi^{(star)}(s)/(a t^{N-1}), as an
        eps-symmetrized tau-limit."""
        al = self.al
        total = None
        for eps in (1, -1):
            facs = [(self.sfac([(self.a_param, (1, F0, Fraction(self.N - 1)), {})]), -1),
                    (self.sfac([(None, (1, F0, F0), {}), (None, (-1, F0, 1), {})]), -1),
                    (self.sfac([(None, (1, F0, F0), {}), (None, (-1, -1, 1), {})]), -1),
                    (self.sfac([(None, (Fraction(1, 2), F0, F0), {})]), 1)]
            for u in self.star:
                facs.append((self.sfac([(None, (1, F0, F0), {}),
                                        (u, (-eps, -HALF, F0), {})]), 1))
            num_facs = []
            den_facs = []
            for i in range(self.N):
                for e in (1, -1):
                    num_facs.append(self.sfac([(None, (1, F0, F0), {}),
                                               (None, (-eps, -HALF, 1), {i: e})]))
                    den_facs.append(self.sfac([(None, (1, F0, F0), {}),
                                               (None, (-eps, -HALF, F0), {i: e})]))
            hi_guard = 8 * self.N + 16
            num = TauPoly.const(al.nvars, F1)
            for f in num_facs:
                num = num.mul_trunc(f, hi_guard)
            den = TauPoly.const(al.nvars, F1)
            for f in den_facs:
                den = den.mul_trunc(f, hi_guard)
            tN = TauPoly(al.nvars, {-2 * self.N: MultiLaurent.const(al.nvars, F1)})
            bracket = num - den.mul_trunc(tN, hi_guard)
            slices = _mixed_tau_slices(al.nvars,
                                       facs + [(bracket, 1)] + [(f, -1) for f in den_facs])
            if total is None:
                total = slices
            else:
                for k, v in slices.items():
                    total[k] = total.get(k, RationalFunction.const(al.nvars, F0)) + v
        # individual branches may diverge; the symmetrized sum must not
        for k, v in total.items():
            if k < 0 and not v.is_zero():
                raise AssertionError("divergent limit in the Pieri constant")
        return total.get(0, RationalFunction.const(al.nvars, F0))

    def coefficient(self, i: int, direction: int) -> RationalFunction:
        facs = self.raising(i) if direction > 0 else self.lowering(i)
        if not facs:
            return RationalFunction.const(self.al.nvars, F1)
        return _mixed_tau_rf(self.al.nvars, facs)

    def operator(self) -> DifferenceOperator:
        al = self.al
        terms = []
        for i in range(self.N):
            terms.append((al.e_vec(i), self.coefficient(i, +1)))
            low = self.coefficient(i, -1)
            if not low.is_zero():
                terms.append((al.e_vec(i, -1), low))
        const = self.constant()
        if not const.is_zero():
            terms.append(([F0] * self.N, const))
        return al.op(terms)


def _mixed_tau_slices(nvars: int, facs) -> dict:
    """Exact tau-slices (grades <= 0) of a product of factors, routing
    t-free factors (single slice at tau^0) into honest rational factors and
    everything else through the tau engine."""
    taus = []
    free_num = []
    free_den = []
    for f, sign in facs:
        if f.is_zero():
            if sign == 1:
                return {}
            raise ZeroDivisionError("zero factor inverted in tau limit")
        if list(f.terms.keys()) == [0]:
            (free_num if sign == 1 else free_den).append(f.terms[0])
        else:
            taus.append((f, sign))
    if taus:
        slices = tau_limit(taus, hi=0)
    else:
        slices = {0: MultiLaurent.const(nvars, F1)}
    out = {}
    for k, head in slices.items():
        for f in free_num:
            head = head * f
        out[k] = RationalFunction.from_factors(head, free_den)
    return out


def _mixed_tau_rf(nvars: int, facs) -> RationalFunction:
    """Exact limit (the tau^0 slice) of a product; asserts convergence."""
    slices = _mixed_tau_slices(nvars, facs)
    for k, v in slices.items():
        if k < 0 and not v.is_zero():
            raise AssertionError("divergent tau limit")
    return slices.get(0, RationalFunction.const(nvars, F0))


def h1_limit_derived(tag: str, N: int) -> DifferenceOperator:
    """The limit of the explicit first Pieri operator, derived exactly; it
    must coincide with the displayed Toda Hamiltonian."""
    return _H1Limit(root_data(tag, N)).operator()


class WindowTooSmall(ArithmeticError):
    pass


def pieri_expand(fam: PolynomialFamily, m: int, lam, lam_max, seed: int = 0) -> dict:
    """Coefficients c_nu with ehat_m(x) P_lam = sum c_nu P_nu, computed by
    linear algebra in the orbit-sum basis inside the window of lam_max."""
    from .laurent import ehat_sym, elementary_sym
    from .rootdata import dominance_window
    from .xop import linsolve, _fzero
    lam = tuple(Fraction(x) for x in lam)
    window = fam.window(tuple(Fraction(x) for x in lam_max))
    N = fam.N
    nvars = fam.env.nvars if hasattr(fam.env, "nvars") else N
    xs = [MultiLaurent.var(nvars, i) for i in range(N)]
    if fam.rd is not None and fam.rd.tag == "A1":
        mult = elementary_sym(m, xs)
    else:
        mult = ehat_sym(m, xs)
    target = fam.expand(lam) * mult
    # solve for the coefficients over the P_nu in the window
    from .xop import SymmetricPolynomial
    try:
        sp = SymmetricPolynomial.from_laurent(target, fam.rtype, N)
    except ValueError as e:
        raise WindowTooSmall(str(e))
    basis = {}
    for nu in window:
        basis[nu] = fam.poly(nu)
    remaining = dict(sp.coeffs)
    out = {}
    for nu in sorted(window, key=lambda v: tuple(v), reverse=True):
        c = remaining.get(nu)
        if c is None or _fzero(c):
            continue
        out[nu] = c
        for mu, cc in basis[nu].coeffs.items():
            cur = remaining.get(mu, F0)
            upd = cur - c * cc
            if _fzero(upd):
                remaining.pop(mu, None)
            else:
                remaining[mu] = upd
    if remaining:
        raise WindowTooSmall(f"window too small: residual on {sorted(remaining)}")
    return out
