"""Constructors for the finite-t difference operators: Koornwinder, van
Diejen, Koornwinder-Macdonald, Rains, the minuscule-weight operators, and
the per-family selections, together with their eigenvalue data.

The nested-subset combinatorics is generated once as term blueprints; two
backends instantiate them, either at finite t (specialized or symbolic
parameters) or as exact t -> infinity limits via the tau-expansion engine.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .laurent import (MultiLaurent, RationalFunction, elementary_sym,
                      complete_sym, ehat_sym, ehat_b_sym, ehat_d_sym)
from .rootdata import ParamMono, RootData, root_data, star_scale, _positive_roots
from .scalars import QExp, ScalarDomain
from .series import TauPoly, tau_limit
from .xop import DifferenceOperator, weyl_symmetrize

F0 = Fraction(0)
F1 = Fraction(1)
HALF = Fraction(1, 2)


class SymbolicQT:
    """Shift-factor provider when q^(1/2), t^(1/2) are honest variables of
    the coefficient ring (slots qh_slot, th_slot)."""

    mode = "symbolic"

    def __init__(self, nvars: int, qh_slot: int, th_slot: int):
        self.nvars = nvars
        self.qh_slot = qh_slot
        self.th_slot = th_slot

    def slot_exponent(self, r):
        return self.qh_slot, 2 * Fraction(r)

    def q_pow(self, r):
        return MultiLaurent.monomial(self.nvars, {self.qh_slot: 2 * Fraction(r)}, F1)

    def t_pow(self, r):
        return MultiLaurent.monomial(self.nvars, {self.th_slot: 2 * Fraction(r)}, F1)


class OpEnv:
    """Variable layout and parameter values for finite-t constructions."""

    def __init__(self, N: int, nvars: int, domain, params, qv, tv, sigma2, sigma=None):
        self.N = N
        self.nvars = nvars
        self.domain = domain
        self.params = params          # list of 4 MultiLaurent values or None
        self.qv = qv                  # MultiLaurent
        self.tv = tv
        self.sigma2 = sigma2          # MultiLaurent: abcd/q
        self.sigma = sigma            # MultiLaurent square root when available

    # -- constructors ------------------------------------------------------
    @staticmethod
    def from_family(rd: RootData, domain: ScalarDomain) -> "OpEnv":
        N = rd.N
        c = lambda v: MultiLaurent.const(N, v)  # noqa: E731
        params = [c(p.value(domain)) for p in rd.params]
        sig = c(domain.t_pow(rd.xi))
        return OpEnv(N, N, domain, params, c(domain.q), c(domain.t),
                     sig * sig, sig)

    @staticmethod
    def type_a(N: int, domain: ScalarDomain) -> "OpEnv":
        c = lambda v: MultiLaurent.const(N, v)  # noqa: E731
        return OpEnv(N, N, domain, None, c(domain.q), c(domain.t), None, None)

    @staticmethod
    def generic_rational(N: int, domain: ScalarDomain, abcd, sigma: Fraction) -> "OpEnv":
        c = lambda v: MultiLaurent.const(N, Fraction(v))  # noqa: E731
        a, b, cc, d = (Fraction(v) for v in abcd)
        if sigma * sigma != a * b * cc * d / domain.q:
            raise ValueError("sigma^2 must equal abcd/q")
        return OpEnv(N, N, domain, [c(a), c(b), c(cc), c(d)], c(domain.q),
                     c(domain.t), c(sigma * sigma), c(sigma))

    @staticmethod
    def generic_symbolic(N: int) -> "OpEnv":
        """Variables: x_1..x_N, a, b, c, d, qh (= q^(1/2)), th (= t^(1/2))."""
        nv = N + 6
        var = lambda i, e=1: MultiLaurent.monomial(nv, {i: Fraction(e)}, F1)  # noqa: E731
        a, b, c, d = (var(N + i) for i in range(4))
        qv, tv = var(N + 4, 2), var(N + 5, 2)
        dom = SymbolicQT(nv, N + 4, N + 5)
        sigma2 = a * b * c * d * var(N + 4, -2)
        return OpEnv(N, nv, dom, [a, b, c, d], qv, tv, sigma2, None)

    # -- coefficient-ring helpers ---------------------------------------------
    def x(self, i: int, e=1) -> MultiLaurent:
        return MultiLaurent.monomial(self.nvars, {i: Fraction(e)}, F1)

    def one(self) -> MultiLaurent:
        return MultiLaurent.const(self.nvars, F1)

    def const(self, v) -> MultiLaurent:
        return MultiLaurent.const(self.nvars, v)

    def tq(self, te, qe) -> MultiLaurent:
        if isinstance(self.domain, SymbolicQT):
            return MultiLaurent.monomial(self.nvars,
                                         {self.domain.qh_slot: 2 * Fraction(qe),
                                          self.domain.th_slot: 2 * Fraction(te)}, F1)
        return self.const(self.domain.q_pow(qe) * self.domain.t_pow(te))


# ---------------------------------------------------------------------------
# blueprints: atoms describing one multiplicative factor of a term


def _chains(J: tuple):
    """All chains emptyset != J_1 < J_2 < ... < J_s = J, as tuples of parts
    (J_1, J_2 \\ J_1, ...)."""
    J = tuple(J)
    if not J:
        return
    items = list(J)

    def rec(remaining):
        if not remaining:
            yield ()
            return
        rem = list(remaining)
        n = len(rem)
        for mask in range(1, 1 << n):
            part = tuple(rem[i] for i in range(n) if (mask >> i) & 1)
            rest = tuple(rem[i] for i in range(n) if not (mask >> i) & 1)
            for tail in rec(rest):
                yield (part,) + tail

    yield from rec(items)


def vd_part_atoms(part, eps_dict, K):
    """Atoms of one V factor: subset `part` with signs, complement K."""
    atoms = []
    for i in part:
        atoms.append(("A", i, eps_dict[i]))
    for i, j in itertools.combinations(sorted(part), 2):
        atoms.append(("JJ", i, j, eps_dict[i], eps_dict[j]))
    for i in part:
        for j in K:
            atoms.append(("JK", i, j, eps_dict[i]))
    return atoms


def vd_part_degree(part_size: int, K_size: int, xi: Fraction) -> Fraction:
    """Exact t-degree of one V factor: every selected index carries the
    four-parameter factor (degree 2 xi), every inner pair and every
    crossing pair contributes degree 2."""
    return 2 * xi * part_size + Fraction(part_size * (part_size - 1)) \
        + 2 * Fraction(part_size * K_size)


def van_diejen_chain_terms(N: int, m: int):
    """Yield (shift_dict, sign, [(part, eps_part, K), ...]) per chain."""
    if not 1 <= m <= N:
        raise ValueError("order out of range")
    for J in itertools.combinations(range(N), m):
        for eps in itertools.product((1, -1), repeat=m):
            ed = dict(zip(J, eps))
            for chain in _chains(J):
                parts = []
                placed = []
                for part in chain:
                    inside = set(placed) | set(part)
                    K = tuple(j for j in range(N) if j not in inside)
                    parts.append((part, tuple(ed[i] for i in part), K))
                    placed.extend(part)
                s = len(chain)
                sign = 1 if (s - 1) % 2 == 0 else -1
                shift = {i: ed[i] for i in chain[0]}
                yield shift, sign, parts


def van_diejen_blueprints(N: int, m: int):
    """Yield (shift_dict, sign, atoms) for the order-m van Diejen operator;
    each (J, eps, chain) produces a shifted and an unshifted subterm."""
    for shift, sign, parts in van_diejen_chain_terms(N, m):
        atoms = []
        for part, eps_part, K in parts:
            atoms.extend(vd_part_atoms(part, dict(zip(part, eps_part)), K))
        yield shift, sign, atoms
        yield {}, -sign, atoms


def rains_blueprints(N: int):
    """Yield (shift_dict, atoms) for the Rains half-shift operator; the
    diagonal (parameter) factors are added by the instantiator."""
    for eps in itertools.product((1, -1), repeat=N):
        atoms = [("RD", i, eps[i]) for i in range(N)]
        for i, j in itertools.combinations(range(N), 2):
            atoms.append(("RP", i, j, eps[i], eps[j]))
        yield {i: Fraction(eps[i], 2) for i in range(N)}, atoms


# ---------------------------------------------------------------------------
# finite-t instantiation


def _finite_atom_factored(env: OpEnv, atom, rains_uv=None):
    """Return (numerator factors, denominator factors) for the atom."""
    kind = atom[0]
    one = env.one()
    if kind == "A":
        _, i, e = atom
        xi = env.x(i, e)
        xi2 = env.x(i, 2 * e)
        nums = [one - p * xi for p in env.params]
        return nums, [one - xi2, one - env.qv * xi2]
    if kind == "JJ":
        _, i, j, ei, ej = atom
        w = env.x(i, ei) * env.x(j, ej)
        return [one - env.tv * w, one - env.qv * env.tv * w], [one - w, one - env.qv * w]
    if kind == "JK":
        _, i, j, ei = atom
        xi, xj = env.x(i, ei), env.x(j)
        return [one - env.tv * xi * xj, env.tv * xi - xj], [one - xi * xj, xi - xj]
    if kind == "RD":
        _, i, e = atom
        u, v = rains_uv
        xi = env.x(i, e)
        return [one - u * xi, one - v * xi], [one - env.x(i, 2 * e)]
    if kind == "RP":
        _, i, j, ei, ej = atom
        w = env.x(i, ei) * env.x(j, ej)
        return [one - env.tv * w], [one - w]
    if kind == "MIN":
        _, mono = atom
        xa = MultiLaurent.monomial(env.nvars, mono, F1)
        return [one - env.tv * xa], [one - xa]
    raise ValueError(atom)


def _assemble_finite(env: OpEnv, pieces, varset="x") -> DifferenceOperator:
    """pieces: iterable of (shift_dict, scalar MultiLaurent, atoms, rains_uv)."""
    terms: dict = {}
    from .xop import shift_key
    for shift, scalar, atoms, rains_uv in pieces:
        num = scalar
        fden = []
        for atom in atoms:
            n, d = _finite_atom_factored(env, atom, rains_uv)
            for nf in n:
                num = num * nf
            fden.extend(d)
        v = [F0] * env.N
        for i, e in shift.items():
            v[i] = Fraction(e)
        key = shift_key(v)
        rf = RationalFunction.from_factors(num, fden)
        if key in terms:
            s = terms[key] + rf
            if s.is_zero():
                del terms[key]
            else:
                terms[key] = s
        else:
            terms[key] = rf
    return DifferenceOperator(env.nvars, env.domain, terms, varset, nx=env.N)


def koornwinder_op(env: OpEnv) -> DifferenceOperator:
    """The first-order operator sum_{i,eps} Phi_{i,eps} (Gamma_i^eps - 1)."""
    from .laurent import rf_sum
    from .xop import shift_key
    N = env.N
    terms: dict = {}
    for i in range(N):
        for e in (1, -1):
            phi = koorn_phi(env, i, e)
            terms[shift_key([Fraction(e) if j == i else F0 for j in range(N)])] = phi
    const = rf_sum([-c for c in terms.values()])
    if not const.is_zero():
        terms[(0,) * N] = const
    return DifferenceOperator(env.nvars, env.domain, terms, "x", nx=N)


def koorn_phi(env: OpEnv, i: int, e: int) -> RationalFunction:
    atoms = [("A", i, e)] + [("JK", i, j, e) for j in range(env.N) if j != i]
    num = env.one()
    fden = []
    for atom in atoms:
        n, d = _finite_atom_factored(env, atom)
        for nf in n:
            num = num * nf
        fden.extend(d)
    return RationalFunction.from_factors(num, fden)


def _vd_part_rf(env: OpEnv, part, eps_part, K) -> RationalFunction:
    cache = getattr(env, "_vcache", None)
    if cache is None:
        cache = env._vcache = {}
    key = (part, eps_part, K)
    if key not in cache:
        num = env.one()
        fden = []
        for atom in vd_part_atoms(part, dict(zip(part, eps_part)), K):
            n, d = _finite_atom_factored(env, atom)
            for nf in n:
                num = num * nf
            fden.extend(d)
        cache[key] = RationalFunction.from_factors(num, fden)
    return cache[key]


def van_diejen_op(env: OpEnv, m: int) -> DifferenceOperator:
    if m == 0:
        return DifferenceOperator.identity(env.nvars, env.domain, "x", env.N)
    from .laurent import rf_sum
    from .xop import shift_key
    buckets: dict = {}
    for shift, sign, parts in van_diejen_chain_terms(env.N, m):
        rf = RationalFunction.const(env.nvars, Fraction(sign))
        for p in parts:
            rf = rf * _vd_part_rf(env, *p)
        v = [F0] * env.N
        for i, e in shift.items():
            v[i] = Fraction(e)
        buckets.setdefault(shift_key(v), []).append(rf)
    terms = {}
    for k, parts_ in buckets.items():
        s = rf_sum(parts_)
        if not s.is_zero():
            terms[k] = s
    # the operator is sum_v c_v (Gamma^v - 1): one reduced pass for the
    # constant coefficient
    const = rf_sum([-c for c in terms.values()])
    if not const.is_zero():
        terms[(0,) * env.N] = const
    return DifferenceOperator(env.nvars, env.domain, terms, "x", nx=env.N)


def _sigma_t_poly(j: int, k: int):
    """Coefficient d_j^{(k)} as a Laurent polynomial in (sigma, t):
    sigma^j t^{j(k-(j+1)/2)} ehat_j({sigma t^{k-i}}).  Returned as a dict
    {(sigma_deg, t_exp): Fraction}; sigma degrees are all even."""
    # build ehat_j generating coefficients over the variables u_i = sigma t^{k-i}
    coeffs = [{} for _ in range(j + 1)]
    coeffs[0] = {(0, F0): F1}

    def mul_add(dst, src, sdeg, texp):
        for (s, t), c in src.items():
            key = (s + sdeg, t + texp)
            dst[key] = dst.get(key, F0) + c

    for i in range(1, k + 1):
        new = [dict(c) for c in coeffs]
        for deg in range(j, 0, -1):
            mul_add(new[deg], coeffs[deg - 1], 1, Fraction(k - i))   # z * u_i
            mul_add(new[deg], coeffs[deg - 1], -1, Fraction(i - k))  # z / u_i
            if deg >= 2:
                mul_add(new[deg], coeffs[deg - 2], 0, F0)            # z^2
        coeffs = [{kk: vv for kk, vv in d.items() if vv} for d in new]
    out = {}
    base_t = Fraction(j) * (Fraction(k) - Fraction(j + 1, 2))
    for (s, t), c in coeffs[j].items():
        sdeg = s + j
        if sdeg % 2:
            raise AssertionError("sigma parity violated")
        key = (sdeg // 2, t + base_t)
        out[key] = out.get(key, F0) + c
    return {kk: vv for kk, vv in out.items() if vv}


def d_coeff(env: OpEnv, j: int, k: int) -> MultiLaurent:
    """d_j^{(k)} as a value in the coefficient ring (uses sigma^2 only)."""
    out = MultiLaurent.zero(env.nvars)
    for (s2, te), c in _sigma_t_poly(j, k).items():
        term = env.const(c) * env.tq(te, F0)
        for _ in range(abs(s2)):
            term = term * (env.sigma2 if s2 > 0 else env.sigma2 ** (-1))
        out = out + term
    return out


def km_op(env: OpEnv, m: int) -> DifferenceOperator:
    """Koornwinder-Macdonald operator: sum_j d_j^{(N-m+j)} V_{m-j}."""
    if not 1 <= m <= env.N:
        raise ValueError("order out of range")
    op = DifferenceOperator.zero(env.nvars, env.domain, "x", env.N)
    for j in range(m + 1):
        dj = d_coeff(env, j, env.N - m + j)
        if dj.is_zero():
            continue
        op = op + van_diejen_op(env, m - j).scale(RationalFunction.of(dj))
    return op


def rains_op(env: OpEnv, u: MultiLaurent, v: MultiLaurent) -> DifferenceOperator:
    pieces = [(shift, env.one(), atoms, (u, v)) for shift, atoms in rains_blueprints(env.N)]
    return _assemble_finite(env, pieces)


def rains_hat_op(env: OpEnv) -> DifferenceOperator:
    """R^(a,b) R^(q^{-1/2} c, q^{-1/2} d), the factored N-th order operator."""
    a, b, c, d = env.params
    qh = _sqrt_value(env, env.qv)
    return rains_op(env, a, b) * rains_op(env, c * qh ** (-1), d * qh ** (-1))


def _sqrt_value(env: OpEnv, val: MultiLaurent):
    """Square root of a monomial value (used for q^{1/2} factors)."""
    (key, c), = val.terms.items()
    exps = {i: Fraction(e, 2 * val.denom) for i, e in enumerate(key) if e}
    if isinstance(c, QExp):
        if not (c.is_laurent() and c.num.is_monomial()):
            raise ValueError("square root of non-monomial")
        (e, cc), = c.num.terms.items()
        if cc != 1:
            raise ValueError("square root of non-unit coefficient")
        cs = QExp.qpow(e / 2)
    else:
        cf = Fraction(c)
        num_r = _frac_sqrt(cf)
        cs = num_r
    return MultiLaurent.monomial(env.nvars, exps, cs)


def _frac_sqrt(x: Fraction) -> Fraction:
    from math import isqrt
    if x < 0:
        raise ValueError("negative square root")
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    if a * a != x.numerator or b * b != x.denominator:
        raise ValueError("not a perfect rational square")
    return Fraction(a, b)


def miniscule_weight(rd: RootData, slot: int):
    """The minuscule coweight driving the symmetrized operator; for the C
    family the relevant weight is the half-spin vector of the dual side."""
    if rd.tag == "C1" and slot == rd.N:
        return tuple(HALF for _ in range(rd.N))
    return rd.weight(slot)


def miniscule_phi(env: OpEnv, rd: RootData, slot: int) -> RationalFunction:
    pi = miniscule_weight(rd, slot)
    num = env.one()
    den = []
    for alpha in _positive_roots(rd.rtype, rd.N):
        astar = star_scale(rd.tag, alpha)
        pair = sum((p * a for p, a in zip(pi, astar)), F0)
        if pair == 1:
            mono = {i: a for i, a in enumerate(alpha) if a}
            n, d = _finite_atom_factored(env, ("MIN", mono))
            for nf in n:
                num = num * nf
            den.extend(d)
    return RationalFunction.from_factors(num, den)


def miniscule_op(env: OpEnv, rd: RootData, slot: int) -> DifferenceOperator:
    if slot not in _miniscule_slots(rd):
        raise ValueError(f"weight {slot} is not miniscule for {rd.tag}")
    phi = miniscule_phi(env, rd, slot)
    wtype = "D" if rd.rtype == "D" else "B"
    return weyl_symmetrize(phi, miniscule_weight(rd, slot), wtype, env.nvars, env.domain, nx=env.N)


def _miniscule_slots(rd: RootData) -> set:
    return {"D1": {1, rd.N - 1, rd.N}, "B1": {1}, "C1": {rd.N},
            "A2odd": {1}, "D2": {rd.N}}.get(rd.tag, set())


def g_macdonald_op(env: OpEnv, rd: RootData, m: int) -> DifferenceOperator:
    """The m-th operator of the family: Koornwinder-Macdonald for
    m <= N_g, the minuscule-weight operators for the exceptional slots."""
    if not 1 <= m <= rd.N:
        raise ValueError("slot out of range")
    if m <= rd.N_g:
        return km_op(env, m)
    return miniscule_op(env, rd, m)


# ---------------------------------------------------------------------------
# type A operators


def macdonald_a_op(env: OpEnv, a: int) -> DifferenceOperator:
    """Type A operator: sum_{|I|=a} prod_{i in I, j notin I}
    (t x_i - x_j)/(x_i - x_j) Gamma_I."""
    N = env.N
    if not 1 <= a <= N:
        raise ValueError("order out of range")
    from .xop import shift_key
    out: dict = {}
    for I in itertools.combinations(range(N), a):
        num = env.one()
        den = env.one()
        for i in I:
            for j in range(N):
                if j not in I:
                    num = num * (env.tv * env.x(i) - env.x(j))
                    den = den * (env.x(i) - env.x(j))
        v = [F0] * N
        for i in I:
            v[i] = F1
        out[shift_key(v)] = RationalFunction(num, den)
    return DifferenceOperator(env.nvars, env.domain, out, "x", nx=N)


# ---------------------------------------------------------------------------
# eigenvalue data


def s_values(rd: RootData, lam, domain: ScalarDomain, half: bool = False):
    """s_i = q^{lam_i} t^{rho_i} (or their square roots with half=True)."""
    out = []
    for i in range(rd.N):
        e = Fraction(lam[i])
        te = rd.rho[i]
        if half:
            out.append(domain.q_pow(e / 2) * domain.t_pow(Fraction(te) / 2))
        else:
            out.append(domain.q_pow(e) * domain.t_pow(Fraction(te)))
    return out


def theta_norm(rd: RootData, m: int, domain: ScalarDomain):
    if m <= rd.N_g:
        return domain.t_pow(Fraction(m) * (rd.N + rd.xi - Fraction(m + 1, 2)))
    if rd.tag == "D1":
        return domain.t_pow(Fraction(rd.N * (rd.N - 1), 4))
    return domain.t_pow(Fraction(rd.N * (rd.N + 1), 4))


def ehat_star_kind(rd: RootData, m: int) -> str:
    """Which symmetric function gives the m-th eigenvalue (basis of the
    fundamental characters of R*)."""
    rt = rd.rstar_type
    if rt == "D":
        if m == rd.N:
            return "ehat_D+"
        if m == rd.N - 1:
            return "ehat_D-"
        return "ehat"
    if rt == "B" and m == rd.N:
        return "ehat_B"
    return "ehat"


def eigenvalue_finite_t(rd: RootData, m: int, lam, domain: ScalarDomain):
    """d_{lam;m} = theta_m * ehat_m^{(R*)}(s)."""
    kind = ehat_star_kind(rd, m)
    if kind == "ehat":
        val = ehat_sym(m, s_values(rd, lam, domain))
    elif kind == "ehat_B":
        val = ehat_b_sym(s_values(rd, lam, domain, half=True))
    else:
        val = ehat_d_sym(s_values(rd, lam, domain, half=True), 1 if kind == "ehat_D+" else -1)
    return theta_norm(rd, m, domain) * val


def eigenvalue_whittaker(rd: RootData, a: int, lam, domain: ScalarDomain):
    """Lambda^{omega*_a} = q^{lam . omega*_a}."""
    e = sum((Fraction(l) * w for l, w in zip(lam, rd.weight_star(a))), F0)
    return domain.q_pow(e)


def eigenvalue_a_type(N: int, a: int, lam, domain: ScalarDomain):
    """Type A: t^{-binom(a,2)} e_a(s), s_i = t^{N-i} q^{lam_i}."""
    s = [domain.q_pow(Fraction(lam[i])) * domain.t_pow(Fraction(N - 1 - i)) for i in range(N)]
    return domain.t_pow(-Fraction(a * (a - 1), 2)) * elementary_sym(a, s)


def vd_eigenvalue(N: int, sigma, m: int, lam, domain: ScalarDomain):
    """Van Diejen eigenvalue f_{lam;m} = sigma^m t^{m(N-(m+1)/2)}
    sum_j (-1)^j e_{m-j}(v) h_j(w_(m)), with s_i = sigma t^{N-i} q^{lam_i},
    v = {s_i + 1/s_i} and w_(m) = {sigma t^{N-i} + inverse}_{i >= m}."""
    one = Fraction(1)
    svals = [sigma * domain.t_pow(Fraction(N - i - 1)) * domain.q_pow(Fraction(lam[i]))
             for i in range(N)]
    v = [s + one / s for s in svals]
    w = []
    for i in range(m, N + 1):
        u = sigma * domain.t_pow(Fraction(N - i))
        w.append(u + one / u)
    theta = domain.t_pow(Fraction(m) * (Fraction(N) - Fraction(m + 1, 2)))
    tot = None
    for j in range(m + 1):
        term = elementary_sym(m - j, v) * complete_sym(j, w)
        if j % 2:
            term = -term
        tot = term if tot is None else tot + term
    return sigma ** m * theta * tot


def km_eigenvalue_generic(N: int, sigma, m: int, lam, domain: ScalarDomain):
    """d_{lam;m} = sigma^m t^{m(N-(m+1)/2)} ehat_m(s) at generic parameters."""
    svals = [sigma * domain.t_pow(Fraction(N - i - 1)) * domain.q_pow(Fraction(lam[i]))
             for i in range(N)]
    theta = domain.t_pow(Fraction(m) * (Fraction(N) - Fraction(m + 1, 2)))
    return sigma ** m * theta * ehat_sym(m, svals)


# ---------------------------------------------------------------------------
# tau-limit instantiation (q-Whittaker limits of the same blueprints)


class TauEnv:
    """Backend turning blueprints into t -> infinity limit operators.  The
    formal q is carried as an extra exponent slot (the last variable), so
    all coefficient arithmetic stays over plain rationals."""

    def __init__(self, rd: RootData):
        from .laurent import FormalQ
        self.rd = rd
        self.N = rd.N
        self.nvars = rd.N + 1
        self.q_slot = rd.N
        self.domain = FormalQ(self.nvars, self.q_slot)

    def _mono(self, exps, qe=F0, coeff=F1) -> MultiLaurent:
        d = {i: Fraction(e) for i, e in exps.items()}
        if qe:
            d[self.q_slot] = Fraction(qe)
        return MultiLaurent.monomial(self.nvars, d, coeff)

    def one(self) -> MultiLaurent:
        return MultiLaurent.const(self.nvars, F1)

    def atom_factors(self, atom, rains_uv=None):
        """Return (tau_factors [(TauPoly, +-1)], free_num [Ml], free_den [Ml])."""
        one = self.one()
        kind = atom[0]
        taus, fnum, fden = [], [], []
        if kind == "A":
            _, i, e = atom
            for p in self.rd.params:
                term = self._mono({i: e}, p.qe, Fraction(-p.sign))
                if p.te == 0:
                    fnum.append(one + term)
                else:
                    taus.append((TauPoly(self.nvars, {0: one, int(-2 * p.te): term}), 1))
            fden.append(one - self._mono({i: 2 * e}))
            fden.append(one - self._mono({i: 2 * e}, F1))
        elif kind == "JJ":
            _, i, j, ei, ej = atom
            w = {i: ei, j: ej}
            taus.append((TauPoly(self.nvars, {0: one, -2: -self._mono(w)}), 1))
            taus.append((TauPoly(self.nvars, {0: one, -2: -self._mono(w, F1)}), 1))
            fden.append(one - self._mono(w))
            fden.append(one - self._mono(w, F1))
        elif kind == "JK":
            _, i, j, ei = atom
            w = {i: ei, j: 1}
            taus.append((TauPoly(self.nvars, {0: one, -2: -self._mono(w)}), 1))
            taus.append((TauPoly(self.nvars, {0: -self._mono({j: 1}), -2: self._mono({i: ei})}), 1))
            fden.append(one - self._mono(w))
            fden.append(self._mono({i: ei}) - self._mono({j: 1}))
        elif kind == "RD":
            _, i, e = atom
            u, v = rains_uv
            for p in (u, v):
                term = self._mono({i: e}, p.qe, Fraction(-p.sign))
                if p.te == 0:
                    fnum.append(one + term)
                else:
                    taus.append((TauPoly(self.nvars, {0: one, int(-2 * p.te): term}), 1))
            fden.append(one - self._mono({i: 2 * e}))
        elif kind == "RP":
            _, i, j, ei, ej = atom
            w = {i: ei, j: ej}
            taus.append((TauPoly(self.nvars, {0: one, -2: -self._mono(w)}), 1))
            fden.append(one - self._mono(w))
        elif kind == "MIN":
            _, mono = atom
            taus.append((TauPoly(self.nvars, {0: one, -2: -self._mono(mono)}), 1))
            fden.append(one - self._mono(mono))
        else:
            raise ValueError(atom)
        return taus, fnum, fden

    def assemble(self, pieces, theta2_texp: Fraction) -> DifferenceOperator:
        """pieces: (shift_dict, {t_exp: scalar or (qe, coeff)}, atoms, uv);
        the operator limit is t^{-theta2_texp} sum_terms (theta2_texp is the
        t-exponent of the squared normalizer), taken exactly."""
        from .xop import shift_key
        terms: dict = {}
        for shift, scalar_t, atoms, rains_uv in pieces:
            taus = []
            sc_terms = {}
            for te, c in scalar_t.items():
                if isinstance(c, tuple):
                    qe, cf = c
                    ml = self._mono({}, qe, Fraction(cf))
                else:
                    ml = MultiLaurent.const(self.nvars, Fraction(c))
                key = int(-2 * te)
                sc_terms[key] = sc_terms.get(key, MultiLaurent.zero(self.nvars)) + ml
            taus.append((TauPoly(self.nvars, sc_terms), 1))
            theta2 = TauPoly(self.nvars, {int(-2 * theta2_texp): self.one()})
            taus.append((theta2, -1))
            fnum, fden = [], []
            for atom in atoms:
                t, fn, fd = self.atom_factors(atom, rains_uv)
                taus.extend(t)
                fnum.extend(fn)
                fden.extend(fd)
            slices = tau_limit(taus, hi=0)
            if any(k < 0 for k in slices):
                raise AssertionError("tau limit diverges: degree bookkeeping broken")
            if 0 not in slices:
                continue
            num = slices[0]
            for f in fnum:
                num = num * f
            v = [F0] * self.N
            for i, e in shift.items():
                v[i] = Fraction(e)
            key = shift_key(v)
            rf = RationalFunction.from_factors(num, fden)
            if key in terms:
                s = terms[key] + rf
                if s.is_zero():
                    del terms[key]
                else:
                    terms[key] = s
            else:
                if not rf.is_zero():
                    terms[key] = rf
        return DifferenceOperator(self.nvars, self.domain, terms, "x", nx=self.N)


def theta_texp(rd: RootData, m: int) -> Fraction:
    if m <= rd.N_g:
        return Fraction(m) * (rd.N + rd.xi - Fraction(m + 1, 2))
    if rd.tag == "D1":
        return Fraction(rd.N * (rd.N - 1), 4)
    return Fraction(rd.N * (rd.N + 1), 4)


def _limit_vd_part(env: TauEnv, part, eps_part, K) -> RationalFunction:
    """Exact limit of t^{-deg} V_{part;K}: cached per environment."""
    cache = getattr(env, "_vcache", None)
    if cache is None:
        cache = env._vcache = {}
    key = (part, eps_part, K)
    if key in cache:
        return cache[key]
    deg = vd_part_degree(len(part), len(K), env.rd.xi)
    taus = [(TauPoly(env.nvars, {int(2 * deg): env.one()}), 1)]  # t^{-deg}
    fnum, fden = [], []
    for atom in vd_part_atoms(part, dict(zip(part, eps_part)), K):
        t, fn, fd = env.atom_factors(atom)
        taus.extend(t)
        fnum.extend(fn)
        fden.extend(fd)
    slices = tau_limit(taus, hi=0)
    if any(k < 0 for k in slices):
        raise AssertionError("tau limit diverges: degree bookkeeping broken")
    num = slices.get(0, MultiLaurent.zero(env.nvars))
    for f in fnum:
        num = num * f
    rf = RationalFunction.from_factors(num, fden)
    cache[key] = rf
    return rf


def limit_van_diejen(env: TauEnv, m: int) -> DifferenceOperator:
    if m == 0:
        return DifferenceOperator.identity(env.nvars, env.domain, "x", env.N)
    from .laurent import rf_sum
    from .xop import shift_key
    buckets: dict = {}
    for shift, sign, parts in van_diejen_chain_terms(env.N, m):
        rf = RationalFunction.const(env.nvars, Fraction(sign))
        for p in parts:
            rf = rf * _limit_vd_part(env, *p)
        if rf.is_zero():
            continue
        v = [F0] * env.N
        for i, e in shift.items():
            v[i] = Fraction(e)
        buckets.setdefault(shift_key(v), []).append(rf)
    terms = {}
    for k, parts_ in buckets.items():
        s = rf_sum(parts_)
        if not s.is_zero():
            terms[k] = s
    const = rf_sum([-c for c in terms.values()])
    if not const.is_zero():
        terms[(0,) * env.N] = const
    return DifferenceOperator(env.nvars, env.domain, terms, "x", nx=env.N)


def limit_km_op(env: TauEnv, m: int) -> DifferenceOperator:
    """Limit of theta_m^{-2} sum_j d_j^{(N-m+j)} V_{m-j}: each summand has
    exact matching t-degree, so the limit is taken component-wise with the
    top coefficient of d_j^{(N-m+j)}."""
    op = DifferenceOperator.zero(env.nvars, env.domain, "x", env.N)
    for j in range(m + 1):
        degs: dict = {}
        for (s2, te), c in _sigma_t_poly(j, env.N - m + j).items():
            e = te + 2 * s2 * env.rd.xi
            degs[e] = degs.get(e, F0) + c
        degs = {k: v for k, v in degs.items() if v}
        if not degs:
            continue
        top = degs[max(degs)]
        if j == m:
            op = op + DifferenceOperator.identity(env.nvars, env.domain, "x", env.N).scale(
                RationalFunction.const(env.nvars, top))
        else:
            op = op + limit_van_diejen(env, m - j).scale(RationalFunction.const(env.nvars, top))
    return op


def limit_rains(env: TauEnv, u: ParamMono, v: ParamMono, theta2: Fraction) -> DifferenceOperator:
    pieces = [(shift, {F0: F1}, atoms, (u, v))
              for shift, atoms in rains_blueprints(env.N)]
    return env.assemble(pieces, theta2)


def limit_miniscule(env: TauEnv, slot: int) -> DifferenceOperator:
    rd = env.rd
    if slot not in _miniscule_slots(rd):
        raise ValueError(f"weight {slot} is not miniscule for {rd.tag}")
    pi = miniscule_weight(rd, slot)
    atoms = []
    for alpha in _positive_roots(rd.rtype, rd.N):
        astar = star_scale(rd.tag, alpha)
        pair = sum((p * a for p, a in zip(pi, astar)), F0)
        if pair == 1:
            atoms.append(("MIN", {i: a for i, a in enumerate(alpha) if a}))
    base = env.assemble([(dict(enumerate(pi)), {F0: F1}, atoms, None)],
                        2 * theta_texp(rd, slot))
    wtype = "D" if rd.rtype == "D" else "B"
    (key, phi), = base.terms.items()
    from .xop import key_shift
    return weyl_symmetrize(phi, key_shift(key), wtype, env.nvars, env.domain, nx=env.N)


def limit_g_macdonald(env: TauEnv, m: int) -> DifferenceOperator:
    rd = env.rd
    if not 1 <= m <= rd.N:
        raise ValueError("slot out of range")
    if m <= rd.N_g:
        return limit_km_op(env, m)
    return limit_miniscule(env, m)


# ---------------------------------------------------------------------------
# identity suite: the combinatorial lemmas behind the eigenvalue combination


def theta_rn(r: int, n: int):
    """theta_{r,n}(u) = sum_l (-1)^l e_{r-l}(u^{[n-l]}) h_l(u^{[n-l+1]}),
    over symbolic u_1..u_{n+1}; the lemma states it equals delta_{r,0}."""
    nv = n + 1
    us = [MultiLaurent.var(nv, i) for i in range(nv)]
    tot = MultiLaurent.zero(nv)
    for l in range(r + 1):
        if n - l < 0 or r - l > n - l:
            continue
        e_part = elementary_sym(r - l, us[: n - l])
        h_part = complete_sym(l, us[: n - l + 1])
        term = e_part * h_part
        if not isinstance(term, MultiLaurent):
            term = MultiLaurent.const(nv, term)
        if l % 2:
            term = -term
        tot = tot + term
    return tot


def ehat_combination_identity(N: int, m: int) -> bool:
    """The symmetric-function identity expanding ehat_m(x) over the
    ehat_{m-j}(y^{[N-j]}) with e/h corrections in x~ and y~."""
    nv = 2 * N
    xs = [MultiLaurent.var(nv, i) for i in range(N)]
    ys = [MultiLaurent.var(nv, N + i) for i in range(N)]
    xt = [x + x ** (-1) for x in xs]
    yt = [y + y ** (-1) for y in ys]
    lhs = ehat_sym(m, xs)
    rhs = MultiLaurent.zero(nv)
    for j in range(m + 1):
        if m - j > 2 * (N - j):
            continue
        outer = ehat_sym(m - j, ys[: N - j])
        inner = MultiLaurent.zero(nv)
        for k in range(j + 1):
            if j - k > N:
                continue
            term = elementary_sym(j - k, xt) * complete_sym(k, yt[: N - j + 1])
            if k % 2:
                term = -term
            inner = inner + term
        rhs = rhs + outer * inner
    return (lhs - rhs).is_zero()
