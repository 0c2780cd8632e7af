"""Static root-system and parameter-specialization data for the ten theory
families: type A plus the nine BC-type specializations (six base families
and the three primed companions).

Family tags (CLI strings): A1, D1, B1, B1p, C1, A2odd, A2oddp, D2, A2even,
A2evenp.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

FAMILIES = ("A1", "D1", "B1", "B1p", "C1", "A2odd", "A2oddp", "D2", "A2even", "A2evenp")

F0 = Fraction(0)
F1 = Fraction(1)
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class ParamMono:
    """A Koornwinder parameter of the form sign * q^qe * t^te."""
    sign: int
    qe: Fraction
    te: Fraction

    def __mul__(self, other: "ParamMono") -> "ParamMono":
        return ParamMono(self.sign * other.sign, self.qe + other.qe, self.te + other.te)

    def __truediv__(self, other: "ParamMono") -> "ParamMono":
        return ParamMono(self.sign * other.sign, self.qe - other.qe, self.te - other.te)

    def sqrt_principal(self) -> "ParamMono":
        if self.sign != 1:
            raise ValueError("principal square root of a negative monomial")
        qe, te = self.qe / 2, self.te / 2
        return ParamMono(1, qe, te)

    def value(self, domain):
        v = domain.q_pow(self.qe) * domain.t_pow(self.te)
        return v if self.sign == 1 else -v


Q = lambda e: ParamMono(1, Fraction(e), F0)          # noqa: E731
T = lambda e: ParamMono(1, F0, Fraction(e))          # noqa: E731
QT = lambda qe, te, s=1: ParamMono(s, Fraction(qe), Fraction(te))  # noqa: E731

# Table of (a, b, c, d) specializations, sigma exponent xi, root system
# types (R, S, R*), dual family, short labels rule, operator-slot counts.
_SPEC = {
    # tag: (abcd, xi, R, S, Rstar, dual, short_rule, N_g_offset, m_g_offset)
    "D1":      ([QT(0, 0), QT(0, 0, -1), QT(HALF, 0), QT(HALF, 0, -1)], F0, "D", "D", "D", "D1", "none", -2, -2),
    "B1":      ([T(1), QT(0, 0, -1), Q(HALF), QT(HALF, 0, -1)], HALF, "B", "B", "C", "C1", "last", 0, -2),
    "C1":      ([T(HALF), QT(0, HALF, -1), QT(HALF, HALF), QT(HALF, HALF, -1)], F1, "C", "C", "B", "B1", "all_but_last", -1, -1),
    "A2odd":   ([T(HALF), QT(0, HALF, -1), Q(HALF), QT(HALF, 0, -1)], HALF, "C", "B", "C", "A2odd", "none", 0, -1),
    "D2":      ([T(1), QT(0, 0, -1), QT(HALF, 1), QT(HALF, 0, -1)], F1, "B", "C", "B", "D2", "none", -1, -1),
    "A2even":  ([T(1), QT(0, 0, -1), QT(HALF, HALF), QT(HALF, HALF, -1)], F1, "BC", "BC", "BC", "A2even", "all", 0, -2),
    # primed companions
    "B1p":     ([QT(0, 0), QT(0, 0, -1), QT(HALF, 1), QT(HALF, 0, -1)], HALF, "B", "B", "C", None, "last", 0, -2),
    "A2oddp":  ([QT(0, 0), QT(0, 0, -1), QT(HALF, HALF), QT(HALF, HALF, -1)], HALF, "C", "B", "C", None, "all", 0, -1),
    "A2evenp": ([QT(HALF, 1), QT(HALF, 0, -1), T(HALF), QT(0, HALF, -1)], F1, "BC", "BC", "BC", None, "none", 0, -1),
}


def _weights(rtype: str, N: int) -> list[tuple[Fraction, ...]]:
    """Fundamental weights for the finite types; BC uses C-type weights."""
    out = []
    for a in range(1, N + 1):
        if rtype == "D" and a == N - 1:
            w = tuple([HALF] * (N - 1) + [-HALF])
        elif rtype in ("B", "D") and a == N:
            w = tuple([HALF] * N)
        else:
            w = tuple([F1] * a + [F0] * (N - a))
        out.append(w)
    return out


def _simple_roots(rtype: str, N: int) -> list[tuple[Fraction, ...]]:
    """Simple roots; for A only the N-1 honest roots, BC uses B-type roots."""
    e = lambda i: tuple(F1 if j == i else F0 for j in range(N))  # noqa: E731
    out = []
    for a in range(N - 1):
        v = list(e(a))
        v[a + 1] = -F1
        out.append(tuple(v))
    if rtype == "A":
        return out
    if rtype in ("B", "BC"):
        out.append(e(N - 1))
    elif rtype == "C":
        out.append(tuple(2 * x for x in e(N - 1)))
    elif rtype == "D":
        if N >= 2:
            v = [F0] * N
            v[N - 2] = F1
            v[N - 1] = F1
            out.append(tuple(v))
        else:
            out.append(e(0))
    return out


def _positive_roots(rtype: str, N: int) -> list[tuple[Fraction, ...]]:
    e = lambda i: [F1 if j == i else F0 for j in range(N)]  # noqa: E731
    roots = []
    for i in range(N):
        for j in range(i + 1, N):
            v = e(i)
            v[j] = -F1
            roots.append(tuple(v))
            if rtype != "A":
                w = e(i)
                w[j] = F1
                roots.append(tuple(w))
    if rtype in ("B", "BC"):
        roots += [tuple(e(i)) for i in range(N)]
    if rtype in ("C", "BC"):
        roots += [tuple(2 * x for x in e(i)) for i in range(N)]
    return roots


def _dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), F0)


@dataclass(frozen=True)
class AffineFamily:
    """One family of strictly positive affine roots: levels start, start+step,
    start+2*step, ... attached to a fixed finite root."""
    finite: tuple[Fraction, ...]
    start: Fraction
    step: Fraction


def _affine_families(tag: str, N: int) -> list[AffineFamily]:
    e = lambda i: tuple(F1 if j == i else F0 for j in range(N))  # noqa: E731
    e2 = lambda i: tuple(2 * F1 if j == i else F0 for j in range(N))  # noqa: E731
    pairs = []
    for i in range(N):
        for j in range(i + 1, N):
            v = list(e(i)); v[j] = -F1
            pairs.append(tuple(v))
            if tag != "A1":
                w = list(e(i)); w[j] = F1
                pairs.append(tuple(w))
    fams = [AffineFamily(p, F1, F1) for p in pairs]
    if tag in ("A1", "D1"):
        pass
    elif tag == "B1":
        fams += [AffineFamily(e(i), F1, F1) for i in range(N)]
    elif tag == "B1p":
        fams += [AffineFamily(e(i), HALF, F1) for i in range(N)]
    elif tag == "C1":
        fams += [AffineFamily(e2(i), F1, F1) for i in range(N)]
    elif tag == "A2odd":
        fams += [AffineFamily(e2(i), Fraction(2), Fraction(2)) for i in range(N)]
    elif tag == "A2oddp":
        fams += [AffineFamily(e2(i), F1, Fraction(2)) for i in range(N)]
    elif tag == "D2":
        fams += [AffineFamily(e(i), HALF, HALF) for i in range(N)]
    elif tag == "A2even":
        fams += [AffineFamily(e(i), F1, F1) for i in range(N)]
        fams += [AffineFamily(e2(i), F1, Fraction(2)) for i in range(N)]
    elif tag == "A2evenp":
        fams += [AffineFamily(e(i), HALF, F1) for i in range(N)]
        fams += [AffineFamily(e2(i), Fraction(2), Fraction(2)) for i in range(N)]
    else:
        raise ValueError(tag)
    return fams


@dataclass
class RootData:
    tag: str
    N: int
    rtype: str          # type of R = R(g): governs partitions and Weyl group
    stype: str
    rstar_type: str
    xi: Fraction        # sigma = t^xi
    params: list | None  # (a,b,c,d) as ParamMono, None for type A
    dual_tag: str | None
    omega: list
    omega_star: list
    alpha: list
    alpha_star: list
    lam: list           # Lambda matrix, lam[a-1][b-1] = omega*_a . omega_b
    short: set          # set of short labels a
    N_g: int            # KM-operator slots 1..N_g; above: minuscule slots
    m_g: int            # bulk cutoff of the first Pieri operator
    rho: list           # t-exponents: rho_i = xi + N - i
    rho_star_texp: list  # t-exponents of t^{rho*}: te(a-param) + N - i
    rho_star_qexp: Fraction  # q-exponent carried by the a-parameter
    affine: list = field(default_factory=list)
    minuscule_slots: dict = field(default_factory=dict)

    def t_label(self, a: int) -> int:
        return 2 if a in self.short else 1

    def weight(self, a: int):
        return self.omega[a - 1]

    def weight_star(self, a: int):
        return self.omega_star[a - 1]

    def root(self, a: int):
        return self.alpha[a - 1]

    def root_star(self, a: int):
        return self.alpha_star[a - 1]


def root_data(tag: str, N: int) -> RootData:
    if tag not in FAMILIES:
        raise ValueError(f"unknown family tag {tag!r}")
    if N < 1:
        raise ValueError("rank must be >= 1")
    if tag == "A1":
        omega = [tuple([F1] * a + [F0] * (N - a)) for a in range(1, N + 1)]
        alpha = _simple_roots("A", N)
        lam = [[_dot(omega[a], omega[b]) for b in range(N)] for a in range(N)]
        return RootData(
            tag=tag, N=N, rtype="A", stype="A", rstar_type="A", xi=F0,
            params=None, dual_tag="A1",
            omega=omega, omega_star=omega, alpha=alpha, alpha_star=alpha,
            lam=lam, short=set(), N_g=N, m_g=N - 1,
            rho=[Fraction(N - i) for i in range(1, N + 1)],
            rho_star_texp=[Fraction(N - i) for i in range(1, N + 1)],
            rho_star_qexp=F0,
            affine=_affine_families("A1", N),
            minuscule_slots={},
        )
    abcd, xi, R, S, Rs, dual, short_rule, ng_off, mg_off = _SPEC[tag]
    if N < 2 and tag in ("D1",):
        raise ValueError(f"{tag} needs rank >= 2")
    omega = _weights(R, N)
    omega_star = _weights(Rs, N)
    alpha = _simple_roots(R, N)
    alpha_star = _simple_roots(Rs, N)
    lam = [[_dot(omega_star[a], omega[b]) for b in range(N)] for a in range(N)]
    if short_rule == "none":
        short = set()
    elif short_rule == "last":
        short = {N}
    elif short_rule == "all":
        short = set(range(1, N + 1))
    else:
        short = set(range(1, N))
    slots = {}
    if tag == "D1":
        slots = {N - 1: N - 1, N: N}
    elif tag == "C1" or tag == "D2":
        slots = {N: N}
    return RootData(
        tag=tag, N=N, rtype=R, stype=S, rstar_type=Rs, xi=xi,
        params=list(abcd), dual_tag=dual,
        omega=omega, omega_star=omega_star, alpha=alpha, alpha_star=alpha_star,
        lam=lam, short=short, N_g=N + ng_off, m_g=N + mg_off,
        rho=[xi + N - i for i in range(1, N + 1)],
        rho_star_texp=[abcd[0].te + N - i for i in range(1, N + 1)],
        rho_star_qexp=abcd[0].qe,
        affine=_affine_families(tag, N),
        minuscule_slots=slots,
    )


def dual_params(params: list) -> list:
    """The parameter involution: a* = sqrt(abcd/q) etc., principal branches."""
    a, b, c, d = params
    prod = a * b * c * d
    if isinstance(a, ParamMono):
        sigma2 = ParamMono(prod.sign, prod.qe - 1, prod.te)
        if sigma2.sign != 1:
            raise ValueError("abcd/q not a positive square")
        sig = sigma2.sqrt_principal()
        rb = ParamMono(1, F1, F0) * a * b / (c * d)
        rc = ParamMono(1, F1, F0) * a * c / (b * d)
        rd = ParamMono(1, F1, F0) * a * d / (b * c)
        bs = rb.sqrt_principal()
        cs = rc.sqrt_principal()
        ds = rd.sqrt_principal()
        return [sig, ParamMono(-1, bs.qe, bs.te), cs, ParamMono(-1, ds.qe, ds.te)]
    raise TypeError("dual_params expects ParamMono parameters")


def star_scale(tag: str, root: tuple) -> tuple:
    """The map alpha -> alpha_* = alpha / u_alpha from R to S, used by the
    minuscule-weight pairing."""
    rd_to = _SPEC.get(tag)
    if rd_to is None:
        return root
    _, _, R, S, _, _, _, _, _ = rd_to
    if R == S:
        return root
    norm2 = _dot(root, root)
    if R == "C" and S == "B" and norm2 == 4:
        return tuple(x / 2 for x in root)
    if R == "B" and S == "C" and norm2 == 1:
        return tuple(2 * x for x in root)
    return root


# ---------------------------------------------------------------------------
# g-partitions


def is_g_partition(lam, tag: str, N: int) -> bool:
    if len(lam) != N:
        return False
    lam = [Fraction(x) for x in lam]
    rtype = "A" if tag == "A1" else _SPEC[tag][2]
    doubled = [2 * x for x in lam]
    if any(x.denominator != 1 for x in doubled):
        return False
    halves = {x.denominator for x in lam}
    if rtype in ("A", "C", "BC"):
        if halves != {1}:
            return False
        return all(lam[i] >= lam[i + 1] for i in range(N - 1)) and lam[-1] >= 0
    if len(halves) != 1:
        return False
    if rtype == "B":
        return all(lam[i] >= lam[i + 1] for i in range(N - 1)) and lam[-1] >= 0
    # D type: last part may be negative
    if not all(lam[i] >= lam[i + 1] for i in range(N - 2)):
        return False
    if N >= 2 and lam[N - 2] < abs(lam[N - 1]):
        return False
    return True


def g_partition_size(lam) -> Fraction:
    return sum((abs(Fraction(x)) for x in lam), F0)


def g_partitions(tag: str, N: int, max_size, include_half: bool = True):
    """All g-partitions of size sum |lam_i| <= max_size, deterministic order."""
    max_size = Fraction(max_size)
    rtype = "A" if tag == "A1" else _SPEC[tag][2]
    offsets = [F0]
    if include_half and rtype in ("B", "D"):
        offsets.append(HALF)
    out = []
    for off in offsets:
        # entries in off + Z, bounded by max_size
        top = int(max_size - off) if max_size >= off else -1
        vals = [off + k for k in range(top + 1)]
        for combo in itertools.combinations_with_replacement(reversed(vals), N):
            lam = list(combo)
            cands = [lam]
            if rtype == "D" and lam[-1] != 0:
                neg = list(lam[:-1]) + [-lam[-1]]
                cands.append(neg)
            for c in cands:
                if is_g_partition(c, tag, N) and g_partition_size(c) <= max_size:
                    out.append(tuple(c))
    return sorted(set(out), key=lambda v: (g_partition_size(v), v))


def dominance_leq(mu, lam) -> bool:
    """Partial-sum dominance: sum_{i<=k} mu_i <= sum_{i<=k} lam_i for all k."""
    s_m = F0
    s_l = F0
    for m, l in zip(mu, lam):
        s_m += Fraction(m)
        s_l += Fraction(l)
        if s_m > s_l:
            return False
    return True


def dominance_window(tag: str, N: int, lam_max) -> list[tuple]:
    """All g-partitions mu <= lam_max in dominance with the same parity
    class (integer vs half-integer entries).  For type A the window is the
    homogeneous one: |mu| = |lam_max|."""
    lam_max = tuple(Fraction(x) for x in lam_max)
    half = lam_max[0].denominator == 2 if lam_max else False
    rtype = "A" if tag == "A1" else _SPEC[tag][2]
    out = []
    if rtype == "A":
        total = int(sum(lam_max))

        def rec_a(prefix, remaining, bound):
            k = len(prefix)
            if k == N:
                if remaining == 0:
                    out.append(tuple(Fraction(x) for x in prefix))
                return
            for v in range(min(bound, remaining), -1, -1):
                if v * (N - k) < remaining:
                    break
                if sum(prefix) + v <= sum(lam_max[: k + 1]):
                    rec_a(prefix + [v], remaining - v, v)

        rec_a([], total, int(lam_max[0]) if lam_max else 0)
        return sorted(set(out), reverse=True)
    # BC types: enumerate by entries bounded by lam_max partial sums
    bound = lam_max[0] if lam_max else F0
    offsets = HALF if half else F0
    vals = []
    v = offsets
    while v <= bound:
        vals.append(v)
        v += 1
    allow_neg_last = rtype == "D"

    def rec(prefix):
        k = len(prefix)
        if k == N:
            if is_g_partition(prefix, tag, N):
                out.append(tuple(prefix))
            return
        prev = prefix[-1] if prefix else bound
        budget = sum(lam_max[: k + 1]) - sum(prefix, F0)
        for v in vals:
            if v > prev or v > budget:
                continue
            rec(prefix + [v])
        if allow_neg_last and k == N - 1:
            for v in vals:
                if v == 0:
                    continue
                if -v > budget:
                    continue
                if v <= prev:
                    rec(prefix + [-v])

    rec([])
    res = [mu for mu in set(out) if dominance_leq(mu, lam_max)]
    return sorted(res, key=lambda m: (g_partition_size(m), m), reverse=True)


# ---------------------------------------------------------------------------
# Weyl groups (as signed permutations) and affine roots


def weyl_elements(rtype: str, N: int):
    """Yield (perm, signs) pairs; perm maps old index -> new index."""
    for perm in itertools.permutations(range(N)):
        if rtype == "A":
            yield perm, (1,) * N
            continue
        for mask in range(1 << N):
            signs = tuple(-1 if (mask >> i) & 1 else 1 for i in range(N))
            if rtype == "D" and bin(mask).count("1") % 2:
                continue
            yield perm, signs


def weyl_orbit(rtype: str, vec) -> list[tuple]:
    vec = tuple(Fraction(x) for x in vec)
    out = set()
    for perm, signs in weyl_elements(rtype, len(vec)):
        img = [F0] * len(vec)
        for i, x in enumerate(vec):
            img[perm[i]] = x * signs[i]
        out.add(tuple(img))
    return sorted(out)


def dominant_rep(rtype: str, vec) -> tuple:
    """The dominant representative of the Weyl orbit of vec."""
    vec = [Fraction(x) for x in vec]
    if rtype == "A":
        return tuple(sorted(vec, reverse=True))
    mags = sorted((abs(x) for x in vec), reverse=True)
    if rtype == "D":
        neg = sum(1 for x in vec if x < 0) % 2
        if 0 in mags:
            neg = 0
        out = list(mags)
        if neg:
            out[-1] = -out[-1]
        return tuple(out)
    return tuple(mags)


def affine_roots(tag: str, N: int, cap) -> list[tuple[Fraction, tuple]]:
    """All (level, finite part) with level <= cap, deterministic order."""
    cap = Fraction(cap)
    out = []
    for fam in _affine_families(tag, N):
        lvl = fam.start
        while lvl <= cap:
            out.append((lvl, fam.finite))
            lvl += fam.step
    return sorted(out)
