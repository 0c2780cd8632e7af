"""The quantum Q-system relation schema for all ten families, encoded as
data: each relation instance is a q-power, an ordered left pair, and a
signed sum of ordered monomials on the right.  One schema drives both the
index-space solver (products reversed) and the x-space verifier (direct
order), which removes transcription drift between the two sides.

Boundary conventions: label 0 means the unit, label N+1 kills the term.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

F0 = Fraction(0)
F1 = Fraction(1)
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Relation:
    """q^{lhs_q} Q_{hi} Q_{lo} = sum of (q^{qe}, sign, [Q_{b;m} ...])."""
    lhs_q: Fraction
    hi: tuple      # (a, time)
    lo: tuple
    rhs: tuple     # ((qe, sign, ((b, m), ...)), ...)

    def opposite(self) -> "Relation":
        return Relation(self.lhs_q, self.lo, self.hi,
                        tuple((qe, s, tuple(reversed(fs))) for qe, s, fs in self.rhs))


def _sq(a, n):
    return (a, n)


def _rel(lhs_q, hi, lo, rhs):
    return Relation(Fraction(lhs_q), hi, lo,
                    tuple((Fraction(qe), s, tuple(fs)) for qe, s, fs in rhs))


def relation_instances(tag: str, N: int, n: int):
    """All relation instances of the family at integer parameter n.  For
    doubled-time labels, n is the half-time index of the displayed pair."""
    out = []
    nf = Fraction(n)

    def bulk(a, lhs_q=None):
        out.append(_rel(lhs_q if lhs_q is not None else a,
                        _sq(a, n + 1), _sq(a, n - 1),
                        [(0, 1, [(a, n), (a, n)]),
                         (0, -1, [(a + 1, n), (a - 1, n)])]))

    if tag == "A1":
        for a in range(1, N + 1):
            out.append(_rel(a, _sq(a, n + 1), _sq(a, n - 1),
                            [(0, 1, [(a, n), (a, n)]),
                             (0, -1, [(a - 1, n), (a + 1, n)])]))
        return out

    n_bar = {"D1": N - 3, "B1": N - 2, "C1": N - 2, "D2": N - 2,
             "A2odd": N - 1, "A2even": N - 1,
             "B1p": N - 2, "A2oddp": N - 1, "A2evenp": N - 1}[tag]
    for a in range(1, max(0, n_bar) + 1):
        bulk(a)

    if tag == "D1":
        if N - 2 >= 1:
            out.append(_rel(N - 2, _sq(N - 2, n + 1), _sq(N - 2, n - 1),
                            [(0, 1, [(N - 2, n), (N - 2, n)]),
                             (-Fraction((N - 2) * n, 4), -1,
                              [(N - 3, n), (N - 1, n), (N, n)])]))
        for a in (N - 1, N):
            if a >= 1:
                out.append(_rel(Fraction(N, 4), _sq(a, n + 1), _sq(a, n - 1),
                                [(0, 1, [(a, n), (a, n)]),
                                 (Fraction((N - 4) * n, 4), -1, [(N - 2, n)])]))
    elif tag == "B1":
        if N - 1 >= 1:
            out.append(_rel(N - 1, _sq(N - 1, n + 1), _sq(N - 1, n - 1),
                            [(0, 1, [(N - 1, n), (N - 1, n)]),
                             (0, -1, [(N - 2, n), (N, 2 * n)])]))
        out.append(_rel(Fraction(N, 2), _sq(N, 2 * n + 1), _sq(N, 2 * n - 1),
                        [(0, 1, [(N, 2 * n), (N, 2 * n)]),
                         (-nf, -1, [(N - 1, n), (N - 1, n)])]))
        out.append(_rel(Fraction(N, 2), _sq(N, 2 * n + 2), _sq(N, 2 * n),
                        [(0, 1, [(N, 2 * n + 1), (N, 2 * n + 1)]),
                         (Fraction(N, 2) - nf - 1, -1, [(N - 1, n + 1), (N - 1, n)])]))
    elif tag == "C1":
        if N - 1 >= 1:
            out.append(_rel(N - 1, _sq(N - 1, 2 * n + 1), _sq(N - 1, 2 * n - 1),
                            [(0, 1, [(N - 1, 2 * n), (N - 1, 2 * n)]),
                             (-Fraction(N * n, 2), -1, [(N - 2, 2 * n), (N, n), (N, n)])]))
            out.append(_rel(N - 1, _sq(N - 1, 2 * n + 2), _sq(N - 1, 2 * n),
                            [(0, 1, [(N - 1, 2 * n + 1), (N - 1, 2 * n + 1)]),
                             (-Fraction(N * n, 2), -1,
                              [(N - 2, 2 * n + 1), (N, n + 1), (N, n)])]))
        out.append(_rel(Fraction(N, 2), _sq(N, n + 1), _sq(N, n - 1),
                        [(0, 1, [(N, n), (N, n)]),
                         (Fraction((N - 2) * n, 2), -1, [(N - 1, 2 * n)])]))
    elif tag == "D2":
        if N - 1 >= 1:
            out.append(_rel(N - 1, _sq(N - 1, n + 1), _sq(N - 1, n - 1),
                            [(0, 1, [(N - 1, n), (N - 1, n)]),
                             (-Fraction(N * n, 4), -1, [(N - 2, n), (N, n), (N, n)])]))
        out.append(_rel(Fraction(N, 4), _sq(N, n + 1), _sq(N, n - 1),
                        [(0, 1, [(N, n), (N, n)]),
                         (Fraction((N - 2) * n, 4), -1, [(N - 1, n)])]))
    elif tag == "A2odd":
        out.append(_rel(N, _sq(N, n + 1), _sq(N, n - 1),
                        [(0, 1, [(N, n), (N, n)]),
                         (-nf, -1, [(N - 1, n), (N - 1, n)])]))
    elif tag == "A2even":
        out.append(_rel(N, _sq(N, 2 * n + 1), _sq(N, 2 * n - 1),
                        [(0, 1, [(N, 2 * n), (N, 2 * n)]),
                         (-nf, -1, [(N - 1, 2 * n), (N, 2 * n)])]))
        out.append(_rel(N, _sq(N, 2 * n + 2), _sq(N, 2 * n),
                        [(0, 1, [(N, 2 * n + 1), (N, 2 * n + 1)]),
                         (-nf, -1, [(N - 1, 2 * n + 1), (N, 2 * n + 1)])]))
    elif tag == "B1p":
        if N - 1 >= 1:
            out.append(_rel(N - 1, _sq(N - 1, n + 1), _sq(N - 1, n - 1),
                            [(0, 1, [(N - 1, n), (N - 1, n)]),
                             (0, -1, [(N - 2, n), (N, 2 * n)])]))
        out.append(_rel(Fraction(N, 2), _sq(N, 2 * n + 1), _sq(N, 2 * n - 1),
                        [(0, 1, [(N, 2 * n), (N, 2 * n)]),
                         ((1 - nf) / 2, 1, [(N, 2 * n), (N - 1, n)]),
                         (-nf / 2, -1, [(N - 1, n), (N, 2 * n)]),
                         ((1 - 2 * nf) / 2, -1, [(N - 1, n), (N - 1, n)])]))
        out.append(_rel(Fraction(N, 2), _sq(N, 2 * n + 2), _sq(N, 2 * n),
                        [(0, 1, [(N, 2 * n + 1), (N, 2 * n + 1)]),
                         (Fraction(N - 1, 2) - nf, -1, [(N - 1, n + 1), (N - 1, n)])]))
    elif tag == "A2oddp":
        out.append(_rel(N, _sq(N, 2 * n + 1), _sq(N, 2 * n - 1),
                        [(0, 1, [(N, 2 * n), (N, 2 * n)]),
                         (1 - nf, 1, [(N, 2 * n), (N - 1, 2 * n)]),
                         (-nf, -1, [(N - 1, 2 * n), (N, 2 * n)]),
                         (1 - 2 * nf, -1, [(N - 1, 2 * n), (N - 1, 2 * n)])]))
        out.append(_rel(N, _sq(N, 2 * n + 2), _sq(N, 2 * n),
                        [(0, 1, [(N, 2 * n + 1), (N, 2 * n + 1)]),
                         (-2 * nf, -1, [(N - 1, 2 * n + 1), (N - 1, 2 * n + 1)])]))
    elif tag == "A2evenp":
        out.append(_rel(N, _sq(N, n + 1), _sq(N, n - 1),
                        [(0, 1, [(N, n), (N, n)]),
                         (-nf / 2, -1, [(N, n), (N - 1, n)])]))
    else:
        raise ValueError(tag)
    return [r for r in out if r is not None]


def forward_relation(tag: str, N: int, a: int, target: int) -> Relation:
    """The relation instance whose left pair's highest time for label a is
    ``target`` (target >= 2); used to solve forward."""
    for n in _candidate_ns(target):
        for rel in relation_instances(tag, N, n):
            if rel.hi == (a, target):
                return rel
    raise LookupError(f"no forward relation for ({tag}, a={a}, time={target})")


def backward_relation(tag: str, N: int, a: int, target: int) -> Relation:
    """The relation instance whose left pair's lowest time for label a is
    ``target`` (target <= -1); used to solve backward."""
    for n in _candidate_ns(target):
        for rel in relation_instances(tag, N, n):
            if rel.lo == (a, target):
                return rel
    raise LookupError(f"no backward relation for ({tag}, a={a}, time={target})")


def _candidate_ns(target: int):
    seen = set()
    for n in (target - 1, target + 1, (target - 1) // 2, (target + 1) // 2,
              (target - 2) // 2, target // 2, (target + 2) // 2):
        if n not in seen:
            seen.add(n)
            yield n


def commutation_instances(tag: str, N: int, k: int, lam):
    """The q-commutation relations at block index k: pairs
    (q-power e, (a, t_a k + i), (b, t_b k + j)) asserting
    Q_{a}. Q_{b}. = q^e Q_{b}. Q_{a}. in the direct order, where
    e = Lambda_{a,b} j - Lambda_{b,a} i."""
    from .rootdata import root_data
    rd = root_data(tag, N)
    out = []
    for a in range(1, N + 1):
        for b in range(1, N + 1):
            for i in (0, 1):
                for j in (0, 1):
                    e = Fraction(lam[a - 1][b - 1]) * j - Fraction(lam[b - 1][a - 1]) * i
                    out.append((e, (a, rd.t_label(a) * k + i), (b, rd.t_label(b) * k + j)))
    return out
