"""Closed formulas, bounds, and applicability predicates.

Everything here is evaluated symbolically from the invariant factors; no
search.  D*(G) = 1 + sum(n_i - 1) is the canonical lower bound for the
Davenport constant D(G), and the two are known to coincide when G has rank at
most two, is a p-group, or is a p-group plus a coprime cyclic summand with a
small enough D*; those are the only equality facts this module relies on.

The m-chain for G + C_d uses the conventions n_0 = 1, n_{r+1} = 0, and
gcd(0, d) = d; unit tests pin all three (the conventions are the most
error-prone spot in the whole formula layer).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .groups import GroupSpec, cyclic, direct_sum, factorize, p_component

DavenportOracle = Callable[[GroupSpec], Optional[int]]


def dstar(g: GroupSpec) -> int:
    """Canonical Davenport lower bound 1 + sum(n_i - 1); 1 for the trivial group."""
    return 1 + sum(n - 1 for n in g.factors)


def dstar_extended(g: GroupSpec, d: int) -> tuple[int, tuple[int, ...]]:
    """D*(G + C_d) with the explicit chain m_0 | m_1 | ... | m_r.

    m_i = n_i * gcd(n_{i+1}, d) / gcd(n_i, d), with n_0 = 1 and n_{r+1} = 0
    (so gcd(n_{r+1}, d) = d).  Returns (sum(m_i - 1) + 1, (m_0, ..., m_r)).
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    n = (1,) + g.factors + (0,)
    r = g.rank
    chain = tuple(
        n[i] * math.gcd(n[i + 1], d) // math.gcd(n[i], d) for i in range(r + 1)
    )
    return sum(m - 1 for m in chain) + 1, chain


def primes_of(g: GroupSpec) -> tuple[int, ...]:
    return tuple(sorted(factorize(g.order))) if not g.is_trivial else ()


def davenport_matches_lower_bound(g: GroupSpec) -> bool:
    """Known cases with D(G) = D*(G): rank <= 2, p-groups, and G' + C_n with
    G' a p-group, D*(G') <= 2 exp(G') - 1, and p coprime to n."""
    if g.rank <= 2:
        return True
    ps = primes_of(g)
    if len(ps) == 1:
        return True
    for p in ps:
        gp = p_component(g, p)
        if dstar(gp) > 2 * gp.exponent - 1:
            continue
        if all(p_component(g, q).rank <= 1 for q in ps if q != p):
            return True
    return False


def _is_prime_power(d: int) -> tuple[int, int] | None:
    """(p, alpha) with d = p^alpha, alpha >= 1; None otherwise."""
    f = factorize(d) if d > 1 else {}
    if len(f) == 1:
        [(p, a)] = f.items()
        return p, a
    return None


def strong_inductive_prime(g: GroupSpec) -> int | None:
    """Least odd prime q with D(G_q) - exp(G_q) + 1 | exp(G_q) and every other
    p-component cyclic; None when no such q exists.

    D(G_q) = D*(G_q) since p-components are p-groups.  q need not divide |G|:
    a trivial G_q satisfies the divisibility, which covers cyclic G via any
    odd prime outside the order.
    """
    ps = primes_of(g)
    candidates = [p for p in ps if p != 2]
    extra = 3
    while extra in ps:
        extra += 2
    candidates.append(extra)
    for q in sorted(set(candidates)):
        gq = p_component(g, q)
        m = dstar(gq) - gq.exponent + 1
        if gq.exponent % m != 0:
            continue
        if all(p_component(g, p).rank <= 1 for p in ps if p != q):
            return q
    return None


def all_s_dN_predictions(g: GroupSpec, d: int) -> list[tuple[int, str]]:
    """Every theorem prediction for s_{dN}(G) whose hypothesis holds, in
    priority order: cyclic, p-group with prime-power d, rank 2, the remaining
    p-group cases, then the inductive exact-value theorem.  Where several
    apply the values agree (a tested property); only the tag differs."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    n = g.exponent
    preds: list[tuple[int, str]] = []
    ps = primes_of(g)
    p = ps[0] if len(ps) == 1 else None
    if g.rank <= 1:
        preds.append((math.lcm(n, d) + math.gcd(n, d) - 1, "cyclic"))
    if p is not None:
        pp = _is_prime_power(d)
        if d == 1 or (pp is not None and pp[0] == p):
            preds.append((dstar(g) + d - 1, "p-group-a"))
    if g.rank == 2:
        m = g.factors[0]
        preds.append(
            (math.lcm(n, d) + math.gcd(n, math.lcm(m, d)) + math.gcd(m, d) - 2, "rank2")
        )
    if p is not None:
        vp = factorize(d).get(p, 0) if d > 1 else 0
        if dstar(g) <= p ** vp:
            preds.append((dstar(g) + d - 1, "p-group-b"))
        if p ** vp <= 2 * n - dstar(g):
            preds.append(
                (dstar(g) - n + math.lcm(n, d) + math.gcd(n, d) - 1, "p-group-c")
            )
    q = strong_inductive_prime(g)
    if q is not None:
        gq = p_component(g, q)
        m = dstar(gq) - gq.exponent + 1
        if d % m == 0:
            preds.append(
                (
                    dstar(gq) - gq.exponent + math.gcd(n, d) + math.lcm(n, d) - 1,
                    f"inductive-exact(q={q})",
                )
            )
    return preds


def predict_s_dN(g: GroupSpec, d: int) -> tuple[int, str] | None:
    """First applicable exact prediction for s_{dN}(G), with its theorem tag."""
    preds = all_s_dN_predictions(g, d)
    return preds[0] if preds else None


@dataclass(frozen=True)
class EtaSPrediction:
    """Exact values or upper bounds for eta(G) and s(G)."""

    eta: int | None = None
    s: int | None = None
    exact: bool = False
    eta_upper: int | None = None
    s_upper: int | None = None
    tag: str | None = None


def predict_eta_s(g: GroupSpec) -> EtaSPrediction:
    """Exact eta/s when the strong inductive hypothesis holds (some odd q with
    D(G_q) - exp(G_q) + 1 | exp(G_q) and every other component cyclic);
    otherwise upper bounds 3n-2 / 4n-3 when every D(G_p) <= 2 exp(G_p) - 1
    and exp(G) is odd.  Only the bound branch carries a parity hypothesis;
    noncyclic 2-groups match neither and are reported, never predicted."""
    n = g.exponent
    q = strong_inductive_prime(g)
    if q is not None:
        gq = p_component(g, q)
        gap = dstar(gq) - gq.exponent
        return EtaSPrediction(
            eta=2 * gap + n,
            s=2 * gap + 2 * n - 1,
            exact=True,
            eta_upper=2 * gap + n,
            s_upper=2 * gap + 2 * n - 1,
            tag=f"inductive-exact(q={q})",
        )
    if all_p_components_small(g) and n % 2 == 1:
        return EtaSPrediction(
            eta_upper=3 * n - 2, s_upper=4 * n - 3, tag="inductive-bound"
        )
    return EtaSPrediction()


def all_p_components_small(g: GroupSpec) -> bool:
    """D(G_p) <= 2 exp(G_p) - 1 for every prime p (D = D* on p-groups)."""
    for p in primes_of(g):
        gp = p_component(g, p)
        if dstar(gp) > 2 * gp.exponent - 1:
            return False
    return True


@dataclass(frozen=True)
class Bound:
    value: int
    source: str


@dataclass
class BoundsReport:
    """Assembled lower/upper bounds for s_{dN}(G), plus any exact prediction."""

    group: GroupSpec
    d: int
    lower_bounds: list[Bound] = field(default_factory=list)
    upper_bounds: list[Bound] = field(default_factory=list)
    predicted: tuple[int, str] | None = None
    davenport_exact: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def best_lower(self) -> int:
        return max(b.value for b in self.lower_bounds)

    @property
    def best_upper(self) -> int | None:
        return min((b.value for b in self.upper_bounds), default=None)

    @property
    def pinched(self) -> bool:
        return self.best_upper is not None and self.best_lower == self.best_upper


def bounds_s_dN(
    g: GroupSpec, d: int, davenport_oracle: DavenportOracle | None = None
) -> BoundsReport:
    """The bound sandwich D*(G)+d-1 <= D*(G+C_d) <= s_{dN}(G) <= D(G+C_d) and
    D(G)+d-1 <= s_{dN}(G), with exact Davenport values taken from the oracle
    when supplied, from D = D* when that equality is known, and otherwise
    downgraded to the D* lower bound with an explicit note."""
    report = BoundsReport(group=g, d=d)
    ext_value, _ = dstar_extended(g, d)
    report.lower_bounds.append(Bound(ext_value, "dstar(G+C_d)"))
    report.lower_bounds.append(Bound(dstar(g) + d - 1, "dstar(G)+d-1"))

    dav = davenport_oracle(g) if davenport_oracle else None
    if dav is None and davenport_matches_lower_bound(g):
        dav = dstar(g)
    if dav is not None:
        report.lower_bounds.append(Bound(dav + d - 1, "davenport(G)+d-1"))
        report.davenport_exact = True
    else:
        report.lower_bounds.append(Bound(dstar(g) + d - 1, "davenport(G)+d-1 [D unknown, D* used as lower bound only]"))
        report.notes.append("davenport unknown; canonical lower bound substituted, lower bound only")

    ext = direct_sum(g, cyclic(d))
    dav_ext = davenport_oracle(ext) if davenport_oracle else None
    if dav_ext is None and davenport_matches_lower_bound(ext):
        dav_ext = dstar(ext)
    if dav_ext is not None:
        report.upper_bounds.append(Bound(dav_ext, "davenport(G+C_d)"))
    else:
        report.notes.append("davenport(G+C_d) unknown; no upper bound from the sandwich")

    if d == g.exponent and all_p_components_small(g):
        report.upper_bounds.append(Bound(3 * g.exponent - 2, "inductive-3n-2"))

    report.predicted = predict_s_dN(g, d)
    return report


@dataclass(frozen=True)
class HypothesisFlags:
    """Every named hypothesis the theory attaches to a group (and optional d),
    evaluated so a verification harness can decide what applies where."""

    group: GroupSpec
    d: int | None
    rank_le_2: bool
    is_p_group: bool
    davenport_equals_lower_bound: bool
    all_p_components_small: bool
    exp_odd: bool
    strong_inductive_q: int | None
    davenport_le_2d_minus_1: bool | None
    s_dN_le_3d_minus_1: bool | None
    short_corollary_indices: tuple[int, ...]


def hypothesis_flags(
    g: GroupSpec,
    d: int | None = None,
    davenport_value: int | None = None,
    s_dN_value: int | None = None,
) -> HypothesisFlags:
    dav = davenport_value
    if dav is None and davenport_matches_lower_bound(g):
        dav = dstar(g)

    dav_flag = None
    sdn_flag = None
    if d is not None:
        if dav is not None:
            dav_flag = dav <= 2 * d - 1
        sdn = s_dN_value
        if sdn is None:
            pred = predict_s_dN(g, d)
            sdn = pred[0] if pred else None
        if sdn is not None:
            sdn_flag = sdn <= 3 * d - 1

    corollary: tuple[int, ...] = ()
    ps = primes_of(g)
    if len(ps) == 1 and dav is not None:
        p = ps[0]
        hits = []
        for i in range(1, dav + 1):
            twice = dstar(g) + i
            if twice % 2 == 0 and _is_power_of(twice // 2, p):
                hits.append(i)
        corollary = tuple(hits)

    return HypothesisFlags(
        group=g,
        d=d,
        rank_le_2=g.rank <= 2,
        is_p_group=len(ps) <= 1,
        davenport_equals_lower_bound=davenport_matches_lower_bound(g),
        all_p_components_small=all_p_components_small(g),
        exp_odd=g.exponent % 2 == 1,
        strong_inductive_q=strong_inductive_prime(g),
        davenport_le_2d_minus_1=dav_flag,
        s_dN_le_3d_minus_1=sdn_flag,
        short_corollary_indices=corollary,
    )


def _is_power_of(x: int, p: int) -> bool:
    if x < 1:
        return False
    while x % p == 0:
        x //= p
    return x == 1
