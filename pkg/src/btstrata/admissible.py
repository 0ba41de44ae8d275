"""Admissible sets, the Coxeter-type EO set and the index family of tau-orbits."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from .weyl import AffineWeylGroup, DiagramKind, IwahoriWeylElement, group_for_n


@dataclass(frozen=True)
class EOElement:
    element: IwahoriWeylElement
    word: tuple[int, ...]
    support: frozenset
    is_sigma_coxeter: bool
    length: int


@dataclass(frozen=True)
class SigmaOrbitDatum:
    sigma: frozenset
    flat: frozenset
    sharp: frozenset
    distance: int
    w_sigma: IwahoriWeylElement
    word: tuple[int, ...] = field(default=())


def mu_translations(group: AffineWeylGroup) -> list[IwahoriWeylElement]:
    """The W_0-orbit of t^{lambda_1}, lambda_1 = (1, 0, ..., 0; 1)."""
    out = []
    for i in range(group.m):
        for sign in (1, -1):
            lam = [0] * group.m
            lam[i] = sign
            out.append(group.translation(lam, 1))
    return out


@lru_cache(maxsize=None)
def adm(n: int) -> frozenset:
    """Adm(mu) for mu = (1, 0^{n-1}; 1): union of the lower Bruhat intervals of the translations."""
    group = group_for_n(n)
    out: set = set()
    for t in mu_translations(group):
        out |= group.lower_interval(t)
    return frozenset(out)


def dominant(lam) -> tuple[int, ...]:
    return tuple(sorted((abs(c) for c in lam), reverse=True))


def adm0(n: int) -> set[tuple[int, ...]]:
    """Image of Adm(mu) in W_0 \\ W~ / W_0, as dominant translation parts (lambda; y)."""
    return {dominant(x.lam) + (x.similitude,) for x in adm(n)}


def lambda_s(m: int, s: int) -> tuple[int, ...]:
    return (1,) * s + (0,) * (m - s) + (1,)


# --- tau-orbits, distances, supports ----------------------------------------


def outside_node(group: AffineWeylGroup) -> int:
    """The node not in the hyperspecial-type set S (the 0-th vertex)."""
    return 0


def s_nodes(group: AffineWeylGroup) -> frozenset:
    return frozenset(group.nodes()) - {outside_node(group)}


def tau_orbits(group: AffineWeylGroup) -> list[frozenset]:
    act = group.tau_action
    seen, orbits = set(), []
    for v in group.nodes():
        if v in seen:
            continue
        orb = {v}
        u = act[v]
        while u not in orb:
            orb.add(u)
            u = act[u]
        seen |= orb
        orbits.append(frozenset(orb))
    return orbits


def _adjacency(group: AffineWeylGroup) -> dict:
    adj = {v: set() for v in group.nodes()}
    for i, j in group.edges:
        adj[i].add(j)
        adj[j].add(i)
    return adj


def node_distances(group: AffineWeylGroup) -> dict:
    """d(v): graph distance from the tau-orbit of v to the node outside S."""
    adj = _adjacency(group)
    src = outside_node(group)
    dist = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return {v: min(dist[u] for u in orb) for orb in tau_orbits(group) for v in orb}


def tau_closure(group: AffineWeylGroup, nodes) -> frozenset:
    act = group.tau_action
    out = set(nodes)
    frontier = list(out)
    while frontier:
        u = act[frontier.pop()]
        if u not in out:
            out.add(u)
            frontier.append(u)
    return frozenset(out)


def sigma_support(group: AffineWeylGroup, w: IwahoriWeylElement) -> frozenset:
    """supp_sigma(w): letters of w tau^{-1}, closed under the tau-sigma action."""
    word, _ = group.split_word(w)
    return tau_closure(group, word)


def is_sigma_coxeter(group: AffineWeylGroup, w: IwahoriWeylElement) -> bool:
    """Each tau-sigma orbit in the support contributes exactly one letter of a reduced word."""
    word, _ = group.split_word(w)
    support = tau_closure(group, word)
    orbits = [o for o in tau_orbits(group) if o <= support]
    if len(word) != len(orbits):
        return False
    return all(sum(1 for s in word if s in o) == 1 for o in orbits)


def is_s_minimal(group: AffineWeylGroup, w: IwahoriWeylElement) -> bool:
    """w lies in ^S W~ (no left descent in S)."""
    return not any(group.is_left_descent(w, s) for s in s_nodes(group))


# --- closed forms ---------------------------------------------------------------


def eo_words(group: AffineWeylGroup) -> list[tuple[int, ...]]:
    """Reduced words (times tau) of the Coxeter-type EO elements, in written order."""
    m = group.m
    if group.kind is DiagramKind.ODD:
        return [tuple(range(i)) for i in range(m + 1)]
    return [()] + [(0,) + tuple(range(2, i)) for i in range(2, m + 1)]


def _make_eo(group: AffineWeylGroup, word) -> EOElement:
    w = group.from_word(word, tail=group.tau)
    return EOElement(
        element=w,
        word=tuple(word),
        support=sigma_support(group, w),
        is_sigma_coxeter=is_sigma_coxeter(group, w),
        length=group.length(w),
    )


class EOVerificationError(RuntimeError):
    pass


def eo_cox(n: int, verify: bool = True) -> list[EOElement]:
    group = group_for_n(n)
    out = [_make_eo(group, w) for w in eo_words(group)]
    if verify:
        full = frozenset(group.nodes())
        for e in out:
            if e.length != len(e.word):
                raise EOVerificationError(f"word {e.word} is not reduced")
            if not (e.is_sigma_coxeter and e.support < full):
                raise EOVerificationError(f"{e.word} fails the sigma-Coxeter support condition")
            if not is_s_minimal(group, e.element):
                raise EOVerificationError(f"{e.word} is not S-minimal")
            if not any(group.bruhat_leq(e.element, t) for t in mu_translations(group)):
                raise EOVerificationError(f"{e.word} is not admissible")
    return sorted(out, key=lambda e: e.length)


def eo_cox_from_adm(n: int) -> list[EOElement]:
    """EO_cox by filtering all of Adm(mu); exponential, for cross-checks at small n."""
    group = group_for_n(n)
    full = frozenset(group.nodes())
    out = []
    for w in adm(n):
        if not is_s_minimal(group, w):
            continue
        if sigma_support(group, w) < full and is_sigma_coxeter(group, w):
            word, _ = group.split_word(w)
            out.append(_make_eo(group, word))
    return sorted(out, key=lambda e: (e.length, e.word))


def jset(n: int) -> list[SigmaOrbitDatum]:
    """The family of tau-stable node sets of constant distance, with flat/sharp parts and w_Sigma."""
    group = group_for_n(n)
    dist = node_distances(group)
    orbits = tau_orbits(group)
    by_support = {e.support: e for e in eo_cox(n)}
    out = []
    for sigma in orbits:
        d = dist[next(iter(sigma))]
        flat = frozenset().union(*(o for o in orbits if o != sigma and dist[next(iter(o))] <= d))
        sharp = frozenset().union(*(o for o in orbits if dist[next(iter(o))] > d))
        eo = by_support.get(flat)
        if eo is None:
            raise EOVerificationError(f"no EO element with support {sorted(flat)}")
        out.append(SigmaOrbitDatum(sigma, flat, sharp, d, eo.element, eo.word))
    return sorted(out, key=lambda s: (s.distance, sorted(s.sigma)))
