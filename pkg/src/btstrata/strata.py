"""Bruhat-Tits strata of S_Lambda at the level of the finite orthogonal space B_Lambda.

A point is a maximal isotropic ``U`` of B_Lambda over F_{q^k} (fixed family in
the even case).  Its Xi-chain is read off on the dual side: with
``R_j = U cap sigma U cap ... cap sigma^j U`` the sums ``M_j = R_j^perp`` grow by
one dimension per step until ``R_d`` is sigma-stable.  The stratum of ``U`` is
the sub-vertex lattice ``W' = R_d^perp``, an F_q-rational subspace with
``W'^perp = R_d subset W'`` and type ``dim W' - dim R_d = t - 2 dim R_d``.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from itertools import combinations

from .finite_orthogonal import (
    GFField,
    OrthogonalPoint,
    OrthogonalSpace,
    Rows,
    SpaceKind,
    all_isotropic_subspaces,
    dl_closure_points,
    dl_points,
    frob_rows,
    intersection_chain,
    max_isotropic_batches,
    rref,
)


@dataclass(frozen=True)
class SubVertexNode:
    """F_q-rational W' with W'^perp inside W'; stored through its radical R = W'^perp."""

    radical: Rows
    subspace: Rows
    type: int

    @property
    def key(self) -> tuple:
        return (self.type, self.radical)

    def __lt__(self, other: SubVertexNode) -> bool:
        return self.key < other.key

    def label(self) -> str:
        if not self.radical:
            return f"t{self.type}:top"
        return f"t{self.type}:" + "|".join("".join(str(x) for x in r) for r in self.radical)


@dataclass(frozen=True)
class XiChain:
    intersections: tuple[Rows, ...]  # R_0 = U, R_1, ..., R_d
    steps: tuple[Rows, ...]  # M_j = R_j^perp over F_{q^k}
    d: int
    node: SubVertexNode


def _descend(space: OrthogonalSpace, F: GFField, rows: Rows) -> Rows:
    """Rewrite a sigma-stable subspace in RREF with F_q entries."""
    back = {F.embed(space.base, v): v for v in range(space.q)}
    try:
        return tuple(tuple(back[x] for x in r) for r in rows)
    except KeyError as exc:
        raise ValueError("subspace is not F_q-rational") from exc


def make_node(space: OrthogonalSpace, radical: Rows) -> SubVertexNode:
    B = space.base
    radical = rref(B, radical) if radical else ()
    return SubVertexNode(radical, space.perp(B, radical), space.t - 2 * len(radical))


def xi_chain(u: OrthogonalPoint, space: OrthogonalSpace, k: int) -> XiChain:
    F = space.field(k)
    chain = intersection_chain(space, F, u.rows)
    limit = chain[-1]
    if rref(F, frob_rows(F, limit)) != limit:
        raise AssertionError("Xi-chain limit is not sigma-stable")
    node = make_node(space, _descend(space, F, limit))
    steps = tuple(space.perp(F, R) for R in chain)
    return XiChain(tuple(chain), steps, len(chain) - 1, node)


def type_formula_check(n: int, d: int) -> int:
    """Type of the stratum whose chain has length d: 2d + 1 for odd n, 2d for even n."""
    if n < 1:
        raise ValueError("n must be positive")
    if n % 2:
        if not 0 <= d <= n // 2:
            raise ValueError(f"d={d} out of range for odd n={n}")
        return 2 * d + 1
    if not 1 <= d <= n // 2:
        raise ValueError(f"d={d} out of range for even n={n}")
    return 2 * d


# --- sub-vertex lattices and the local building ----------------------------------------------


def sub_vertex_lattices(space: OrthogonalSpace) -> list[SubVertexNode]:
    """Every W' with W'^perp subset W', i.e. every F_q-rational totally isotropic radical."""
    out = []
    for r in range(space.witt_index() + 1):
        for R in all_isotropic_subspaces(space, r, 1):
            out.append(make_node(space, R))
    return sorted(out)


def _contained(space: OrthogonalSpace, small: Rows, big: Rows) -> bool:
    B = space.base
    if not small:
        return True
    return len(rref(B, list(big) + list(small))) == len(big)


def node_leq(space: OrthogonalSpace, a: SubVertexNode, b: SubVertexNode) -> bool:
    """W'_a subset W'_b, equivalently R_b subset R_a."""
    return _contained(space, b.radical, a.radical)


@dataclass
class LocalBuilding:
    """Order complex of the sub-vertex lattices below one node."""

    nodes: list[SubVertexNode]
    below: dict = field(default_factory=dict)  # index -> set of indices strictly below

    @property
    def edges(self) -> list[tuple[int, int]]:
        return sorted((i, j) for j, lows in self.below.items() for i in lows)

    def neighbours(self) -> dict:
        adj = defaultdict(set)
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def is_connected(self) -> bool:
        if not self.nodes:
            return True
        adj = self.neighbours()
        seen, queue = {0}, deque([0])
        while queue:
            u = queue.popleft()
            for v in adj[u] - seen:
                seen.add(v)
                queue.append(v)
        return len(seen) == len(self.nodes)

    def leaves(self) -> list[int]:
        adj = self.neighbours()
        return [i for i in range(len(self.nodes)) if len(adj[i]) == 1]

    def maximal_chains(self) -> list[tuple[int, ...]]:
        above = defaultdict(set)
        for j, lows in self.below.items():
            for i in lows:
                above[i].add(j)
        minimal = [i for i in range(len(self.nodes)) if not self.below.get(i)]
        out = []

        def walk(chain):
            ups = [j for j in above[chain[-1]] if all(j in above[c] for c in chain)]
            covers = [j for j in ups if not any(j in above[x] for x in ups)]
            if not covers:
                out.append(tuple(chain))
            for j in sorted(covers):
                walk(chain + [j])

        for i in minimal:
            walk([i])
        return out

    def simplices(self, max_size: int | None = None) -> list[tuple[int, ...]]:
        """All chains (totally ordered subsets)."""
        out = [(i,) for i in range(len(self.nodes))]
        frontier = out[:]
        while frontier:
            nxt = []
            for s in frontier:
                for j, lows in self.below.items():
                    if s[-1] in lows:
                        nxt.append(s + (j,))
            out += nxt
            frontier = [s for s in nxt if max_size is None or len(s) < max_size]
        return out


def local_building(space: OrthogonalSpace) -> LocalBuilding:
    nodes = sub_vertex_lattices(space)
    below = {j: set() for j in range(len(nodes))}
    for i, j in combinations(range(len(nodes)), 2):
        a, b = nodes[i], nodes[j]
        if a.type < b.type and node_leq(space, a, b):
            below[j].add(i)
        elif b.type < a.type and node_leq(space, b, a):
            below[i].add(j)
    return LocalBuilding(nodes, below)


# --- stratification --------------------------------------------------------------------


@dataclass
class Stratification:
    space: OrthogonalSpace
    k: int
    strata: dict  # SubVertexNode -> set of OrthogonalPoint
    chains: dict  # OrthogonalPoint -> (d, node)
    total: int
    outside: int = 0
    checks: dict = field(default_factory=dict)

    @property
    def open_stratum(self) -> set:
        top = make_node(self.space, ())
        return self.strata.get(top, set())

    def counts_by_type(self) -> dict:
        out = defaultdict(int)
        for node, pts in self.strata.items():
            out[node.type] += len(pts)
        return dict(sorted(out.items()))

    def report(self) -> dict:
        return {
            "kind": self.space.kind.value,
            "t": self.space.t,
            "q": self.space.q,
            "k": self.k,
            "total": self.total,
            "outside": self.outside,
            "by_type": {str(t): c for t, c in self.counts_by_type().items()},
            "strata": [
                {"type": node.type, "node": node.label(), "count": len(pts)}
                for node, pts in sorted(self.strata.items(), key=lambda kv: kv[0].key)
            ],
            "checks": {name: ("PASS" if ok else "FAIL") for name, ok in self.checks.items()},
        }


def drops_by_one(chain: XiChain) -> bool:
    dims = [len(R) for R in chain.intersections]
    return all(a - b == 1 for a, b in zip(dims, dims[1:]))


def stratify(space: OrthogonalSpace, k: int, jobs: int = 1, verify: bool = True) -> Stratification:
    """Assign every point of S_Lambda(F_{q^k}) to the node of its Xi-chain limit.

    All maximal isotropics (fixed family) are scanned; those whose chain grows by
    exactly one at every step are the points of S_Lambda, the rest are counted in
    ``outside``.
    """
    if space.kind is SpaceKind.GENERIC:
        raise ValueError("stratify needs an OddSplit or EvenMinus space")
    strata: dict = defaultdict(set)
    chains = {}
    outside = 0
    for _piv, U, tags in max_isotropic_batches(space, k, jobs):
        for i in range(U.shape[0]):
            if tags is not None and tags[i]:
                continue
            pt = OrthogonalPoint(tuple(tuple(int(x) for x in r) for r in U[i]), None if tags is None else 0)
            ch = xi_chain(pt, space, k)
            if not drops_by_one(ch):
                outside += 1
                continue
            strata[ch.node].add(pt)
            chains[pt] = (ch.d, ch.node)
    total = len(chains)
    result = Stratification(space, k, dict(strata), chains, total, outside)
    if verify:
        result.checks = verify_stratification(result, jobs)
    return result


def verify_stratification(S: Stratification, jobs: int = 1) -> dict:
    space, k = S.space, S.k
    sets = list(S.strata.values())
    union = set().union(*sets) if sets else set()
    checks = {
        "partition_sum": sum(len(s) for s in sets) == S.total,
        "partition_disjoint": len(union) == S.total,
    }
    dl = dl_points(space, k, jobs)
    checks["open_equals_dl"] = S.open_stratum == dl
    closure = dl_closure_points(space, k, jobs)
    checks["closure_equals_union"] = closure == union
    even = space.kind is SpaceKind.EVEN_MINUS
    chain_ok = type_ok = True
    for d, node in S.chains.values():
        lo = 1 if even else 0
        chain_ok &= lo <= d <= space.t // 2
        try:
            type_ok &= type_formula_check(space.t, d) == node.type
        except ValueError:
            type_ok = False
    checks["chain_range"] = chain_ok
    checks["type_formula"] = type_ok
    # each node's open stratum has the size of the Coxeter variety of its own B_{Lambda'}
    sub_ok = True
    for node, pts in S.strata.items():
        r = len(node.radical)
        if r == 0:
            continue
        sub = OrthogonalSpace.make(space.kind, space.q, space.t - 2 * r)
        sub_ok &= len(pts) == len(dl_points(sub, k))
    checks["substratum_sizes"] = sub_ok
    return checks
