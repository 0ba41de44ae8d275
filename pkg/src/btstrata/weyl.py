"""Finite and extended affine Weyl groups for the ramified unitary local diagrams.

Two affine diagrams are supported:

* ``OddCBC`` (n = 2m + 1): the C-BC_m diagram, a chain with double bonds at
  both ends.  Hyperplanes are ``2 z_i in Z`` and ``z_i +- z_j in Z``; the base
  alcove is ``0 < z_1 < ... < z_m < 1/2``.
* ``EvenBC`` (n = 2m): the B-C_m diagram, a fork {s_0, s_1} into s_2 and a
  double bond at s_m.  Hyperplanes are ``z_i in Z`` and ``z_i +- z_j in Z``;
  the base alcove is ``z_1 > ... > z_m > 0, z_1 + z_2 < 1``.

In both cases ``t^lambda`` (lambda in Z^m) acts by ``z -> z + lambda`` and
the last coordinate of the translation (the similitude factor) never moves
the apartment.  Elements are pairs (translation, signed permutation) acting
by ``z -> w(z) + lambda``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence


class InvalidRankError(ValueError):
    pass


class DiagramKind(str, enum.Enum):
    ODD = "OddCBC"
    EVEN = "EvenBC"


@dataclass(frozen=True)
class SignedPermutation:
    """``images[i] = +-(j+1)`` means ``e_{i+1} -> +-e_{j+1}``."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(abs(v) for v in self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a signed permutation: {self.images}")

    @classmethod
    def identity(cls, m: int) -> SignedPermutation:
        return cls(tuple(range(1, m + 1)))

    @property
    def rank(self) -> int:
        return len(self.images)

    def __mul__(self, other: SignedPermutation) -> SignedPermutation:
        # (self * other)(e_i) = self(other(e_i))
        out = []
        for v in other.images:
            w = self.images[abs(v) - 1]
            out.append(w if v > 0 else -w)
        return SignedPermutation(tuple(out))

    def inverse(self) -> SignedPermutation:
        out = [0] * len(self.images)
        for i, v in enumerate(self.images):
            out[abs(v) - 1] = (i + 1) if v > 0 else -(i + 1)
        return SignedPermutation(tuple(out))

    def apply(self, vec: Sequence) -> tuple:
        out = [0] * len(self.images)
        for i, v in enumerate(self.images):
            out[abs(v) - 1] += vec[i] if v > 0 else -vec[i]
        return tuple(out)

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, len(self.images) + 1))


def _swap(m: int, i: int, j: int) -> SignedPermutation:
    imgs = list(range(1, m + 1))
    imgs[i - 1], imgs[j - 1] = j, i
    return SignedPermutation(tuple(imgs))


def _flip(m: int, i: int) -> SignedPermutation:
    imgs = list(range(1, m + 1))
    imgs[i - 1] = -i
    return SignedPermutation(tuple(imgs))


@dataclass(frozen=True)
class IwahoriWeylElement:
    """``t^translation * finite_part``; ``translation = (lambda_1..lambda_m, y)``."""

    translation: tuple[int, ...]
    finite_part: SignedPermutation

    @classmethod
    def identity(cls, m: int) -> IwahoriWeylElement:
        return cls((0,) * (m + 1), SignedPermutation.identity(m))

    @classmethod
    def pure_translation(cls, lam: Sequence[int], y: int = 0) -> IwahoriWeylElement:
        lam = tuple(lam)
        return cls(lam + (y,), SignedPermutation.identity(len(lam)))

    @property
    def rank(self) -> int:
        return self.finite_part.rank

    @property
    def lam(self) -> tuple[int, ...]:
        return self.translation[:-1]

    @property
    def similitude(self) -> int:
        return self.translation[-1]

    def __mul__(self, other: IwahoriWeylElement) -> IwahoriWeylElement:
        moved = self.finite_part.apply(other.lam)
        lam = tuple(a + b for a, b in zip(self.lam, moved))
        return IwahoriWeylElement(
            lam + (self.similitude + other.similitude,),
            self.finite_part * other.finite_part,
        )

    def inverse(self) -> IwahoriWeylElement:
        winv = self.finite_part.inverse()
        lam = tuple(-a for a in winv.apply(self.lam))
        return IwahoriWeylElement(lam + (-self.similitude,), winv)

    def act(self, point: Sequence) -> tuple:
        moved = self.finite_part.apply(point)
        return tuple(a + b for a, b in zip(moved, self.lam))


class CoxeterSystem:
    """Shared Coxeter-group algorithms over a concrete element type.

    Subclasses provide ``simple`` (node label -> element), ``identity``,
    ``length`` and ``is_left_descent``.
    """

    simple: dict

    def nodes(self) -> list:
        return sorted(self.simple)

    def is_right_descent(self, x, i) -> bool:
        return self.is_left_descent(x.inverse(), i)

    def left_descents(self, x) -> list:
        return [i for i in self.nodes() if self.is_left_descent(x, i)]

    def right_descents(self, x) -> list:
        return [i for i in self.nodes() if self.is_right_descent(x, i)]

    def split_word(self, x):
        """Return ``(word, omega)`` with ``x = s_word[0] ... s_word[-1] * omega``."""
        word = []
        while True:
            for i in self.nodes():
                if self.is_left_descent(x, i):
                    word.append(i)
                    x = self.simple[i] * x
                    break
            else:
                return word, x

    def reduced_word(self, x) -> list:
        return self.split_word(x)[0]

    def from_word(self, word: Iterable, tail=None):
        x = self.identity if tail is None else tail
        for i in reversed(list(word)):
            x = self.simple[i] * x
        return x

    def support(self, x) -> frozenset:
        return frozenset(self.reduced_word(x))

    def omega_part(self, x):
        return self.split_word(x)[1]

    def bruhat_leq(self, x, y) -> bool:
        word, omega = self.split_word(y)
        if self.omega_part(x) != omega:
            return False
        lx = self.length(x)
        remaining = len(word)
        for s in word:
            if lx > remaining:
                return False
            if self.is_left_descent(x, s):
                x = self.simple[s] * x
                lx -= 1
            remaining -= 1
        return x == omega

    def lower_interval(self, y) -> frozenset:
        word, omega = self.split_word(y)
        elems = {omega}
        for s in reversed(word):
            g = self.simple[s]
            elems |= {g * z for z in elems}
        return frozenset(elems)

    def ball(self, radius: int, start=None) -> dict:
        """Breadth-first search in the Cayley graph; element -> length."""
        start = self.identity if start is None else start
        seen = {start: self.length(start)}
        frontier = [start]
        for _ in range(radius):
            nxt = []
            for x in frontier:
                for g in self.simple.values():
                    y = g * x
                    if y not in seen:
                        seen[y] = self.length(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    def is_minimal_double_coset_rep(self, x, left: Iterable, right: Iterable) -> bool:
        return not any(self.is_left_descent(x, i) for i in left) and not any(
            self.is_right_descent(x, i) for i in right
        )

    def min_double_coset_rep(self, x, left: Iterable, right: Iterable):
        left, right = list(left), list(right)
        while True:
            for i in left:
                if self.is_left_descent(x, i):
                    x = self.simple[i] * x
                    break
            else:
                for i in right:
                    if self.is_right_descent(x, i):
                        x = x * self.simple[i]
                        break
                else:
                    return x

    @cached_property
    def _simple_lookup(self) -> dict:
        return {g: i for i, g in self.simple.items()}

    def conjugate_nodes(self, w, nodes: Iterable) -> frozenset:
        """``{s simple : s = w s_j w^-1 for some j in nodes}``."""
        winv = w.inverse()
        out = set()
        for j in nodes:
            c = w * self.simple[j] * winv
            if c in self._simple_lookup:
                out.add(self._simple_lookup[c])
        return frozenset(out)

    def longest_length(self, nodes: Iterable) -> int:
        """Length of the longest element of the (finite) parabolic ``W_nodes``."""
        nodes = list(nodes)
        x = self.identity
        while True:
            for i in nodes:
                if not self.is_right_descent(x, i):
                    x = x * self.simple[i]
                    break
            else:
                return self.length(x)

    def coxeter_order(self, i, j, bound: int = 12) -> int | None:
        g = self.simple[i] * self.simple[j]
        x = g
        for k in range(1, bound + 1):
            if x == self.identity:
                return k
            x = x * g
        return None

    @cached_property
    def edges(self) -> dict:
        """``{(i, j): m_ij}`` for nodes joined in the Coxeter diagram."""
        out = {}
        for i, j in combinations(self.nodes(), 2):
            order = self.coxeter_order(i, j)
            if order != 2:
                out[(i, j)] = order
        return out


class AffineWeylGroup(CoxeterSystem):
    """Iwahori-Weyl group of GU(1, n-1) at a ramified prime, as a group context."""

    def __init__(self, kind: DiagramKind | str, m: int):
        kind = DiagramKind(kind)
        if m < 1 or (kind is DiagramKind.EVEN and m < 2):
            raise InvalidRankError(f"rank m={m} unsupported for {kind.value}")
        self.kind = kind
        self.m = m
        self.identity = IwahoriWeylElement.identity(m)
        self._build()

    @property
    def n(self) -> int:
        return 2 * self.m + 1 if self.kind is DiagramKind.ODD else 2 * self.m

    def _unit(self, i: int, c: int = 1) -> tuple[int, ...]:
        v = [0] * self.m
        v[i - 1] = c
        return tuple(v)

    def _build(self) -> None:
        m = self.m
        E = IwahoriWeylElement
        zero = (0,) * (m + 1)
        roots = []
        if self.kind is DiagramKind.ODD:
            # walls: s_0: 1 - 2 z_m, s_i: z_{m+1-i} - z_{m-i}, s_m: z_1
            walls = {0: (tuple(-2 if k == m - 1 else 0 for k in range(m)), 1)}
            simple = {0: E(self._unit(m) + (0,), _flip(m, m))}
            for i in range(1, m):
                a, b = m + 1 - i, m - i
                walls[i] = (tuple(1 if k == a - 1 else -1 if k == b - 1 else 0 for k in range(m)), 0)
                simple[i] = E(zero, _swap(m, a, b))
            walls[m] = (self._unit(1), 0)
            simple[m] = E(zero, _flip(m, 1))
            roots += [self._unit(i, 2) for i in range(1, m + 1)]
            # base point 0 < z_1 < ... < z_m < 1/2
            den = 2 * m + 2
            base = tuple(range(1, m + 1))
        else:
            walls = {0: (tuple(-1 if k < 2 else 0 for k in range(m)), 1)}
            lam0 = tuple(1 if k < 2 else 0 for k in range(m))
            imgs = list(range(1, m + 1))
            imgs[0], imgs[1] = -2, -1
            simple = {0: E(lam0 + (0,), SignedPermutation(tuple(imgs)))}
            for i in range(1, m):
                walls[i] = (tuple(1 if k == i - 1 else -1 if k == i else 0 for k in range(m)), 0)
                simple[i] = E(zero, _swap(m, i, i + 1))
            walls[m] = (self._unit(m), 0)
            simple[m] = E(zero, _flip(m, m))
            roots += [self._unit(i) for i in range(1, m + 1)]
            # base point z_1 > ... > z_m > 0, z_1 + z_2 < 1
            den = 2 * m + 3
            base = tuple(m + 1 - i for i in range(1, m + 1))
        for i, j in combinations(range(m), 2):
            for sign in (1, -1):
                v = [0] * m
                v[i], v[j] = 1, sign
                roots.append(tuple(v))
        self.walls = walls
        self.simple = simple
        self.positive_roots = roots
        self._den = den
        self._base = base

    # --- geometry -------------------------------------------------------
    def base_point(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._base)

    def _image_numerators(self, x: IwahoriWeylElement) -> tuple[int, ...]:
        moved = x.finite_part.apply(self._base)
        return tuple(a + self._den * b for a, b in zip(moved, x.lam))

    def length(self, x: IwahoriWeylElement) -> int:
        """Number of hyperplanes separating the base alcove from its image."""
        img = self._image_numerators(x)
        den = self._den
        total = 0
        for a in self.positive_roots:
            p = sum(c * v for c, v in zip(a, self._base))
            q = sum(c * v for c, v in zip(a, img))
            total += abs(q // den - p // den)
        return total

    def is_left_descent(self, x: IwahoriWeylElement, i: int) -> bool:
        a, c = self.walls[i]
        img = self._image_numerators(x)
        return sum(u * v for u, v in zip(a, img)) + c * self._den < 0

    # --- Omega ------------------------------------------------------------
    def omega(self, x: IwahoriWeylElement) -> tuple[int, ...]:
        """Image of ``x`` in ``W~ / W_a``."""
        if self.kind is DiagramKind.ODD:
            return (x.similitude,)
        return (sum(x.lam) % 2, x.similitude)

    @cached_property
    def tau(self) -> IwahoriWeylElement:
        """Length-zero element in the Omega-class of ``t^{lambda_1}``."""
        if self.kind is DiagramKind.ODD:
            return IwahoriWeylElement.pure_translation((0,) * self.m, 1)
        return IwahoriWeylElement(self._unit(1) + (1,), _flip(self.m, 1))

    def node_action(self, omega_elt: IwahoriWeylElement) -> dict:
        """Permutation of the affine nodes induced by conjugation."""
        if self.length(omega_elt) != 0:
            raise ValueError("node action is defined for length-zero elements only")
        inv = omega_elt.inverse()
        return {i: self._simple_lookup[omega_elt * g * inv] for i, g in self.simple.items()}

    @cached_property
    def tau_action(self) -> dict:
        return self.node_action(self.tau)

    @cached_property
    def sigma_action(self) -> dict:
        return {i: i for i in self.nodes()}

    @cached_property
    def special_nodes(self) -> frozenset:
        """Nodes whose removal leaves the full finite Weyl group (order 2^m m!)."""
        out = set()
        for i in self.nodes():
            rest = [j for j in self.nodes() if j != i]
            if self.longest_length(rest) == self.m * self.m:
                out.add(i)
        return frozenset(out)

    def translation(self, lam: Sequence[int], y: int = 1) -> IwahoriWeylElement:
        if len(lam) != self.m:
            raise ValueError("translation has wrong rank")
        return IwahoriWeylElement.pure_translation(lam, y)

    def finite_weyl_group(self) -> list[SignedPermutation]:
        from itertools import permutations, product

        out = []
        for perm in permutations(range(1, self.m + 1)):
            for signs in product((1, -1), repeat=self.m):
                out.append(SignedPermutation(tuple(s * p for s, p in zip(signs, perm))))
        return out

    def describe(self) -> dict:
        return {
            "kind": self.kind.value,
            "m": self.m,
            "n": self.n,
            "nodes": self.nodes(),
            "edges": [[i, j, mij] for (i, j), mij in sorted(self.edges.items())],
            "special_nodes": sorted(self.special_nodes),
            "tau_action": {str(k): v for k, v in sorted(self.tau_action.items())},
            "sigma_action": {str(k): v for k, v in sorted(self.sigma_action.items())},
        }


def make_group(kind: DiagramKind | str, m: int) -> AffineWeylGroup:
    if m < 2:
        raise InvalidRankError(f"rank m={m} below supported minimum 2")
    return AffineWeylGroup(kind, m)


def group_for_n(n: int) -> AffineWeylGroup:
    """Group context for GU(1, n-1); n = 3 uses the rank-one odd diagram."""
    if n < 3:
        raise InvalidRankError(f"n={n} must be at least 3")
    if n % 2:
        return AffineWeylGroup(DiagramKind.ODD, n // 2)
    return AffineWeylGroup(DiagramKind.EVEN, n // 2)


def length(group: AffineWeylGroup, x: IwahoriWeylElement) -> int:
    return group.length(x)


def bruhat_leq(group: CoxeterSystem, x, y) -> bool:
    return group.bruhat_leq(x, y)


def reduced_word(group: CoxeterSystem, x):
    return group.split_word(x)


class FiniteWeylGroup(CoxeterSystem):
    """Weyl group of type B_d or D_d as signed permutations.

    Nodes are labelled 1..d with s_i = (e_i - e_{i+1}) for i < d and
    s_d = e_d (type B) or e_{d-1} + e_d (type D).
    """

    def __init__(self, cartan_type: str, d: int):
        if cartan_type not in ("B", "D"):
            raise ValueError("cartan_type must be 'B' or 'D'")
        if d < (1 if cartan_type == "B" else 2):
            raise InvalidRankError(f"rank {d} too small for type {cartan_type}")
        self.cartan_type = cartan_type
        self.d = d
        self.identity = SignedPermutation.identity(d)
        simple = {i: _swap(d, i, i + 1) for i in range(1, d)}
        if cartan_type == "B":
            simple[d] = _flip(d, d)
        else:
            imgs = list(range(1, d + 1))
            imgs[d - 2], imgs[d - 1] = -d, -(d - 1)
            simple[d] = SignedPermutation(tuple(imgs))
        self.simple = simple
        roots = []
        for i, j in combinations(range(d), 2):
            for sign in (1, -1):
                v = [0] * d
                v[i], v[j] = 1, sign
                roots.append(tuple(v))
        if cartan_type == "B":
            roots += [tuple(1 if k == i else 0 for k in range(d)) for i in range(d)]
        self.positive_roots = roots
        self._simple_roots = {
            i: tuple(1 if k == i - 1 else -1 if k == i else 0 for k in range(d)) for i in range(1, d)
        }
        self._simple_roots[d] = (
            tuple(1 if k == d - 1 else 0 for k in range(d))
            if cartan_type == "B"
            else tuple(1 if k >= d - 2 else 0 for k in range(d))
        )

    @staticmethod
    def _positive(v: Sequence[int]) -> bool:
        for c in v:
            if c:
                return c > 0
        raise ValueError("zero vector")

    def length(self, w: SignedPermutation) -> int:
        return sum(1 for a in self.positive_roots if not self._positive(w.apply(a)))

    def is_left_descent(self, w: SignedPermutation, i: int) -> bool:
        # s_i w < w  iff  w^{-1}(alpha_i) < 0
        return not self._positive(w.inverse().apply(self._simple_roots[i]))

    @cached_property
    def delta(self) -> dict:
        """Diagram automorphism swapping s_{d-1} and s_d (type D only)."""
        if self.cartan_type != "D":
            return {i: i for i in self.nodes()}
        out = {i: i for i in self.nodes()}
        out[self.d - 1], out[self.d] = self.d, self.d - 1
        return out
