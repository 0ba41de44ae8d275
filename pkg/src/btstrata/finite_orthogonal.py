"""Exact linear algebra over F_{q^k}, quadratic spaces B_Lambda and Coxeter-type DL varieties.

Field elements are integers ``0 <= x < q^k``; the base-q digits of ``x`` are the
coefficients of a polynomial modulo a fixed primitive polynomial, so the prime
field F_q sits inside as ``0..q-1``.  Arithmetic goes through precomputed
tables (numpy arrays for vectorised work, nested lists for scalar loops).

Subspaces are tuples of rows in reduced row echelon form, which is canonical.
"""
from __future__ import annotations

import enum
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

import numpy as np

from .weyl import FiniteWeylGroup

Rows = tuple[tuple[int, ...], ...]


def _is_prime(p: int) -> bool:
    return p > 1 and all(p % d for d in range(2, int(p**0.5) + 1))


# --- finite fields --------------------------------------------------------------


class GFField:
    """F_{p^k} with table arithmetic."""

    def __init__(self, p: int, k: int = 1):
        if not _is_prime(p):
            raise ValueError("characteristic must be prime")
        if k < 1:
            raise ValueError("degree must be positive")
        self.p, self.k = p, k
        self.order = Q = p**k
        self.modulus = self._primitive_poly()
        exp = np.zeros(2 * Q, dtype=np.int64)
        log = np.zeros(Q, dtype=np.int64)
        x = 1
        for i in range(Q - 1):
            exp[i] = x
            log[x] = i
            x = self._times_x(x)
        exp[Q - 1 : 2 * Q - 2] = exp[: Q - 1]
        self.exp, self.log = exp, log
        digits = np.array([[(v // p**j) % p for j in range(k)] for v in range(Q)], dtype=np.int64)
        weights = p ** np.arange(k, dtype=np.int64)
        self.add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        self.neg = ((-digits) % p) @ weights
        a = np.arange(Q)
        self.mul = np.zeros((Q, Q), dtype=np.int64)
        nz = a[1:]
        self.mul[1:, 1:] = exp[(log[nz][:, None] + log[nz][None, :]) % (Q - 1)]
        self.inv = np.zeros(Q, dtype=np.int64)
        self.inv[1:] = exp[(-log[nz]) % (Q - 1)]
        self.frob = np.array([self._pow(v, p) for v in range(Q)], dtype=np.int64)
        self.sub = self.add[:, self.neg]
        # list mirrors for scalar loops
        self.addl = self.add.tolist()
        self.subl = self.sub.tolist()
        self.mull = self.mul.tolist()
        self.invl = self.inv.tolist()
        self.negl = self.neg.tolist()
        self.frobl = self.frob.tolist()

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    def __eq__(self, other):
        return isinstance(other, GFField) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((self.p, self.k))

    def _poly_mulmod(self, a, b, mod):
        p = self.p
        out = [0] * (2 * self.k)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
        for deg in range(len(out) - 1, self.k - 1, -1):
            c = out[deg]
            if c:
                for j in range(self.k):
                    out[deg - self.k + j] = (out[deg - self.k + j] - c * mod[j]) % p
                out[deg] = 0
        return out[: self.k]

    def _primitive_poly(self) -> tuple[int, ...]:
        """Lowest coefficients c_0..c_{k-1} of a monic primitive polynomial."""
        p, k, Q = self.p, self.k, self.p**self.k
        if k == 1:
            # x - g for a primitive root g
            for g in range(1, p):
                if p == 2 or all(pow(g, (p - 1) // r, p) != 1 for r in _prime_factors(p - 1)):
                    return ((-g) % p,)
        factors = _prime_factors(Q - 1)
        for coeffs in product(range(p), repeat=k):
            if coeffs[0] == 0:
                continue
            x = [0] * k
            x[1 % k] = 1 if k > 1 else 0

            def power(e):
                res = [1] + [0] * (k - 1)
                base = list(x)
                while e:
                    if e & 1:
                        res = self._poly_mulmod(res, base, coeffs)
                    base = self._poly_mulmod(base, base, coeffs)
                    e >>= 1
                return res

            one = [1] + [0] * (k - 1)
            if power(Q - 1) != one:
                continue
            if all(power((Q - 1) // r) != one for r in factors):
                return tuple(coeffs)
        raise RuntimeError("no primitive polynomial found")

    def _times_x(self, v: int) -> int:
        p, k = self.p, self.k
        digits = [(v // p**j) % p for j in range(k)]
        if k == 1:
            # multiply by the primitive root g = -c_0
            return (v * (-self.modulus[0])) % p
        top = digits[-1]
        shifted = [0] + digits[:-1]
        out = [(shifted[j] - top * self.modulus[j]) % p for j in range(k)]
        return sum(c * p**j for j, c in enumerate(out))

    def _pow(self, v: int, e: int) -> int:
        if v == 0:
            return 0
        return int(self.exp[(int(self.log[v]) * e) % (self.order - 1)])

    def frobenius_power(self, v: int, j: int) -> int:
        j %= self.k
        for _ in range(j):
            v = self.frobl[v]
        return v

    def elements(self) -> range:
        return range(self.order)

    def is_square(self, v: int) -> bool:
        return v == 0 or int(self.log[v]) % 2 == 0 if self.p != 2 else True

    def sqrt(self, v: int) -> int:
        if v == 0:
            return 0
        lg = int(self.log[v])
        if lg % 2:
            raise ValueError("not a square")
        return int(self.exp[lg // 2])

    def embed(self, base: GFField, v: int) -> int:
        """Image of v in F_{p^base.k} inside this field (only prime-field values are embedded literally)."""
        if base.k == 1:
            return v
        if self.k % base.k:
            raise ValueError("not a subfield")
        if v == 0:
            return 0
        # F_{p^e}^x is generated by g^{(Q-1)/(p^e-1)}
        step = (self.order - 1) // (base.order - 1)
        return int(self.exp[int(base.log[v]) * step])


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def GF(p: int, k: int = 1) -> GFField:
    return GFField(p, k)


# --- linear algebra ---------------------------------------------------------------


def rref(F: GFField, rows: Iterable[Sequence[int]]) -> Rows:
    M = [list(r) for r in rows]
    if not M:
        return ()
    ncols = len(M[0])
    mul, sub, inv = F.mull, F.subl, F.invl
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        iv = inv[M[r][c]]
        if iv != 1:
            M[r] = [mul[iv][x] for x in M[r]]
        pr = M[r]
        for i in range(len(M)):
            if i != r:
                f = M[i][c]
                if f:
                    mf = mul[f]
                    M[i] = [sub[a][mf[b]] for a, b in zip(M[i], pr)]
        r += 1
        if r == len(M):
            break
    return tuple(tuple(row) for row in M[:r])


def rank(F: GFField, rows) -> int:
    return len(rref(F, rows))


def pivots(rows: Rows) -> tuple[int, ...]:
    return tuple(next(i for i, x in enumerate(r) if x) for r in rows)


def nullspace(F: GFField, rows, ncols: int) -> Rows:
    """Basis (in RREF) of {x : A x = 0}."""
    R = rref(F, rows)
    piv = pivots(R)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(R, piv):
            v[pc] = F.negl[row[f]]
        basis.append(v)
    return rref(F, basis)


def nullspace_mod_p(rows, ncols: int, p: int) -> list[list[int]]:
    return [list(r) for r in nullspace(GF(p, 1), [[x % p for x in r] for r in rows], ncols)]


def intersect(F: GFField, U: Rows, V: Rows, ncols: int) -> Rows:
    if not U or not V:
        return ()
    ann = list(nullspace(F, U, ncols)) + list(nullspace(F, V, ncols))
    if not ann:
        return rref(F, U)
    return nullspace(F, ann, ncols)


def frob_rows(F: GFField, U: Rows, j: int = 1) -> Rows:
    j %= F.k
    if j == 0:
        return U
    table = F.frob
    for _ in range(j - 1):
        table = F.frob[table]
    return rref(F, [[int(table[x]) for x in r] for r in U])


# --- quadratic spaces ---------------------------------------------------------------


class SpaceKind(str, enum.Enum):
    ODD_SPLIT = "OddSplit"
    EVEN_MINUS = "EvenMinus"
    GENERIC = "Generic"


class OrthogonalSpace:
    """Nondegenerate symmetric bilinear form on F_q^t (q prime)."""

    def __init__(self, q: int, gram, kind: SpaceKind | str = SpaceKind.GENERIC, nonsquare: int | None = None):
        if not _is_prime(q) or q == 2:
            raise ValueError("q must be an odd prime")
        self.q = q
        self.base = GF(q, 1)
        self.gram = tuple(tuple(int(x) % q for x in row) for row in gram)
        self.t = len(self.gram)
        self.kind = SpaceKind(kind)
        self.nonsquare = nonsquare
        if any(self.gram[i][j] != self.gram[j][i] for i in range(self.t) for j in range(self.t)):
            raise ValueError("form must be symmetric")
        if rank(self.base, self.gram) != self.t:
            raise ValueError("form is degenerate")

    @classmethod
    def odd_split(cls, q: int, t: int) -> OrthogonalSpace:
        if t % 2 == 0 or t < 1:
            raise ValueError("OddSplit needs odd t")
        gram = [[1 if j == t - 1 - i else 0 for j in range(t)] for i in range(t)]
        return cls(q, gram, SpaceKind.ODD_SPLIT)

    @classmethod
    def even_minus(cls, q: int, t: int) -> OrthogonalSpace:
        """Hyperbolic (t-2)-space plus the anisotropic plane x^2 - u y^2."""
        if t % 2 or t < 2:
            raise ValueError("EvenMinus needs even t >= 2")
        u = next(v for v in range(2, q) if pow(v, (q - 1) // 2, q) != 1)
        gram = [[0] * t for _ in range(t)]
        for i in range(t - 2):
            gram[i][t - 3 - i] = 1
        gram[t - 2][t - 2] = 1
        gram[t - 1][t - 1] = (-u) % q
        return cls(q, gram, SpaceKind.EVEN_MINUS, nonsquare=u)

    @classmethod
    def from_gram(cls, field: GFField, gram) -> OrthogonalSpace:
        if field.k != 1:
            raise ValueError("base field must be prime")
        return cls(field.p, gram)

    @classmethod
    def make(cls, kind: SpaceKind | str, q: int, t: int) -> OrthogonalSpace:
        kind = SpaceKind(kind)
        if kind is SpaceKind.ODD_SPLIT:
            return cls.odd_split(q, t)
        if kind is SpaceKind.EVEN_MINUS:
            return cls.even_minus(q, t)
        raise ValueError("kind must be OddSplit or EvenMinus")

    @property
    def d(self) -> int:
        """Dimension of maximal isotropics over a splitting extension."""
        return self.t // 2

    def field(self, k: int) -> GFField:
        return GF(self.q, k)

    def gram_array(self, k: int) -> np.ndarray:
        return np.array(self.gram, dtype=np.int64)  # prime-field values embed literally

    def bilinear(self, F: GFField, x, y) -> int:
        mul, add = F.mull, F.addl
        s = 0
        for i, xi in enumerate(x):
            if xi:
                row = self.gram[i]
                acc = 0
                for j, yj in enumerate(y):
                    if yj and row[j]:
                        acc = add[acc][mul[row[j]][yj]]
                s = add[s][mul[xi][acc]]
        return s

    def gram_times(self, F: GFField, x) -> list[int]:
        """G x as a vector (G symmetric)."""
        mul, add = F.mull, F.addl
        out = []
        for row in self.gram:
            acc = 0
            for gij, xj in zip(row, x):
                if gij and xj:
                    acc = add[acc][mul[gij][xj]]
            out.append(acc)
        return out

    def perp(self, F: GFField, U: Rows) -> Rows:
        if not U:
            return rref(F, [[int(i == j) for j in range(self.t)] for i in range(self.t)])
        return nullspace(F, [self.gram_times(F, u) for u in U], self.t)

    def is_totally_isotropic(self, F: GFField, U: Rows) -> bool:
        return all(self.bilinear(F, a, b) == 0 for a in U for b in U)

    def witt_index(self) -> int:
        """Witt index over F_q, from the discriminant."""
        if self.t % 2:
            return self.t // 2
        disc = (-1) ** (self.t // 2) * _det_mod_p(self.gram, self.q)
        split = pow(disc % self.q, (self.q - 1) // 2, self.q) == 1
        return self.t // 2 if split else self.t // 2 - 1

    # --- orbit tags (even case) ---------------------------------------------
    def reference_subspace(self, F: GFField) -> Rows:
        """Fixed maximal isotropic U_ref over F_{q^k}, k even (EvenMinus only)."""
        if self.kind is not SpaceKind.EVEN_MINUS:
            raise ValueError("orbit tags are only used in the EvenMinus case")
        if F.k % 2:
            raise ValueError("EvenMinus splits only over even-degree extensions")
        t, d = self.t, self.d
        s = F.sqrt(F.embed(self.base, self.nonsquare))
        rows = [[int(j == i) for j in range(t)] for i in range(d - 1)]
        last = [0] * t
        last[t - 2], last[t - 1] = s, 1
        rows.append(last)
        return rref(F, rows)

    def orbit_tag(self, F: GFField, U: Rows) -> int | None:
        if self.kind is not SpaceKind.EVEN_MINUS:
            return None
        ref = self._ref_cache(F)
        return (self.d - len(intersect(F, U, ref, self.t))) % 2

    def _ref_cache(self, F: GFField) -> Rows:
        cache = self.__dict__.setdefault("_refs", {})
        if F.k not in cache:
            cache[F.k] = self.reference_subspace(F)
        return cache[F.k]

    def describe(self) -> dict:
        return {"kind": self.kind.value, "t": self.t, "q": self.q, "gram": [list(r) for r in self.gram]}


def _det_mod_p(M, p: int) -> int:
    M = [list(r) for r in M]
    n, det = len(M), 1
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det = det * M[c][c] % p
        inv = pow(M[c][c], -1, p)
        for i in range(c + 1, n):
            f = M[i][c] * inv % p
            M[i] = [(a - f * b) % p for a, b in zip(M[i], M[c])]
    return det % p


@dataclass(frozen=True)
class OrthogonalPoint:
    rows: Rows
    orbit_tag: int | None = None

    @property
    def dim(self) -> int:
        return len(self.rows)


# --- enumeration -----------------------------------------------------------------------


def _vec_combos(F: GFField, base: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """All vectors base + sum c_l basis_l, as an (Q^r, t) array."""
    out = base[None, :].copy()
    for v in basis:
        scaled = F.mul[np.arange(F.order)[:, None], v[None, :]]  # (Q, t)
        out = F.add[out[:, None, :], scaled[None, :, :]].reshape(-1, len(base))
    return out


def _quad_values(F: GFField, G: np.ndarray, X: np.ndarray) -> np.ndarray:
    """x^T G x for every row x of X."""
    t = X.shape[1]
    acc = np.zeros(X.shape[0], dtype=np.int64)
    for i in range(t):
        for j in range(t):
            g = int(G[i][j])
            if g:
                term = F.mul[F.mul[X[:, i], X[:, j]], g]
                acc = F.add[acc, term]
    return acc


def _solve_affine(F: GFField, A: list[list[int]], b: list[int], ncols: int):
    """Solutions of A x = b as (particular, kernel basis), or None if inconsistent."""
    if not A:
        return [0] * ncols, [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    aug = [list(r) + [bb] for r, bb in zip(A, b)]
    R = rref(F, aug)
    piv = pivots(R)
    if ncols in piv:
        return None
    part = [0] * ncols
    for row, pc in zip(R, piv):
        part[pc] = row[ncols]
    kern = [list(r) for r in nullspace(F, [r[:ncols] for r in R], ncols)]
    return part, kern


def _extend(space: OrthogonalSpace, F: GFField, G: np.ndarray, piv: tuple[int, ...], done: list[np.ndarray]) -> Iterator[Rows]:
    t = space.t
    i = len(done)
    if i == len(piv):
        yield tuple(tuple(int(x) for x in r) for r in done)
        return
    c = piv[i]
    free = [j for j in range(c + 1, t) if j not in piv]
    # row = e_c + sum_{j in free} x_j e_j, orthogonal to the rows already chosen
    A, b = [], []
    for r in done:
        Gr = space.gram_times(F, [int(x) for x in r])
        A.append([Gr[j] for j in free])
        b.append(F.negl[Gr[c]])
    base = np.zeros(t, dtype=np.int64)
    base[c] = 1
    if free:
        sol = _solve_affine(F, A, b, len(free))
        if sol is None:
            return
        part, kern = sol
        base[free] = part
        basis = np.zeros((len(kern), t), dtype=np.int64)
        for l, kv in enumerate(kern):
            basis[l, free] = kv
        cand = _vec_combos(F, base, basis)
    else:
        if any(b):
            return
        cand = base[None, :]
    cand = cand[_quad_values(F, G, cand) == 0]
    for row in cand:
        yield from _extend(space, F, G, piv, done + [row])


def enumerate_isotropic(space: OrthogonalSpace, k: int, r: int, pivot_sets=None) -> Iterator[Rows]:
    """Every totally isotropic r-dimensional subspace of space over F_{q^k}, in RREF, once."""
    F = space.field(k)
    G = space.gram_array(k)
    sets = pivot_sets if pivot_sets is not None else combinations(range(space.t), r)
    for piv in sets:
        yield from _extend(space, F, G, tuple(piv), [])


def enumerate_max_isotropic(space: OrthogonalSpace, k: int, jobs: int = 1) -> Iterator[OrthogonalPoint]:
    """Maximal (dimension floor(t/2)) isotropics over F_{q^k}; EvenMinus yields nothing for odd k."""
    F = space.field(k)
    if space.kind is SpaceKind.EVEN_MINUS and k % 2:
        return
    for U in _parallel_isotropic(space, k, space.d, jobs):
        yield OrthogonalPoint(U, space.orbit_tag(F, U))


def _pivot_worker(args):
    space, k, r, piv = args
    return list(enumerate_isotropic(space, k, r, [piv]))


def _parallel_isotropic(space: OrthogonalSpace, k: int, r: int, jobs: int) -> Iterator[Rows]:
    sets = list(combinations(range(space.t), r))
    if jobs <= 1 or len(sets) < 2:
        yield from enumerate_isotropic(space, k, r, sets)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for chunk in pool.map(_pivot_worker, [(space, k, r, piv) for piv in sets]):
            yield from chunk


def all_isotropic_subspaces(space: OrthogonalSpace, r: int, k: int = 1) -> list[Rows]:
    return list(enumerate_isotropic(space, k, r))


def random_isotropic_subspace(space: OrthogonalSpace, r: int, rng: random.Random) -> list[list[int]]:
    """Uniform-ish random totally isotropic r-subspace over F_q by rejection."""
    F = space.base
    t = space.t
    rows: list[list[int]] = []
    for _ in range(r):
        perp = space.perp(F, rref(F, rows)) if rows else None
        for _attempt in range(10000):
            if perp is None:
                v = [rng.randrange(space.q) for _ in range(t)]
            else:
                coeffs = [rng.randrange(space.q) for _ in perp]
                v = [0] * t
                for c, b in zip(coeffs, perp):
                    v = [F.addl[a][F.mull[c][x]] for a, x in zip(v, b)]
            if any(v) and space.bilinear(F, v, v) == 0 and rank(F, rows + [v]) == len(rows) + 1:
                rows.append(v)
                break
        else:
            raise RuntimeError("could not extend isotropic subspace")
    return [list(r) for r in rref(F, rows)]


# --- Frobenius and DL varieties ------------------------------------------------------


def frobenius(space: OrthogonalSpace, k: int, u: OrthogonalPoint, j: int = 1) -> OrthogonalPoint:
    F = space.field(k)
    rows = frob_rows(F, u.rows, j)
    return OrthogonalPoint(rows, space.orbit_tag(F, rows))


def intersection_chain(space: OrthogonalSpace, F: GFField, U: Rows) -> list[Rows]:
    """R_0 = U, R_j = R_{j-1} cap sigma(R_{j-1}) until stable.

    R_j equals U cap sigma U cap ... cap sigma^j U because each R_{j-1} is an
    intersection of consecutive Frobenius twists.
    """
    chain = [U]
    while True:
        cur = chain[-1]
        nxt = intersect(F, cur, frob_rows(F, cur), space.t)
        if len(nxt) == len(cur):
            return chain
        chain.append(nxt)


# --- batched checks ------------------------------------------------------------------


def batched_rank(F: GFField, M: np.ndarray) -> np.ndarray:
    """Ranks of a stack of matrices, shape (B, m, t), by vectorised elimination."""
    M = np.array(M, dtype=np.int64, copy=True)
    B, m, t = M.shape
    rk = np.zeros(B, dtype=np.int64)
    rows = np.arange(m)
    for c in range(t):
        mask = (M[:, :, c] != 0) & (rows[None, :] >= rk[:, None])
        has = mask.any(axis=1)
        if not has.any():
            continue
        bi = np.nonzero(has)[0]
        piv = mask[bi].argmax(axis=1)
        r0 = rk[bi]
        top = M[bi, r0].copy()
        M[bi, r0] = M[bi, piv]
        M[bi, piv] = top
        prow = F.mul[F.inv[M[bi, r0, c]][:, None], M[bi, r0]]
        M[bi, r0] = prow
        below = rows[None, :] > r0[:, None]  # (b, m)
        f = np.where(below, M[bi, :, c], 0)
        M[bi] = F.sub[M[bi], F.mul[f[:, :, None], prow[:, None, :]]]
        rk[bi] += 1
    return rk


def _annihilators(F: GFField, U: np.ndarray, piv: tuple[int, ...]) -> np.ndarray:
    """Rows spanning {x : U x = 0} for RREF matrices U with pivot columns piv."""
    B, d, t = U.shape
    free = [c for c in range(t) if c not in piv]
    A = np.zeros((B, len(free), t), dtype=np.int64)
    for l, f in enumerate(free):
        A[:, l, f] = 1
        for r, pc in enumerate(piv):
            A[:, l, pc] = F.neg[U[:, r, f]]
    return A


def _frob_array(F: GFField, X: np.ndarray, j: int = 1) -> np.ndarray:
    for _ in range(j % F.k):
        X = F.frob[X]
    return X


def chain_dimensions(F: GFField, U: np.ndarray, piv: tuple[int, ...], depth: int) -> np.ndarray:
    """dim(U cap sigma U cap ... cap sigma^i U) for i = 0..depth, shape (B, depth + 1)."""
    B, d, t = U.shape
    A = _annihilators(F, U, piv)
    out = np.empty((B, depth + 1), dtype=np.int64)
    out[:, 0] = d
    stack = A
    for i in range(1, depth + 1):
        stack = np.concatenate([stack, _frob_array(F, A, i)], axis=1)
        out[:, i] = t - batched_rank(F, stack)
    return out


def _orbit_tags(space: OrthogonalSpace, F: GFField, U: np.ndarray) -> np.ndarray | None:
    if space.kind is not SpaceKind.EVEN_MINUS:
        return None
    ref = np.array(space._ref_cache(F), dtype=np.int64)
    stack = np.concatenate([U, np.broadcast_to(ref, (U.shape[0],) + ref.shape)], axis=1)
    inter = 2 * space.d - batched_rank(F, stack)
    return (space.d - inter) % 2


def max_isotropic_batches(space: OrthogonalSpace, k: int, jobs: int = 1) -> Iterator[tuple[tuple[int, ...], np.ndarray, np.ndarray | None]]:
    """(pivot set, stacked RREF matrices, orbit tags) for every maximal isotropic over F_{q^k}."""
    if space.kind is SpaceKind.EVEN_MINUS and k % 2:
        return
    F = space.field(k)
    d = space.d
    sets = list(combinations(range(space.t), d))
    if jobs > 1 and len(sets) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_pivot_worker, [(space, k, d, piv) for piv in sets]))
    else:
        results = [list(enumerate_isotropic(space, k, d, [piv])) for piv in sets]
    for piv, rows in zip(sets, results):
        if not rows:
            continue
        U = np.array(rows, dtype=np.int64).reshape(len(rows), d, space.t)
        yield piv, U, _orbit_tags(space, F, U)


def _select(space: OrthogonalSpace, k: int, jobs: int, keep) -> set[OrthogonalPoint]:
    F = space.field(k)
    out = set()
    for piv, U, tags in max_isotropic_batches(space, k, jobs):
        mask = keep(F, U, piv)
        if tags is not None:
            mask &= tags == 0
        for i in np.nonzero(mask)[0]:
            out.add(OrthogonalPoint(tuple(tuple(int(x) for x in r) for r in U[i]), None if tags is None else 0))
    return out


def dl_points(space: OrthogonalSpace, k: int, jobs: int = 1) -> set[OrthogonalPoint]:
    """Maximal isotropics U (fixed orbit, even case) with dim(U cap ... cap sigma^i U) = d - i."""
    d = space.d
    target = np.arange(d, -1, -1)

    def keep(F, U, piv):
        return (chain_dimensions(F, U, piv, d) == target[None, :]).all(axis=1)

    return _select(space, k, jobs, keep)


def dl_closure_points(space: OrthogonalSpace, k: int, jobs: int = 1) -> set[OrthogonalPoint]:
    """Odd case: dim(U cap sigma U) >= d - 1.  Even case (fixed orbit): dim(U cap sigma U) = d - 1."""
    d = space.d

    def keep(F, U, piv):
        first = chain_dimensions(F, U, piv, 1)[:, 1]
        return first == d - 1 if space.kind is SpaceKind.EVEN_MINUS else first >= d - 1

    return _select(space, k, jobs, keep)


def fixed_orbit_points(space: OrthogonalSpace, k: int, jobs: int = 1) -> set[OrthogonalPoint]:
    return _select(space, k, jobs, lambda F, U, piv: np.ones(U.shape[0], dtype=bool))


def count_points(space: OrthogonalSpace, k: int, jobs: int = 1) -> dict:
    """Point counts without materialising point sets: all, fixed orbit, X(w), closure."""
    d = space.d
    target = np.arange(d, -1, -1)
    counts = {"all": 0, "fixed_orbit": 0, "dl": 0, "closure": 0}
    for piv, U, tags in max_isotropic_batches(space, k, jobs):
        F = space.field(k)
        dims = chain_dimensions(F, U, piv, d)
        fixed = np.ones(U.shape[0], dtype=bool) if tags is None else tags == 0
        first = dims[:, 1] if d else np.zeros(U.shape[0], dtype=np.int64)
        clos = first == d - 1 if space.kind is SpaceKind.EVEN_MINUS else first >= d - 1
        counts["all"] += U.shape[0]
        counts["fixed_orbit"] += int(fixed.sum())
        counts["dl"] += int(((dims == target[None, :]).all(axis=1) & fixed).sum())
        counts["closure"] += int((clos & fixed).sum())
    return counts


class NotMinimalError(ValueError):
    pass


def gdl_dimension(group: FiniteWeylGroup, I: Iterable[int], w, sigma_action: dict | None = None) -> int:
    """dim X_{P_I}(w) = l(w) + l(W_{sigma(I)}) - l(W_{I cap ^w sigma(I)}) for w in ^I W^{sigma(I)}."""
    I = frozenset(I)
    sigma = sigma_action or {i: i for i in group.nodes()}
    sI = frozenset(sigma[i] for i in I)
    if not group.is_minimal_double_coset_rep(w, I, sI):
        raise NotMinimalError("w is not a minimal double coset representative")
    inner = I & group.conjugate_nodes(w, sI)
    return group.length(w) + group.longest_length(sI) - group.longest_length(inner)
