"""Hermitian lattices over a ramified quadratic extension F = Q_p(pi), pi^2 = eps * p.

Elements of O_F are stored as pairs ``(a, b)`` meaning ``a + b pi`` with
``a, b`` integers modulo a working power of p.  The user-facing precision
``N`` (in pi-adic digits) bounds pivot valuations: a lattice whose echelon
form needs a pivot ``pi^k`` with ``k >= N`` raises :class:`PrecisionExhausted`.
Internally the ring keeps many more digits so that divisions by pi during
elimination never touch the digits that end up in a canonical basis.

Lattices are ``pi^{-s} * rowspan(B)`` with ``B`` an integral upper triangular
echelon matrix whose diagonal entries are exactly ``pi^{k_i}`` and whose
entries above a pivot ``pi^k`` are canonical residues modulo ``pi^k``.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from typing import Sequence

Pair = tuple[int, int]
Matrix = tuple[tuple[Pair, ...], ...]


class PrecisionExhausted(ArithmeticError):
    pass


class NoValidHeight(ValueError):
    pass


def _is_prime(p: int) -> bool:
    return p > 1 and all(p % d for d in range(2, int(p**0.5) + 1))


def _vp(x: int, p: int) -> int:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


class EisensteinRing:
    """Truncated ring O_F / pi^N with pi^2 = eps * p."""

    def __init__(self, p: int = 3, eps: int = 1, precision: int = 16, guard: int | None = None):
        if p == 2 or not _is_prime(p):
            raise ValueError("p must be an odd prime")
        if eps % p == 0:
            raise ValueError("eps must be a unit")
        if precision < 2 or precision % 2:
            raise ValueError("precision must be an even integer >= 2")
        self.p = p
        self.eps = eps
        self.N = precision
        # working digits; every elimination step may spend up to N of them
        self.work = precision * (12 if guard is None else guard)
        self.Mw = (self.work + 1) // 2
        self.mod = p**self.Mw
        self.eps_inv = pow(eps, -1, self.mod)

    def __eq__(self, other):
        return isinstance(other, EisensteinRing) and (self.p, self.eps, self.N) == (other.p, other.eps, other.N)

    def __hash__(self):
        return hash((self.p, self.eps, self.N))

    def __repr__(self):
        return f"EisensteinRing(p={self.p}, eps={self.eps}, precision={self.N})"

    # --- raw pair arithmetic --------------------------------------------
    def r(self, a: int, b: int = 0) -> Pair:
        return (a % self.mod, b % self.mod)

    zero: Pair = (0, 0)
    one: Pair = (1, 0)

    @property
    def pi(self) -> Pair:
        return (0, 1)

    def add(self, x: Pair, y: Pair) -> Pair:
        return ((x[0] + y[0]) % self.mod, (x[1] + y[1]) % self.mod)

    def sub(self, x: Pair, y: Pair) -> Pair:
        return ((x[0] - y[0]) % self.mod, (x[1] - y[1]) % self.mod)

    def neg(self, x: Pair) -> Pair:
        return (-x[0] % self.mod, -x[1] % self.mod)

    def mul(self, x: Pair, y: Pair) -> Pair:
        a, b = x
        c, d = y
        return ((a * c + self.eps * self.p * b * d) % self.mod, (a * d + b * c) % self.mod)

    def conj(self, x: Pair) -> Pair:
        return (x[0], -x[1] % self.mod)

    def norm(self, x: Pair) -> int:
        a, b = x
        return (a * a - self.eps * self.p * b * b) % self.mod

    def val(self, x: Pair) -> int:
        """pi-adic valuation, capped at the working precision."""
        a, b = x
        va = 2 * _vp(a, self.p) if a else self.work
        vb = 2 * _vp(b, self.p) + 1 if b else self.work
        return min(va, vb, self.work)

    def div_pi(self, x: Pair) -> Pair:
        a, b = x
        if a % self.p:
            raise ArithmeticError("not divisible by pi")
        return (b, (a // self.p) * self.eps_inv % self.mod)

    def div_pi_k(self, x: Pair, k: int) -> Pair:
        for _ in range(k):
            x = self.div_pi(x)
        return x

    def pi_pow(self, k: int) -> Pair:
        if k < 0:
            raise ValueError("negative power")
        j, odd = divmod(k, 2)
        c = pow(self.eps * self.p, j, self.mod)
        return (0, c) if odd else (c, 0)

    def unit_inverse(self, x: Pair) -> Pair:
        nrm = self.norm(x)
        if nrm % self.p == 0:
            raise ZeroDivisionError("not a unit")
        inv = pow(nrm, -1, self.mod)
        return (x[0] * inv % self.mod, -x[1] * inv % self.mod)

    def residue(self, x: Pair, k: int) -> Pair:
        """Canonical representative of x modulo pi^k."""
        return (x[0] % self.p ** ((k + 1) // 2), x[1] % self.p ** (k // 2))

    def split(self, x: Pair) -> tuple[int, Pair]:
        """x = pi^k * u with u a unit."""
        k = self.val(x)
        if k >= self.work:
            raise PrecisionExhausted("zero at working precision")
        return k, self.div_pi_k(x, k)

    def truncate(self, x: Pair) -> Pair:
        """Reduce modulo pi^N."""
        return self.residue(x, self.N)

    def element(self, a: int, b: int = 0) -> EisensteinTruncated:
        return EisensteinTruncated(self, *self.r(a, b))


@dataclass(frozen=True, eq=False)
class EisensteinTruncated:
    ring: EisensteinRing
    a: int
    b: int

    @property
    def pair(self) -> Pair:
        return (self.a, self.b)

    def _wrap(self, x: Pair) -> EisensteinTruncated:
        return EisensteinTruncated(self.ring, *x)

    def _coerce(self, other) -> Pair:
        if isinstance(other, EisensteinTruncated):
            return other.pair
        if isinstance(other, int):
            return self.ring.r(other)
        return NotImplemented

    def __add__(self, other):
        return self._wrap(self.ring.add(self.pair, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.ring.sub(self.pair, self._coerce(other)))

    def __rsub__(self, other):
        return self._wrap(self.ring.sub(self._coerce(other), self.pair))

    def __mul__(self, other):
        return self._wrap(self.ring.mul(self.pair, self._coerce(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(self.ring.neg(self.pair))

    def conj(self) -> EisensteinTruncated:
        return self._wrap(self.ring.conj(self.pair))

    def norm(self) -> int:
        return self.ring.norm(self.pair) % self.ring.p ** (self.ring.N // 2)

    def val(self) -> int:
        return min(self.ring.val(self.pair), self.ring.N)

    def is_unit(self) -> bool:
        return self.val() == 0

    def inverse(self) -> EisensteinTruncated:
        return self._wrap(self.ring.unit_inverse(self.pair))

    def __eq__(self, other):
        if not isinstance(other, (EisensteinTruncated, int)):
            return NotImplemented
        diff = self.ring.sub(self.pair, self._coerce(other))
        return self.ring.val(diff) >= self.ring.N

    def __hash__(self):
        return hash(self.ring.truncate(self.pair))

    def __repr__(self):
        a, b = self.ring.truncate(self.pair)
        return f"({a} + {b}*pi)"


# --- matrices over O_F --------------------------------------------------------


def mat_mul(R: EisensteinRing, A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(m):
            s0 = s1 = 0
            for t in range(k):
                a, b = Ai[t]
                c, d = B[t][j]
                s0 += a * c + R.eps * R.p * b * d
                s1 += a * d + b * c
            row.append((s0 % R.mod, s1 % R.mod))
        out.append(tuple(row))
    return tuple(out)


def conj_transpose(R: EisensteinRing, A):
    return tuple(tuple(R.conj(A[i][j]) for i in range(len(A))) for j in range(len(A[0])))


def identity_matrix(R: EisensteinRing, n: int):
    return tuple(tuple(R.one if i == j else R.zero for j in range(n)) for i in range(n))


def echelon(R: EisensteinRing, rows: Sequence[Sequence[Pair]], n: int) -> tuple[Matrix, tuple[int, ...]]:
    """Canonical upper triangular echelon form of a full-rank row module."""
    rows = [list(r) for r in rows]
    out = []
    ks = []
    for j in range(n):
        best, bestv = None, None
        for idx, row in enumerate(rows):
            v = R.val(row[j])
            if bestv is None or v < bestv:
                best, bestv = idx, v
        if best is None or bestv >= R.N:
            raise PrecisionExhausted(f"pivot in column {j} has valuation >= {R.N}")
        piv = rows.pop(best)
        k, u = R.split(piv[j])
        uinv = R.unit_inverse(u)
        piv = [R.mul(uinv, x) for x in piv]
        piv[j] = R.pi_pow(k)
        for row in rows:
            x = row[j]
            if x != R.zero:
                q = R.div_pi_k(x, k)
                for t in range(j, n):
                    row[t] = R.sub(row[t], R.mul(q, piv[t]))
                row[j] = R.zero
        out.append(piv)
        ks.append(k)
    if sum(ks) > R.work - 2 * R.N:
        raise PrecisionExhausted("working precision budget exceeded")
    # reduce entries above pivots
    for j in range(n):
        k = ks[j]
        for i in range(j):
            x = out[i][j]
            rep = R.residue(x, k)
            if x != rep:
                q = R.div_pi_k(R.sub(x, rep), k)
                for t in range(j, n):
                    out[i][t] = R.sub(out[i][t], R.mul(q, out[j][t]))
                out[i][j] = rep
    return tuple(tuple(r) for r in out), tuple(ks)


def invert_unimodular(R: EisensteinRing, A) -> Matrix:
    """Inverse of a matrix in GL_n(O_F) by Gauss-Jordan with unit pivots."""
    n = len(A)
    M = [list(A[i]) + [R.one if i == j else R.zero for j in range(n)] for i in range(n)]
    for j in range(n):
        piv = next((i for i in range(j, n) if R.val(M[i][j]) == 0), None)
        if piv is None:
            raise ValueError("matrix is not invertible over O_F")
        M[j], M[piv] = M[piv], M[j]
        inv = R.unit_inverse(M[j][j])
        M[j] = [R.mul(inv, x) for x in M[j]]
        for i in range(n):
            if i != j and M[i][j] != R.zero:
                f = M[i][j]
                M[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(M[i], M[j])]
    return tuple(tuple(r[n:]) for r in M)


def determinant(R: EisensteinRing, A) -> Pair:
    """Determinant by fraction-free elimination over the DVR (exact for exact input)."""
    n = len(A)
    M = [list(r) for r in A]
    det = R.one
    for j in range(n):
        best = min(range(j, n), key=lambda i: R.val(M[i][j]))
        if R.val(M[best][j]) >= R.work:
            return R.zero
        if best != j:
            M[j], M[best] = M[best], M[j]
            det = R.neg(det)
        k, u = R.split(M[j][j])
        det = R.mul(det, M[j][j])
        uinv = R.unit_inverse(u)
        for i in range(j + 1, n):
            if M[i][j] != R.zero:
                q = R.mul(R.div_pi_k(M[i][j], k), uinv)
                M[i] = [R.sub(x, R.mul(q, y)) for x, y in zip(M[i], M[j])]
    return det


# --- hermitian spaces -------------------------------------------------------------


def smallest_nonsquare(p: int) -> int:
    squares = {x * x % p for x in range(1, p)}
    return next(u for u in range(2, p) if u not in squares)


def is_square_mod_p(u: int, p: int) -> bool:
    return pow(u % p, (p - 1) // 2, p) == 1


class HermitianSpace:
    """F^n with a unimodular hermitian Gram matrix G; psi(x, y) = x G conj(y)^T."""

    def __init__(self, ring: EisensteinRing, gram, name: str = ""):
        self.ring = ring
        self.gram = tuple(tuple(ring.r(*x) for x in row) for row in gram)
        self.n = len(self.gram)
        self.name = name
        ct = conj_transpose(ring, self.gram)
        if ct != self.gram:
            raise ValueError("Gram matrix is not hermitian")

    @cached_property
    def gram_inv(self) -> Matrix:
        return invert_unimodular(self.ring, self.gram)

    def _key(self):
        # compare modulo pi^N; digits beyond the precision are scratch
        return tuple(tuple(self.ring.truncate(x) for x in row) for row in self.gram)

    def __eq__(self, other):
        return isinstance(other, HermitianSpace) and self.ring == other.ring and self._key() == other._key()

    def __hash__(self):
        return hash((self.ring, self._key()))

    def pairing(self, x: Sequence[Pair], y: Sequence[Pair]) -> Pair:
        R = self.ring
        out = R.zero
        for i, xi in enumerate(x):
            if xi == R.zero:
                continue
            for j, yj in enumerate(y):
                g = self.gram[i][j]
                if g != R.zero and yj != R.zero:
                    out = R.add(out, R.mul(R.mul(xi, g), R.conj(yj)))
        return out

    def is_unitary(self, g) -> bool:
        """Row convention: x -> x g preserves psi iff g G conj(g)^T = G."""
        R = self.ring
        lhs = mat_mul(R, mat_mul(R, g, self.gram), conj_transpose(R, g))
        return all(R.val(R.sub(a, b)) >= R.N for ra, rb in zip(lhs, self.gram) for a, b in zip(ra, rb))

    def lattice(self, rows, shift: int = 0) -> HermitianLattice:
        R = self.ring
        rows = [[R.r(*x) if isinstance(x, tuple) else R.r(x) for x in row] for row in rows]
        return HermitianLattice.from_rows(self, rows, shift)

    def standard_lattice(self, i: int) -> HermitianLattice:
        return standard_lattice(self, i)


def split_space(ring: EisensteinRing, n: int) -> HermitianSpace:
    """Standard split form phi(e_i, e_j) = delta_{i, n+1-j}."""
    gram = [[(1, 0) if j == n - 1 - i else (0, 0) for j in range(n)] for i in range(n)]
    return HermitianSpace(ring, gram, "split")


def nonsplit_even_space(ring: EisensteinRing, n: int, u: int | None = None) -> HermitianSpace:
    """Split (n-2)-space plus the anisotropic plane diag(1, -u), u a nonsquare unit."""
    if n % 2 or n < 2:
        raise ValueError("non-split model needs even n >= 2")
    u = smallest_nonsquare(ring.p) if u is None else u
    if is_square_mod_p(u, ring.p):
        raise ValueError("u must be a nonsquare unit")
    k = n - 2
    gram = [[(0, 0)] * n for _ in range(n)]
    for i in range(k):
        gram[i][k - 1 - i] = (1, 0)
    gram[k][k] = (1, 0)
    gram[k + 1][k + 1] = (-u, 0)
    return HermitianSpace(ring, gram, "nonsplit")


def building_space(ring: EisensteinRing, n: int) -> HermitianSpace:
    """Model of (C, psi): split for odd n, non-split for even n."""
    return split_space(ring, n) if n % 2 else nonsplit_even_space(ring, n)


def discriminant(ring: EisensteinRing, gram) -> int:
    """(-1)^{n(n-1)/2} det(gram) as an integer modulo the working modulus."""
    n = len(gram)
    det = determinant(ring, tuple(tuple(ring.r(*x) for x in row) for row in gram))
    if ring.val((0, det[1])) < ring.N:
        raise ValueError("determinant of a hermitian matrix must lie in Q_p")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * det[0] % ring.mod


def is_split(ring: EisensteinRing, gram) -> bool:
    """Trivial discriminant: (-1)^{n(n-1)/2} det lies in N(F^x) = <-eps p> x (unit squares)."""
    d = discriminant(ring, gram)
    if d == 0:
        raise PrecisionExhausted("degenerate Gram matrix at working precision")
    k = _vp(d, ring.p)
    if 2 * k >= ring.N:
        raise PrecisionExhausted("discriminant valuation beyond precision")
    u = d // ring.p**k
    return is_square_mod_p(u * (-ring.eps) ** k, ring.p)


# --- lattices ------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HermitianLattice:
    space: HermitianSpace
    shift: int
    basis: Matrix
    pivots: tuple[int, ...]

    @classmethod
    def from_rows(cls, space: HermitianSpace, rows, shift: int = 0) -> HermitianLattice:
        R = space.ring
        rows = [list(r) for r in rows if any(x != R.zero for x in r)]
        if not rows:
            raise PrecisionExhausted("zero module")
        v = min(R.val(x) for r in rows for x in r)
        if v:
            rows = [[R.div_pi_k(x, v) for x in r] for r in rows]
            shift -= v
        basis, ks = echelon(R, rows, space.n)
        return cls(space, shift, basis, ks)

    @property
    def ring(self) -> EisensteinRing:
        return self.space.ring

    @property
    def n(self) -> int:
        return self.space.n

    def key(self):
        R = self.ring
        return (self.shift, tuple(tuple(R.truncate(x) for x in row) for row in self.basis))

    def __eq__(self, other):
        return isinstance(other, HermitianLattice) and self.space == other.space and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"HermitianLattice(shift={self.shift}, pivots={self.pivots})"

    @property
    def volume(self) -> int:
        """pi-length of O^n / L (negative when L is larger)."""
        return sum(self.pivots) - self.n * self.shift

    def _scaled_rows(self, shift: int):
        R = self.ring
        d = shift - self.shift
        if d < 0:
            raise ValueError("cannot rescale to a smaller shift")
        c = R.pi_pow(d)
        return [[R.mul(c, x) for x in row] for row in self.basis]

    def __add__(self, other: HermitianLattice) -> HermitianLattice:
        s = max(self.shift, other.shift)
        return HermitianLattice.from_rows(self.space, self._scaled_rows(s) + other._scaled_rows(s), s)

    def issubset(self, other: HermitianLattice) -> bool:
        return self + other == other

    __le__ = issubset

    def __lt__(self, other):
        return self != other and self <= other

    def scale_pi(self, k: int) -> HermitianLattice:
        """pi^k L."""
        return HermitianLattice(self.space, self.shift - k, self.basis, self.pivots)

    def scale_p(self, h: int) -> HermitianLattice:
        return self.scale_pi(2 * h)

    def dual(self) -> HermitianLattice:
        """{x : psi(x, L) in O_F}."""
        R = self.ring
        n = self.n
        K = sum(self.pivots)
        T = conj_transpose(R, self.basis)  # lower triangular, diagonal conj(pi^k)
        piK = R.pi_pow(K)
        X = []
        for i in range(n):
            rhs = [piK if j == i else R.zero for j in range(n)]
            for j in range(i):
                t = T[i][j]
                if t != R.zero:
                    rhs = [R.sub(a, R.mul(t, b)) for a, b in zip(rhs, X[j])]
            k = self.pivots[i]
            sign = R.one if k % 2 == 0 else R.neg(R.one)
            X.append([R.mul(sign, R.div_pi_k(a, k)) for a in rhs])
        rows = mat_mul(R, tuple(tuple(r) for r in X), self.space.gram_inv)
        return HermitianLattice.from_rows(self.space, rows, K - self.shift)

    def intersection(self, other: HermitianLattice) -> HermitianLattice:
        return (self.dual() + other.dual()).dual()

    __and__ = intersection

    def length_over(self, sub: HermitianLattice) -> int:
        """Length of self / sub (sub must be contained in self)."""
        if not sub <= self:
            raise ValueError("not a sublattice")
        return sub.volume - self.volume

    def transform(self, g, shift: int = 0) -> HermitianLattice:
        """Image under x -> x (pi^{-shift} g)."""
        rows = mat_mul(self.ring, self.basis, g)
        return HermitianLattice.from_rows(self.space, rows, self.shift + shift)

    def gram_matrix(self) -> tuple[int, Matrix]:
        """(e, H): the Gram matrix of the basis is pi^{-e}-scaled H up to a unit sign."""
        R = self.ring
        H = mat_mul(R, mat_mul(R, self.basis, self.space.gram), conj_transpose(R, self.basis))
        return 2 * self.shift, H

    def is_pi_modular(self) -> bool:
        """L^dual = pi^{-1} L, tested on the Gram matrix: pi^{-1} H unimodular."""
        R = self.ring
        e, H = self.gram_matrix()
        shift = e + 1
        if shift > 0:
            if any(R.val(x) < shift for row in H for x in row):
                return False
            H = tuple(tuple(R.div_pi_k(x, shift) for x in row) for row in H)
        elif shift < 0:
            c = R.pi_pow(-shift)
            H = tuple(tuple(R.mul(c, x) for x in row) for row in H)
        return R.val(determinant(R, H)) == 0

    def basis_vectors(self) -> list[list[Pair]]:
        return [list(r) for r in self.basis]

    def to_json(self) -> dict:
        R = self.ring
        return {
            "n": self.n,
            "p": R.p,
            "epsilon": R.eps,
            "precision": R.N,
            "shift": self.shift,
            "gram": [[list(R.truncate(x)) for x in row] for row in self.space.gram],
            "basis": [[list(R.truncate(x)) for x in row] for row in self.basis],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> HermitianLattice:
        if isinstance(data, str):
            data = json.loads(data)
        ring = EisensteinRing(data["p"], data["epsilon"], data["precision"])
        space = HermitianSpace(ring, [[tuple(x) for x in row] for row in data["gram"]])
        return space.lattice([[tuple(x) for x in row] for row in data["basis"]], data["shift"])


def standard_lattice(space: HermitianSpace, i: int) -> HermitianLattice:
    """Lambda_i = span{pi^{-1} e_1, ..., pi^{-1} e_i, e_{i+1}, ..., e_n}; Lambda_{kn+i} = pi^{-k} Lambda_i."""
    n = space.n
    k, i = divmod(i, n)
    R = space.ring
    rows = [[R.one if a == b else R.zero for b in range(n)] for a in range(n)]
    for a in range(i, n):
        rows[a][a] = R.pi
    return HermitianLattice.from_rows(space, rows, 1 + k)


def reference_lattice(space: HermitianSpace) -> HermitianLattice:
    """The framing lattice Lambda_m^dual, m = floor(n/2)."""
    return standard_lattice(space, space.n // 2).dual()


# --- vertex lattices ---------------------------------------------------------------


def sharp(L: HermitianLattice) -> HermitianLattice:
    return L.dual()


def vertex_type(L: HermitianLattice) -> int | None:
    """t(L) = dim L / pi L^sharp when L subset L^sharp subset pi^{-1} L, else None."""
    D = L.dual()
    if not (L <= D and D <= L.scale_pi(-1)):
        return None
    return L.n - D.length_over(L)


def is_vertex_lattice(L: HermitianLattice) -> bool:
    return vertex_type(L) is not None


def _residue_isotropic_subspace(space: HermitianSpace, dim: int, rng: random.Random):
    """Random totally isotropic subspace of Lambda_0 / pi Lambda_0 (an F_p-quadratic space)."""
    from .finite_orthogonal import GF, OrthogonalSpace, random_isotropic_subspace

    R = space.ring
    G = [[x[0] % R.p for x in row] for row in space.gram]
    field = GF(R.p, 1)
    return random_isotropic_subspace(OrthogonalSpace.from_gram(field, G), dim, rng)


def lattice_from_coisotropic(space: HermitianSpace, iso_rows) -> HermitianLattice:
    """Lambda with pi Lambda_0 subset Lambda subset Lambda_0 and Lambda / pi Lambda_0 = (iso)^perp."""
    R = space.ring
    n = space.n
    p = R.p
    G = [[x[0] % p for x in row] for row in space.gram]
    # W' = iso^perp, lifted; pi Lambda_0 added
    from .finite_orthogonal import nullspace_mod_p

    constraints = [[sum(r[i] * G[j][i] for i in range(n)) % p for j in range(n)] for r in iso_rows]
    perp = nullspace_mod_p(constraints, n, p) if iso_rows else [[int(i == j) for j in range(n)] for i in range(n)]
    rows = [[R.r(c) for c in r] for r in perp]
    rows += [[R.pi if a == b else R.zero for b in range(n)] for a in range(n)]
    return HermitianLattice.from_rows(space, rows, 0)


def unitary_generators(space: HermitianSpace, rng: random.Random, count: int = 6) -> list[tuple[int, Matrix]]:
    """Random elements of U(space) as (shift, matrix) pairs meaning pi^{-shift} * matrix.

    Eichler transformations x -> x + psi(x,e) w - psi(x,w) e + a psi(x,e) e with
    e isotropic, w orthogonal to e and a + conj(a) = -psi(w,w), plus, on the
    split block, permutations commuting with reversal and pi-diagonal elements.
    """
    R = space.ring
    n = space.n
    G = space.gram
    split_dim = n if space.name == "split" else n - 2
    iso_idx = [i for i in range(split_dim) if i != split_dim - 1 - i]
    out: list[tuple[int, Matrix]] = []
    half = R.unit_inverse(R.r(2))

    def vec(i):
        return [R.one if j == i else R.zero for j in range(n)]

    if not iso_idx and split_dim < 2:
        return [(0, identity_matrix(R, n))] * count
    while len(out) < count:
        kind = rng.randrange(3)
        if kind == 0 and iso_idx:
            i = rng.choice(iso_idx)
            e = vec(i)
            w = [R.r(rng.randrange(R.p**2), rng.randrange(R.p**2)) for _ in range(n)]
            # enforce psi(w, e) = 0 and e itself contributes nothing
            w[i] = R.zero
            for j in range(n):
                if G[j][i] != R.zero:
                    w[j] = R.zero
            Ge = [R.conj(space.pairing(vec(j), e)) for j in range(n)]  # column psi(e_j, e)
            Gw = [space.pairing(vec(j), w) for j in range(n)]
            a = R.neg(R.mul(space.pairing(w, w), half))
            g = [[R.one if r == c else R.zero for c in range(n)] for r in range(n)]
            for r in range(n):
                for c in range(n):
                    g[r][c] = R.add(g[r][c], R.mul(R.conj(Ge[r]), w[c]))
                    g[r][c] = R.sub(g[r][c], R.mul(Gw[r], e[c]))
                    g[r][c] = R.add(g[r][c], R.mul(R.mul(a, R.conj(Ge[r])), e[c]))
            out.append((0, tuple(tuple(r) for r in g)))
        elif kind == 1 and split_dim >= 2:
            perm = list(range(n))
            i, j = rng.sample(range(split_dim // 2), 2) if split_dim >= 4 else (0, 0)
            ii, jj = split_dim - 1 - i, split_dim - 1 - j
            perm[i], perm[j] = j, i
            perm[ii], perm[jj] = jj, ii
            if rng.random() < 0.5:
                perm[i], perm[ii] = perm[ii], perm[i]
            g = tuple(tuple(R.one if perm[r] == c else R.zero for c in range(n)) for r in range(n))
            out.append((0, g))
        elif kind == 2 and split_dim >= 2:
            # diag(pi, ..., -pi^{-1}) scaled: pi^{-1} * diag(pi^2, 1, ..., 1, -1)
            i = rng.randrange(split_dim // 2)
            ii = split_dim - 1 - i
            diag = [R.pi] * n
            diag[i] = R.mul(R.pi, R.pi)
            diag[ii] = R.neg(R.one)
            g = tuple(tuple(diag[r] if r == c else R.zero for c in range(n)) for r in range(n))
            out.append((1, g))
    return out


def random_unitary(space: HermitianSpace, rng: random.Random, length: int = 4) -> tuple[int, Matrix]:
    R = space.ring
    shift, g = 0, identity_matrix(R, space.n)
    for s, h in unitary_generators(space, rng, length):
        shift += s
        g = mat_mul(R, g, h)
    # strip common pi factors
    v = min(R.val(x) for row in g for x in row)
    if v:
        g = tuple(tuple(R.div_pi_k(x, v) for x in row) for row in g)
        shift -= v
    return shift, g


def random_vertex_lattice(space: HermitianSpace, rng: random.Random, t: int | None = None, moves: int = 3) -> HermitianLattice:
    """Vertex lattice of type t: a sublattice of the self-dual Lambda_0 moved by a random unitary."""
    n = space.n
    witt = (n - 1) // 2 if n % 2 else (n // 2 if space.name == "split" else n // 2 - 1)
    if t is None:
        lo = 0 if n % 2 == 0 and space.name == "split" else (1 if n % 2 else 2)
        t = rng.choice([x for x in range(lo, n + 1) if x % 2 == n % 2])
    r = (n - t) // 2
    if (n - t) % 2 or r < 0 or r > witt:
        raise ValueError(f"no vertex lattice of type {t} in this space")
    iso = _residue_isotropic_subspace(space, r, rng) if r else []
    L = lattice_from_coisotropic(space, iso)
    shift, g = random_unitary(space, rng, moves)
    return L.transform(g, shift)


def vertex_lattices_in_window(space: HermitianSpace) -> list[HermitianLattice]:
    """All vertex lattices between pi Lambda_0 and Lambda_0 (Lambda_0 the standard self-dual lattice)."""
    from .finite_orthogonal import GF, OrthogonalSpace, all_isotropic_subspaces

    R = space.ring
    field = GF(R.p, 1)
    Q = OrthogonalSpace.from_gram(field, [[x[0] % R.p for x in row] for row in space.gram])
    out = []
    for r in range(space.n // 2 + 1):
        for U in all_isotropic_subspaces(Q, r):
            out.append(lattice_from_coisotropic(space, [list(map(int, row)) for row in U]))
    return out


def pi_modular_search(space: HermitianSpace) -> list[HermitianLattice]:
    """All pi-modular lattices L with pi Lambda_0 subset L subset pi^{-1} Lambda_0, for n in {2, 4}.

    Such L is pi^{-1}(S + pi^2 O^n) for a submodule S of (O/pi^2)^n of length n/2.
    For n <= 4 every such S is cyclic or spanned by two vectors of the socle.
    """
    R = space.ring
    n = space.n
    if n % 2:
        return []
    if n > 4:
        raise ValueError("window search implemented for n <= 4")
    p = R.p
    floor = [[R.pi_pow(2) if a == b else R.zero for b in range(n)] for a in range(n)]
    digits = [(a, b) for a in range(p) for b in range(p)]
    gen_sets = [[v] for v in product(digits, repeat=n) if any(x != (0, 0) for x in v)]
    if n == 4:
        socle = [tuple((0, c) for c in v) for v in product(range(p), repeat=n) if any(v)]
        gen_sets += [[u, v] for u, v in combinations(socle, 2)]
    seen, found = set(), []
    for gens in gen_sets:
        rows = [[R.r(*x) for x in g] for g in gens] + floor
        S = HermitianLattice.from_rows(space, rows, 0)
        if S.volume != 3 * n // 2:
            continue
        L = S.scale_pi(-1)
        key = L.key()
        if key in seen:
            continue
        seen.add(key)
        if L.is_pi_modular():
            found.append(L)
    return found


# --- Kottwitz invariants -----------------------------------------------------------


def kottwitz_invariant(M: HermitianLattice, reference: HermitianLattice | None = None, window: int = 6) -> tuple[int, int | None]:
    """(h, parity): odd n uses M subset p^h M^dual subset pi^{-1} M; even n uses
    p^h M^dual = pi^{-1} M and the parity of length((M + ref) / M)."""
    n = M.n
    ref = reference_lattice(M.space) if reference is None else reference
    D = M.dual()
    upper = M.scale_pi(-1)
    centre = round((M.volume - ref.volume) / n)
    for h in sorted(range(centre - window, centre + window + 1), key=lambda x: abs(x - centre)):
        P = D.scale_p(h)
        if n % 2:
            if M <= P and P <= upper:
                return h, None
        elif P == upper:
            parity = (M + ref).length_over(M) % 2
            return h, parity
    raise NoValidHeight("no h satisfies the Kottwitz sandwich condition")
