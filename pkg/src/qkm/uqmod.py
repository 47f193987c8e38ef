"""Depth-truncated integrable highest-weight modules.

A module is built one weight space at a time.  Each space Lambda - beta is
spanned by monomials in the lowering generators (arbitrary words with
content beta applied to the highest-weight vector); the contravariant Gram
matrix of those words is computed exactly over Q(q) by commuting raising
generators through, and the space is the quotient by the Gram radical.  A
randomized rational specialization is used as a rank pre-pass to pick
pivot words cheaply; the final pivot choice is re-verified exactly.

Operators E_i, F_i, K_i^{+-1} are stored as exact matrices between weight
spaces.  Weight spaces outside the stored set make the F-action a flagged
truncation, never a silent zero of a nonzero vector.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from . import linalg
from .qfield import FieldElem, q_int
from .rootdata import CartanData, Weight, pair_coroot, simple_root


class TruncationError(RuntimeError):
    """An action left the stored weight-space window."""


Letter = tuple  # ('E', i) | ('F', i) | ('K', i, sign)


def E(i: int) -> Letter:
    return ("E", i)


def F(i: int) -> Letter:
    return ("F", i)


def K(i: int, sign: int = 1) -> Letter:
    return ("K", i, sign)


@dataclass
class Vec:
    """A weight-homogeneous vector; beta is None for the zero vector."""
    beta: tuple[int, ...] | None
    coords: list[FieldElem]

    def is_zero(self) -> bool:
        return self.beta is None or all(c.is_zero() for c in self.coords)


ZERO_VEC = Vec(None, [])


# ---------------------------------------------------------------------------
# Gram recursion, generic over the scalar ring so the same combinatorics can
# run exactly over Q(q) or specialized at a rational point.


class ExactRing:
    zero = FieldElem.zero()
    one = FieldElem.one()

    @staticmethod
    def qint(n: int, d: int) -> FieldElem:
        return q_int(n, d)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def is_zero(a) -> bool:
        return a.is_zero()


class FracRing:
    def __init__(self, q0: Fraction):
        self.q0 = Fraction(q0)
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def qint(self, n: int, d: int) -> Fraction:
        q = self.q0
        if n == 0:
            return Fraction(0)
        return (q ** (n * d) - q ** (-n * d)) / (q ** d - q ** (-d))

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def is_zero(a) -> bool:
        return a == 0


class GramTable:
    """Memoized contravariant pairings of lowering-generator words."""

    def __init__(self, cd: CartanData, hw: Weight, ring):
        self.cd = cd
        self.hw = hw
        self.ring = ring
        self.memo: dict[tuple, object] = {}

    def _coroot_height(self, suffix: tuple[int, ...], i: int) -> int:
        """(hw - sum of alpha over suffix, alpha_i^vee)."""
        val = pair_coroot(self.cd, self.hw, i)
        for j in suffix:
            val -= self.cd.a[i][j]
        return val

    def raise_word(self, i: int, b: tuple[int, ...]):
        """E_i applied to the word b: list of (scalar, shorter word)."""
        out = []
        d_i = self.cd.d[i]
        for t, letter in enumerate(b):
            if letter == i:
                n = self._coroot_height(b[t + 1:], i)
                if n:
                    out.append((self.ring.qint(n, d_i), b[:t] + b[t + 1:]))
        return out

    def pair(self, a: tuple[int, ...], b: tuple[int, ...]):
        if len(a) != len(b):
            return self.ring.zero
        if not a:
            return self.ring.one
        key = (a, b)
        if key in self.memo:
            return self.memo[key]
        total = self.ring.zero
        i, rest = a[0], a[1:]
        for scal, shorter in self.raise_word(i, b):
            sub = self.pair(rest, shorter)
            if not self.ring.is_zero(sub):
                total = self.ring.add(total, self.ring.mul(scal, sub))
        self.memo[key] = total
        return total


def _words_of_content(beta: tuple[int, ...]) -> list[tuple[int, ...]]:
    letters = []
    for i, b in enumerate(beta):
        letters.extend([i] * b)
    return sorted(set(permutations(letters)))


# ---------------------------------------------------------------------------
# Weight-set construction


def _simplex(rank: int, depth: int) -> set[tuple[int, ...]]:
    out: set[tuple[int, ...]] = set()

    def rec(prefix, remaining):
        if len(prefix) == rank:
            out.add(tuple(prefix))
            return
        for b in range(remaining + 1):
            rec(prefix + [b], remaining - b)

    rec([], depth)
    return out


def _close_strings(cd: CartanData, hw: Weight, betas: set, i: int) -> set:
    """Close under full alpha_i strings (direction i only)."""
    lines: dict[tuple, list[int]] = {}
    for beta in betas:
        key = beta[:i] + beta[i + 1:]
        lines.setdefault(key, []).append(beta[i])
    out = set(betas)
    for key, vals in lines.items():
        others = list(key[:i]) + [0] + list(key[i:])
        top_pair = pair_coroot(cd, hw, i) - sum(
            others[j] * cd.a[i][j] for j in range(cd.rank) if j != i)
        hi = max(max(vals), top_pair if top_pair > 0 else 0)
        for t in range(hi + 1):
            out.add(tuple(key[:i]) + (t,) + tuple(key[i:]))
    return out


def _downward_close(betas: set) -> set:
    out = set(betas)
    stack = list(betas)
    while stack:
        beta = stack.pop()
        for j in range(len(beta)):
            if beta[j] > 0:
                b2 = beta[:j] + (beta[j] - 1,) + beta[j + 1:]
                if b2 not in out:
                    out.add(b2)
                    stack.append(b2)
    return out


# ---------------------------------------------------------------------------


class TruncModule:
    def __init__(self, cd: CartanData, hw: Weight, depth: int,
                 string_complete=(), rng_seed: int = 7):
        from .rootdata import is_dominant
        if not is_dominant(cd, hw):
            raise ValueError("highest weight must be dominant")
        self.cd = cd
        self.hw = hw
        self.depth = depth
        self.string_complete = tuple(string_complete)
        betas = _simplex(cd.rank, depth)
        for i in self.string_complete:
            betas = _close_strings(cd, hw, betas, i)
            betas = _downward_close(betas)
        self.betas = betas
        self.gram = GramTable(cd, hw, ExactRing())
        self._rng = random.Random(rng_seed)
        self._q0 = Fraction(self._rng.randrange(3, 97), 197)
        self.gram_frac = GramTable(cd, hw, FracRing(self._q0))
        self.basis: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
        self.gram_basis: dict[tuple[int, ...], linalg.Matrix] = {}
        self._express_cache: dict[tuple, tuple] = {}
        self._fmat: dict[tuple, linalg.Matrix | None] = {}
        self._emat: dict[tuple, linalg.Matrix] = {}
        for beta in sorted(betas, key=lambda b: (sum(b), b)):
            self._build_space(beta)

    # -- construction --------------------------------------------------
    def _build_space(self, beta: tuple[int, ...]) -> None:
        words = _words_of_content(beta)
        if not words:
            self.basis[beta] = []
            self.gram_basis[beta] = []
            return
        full = [[self.gram.pair(a, b) for b in words] for a in words]
        target_rank = linalg.rank(full)
        # numeric pre-pass: greedy pivot selection at a random rational q0
        num_rows = [[self.gram_frac.pair(a, b) for b in words] for a in words]
        pivots: list[int] = []
        work: list[list[Fraction]] = []
        for r, row in enumerate(num_rows):
            if len(pivots) == target_rank:
                break
            cand = work + [row[:]]
            if linalg.frac_rank(cand) == len(pivots) + 1:
                pivots.append(r)
                work = cand
        chosen = [words[p] for p in pivots]
        sub = [[full[a][b] for b in pivots] for a in pivots]
        if len(chosen) != target_rank or linalg.rank(sub) != target_rank:
            # unlucky specialization: redo the pivot search exactly
            pivots = []
            exact_work: list[list[FieldElem]] = []
            for r, row in enumerate(full):
                if len(pivots) == target_rank:
                    break
                cand = exact_work + [row[:]]
                if linalg.rank(cand) == len(pivots) + 1:
                    pivots.append(r)
                    exact_work = cand
            chosen = [words[p] for p in pivots]
            sub = [[full[a][b] for b in pivots] for a in pivots]
        self.basis[beta] = chosen
        self.gram_basis[beta] = sub

    def dim(self, beta: tuple[int, ...]) -> int:
        return len(self.basis.get(beta, []))

    def dims(self) -> dict[tuple[int, ...], int]:
        return {beta: len(b) for beta, b in self.basis.items()}

    # -- expressing words in the chosen basis ---------------------------
    def express(self, word: tuple[int, ...]) -> Vec:
        beta = tuple(word.count(i) for i in range(self.cd.rank))
        if beta not in self.betas:
            raise TruncationError(f"weight {beta} outside the stored window")
        if word in self._express_cache:
            b, c = self._express_cache[word]
            return Vec(b, list(c))
        basis = self.basis[beta]
        if not basis:
            vec = ZERO_VEC
        elif word in basis:
            coords = [FieldElem.one() if w == word else FieldElem.zero() for w in basis]
            vec = Vec(beta, coords)
        else:
            col = [self.gram.pair(a, word) for a in basis]
            sol = linalg.solve(self.gram_basis[beta], col)
            if sol is None:
                raise RuntimeError("Gram system inconsistent; internal error")
            vec = Vec(beta, sol)
        self._express_cache[word] = (vec.beta, tuple(vec.coords))
        return vec

    # -- operators ------------------------------------------------------
    def fmat(self, i: int, beta: tuple[int, ...]) -> linalg.Matrix | None:
        """Matrix of F_i from space beta to space beta+e_i; None if truncated."""
        key = (i, beta)
        if key in self._fmat:
            return self._fmat[key]
        target = beta[:i] + (beta[i] + 1,) + beta[i + 1:]
        if target not in self.betas:
            # The i-string through Lambda - sum_{j != i} target_j alpha_j
            # has i-depth at most k0; beyond it the weight space of the
            # full module is zero, so F_i is genuinely zero rather than
            # truncated.
            k0 = pair_coroot(self.cd, self.hw, i)
            k0 -= sum(target[j] * self.cd.a[i][j]
                      for j in self.cd.nodes if j != i)
            if target[i] > k0:
                self._fmat[key] = []
                return []
            self._fmat[key] = None
            return None
        rows = len(self.basis[target])
        cols = []
        for b in self.basis[beta]:
            v = self.express((i,) + b)
            cols.append(v.coords if v.beta is not None else [FieldElem.zero()] * rows)
        mat = [[cols[c][r] for c in range(len(cols))] for r in range(rows)]
        self._fmat[key] = mat
        return mat

    def emat(self, i: int, beta: tuple[int, ...]) -> linalg.Matrix:
        """Matrix of E_i from space beta to space beta-e_i."""
        key = (i, beta)
        if key in self._emat:
            return self._emat[key]
        if beta[i] == 0:
            target_dim = 0
        else:
            target = beta[:i] + (beta[i] - 1,) + beta[i + 1:]
            target_dim = len(self.basis[target])
        cols = []
        for b in self.basis[beta]:
            acc = [FieldElem.zero()] * target_dim
            for scal, shorter in self.gram.raise_word(i, b):
                v = self.express(shorter)
                if v.beta is not None:
                    for r in range(target_dim):
                        acc[r] = acc[r] + scal * v.coords[r]
            cols.append(acc)
        mat = [[cols[c][r] for c in range(len(cols))] for r in range(target_dim)]
        self._emat[key] = mat
        return mat

    def kexp(self, i: int, beta: tuple[int, ...]) -> int:
        """Integer n with K_i acting by q^n on the space Lambda - beta."""
        wt = self.hw - Weight((0,) * self.cd.rank,
                              tuple(-b for b in beta))
        return self.cd.d[i] * pair_coroot(self.cd, wt, i)

    def weight_of(self, beta: tuple[int, ...]) -> Weight:
        return self.hw - Weight((0,) * self.cd.rank, tuple(-b for b in beta))

    def highest_vec(self) -> Vec:
        z = (0,) * self.cd.rank
        return Vec(z, [FieldElem.one()])

    # -- action ---------------------------------------------------------
    def act(self, letter: Letter, vec: Vec, on_truncation: str = "zero"):
        """Apply one generator letter; returns (Vec, truncated_flag)."""
        if vec.is_zero():
            return ZERO_VEC, False
        beta = vec.beta
        kind = letter[0]
        i = letter[1]
        if kind == "K":
            n = letter[2] * self.kexp(i, beta)
            s = FieldElem.q_power(n)
            return Vec(beta, [c * s for c in vec.coords]), False
        if kind == "E":
            if beta[i] == 0:
                return ZERO_VEC, False
            mat = self.emat(i, beta)
            target = beta[:i] + (beta[i] - 1,) + beta[i + 1:]
            if not mat:
                return ZERO_VEC, False
            return Vec(target, linalg.mat_vec(mat, vec.coords)), False
        if kind == "F":
            mat = self.fmat(i, beta)
            if mat is None:
                if on_truncation == "raise":
                    raise TruncationError(
                        f"F_{i} leaves the window from weight {beta}")
                return ZERO_VEC, True
            target = beta[:i] + (beta[i] + 1,) + beta[i + 1:]
            if not mat:
                return ZERO_VEC, False
            return Vec(target, linalg.mat_vec(mat, vec.coords)), False
        raise ValueError(f"unknown letter {letter!r}")

    def act_word(self, word, vec: Vec, on_truncation: str = "zero"):
        """Apply a word of letters, rightmost letter first."""
        truncated = False
        for letter in reversed(list(word)):
            vec, t = self.act(letter, vec, on_truncation)
            truncated = truncated or t
            if vec.is_zero():
                return ZERO_VEC, truncated
        return vec, truncated

    # -- interiors and boundary -----------------------------------------
    def is_boundary(self, beta: tuple[int, ...]) -> bool:
        for i in range(self.cd.rank):
            if beta[:i] + (beta[i] + 1,) + beta[i + 1:] not in self.betas:
                return True
        return False

    def interior(self, length: int) -> list[tuple[int, ...]]:
        """Weights from which every chain of <= length F-steps stays inside."""
        out = []
        for beta in self.betas:
            ok = True
            for gamma in _simplex(self.cd.rank, length):
                if tuple(b + g for b, g in zip(beta, gamma)) not in self.betas:
                    ok = False
                    break
            if ok:
                out.append(beta)
        return sorted(out)

    # -- contravariant form ---------------------------------------------
    def module_pair(self, v1: Vec, v2: Vec) -> FieldElem:
        if v1.is_zero() or v2.is_zero() or v1.beta != v2.beta:
            return FieldElem.zero()
        g = self.gram_basis[v1.beta]
        total = FieldElem.zero()
        for r, a in enumerate(v1.coords):
            if a.is_zero():
                continue
            for c, b in enumerate(v2.coords):
                if not b.is_zero():
                    total = total + a * g[r][c] * b
        return total


# ---------------------------------------------------------------------------
# Dual vectors (coordinate duals of the chosen bases)


@dataclass
class DualVec:
    beta: tuple[int, ...] | None
    coords: list[FieldElem]

    def is_zero(self) -> bool:
        return self.beta is None or all(c.is_zero() for c in self.coords)


ZERO_DUAL = DualVec(None, [])


def dual_basis(m: TruncModule, beta: tuple[int, ...]) -> list[DualVec]:
    n = m.dim(beta)
    return [DualVec(beta, [FieldElem.one() if k == j else FieldElem.zero()
                           for k in range(n)]) for j in range(n)]


def lowest_dual(m: TruncModule) -> DualVec:
    """The functional dual to the highest-weight vector."""
    z = (0,) * m.cd.rank
    return DualVec(z, [FieldElem.one()])


def pairing(l: DualVec, v: Vec) -> FieldElem:
    if l.is_zero() or v.is_zero() or l.beta != v.beta:
        return FieldElem.zero()
    total = FieldElem.zero()
    for a, b in zip(l.coords, v.coords):
        if not a.is_zero() and not b.is_zero():
            total = total + a * b
    return total


def dual_right_act(m: TruncModule, l: DualVec, letter: Letter) -> DualVec:
    """(l . x)(v) = l(x v): the plain right action on functionals."""
    if l.is_zero():
        return ZERO_DUAL
    beta = l.beta
    kind, i = letter[0], letter[1]
    if kind == "K":
        n = letter[2] * m.kexp(i, beta)
        s = FieldElem.q_power(n)
        return DualVec(beta, [c * s for c in l.coords])
    if kind == "E":
        source = beta[:i] + (beta[i] + 1,) + beta[i + 1:]
        if source not in m.betas or not m.basis[source]:
            return ZERO_DUAL
        mat = m.emat(i, source)
        if not mat:
            return ZERO_DUAL
        coords = [FieldElem.zero()] * len(m.basis[source])
        for r, lc in enumerate(l.coords):
            if lc.is_zero():
                continue
            for c in range(len(coords)):
                coords[c] = coords[c] + lc * mat[r][c]
        return DualVec(source, coords)
    if kind == "F":
        if beta[i] == 0:
            return ZERO_DUAL
        source = beta[:i] + (beta[i] - 1,) + beta[i + 1:]
        mat = m.fmat(i, source)
        if mat is None or not m.basis[source]:
            return ZERO_DUAL
        coords = [FieldElem.zero()] * len(m.basis[source])
        for r, lc in enumerate(l.coords):
            if lc.is_zero():
                continue
            for c in range(len(coords)):
                coords[c] = coords[c] + lc * mat[r][c]
        return DualVec(source, coords)
    raise ValueError(f"unknown letter {letter!r}")


def dual_right_act_word(m: TruncModule, l: DualVec, word) -> DualVec:
    """(l . x1 x2 ... xn)(v) = l(x1 x2 ... xn v): apply leftmost letter last."""
    for letter in word:
        l = dual_right_act(m, l, letter)
        if l.is_zero():
            return ZERO_DUAL
    return l


def sharp_act(m: TruncModule, letter: Letter, l: DualVec) -> DualVec:
    """Left action on the twisted dual: (u . l)(v) = l(omega(S(u)) v)."""
    kind, i = letter[0], letter[1]
    if kind == "K":
        # omega(S(K_i^s)) = omega(K_i^-s) = K_i^s
        return dual_right_act(m, l, ("K", i, letter[2]))
    if kind == "E":
        # omega(S(E_i)) = omega(-K_i^-1 E_i) = K_i F_i
        out = dual_right_act(m, l, ("F", i))
        return dual_right_act(m, out, ("K", i, 1)) if not out.is_zero() else ZERO_DUAL
    if kind == "F":
        # omega(S(F_i)) = omega(-F_i K_i) = E_i K_i^-1
        out = dual_right_act(m, l, ("K", i, -1))
        return dual_right_act(m, out, ("E", i)) if not out.is_zero() else ZERO_DUAL
    raise ValueError(f"unknown letter {letter!r}")


# ---------------------------------------------------------------------------
# Relation defect checks


def _op_on_interior(m: TruncModule, word, beta) -> list[list[FieldElem]]:
    """Matrix of a generator word on the basis of one weight space."""
    cols = []
    for j in range(m.dim(beta)):
        v = Vec(beta, [FieldElem.one() if k == j else FieldElem.zero()
                       for k in range(m.dim(beta))])
        out, truncated = m.act_word(word, v, on_truncation="raise")
        cols.append(out)
    return cols


def serre_defect(m: TruncModule, i: int, j: int):
    """Exact defect of the quantum Serre relations in directions (i, j).

    Returns a dict with the worst-case number of nonzero defect
    coordinates for the raising and lowering versions, evaluated on every
    interior basis vector.
    """
    if i == j:
        raise ValueError("Serre relations require i != j")
    n = 1 - m.cd.a[i][j]
    from .qfield import q_binom
    reports = {}
    for kind in ("E", "F"):
        length = n + 1 if kind == "F" else 0
        bad = 0
        checked = 0
        for beta in m.interior(length):
            for col in range(m.dim(beta)):
                v = Vec(beta, [FieldElem.one() if k == col else FieldElem.zero()
                               for k in range(m.dim(beta))])
                acc: dict[tuple, list[FieldElem]] = {}
                for k in range(n + 1):
                    word = [(kind, i)] * k + [(kind, j)] + [(kind, i)] * (n - k)
                    out, _ = m.act_word(word, v, on_truncation="raise")
                    if out.is_zero():
                        continue
                    coeff = q_binom(n, k, m.cd.d[i])
                    if k % 2 == 1:
                        coeff = -coeff
                    cur = acc.setdefault(out.beta, [FieldElem.zero()] * len(out.coords))
                    for r, c in enumerate(out.coords):
                        cur[r] = cur[r] + coeff * c
                checked += 1
                for coords in acc.values():
                    bad += sum(0 if c.is_zero() else 1 for c in coords)
        reports[kind] = {"nonzero_defects": bad, "vectors_checked": checked}
    return reports


def cross_defect(m: TruncModule, i: int, j: int):
    """Exact defect of E_i F_j - F_j E_i = delta_ij (K_i - K_i^-1)/(q_i - q_i^-1)."""
    bad = 0
    checked = 0
    d_i = m.cd.d[i]
    for beta in m.interior(1):
        for col in range(m.dim(beta)):
            v = Vec(beta, [FieldElem.one() if k == col else FieldElem.zero()
                           for k in range(m.dim(beta))])
            a, _ = m.act_word([("E", i), ("F", j)], v, on_truncation="raise")
            b, _ = m.act_word([("F", j), ("E", i)], v, on_truncation="raise")
            acc: dict[tuple, list[FieldElem]] = {}
            for sgn, out in ((1, a), (-1, b)):
                if out.is_zero():
                    continue
                cur = acc.setdefault(out.beta, [FieldElem.zero()] * len(out.coords))
                for r, c in enumerate(out.coords):
                    cur[r] = cur[r] + (c if sgn == 1 else -c)
            if i == j:
                n = m.kexp(i, beta)  # K_i acts by q^n here
                scal = q_int(n // d_i, d_i) if n % d_i == 0 else None
                if scal is None:
                    raise RuntimeError("K-exponent not divisible by d_i")
                cur = acc.setdefault(beta, [FieldElem.zero()] * m.dim(beta))
                for r in range(m.dim(beta)):
                    cur[r] = cur[r] - scal * v.coords[r]
            checked += 1
            for coords in acc.values():
                bad += sum(0 if c.is_zero() else 1 for c in coords)
    return {"nonzero_defects": bad, "vectors_checked": checked}


# ---------------------------------------------------------------------------
# Independent multiplicity oracle


def multiplicities_specialized(cd: CartanData, hw: Weight, depth: int,
                               q0: Fraction) -> dict[tuple[int, ...], int]:
    """Weight multiplicities via Gram ranks at a fixed rational q0.

    Runs entirely in rational arithmetic; used as an independent oracle
    for the exact construction.
    """
    table = GramTable(cd, hw, FracRing(q0))
    out = {}
    for beta in sorted(_simplex(cd.rank, depth), key=lambda b: (sum(b), b)):
        words = _words_of_content(beta)
        if not words:
            out[beta] = 0
            continue
        rows = [[table.pair(a, b) for b in words] for a in words]
        out[beta] = linalg.frac_rank(rows)
    return out
