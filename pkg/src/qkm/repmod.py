"""Irreducible modules over the coefficient algebra.

Elementary modules are ladder representations of the rank-one coefficient
algebra; longer modules are tensor products along a reduced Weyl word,
with operators assembled by iterating the coproduct expansion
Delta(C_{l,v}) = sum_j C_{l,u_j} (x) C_{l_j,v} across tensor legs.  At
each leg a coefficient is restricted to the corresponding rank-one
subalgebra and expanded exactly in the monomial basis of the four
spin-1/2 matrix coefficients; numbers appear only at the final
specialization q = q0.

All defining relations of the rank-one coefficient algebra, and the star
images of its generators, are themselves derived observationally (exact
nullspace over generator words) rather than transcribed, and the ladder
ansatz is validated against them at construction time.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .qfield import FieldElem, eval_at
from .rootdata import (CartanData, Weight, cartan_with_symmetrizers,
                       pair_coroot, reduce_word, weyl_act)
from .uqmod import (DualVec, TruncModule, TruncationError, Vec, dual_basis,
                    pairing)
from .coeffalg import (AElem, MatrixCoeff, ONE, _casimir_exponent, all_words,
                       counit, evaluate, level_of, n_infinity, sector_words,
                       top_coeff)

GEN_NAMES = ("t11", "t12", "t21", "t22")  # a, b, c, d


class RepError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Rank-one coefficient algebra: derived relations, star images, node modules


def _node_cartan(d: int) -> CartanData:
    return cartan_with_symmetrizers([[2]], [d])


_node_module_cache: dict[int, TruncModule] = {}


def node_module(d: int) -> TruncModule:
    """Truncated spin-1/2 module of the rank-one subalgebra with length d."""
    if d not in _node_module_cache:
        cd = _node_cartan(d)
        _node_module_cache[d] = TruncModule(cd, Weight((1,), (0,), 0), 1)
    return _node_module_cache[d]


def _node_generators(d: int) -> dict[str, MatrixCoeff]:
    m = node_module(d)
    v0 = m.highest_vec()
    v1 = Vec((1,), [FieldElem.one()])
    l0 = dual_basis(m, (0,))[0]
    l1 = dual_basis(m, (1,))[0]
    return {
        "t11": MatrixCoeff(m, l0, v0),
        "t12": MatrixCoeff(m, l0, v1),
        "t21": MatrixCoeff(m, l1, v0),
        "t22": MatrixCoeff(m, l1, v1),
    }


def _monomial_elem(gens: dict[str, MatrixCoeff], mono: tuple[str, ...]) -> AElem:
    return AElem([(ONE, tuple(gens[g] for g in mono))])


_relation_cache: dict[int, list[list[tuple[FieldElem, tuple[str, ...]]]]] = {}


def sl2_relations(d: int):
    """Exact relations among degree-<=2 monomials of the four generators.

    Derived as the nullspace of the evaluation matrix on all rank-one
    generator words of length <= 4; each relation is a list of
    (coefficient, monomial) pairs summing to zero in the algebra.
    """
    if d in _relation_cache:
        return _relation_cache[d]
    gens = _node_generators(d)
    cd = node_module(d).cd
    monos: list[tuple[str, ...]] = [()]
    monos += [(g,) for g in GEN_NAMES]
    monos += [(x, y) for x in GEN_NAMES for y in GEN_NAMES]
    funcs = [_monomial_elem(gens, mo) for mo in monos]
    rows = [[evaluate(f, w) for f in funcs] for w in all_words(cd, 4)]
    rels = []
    for vec in linalg.nullspace(rows):
        rels.append([(c, monos[k]) for k, c in enumerate(vec)
                     if not c.is_zero()])
    _relation_cache[d] = rels
    return rels


_star_cache: dict[int, dict[str, list[tuple[FieldElem, tuple[str, ...]]]]] = {}


def sl2_star_images(d: int):
    """Star image of each generator, expanded in {1, generators} exactly."""
    if d in _star_cache:
        return _star_cache[d]
    gens = _node_generators(d)
    cd = node_module(d).cd
    monos: list[tuple[str, ...]] = [()] + [(g,) for g in GEN_NAMES]
    funcs = [_monomial_elem(gens, mo) for mo in monos]
    words = list(all_words(cd, 4))
    A = [[evaluate(f, w) for f in funcs] for w in words]
    out = {}
    for g in GEN_NAMES:
        st = AElem([(ONE, (gens[g].star(),))])
        b = [evaluate(st, w) for w in words]
        sol = linalg.solve(A, b)
        if sol is None:
            raise RepError(f"star image of {g} not in the generator span")
        out[g] = [(c, monos[k]) for k, c in enumerate(sol) if not c.is_zero()]
    _star_cache[d] = out
    return out


# ---------------------------------------------------------------------------
# Elementary ladder representation


@dataclass
class ElementaryRep:
    """Ladder realization of the rank-one coefficient algebra.

    ``gens`` holds the four generator operators in the Hermitian-unit
    normalization (diagonal generator spectrum {twist * q_i^k}); the
    coordinate normalization used for exact coefficient expansion differs
    by the q-power scalar ``coord_scale``.
    """
    node: int
    d: int
    dim_cap: int
    q0: Fraction
    char_twist: complex
    gens: dict[str, np.ndarray] = field(default_factory=dict)
    coord_gens: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def qi(self) -> float:
        return float(self.q0) ** self.d


def _ladder_matrices(d: int, K: int, q0: Fraction, twist: complex):
    qi = float(q0) ** d
    A = np.zeros((K, K), dtype=complex)
    for k in range(1, K):
        A[k - 1, k] = math.sqrt(1.0 - qi ** (2 * k))
    D = A.conj().T
    ks = np.arange(K)
    # Coordinate normalization (matches the coefficient-algebra scaling
    # of the spin-1/2 basis): diagonal entries twist * q_i^{k+1/2}.
    Cc = np.diag(twist * qi ** (ks + 0.5))
    Bc = np.diag(-np.conj(twist) * qi ** (ks + 0.5))
    coord = {"t11": A, "t12": Bc, "t21": Cc, "t22": D}
    # Hermitian-unit normalization of the extremal dual/vector rescales
    # t21 by q_i^{-1/2} and t12 by q_i^{+1/2}.
    gens = {"t11": A, "t12": Bc * qi ** 0.5, "t21": Cc * qi ** -0.5,
            "t22": D}
    return gens, coord


def _mono_op(gens: dict[str, np.ndarray], mono: tuple[str, ...], K: int):
    out = np.eye(K, dtype=complex)
    for g in mono:
        out = out @ gens[g]
    return out


def _interior_norm(M: np.ndarray, K_per_leg: int, legs: int, margin: int):
    idx = _interior_flat_indices(K_per_leg, legs, margin)
    return float(np.max(np.abs(M[np.ix_(idx, idx)]))) if len(idx) else 0.0


def _interior_flat_indices(K: int, legs: int, margin: int) -> list[int]:
    lim = max(K - margin, 1)
    out = []
    for combo in itertools.product(range(lim), repeat=legs):
        flat = 0
        for k in combo:
            flat = flat * K + k
        out.append(flat)
    return out


def elementary_rep(cd: CartanData, i: int, K: int, q0,
                   twist: complex = 1.0 + 0.0j,
                   rel_tol: float = 1e-12) -> ElementaryRep:
    """Build and validate the ladder representation of node i.

    The generator matrices are validated against the full relation set
    derived observationally from the rank-one coefficient algebra, plus
    star-compatibility; construction fails if any relation exceeds
    rel_tol on the interior rows.
    """
    q0 = Fraction(q0)
    if K < 2:
        raise ValueError("dim_cap must be at least 2")
    if not (0 < q0 < 1):
        raise ValueError("q0 must satisfy 0 < q0 < 1")
    if abs(abs(twist) - 1.0) > 1e-12:
        raise ValueError("char_twist must have modulus 1")
    d = cd.d[i]
    gens, coord = _ladder_matrices(d, K, q0, twist)
    worst = 0.0
    for which in (coord, gens):
        for rel in sl2_relations(d):
            M = np.zeros((K, K), dtype=complex)
            for c, mono in rel:
                M += complex(c.eval_fraction(q0)) * _mono_op(which, mono, K)
            worst = max(worst, _interior_norm(M, K, 1, 2))
    if worst > rel_tol:
        raise RepError(
            f"ladder ansatz violates a derived relation ({worst:.3e})")
    # star compatibility in the coordinate normalization
    stars = sl2_star_images(d)
    star_worst = 0.0
    for g in GEN_NAMES:
        M = np.zeros((K, K), dtype=complex)
        for c, mono in stars[g]:
            M += complex(c.eval_fraction(q0)) * _mono_op(coord, mono, K)
        diff = coord[g].conj().T - M
        star_worst = max(star_worst, _interior_norm(diff, K, 1, 2))
    if star_worst > 1e-9:
        raise RepError(
            f"ladder ansatz violates star compatibility ({star_worst:.3e})")
    return ElementaryRep(node=i, d=d, dim_cap=K, q0=q0, char_twist=twist,
                         gens=gens, coord_gens=coord)


# ---------------------------------------------------------------------------
# Restriction to a node: exact expansion in the spin-1/2 monomial basis


def _sector_monomials(net: int, cap: int) -> list[tuple[str, ...]]:
    """Ordered monomials t12^r t21^s t11^t / t12^r t21^s t22^u with s-r=net."""
    out = []
    for r in range(cap + 1):
        s = r + net
        if s < 0 or r + s > cap:
            continue
        head = ("t12",) * r + ("t21",) * s
        for t in range(cap + 1 - r - s):
            out.append(head + ("t11",) * t)
        for u in range(1, cap + 1 - r - s):
            out.append(head + ("t22",) * u)
    return out


def _ambient_word(word, i: int):
    out = []
    for letter in word:
        if letter[0] == "K":
            out.append(("K", i, letter[2]))
        else:
            out.append((letter[0], i))
    return out


_psi_cache: dict = {}


def _coeff_key(C: MatrixCoeff):
    return (id(C.module), C.l.beta, tuple(str(c) for c in C.l.coords),
            C.v.beta, tuple(str(c) for c in C.v.coords), C.starred)


def _string_cap(C: MatrixCoeff, i: int) -> int:
    """Degree bound for the node-i restriction of C.

    The i-string through C.v inside the full module has at most K0 + 1
    weights, so the restriction involves spin components of degree at
    most K0 in the spin-1/2 generators.
    """
    cd = C.module.cd
    k0 = pair_coroot(cd, C.module.hw, i)
    k0 -= sum(C.v.beta[j] * cd.a[i][j] for j in cd.nodes if j != i)
    return max(k0, abs(C.l.beta[i] - C.v.beta[i]), 0)


def psi_star_expand(C: MatrixCoeff, i: int, degree_cap: int | None = None):
    """Expand the restriction of C to the node-i subalgebra exactly.

    Returns a list of (FieldElem, monomial) pairs over the spin-1/2
    coefficient monomial basis (coordinate normalization), determined by
    matching evaluations on node words; the linear system is solved
    exactly and must be consistent and full rank.  The default degree
    cap is the i-string bound through C.v.
    """
    if degree_cap is None:
        degree_cap = _string_cap(C, i)
    key = (_coeff_key(C), i, degree_cap)
    if key in _psi_cache:
        return _psi_cache[key]
    bl, bv = C.l.beta, C.v.beta
    for j in range(len(bl)):
        if j != i and bl[j] != bv[j]:
            _psi_cache[key] = []
            return []
    net = bl[i] - bv[i]
    if C.starred:
        net = -net
    d = C.module.cd.d[i]
    gens = _node_generators(d)
    node_cd = node_module(d).cd
    monos = _sector_monomials(net, degree_cap)
    if not monos:
        _psi_cache[key] = []
        return []
    funcs = [_monomial_elem(gens, mo) for mo in monos]
    target = AElem.from_coeff(C)
    maxlen = max(abs(net), 1)
    while True:
        words = sector_words(node_cd, (net,), maxlen)
        rows = [[evaluate(f, w) for f in funcs] for w in words]
        if rows and linalg.rank(rows) == len(monos):
            break
        maxlen += 1
        if maxlen > 2 * degree_cap + 4:
            raise RepError("monomial basis not separated by node words; "
                           "raise degree_cap")
    try:
        rhs = [evaluate(target, _ambient_word(w, i)) for w in words]
    except TruncationError as exc:
        raise RepError(
            f"module not string-complete for node {i}: {exc}") from exc
    sol = linalg.solve(rows, rhs)
    if sol is None:
        raise RepError("restriction not expressible at this degree; "
                       "raise degree_cap")
    out = [(c, monos[k]) for k, c in enumerate(sol) if not c.is_zero()]
    _psi_cache[key] = out
    return out


# ---------------------------------------------------------------------------
# Tensor-product modules


@dataclass
class Rep:
    cd: CartanData
    word: tuple[int, ...]
    K: int
    q0: Fraction
    factors: list[ElementaryRep]
    twists: tuple[complex, ...]
    _modules: dict = field(default_factory=dict)
    skipped_pairs: int = 0

    @property
    def dim(self) -> int:
        return self.K ** len(self.word) if self.word else 1

    def module_for(self, hw: Weight, depth: int) -> TruncModule:
        key = (hw.dom, hw.delta_shift, depth)
        if key not in self._modules:
            self._modules[key] = TruncModule(self.cd, hw, depth)
        return self._modules[key]

    def extremal_beta(self, hw: Weight) -> tuple[int, ...]:
        w_hw = weyl_act(self.cd, self.word, hw)
        diff = hw - w_hw
        beta = tuple(-b for b in diff.beta)
        if any(b < 0 for b in beta) or diff.dom != (0,) * self.cd.rank:
            raise RepError("Weyl image is not below the highest weight")
        return beta


def build_Nw(cd: CartanData, word, K: int, q0, twists=None) -> Rep:
    """Assemble the tensor module for a reduced word, leftmost factor first."""
    word = tuple(word)
    red = reduce_word(cd, word)
    if len(red) != len(word):
        word = red
    q0 = Fraction(q0)
    if twists is None:
        twists = (1.0 + 0.0j,) * len(word)
    twists = tuple(complex(t) for t in twists)
    factors = [elementary_rep(cd, i, K, q0, twist=t)
               for i, t in zip(word, twists)]
    return Rep(cd=cd, word=word, K=K, q0=q0, factors=factors, twists=twists)


def _leg_operator(factor: ElementaryRep, C: MatrixCoeff,
                  degree_cap: int | None = None) -> np.ndarray | None:
    """Numeric operator of C restricted to one tensor leg; None if zero."""
    expansion = psi_star_expand(C, factor.node, degree_cap)
    if not expansion:
        return None
    K = factor.dim_cap
    q0 = factor.q0
    out = np.zeros((K, K), dtype=complex)
    gens = factor.coord_gens
    # A starred coefficient is expanded directly (the expansion already
    # solves for the starred functional in the plain monomial basis).
    for c, mono in expansion:
        out += complex(c.eval_fraction(q0)) * _mono_op(gens, mono, K)
    return out if np.max(np.abs(out)) > 0 else None


def _basis_pairs(m: TruncModule):
    """All (dual, vector) coordinate pairs of the truncated module."""
    out = []
    for beta in sorted(m.betas):
        duals = dual_basis(m, beta)
        for j, l in enumerate(duals):
            coords = [FieldElem.zero()] * len(duals)
            coords[j] = FieldElem.one()
            out.append((l, Vec(beta, coords)))
    return out


def rep_operator(rep: Rep, C: MatrixCoeff, degree_cap: int | None = None):
    """Operator of the coefficient C on the tensor module.

    Iterates the coproduct expansion Delta(C_{l,v}) = sum_j C_{l,u_j}
    (x) C_{l_j,v} across legs (same order for starred coefficients),
    restricting each leg factor to its node subalgebra.
    """
    if not rep.word:
        val = complex(pairing(C.l, C.v).eval_fraction(rep.q0))
        return np.array([[val]], dtype=complex)
    return _op_from_leg(rep, 0, C, degree_cap)


def _op_from_leg(rep: Rep, leg: int, C: MatrixCoeff, degree_cap: int):
    n = len(rep.word)
    if leg == n - 1:
        try:
            M = _leg_operator(rep.factors[leg], C, degree_cap)
        except RepError:
            rep.skipped_pairs += 1
            M = None
        if M is None:
            M = np.zeros((rep.K, rep.K), dtype=complex)
        return M
    m = C.module
    tail_dim = rep.K ** (n - leg - 1)
    total = np.zeros((rep.K * tail_dim, rep.K * tail_dim), dtype=complex)
    i = rep.factors[leg].node
    rem = set(rep.word[leg + 1:])
    for l_j, u_j in _basis_pairs(m):
        # sector filter: the leg coefficient C_{l,u_j} must be supported
        # on the node-i subalgebra
        ok = all(C.l.beta[t] == u_j.beta[t]
                 for t in range(m.cd.rank) if t != i)
        if not ok:
            continue
        # tail feasibility: remaining legs only move the remaining nodes
        if any(u_j.beta[r] != C.v.beta[r]
               for r in range(m.cd.rank) if r not in rem):
            continue
        right = MatrixCoeff(m, l_j, C.v, starred=C.starred)
        R = _op_from_leg(rep, leg + 1, right, degree_cap)
        if np.max(np.abs(R)) == 0:
            continue
        left = MatrixCoeff(m, C.l, u_j, starred=C.starred)
        try:
            L = _leg_operator(rep.factors[leg], left, degree_cap)
        except RepError:
            # the node string through u_j leaves the truncation window;
            # this contribution only affects entries near the boundary
            rep.skipped_pairs += 1
            continue
        if L is None:
            continue
        total += np.kron(L, R)
    return total


# ---------------------------------------------------------------------------
# Extremal coefficients and their normalization


def extremal_dual(m: TruncModule, beta: tuple[int, ...]) -> DualVec:
    duals = dual_basis(m, beta)
    if len(duals) != 1:
        raise RepError(f"extremal weight space at {beta} is not a line")
    return duals[0]


def extremal_norm_scalar(m: TruncModule, beta: tuple[int, ...],
                         q0: Fraction) -> float:
    """sqrt of the Hermitian square of the extremal basis vector.

    The Hermitian form is the contravariant Gram twisted by the Casimir
    q-power; the paper-normalized coefficient is this scalar times the
    coordinate one.
    """
    g = m.gram_basis[beta][0][0].eval_fraction(q0)
    h = Fraction(q0) ** _casimir_exponent(m, beta) * g
    if h <= 0:
        raise RepError("Hermitian square not positive at q0")
    return math.sqrt(float(h))


def wlam_operator(rep: Rep, hw: Weight, depth: int,
                  normalized: bool = True) -> np.ndarray:
    """Numeric operator of C_{-w Lambda, Lambda} on the tensor module."""
    m = rep.module_for(hw, depth)
    beta = rep.extremal_beta(hw)
    if beta not in m.betas:
        raise RepError(f"depth {depth} too shallow for extremal weight {beta}")
    l = extremal_dual(m, beta)
    op = rep_operator(rep, MatrixCoeff(m, l, m.highest_vec()))
    if normalized:
        op = op * extremal_norm_scalar(m, beta, rep.q0)
    return op


# ---------------------------------------------------------------------------
# Spectra and weight decomposition


def interior_block(rep: Rep, M: np.ndarray, margin: int = 2) -> np.ndarray:
    legs = max(len(rep.word), 1)
    K = rep.K if rep.word else 1
    idx = _interior_flat_indices(K, legs, margin if rep.word else 0)
    return M[np.ix_(idx, idx)]


def spectra(rep: Rep, hw: Weight, depth: int, margin: int = 2,
            tol: float = 1e-8):
    """Eigenvalues of the normalized extremal operator with weight labels.

    Labels are exponents t with |eigenvalue| = q0^t matched within tol
    (t = (gamma, Lambda) for the weight gamma of the eigenvector); an
    unmatched eigenvalue is labeled None (truncation artifact).
    """
    op = interior_block(rep, wlam_operator(rep, hw, depth), margin)
    eigs = np.linalg.eigvals(op)
    q0 = float(rep.q0)
    out = []
    for e in sorted(eigs, key=lambda z: -abs(z)):
        if abs(e) < 1e-13:
            out.append((complex(e), None))
            continue
        t = math.log(abs(e)) / math.log(q0)
        # admissible exponents are nonnegative multiples of 1/denominator
        tr = round(t * 24) / 24
        out.append((complex(e), tr if abs(t - tr) < tol else None))
    return out


def weight_decomposition(rep: Rep, hw_list, depth: int, margin: int = 2,
                         tol: float = 1e-8):
    """Partition interior basis indices by the weight label gamma.

    Uses the diagonal of each (weight-triangular) extremal operator:
    basis vector x has |diag| = q0^{(gamma, Lambda)}.  With all
    fundamental weights listed, gamma = -sum c_j alpha_j is determined by
    c_j = t_j / d_j from the label against omega_j.  Verifies gamma <= 0
    and returns {gamma: [indices]}.
    """
    cd = rep.cd
    legs = max(len(rep.word), 1)
    K = rep.K if rep.word else 1
    idx = _interior_flat_indices(K, legs, margin if rep.word else 0)
    q0 = float(rep.q0)
    diags = []
    for hw in hw_list:
        op = wlam_operator(rep, hw, depth)
        diags.append(np.diag(op))
    blocks: dict[tuple[int, ...], list[int]] = {}
    for flat in idx:
        ts = []
        for dvec in diags:
            a = abs(dvec[flat])
            if a < 1e-13:
                raise RepError("vanishing diagonal entry; deepen truncation")
            ts.append(math.log(a) / math.log(q0))
        # solve -sum_j c_j (alpha_j, Lambda_k) = -t_k for integer c_j >= 0
        gamma = _match_gamma(cd, hw_list, ts, tol)
        if gamma is None:
            raise RepError(f"basis index {flat} has no admissible weight label")
        blocks.setdefault(gamma, []).append(flat)
    return blocks


def _match_gamma(cd: CartanData, hw_list, ts, tol):
    """Find c_j >= 0 integers with sum_j c_j (alpha_j, Lambda_k) = t_k."""
    n = cd.rank
    rows = [[float(cd.d[j] * hw.dom[j]) for j in range(n)] for hw in hw_list]
    bound = int(max(ts) / min(x for r in rows for x in r if x > 0) + 2) \
        if any(t > tol for t in ts) else 0
    best = None
    for combo in itertools.product(range(bound + 1), repeat=n):
        ok = True
        for r, t in zip(rows, ts):
            if abs(sum(c * x for c, x in zip(combo, r)) - t) > tol:
                ok = False
                break
        if ok:
            if best is not None and combo != best:
                return None  # ambiguous labeling
            best = combo
    if best is None:
        return None
    return tuple(-c for c in best)


# ---------------------------------------------------------------------------
# Checks


def check_factorization(cd: CartanData, i: int, w_word, hw: Weight, K: int,
                        q0, depth: int, tol: float = 1e-10,
                        swap: bool = False) -> dict:
    """Leading-coefficient factorization across the first tensor leg.

    For the length-increasing product s_i w, the operator of
    C_{-s_i w Lambda, Lambda} on N(i) (x) N(w) must equal the tensor
    product of the single-leg operator of C_{-s_i w Lambda, w Lambda}
    with the N(w)-operator of C_{-w Lambda, Lambda}.
    """
    w_word = tuple(w_word)
    full = (i,) + w_word
    if len(reduce_word(cd, full)) != len(full):
        raise RepError("s_i w is not length-increasing")
    rep_full = build_Nw(cd, full, K, q0)
    rep_w = build_Nw(cd, w_word, K, q0)
    m = rep_full.module_for(hw, depth)
    beta_full = rep_full.extremal_beta(hw)
    beta_w = rep_w.extremal_beta(hw)
    if beta_full not in m.betas:
        raise RepError(f"depth {depth} too shallow for {beta_full}")
    l_full = extremal_dual(m, beta_full)
    lhs = rep_operator(rep_full, MatrixCoeff(m, l_full, m.highest_vec()))
    # middle coefficient C_{-s_i w Lambda, w Lambda} on the first leg
    duals_w = dual_basis(m, beta_w)
    u_w = Vec(beta_w, [FieldElem.one()] + [FieldElem.zero()] * (len(duals_w) - 1))
    mid = MatrixCoeff(m, l_full, u_w)
    leg = _leg_operator(rep_full.factors[0], mid)
    if leg is None:
        leg = np.zeros((K, K), dtype=complex)
    l_w = extremal_dual(m, beta_w)
    tail = rep_operator(rep_w, MatrixCoeff(m, l_w, m.highest_vec()))
    rhs = np.kron(tail, leg) if swap else np.kron(leg, tail)
    dev = float(np.max(np.abs(lhs - rhs)))
    return {
        "check": "factorization",
        "status": "PASS" if dev <= tol else "FAIL",
        "witness": {"word": list(full), "deviation": dev, "tol": tol,
                    "dim": rep_full.dim, "swapped": swap},
    }


def _demazure_subspace(m: TruncModule, word):
    """Span of E-words on the extremal vector, as {beta: coordinate rows}."""
    cd = m.cd
    vec = m.highest_vec()
    wt = m.hw
    for i in reversed(tuple(word)):
        n = pair_coroot(cd, wt, i)
        for _ in range(max(n, 0)):
            vec, trunc = m.act(("F", i), vec)
            if trunc or vec.is_zero():
                raise RepError("extremal vector leaves the truncation window")
        wt = weyl_act(cd, (i,), wt)
    spans: dict[tuple[int, ...], list[list[FieldElem]]] = {}
    frontier = [vec]
    spans[vec.beta] = [list(vec.coords)]
    while frontier:
        new = []
        for v in frontier:
            for i in cd.nodes:
                w2, _ = m.act(("E", i), v)
                if w2.is_zero():
                    continue
                rows = spans.setdefault(w2.beta, [])
                if rows and linalg.rank(rows + [list(w2.coords)]) == len(rows):
                    continue
                rows.append(list(w2.coords))
                new.append(w2)
        frontier = new
    return spans


def check_annihilator(cd: CartanData, word, hw: Weight, depth: int, K: int,
                      q0, margin: int = 2, tol: float = 1e-10) -> dict:
    """Coefficients against the Demazure complement annihilate the module.

    For every dual vector vanishing on the E-closure of the extremal
    vector, the tensor-module operator must vanish on interior vectors;
    the extremal coefficient itself must act nonzero.
    """
    word = tuple(reduce_word(cd, word))
    rep = build_Nw(cd, word, K, q0)
    m = rep.module_for(hw, depth)
    spans = _demazure_subspace(m, word)
    worst = 0.0
    tested = 0
    for beta in sorted(m.betas):
        dim = m.dim(beta)
        if dim == 0:
            continue
        rows = spans.get(beta, [])
        if rows:
            complement = linalg.nullspace(rows, ncols=dim)
        else:
            complement = [[FieldElem.one() if t == j else FieldElem.zero()
                           for t in range(dim)] for j in range(dim)]
        for coords in complement:
            xi = DualVec(beta, list(coords))
            op = rep_operator(rep, MatrixCoeff(m, xi, m.highest_vec()))
            worst = max(worst, _op_interior_colnorm(rep, op, margin))
            tested += 1
    ext = wlam_operator(rep, hw, depth)
    ext_norm = float(np.max(np.abs(interior_block(rep, ext, margin))))
    status = "PASS" if worst <= tol and ext_norm > 1e-6 else "FAIL"
    return {
        "check": "annihilator",
        "status": status,
        "witness": {"word": list(word), "complement_duals": tested,
                    "max_norm": worst, "extremal_norm": ext_norm,
                    "tol": tol},
    }


def _op_interior_colnorm(rep: Rep, M: np.ndarray, margin: int) -> float:
    legs = max(len(rep.word), 1)
    K = rep.K if rep.word else 1
    idx = _interior_flat_indices(K, legs, margin if rep.word else 0)
    if not idx:
        return 0.0
    return float(np.max(np.abs(M[:, idx])))


def check_unitarity(rep: Rep, hw: Weight, depth: int, max_height: int = 2,
                    margin: int = 2, tol: float = 1e-9) -> dict:
    """Adjoint compatibility: the operator of a starred coefficient is the
    Hermitian adjoint of the coefficient's operator, on interior vectors."""
    m = rep.module_for(hw, depth)
    worst = 0.0
    sampled = 0
    for beta in sorted(m.betas):
        if sum(beta) > max_height:
            continue
        for l in dual_basis(m, beta):
            C = MatrixCoeff(m, l, m.highest_vec())
            A = rep_operator(rep, C)
            Astar = rep_operator(rep, C.star())
            diff = interior_block(rep, A.conj().T - Astar, margin)
            worst = max(worst, float(np.max(np.abs(diff))) if diff.size else 0.0)
            sampled += 1
    return {
        "check": "unitarity",
        "status": "PASS" if worst <= tol else "FAIL",
        "witness": {"sampled": sampled, "max_deviation": worst, "tol": tol},
    }


def check_reduced_word_independence(cd: CartanData, word1, word2, hw_list,
                                   K: int, q0, depth: int, margin: int = 2,
                                   tol: float = 1e-6) -> dict:
    """Spectral agreement of the two tensor realizations of one element."""
    word1, word2 = tuple(word1), tuple(word2)
    if len(word1) != len(word2):
        raise RepError("words have different lengths")
    # same Weyl group element: identical action on a spanning set of weights
    probes = [Weight(tuple(1 if j == t else 0 for j in cd.nodes),
                     (0,) * cd.rank) for t in cd.nodes]
    for p in probes:
        if weyl_act(cd, word1, p) != weyl_act(cd, word2, p):
            raise RepError("words are not two reduced expressions of one "
                           "Weyl group element")
    rep1 = build_Nw(cd, word1, K, q0)
    rep2 = build_Nw(cd, word2, K, q0)
    worst = 0.0
    per_hw = []
    for hw in hw_list:
        e1 = np.array(sorted(
            np.linalg.eigvals(interior_block(rep1, wlam_operator(rep1, hw, depth), margin)),
            key=lambda z: (-abs(z), z.real, z.imag)))
        e2 = np.array(sorted(
            np.linalg.eigvals(interior_block(rep2, wlam_operator(rep2, hw, depth), margin)),
            key=lambda z: (-abs(z), z.real, z.imag)))
        n = min(len(e1), len(e2))
        dev = float(np.max(np.abs(e1[:n] - e2[:n]))) if n else 0.0
        per_hw.append(dev)
        worst = max(worst, dev)
    return {
        "check": "reduced_word_independence",
        "status": "PASS" if worst <= tol else "FAIL",
        "witness": {"word1": list(word1), "word2": list(word2),
                    "max_deviation": worst, "per_weight": per_hw, "tol": tol},
    }


# ---------------------------------------------------------------------------
# Characters


@dataclass
class CharacterData:
    kind: str                      # "chi_w" | "n_infinity"
    word: tuple[int, ...] = ()
    twists: tuple[complex, ...] = ()


def character_eval(cd: CartanData, chd: CharacterData, x: AElem,
                   q0=Fraction(1, 2)) -> complex:
    """Evaluate a one-dimensional character on an element of the algebra.

    chi_w sends the extremal coefficient C_{-w Lambda, Lambda} to the
    twist monomial and every other highest-weight-column coefficient to
    zero; n_infinity kills every positive-level factor.
    """
    q0 = Fraction(q0)
    if chd.kind == "n_infinity":
        if cd.marks is None:
            raise ValueError("n_infinity requires an affine Cartan datum")
        return complex(n_infinity(cd, x).eval_fraction(q0))
    if chd.kind != "chi_w":
        raise ValueError(f"unknown character kind {chd.kind!r}")
    word = tuple(chd.word)
    twists = chd.twists or (1.0 + 0.0j,) * cd.rank
    total = 0.0 + 0.0j
    for s, fs in x.terms:
        val = complex(s.eval_fraction(q0))
        for f in fs:
            if f.starred:
                raise ValueError("chi_w is defined on the plus subalgebra")
            m = f.module
            if f.v.beta != (0,) * cd.rank:
                raise ValueError("chi_w is defined on highest-weight-column "
                                 "coefficients")
            vcoef = f.v.coords[0]
            hw = m.hw
            w_hw = weyl_act(cd, word, hw)
            beta = tuple(-b for b in (hw - w_hw).beta)
            if f.l.beta != beta:
                val = 0.0
                break
            ext = extremal_dual(m, beta)
            # proportionality scalar of f.l against the extremal dual
            ratio = None
            for a, b in zip(f.l.coords, ext.coords):
                if not b.is_zero():
                    ratio = a / b
                    break
            val *= complex((ratio * vcoef).eval_fraction(q0))
            for t in cd.nodes:
                val *= twists[t] ** hw.dom[t]
        total += val
    return total
