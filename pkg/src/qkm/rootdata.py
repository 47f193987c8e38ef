"""Cartan data, weights, the bilinear form and Weyl group combinatorics.

Weights are stored relative to the fundamental weights and simple roots:

    wt  =  sum_i dom[i] * omega_i  -  sum_i beta[i] * alpha_i  +  delta_shift * delta

where delta = sum_i marks[i] * alpha_i is the primitive null root in the
affine case.  The bilinear form needs an extension table gram[i][j] =
(omega_i, omega_j); in the degenerate (affine) case that table is not
unique and a fixed particular solution is chosen, with the value at the
distinguished node pinned.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import linalg


class CartanError(ValueError):
    pass


@dataclass(frozen=True)
class CartanData:
    a: tuple[tuple[int, ...], ...]          # generalized Cartan matrix
    d: tuple[int, ...]                      # coprime positive symmetrizers
    marks: tuple[int, ...] | None           # kernel marks (affine) or None
    gram: tuple[tuple[Fraction, ...], ...]  # (omega_i, omega_j) extension table
    affine: bool

    @property
    def rank(self) -> int:
        return len(self.d)

    @property
    def nodes(self) -> range:
        return range(len(self.d))


def _symmetrizers(a: list[list[int]]) -> list[int]:
    n = len(a)
    d: list[Fraction | None] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i != j and a[i][j] != 0:
                    val = d[i] * Fraction(a[i][j], a[j][i])
                    if d[j] is None:
                        d[j] = val
                        stack.append(j)
                    elif d[j] != val:
                        raise CartanError("Cartan matrix is not symmetrizable")
    for i in range(n):
        for j in range(n):
            if d[i] * a[i][j] != d[j] * a[j][i]:
                raise CartanError("Cartan matrix is not symmetrizable")
    mult = 1
    for x in d:
        mult = mult * x.denominator // gcd(mult, x.denominator)
    ints = [int(x * mult) for x in d]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints]


def _marks(a: list[list[int]]) -> list[int] | None:
    n = len(a)
    rows = [[Fraction(a[i][j]) for j in range(n)] for i in range(n)]
    ker = linalg.frac_nullspace(rows)
    if not ker:
        return None
    if len(ker) > 1:
        raise CartanError("Cartan matrix has corank > 1; not supported")
    v = ker[0]
    mult = 1
    for x in v:
        mult = mult * x.denominator // gcd(mult, x.denominator)
    ints = [int(x * mult) for x in v]
    if all(x < 0 for x in ints):
        ints = [-x for x in ints]
    if not all(x > 0 for x in ints):
        raise CartanError("kernel vector of affine Cartan matrix must be positive")
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints]


def _solve_gram(a: list[list[int]], d: list[int], marks: list[int] | None,
                pin_value: Fraction) -> list[list[Fraction]]:
    """A particular (omega_i, omega_j) table consistent with the form.

    Unknowns are the entries G_ij (i <= j) plus, in the affine case, the
    delta-coefficients c_j of alpha_j = sum_i a_ij omega_i + c_j delta.
    Equations: sum_i a[i][j] G[i][k] + c_j marks[k] d[k] = delta_jk d[j],
    together with G[0][0] = pin_value at the distinguished node.
    """
    n = len(d)
    idx = {}
    for i in range(n):
        for j in range(i, n):
            idx[(i, j)] = len(idx)
    ng = len(idx)
    affine = marks is not None
    nvars = ng + (n if affine else 0)

    def gvar(i: int, j: int) -> int:
        return idx[(i, j)] if i <= j else idx[(j, i)]

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for j in range(n):
        for k in range(n):
            row = [Fraction(0)] * nvars
            for i in range(n):
                if a[i][j]:
                    row[gvar(i, k)] += Fraction(a[i][j])
            if affine:
                row[ng + j] += Fraction(marks[k] * d[k])
            rows.append(row)
            rhs.append(Fraction(d[j] if j == k else 0))
    if affine:
        row = [Fraction(0)] * nvars
        row[gvar(0, 0)] = Fraction(1)
        rows.append(row)
        rhs.append(pin_value)
    sol = linalg.frac_solve(rows, rhs)
    if sol is None:
        raise CartanError("no consistent extension of the bilinear form exists")
    return [[sol[gvar(i, j)] for j in range(n)] for i in range(n)]


def validate_cartan(a, pin_value: Fraction | int = 0) -> CartanData:
    """Validate a generalized Cartan matrix and assemble its Cartan datum."""
    a = [list(map(int, row)) for row in a]
    n = len(a)
    if n == 0 or any(len(row) != n for row in a):
        raise CartanError("Cartan matrix must be square and nonempty")
    for i in range(n):
        if a[i][i] != 2:
            raise CartanError("diagonal entries must equal 2")
        for j in range(n):
            if i != j:
                if a[i][j] > 0:
                    raise CartanError("off-diagonal entries must be <= 0")
                if (a[i][j] == 0) != (a[j][i] == 0):
                    raise CartanError("zero pattern must be symmetric")
    d = _symmetrizers(a)
    marks = _marks(a)
    gram = _solve_gram(a, d, marks, Fraction(pin_value))
    return CartanData(
        a=tuple(tuple(row) for row in a),
        d=tuple(d),
        marks=tuple(marks) if marks is not None else None,
        gram=tuple(tuple(row) for row in gram),
        affine=marks is not None,
    )


def cartan_with_symmetrizers(a, d) -> CartanData:
    """Cartan datum with caller-supplied symmetrizers (not forced coprime).

    Used internally for rank-one subalgebras, where the q-integers must be
    taken in q^{d_i} of the ambient algebra.
    """
    a = [list(map(int, row)) for row in a]
    d = list(map(int, d))
    for i in range(len(a)):
        for j in range(len(a)):
            if d[i] * a[i][j] != d[j] * a[j][i]:
                raise CartanError("supplied symmetrizers do not symmetrize the matrix")
    marks = _marks(a)
    gram = _solve_gram(a, d, marks, Fraction(0))
    return CartanData(tuple(tuple(r) for r in a), tuple(d),
                      tuple(marks) if marks is not None else None,
                      tuple(tuple(r) for r in gram), marks is not None)


# ---------------------------------------------------------------------------
# Weights


@dataclass(frozen=True)
class Weight:
    dom: tuple[int, ...]
    beta: tuple[int, ...] = ()
    delta_shift: Fraction = field(default_factory=lambda: Fraction(0))

    def __post_init__(self):
        if not self.beta:
            object.__setattr__(self, "beta", (0,) * len(self.dom))
        object.__setattr__(self, "dom", tuple(int(x) for x in self.dom))
        object.__setattr__(self, "beta", tuple(int(x) for x in self.beta))
        object.__setattr__(self, "delta_shift", Fraction(self.delta_shift))

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(x + y for x, y in zip(self.dom, other.dom)),
                      tuple(x + y for x, y in zip(self.beta, other.beta)),
                      self.delta_shift + other.delta_shift)

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(tuple(x - y for x, y in zip(self.dom, other.dom)),
                      tuple(x - y for x, y in zip(self.beta, other.beta)),
                      self.delta_shift - other.delta_shift)

    def __neg__(self) -> "Weight":
        return Weight(tuple(-x for x in self.dom), tuple(-x for x in self.beta),
                      -self.delta_shift)

    def is_zero(self) -> bool:
        return (not any(self.dom) and not any(self.beta)
                and self.delta_shift == 0)


def fundamental(cd: CartanData, i: int) -> Weight:
    dom = [0] * cd.rank
    dom[i] = 1
    return Weight(tuple(dom))


def simple_root(cd: CartanData, i: int) -> Weight:
    beta = [0] * cd.rank
    beta[i] = -1
    return Weight((0,) * cd.rank, tuple(beta))


def weight_from_dom(cd: CartanData, coeffs) -> Weight:
    return Weight(tuple(int(c) for c in coeffs))


def rho(cd: CartanData) -> Weight:
    return Weight((1,) * cd.rank)


def bilinear(cd: CartanData, x: Weight, y: Weight) -> Fraction:
    """The symmetric bilinear form, using the chosen extension table."""
    n = cd.rank
    total = Fraction(0)
    # omega-omega block
    for i in range(n):
        if x.dom[i]:
            for j in range(n):
                if y.dom[j]:
                    total += x.dom[i] * y.dom[j] * cd.gram[i][j]
    # omega-alpha cross terms: (omega_i, alpha_j) = delta_ij d_j
    for i in range(n):
        total -= Fraction(x.dom[i] * y.beta[i] * cd.d[i])
        total -= Fraction(y.dom[i] * x.beta[i] * cd.d[i])
    # alpha-alpha block: (alpha_i, alpha_j) = d_i a_ij
    for i in range(n):
        if x.beta[i]:
            for j in range(n):
                if y.beta[j]:
                    total += Fraction(x.beta[i] * y.beta[j] * cd.d[i] * cd.a[i][j])
    # delta terms: (delta, alpha_j) = 0, (delta, delta) = 0,
    # (delta, omega_j) = marks[j] d[j]
    if cd.marks is not None:
        if x.delta_shift:
            for j in range(n):
                if y.dom[j]:
                    total += x.delta_shift * cd.marks[j] * cd.d[j] * y.dom[j]
        if y.delta_shift:
            for j in range(n):
                if x.dom[j]:
                    total += y.delta_shift * cd.marks[j] * cd.d[j] * x.dom[j]
    return total


def pair_coroot(cd: CartanData, x: Weight, i: int) -> int:
    """(x, alpha_i^vee), an integer for integral weights."""
    val = x.dom[i] - sum(x.beta[j] * cd.a[i][j] for j in range(cd.rank))
    if cd.marks is not None and x.delta_shift:
        pass  # (delta, alpha_i) = 0
    return val


def reflect(cd: CartanData, x: Weight, i: int) -> Weight:
    c = pair_coroot(cd, x, i)
    if c == 0:
        return x
    beta = list(x.beta)
    beta[i] += c
    return Weight(x.dom, tuple(beta), x.delta_shift)


def weyl_act(cd: CartanData, word, x: Weight) -> Weight:
    """Apply w = s_{word[0]} ... s_{word[-1]} to x (rightmost letter first)."""
    for i in reversed(list(word)):
        x = reflect(cd, x, i)
    return x


def is_dominant(cd: CartanData, x: Weight) -> bool:
    return all(pair_coroot(cd, x, i) >= 0 for i in cd.nodes)


# ---------------------------------------------------------------------------
# Reduced words


def _root_coeffs(x: Weight) -> tuple[int, ...]:
    if any(x.dom):
        raise ValueError("not a root-lattice element")
    return tuple(-b for b in x.beta)


def _is_positive_root(cd: CartanData, x: Weight) -> bool:
    c = _root_coeffs(x)
    if all(v >= 0 for v in c) and any(c):
        return True
    if all(v <= 0 for v in c) and any(c):
        return False
    raise ValueError("mixed-sign coefficients: not a real root image")


def _left_mult(cd: CartanData, i: int, word: list[int]) -> list[int]:
    """Reduced word for s_i * w given a reduced word for w."""
    # u^{-1}(alpha_i) positive  <=>  length goes up
    y = weyl_act(cd, list(reversed(word)), simple_root(cd, i))
    if _is_positive_root(cd, y):
        return [i] + word
    # exchange: find t with s_{j1}..s_{j_{t-1}}(alpha_{j_t}) = alpha_i
    for t in range(len(word)):
        img = weyl_act(cd, word[:t], simple_root(cd, word[t]))
        if img == simple_root(cd, i):
            return word[:t] + word[t + 1:]
    raise RuntimeError("exchange condition failed; input word inconsistent")


def reduce_word(cd: CartanData, word) -> tuple[int, ...]:
    """A reduced word for the element s_{word[0]} ... s_{word[-1]}."""
    word = list(word)
    for i in word:
        if not (0 <= i < cd.rank):
            raise ValueError(f"letter {i} out of range")
    out: list[int] = []
    for i in reversed(word):
        out = _left_mult(cd, i, out)
    return tuple(out)


def weyl_length(cd: CartanData, word) -> int:
    return len(reduce_word(cd, word))


def is_reduced(cd: CartanData, word) -> bool:
    return len(reduce_word(cd, word)) == len(list(word))


# ---------------------------------------------------------------------------
# JSON encoding


def frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def cartan_to_json(cd: CartanData) -> dict:
    return {
        "a": [list(row) for row in cd.a],
        "d": list(cd.d),
        "marks": list(cd.marks) if cd.marks is not None else None,
        "ext_gram": [[frac_str(x) for x in row] for row in cd.gram],
        "affine": cd.affine,
    }


def cartan_from_json(obj: dict) -> CartanData:
    return CartanData(
        a=tuple(tuple(int(x) for x in row) for row in obj["a"]),
        d=tuple(int(x) for x in obj["d"]),
        marks=tuple(int(x) for x in obj["marks"]) if obj.get("marks") is not None else None,
        gram=tuple(tuple(Fraction(x) for x in row) for row in obj["ext_gram"]),
        affine=bool(obj["affine"]),
    )


def weight_to_json(x: Weight) -> dict:
    return {"dom": list(x.dom), "beta": list(x.beta),
            "delta": frac_str(x.delta_shift)}


def weight_from_json(obj: dict) -> Weight:
    return Weight(tuple(obj["dom"]), tuple(obj.get("beta") or ()),
                  Fraction(obj.get("delta", "0")))
