"""Structure-constant algebras and the algebra of 2-dimensional multiplications.

A finite-dimensional algebra is a ``StructureTensor``: an n x n x n array
``c`` with e_i e_j = sum_k c[i][j][k] e_k. ``build_kantor`` constructs the
algebra W(n) of all multiplications on an n-dimensional space V_n, with
product A * B = [L_A(e), B] for a fixed vector e in V_n, i.e.

    (A * B)(x, y) = A(e, B(x, y)) - B(A(e, x), y) - B(x, A(e, y)).

For n = 2 and e = v1 this is the 8-dimensional conservative algebra W(2);
``E_BASIS`` switches it from the natural multiplication basis to the basis
e_1..e_8 in which its derivations and automorphisms are usually written,
and ``W2_SPAN`` / ``S2_SPAN`` cut out the subalgebras W_2 (commutative
2-dimensional algebras) and S_2 (commutative, zero multiplication trace).

Indices are 0-based internally and 1-based in reports and file formats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as iterprod
from typing import Sequence

from .errors import ClosureError
from .linalg import QMatrix, QVector, as_fraction, invert


class StructureTensor:
    """Immutable n x n x n array of structure constants."""

    __slots__ = ("dim", "c")

    def __init__(self, c):
        grid = tuple(
            tuple(tuple(as_fraction(v) for v in row) for row in plane) for plane in c
        )
        n = len(grid)
        if any(len(plane) != n or any(len(row) != n for row in plane) for plane in grid):
            raise ValueError("structure constants must form an n x n x n array")
        object.__setattr__(self, "dim", n)
        object.__setattr__(self, "c", grid)

    def __setattr__(self, name, value):
        raise AttributeError("StructureTensor is immutable")

    def __eq__(self, other):
        return isinstance(other, StructureTensor) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    @classmethod
    def zero(cls, dim: int) -> "StructureTensor":
        return cls([[[0] * dim for _ in range(dim)] for _ in range(dim)])

    def basis_product(self, i: int, j: int) -> QVector:
        """Coordinates of e_i e_j (0-based indices)."""
        return QVector(self.c[i][j])

    def __repr__(self):
        nonzero = sum(
            1 for i in range(self.dim) for j in range(self.dim) for k in range(self.dim)
            if self.c[i][j][k] != 0
        )
        return f"StructureTensor(dim={self.dim}, nonzero={nonzero})"


@dataclass(frozen=True)
class BasisChange:
    """Invertible change of basis; columns of p are the new basis vectors."""

    dim: int
    p: QMatrix

    def __post_init__(self):
        if self.p.shape != (self.dim, self.dim):
            raise ValueError("basis-change matrix shape does not match dim")
        if invert(self.p) is None:
            raise ValueError("basis-change matrix is singular")


def product(alg: StructureTensor, x: QVector, y: QVector) -> QVector:
    """Bilinear product of two coordinate vectors."""
    n = alg.dim
    if x.dim != n or y.dim != n:
        raise ValueError(f"dimension mismatch: algebra dim {n}, vectors {x.dim}, {y.dim}")
    out = [Fraction(0)] * n
    for i, xi in enumerate(x):
        if xi == 0:
            continue
        for j, yj in enumerate(y):
            if yj == 0:
                continue
            coeff = xi * yj
            for k, ck in enumerate(alg.c[i][j]):
                if ck != 0:
                    out[k] += coeff * ck
    return QVector(out)


def alpha_basis_keys(n: int) -> list:
    """1-based (k, i, j) labels of the multiplication basis, k outermost."""
    return [(k, i, j) for k in range(1, n + 1) for i in range(1, n + 1) for j in range(1, n + 1)]


def _alpha_maps(n: int) -> list:
    """Each basis multiplication as an array m[t][l][k] = coeff of v_k in m(v_t, v_l)."""
    maps = []
    for k, i, j in alpha_basis_keys(n):
        m = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        m[i - 1][j - 1][k - 1] = Fraction(1)
        maps.append(m)
    return maps


def _apply_left(m, e: int, w, n: int):
    """m(v_e, w) for a coordinate vector w."""
    out = [Fraction(0)] * n
    for k, wk in enumerate(w):
        if wk == 0:
            continue
        for t, coeff in enumerate(m[e][k]):
            if coeff != 0:
                out[t] += wk * coeff
    return out


def _apply_map(m, u, w, n: int):
    """m(u, w) for coordinate vectors u, w."""
    out = [Fraction(0)] * n
    for s, us in enumerate(u):
        if us == 0:
            continue
        for k, wk in enumerate(w):
            if wk == 0:
                continue
            coeff = us * wk
            for t, c in enumerate(m[s][k]):
                if c != 0:
                    out[t] += coeff * c
    return out


def build_kantor(n: int, fixed: int = 1) -> StructureTensor:
    """The n^3-dimensional algebra W(n) of multiplications on V_n.

    ``fixed`` is the 1-based index of the distinguished vector e = v_fixed.
    Basis order is (k, i, j) lexicographic with k outermost, matching
    ``alpha_basis_keys``. Each product of basis multiplications is obtained
    by evaluating the defining trilinear formula on all argument pairs
    (v_t, v_l) and re-expanding the resulting bilinear map.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 1 <= fixed <= n:
        raise ValueError(f"fixed vector index {fixed} out of range 1..{n}")
    e = fixed - 1
    maps = _alpha_maps(n)
    dim = n ** 3
    keys = alpha_basis_keys(n)
    # position of alpha^k_{t,l} in the flat basis
    pos = {key: idx for idx, key in enumerate(keys)}

    c = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    zero_vec = [Fraction(0)] * n
    for a_idx, A in enumerate(maps):
        for b_idx, B in enumerate(maps):
            for t, l in iterprod(range(n), range(n)):
                w = B[t][l]
                term1 = _apply_left(A, e, w, n)
                u = A[e][t]
                term2 = _apply_map(B, u, [1 if i == l else 0 for i in range(n)], n) if any(u) else zero_vec
                z = A[e][l]
                term3 = _apply_map(B, [1 if i == t else 0 for i in range(n)], z, n) if any(z) else zero_vec
                for kappa in range(n):
                    val = term1[kappa] - term2[kappa] - term3[kappa]
                    if val != 0:
                        c[a_idx][b_idx][pos[(kappa + 1, t + 1, l + 1)]] = val
    return StructureTensor(c)


def change_basis(alg: StructureTensor, ch: BasisChange) -> StructureTensor:
    """Re-express the structure constants in the new basis."""
    n = alg.dim
    if ch.dim != n:
        raise ValueError(f"dimension mismatch: algebra dim {n}, basis change dim {ch.dim}")
    p = ch.p
    pinv = invert(p)
    if pinv is None:
        raise ValueError("basis-change matrix is singular")
    cols = [p.col(i) for i in range(n)]
    c = []
    for i in range(n):
        plane = []
        for j in range(n):
            w = product(alg, cols[i], cols[j])
            plane.append(list(pinv @ w))
        c.append(plane)
    return StructureTensor(c)


def subalgebra(alg: StructureTensor, span: Sequence[int]) -> StructureTensor:
    """Restrict to the span of the given 1-based basis indices.

    Verifies closure first; the first product leaving the span raises
    ClosureError naming the violating pair.
    """
    n = alg.dim
    idx = [s - 1 for s in span]
    if len(set(idx)) != len(idx):
        raise ValueError("span indices must be distinct")
    if any(not 0 <= s < n for s in idx):
        raise ValueError("span index out of range")
    inside = set(idx)
    for a in idx:
        for b in idx:
            for k in range(n):
                if alg.c[a][b][k] != 0 and k not in inside:
                    raise ClosureError(a + 1, b + 1)
    c = [[[alg.c[a][b][k] for k in idx] for b in idx] for a in idx]
    return StructureTensor(c)


def combo_str(vec: Sequence, names: Sequence[str]) -> str:
    """Render a coordinate vector as a signed combination like ``-e1+3e4``."""
    pieces = []
    for coeff, name in zip(vec, names):
        coeff = as_fraction(coeff)
        if coeff == 0:
            continue
        mag = abs(coeff)
        if mag == 1:
            body = name
        elif mag.denominator == 1:
            body = f"{mag}{name}"
        else:
            body = f"({mag}){name}"
        pieces.append(("-" if coeff < 0 else "+") + body)
    if not pieces:
        return "0"
    head = pieces[0].lstrip("+")
    return head + "".join(pieces[1:])


def render_table(alg: StructureTensor, names: Sequence[str] | None = None) -> str:
    """Human-readable multiplication table with the given basis labels."""
    n = alg.dim
    names = list(names) if names is not None else [f"e{i + 1}" for i in range(n)]
    if len(names) != n:
        raise ValueError(f"need {n} labels, got {len(names)}")
    cells = [[combo_str(alg.c[i][j], names) for j in range(n)] for i in range(n)]
    widths = [
        max(len(names[j]), max(len(cells[i][j]) for i in range(n))) for j in range(n)
    ]
    label_w = max(len(nm) for nm in names)
    lines = [
        " " * label_w
        + " | "
        + " | ".join(names[j].rjust(widths[j]) for j in range(n))
    ]
    lines.append("-" * len(lines[0]))
    for i in range(n):
        lines.append(
            names[i].rjust(label_w)
            + " | "
            + " | ".join(cells[i][j].rjust(widths[j]) for j in range(n))
        )
    return "\n".join(lines)


def diff_tables(a: StructureTensor, b: StructureTensor) -> list:
    """All cells where two tensors disagree, as (i, j, a_entry, b_entry).

    Indices are 1-based; entries are the coordinate QVectors of the two
    products. Empty list iff the tensors are equal.
    """
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    out = []
    for i in range(a.dim):
        for j in range(a.dim):
            if a.c[i][j] != b.c[i][j]:
                out.append((i + 1, j + 1, QVector(a.c[i][j]), QVector(b.c[i][j])))
    return out


# Columns express e_1..e_8 in the multiplication basis
# (a^1_11, a^1_12, a^1_21, a^1_22, a^2_11, a^2_12, a^2_21, a^2_22).
E_BASIS = BasisChange(
    8,
    QMatrix.from_columns(
        [
            [1, 0, 0, 0, 0, -1, -1, 0],   # e1
            [0, 0, 0, 0, 1, 0, 0, 0],     # e2
            [0, -1, -1, 0, 0, 0, 0, 1],   # e3
            [0, 0, 0, 1, 0, 0, 0, 0],     # e4
            [2, 0, 0, 0, 0, 1, 1, 0],     # e5
            [0, 1, 1, 0, 0, 0, 0, 2],     # e6
            [0, 1, -1, 0, 0, 0, 0, 0],    # e7
            [0, 0, 0, 0, 0, 1, -1, 0],    # e8
        ]
    ),
)

W2_SPAN = (1, 2, 3, 4, 5, 6)
S2_SPAN = (1, 2, 3, 4)

# The e-basis multiplication table of W(2) as published, transcribed cell
# by cell. Used only for regression diffing against the derived tensor,
# never as ground truth. Each cell lists (basis index, coefficient) pairs.
_PUBLISHED_CELLS = (
    # e1 row
    (((1, -1),), ((2, -3),), ((3, 1),), ((4, 3),), ((5, -1),), ((6, 1),), ((7, 1),), ((8, -1),)),
    # e2 row
    (((2, 3),), (), ((1, 2),), ((3, 1),), (), ((5, -1),), ((8, 1),), ()),
    # e3 row
    (((3, -2),), ((1, -1),), ((4, -3),), (), ((6, 1),), (), (), ((7, -1),)),
    # e4 row
    ((), (), (), (), (), (), (), ()),
    # e5 row
    (((1, -2),), ((2, -3),), ((3, -1),), (), ((5, -2),), ((6, -1),), ((7, -1),), ((8, -2),)),
    # e6 row
    (((3, 2),), ((1, 1),), ((4, 3),), (), ((6, -1),), (), (), ((7, 1),)),
    # e7 row (printed identical to the e6 row)
    (((3, 2),), ((1, 1),), ((4, 3),), (), ((6, -1),), (), (), ((7, 1),)),
    # e8 row
    ((), ((2, 1),), ((3, -1),), ((4, -2),), (), ((6, -1),), ((7, -1),), ()),
)


def _published_tensor() -> StructureTensor:
    c = [[[Fraction(0)] * 8 for _ in range(8)] for _ in range(8)]
    for i, row in enumerate(_PUBLISHED_CELLS):
        for j, cell in enumerate(row):
            for k, coeff in cell:
                c[i][j][k - 1] = Fraction(coeff)
    return StructureTensor(c)


PUBLISHED_TABLE = _published_tensor()


@lru_cache(maxsize=None)
def w2() -> StructureTensor:
    """W(2) in the e-basis, derived from the defining product formula."""
    return change_basis(build_kantor(2, 1), E_BASIS)
