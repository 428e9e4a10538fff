"""Derivation spaces, local-derivation outer bounds, and 2-local recovery.

A derivation of an algebra is a linear map D with D(xy) = D(x)y + xD(y).
``derivation_space`` solves that condition exactly as a linear system. For
local derivations (maps agreeing with some derivation at every single
point) two outer approximations are built: a sampling bound, which imposes
membership of Bx in span{D_1 x, ..., D_k x} for a finite deterministic set
of probe vectors, and a minor bound, which forces all (k+1) x (k+1) minors
of the symbolic matrix [Bx | D_1 x | ... | D_k x] to vanish identically.
``certify_locder`` squeezes: derivations <= local derivations <= outer
bound, so span equality of the two ends settles the question.

2-local maps are pinned down by their value at the second basis vector;
``twolocal_der_check`` recovers the unique candidate derivation from that
value and replays every sample against it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .algebra import StructureTensor, product
from .errors import CounterexampleError, MinorsInapplicableError, ProtocolError
from .linalg import QMatrix, QVector, nullspace_of_rows, rank_of_rows
from .poly import MultiPoly


@dataclass(frozen=True)
class LinearMapSpace:
    """A subspace of n x n linear maps, given by an independent basis."""

    dim: int
    basis: tuple

    def __post_init__(self):
        basis = tuple(self.basis)
        object.__setattr__(self, "basis", basis)
        for m in basis:
            if m.shape != (self.dim, self.dim):
                raise ValueError(f"basis matrix of shape {m.shape} in space of dim {self.dim}")
        if basis and rank_of_rows([m.flatten() for m in basis], self.dim ** 2) != len(basis):
            raise ValueError("basis matrices are linearly dependent")

    @property
    def size(self) -> int:
        return len(self.basis)

    def stacked(self) -> list:
        return [m.flatten() for m in self.basis]

    def contains(self, m: QMatrix) -> bool:
        rows = self.stacked()
        base = rank_of_rows(rows, self.dim ** 2)
        return rank_of_rows(rows + [m.flatten()], self.dim ** 2) == base

    def contains_space(self, other: "LinearMapSpace") -> bool:
        rows = self.stacked()
        base = rank_of_rows(rows, self.dim ** 2)
        return rank_of_rows(rows + other.stacked(), self.dim ** 2) == base

    def span_equals(self, other: "LinearMapSpace") -> bool:
        return self.size == other.size and self.contains_space(other)


@dataclass(frozen=True)
class DerivationParams:
    """The two coordinates of the derivation family of W(2)."""

    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))


@dataclass(frozen=True)
class LocDerVerdict:
    """Outcome of the squeeze between derivations and an outer bound.

    EQUAL certifies that every local derivation is a derivation.
    INCONCLUSIVE only means the outer bound is strictly larger; the
    witness lies in the outer space but is not a derivation.
    """

    tag: str  # "EQUAL" | "INCONCLUSIVE"
    outer: LinearMapSpace
    witness: QMatrix | None = None


# Nonzero positions (1-based) of the two-parameter derivation family.
DER_PATTERN = (
    (1, 2), (2, 2), (3, 1), (3, 3), (4, 3), (4, 4), (6, 5), (6, 6), (7, 7), (7, 8),
)


def derivation_from_params(p: DerivationParams) -> QMatrix:
    """The 8 x 8 derivation of W(2) with the given family parameters."""
    a, b = p.alpha, p.beta
    rows = [[Fraction(0)] * 8 for _ in range(8)]
    rows[0][1] = a
    rows[1][1] = -b
    rows[2][0] = 2 * a
    rows[2][2] = b
    rows[3][2] = 3 * a
    rows[3][3] = 2 * b
    rows[5][4] = -a
    rows[5][5] = b
    rows[6][6] = b
    rows[6][7] = a
    return QMatrix(rows)


def _leibniz_rows(alg: StructureTensor) -> list:
    """Coefficient rows of the Leibniz system over the flattened unknown map."""
    n = alg.dim
    c = alg.c
    rows = []
    for i in range(n):
        for j in range(n):
            cij = c[i][j]
            for m in range(n):
                row = [Fraction(0)] * (n * n)
                for k in range(n):
                    if cij[k] != 0:
                        row[m * n + k] += cij[k]
                for r in range(n):
                    if c[r][j][m] != 0:
                        row[r * n + i] -= c[r][j][m]
                    if c[i][r][m] != 0:
                        row[r * n + j] -= c[i][r][m]
                rows.append(row)
    return rows


def derivation_space(alg: StructureTensor) -> LinearMapSpace:
    """Canonical basis of all derivations, via the exact Leibniz system."""
    n = alg.dim
    kernel = nullspace_of_rows(_leibniz_rows(alg), n * n)
    return LinearMapSpace(n, tuple(QMatrix.from_flat(v, n, n) for v in kernel))


def leibniz_residual(alg: StructureTensor, d: QMatrix) -> list:
    """1-based basis pairs (i, j) where D(e_i e_j) != D(e_i)e_j + e_i D(e_j)."""
    n = alg.dim
    if d.shape != (n, n):
        raise ValueError(f"map shape {d.shape} does not match algebra dim {n}")
    cols = [d.col(j) for j in range(n)]
    units = [QVector.unit(n, i) for i in range(n)]
    bad = []
    for i in range(n):
        for j in range(n):
            lhs = d @ alg.basis_product(i, j)
            rhs = product(alg, cols[i], units[j]) + product(alg, units[i], cols[j])
            if lhs != rhs:
                bad.append((i + 1, j + 1))
    return bad


def default_test_vectors(n: int) -> list:
    """Probe set: all basis vectors plus all pairwise sums e_i + e_j, i < j."""
    vecs = [QVector.unit(n, i) for i in range(n)]
    vecs += [QVector.unit(n, i) + QVector.unit(n, j) for i in range(n) for j in range(i + 1, n)]
    return vecs


def locder_sampling_constraints(
    alg: StructureTensor, der: LinearMapSpace, extra: Iterable[QVector] = ()
) -> LinearMapSpace:
    """Outer bound on local derivations from finitely many probe vectors.

    For each probe x the condition Bx in span{D_t x} is imposed by
    eliminating the known columns D_t x and reading the leftover linear
    conditions on Bx. The probes are deterministic; ``extra`` appends more.
    """
    n = alg.dim
    k = der.size
    rows = []
    for x in list(default_test_vectors(n)) + list(extra):
        if k:
            span_cols = [d @ x for d in der.basis]
            # left kernel of the n x k sample matrix
            conds = nullspace_of_rows(
                [[col[r] for col in span_cols] for r in range(n)][:], k
            )
            # nullspace_of_rows works on rows; transpose the sample matrix
            conds = nullspace_of_rows(
                [[span_cols[t][r] for r in range(n)] for t in range(k)], n
            )
        else:
            conds = [tuple(QVector.unit(n, r)) for r in range(n)]
        for u in conds:
            row = [Fraction(0)] * (n * n)
            for r, ur in enumerate(u):
                if ur == 0:
                    continue
                for cidx, xc in enumerate(x):
                    if xc != 0:
                        row[r * n + cidx] += ur * xc
            rows.append(row)
    kernel = nullspace_of_rows(rows, n * n)
    return LinearMapSpace(n, tuple(QMatrix.from_flat(v, n, n) for v in kernel))


def _poly_det(entries: list) -> MultiPoly:
    """Determinant of a square matrix of polynomials, Laplace on column 0."""
    size = len(entries)
    if size == 0:
        raise ValueError("empty determinant")
    if size == 1:
        return entries[0][0]
    nvars = entries[0][0].nvars
    total = MultiPoly.zero(nvars)
    for p in range(size):
        lead = entries[p][0]
        if lead.is_zero():
            continue
        minor = [row[1:] for q, row in enumerate(entries) if q != p]
        term = lead * _poly_det(minor)
        total = total - term if p % 2 else total + term
    return total


def locder_minor_constraints(alg: StructureTensor, der: LinearMapSpace) -> LinearMapSpace:
    """Outer bound on local derivations via identically vanishing minors.

    With k = dim Der < n, stack M(x) = [Bx | D_1 x | ... | D_k x] with
    symbolic x. Every (k+1) x (k+1) minor is linear in the unknown entries
    of B (only one column carries B), so requiring all minors to vanish for
    every x is a linear system: one equation per minor and monomial.
    """
    n = alg.dim
    k = der.size
    if k >= n:
        raise MinorsInapplicableError(
            f"minor method needs dim Der < n, got dim Der = {k} with n = {n}"
        )
    # (D_t x)_r as linear polynomials in x_1..x_n
    dcols = [
        [
            MultiPoly(n, {tuple(1 if c == cc else 0 for cc in range(n)): d[r][c] for c in range(n)})
            for r in range(n)
        ]
        for d in der.basis
    ]
    rows = []
    for subset in combinations(range(n), k + 1):
        equations: dict = {}
        for p, r in enumerate(subset):
            if k:
                sub = [[dcols[t][rr] for t in range(k)] for rr in subset if rr != r]
                cof = _poly_det(sub)
            else:
                cof = MultiPoly.constant(n, 1)
            if cof.is_zero():
                continue
            sign = -1 if p % 2 else 1
            for cidx in range(n):
                shifted = cof.shift(cidx)
                for mono, coeff in shifted.terms.items():
                    row = equations.get(mono)
                    if row is None:
                        row = equations[mono] = [Fraction(0)] * (n * n)
                    row[r * n + cidx] += sign * coeff
        rows.extend(equations.values())
    kernel = nullspace_of_rows(rows, n * n)
    return LinearMapSpace(n, tuple(QMatrix.from_flat(v, n, n) for v in kernel))


def certify_locder(der: LinearMapSpace, outer: LinearMapSpace) -> LocDerVerdict:
    """EQUAL iff the outer bound has the same span as the derivation space."""
    if der.dim != outer.dim:
        raise ValueError(f"ambient dimension mismatch: {der.dim} vs {outer.dim}")
    if outer.span_equals(der):
        return LocDerVerdict("EQUAL", outer)
    witness = next((m for m in outer.basis if not der.contains(m)), None)
    return LocDerVerdict("INCONCLUSIVE", outer, witness)


def intersect_spaces(a: LinearMapSpace, b: LinearMapSpace) -> LinearMapSpace:
    """Intersection of two map spaces, canonicalized."""
    if a.dim != b.dim:
        raise ValueError(f"ambient dimension mismatch: {a.dim} vs {b.dim}")
    n2 = a.dim ** 2
    if not a.basis or not b.basis:
        return LinearMapSpace(a.dim, ())
    arows = a.stacked()
    brows = b.stacked()
    # kernel of [A^T | -B^T]: coefficient pairs whose two combinations agree
    combo_rows = [
        [arows[i][c] for i in range(len(arows))] + [-brows[j][c] for j in range(len(brows))]
        for c in range(n2)
    ]
    members = []
    for coeffs in nullspace_of_rows(combo_rows, len(arows) + len(brows)):
        vec = [Fraction(0)] * n2
        for i, ci in enumerate(coeffs[: len(arows)]):
            if ci:
                for c in range(n2):
                    vec[c] += ci * arows[i][c]
        members.append(vec)
    kernel = nullspace_of_rows(members, n2)
    # canonicalize through the row space rather than the kernel
    from .linalg import _rref_rows, _prepare_rows  # local import to reuse workers

    reduced, pivots = _rref_rows(_prepare_rows(members), n2)
    basis = tuple(QMatrix.from_flat(reduced[r], a.dim, a.dim) for r in range(len(pivots)))
    return LinearMapSpace(a.dim, basis)


def locder_certify(alg: StructureTensor, method: str = "both") -> tuple:
    """Run the chosen outer bound(s) and squeeze against the derivations.

    Returns (LocDerVerdict, info dict). With method "both" the verdict is
    taken on the intersection of the two bounds; if the minor method is
    inapplicable the sampling bound alone is used and noted in the info.
    """
    if method not in ("sampling", "minors", "both"):
        raise ValueError(f"unknown method {method!r}")
    der = derivation_space(alg)
    info: dict = {"dim_der": der.size}
    outer = None
    if method in ("sampling", "both"):
        sampled = locder_sampling_constraints(alg, der)
        info["dim_sampling"] = sampled.size
        outer = sampled
    if method in ("minors", "both"):
        try:
            minored = locder_minor_constraints(alg, der)
        except MinorsInapplicableError as exc:
            if method == "minors":
                raise
            info["minors"] = f"inapplicable: {exc}"
        else:
            info["dim_minors"] = minored.size
            outer = minored if outer is None else intersect_spaces(outer, minored)
    verdict = certify_locder(der, outer)
    info["dim_outer"] = verdict.outer.size
    return verdict, info


def twolocal_der_recover(image_of_e2: QVector) -> DerivationParams:
    """Parameters of the unique derivation sending e_2 to the given vector.

    Every derivation of W(2) maps e_2 to (alpha, -beta, 0, ..., 0); any
    nonzero trailing coordinate means the vector is unreachable.
    """
    v = image_of_e2
    if v.dim != 8:
        raise ValueError(f"expected a vector of dim 8, got {v.dim}")
    for pos in range(2, 8):
        if v[pos] != 0:
            raise ValueError(
                f"coordinate {pos + 1} of the image of e2 is {v[pos]}, "
                "but no derivation reaches it"
            )
    return DerivationParams(v[0], -v[1])


def _find_e2_sample(samples: Sequence, dim: int = 8):
    e2 = QVector.unit(dim, 1)
    for x, dx in samples:
        if x == e2:
            return dx
    raise ProtocolError("samples must include x = e2")


def twolocal_der_check(samples: Sequence) -> DerivationParams:
    """Recover (alpha, beta) from the e_2 sample and replay all samples.

    Raises ProtocolError when the e_2 sample is missing and
    CounterexampleError on the first sample that disagrees with the
    recovered derivation.
    """
    params = twolocal_der_recover(_find_e2_sample(samples))
    d = derivation_from_params(params)
    for x, dx in samples:
        expected = d @ x
        if expected != dx:
            raise CounterexampleError(x, expected, dx)
    return params
