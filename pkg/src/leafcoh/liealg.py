"""Chevalley-Eilenberg cohomology of finite-dimensional Lie algebras and the
flatness residual for Lie-algebra-valued leafwise 1-forms.

Cohomology dimensions must come out as integers, so every rank is computed
by exact Gaussian elimination over the rationals.  Valued forms are plain
basis-indexed families of scalar leafwise forms; the flatness residual
d omega + [omega ^ omega] is the checkable half of the nonabelian rigidity
criterion (the gauge-fixing problem itself is out of computational reach).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionError, UnsupportedDegreeError
from .fourier import TrigPoly
from .leafwise import LeafwiseForm, leafwise_d
from .toral import CohomologyReport


# ----------------------------------------------------------------------
# exact rational linear algebra


def rank_and_kernel(matrix: list[list[Fraction]]):
    """Exact rank and a kernel basis of a rational matrix (rows x cols)."""
    if not matrix:
        return 0, []
    rows = [list(r) for r in matrix]
    ncols = len(rows[0])
    pivots = {}
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots[c] = r
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    kernel = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for c, pr in pivots.items():
            vec[c] = -rows[pr][fc]
        kernel.append(vec)
    return r, kernel


def invert_matrix(matrix: list[list[Fraction]]):
    n = len(matrix)
    aug = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)] for i, row in enumerate(matrix)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if pivot is None:
            raise DimensionError("matrix is singular")
        aug[c], aug[pivot] = aug[pivot], aug[c]
        pv = aug[c][c]
        aug[c] = [v / pv for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


# ----------------------------------------------------------------------
# Lie algebra specification


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violation: str | None = None
    triple: tuple | None = None

    def to_json(self) -> dict:
        out = {"ok": self.ok}
        if not self.ok:
            out["violation"] = self.violation
            out["triple"] = list(self.triple) if self.triple else None
        return out


class LieAlgebraSpec:
    """Structure constants c[i][j][k] with [e_i, e_j] = sum_k c_ijk e_k."""

    def __init__(self, dim: int, constants: dict, labels=None, check: bool = True):
        if dim < 1:
            raise DimensionError("dimension must be >= 1")
        self.dim = dim
        table = {}
        for (i, j, k), v in constants.items():
            if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                raise DimensionError(f"structure index {(i, j, k)} out of range")
            v = Fraction(v)
            if v != 0:
                table[(i, j, k)] = v
        self.constants = table
        self.labels = list(labels) if labels else [f"e{i}" for i in range(dim)]
        if check:
            report = self.validate()
            if not report.ok:
                raise ValueError(f"invalid structure constants: {report.violation} at {report.triple}")

    def c(self, i: int, j: int, k: int) -> Fraction:
        if (i, j, k) in self.constants:
            return self.constants[(i, j, k)]
        if (j, i, k) in self.constants:
            return -self.constants[(j, i, k)]
        return Fraction(0)

    def bracket(self, i: int, j: int) -> list[Fraction]:
        return [self.c(i, j, k) for k in range(self.dim)]

    def validate(self) -> ValidationReport:
        """Exact antisymmetry and Jacobi checks; reports the first violation."""
        for i in range(self.dim):
            for k in range(self.dim):
                if self.c(i, i, k) != 0:
                    return ValidationReport(False, "antisymmetry", (i, i, k))
        for (i, j, k) in self.constants:
            if (j, i, k) in self.constants and self.constants[(i, j, k)] != -self.constants[(j, i, k)]:
                return ValidationReport(False, "antisymmetry", (i, j))
        for i, j, l in itertools.combinations(range(self.dim), 3):
            for n in range(self.dim):
                total = Fraction(0)
                for m in range(self.dim):
                    total += self.c(i, j, m) * self.c(m, l, n)
                    total += self.c(j, l, m) * self.c(m, i, n)
                    total += self.c(l, i, m) * self.c(m, j, n)
                if total != 0:
                    return ValidationReport(False, "jacobi", (i, j, l))
        return ValidationReport(True)

    def change_basis(self, P: list[list]) -> "LieAlgebraSpec":
        """Structure constants in the basis e'_j = sum_a P[a][j] e_a."""
        n = self.dim
        Pf = [[Fraction(v) for v in row] for row in P]
        Pinv = invert_matrix(Pf)
        table = {}
        for i in range(n):
            for j in range(i + 1, n):
                # [e'_i, e'_j] in the old basis
                old = [Fraction(0)] * n
                for a in range(n):
                    if Pf[a][i] == 0:
                        continue
                    for b in range(n):
                        if Pf[b][j] == 0:
                            continue
                        coeff = Pf[a][i] * Pf[b][j]
                        for m in range(n):
                            cv = self.c(a, b, m)
                            if cv != 0:
                                old[m] += coeff * cv
                for k in range(n):
                    v = sum(Pinv[k][m] * old[m] for m in range(n))
                    if v != 0:
                        table[(i, j, k)] = v
        return LieAlgebraSpec(n, table)

    def to_json(self) -> dict:
        rows = [
            {"i": i, "j": j, "k": k, "val": str(v)}
            for (i, j, k), v in sorted(self.constants.items())
        ]
        return {"dim": self.dim, "c": rows}

    @classmethod
    def from_json(cls, obj: dict) -> "LieAlgebraSpec":
        constants = {
            (row["i"], row["j"], row["k"]): Fraction(row["val"]) for row in obj["c"]
        }
        return cls(int(obj["dim"]), constants)

    def __repr__(self):
        return f"LieAlgebraSpec(dim={self.dim}, nc={len(self.constants)})"


def abelian(p: int) -> LieAlgebraSpec:
    """R^p: all brackets vanish."""
    return LieAlgebraSpec(p, {})


def affine_line() -> LieAlgebraSpec:
    """The 2-dimensional algebra [Y, S] = S of affine maps of the line."""
    return LieAlgebraSpec(2, {(0, 1, 1): 1}, labels=["Y", "S"])


def sl2() -> LieAlgebraSpec:
    """sl(2, R) in the basis (Y, S, U): [Y,S] = S, [Y,U] = -U, [S,U] = 2Y."""
    return LieAlgebraSpec(
        3,
        {(0, 1, 1): 1, (0, 2, 2): -1, (1, 2, 0): 2},
        labels=["Y", "S", "U"],
    )


# ----------------------------------------------------------------------
# Chevalley-Eilenberg cohomology


def _ce_matrix(spec: LieAlgebraSpec, k: int):
    """Matrix of d: Lambda^k g* -> Lambda^{k+1} g* over the tuple bases."""
    n = spec.dim
    cols = list(itertools.combinations(range(n), k))
    rows = list(itertools.combinations(range(n), k + 1))
    col_index = {T: c for c, T in enumerate(cols)}
    M = [[Fraction(0)] * len(cols) for _ in rows]
    for ri, S in enumerate(rows):
        for a in range(len(S)):
            for b in range(a + 1, len(S)):
                rest = tuple(v for t, v in enumerate(S) if t not in (a, b))
                sign_ab = -1 if (a + b) % 2 else 1  # (-1)^{a+b} with a < b
                for m in range(n):
                    cv = spec.c(S[a], S[b], m)
                    if cv == 0 or m in rest:
                        continue
                    # omega_T(e_m, e_rest): T = sorted({m} + rest), sign by insertion
                    T = tuple(sorted((m,) + rest))
                    pos = sum(1 for v in rest if v < m)
                    sign_ins = -1 if pos % 2 else 1
                    # d omega (X_S) = sum (-1)^{a+b} omega([X_a, X_b], rest)
                    M[ri][col_index[T]] += sign_ab * sign_ins * cv
    return M, cols, rows


@dataclass(frozen=True)
class CECohomology:
    report: CohomologyReport
    h1_basis: list  # rational covectors spanning the degree-1 cohomology

    def to_json(self) -> dict:
        out = self.report.to_json()
        out["h1_basis"] = [[str(v) for v in vec] for vec in self.h1_basis]
        return out


def ce_cohomology(spec: LieAlgebraSpec, max_dim: int = 8) -> CECohomology:
    """Exact cohomology dimensions of the structure-constant complex.

    In degree 1 the differential is (d xi)(X, Y) = -xi([X, Y]), extended to
    higher degrees as a derivation; ranks are exact over Q, so
    dims[k] = dim ker(d_k) - rank(d_{k-1}) is an integer identity.  The
    degree-1 kernel doubles as a cohomology basis since d vanishes on
    constants.
    """
    from math import comb

    n = spec.dim
    if n > max_dim:
        raise UnsupportedDegreeError(f"dimension {n} above the exact window {max_dim}")
    ranks = [0] * (n + 1)
    h1_basis: list = []
    for k in range(n + 1):
        M, cols, rows = _ce_matrix(spec, k)
        if rows and cols:
            r, ker = rank_and_kernel(M)
        else:
            # zero map: everything is a cocycle
            r = 0
            ker = [
                [Fraction(1 if i == j else 0) for i in range(len(cols))]
                for j in range(len(cols))
            ]
        ranks[k] = r
        if k == 1:
            h1_basis = ker
    dims = [
        comb(n, k) - ranks[k] - (ranks[k - 1] if k >= 1 else 0) for k in range(n + 1)
    ]
    report = CohomologyReport(tuple(dims), "chevalley-eilenberg")
    return CECohomology(report, h1_basis)


# ----------------------------------------------------------------------
# Maurer-Cartan residual


@dataclass(frozen=True)
class FlatnessResidual:
    forms: list  # LeafwiseForm degree 2 per Lie algebra basis index
    sup: float
    modes: list  # (basis index, frame pair, mode) of offending coefficients

    def is_flat(self, tol: float = 0.0) -> bool:
        return self.sup <= tol

    def to_json(self) -> dict:
        return {
            "sup": self.sup,
            "modes": [
                {"basis": b, "frame_pair": list(ij), "k": list(m)} for b, ij, m in self.modes
            ],
        }


def maurer_cartan_residual(components: list, spec: LieAlgebraSpec) -> FlatnessResidual:
    """d_F omega + [omega ^ omega] for a Lie-algebra-valued leafwise 1-form.

    `components` lists one scalar LeafwiseForm of degree 1 per basis element
    of the algebra; the bracket term is
    [omega ^ omega](X_i, X_j) = [omega(X_i), omega(X_j)] expanded through
    the structure constants with coefficient convolution.  The residual
    vanishes iff omega satisfies the flatness equation of the canonical
    form of a locally free action.
    """
    if len(components) != spec.dim:
        raise DimensionError("need one component form per Lie algebra basis element")
    if not components:
        raise DimensionError("empty algebra")
    F = components[0].foliation
    for w in components:
        if w.degree != 1 or w.foliation is not F and w.foliation.B != F.B:
            raise DimensionError("components must be degree-1 forms on one foliation")
    p = F.p
    out_forms = []
    sup = 0.0
    modes = []
    d_parts = [leafwise_d(w) for w in components]
    for cidx in range(spec.dim):
        comps: dict = {}
        for i, j in itertools.combinations(range(p), 2):
            total = d_parts[cidx].component((i, j))
            for a in range(spec.dim):
                for b in range(spec.dim):
                    cv = spec.c(a, b, cidx)
                    if cv == 0:
                        continue
                    wa = components[a].component((i,))
                    wb = components[b].component((j,))
                    if not wa.coeffs or not wb.coeffs:
                        continue
                    total = total + (wa * wb).scale(_frac_scalar(cv, wa, wb))
            if total.coeffs:
                comps[(i, j)] = total
                for m in total.coeffs:
                    modes.append((cidx, (i, j), m))
                sup = max(sup, total.sup_coeff())
        out_forms.append(LeafwiseForm(F, 2, comps))
    return FlatnessResidual(out_forms, sup, modes)


def _frac_scalar(v: Fraction, wa: TrigPoly, wb: TrigPoly):
    if wa.is_exact() and wb.is_exact():
        return v
    return float(v)
