"""Leafwise exterior calculus on linear foliations of the torus.

A linear foliation of T^(p+q) is presented by its p x q slope matrix B in
coordinates (s, x): the leaves are tangent to the commuting global frame
X_i = d/ds_i + sum_j B[i][j] d/dx_j.  Leafwise forms are stored by their
components on increasing frame tuples (0-based), ambient forms by their
components on coordinate tuples.  Because the frame is global and constant,
no atlas machinery is needed and every operation is coefficientwise in
Fourier modes.

The degree-1 solver inverts the leafwise differential mode by mode through
the divisors m_i + (B n)_i, and the top-degree witness extends a leafwise
top form to a closed ambient form, which is the constructive content of
total minimizability for badly approximable slopes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .errors import (
    DimensionError,
    NotClosedError,
    ObstructionError,
)
from .exact import ExactCoeff
from .fourier import TrigPoly, frame_derivative, _to_complex
from .scalars import as_scalar

TWO_PI = 2.0 * math.pi


class LinearFoliation:
    """Foliation F_B of T^(p+q) with slope matrix B (RealScalar entries)."""

    def __init__(self, p: int, q: int, B):
        if p < 1 or q < 1:
            raise DimensionError("need p >= 1 leaf and q >= 1 transverse dimensions")
        rows = [[as_scalar(e) for e in row] for row in B]
        if len(rows) != p or any(len(r) != q for r in rows):
            raise DimensionError(f"slope matrix must be {p}x{q}")
        self.p = p
        self.q = q
        self.B = rows

    @property
    def dims(self) -> int:
        return self.p + self.q

    @property
    def is_exact(self) -> bool:
        return all(s.is_exact for row in self.B for s in row)

    def frame_vector(self, i: int, exact: bool):
        """Coordinate components of X_i = d/ds_i + sum_j B[i][j] d/dx_j."""
        if exact:
            v: list = [0] * self.p + list(self.B[i])
            v[i] = 1
            return v
        v = [0.0] * self.dims
        v[i] = 1.0
        for j in range(self.q):
            v[self.p + j] = self.B[i][j].to_float()
        return v

    def divisor_float(self, mode: tuple, i: int) -> float:
        total = float(mode[i])
        for j in range(self.q):
            total += self.B[i][j].to_float() * mode[self.p + j]
        return total

    def divisor_exact(self, mode: tuple, i: int) -> ExactCoeff:
        total = ExactCoeff.from_fraction(mode[i])
        for j in range(self.q):
            n = mode[self.p + j]
            if n:
                total = total + ExactCoeff.from_scalar(self.B[i][j]) * n
        return total

    def divisor_profile(self, mode: tuple):
        """Per-direction divisors: list of (abs value, exactly_zero flag)."""
        out = []
        for i in range(self.p):
            if self.is_exact:
                d = self.divisor_exact(mode, i)
                out.append((abs(d.to_complex().real), d.is_zero()))
            else:
                d = self.divisor_float(mode, i)
                out.append((abs(d), d == 0.0))
        return out

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "B": [[s.to_json() for s in row] for row in self.B],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LinearFoliation":
        from .scalars import scalar_from_json

        rows = []
        for row in obj["B"]:
            rows.append(
                [scalar_from_json(e) if isinstance(e, dict) else as_scalar(e) for e in row]
            )
        return cls(int(obj["p"]), int(obj["q"]), rows)

    def __repr__(self):
        return f"LinearFoliation(p={self.p}, q={self.q})"


class _Form:
    """Shared storage for antisymmetric forms: increasing index tuples -> TrigPoly."""

    def __init__(self, dims: int, degree: int, components=None):
        self.dims = dims
        self.degree = degree
        comps = {}
        if components:
            for idx, poly in components.items():
                key = tuple(idx)
                if list(key) != sorted(set(key)):
                    raise DimensionError(f"component index {key} must be strictly increasing")
                if len(key) != degree:
                    raise DimensionError("component index length must equal the degree")
                if poly.coeffs:
                    comps[key] = poly
        self.components = comps

    def component(self, idx) -> TrigPoly:
        return self.components.get(tuple(idx), TrigPoly.zero(self.dims))

    def sup_coeff(self) -> float:
        if not self.components:
            return 0.0
        return max(p.sup_coeff() for p in self.components.values())

    def is_zero(self) -> bool:
        return not self.components

    def is_exact(self) -> bool:
        return all(p.is_exact() for p in self.components.values())

    def _combine(self, other, sign):
        comps = dict(self.components)
        for idx, poly in other.components.items():
            cur = comps.get(idx)
            new = (cur + poly.scale(sign)) if cur is not None else poly.scale(sign)
            if new.coeffs:
                comps[idx] = new
            else:
                comps.pop(idx, None)
        return comps

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "components": [
                {"idx": list(idx), "poly": self.components[idx].to_json()}
                for idx in sorted(self.components)
            ],
        }


class LeafwiseForm(_Form):
    """Degree-k form on the leaves, components indexed by frame tuples in {0..p-1}."""

    def __init__(self, foliation: LinearFoliation, degree: int, components=None):
        if degree < 0:
            raise DimensionError("negative degree")
        super().__init__(foliation.dims, degree, components)
        if any(v >= foliation.p for idx in self.components for v in idx):
            raise DimensionError("frame index out of range")
        self.foliation = foliation

    def __add__(self, other: "LeafwiseForm") -> "LeafwiseForm":
        return LeafwiseForm(self.foliation, self.degree, self._combine(other, 1))

    def __sub__(self, other: "LeafwiseForm") -> "LeafwiseForm":
        return LeafwiseForm(self.foliation, self.degree, self._combine(other, -1))

    def scale(self, s) -> "LeafwiseForm":
        return LeafwiseForm(
            self.foliation, self.degree, {i: p.scale(s) for i, p in self.components.items()}
        )

    @classmethod
    def from_function(cls, foliation, poly: TrigPoly) -> "LeafwiseForm":
        return cls(foliation, 0, {(): poly})

    @classmethod
    def from_json(cls, foliation, obj: dict) -> "LeafwiseForm":
        comps = {
            tuple(row["idx"]): TrigPoly.from_json(row["poly"]) for row in obj["components"]
        }
        return cls(foliation, int(obj["degree"]), comps)

    def __repr__(self):
        return f"LeafwiseForm(degree={self.degree}, components={len(self.components)})"


class AmbientForm(_Form):
    """Degree-k form on T^n over the coordinate coframe, indices in {0..n-1}."""

    def __init__(self, dims: int, degree: int, components=None):
        super().__init__(dims, degree, components)
        if any(v >= dims for idx in self.components for v in idx):
            raise DimensionError("coordinate index out of range")

    def __add__(self, other: "AmbientForm") -> "AmbientForm":
        return AmbientForm(self.dims, self.degree, self._combine(other, 1))

    def __sub__(self, other: "AmbientForm") -> "AmbientForm":
        return AmbientForm(self.dims, self.degree, self._combine(other, -1))

    def scale(self, s) -> "AmbientForm":
        return AmbientForm(
            self.dims, self.degree, {i: p.scale(s) for i, p in self.components.items()}
        )

    @classmethod
    def from_json(cls, dims: int, obj: dict) -> "AmbientForm":
        comps = {
            tuple(row["idx"]): TrigPoly.from_json(row["poly"]) for row in obj["components"]
        }
        return cls(dims, int(obj["degree"]), comps)

    def __repr__(self):
        return f"AmbientForm(dims={self.dims}, degree={self.degree})"


# ----------------------------------------------------------------------
# differentials


def leafwise_d(omega: LeafwiseForm) -> LeafwiseForm:
    """Leafwise exterior derivative.

    (d omega)_{j_0..j_k} = sum_a (-1)^a X_{j_a}(omega_{j_0..^j_a..j_k});
    the bracket terms vanish because the frame fields commute.  Input of
    top degree returns the zero form of degree p+1.
    """
    F = omega.foliation
    k = omega.degree
    exact = F.is_exact and omega.is_exact()
    if k >= F.p:
        return LeafwiseForm(F, k + 1, {})
    frames = [F.frame_vector(i, exact) for i in range(F.p)]
    out: dict = {}
    for J in itertools.combinations(range(F.p), k + 1):
        total = TrigPoly.zero(F.dims)
        for a, ja in enumerate(J):
            sub = J[:a] + J[a + 1:]
            comp = omega.components.get(sub)
            if comp is None:
                continue
            term = frame_derivative(comp, frames[ja])
            total = total + (term if a % 2 == 0 else -term)
        if total.coeffs:
            out[J] = total
    return LeafwiseForm(F, k + 1, out)


def ambient_d(omega: AmbientForm) -> AmbientForm:
    """Coordinatewise exterior derivative on T^n."""
    n = omega.dims
    k = omega.degree
    if k >= n:
        return AmbientForm(n, k + 1, {})
    exact = omega.is_exact() and bool(omega.components)
    units = []
    for c in range(n):
        e: list = [0] * n
        e[c] = 1 if exact else 1.0
        units.append(e)
    out: dict = {}
    for C in itertools.combinations(range(n), k + 1):
        total = TrigPoly.zero(n)
        for a, ca in enumerate(C):
            sub = C[:a] + C[a + 1:]
            comp = omega.components.get(sub)
            if comp is None:
                continue
            term = frame_derivative(comp, units[ca])
            total = total + (term if a % 2 == 0 else -term)
        if total.coeffs:
            out[C] = total
    return AmbientForm(n, k + 1, out)


def _det(rows, exact: bool):
    """Determinant of a small square matrix of scalars (permutation expansion)."""
    k = len(rows)
    if k == 0:
        return ExactCoeff.from_fraction(1) if exact else 1.0
    total = ExactCoeff({}) if exact else 0.0
    for perm in itertools.permutations(range(k)):
        sign = 1
        seen = list(perm)
        for i in range(k):  # parity by counting inversions
            for j in range(i + 1, k):
                if seen[i] > seen[j]:
                    sign = -sign
        term = ExactCoeff.from_fraction(sign) if exact else float(sign)
        for a in range(k):
            term = term * rows[a][perm[a]]
        total = total + term
    return total


def restrict(omega: AmbientForm, F: LinearFoliation) -> LeafwiseForm:
    """Restriction of an ambient form to the leaves.

    Components are obtained by evaluating the ambient form on frame tuples,
    using ds_i(X_j) = delta_ij and dx_j(X_i) = B[i][j].  This is a cochain
    map: restrict(d omega) = leafwise_d(restrict(omega)).
    """
    if omega.dims != F.dims:
        raise DimensionError("ambient form does not live on the foliation's torus")
    k = omega.degree
    if k > F.p:
        return LeafwiseForm(F, k, {})
    exact = F.is_exact and omega.is_exact() and bool(omega.components)
    if exact:
        frame_coords = [
            [ExactCoeff.from_fraction(v) if isinstance(v, int) else ExactCoeff.from_scalar(v)
             for v in F.frame_vector(i, True)]
            for i in range(F.p)
        ]
    else:
        frame_coords = [F.frame_vector(i, False) for i in range(F.p)]
    out: dict = {}
    for I in itertools.combinations(range(F.p), k):
        total = TrigPoly.zero(F.dims)
        for C, poly in omega.components.items():
            rows = [[frame_coords[i][c] for i in I] for c in C]
            det = _det(rows, exact)
            if exact:
                if det.is_zero():
                    continue
                total = total + poly.scale(det)
            else:
                if det == 0.0:
                    continue
                total = total + poly.scale(complex(det))
        if total.coeffs:
            out[I] = total
    return LeafwiseForm(F, k, out)


def iota_form(xi, F: LinearFoliation, exact: bool = False) -> LeafwiseForm:
    """Constant leafwise 1-form with frame components xi_i.

    Equals the restriction of sum_i xi_i ds_i; its class spans the image of
    the abelian Lie algebra cohomology inside H^1.
    """
    comps = {}
    for i, v in enumerate(xi):
        if exact:
            c = ExactCoeff.from_fraction(v)
            if not c.is_zero():
                comps[(i,)] = TrigPoly.constant(F.dims, c)
        else:
            c = complex(v)
            if c != 0:
                comps[(i,)] = TrigPoly.constant(F.dims, c)
    return LeafwiseForm(F, 1, comps)


# ----------------------------------------------------------------------
# solvers


@dataclass(frozen=True)
class SmallDivisorDiagnostic:
    """Near-resonant modes that block a small-divisor division."""

    context: str
    tol: float
    modes: list = field(default_factory=list)  # (mode, max |divisor|)

    def to_json(self) -> dict:
        return {
            "diagnostic": self.context,
            "tol": self.tol,
            "modes": [{"k": list(m), "max_divisor": d} for m, d in self.modes],
        }


@dataclass(frozen=True)
class H1Solution:
    a: tuple[float, ...]
    g: TrigPoly
    residual: float

    def to_json(self) -> dict:
        return {"a": list(self.a), "g": self.g.to_json(), "residual": self.residual}


def _divisor_split(F: LinearFoliation, support, tol: float):
    """Classify nonzero modes: solvable (with best direction) / near / exact zero."""
    solvable = {}
    near = []
    exact_zero = []
    for mode in support:
        if not any(mode):
            continue
        profile = F.divisor_profile(mode)
        best_i = max(range(F.p), key=lambda i: (profile[i][0], -i))
        best_abs = profile[best_i][0]
        if all(z for _, z in profile):
            exact_zero.append(mode)
        elif best_abs <= tol:
            near.append((mode, best_abs))
        else:
            solvable[mode] = best_i
    return solvable, near, exact_zero


def solve_h1(omega: LeafwiseForm, F: LinearFoliation, tol: float = 1e-9):
    """Split a closed leafwise 1-form as sum_i a_i xi_i + d_F g.

    a is the zero-mode vector of the components; every other mode is divided
    by 2 pi i times the largest-modulus divisor among the frame directions
    (ties broken toward the smallest index, which minimizes amplification).
    The per-mode cross-component consistency delta_j w_i = delta_i w_j is
    exactly the closedness precondition checked up front.

    Returns an H1Solution, or a SmallDivisorDiagnostic when some supported
    mode has all divisors within tol of zero.  An exactly resonant mode with
    a nonzero coefficient raises ObstructionError: the class lies outside
    the span of the constant forms.
    """
    if omega.degree != 1:
        raise DimensionError("solve_h1 expects a leafwise 1-form")
    exact = F.is_exact and omega.is_exact()
    frames = [F.frame_vector(i, exact) for i in range(F.p)]

    closure_sup = 0.0
    for i in range(F.p):
        for j in range(i + 1, F.p):
            cij = frame_derivative(omega.component((j,)), frames[i]) - frame_derivative(
                omega.component((i,)), frames[j]
            )
            closure_sup = max(closure_sup, cij.sup_coeff())
    if closure_sup > (0.0 if exact else tol):
        raise NotClosedError(f"input 1-form is not closed (sup {closure_sup:.3e})")

    support = set()
    for i in range(F.p):
        support.update(omega.component((i,)).coeffs)
    solvable, near, exact_zero = _divisor_split(F, support, tol)

    bad = [m for m in exact_zero if any(abs(_to_complex(omega.component((i,)).coeffs.get(m, 0))) > 0 for i in range(F.p))]
    if bad:
        raise ObstructionError(
            "exactly resonant modes carry nonzero coefficients; "
            "the class is not in the span of the constant forms",
            modes=bad,
        )
    if near:
        return SmallDivisorDiagnostic("solve_h1 near-resonant modes", tol, sorted(near))

    means = [omega.component((i,)).mean() for i in range(F.p)]
    a = tuple(_to_complex(m).real for m in means)

    g_coeffs = {}
    for mode, i in solvable.items():
        w = omega.component((i,)).coeffs.get(mode)
        if w is None:
            continue
        if exact:
            factor = F.divisor_exact(mode, i).times_i().times_tau(1)
            g_coeffs[mode] = w * factor.inverse()
        else:
            delta = F.divisor_float(mode, i)
            g_coeffs[mode] = _to_complex(w) / complex(0.0, TWO_PI * delta)
    g = TrigPoly(F.dims, g_coeffs)

    if exact:
        const = LeafwiseForm(
            F,
            1,
            {(i,): TrigPoly.constant(F.dims, m) for i, m in enumerate(means)},
        )
    else:
        const = iota_form(a, F)
    rec = leafwise_d(LeafwiseForm.from_function(F, g)) + const
    residual = (omega - rec).sup_coeff()
    return H1Solution(a, g, residual)


@dataclass(frozen=True)
class MinimizabilityWitness:
    mean: float
    eta: LeafwiseForm
    ambient: AmbientForm
    closure_sup: float
    restriction_residual: float

    def to_json(self) -> dict:
        return {
            "mean": self.mean,
            "eta": self.eta.to_json(),
            "ambient": self.ambient.to_json(),
            "closure_sup": self.closure_sup,
            "restriction_residual": self.restriction_residual,
        }


def minimizability_witness(omega0: LeafwiseForm, F: LinearFoliation, tol: float = 1e-9):
    """Extend a leafwise top form to a closed ambient form restricting to it.

    Writes omega0 = c xi_0^..^xi_{p-1} + d_F eta modewise and returns the
    ambient form c ds_0^..^ds_{p-1} + d(eta~), where eta~ copies eta onto
    the corresponding ds monomials.  Succeeds exactly when no supported mode
    is near-resonant; this realizes the surjectivity of the restriction map
    in top degree for badly approximable slopes, which is the criterion for
    extending every leafwise volume form to a closed ambient form.
    """
    p = F.p
    if omega0.degree != p:
        raise DimensionError("witness expects a leafwise top form")
    top = tuple(range(p))
    exact = F.is_exact and omega0.is_exact()
    poly = omega0.component(top)

    solvable, near, exact_zero = _divisor_split(F, set(poly.coeffs), tol)
    blocked = near + [(m, 0.0) for m in exact_zero if poly.coeffs.get(m) is not None]
    if blocked:
        return SmallDivisorDiagnostic(
            "minimizability witness blocked by resonant modes", tol, sorted(blocked)
        )

    c = poly.mean()
    eta_comps: dict = {}
    for mode, i in solvable.items():
        w = poly.coeffs.get(mode)
        if w is None:
            continue
        sub = top[:i] + top[i + 1:]
        sign = -1 if i % 2 else 1
        if exact:
            factor = F.divisor_exact(mode, i).times_i().times_tau(1) * sign
            val = w * factor.inverse()
        else:
            delta = F.divisor_float(mode, i)
            val = _to_complex(w) / complex(0.0, sign * TWO_PI * delta)
        eta_comps.setdefault(sub, {})[mode] = val
    eta = LeafwiseForm(
        F, p - 1, {idx: TrigPoly(F.dims, coeffs) for idx, coeffs in eta_comps.items()}
    )

    # ambient carrier: same components on the matching ds monomials
    eta_amb = AmbientForm(
        F.dims, p - 1, {idx: poly_ for idx, poly_ in eta.components.items()}
    )
    ds_top = AmbientForm(F.dims, p, {top: TrigPoly.constant(F.dims, c)})
    ambient = ds_top + ambient_d(eta_amb)

    closure = ambient_d(ambient)
    closure_sup = closure.sup_coeff()
    back = restrict(ambient, F)
    residual = (back - omega0).sup_coeff()
    return MinimizabilityWitness(
        _to_complex(c).real, eta, ambient, closure_sup, residual
    )
