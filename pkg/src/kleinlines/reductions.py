"""Maps from point pairs (p, q) to lines in FP^3.

Every map here sends (p, q) to a point of the Klein quadric so that two
image lines meet exactly when the quadruple (p, p', q, q') solves a
two-dimensional equation of the form f(p, p') = g(q, q').

The ``*_vector`` functions return raw six-tuples and are generic over the
number type (they also run on sympy symbols, which is how the polynomial
identities are checked).  The public maps canonicalise to
:class:`~kleinlines.klein.PlueckerLine`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from ._exact import as_fraction, det, det2, format_scalar, parse_scalar, sign_normalized, vec
from .errors import (
    CollinearInput,
    ConstraintViolation,
    NotOnSurface,
    ZeroVector,
)
from .expr import Expr, evaluate_at, parse_expr, to_source
from .klein import PlueckerLine

Vec2 = tuple[Fraction, Fraction]
Mat2 = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]

PRESETS = ("euclidean", "positive_definite", "minkowski", "degenerate", "directions")
FORM_VECTORS = ("a", "b", "c", "d", "alpha", "beta", "gamma", "delta")

_HALF = Fraction(1, 2)
_ZERO2 = (Fraction(0), Fraction(0))


def _dot2(u, w):
    return u[0] * w[0] + u[1] * w[1]


def _neg2(u) -> Vec2:
    return (-u[0], -u[1])


def _parallel(u, w) -> bool:
    return u[0] * w[1] - u[1] * w[0] == 0


def _outer(u, w) -> Mat2:
    return ((u[0] * w[0], u[0] * w[1]), (u[1] * w[0], u[1] * w[1]))


def _madd(*ms) -> Mat2:
    return tuple(tuple(sum((m[i][j] for m in ms), Fraction(0)) for j in range(2)) for i in range(2))


def _mneg(m) -> Mat2:
    return tuple(tuple(-x for x in row) for row in m)


def quad(m, x, y=None):
    """x^T m y (y defaults to x)."""
    y = x if y is None else y
    return (x[0] * (m[0][0] * y[0] + m[0][1] * y[1])
            + x[1] * (m[1][0] * y[0] + m[1][1] * y[1]))


@dataclass(frozen=True)
class FormConfig:
    """The eight plane vectors defining L1..L4.

    L1 = a.p + alpha.q,  L2 = b.p + beta.q,  L3 = c.p + gamma.q,  L4 = d.p + delta.q.
    The four forms must be linearly independent on (p, q); this is checked here.
    """

    a: Vec2
    b: Vec2
    c: Vec2
    d: Vec2
    alpha: Vec2
    beta: Vec2
    gamma: Vec2
    delta: Vec2
    preset: str | None = None
    lam: Fraction | None = None

    def __post_init__(self):
        for name in FORM_VECTORS:
            v = vec(getattr(self, name))
            if len(v) != 2:
                raise ValueError(f"{name} must have two coordinates")
            object.__setattr__(self, name, v)
        if self.lam is not None:
            object.__setattr__(self, "lam", as_fraction(self.lam))
        if det(self.coefficient_matrix()) == 0:
            raise ConstraintViolation("forms: L1..L4 are linearly dependent (coefficient matrix singular)")

    def coefficient_matrix(self) -> list[list[Fraction]]:
        return [
            [*self.a, *self.alpha],
            [*self.b, *self.beta],
            [*self.c, *self.gamma],
            [*self.d, *self.delta],
        ]

    def forms(self, p, q) -> tuple:
        return (
            _dot2(self.a, p) + _dot2(self.alpha, q),
            _dot2(self.b, p) + _dot2(self.beta, q),
            _dot2(self.c, p) + _dot2(self.gamma, q),
            _dot2(self.d, p) + _dot2(self.delta, q),
        )

    def to_json(self) -> dict:
        out: dict = {"preset": self.preset}
        for name in FORM_VECTORS:
            out[name] = [format_scalar(x) for x in getattr(self, name)]
        if self.lam is not None:
            out["lambda"] = format_scalar(self.lam)
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "FormConfig":
        unknown = set(data) - {"preset", "lambda", *FORM_VECTORS}
        if unknown:
            raise ValueError(f"unknown FormConfig fields: {sorted(unknown)}")
        given = {k: vec(parse_scalar(s) for s in data[k]) for k in FORM_VECTORS if k in data}
        preset = data.get("preset")
        if preset is None:
            missing = [k for k in FORM_VECTORS if k not in given]
            if missing:
                raise ValueError(f"FormConfig without preset needs all vectors; missing {missing}")
            return cls(**given)
        params = dict(given)
        if "lambda" in data:
            params["lam"] = parse_scalar(data["lambda"])
        free = _PRESET_FREE[preset]
        cfg = preset_config(preset, **{k: v for k, v in params.items() if k in free})
        for k, v in given.items():
            if k not in free and getattr(cfg, k) != v:
                raise ConstraintViolation(f"{preset}: {k} is fixed by the preset to {getattr(cfg, k)}, got {v}")
        return cfg


_PRESET_FREE = {
    "euclidean": set(),
    "positive_definite": {"a", "b", "alpha", "beta"},
    "minkowski": {"a", "b", "alpha", "beta"},
    "degenerate": {"a", "c", "beta", "delta"},
    "directions": {"a", "b", "lam"},
}


def _require_nonzero(tag: str, **vs):
    for name, v in vs.items():
        if v[0] == 0 and v[1] == 0:
            raise ConstraintViolation(f"{tag}: {name} must be nonzero")


def _require_independent(tag: str, n1: str, u, n2: str, w):
    if _parallel(u, w):
        raise ConstraintViolation(f"{tag}: {n1} must not be a multiple of {n2}")


def preset_config(name: str, **params) -> FormConfig:
    """Build a FormConfig from one of the named cases.

    ``euclidean`` takes no parameters.  ``positive_definite``/``minkowski``
    take ``a, b, alpha, beta``; ``degenerate`` takes ``a, c, beta, delta``;
    ``directions`` takes ``lam, a, b``.  Omitted vectors default to the
    standard basis.
    """
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {PRESETS}")
    extra = set(params) - _PRESET_FREE[name]
    if extra:
        raise ValueError(f"preset {name} does not take {sorted(extra)}")
    e1, e2 = (Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))
    get = lambda k, default: vec(params[k]) if k in params else default  # noqa: E731

    if name == "euclidean":
        h = _HALF
        return FormConfig(
            a=(0, -h), b=(h, 0), c=(0, h), d=(-h, 0),
            alpha=(0, h), beta=(-h, 0), gamma=(0, h), delta=(-h, 0),
            preset=name,
        )
    if name in ("positive_definite", "minkowski"):
        tag = "eset" if name == "positive_definite" else "mset"
        a, b = get("a", e1), get("b", e2)
        al, be = get("alpha", e1), get("beta", e2)
        _require_nonzero(tag, a=a, b=b, alpha=al, beta=be)
        _require_independent(tag, "a", a, "b", b)
        _require_independent(tag, "alpha", al, "beta", be)
        if name == "positive_definite":
            return FormConfig(a=a, b=b, c=a, d=b, alpha=al, beta=be,
                              gamma=_neg2(al), delta=_neg2(be), preset=name)
        return FormConfig(a=a, b=b, c=a, d=_neg2(b), alpha=al, beta=be,
                          gamma=_neg2(al), delta=be, preset=name)
    if name == "degenerate":
        a, c = get("a", e1), get("c", e2)
        be, de = get("beta", e1), get("delta", e2)
        _require_nonzero("dset", a=a, c=c, beta=be, delta=de)
        _require_independent("dset", "a", a, "c", c)
        _require_independent("dset", "beta", be, "delta", de)
        return FormConfig(a=a, b=_ZERO2, c=c, d=_ZERO2, alpha=_ZERO2, beta=be,
                          gamma=_ZERO2, delta=de, preset=name)
    # directions
    lam = as_fraction(params.get("lam", 1))
    a, b = get("a", e1), get("b", e2)
    if lam == 0:
        raise ConstraintViolation("dirset: lambda != 0 required")
    if a[1] * b[0] - a[0] * b[1] == 0:
        raise ConstraintViolation("dirset: a2*b1 - a1*b2 != 0 required")
    return FormConfig(
        a=a, b=b, c=_ZERO2, d=_ZERO2, alpha=_ZERO2, beta=_ZERO2,
        gamma=(lam * b[0], b[1]), delta=(-lam * a[0], -a[1]),
        preset=name, lam=lam,
    )


# -- the maps -----------------------------------------------------------------

def forms_vector(L1, L2, L3, L4) -> tuple:
    """[L1 : L2 : 1 : L3 : L4 : -L1 L3 - L2 L4]."""
    return (L1, L2, 1, L3, L4, -L1 * L3 - L2 * L4)


def pair_vector(cfg: FormConfig, p, q) -> tuple:
    return forms_vector(*cfg.forms(p, q))


def map_pair(cfg: FormConfig, p, q) -> PlueckerLine:
    return PlueckerLine(pair_vector(cfg, vec(p), vec(q)))


def euclidean_vector(p, q) -> tuple:
    """Rotation-line coordinates for the planar Euclidean distance, written out directly."""
    h = _HALF
    return (
        (q[1] - p[1]) * h,
        (p[0] - q[0]) * h,
        1,
        (p[1] + q[1]) * h,
        -(p[0] + q[0]) * h,
        (p[0] * p[0] + p[1] * p[1] - q[0] * q[0] - q[1] * q[1]) * h * h,
    )


def euclidean_line(p, q) -> PlueckerLine:
    return PlueckerLine(euclidean_vector(vec(p), vec(q)))


def curvature_vector(model: str, p, q) -> tuple:
    if model == "sphere":
        return (p[0] + q[0], p[1] + q[1], p[2] + q[2], p[0] - q[0], p[1] - q[1], p[2] - q[2])
    if model == "hyperboloid":
        return (p[0] + q[0], p[1] + q[1], p[2] + q[2], p[0] - q[0], p[1] - q[1], -(p[2] - q[2]))
    raise ValueError(f"unknown model {model!r}")


def on_hyperboloid(x) -> bool:
    return x[0] * x[0] + x[1] * x[1] - x[2] * x[2] == -1 and x[2] > 0


def map_constant_curvature(model: str, p, q) -> PlueckerLine:
    """(p+q : p-q) on the sphere; last component negated on the hyperboloid.

    Sphere inputs only need equal norms.  Hyperboloid inputs must lie on the
    upper sheet x1^2 + x2^2 - x3^2 = -1, x3 > 0.
    """
    p, q = vec(p), vec(q)
    if len(p) != 3 or len(q) != 3:
        raise ValueError("constant-curvature maps take 3-vectors")
    if model == "sphere":
        if sum(x * x for x in p) != sum(x * x for x in q):
            raise NotOnSurface("sphere map needs |p| = |q|")
        if not any(p):
            raise NotOnSurface("sphere of radius zero")
    elif model == "hyperboloid":
        for name, x in (("p", p), ("q", q)):
            if not on_hyperboloid(x):
                raise NotOnSurface(f"{name}={x} is not on the upper hyperboloid sheet")
    return PlueckerLine(curvature_vector(model, p, q))


# -- separation of variables ------------------------------------------------------

@dataclass(frozen=True)
class CaseMatrices:
    M1: Mat2
    M2: Mat2
    M3: Mat2
    m3_product: Mat2
    separated: bool
    kind: str

    @property
    def m3_orthogonal(self) -> bool:
        """The two coefficient 2-spaces of F^4 are mutually orthogonal (M3 = 0)."""
        return all(x == 0 for row in self.m3_product for x in row)


def _is_zero(m) -> bool:
    return all(x == 0 for row in m for x in row)


def _classify(M1, M2, M3) -> tuple[bool, str]:
    if _is_zero(M3):
        sym = M1[0][1] == M1[1][0] and M2[0][1] == M2[1][0]
        d1, d2 = det2(M1), det2(M2)
        if sym and d1 > 0 and d2 > 0:
            return True, "positive_definite"
        if sym and d1 < 0 and d2 < 0:
            return True, "signature_1_1"
        if d1 == 0 and d2 == 0 and not _is_zero(M1) and not _is_zero(M2):
            return True, "degenerate"
        return True, "separated_other"
    if _is_zero(M1) and _is_zero(M2):
        if M3[0][0] == 0 and M3[1][1] == 0:
            return True, "directions"
        if M3[0][1] == 0 and M3[1][0] == 0:
            return True, "directions_diagonal"
    return False, "mixed"


def case_matrices(cfg: FormConfig) -> CaseMatrices:
    """M1 = a c^T + b d^T, M2 = -(alpha gamma^T + beta delta^T),
    M3 = a gamma^T + b delta^T + c alpha^T + d beta^T, plus the separation verdict.

    ``m3_product`` is the 2x4 by 4x2 product of the coefficient blocks,
    computed independently of M3 as a cross-check.
    """
    M1 = _madd(_outer(cfg.a, cfg.c), _outer(cfg.b, cfg.d))
    M2 = _mneg(_madd(_outer(cfg.alpha, cfg.gamma), _outer(cfg.beta, cfg.delta)))
    M3 = _madd(_outer(cfg.a, cfg.gamma), _outer(cfg.b, cfg.delta),
               _outer(cfg.c, cfg.alpha), _outer(cfg.d, cfg.beta))
    left = [[cfg.a[i], cfg.b[i], cfg.c[i], cfg.d[i]] for i in range(2)]
    right = [[cfg.gamma[j], cfg.delta[j], cfg.alpha[j], cfg.beta[j]] for j in range(2)]
    prod = tuple(tuple(sum((left[i][k] * right[j][k] for k in range(4)), Fraction(0))
                       for j in range(2)) for i in range(2))
    separated, kind = _classify(M1, M2, M3)
    return CaseMatrices(M1, M2, M3, prod, separated, kind)


def isotropic_directions(a, b) -> tuple[Vec2, Vec2]:
    """x(+-) = (-(a2 +- b2), a1 +- b1), both isotropic for a a^T - b b^T."""
    a, b = vec(a), vec(b)
    if _parallel(a, b):
        raise CollinearInput(f"{a} and {b} are parallel")
    plus = (-(a[1] + b[1]), a[0] + b[0])
    minus = (-(a[1] - b[1]), a[0] - b[0])
    return plus, minus


def rank1_kernels(a, c) -> tuple[Vec2, Vec2]:
    """Left and right kernels of a c^T: y with y^T a c^T = 0 and x with a c^T x = 0."""
    a, c = vec(a), vec(c)
    for name, v in (("a", a), ("c", c)):
        if v[0] == 0 and v[1] == 0:
            raise ZeroVector(f"{name} is the zero vector")
    left = sign_normalized((a[1], -a[0]))
    right = sign_normalized((c[1], -c[0]))
    M = _outer(a, c)
    assert quad(M, left, (Fraction(1), Fraction(0))) == 0 and quad(M, left, (Fraction(0), Fraction(1))) == 0
    assert M[0][0] * right[0] + M[0][1] * right[1] == 0 and M[1][0] * right[0] + M[1][1] * right[1] == 0
    return left, right


# -- two-family construction from user functions --------------------------------

@dataclass(frozen=True)
class DirGFamily:
    """Four expressions f1..f4 in p1, p2, q1, q2 defining one family of lines."""

    family: int
    f: tuple[Expr, Expr, Expr, Expr]
    sources: tuple[str, str, str, str] = field(default=("", "", "", ""), compare=False)

    def __post_init__(self):
        if self.family not in (1, 2):
            raise ValueError("family id must be 1 or 2")
        if len(self.f) != 4:
            raise ValueError("a family needs exactly four functions")

    @classmethod
    def parse(cls, family: int, f1: str, f2: str, f3: str, f4: str) -> "DirGFamily":
        srcs = (f1, f2, f3, f4)
        return cls(family, tuple(parse_expr(s) for s in srcs), srcs)

    def values(self, p, q) -> tuple:
        return tuple(evaluate_at(e, p, q) for e in self.f)

    def to_json(self) -> dict:
        out = {"family": self.family}
        for i, e in enumerate(self.f):
            out[f"f{i + 1}"] = self.sources[i] or to_source(e)
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "DirGFamily":
        unknown = set(data) - {"family", "f1", "f2", "f3", "f4"}
        if unknown:
            raise ValueError(f"unknown DirGFamily fields: {sorted(unknown)}")
        return cls.parse(int(data["family"]), data["f1"], data["f2"], data["f3"], data["f4"])


def dirg_vector(f1, f2, f3, f4) -> tuple:
    """[f1 : f2 : 1 : f3 : -f4 : -f1 f3 + f2 f4], used for both families."""
    return (f1, f2, 1, f3, -f4, -f1 * f3 + f2 * f4)


def dirG_line(fam: DirGFamily, p, q) -> PlueckerLine:
    return PlueckerLine(dirg_vector(*fam.values(vec(p), vec(q))))


def genr_holds(f: Sequence, g: Sequence) -> bool:
    """(f1 - g1)(f3 - g3) == (f2 - g2)(f4 - g4)."""
    return (f[0] - g[0]) * (f[2] - g[2]) == (f[1] - g[1]) * (f[3] - g[3])


# -- family dispatch ---------------------------------------------------------------

Family = FormConfig | str | DirGFamily


def line_map(family) -> Callable[[Sequence, Sequence], PlueckerLine]:
    """Callable (p, q) -> line for a FormConfig, a DirGFamily, or 'sphere'/'hyperboloid'/'euclidean'."""
    if isinstance(family, FormConfig):
        return lambda p, q: map_pair(family, p, q)
    if isinstance(family, DirGFamily):
        return lambda p, q: dirG_line(family, p, q)
    if family in ("sphere", "hyperboloid"):
        return lambda p, q: map_constant_curvature(family, p, q)
    if family == "euclidean":
        return euclidean_line
    raise ValueError(f"unknown family {family!r}")
