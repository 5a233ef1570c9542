"""Measures on the plane with closed-form complex moments.

Four kinds are supported: normalized Lebesgue measure on a circle,
trigonometric-polynomial-weighted circle measure, finitely atomic
measures, and positive linear combinations of the above.  The central
operation is the moment

    c[i, j] = integral of  z**i * conj(z)**j  d(mu),

computed in closed form (binomial expansions around the circle center,
Fourier coefficients for weighted circles, plain sums for atoms) and
cross-checkable against trapezoid quadrature on a uniform angular grid.

Hermitian symmetry ``moment(m, i, j) == conj(moment(m, j, i))`` holds
*exactly* (bit for bit): entries with i > j are produced by conjugating
the mirrored entry rather than re-evaluating the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "Atomic",
    "CircleLebesgue",
    "Measure",
    "MeasureFormatError",
    "MeasureSum",
    "WeightedCircle",
    "from_json",
    "has_infinite_support",
    "moment",
    "moment_quadrature",
    "support_hull_radius",
    "to_json",
    "weight_values",
]

#: fixed grid used for weight-positivity validation
WEIGHT_GRID_POINTS = 4096
#: tolerance for the Hermitian pairing w(-k) == conj(w(k)) of weight input
WEIGHT_PAIR_TOL = 1e-12
#: a trigonometric weight may dip this far below zero on the check grid
WEIGHT_POSITIVITY_TOL = 1e-12
#: circle-type quadrature refuses coarser grids than this
MIN_CIRCLE_GRID = 256


class MeasureFormatError(ValueError):
    """Malformed measure description (constructor argument or JSON)."""


@dataclass(frozen=True)
class CircleLebesgue:
    """Normalized arc-length measure on the circle |z - center| = radius."""

    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0:
            raise MeasureFormatError("circle radius must be positive")


@dataclass(frozen=True)
class WeightedCircle:
    """Circle measure w(theta) dtheta/(2 pi) with a trig-polynomial weight.

    ``fourier`` maps the integer frequency k to the coefficient of
    exp(i k theta).  The weight must be real valued (coefficients come in
    Hermitian pairs) and nonnegative on the circle; both are validated at
    construction, and the stored coefficients are canonicalized so the
    Hermitian pairing holds exactly.
    """

    center: complex
    radius: float
    fourier: tuple[tuple[int, complex], ...]

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0:
            raise MeasureFormatError("circle radius must be positive")
        object.__setattr__(self, "fourier", _canonical_weight(self.fourier))

    def coefficient(self, k: int) -> complex:
        for kk, c in self.fourier:
            if kk == k:
                return c
        return 0.0 + 0.0j


@dataclass(frozen=True)
class Atomic:
    """Finitely many point masses: sum of mass_k * delta(z_k)."""

    atoms: tuple[tuple[complex, float], ...]

    def __post_init__(self):
        atoms = tuple((complex(z), float(w)) for z, w in self.atoms)
        if not atoms:
            raise MeasureFormatError("atomic measure needs at least one atom")
        if any(w <= 0 for _, w in atoms):
            raise MeasureFormatError("atom masses must be positive")
        object.__setattr__(self, "atoms", atoms)


@dataclass(frozen=True)
class MeasureSum:
    """Positive linear combination of measures."""

    terms: tuple[tuple[float, "Measure"], ...]

    def __post_init__(self):
        terms = tuple((float(s), m) for s, m in self.terms)
        if not terms:
            raise MeasureFormatError("sum measure needs at least one term")
        if any(s <= 0 for s, _ in terms):
            raise MeasureFormatError("sum scales must be positive")
        for _, m in terms:
            if not isinstance(m, (CircleLebesgue, WeightedCircle, Atomic, MeasureSum)):
                raise MeasureFormatError("sum terms must be measures")
        object.__setattr__(self, "terms", terms)


Measure = Union[CircleLebesgue, WeightedCircle, Atomic, MeasureSum]


def _canonical_weight(fourier) -> tuple[tuple[int, complex], ...]:
    """Validate and canonicalize trig-weight coefficients.

    Requires Hermitian input pairs (w(-k) == conj(w(k)) within
    WEIGHT_PAIR_TOL), positive mean, and nonnegativity of the weight on a
    WEIGHT_GRID_POINTS grid.  Returns coefficients for all frequencies
    -d..d with the pairing enforced exactly.
    """
    raw: dict[int, complex] = {}
    for k, c in dict(fourier).items():
        raw[int(k)] = raw.get(int(k), 0.0 + 0.0j) + complex(c)
    if not raw:
        raise MeasureFormatError("weight needs at least the mean coefficient")
    scale = max(abs(c) for c in raw.values())
    if scale == 0:
        raise MeasureFormatError("weight is identically zero")
    canon: dict[int, complex] = {}
    for k in sorted({abs(k) for k in raw}):
        plus = raw.get(k, 0.0 + 0.0j)
        minus = raw.get(-k, 0.0 + 0.0j)
        if abs(minus - np.conj(plus)) > WEIGHT_PAIR_TOL * scale:
            raise MeasureFormatError(
                "weight coefficients are not Hermitian: w(-%d) != conj(w(%d))" % (k, k)
            )
        val = 0.5 * (plus + np.conj(minus))
        if k == 0:
            val = complex(val.real, 0.0)
            if not val.real > 0:
                raise MeasureFormatError("weight mean must be positive")
            canon[0] = val
        else:
            canon[k] = val
            canon[-k] = np.conj(val)
    theta = 2.0 * np.pi * np.arange(WEIGHT_GRID_POINTS) / WEIGHT_GRID_POINTS
    wmin = weight_values(tuple(sorted(canon.items())), theta).min()
    if wmin < -WEIGHT_POSITIVITY_TOL * max(1.0, canon[0].real):
        raise MeasureFormatError(
            "weight is negative on the circle (grid minimum %.3e)" % wmin
        )
    return tuple(sorted(canon.items()))


def weight_values(fourier, theta) -> np.ndarray:
    """Evaluate a canonical trig weight on angles; exactly real by pairing."""
    theta = np.asarray(theta, dtype=float)
    out = np.zeros_like(theta)
    for k, c in dict(fourier).items():
        if k == 0:
            out += complex(c).real
        elif k > 0:
            out += 2.0 * (complex(c) * np.exp(1j * k * theta)).real
    return out


def _powers(a: complex, n: int) -> np.ndarray:
    """[a**0, ..., a**n] by iterated multiplication (0**0 == 1)."""
    p = np.empty(n + 1, dtype=complex)
    p[0] = 1.0
    for k in range(1, n + 1):
        p[k] = p[k - 1] * a
    return p


def _moment_upper(m: Measure, i: int, j: int) -> complex:
    # closed forms, evaluated only for i <= j (see moment())
    if isinstance(m, CircleLebesgue):
        a, r = m.center, m.radius
        ap = _powers(a, max(i, j))
        r2 = _powers(r * r, min(i, j)).real
        total = 0.0 + 0.0j
        for k in range(min(i, j) + 1):
            scale = float(math.comb(i, k) * math.comb(j, k)) * r2[k]
            total += scale * (ap[i - k] * np.conj(ap[j - k]))
        return total
    if isinstance(m, WeightedCircle):
        a, r = m.center, m.radius
        ap = _powers(a, max(i, j))
        rp = _powers(r, i + j).real
        coeffs = dict(m.fourier)
        total = 0.0 + 0.0j
        for k in range(i + 1):
            bik = float(math.comb(i, k))
            for l in range(j + 1):
                w = coeffs.get(l - k)
                if w is None:
                    continue
                scale = bik * float(math.comb(j, l)) * rp[k + l]
                total += scale * (ap[i - k] * np.conj(ap[j - l])) * w
        return total
    if isinstance(m, Atomic):
        total = 0.0 + 0.0j
        for z, w in m.atoms:
            zp = _powers(z, max(i, j))
            total += w * (zp[i] * np.conj(zp[j]))
        return total
    if isinstance(m, MeasureSum):
        total = 0.0 + 0.0j
        for s, comp in m.terms:
            total += s * _moment_upper(comp, i, j)
        return total
    raise TypeError(f"not a measure: {m!r}")


def moment(m: Measure, i: int, j: int) -> complex:
    """Closed-form moment c[i, j]; Hermitian symmetry is exact."""
    if i < 0 or j < 0:
        raise ValueError("moment orders must be nonnegative")
    if i > j:
        return np.conj(_moment_upper(m, j, i))
    return _moment_upper(m, i, j)


def moment_quadrature(m: Measure, i: int, j: int, grid_points: int = WEIGHT_GRID_POINTS) -> complex:
    """Independent moment evaluation: trapezoid rule on a uniform angular
    grid for circle kinds (exact summation for Atomic).

    The integrand is a trigonometric polynomial, so the periodic trapezoid
    rule is exact up to roundoff once the grid resolves degree i + j + the
    weight degree; grids coarser than MIN_CIRCLE_GRID are rejected.
    """
    if i < 0 or j < 0:
        raise ValueError("moment orders must be nonnegative")
    if isinstance(m, (CircleLebesgue, WeightedCircle)):
        if grid_points < MIN_CIRCLE_GRID:
            raise ValueError(
                f"grid_points={grid_points} too coarse for circle quadrature "
                f"(minimum {MIN_CIRCLE_GRID})"
            )
        theta = 2.0 * np.pi * np.arange(grid_points) / grid_points
        z = m.center + m.radius * np.exp(1j * theta)
        vals = z**i * np.conj(z) ** j
        if isinstance(m, WeightedCircle):
            vals = vals * weight_values(m.fourier, theta)
        return complex(vals.mean())
    if isinstance(m, Atomic):
        return complex(_moment_upper(m, i, j) if i <= j else np.conj(_moment_upper(m, j, i)))
    if isinstance(m, MeasureSum):
        return complex(
            sum(s * moment_quadrature(comp, i, j, grid_points) for s, comp in m.terms)
        )
    raise TypeError(f"not a measure: {m!r}")


def support_hull_radius(m: Measure) -> float:
    """Radius of the smallest origin-centered disk containing the support."""
    if isinstance(m, (CircleLebesgue, WeightedCircle)):
        return abs(m.center) + m.radius
    if isinstance(m, Atomic):
        return max(abs(z) for z, _ in m.atoms)
    if isinstance(m, MeasureSum):
        return max(support_hull_radius(comp) for _, comp in m.terms)
    raise TypeError(f"not a measure: {m!r}")


def has_infinite_support(m: Measure) -> bool:
    if isinstance(m, (CircleLebesgue, WeightedCircle)):
        return True
    if isinstance(m, Atomic):
        return False
    if isinstance(m, MeasureSum):
        return any(has_infinite_support(comp) for _, comp in m.terms)
    raise TypeError(f"not a measure: {m!r}")


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------

def to_json(m: Measure) -> dict:
    """Plain-dict description; see from_json for the schema."""
    if isinstance(m, CircleLebesgue):
        return {
            "kind": "circle",
            "center": [m.center.real, m.center.imag],
            "radius": m.radius,
        }
    if isinstance(m, WeightedCircle):
        return {
            "kind": "weighted_circle",
            "center": [m.center.real, m.center.imag],
            "radius": m.radius,
            "fourier": [[k, c.real, c.imag] for k, c in m.fourier],
        }
    if isinstance(m, Atomic):
        return {"kind": "atomic", "atoms": [[z.real, z.imag, w] for z, w in m.atoms]}
    if isinstance(m, MeasureSum):
        return {"kind": "sum", "terms": [[s, to_json(comp)] for s, comp in m.terms]}
    raise TypeError(f"not a measure: {m!r}")


def _require_keys(obj: dict, required: tuple[str, ...]):
    missing = [k for k in required if k not in obj]
    extra = [k for k in obj if k not in required]
    if missing:
        raise MeasureFormatError(f"measure object missing keys {missing}")
    if extra:
        raise MeasureFormatError(f"measure object has unknown keys {extra}")


def _as_complex(pair) -> complex:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise MeasureFormatError(f"expected [re, im] pair, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def from_json(obj) -> Measure:
    """Parse a measure description.

    Schema (unknown keys are rejected)::

        {"kind": "circle", "center": [re, im], "radius": r}
        {"kind": "weighted_circle", "center": [re, im], "radius": r,
         "fourier": [[k, re, im], ...]}
        {"kind": "atomic", "atoms": [[re, im, mass], ...]}
        {"kind": "sum", "terms": [[scale, <measure>], ...]}
    """
    if not isinstance(obj, dict):
        raise MeasureFormatError(f"measure must be a JSON object, got {type(obj).__name__}")
    kind = obj.get("kind")
    if kind == "circle":
        _require_keys(obj, ("kind", "center", "radius"))
        return CircleLebesgue(_as_complex(obj["center"]), float(obj["radius"]))
    if kind == "weighted_circle":
        _require_keys(obj, ("kind", "center", "radius", "fourier"))
        fourier = {}
        for item in obj["fourier"]:
            if not isinstance(item, (list, tuple)) or len(item) != 3:
                raise MeasureFormatError(f"expected [k, re, im] triple, got {item!r}")
            k = int(item[0])
            fourier[k] = fourier.get(k, 0.0 + 0.0j) + complex(float(item[1]), float(item[2]))
        return WeightedCircle(_as_complex(obj["center"]), float(obj["radius"]), tuple(fourier.items()))
    if kind == "atomic":
        _require_keys(obj, ("kind", "atoms"))
        atoms = []
        for item in obj["atoms"]:
            if not isinstance(item, (list, tuple)) or len(item) != 3:
                raise MeasureFormatError(f"expected [re, im, mass] triple, got {item!r}")
            atoms.append((complex(float(item[0]), float(item[1])), float(item[2])))
        return Atomic(tuple(atoms))
    if kind == "sum":
        _require_keys(obj, ("kind", "terms"))
        terms = []
        for item in obj["terms"]:
            if not isinstance(item, (list, tuple)) or len(item) != 2:
                raise MeasureFormatError(f"expected [scale, measure] pair, got {item!r}")
            terms.append((float(item[0]), from_json(item[1])))
        return MeasureSum(tuple(terms))
    raise MeasureFormatError(f"unknown measure kind {kind!r}")
