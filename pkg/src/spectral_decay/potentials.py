"""Periodic potentials and compactly supported perturbations.

Three potential representations are supported: zero, a finite Fourier
series, and a right-continuous piecewise-constant step function on the
unit cell.  Perturbations are stored through their square root G
(Q = G^2), so the Birman-Schwinger operator can be assembled without
sign ambiguity.  All objects are immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SchemaError, ValidationError

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PeriodicPotential:
    """A real 1-periodic potential V(x) = V(x+1).

    kind is one of "zero", "fourier", "piecewise".  The period field is
    fixed to 1.0 in this version; general periods are handled by
    caller-side rescaling x -> x/T, lambda -> T^2 lambda.
    """

    kind: str
    period: float = 1.0
    mean: float = 0.0
    cos: tuple = ()
    sin: tuple = ()
    breaks: tuple = ()
    values: tuple = ()

    def __post_init__(self):
        if self.kind not in ("zero", "fourier", "piecewise"):
            raise ValidationError(f"unknown potential kind {self.kind!r}")
        if self.period != 1.0:
            raise ValidationError("only period 1.0 is supported")
        if self.kind == "piecewise":
            br = self.breaks
            if len(br) == 0 or br[0] != 0.0:
                raise ValidationError("piecewise breakpoints must start at 0")
            if any(b2 <= b1 for b1, b2 in zip(br, br[1:])):
                raise ValidationError("breakpoints must be strictly increasing")
            if br[-1] >= 1.0:
                raise ValidationError("breakpoints must lie in [0, 1)")
            if len(self.values) != len(br):
                raise ValidationError("breaks and values must have equal length")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "PeriodicPotential":
        return cls(kind="zero")

    @classmethod
    def fourier(cls, mean=0.0, cos=(), sin=()) -> "PeriodicPotential":
        return cls(kind="fourier", mean=float(mean),
                   cos=tuple(float(c) for c in cos),
                   sin=tuple(float(s) for s in sin))

    @classmethod
    def piecewise(cls, breaks, values) -> "PeriodicPotential":
        return cls(kind="piecewise",
                   breaks=tuple(float(b) for b in breaks),
                   values=tuple(float(v) for v in values))

    # -- evaluation ---------------------------------------------------

    def __call__(self, x):
        """Evaluate V at x (scalar or array); 1-periodic."""
        if self.kind == "zero":
            return np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0
        if self.kind == "fourier":
            x = np.asarray(x, dtype=float)
            out = np.full_like(x, self.mean)
            for k, c in enumerate(self.cos, start=1):
                out = out + c * np.cos(_TWO_PI * k * x)
            for k, s in enumerate(self.sin, start=1):
                out = out + s * np.sin(_TWO_PI * k * x)
            return float(out) if out.ndim == 0 else out
        # piecewise, right-continuous on [break_j, break_{j+1})
        frac = np.asarray(x, dtype=float) % 1.0
        idx = np.searchsorted(np.asarray(self.breaks), frac, side="right") - 1
        vals = np.asarray(self.values)[idx]
        return float(vals) if np.ndim(x) == 0 else vals

    @property
    def is_piecewise_constant(self) -> bool:
        return self.kind in ("zero", "piecewise")

    def max_abs(self) -> float:
        """Upper bound on max |V| (exact for zero/piecewise)."""
        if self.kind == "zero":
            return 0.0
        if self.kind == "piecewise":
            return max(abs(v) for v in self.values)
        return abs(self.mean) + sum(abs(c) for c in self.cos) + sum(abs(s) for s in self.sin)

    def cell_pieces(self):
        """(break, value) pairs covering [0,1) for piecewise/zero kinds."""
        if self.kind == "zero":
            return ((0.0, 0.0),)
        if self.kind == "piecewise":
            return tuple(zip(self.breaks, self.values))
        raise ValidationError("cell_pieces requires a piecewise-constant potential")

    # -- serialization ------------------------------------------------

    def to_dict(self) -> dict:
        if self.kind == "zero":
            return {"type": "zero"}
        if self.kind == "fourier":
            return {"type": "fourier", "mean": self.mean,
                    "cos": list(self.cos), "sin": list(self.sin)}
        return {"type": "piecewise", "breaks": list(self.breaks),
                "values": list(self.values)}


def load_potential(doc: dict) -> PeriodicPotential:
    """Build a PeriodicPotential from its JSON-schema dict.

    Raises SchemaError for missing/ill-typed fields, ValidationError for
    invariant violations (e.g. non-increasing breakpoints).
    """
    if not isinstance(doc, dict):
        raise SchemaError("potential document must be an object")
    kind = doc.get("type")
    if kind == "zero":
        return PeriodicPotential.zero()
    if kind == "fourier":
        mean = doc.get("mean", 0.0)
        cos = doc.get("cos", [])
        sin = doc.get("sin", [])
        if not isinstance(mean, (int, float)):
            raise SchemaError("'mean' must be a number")
        for name, lst in (("cos", cos), ("sin", sin)):
            if not isinstance(lst, list) or any(not isinstance(v, (int, float)) for v in lst):
                raise SchemaError(f"'{name}' must be a list of numbers")
        return PeriodicPotential.fourier(mean=mean, cos=cos, sin=sin)
    if kind == "piecewise":
        for name in ("breaks", "values"):
            lst = doc.get(name)
            if not isinstance(lst, list) or any(not isinstance(v, (int, float)) for v in lst):
                raise SchemaError(f"'{name}' must be a list of numbers")
        return PeriodicPotential.piecewise(doc["breaks"], doc["values"])
    raise SchemaError(f"unknown potential type {kind!r}")


@dataclass(frozen=True)
class CompactPerturbation:
    """A nonnegative bump Q = G^2 supported on [a, b].

    The profile describes G on the support, mapped from the unit cell:
    G(x) = profile((x - a)/(b - a)) for x in [a, b], zero outside.
    """

    support: tuple
    profile: PeriodicPotential

    def __post_init__(self):
        a, b = self.support
        if not (b > a):
            raise ValidationError("support must be a nondegenerate interval")
        t = np.linspace(0.0, 1.0, 257, endpoint=False)
        g = np.asarray(self.profile(t), dtype=float)
        if np.any(g < 0):
            raise ValidationError("profile G must be nonnegative on the support")
        if not np.any(g > 0):
            raise ValidationError("Q must not be identically zero")

    @classmethod
    def box(cls, a: float, b: float, height: float = 1.0) -> "CompactPerturbation":
        """Q = height^2 on [a, b] (G constant)."""
        return cls(support=(float(a), float(b)),
                   profile=PeriodicPotential.piecewise([0.0], [float(height)]))

    def g(self, x):
        """Square root profile G(x); zero outside the support."""
        a, b = self.support
        x = np.asarray(x, dtype=float)
        t = np.clip((x - a) / (b - a), 0.0, 1.0 - 1e-15)
        inside = (x >= a) & (x <= b)
        vals = np.where(inside, self.profile(t), 0.0)
        return float(vals) if vals.ndim == 0 else vals

    def q(self, x):
        """Q(x) = G(x)^2."""
        g = self.g(x)
        return g * g

    @property
    def is_piecewise_constant(self) -> bool:
        return self.profile.is_piecewise_constant

    def q_pieces(self):
        """(x_break, Q value) pairs covering [a, b) for piecewise profiles."""
        a, b = self.support
        out = []
        for t, v in self.profile.cell_pieces():
            out.append((a + t * (b - a), v * v))
        return tuple(out)

    def to_dict(self) -> dict:
        return {"support": list(self.support), "profile": self.profile.to_dict()}


def load_perturbation(doc: dict) -> CompactPerturbation:
    """Build a CompactPerturbation from {"support":[a,b],"profile":{...}}."""
    if not isinstance(doc, dict):
        raise SchemaError("perturbation document must be an object")
    sup = doc.get("support")
    if (not isinstance(sup, list) or len(sup) != 2
            or any(not isinstance(v, (int, float)) for v in sup)):
        raise SchemaError("'support' must be [a, b]")
    prof = doc.get("profile")
    if prof is None:
        raise SchemaError("missing 'profile'")
    return CompactPerturbation(support=(float(sup[0]), float(sup[1])),
                               profile=load_potential(prof))


@dataclass(frozen=True)
class MatrixPerturbation:
    """Hermitian 2x2 matrix-valued W(x) with compact support [a, b]."""

    support: tuple
    func: object = field(compare=False)  # x -> 2x2 complex Hermitian
    constant: object = None  # the matrix itself when W is constant on [a,b]

    def __post_init__(self):
        a, b = self.support
        if not (b > a):
            raise ValidationError("support must be a nondegenerate interval")
        for x in np.linspace(a, b, 17):
            w = np.asarray(self.func(x), dtype=complex)
            if w.shape != (2, 2):
                raise ValidationError("W samples must be 2x2")
            if not np.allclose(w, w.conj().T, atol=1e-12):
                raise ValidationError("W must be Hermitian at every sample")

    @classmethod
    def constant_matrix(cls, matrix, support) -> "MatrixPerturbation":
        m = np.asarray(matrix, dtype=complex)
        return cls(support=(float(support[0]), float(support[1])),
                   func=lambda x, _m=m: _m, constant=m)

    @classmethod
    def scalar_well(cls, depth: float, support) -> "MatrixPerturbation":
        """W = -depth * I on the support (attractive for depth > 0)."""
        return cls.constant_matrix(-float(depth) * np.eye(2), support)

    def __call__(self, x):
        a, b = self.support
        if a <= x <= b:
            return np.asarray(self.func(x), dtype=complex)
        return np.zeros((2, 2), dtype=complex)
