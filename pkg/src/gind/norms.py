"""Vector norms on C^n: lp norms and their linear pull-backs ``x -> ||Kx||``.

Every spec reduces to a pair ``(M, p)`` with ``||x|| = lp(Mx)``; all
evaluation, dualization and the g-ind machinery work through that form.
Dual objects use the bilinear pairing ``y0^T x`` (plain transpose).
"""

import json
import math
import numbers
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    InvalidExponent,
    ParseError,
    SingularMatrix,
    ZeroVector,
)
from .numerics import as_matrix, as_vector, cond_estimate, invert

MAX_DEPTH = 8
MAX_COND = 1e12

__all__ = [
    "Lp", "Transformed", "NormSpec", "DualVector", "L1", "L2", "LINF",
    "scaled", "flatten", "norm_eval", "dual_norm_eval", "dual_vector",
    "parse_norm_spec", "spec_to_text", "spec_to_json", "spec_from_json",
    "matrix_from_json", "matrix_to_json", "load_matrix", "vector_to_json",
    "vector_from_json", "is_unitarily_invariant", "is_real_spec", "GRAMMAR",
]


@dataclass(frozen=True)
class Lp:
    """The lp norm; ``p`` is in ``[1, inf]`` with ``math.inf`` for the max norm."""

    p: float

    def __post_init__(self):
        p = float(self.p)
        if math.isnan(p) or p < 1.0:
            raise InvalidExponent(f"lp exponent must satisfy p >= 1, got {self.p!r}")
        object.__setattr__(self, "p", p)

    @property
    def dim(self):
        return None

    @property
    def depth(self):
        return 1

    def __repr__(self):
        return "Lp(inf)" if math.isinf(self.p) else f"Lp({self.p:g})"


@dataclass(frozen=True, eq=False)
class Transformed:
    """``x -> ||K x||_base``. ``K`` is an invertible square matrix or a
    nonzero scalar ``c`` standing for ``c I`` in any dimension."""

    K: Union[complex, np.ndarray]
    base: "NormSpec"

    def __post_init__(self):
        K = self.K
        if np.ndim(K) == 0:
            c = complex(K)
            if c == 0 or not np.isfinite(c):
                raise SingularMatrix(0, "scale factor must be finite and nonzero")
            object.__setattr__(self, "K", c)
        else:
            M = as_matrix(K)
            cond = cond_estimate(M)
            if cond > MAX_COND:
                raise SingularMatrix(-1, f"condition estimate {cond:.3g} exceeds {MAX_COND:g}")
            M.setflags(write=False)
            object.__setattr__(self, "K", M)
            if self.base.dim is not None and self.base.dim != M.shape[0]:
                raise DimensionMismatch(
                    f"K is {M.shape[0]}x{M.shape[0]} but base norm has dimension {self.base.dim}")
        if self.depth > MAX_DEPTH:
            raise ValueError(f"norm spec nesting deeper than {MAX_DEPTH}")

    @property
    def is_scalar(self):
        return np.ndim(self.K) == 0

    @property
    def dim(self):
        return self.base.dim if self.is_scalar else self.K.shape[0]

    @property
    def depth(self):
        return 1 + self.base.depth

    def __repr__(self):
        k = f"{self.K:g}" if self.is_scalar else f"<{self.K.shape[0]}x{self.K.shape[0]}>"
        return f"Transformed({k}, {self.base!r})"


NormSpec = Union[Lp, Transformed]

L1 = Lp(1)
L2 = Lp(2)
LINF = Lp(math.inf)


def scaled(c, base):
    """``c * ||.||_base``, encoded as ``Transformed(c I, base)``."""
    return Transformed(c, base)


@dataclass(frozen=True)
class DualVector:
    y0: np.ndarray
    attained: float


def _check_dim(spec, n):
    if spec.dim is not None and spec.dim != n:
        raise DimensionMismatch(f"norm has dimension {spec.dim}, vector has {n}")


def flatten(spec, n):
    """Return ``(M, p)`` with ``||x||_spec = lp(M x)`` on C^n."""
    _check_dim(spec, n)
    if isinstance(spec, Lp):
        return np.eye(n, dtype=np.complex128), spec.p
    M, p = flatten(spec.base, n)
    if spec.is_scalar:
        return M * spec.K, p
    return M @ spec.K, p


def norm_eval(spec, x):
    x = as_vector(x)
    if isinstance(spec, Lp):
        return kernels.lp_norm(x, spec.p)
    M, p = flatten(spec, x.size)
    return kernels.lp_norm(np.ascontiguousarray(M @ x), p)


def dual_norm_eval(spec, y):
    """``max |y^T x|`` over ``||x||_spec = 1``."""
    y = as_vector(y)
    M, p = flatten(spec, y.size)
    u = invert(M).T @ y
    return kernels.lp_norm(np.ascontiguousarray(u), kernels.dual_exponent(p))


def dual_vector(spec, y):
    """Dual vector of ``y``: ``y0^T y = ||y||`` and ``|y0^T x| <= ||x||``."""
    y = as_vector(y)
    if not np.any(y):
        raise ZeroVector("dual vector of the zero vector is undefined")
    M, p = flatten(spec, y.size)
    w0 = kernels.dual_vec(np.ascontiguousarray(M @ y), p)
    y0 = M.T @ w0
    return DualVector(y0=y0, attained=float((y0 @ y).real))


def is_real_spec(spec):
    if isinstance(spec, Lp):
        return True
    return not np.any(np.imag(spec.K)) and is_real_spec(spec.base)


def is_unitarily_invariant(spec, n, tol=1e-12):
    """Structural test: ``lp(Mx)`` is unitarily invariant iff ``n == 1`` or
    ``p == 2`` and ``M`` is a multiple of a unitary."""
    M, p = flatten(spec, n)
    if n == 1:
        return True
    if p != 2.0:
        return False
    G = M.conj().T @ M
    c = G[0, 0].real
    return bool(np.abs(G - c * np.eye(n)).max() <= tol * max(c, 1.0))


# ---- text grammar -------------------------------------------------------

GRAMMAR = ('l1 | l2 | linf | lp:<float >= 1> | scale:<float>*<spec> '
            '| lin:<matrix-file-path>*<spec>')


def parse_norm_spec(text, base_dir=None):
    """Parse the norm-spec grammar::

        l1 | l2 | linf | lp:<p> | scale:<c>*<spec> | lin:<matrix.json>*<spec>
    """
    if not text or not text.strip():
        raise ParseError("empty norm spec; expected " + GRAMMAR, 0)
    return _parse(text.strip(), 0, base_dir)


def _parse(text, pos, base_dir):
    if text in ("l1", "l2", "linf"):
        return {"l1": L1, "l2": L2, "linf": LINF}[text]
    if text.startswith("lp:"):
        body = text[3:]
        try:
            p = float(body)
        except ValueError:
            raise ParseError(f"bad exponent {body!r}", pos + 3) from None
        return Lp(p)
    for head in ("scale:", "lin:"):
        if text.startswith(head):
            star = text.find("*")
            if star < 0:
                raise ParseError(f"'{head}' needs '*<spec>'", pos + len(text))
            arg = text[len(head):star]
            inner = _parse(text[star + 1:], pos + star + 1, base_dir)
            if head == "scale:":
                try:
                    c = float(arg)
                except ValueError:
                    raise ParseError(f"bad scale {arg!r}", pos + len(head)) from None
                if c == 0 or not math.isfinite(c):
                    raise ParseError("scale must be finite and nonzero", pos + len(head))
                return Transformed(c, inner)
            path = Path(arg)
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            return Transformed(load_matrix(path), inner)
    raise ParseError(f"unrecognised norm spec {text!r}; expected " + GRAMMAR, pos)


def spec_to_text(spec):
    if isinstance(spec, Lp):
        if spec.p == 1:
            return "l1"
        if spec.p == 2:
            return "l2"
        if math.isinf(spec.p):
            return "linf"
        return f"lp:{spec.p:g}"
    if spec.is_scalar and spec.K.imag == 0:
        return f"scale:{spec.K.real:g}*{spec_to_text(spec.base)}"
    return f"lin:<matrix>*{spec_to_text(spec.base)}"


def spec_to_json(spec):
    if isinstance(spec, Lp):
        return {"lp": "inf" if math.isinf(spec.p) else spec.p}
    K = [spec.K.real, spec.K.imag] if spec.is_scalar else matrix_to_json(spec.K)
    return {"transformed": {"K": K, "base": spec_to_json(spec.base)}}


def spec_from_json(obj):
    if "lp" in obj:
        return Lp(math.inf if obj["lp"] == "inf" else obj["lp"])
    t = obj["transformed"]
    K = t["K"]
    K = complex(K[0], K[1]) if isinstance(K, list) else matrix_from_json(K)
    return Transformed(K, spec_from_json(t["base"]))


# ---- matrix / vector JSON ----------------------------------------------

def _entry(v):
    if isinstance(v, numbers.Real) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(
            isinstance(t, numbers.Real) and not isinstance(t, bool) for t in v):
        return complex(v[0], v[1])
    raise ValueError(f"matrix entry must be a number or [re, im], got {v!r}")


def matrix_from_json(obj):
    """``{"rows": n, "cols": n, "data": [[[re, im] | re, ...], ...]}`` -> array."""
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"matrix JSON needs rows, cols and data: {exc}") from None
    if len(data) != rows or any(len(r) != cols for r in data):
        raise DimensionMismatch(f"matrix data does not match rows={rows}, cols={cols}")
    return as_matrix([[_entry(v) for v in r] for r in data], square=False)


def matrix_to_json(M):
    M = np.asarray(M, dtype=np.complex128)
    return {"rows": M.shape[0], "cols": M.shape[1],
            "data": [[[float(v.real), float(v.imag)] for v in r] for r in M]}


def vector_to_json(x):
    return [[float(v.real), float(v.imag)] for v in np.asarray(x, dtype=np.complex128)]


def vector_from_json(obj):
    return as_vector([_entry(v) for v in obj])


def load_matrix(path):
    with open(path, encoding="utf-8") as fh:
        return matrix_from_json(json.load(fh))
