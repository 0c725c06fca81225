"""Givens rotations on pairs of consecutive indices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K


@dataclass(frozen=True)
class GivensRotation:
    """The 2x2 unitary ``R = [[c, s], [-conj(s), c]]`` acting on rows ``(k, k+1)``.

    ``c`` is real and non-negative.  ``R @ (a, b) = (r, 0)`` for the pair it
    was built from.
    """

    c: float
    s: complex
    k: int = 0

    def matrix(self) -> np.ndarray:
        return np.array([[self.c, self.s], [-np.conj(self.s), self.c]])

    def adjoint(self) -> "GivensRotation":
        # R^* = [[c, -s], [conj(s), c]] has the same form with s -> -s
        return GivensRotation(self.c, -self.s, self.k)


def _check_finite(*vals):
    for z in vals:
        if not np.isfinite(z):
            raise ValueError("Givens rotation inputs must be finite")


def make_givens(a, b, k: int = 0):
    """Rotation annihilating ``b`` against ``a``.

    Returns
    -------
    G : GivensRotation
    r : scalar
        ``|r| = hypot(|a|, |b|)``; ``r`` keeps the phase of ``a``.

    Examples
    --------
    >>> G, r = make_givens(3.0, 4.0)
    >>> G.c, G.s, r
    (0.6, 0.8, 5.0)
    """
    _check_finite(a, b)
    real = not (np.iscomplexobj(a) or np.iscomplexobj(b))
    if real:
        c, s, r = K.givens(float(a), float(b))
    else:
        c, s, r = K.givens(complex(a), complex(b))
    return GivensRotation(float(c), s, k), r


def apply_pair(G: GivensRotation, x, y):
    """Left application ``R @ (x, y)``."""
    return G.c * x + G.s * y, -np.conj(G.s) * x + G.c * y


def apply_pair_right(G: GivensRotation, p, q):
    """Right application by the adjoint, ``(p, q) @ R^*``."""
    return G.c * p + np.conj(G.s) * q, -G.s * p + G.c * q
