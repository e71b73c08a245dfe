"""Repulsive pair potential on the torus and its mollified family.

The potential is W(x) = (x^2 - |x|)/2 on the canonical representative
x in [-1/2, 1/2), with force kernel W'(x) = x - sign(x)/2 and the
no-self-interaction convention sign(0) = 0, hence W'(0) = 0.  The
mollified kernel replaces W' on [-eps, eps] by the linear interpolant
-(1/(2 eps) - 1) x, which is Lipschitz with constant 1/(2 eps).
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "KernelKind",
    "EXACT",
    "mollified",
    "potential",
    "force_kernel",
    "mollified_force",
    "mollified_potential",
    "kernel_force",
]


@dataclass(frozen=True)
class KernelKind:
    """Selects the exact singular kernel (epsilon=None) or a mollified one."""

    epsilon: float | None = None

    def __post_init__(self):
        if self.epsilon is not None and not (0.0 < self.epsilon < 0.5):
            raise ValueError(
                f"KernelKind: epsilon must lie in (0, 1/2), got {self.epsilon}"
            )

    @property
    def is_mollified(self):
        return self.epsilon is not None


EXACT = KernelKind()


def mollified(epsilon):
    """Mollified kernel with smoothing radius epsilon in (0, 1/2)."""
    return KernelKind(float(epsilon))


def potential(x):
    """W(x) = (x^2 - |x|)/2; takes values in [-1/8, 0]."""
    x = np.asarray(x, dtype=float)
    out = 0.5 * (x * x - np.abs(x))
    if out.ndim == 0:
        return float(out)
    return out


def force_kernel(x):
    """W'(x) = x - sign(x)/2 with sign(0) = 0, so W'(0) = 0 and |W'| <= 1/2."""
    x = np.asarray(x, dtype=float)
    out = x - 0.5 * np.sign(x)
    if out.ndim == 0:
        return float(out)
    return out


def _check_eps(eps):
    if not (0.0 < eps < 0.5):
        raise ValueError(f"epsilon must lie in (0, 1/2), got {eps}")


def mollified_force(x, eps):
    """Piecewise-linear regularization of W': linear on [-eps, eps], W' outside."""
    eps = float(eps)
    _check_eps(eps)
    x = np.asarray(x, dtype=float)
    inner = -(0.5 / eps - 1.0) * x
    out = np.where(np.abs(x) <= eps, inner, x - 0.5 * np.sign(x))
    if out.ndim == 0:
        return float(out)
    return out


def mollified_potential(x, eps):
    """Antiderivative of the mollified force, continuous at |x| = eps."""
    eps = float(eps)
    _check_eps(eps)
    x = np.asarray(x, dtype=float)
    inner = -(0.5 / eps - 1.0) * 0.5 * x * x - 0.25 * eps
    out = np.where(np.abs(x) <= eps, inner, 0.5 * (x * x - np.abs(x)))
    if out.ndim == 0:
        return float(out)
    return out


def kernel_force(x, kind: KernelKind = EXACT):
    """Force kernel selected by ``kind``: exact W' or its mollification."""
    if kind.is_mollified:
        return mollified_force(x, kind.epsilon)
    return force_kernel(x)
