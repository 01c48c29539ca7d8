"""Brute-force reference correlators.

Ground truth for every acceptance check: plain dense matrix products,
nothing else.  This module must never call Kraus construction or the
sequence engine; its value lies in being an independent route to the same
numbers.
"""

from __future__ import annotations

import numpy as np


def _mat(x) -> np.ndarray:
    m = getattr(x, "matrix", x)
    if callable(m):
        m = m()
    return np.asarray(m, dtype=np.complex128)


def _check_dims(*mats):
    dims = {m.shape for m in mats}
    if len(dims) != 1:
        raise ValueError(f"dimension mismatch between operands: {sorted(dims)}")


def oracle_toc(rho, a, b, u) -> complex:
    """Two-point correlator <B(t) A> = Tr(U^dag B U A rho)."""
    rho, a, b, u = _mat(rho), _mat(a), _mat(b), _mat(u)
    _check_dims(rho, a, b, u)
    bt = u.conj().T @ b @ u
    return complex(np.trace(bt @ a @ rho))


def oracle_otoc(rho, a, b, u) -> complex:
    """Four-point correlator F(t) = <B(t) A B(t) A> with B(t) = U^dag B U."""
    rho, a, b, u = _mat(rho), _mat(a), _mat(b), _mat(u)
    _check_dims(rho, a, b, u)
    bt = u.conj().T @ b @ u
    return complex(np.trace(bt @ a @ bt @ a @ rho))


def oracle_nested(rho, observables, kinds) -> complex:
    """Expectation of the nested bracket a measurement sequence targets.

    ``observables`` and ``kinds`` are in measurement order: the first
    entry is measured first and forms the outermost bracket.  Each
    informative step nests an anticommutator {X, A}/2, each
    noninformative step a commutator [X, A]/(2i); the innermost operator
    is the last observable.  For all-informative sequences this is
    <{...{{A_m, A_{m-1}}, A_{m-2}}..., A_1}> / 2^(m-1); with a
    noninformative first step the outer bracket becomes a commutator and
    the normalization 2^(m-2) (2i).
    """
    mats = [_mat(o) for o in observables]
    if not mats:
        raise ValueError("need at least one observable")
    kinds = list(kinds)
    if len(kinds) != len(mats):
        raise ValueError("observables and kinds must have equal length")
    for k in kinds:
        if k not in ("informative", "noninformative"):
            raise ValueError(f"unknown measurement kind {k!r}")
    rho = _mat(rho)
    _check_dims(rho, *mats)

    nested = mats[-1]
    if kinds[-1] == "noninformative":
        # [1, A]/2i = 0: the innermost step must be informative to survive.
        nested = (nested - nested) / 2j
    for a, kind in zip(mats[-2::-1], kinds[-2::-1]):
        if kind == "informative":
            nested = (nested @ a + a @ nested) / 2.0
        else:
            nested = (nested @ a - a @ nested) / 2j
    return complex(np.trace(nested @ rho))
