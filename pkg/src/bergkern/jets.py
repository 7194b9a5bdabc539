"""Truncated bivariate Taylor arithmetic for sesqui-holomorphic kernels.

A jet is a complex array J of shape (nz+1, nw+1) holding the Taylor
coefficients of K(z0+dz, conj_w = wbar0+dwb) around an evaluation point:
J[a, b] is the coefficient of dz^a dwb^b, i.e. the (a, b) mixed Wirtinger
derivative divided by a! b!.  Every kernel node evaluates by propagating
these jets, which makes removable-singularity limits exact coefficient
shifts instead of finite differences.
"""

from __future__ import annotations

import numpy as np


def jet_const(value: complex, nz: int, nw: int) -> np.ndarray:
    J = np.zeros((nz + 1, nw + 1), dtype=complex)
    J[0, 0] = value
    return J


def jet_z(z0: complex, nz: int, nw: int) -> np.ndarray:
    """Jet of the coordinate z itself."""
    J = np.zeros((nz + 1, nw + 1), dtype=complex)
    J[0, 0] = z0
    if nz >= 1:
        J[1, 0] = 1.0
    return J


def jet_wbar(wbar0: complex, nz: int, nw: int) -> np.ndarray:
    """Jet of the coordinate conj(w)."""
    J = np.zeros((nz + 1, nw + 1), dtype=complex)
    J[0, 0] = wbar0
    if nw >= 1:
        J[0, 1] = 1.0
    return J


def jet_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Product jet, truncated to the common shape."""
    nz1, nw1 = A.shape
    C = np.zeros_like(A)
    for a in range(nz1):
        for b in range(nw1):
            if A[a, b] != 0:
                C[a:, b:] += A[a, b] * B[: nz1 - a, : nw1 - b]
    return C


def jet_reciprocal(B: np.ndarray) -> np.ndarray:
    """Jet of 1/B; requires a nonzero constant term."""
    nz1, nw1 = B.shape
    b00 = B[0, 0]
    C = np.zeros_like(B)
    C[0, 0] = 1.0 / b00
    for a in range(nz1):
        for b in range(nw1):
            if a == 0 and b == 0:
                continue
            s = 0j
            for i in range(a + 1):
                for j in range(b + 1):
                    if i == a and j == b:
                        continue
                    s += B[a - i, b - j] * C[i, j]
            C[a, b] = -s / b00
    return C


def jet_div(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return jet_mul(A, jet_reciprocal(B))


def jet_outer(az: np.ndarray, bw: np.ndarray) -> np.ndarray:
    """Jet of f(z)*g(conj w) from the univariate jets of the two factors."""
    return np.outer(np.asarray(az, dtype=complex), np.asarray(bw, dtype=complex))


def jet_shift(J: np.ndarray, kz: int, kw: int) -> np.ndarray:
    """Exact division by dz^kz dwb^kw: drop the leading rows/columns.

    The dropped entries are the numerator coefficients that vanish
    analytically at a removable singularity; discarding them removes the
    floating-point cancellation residue instead of dividing by it.
    """
    if kz == 0 and kw == 0:
        return J
    return J[kz:, kw:]


def taylor1_mul(a, b, n: int) -> np.ndarray:
    """Univariate truncated product to order n."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    out = np.zeros(n + 1, dtype=complex)
    for i in range(min(len(a), n + 1)):
        if a[i] != 0:
            hi = min(len(b), n + 1 - i)
            out[i : i + hi] += a[i] * b[:hi]
    return out


def taylor1_reciprocal(b, n: int) -> np.ndarray:
    b = np.asarray(b, dtype=complex)
    out = np.zeros(n + 1, dtype=complex)
    out[0] = 1.0 / b[0]
    for k in range(1, n + 1):
        s = 0j
        for i in range(1, min(k, len(b) - 1) + 1):
            s += b[i] * out[k - i]
        out[k] = -s / b[0]
    return out


def jet_compose(J: np.ndarray, u, v) -> np.ndarray:
    """Substitute inner jets into a bivariate jet.

    J holds coefficients in (du, dv); u and v are univariate jets of
    du(dz) and dv(dwb) with zero constant term.  Returns the jet in
    (dz, dwb) with the same shape as J.
    """
    nz1, nw1 = J.shape
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    u_pows = np.zeros((nz1, nz1), dtype=complex)
    v_pows = np.zeros((nw1, nw1), dtype=complex)
    u_pows[0, 0] = 1.0
    v_pows[0, 0] = 1.0
    for i in range(1, nz1):
        u_pows[i] = taylor1_mul(u_pows[i - 1], u, nz1 - 1)
    for j in range(1, nw1):
        v_pows[j] = taylor1_mul(v_pows[j - 1], v, nw1 - 1)
    return np.einsum("ij,ia,jb->ab", J, u_pows, v_pows)
