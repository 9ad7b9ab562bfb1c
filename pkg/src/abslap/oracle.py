"""Dense brute-force references used only by the test suite.

Everything here is deliberately independent of the transform-based fast
path and of library decompositions: the symmetric eigendecomposition is a
cyclic Jacobi sweep and the complex solve is textbook LU with partial
pivoting, both written out locally.  Slow and simple on purpose; orders are
capped at desk scale.
"""

from __future__ import annotations

import math

import numpy as np

from .saddle import Shift

ORDER_CAP = 2048


def _check_square(a: np.ndarray, cap: int = ORDER_CAP) -> np.ndarray:
    a = np.asarray(a)
    a = np.atleast_2d(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > cap:
        raise ValueError(f"dense oracle capped at order {cap}, got {a.shape[0]}")
    return a


def jacobi_eigh(h: np.ndarray, sweep_tol: float = 1e-14, max_sweeps: int = 30):
    """Symmetric eigendecomposition by cyclic Jacobi rotations.

    Returns (eigenvalues ascending, eigenvector columns) with
    h = q diag(w) q^T.  Sweeps rotate away every off-diagonal pair in turn
    until the off-diagonal mass falls below sweep_tol relative to the
    Frobenius norm.
    """
    a = np.array(_check_square(h), dtype=float, copy=True)
    n = a.shape[0]
    q = np.eye(n)
    if n == 1:
        return a.ravel().copy(), q
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return np.zeros(n), q

    for _ in range(max_sweeps):
        strict = a.copy()
        np.fill_diagonal(strict, 0.0)
        if np.linalg.norm(strict) <= sweep_tol * norm:
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = float(a[p, r])
                if apr == 0.0:
                    continue
                tau = (float(a[r, r]) - float(a[p, p])) / (2.0 * apr)
                # stable choice of the smaller-angle root; asymptotic form
                # once tau*tau would overflow
                if abs(tau) >= 1e150:
                    t = 0.5 / tau
                elif tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                row_p = a[p, :].copy()
                row_r = a[r, :].copy()
                a[p, :] = c * row_p - s * row_r
                a[r, :] = s * row_p + c * row_r
                col_p = a[:, p].copy()
                col_r = a[:, r].copy()
                a[:, p] = c * col_p - s * col_r
                a[:, r] = s * col_p + c * col_r
                vec_p = q[:, p].copy()
                vec_r = q[:, r].copy()
                q[:, p] = c * vec_p - s * vec_r
                q[:, r] = s * vec_p + c * vec_r
    else:
        raise RuntimeError(f"Jacobi sweeps did not converge within {max_sweeps} passes")

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], q[:, order]


def _symmetric_part(h: np.ndarray, what: str) -> np.ndarray:
    h = _check_square(h).astype(float)
    scale = max(1.0, float(np.abs(h).max()))
    if float(np.abs(h - h.T).max()) > 1e-10 * scale:
        raise ValueError(f"{what} requires a symmetric matrix")
    return 0.5 * (h + h.T)


def dense_abs(h: np.ndarray) -> np.ndarray:
    """Matrix absolute value via eigendecomposition: |H| = Q |diag| Q^T."""
    sym = _symmetric_part(h, "dense_abs")
    w, q = jacobi_eigh(sym)
    return (q * np.abs(w)[None, :]) @ q.T


def dense_sqrt(h: np.ndarray) -> np.ndarray:
    """Principal square root of a PSD matrix; tiny negative eigenvalues clamp to 0."""
    sym = _symmetric_part(h, "dense_sqrt")
    w, q = jacobi_eigh(sym)
    floor = -1e-10 * max(1.0, float(np.abs(w).max()))
    if w.min() < floor:
        raise ValueError(
            f"dense_sqrt needs a positive semidefinite matrix; smallest eigenvalue {w.min()}"
        )
    return (q * np.sqrt(np.clip(w, 0.0, None))[None, :]) @ q.T


def _lu_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Partial-pivot LU solve, complex arithmetic, in place on copies."""
    a = np.array(a, dtype=complex, copy=True)
    b = np.array(b, dtype=complex, copy=True)
    n = a.shape[0]
    for k in range(n - 1):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if a[p, k] == 0.0:
            raise ValueError("singular matrix in dense complex solve")
        if p != k:
            a[[k, p], :] = a[[p, k], :]
            b[[k, p]] = b[[p, k]]
        factors = a[k + 1:, k] / a[k, k]
        a[k + 1:, k + 1:] -= factors[:, None] * a[k, k + 1:][None, :]
        b[k + 1:] -= factors * b[k]
    x = np.zeros(n, dtype=complex)
    for k in range(n - 1, -1, -1):
        if a[k, k] == 0.0:
            raise ValueError("singular matrix in dense complex solve")
        x[k] = (b[k] - np.dot(a[k, k + 1:], x[k + 1:])) / a[k, k]
    return x


def dense_complex_solve(k_dense: np.ndarray, shift: Shift, f: np.ndarray) -> np.ndarray:
    """Direct solve of (K + (alpha + beta i) I) z = f with a residual check."""
    k = _check_square(k_dense).astype(float)
    f = np.asarray(f, dtype=complex)
    if f.shape != (k.shape[0],):
        raise ValueError(f"right-hand side shape {f.shape} does not match order {k.shape[0]}")
    a = k + (shift.alpha + 1j * shift.beta) * np.eye(k.shape[0])
    z = _lu_solve(a, f)
    fnorm = float(np.linalg.norm(f))
    if fnorm > 0.0:
        rel = float(np.linalg.norm(a @ z - f)) / fnorm
        if rel > 1e-10:
            raise RuntimeError(f"dense solve residual {rel} exceeds 1e-10; system near singular")
    return z


def saddle_block_dense(k_dense: np.ndarray, shift: Shift) -> np.ndarray:
    """Assemble the symmetric block matrix directly from a dense K."""
    k = _check_square(k_dense).astype(float)
    m = k.shape[0]
    eye = np.eye(m)
    shifted = k + shift.alpha * eye
    return np.block([[shift.beta * eye, shifted], [shifted, -shift.beta * eye]])


def ideal_preconditioner_dense(k_dense: np.ndarray, shift: Shift) -> np.ndarray:
    """Block-diagonal |blocks| built from dense_sqrt((K + alpha I)^2 + beta^2 I)."""
    k = _check_square(k_dense).astype(float)
    m = k.shape[0]
    eye = np.eye(m)
    shifted = k + shift.alpha * eye
    half = dense_sqrt(shifted @ shifted + shift.beta ** 2 * eye)
    out = np.zeros((2 * m, 2 * m))
    out[:m, :m] = half
    out[m:, m:] = half
    return out


def averaged_preconditioner_dense(l_dense: np.ndarray, gamma: float, shift: Shift) -> np.ndarray:
    """Same construction with K replaced by gamma L."""
    l = _check_square(l_dense).astype(float)
    return ideal_preconditioner_dense(gamma * l, shift)
