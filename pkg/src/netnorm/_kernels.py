"""Compiled inner loops for the operator-norm statistics."""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def power_norm(m, v, tol, max_iter):
    """Power iteration on ``m @ m`` from unit vector ``v`` (updated in place).

    Returns ``(estimate, iterations)``; ``iterations == -1`` means the budget
    ran out.  Iterating on the square makes +lambda/-lambda ties harmless.
    Stops when the eigen-residual of ``m @ m`` is below ``tol`` relative to
    its Rayleigh quotient; the eigenvalue error is then second order.
    """
    n = m.shape[0]
    y = np.empty(n)
    z = np.empty(n)
    est = 0.0
    for it in range(max_iter):
        for i in range(n):
            s = 0.0
            for j in range(n):
                s += m[i, j] * v[j]
            y[i] = s
        est = np.sqrt(np.dot(y, y))
        if est == 0.0:
            return 0.0, it + 1
        for i in range(n):
            s = 0.0
            for j in range(n):
                s += m[i, j] * y[j]
            z[i] = s
        nz = np.sqrt(np.dot(z, z))
        if nz == 0.0:
            return est, it + 1
        theta = est * est
        r = 0.0
        for i in range(n):
            d = z[i] - theta * v[i]
            r += d * d
            v[i] = z[i] / nz
        if np.sqrt(r) <= tol * theta:
            return est, it + 1
    return est, -1


@njit(cache=True, nogil=True)
def inf1_enumerate(m):
    """Exact max over sign vectors phi (phi[0] = +1) of ||m phi||_1.

    Walks a Gray code so each step flips one sign and updates ``m @ phi`` in
    O(n).  Returns the value recomputed from scratch at the best phi, and phi.
    """
    n = m.shape[0]
    phi = np.ones(n)
    y = np.zeros(n)
    for i in range(n):
        s = 0.0
        for j in range(n):
            s += m[i, j]
        y[i] = s
    best = np.sum(np.abs(y))
    best_code = 0
    total = 1 << (n - 1)
    for g in range(1, total):
        j = 1
        t = g
        while (t & 1) == 0:
            t >>= 1
            j += 1
        f = phi[j]
        for i in range(n):
            y[i] -= 2.0 * f * m[i, j]
        phi[j] = -f
        val = 0.0
        for i in range(n):
            val += abs(y[i])
        if val > best:
            best = val
            best_code = g ^ (g >> 1)
    out = np.ones(n)
    for j in range(1, n):
        if (best_code >> (j - 1)) & 1:
            out[j] = -1.0
    exact = 0.0
    for i in range(n):
        s = 0.0
        for j in range(n):
            s += m[i, j] * out[j]
        exact += abs(s)
    return exact, out


@njit(cache=True, nogil=True)
def _half_step(indptr, indices, data, src, dst, g):
    """dst[i] = normalize(sum_j M[i, j] src[j]); returns sum_i ||.||."""
    n = dst.shape[0]
    k = dst.shape[1]
    total = 0.0
    for i in range(n):
        for c in range(k):
            g[c] = 0.0
        for p in range(indptr[i], indptr[i + 1]):
            a = data[p]
            j = indices[p]
            for c in range(k):
                g[c] += a * src[j, c]
        s = 0.0
        for c in range(k):
            s += g[c] * g[c]
        s = np.sqrt(s)
        total += s
        if s > 0.0:
            for c in range(k):
                dst[i, c] = g[c] / s
    return total


@njit(cache=True, nogil=True)
def bm_alternating(indptr, indices, data, u, w, tol, max_iter):
    """Block-coordinate ascent for max sum_ij M_ij <u_i, w_j> with unit rows.

    ``M`` is symmetric and given in CSR form.  Each half-step is the exact
    maximizer of one block given the other, so the objective never decreases.
    After the ``w`` update the objective equals the returned running value.
    """
    k = u.shape[1]
    g = np.empty(k)
    prev = -np.inf
    obj = 0.0
    it = 0
    for it in range(max_iter):
        _half_step(indptr, indices, data, w, u, g)
        obj = _half_step(indptr, indices, data, u, w, g)
        if obj - prev < tol * max(1.0, abs(obj)):
            break
        prev = obj
    return obj, it + 1
