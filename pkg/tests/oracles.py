"""Straight-line reference computations that share no code with the package.

Each function spells its formula out directly (explicit Kronecker products,
``scipy.linalg.expm``/``sqrtm``, sympy 3j symbols, scipy spherical harmonics)
and is used to freeze expected values or to cross-check the library.
"""
import math

import numpy as np
import scipy.linalg as sla
from scipy.special import sph_harm_y

I = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)
SWAP_PERM = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def kr(*ops):
    out = np.array([[1.0 + 0j]])
    for o in ops:
        out = np.kron(out, o)
    return out


def thermal(omega, beta):
    p = np.array([math.exp(-beta * omega), math.exp(beta * omega)])
    return np.diag(p / p.sum()).astype(complex)


def step_a(joint8, g12, g2a, w=1.0, dt=0.08, beta=1.0, theta=0.0):
    """One scheme-A collision; qubit order s1, s2, a_old, a_new."""
    H = w * (kr(Z, I, I, I) + kr(I, Z, I, I) + kr(I, I, Z, I))
    H = H + g12 * (kr(X, X, I, I) + kr(Y, Y, I, I)) + g2a * (kr(I, X, X, I) + kr(I, Y, Y, I))
    U = sla.expm(-1j * H * dt)
    S = math.cos(theta) * np.eye(16) - 1j * math.sin(theta) * kr(I, I, SWAP_PERM)
    rho = np.kron(joint8, thermal(w, beta))
    rho = S @ U @ rho @ U.conj().T @ S.conj().T
    t = rho.reshape([2] * 8)
    return np.einsum("abcdefch->abdefh", t).reshape(8, 8)


def step_b(joint16, g12, g1l, g2r, w=1.0, dt=0.08, beta_l=1.0, beta_r=1.0, theta=0.0):
    """One scheme-B collision; qubit order s1, s2, aL_old, aR_old, aL_new, aR_new."""
    def at(op, q):
        ops = [I] * 6
        ops[q] = op
        return kr(*ops)

    def pair(q1, q2):
        return at(X, q1) @ at(X, q2) + at(Y, q1) @ at(Y, q2)

    H = w * (at(Z, 0) + at(Z, 1) + at(Z, 2) + at(Z, 3))
    H = H + g12 * pair(0, 1) + g1l * pair(0, 2) + g2r * pair(1, 3)
    U = sla.expm(-1j * H * dt)
    # SWAP = (I + XX + YY + ZZ)/2 between q_old and q_new
    def swap(q1, q2):
        return 0.5 * (np.eye(64) + at(X, q1) @ at(X, q2) + at(Y, q1) @ at(Y, q2) + at(Z, q1) @ at(Z, q2))

    c, s = math.cos(theta), math.sin(theta)
    SL = c * np.eye(64) - 1j * s * swap(2, 4)
    SR = c * np.eye(64) - 1j * s * swap(3, 5)
    rho = kr(joint16, thermal(w, beta_l), thermal(w, beta_r))
    rho = SR @ SL @ U @ rho @ U.conj().T @ SL.conj().T @ SR.conj().T
    t = rho.reshape([2] * 12)
    # indices: row a b c d e f, column g h i j k l; trace c=i (aL_old), d=j (aR_old)
    return np.einsum("abcdefghcdkl->abefghkl", t).reshape(16, 16)


def concurrence_nested(rho):
    """max(0, l1 - l2 - l3 - l4) with l the eigenvalues of sqrt(sqrt(rho) rho~ sqrt(rho))."""
    yy = np.kron(Y, Y)
    rt = yy @ rho.conj() @ yy
    s = sla.sqrtm(rho)
    r = sla.sqrtm(s @ rt @ s)
    lam = np.sort(np.linalg.eigvals(r).real)[::-1]
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def concurrence_nested_mp(rho, dps=50):
    """The nested-root formula evaluated in ``dps``-digit arithmetic."""
    import mpmath as mp

    with mp.workdps(dps):
        R = mp.matrix(rho.tolist())
        yy = mp.matrix(np.kron(Y, Y).tolist())
        Rc = mp.matrix([[mp.conj(R[i, j]) for j in range(4)] for i in range(4)])
        rt = yy * Rc * yy
        E, V = mp.eighe(R)
        s = V * mp.diag([mp.sqrt(max(e, 0)) for e in E]) * V.H
        M = s * rt * s
        M = (M + M.H) / 2
        e2, V2 = mp.eighe(M)
        r = V2 * mp.diag([mp.sqrt(max(e, 0)) for e in e2]) * V2.H
        lam = sorted((mp.re(x) for x in mp.eig(r)[0]), reverse=True)
        return float(max(0, lam[0] - lam[1] - lam[2] - lam[3]))


def multipoles_sympy():
    """T_KQ for j = 1/2 from sympy's 3j symbols, basis m = +1/2, -1/2."""
    from sympy import Rational, sqrt
    from sympy.physics.wigner import wigner_3j

    h = Rational(1, 2)
    ms = [h, -h]
    out = {}
    for K in (0, 1):
        for Q in range(-K, K + 1):
            T = np.zeros((2, 2), dtype=complex)
            for a, m in enumerate(ms):
                for b, mp in enumerate(ms):
                    T[a, b] = complex((-1) ** (h - m) * sqrt(2 * K + 1) * wigner_3j(h, K, h, -m, Q, mp))
            out[K, Q] = T
    return out


def wigner_literal(rho, t1, p1, t2, p2):
    """Term-by-term expansion of the two-qubit spin Wigner function."""
    T = multipoles_sympy()
    total = 0j
    for (K1, Q1), A in T.items():
        for (K2, Q2), B in T.items():
            coef = np.trace(rho @ np.kron(A.conj().T, B.conj().T))
            total += coef * sph_harm_y(K1, Q1, t1, p1) * sph_harm_y(K2, Q2, t2, p2)
    return (2 / (4 * math.pi)) * total


def nonclassical_volume_grid(rho, n):
    """Brute-force product rule on both spheres (Gauss-Legendre x trapezoid)."""
    x, wx = np.polynomial.legendre.leggauss(n)
    th = np.arccos(x)
    ph = 2 * math.pi * np.arange(n) / n
    TH, PH = np.meshgrid(th, ph, indexing="ij")
    W1 = np.outer(wx, np.full(n, 2 * math.pi / n)).ravel()
    T = multipoles_sympy()
    keys = list(T)
    Ys = np.stack([sph_harm_y(K, Q, TH.ravel(), PH.ravel()) for K, Q in keys], axis=1)
    C = np.array([[np.trace(rho @ np.kron(T[a].conj().T, T[b].conj().T)) for b in keys] for a in keys])
    W = (2 / (4 * math.pi)) * (Ys @ C @ Ys.T).real
    return float(W1 @ np.abs(W) @ W1) - 1.0


def random_density(rng, dim=4, rank=None):
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    r = g @ g.conj().T
    return r / np.trace(r).real


def random_unitary(rng, dim=2):
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return q * (np.diag(r) / np.abs(np.diag(r)))
