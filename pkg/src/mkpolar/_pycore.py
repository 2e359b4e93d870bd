"""Pure numpy SC / SCL decoding, the fallback for the compiled core.

Same plan, same buffer layout and the same decision and pruning rules as
``_core.pyx``; the per-node LLR updates are vectorized over the columns of a
node through :func:`mkpolar.kernel.kernel_llr`.
"""

from __future__ import annotations

import math

import numpy as np

from .kernel import kernel_llr


def penalty(lam: float, u: int, approx: bool) -> float:
    """Metric increment for deciding ``u`` against LLR ``lam``."""
    if approx:
        return abs(lam) if (lam < 0) != (u == 1) else 0.0
    x = -(1 - 2 * u) * lam
    if x > 0:
        return x + math.log1p(math.exp(-x))
    return math.log1p(math.exp(x))


class _Tree:
    """Digit counter and per-node updates for one kernel plan."""

    def __init__(self, plan, minsum: bool, cap: float):
        self.plan = plan
        self.kernels = plan["kernels"]
        self.sizes = plan["sizes"]
        self.s = len(self.sizes)
        self.M = plan["M"]
        self.loff = plan["loff"]
        self.poff = plan["poff"]
        self.mode = "minsum" if minsum else "exact"
        self.cap = cap
        self.mats = [k.matrix.astype(np.int64) for k in self.kernels]
        self.digit = [0] * (self.s + 1)

    def new_buffers(self):
        return np.zeros(self.loff[-1] + 1), np.zeros(max(self.plan["ptotal"], 1), dtype=np.uint8)

    def update(self, llr, ps, dstart):
        for d in range(dstart, self.s + 1):
            p, a, Md = self.sizes[d - 1], self.digit[d], self.M[d]
            lo, po = self.loff[d - 1], self.poff[d - 1]
            L = llr[lo: lo + p * Md].reshape(p, Md)
            u = ps[po: po + a * Md].reshape(a, Md)
            llr[self.loff[d]: self.loff[d] + Md] = kernel_llr(self.kernels[d - 1], a, L, u, self.mode, self.cap)
        return float(llr[self.loff[self.s]])

    def commit(self, ps, u):
        s, digit = self.s, self.digit
        ps[self.poff[s - 1] + digit[s]] = u
        d = s
        while d >= 2 and digit[d] == self.sizes[d - 1] - 1:
            p, Md = self.sizes[d - 1], self.M[d]
            po = self.poff[d - 1]
            node = ps[po: po + p * Md].reshape(p, Md).astype(np.int64)
            x = (node.T @ self.mats[d - 1]) % 2
            dst = self.poff[d - 2] + digit[d - 1] * self.M[d - 1]
            ps[dst: dst + p * Md] = x.T.ravel()
            d -= 1

    def advance(self):
        d = self.s
        while d >= 1:
            self.digit[d] += 1
            if self.digit[d] < self.sizes[d - 1]:
                return d
            self.digit[d] = 0
            d -= 1
        return 1


def _check(plan, chan, frozen):
    N = plan["M"][0]
    if len(chan) != N or len(frozen) != N:
        raise ValueError("length mismatch")


def sc_core(plan, chan, frozen, minsum: bool, cap: float):
    """Successive cancellation; returns decisions and the LLR of every decision."""
    _check(plan, chan, frozen)
    tree = _Tree(plan, minsum, cap)
    N = plan["M"][0]
    llr, ps = tree.new_buffers()
    llr[:N] = np.clip(chan, -cap, cap)
    uhat = np.zeros(N, dtype=np.uint8)
    lam = np.zeros(N)
    dstart = 1
    for i in range(N):
        lam[i] = tree.update(llr, ps, dstart)
        u = 0 if frozen[i] else int(lam[i] < 0)
        uhat[i] = u
        tree.commit(ps, u)
        dstart = tree.advance()
    return uhat, lam


def scl_core(plan, chan, frozen, list_size: int, minsum: bool, approx: bool, cap: float):
    """List decoding; returns ``(u_hats, metrics)`` of the survivors, best metric first."""
    if list_size < 1:
        raise ValueError("list size must be at least 1")
    _check(plan, chan, frozen)
    tree = _Tree(plan, minsum, cap)
    N = plan["M"][0]
    llr0, ps0 = tree.new_buffers()
    llr0[:N] = np.clip(chan, -cap, cap)
    # each path: [llr, ps, u_hat, metric]
    paths = [[llr0, ps0, np.zeros(N, dtype=np.uint8), 0.0]]
    dstart = 1
    for i in range(N):
        lams = [tree.update(p[0], p[1], dstart) for p in paths]
        if frozen[i]:
            for p, lam in zip(paths, lams):
                p[3] += penalty(lam, 0, approx)
                tree.commit(p[1], 0)
        else:
            cands = []
            for l, (p, lam) in enumerate(zip(paths, lams)):
                bit = int(lam < 0)
                cands.append((p[3] + penalty(lam, bit, approx), l, bit))
                cands.append((p[3] + penalty(lam, 1 - bit, approx), l, 1 - bit))
            cands.sort(key=lambda c: c[0])  # stable
            survivors = []
            for metric, l, bit in cands[:list_size]:
                src = paths[l]
                u = src[2].copy()
                u[i] = bit
                survivors.append([src[0].copy(), src[1].copy(), u, metric])
            for p in survivors:
                tree.commit(p[1], p[2][i])
            paths = survivors
        dstart = tree.advance()
    metrics = np.array([p[3] for p in paths])
    order = np.argsort(metrics, kind="stable")
    return np.array([paths[j][2] for j in order], dtype=np.uint8), metrics[order]
