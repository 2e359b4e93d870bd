# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled SC / SCL loops over the mixed-radix decoding tree.

Buffers are flat. For depth d = 0..s, ``llr[loff[d] : loff[d] + M[d]]`` holds the
LLRs entering the current node at depth d (depth 0 is the channel), and for
d = 0..s-1 ``ps[poff[d] : poff[d] + M[d]]`` holds the re-encoded outputs of the
finished children of that node, child j at ``j * M[d+1]``. The layout is built
by :func:`mkpolar._backend.make_plan`; :mod:`mkpolar._pycore` runs the same steps
in numpy.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY, fabs, log1p, exp

cnp.import_array()

cdef enum:
    PMAX = 16
    SMAX = 64


cdef inline double _sign(double x) noexcept nogil:
    return <double>((x > 0) - (x < 0))


cdef inline double _sg(int u) noexcept nogil:
    return 1.0 - 2.0 * u


cdef inline double _bp(double a, double b, bint minsum) noexcept nogil:
    cdef double fa = fabs(a), fb = fabs(b)
    cdef double s = _sign(a) * _sign(b) * (fa if fa < fb else fb)
    if minsum:
        return s
    return s + log1p(exp(-fabs(a + b))) - log1p(exp(-fabs(a - b)))


cdef inline double _clip(double x, double cap) noexcept nogil:
    if x > cap:
        return cap
    if x < -cap:
        return -cap
    return x


cdef inline double _lse(double acc, double v) noexcept nogil:
    # log(exp(acc) + exp(v)), acc may be -inf on the first call
    cdef double hi, lo
    if acc >= v:
        hi = acc
        lo = v
    else:
        hi = v
        lo = acc
    if lo == -INFINITY:
        return hi
    return hi + log1p(exp(lo - hi))


cdef double _generic(int p, const long long* rows, int i, const double* L,
                     const unsigned char* u, bint maxlog) noexcept nogil:
    cdef long long fixed = 0, w, w1
    cdef int j, t, c, nfree = p - i - 1
    cdef long long m
    cdef double s0, s1, acc0 = -INFINITY, acc1 = -INFINITY
    for j in range(i):
        if u[j]:
            fixed ^= rows[j]
    for m in range(1LL << nfree):
        w = fixed
        for t in range(nfree):
            if (m >> t) & 1:
                w ^= rows[i + 1 + t]
        w1 = w ^ rows[i]
        s0 = 0.0
        s1 = 0.0
        for c in range(p):
            if not (w >> c) & 1:
                s0 += L[c]
            if not (w1 >> c) & 1:
                s1 += L[c]
        if maxlog:
            if s0 > acc0:
                acc0 = s0
            if s1 > acc1:
                acc1 = s1
        else:
            acc0 = _lse(acc0, s0)
            acc1 = _lse(acc1, s1)
    return acc0 - acc1


cdef double _kernel_llr(int rule, int p, const long long* rows, int i, const double* L,
                        const unsigned char* u, bint minsum) noexcept nogil:
    if rule == 2:
        if i == 0:
            return _bp(L[0], L[1], minsum)
        return _sg(u[0]) * L[0] + L[1]
    if rule == 3:
        if i == 0:
            return _bp(_bp(L[0], L[1], minsum), L[2], minsum)
        if i == 1:
            return _sg(u[0]) * L[0] + _bp(L[1], L[2], minsum)
        return _sg(u[0]) * L[1] + _sg(u[0] ^ u[1]) * L[2]
    if rule == 5:
        if i == 0:
            return _bp(_bp(L[1], L[2], minsum), L[4], minsum)
        if i == 1:
            return _bp(_bp(L[0], L[3], minsum), _sg(u[0]) * L[2] + _bp(L[1], L[4], minsum), minsum)
        if i == 2:
            return _sg(u[1]) * _bp(L[0], L[1], minsum) + _bp(L[3], L[4], minsum)
        if i == 3:
            return (_sg(u[0] ^ u[1] ^ u[2]) * L[0] + _sg(u[0]) * L[1]
                    + _bp(L[2], _sg(u[2]) * L[3] + L[4], minsum))
        return _sg(u[0] ^ u[3]) * L[2] + _sg(u[0] ^ u[2]) * L[3] + _sg(u[0]) * L[4]
    return _generic(p, rows, i, L, u, minsum)


cdef inline double _penalty(double lam, int u, bint approx) noexcept nogil:
    cdef double x
    if approx:
        if (lam < 0) != (u == 1):
            return fabs(lam)
        return 0.0
    x = -_sg(u) * lam
    if x > 0:
        return x + log1p(exp(-x))
    return log1p(exp(x))


cdef struct Plan:
    int s
    int N
    int sizes[SMAX]
    int rules[SMAX]
    long long M[SMAX + 1]
    long long loff[SMAX + 1]
    long long poff[SMAX]
    long long rows[SMAX][PMAX]


cdef Plan _make(object plan) except *:
    cdef Plan P
    cdef int d, a
    sizes = plan["sizes"]
    P.s = len(sizes)
    if P.s > SMAX:
        raise ValueError("too many kernel stages")
    P.N = int(plan["M"][0])
    for d in range(P.s):
        P.sizes[d] = int(sizes[d])
        if P.sizes[d] > PMAX:
            raise ValueError("kernel too large for the compiled core")
        P.rules[d] = int(plan["rules"][d])
        P.poff[d] = int(plan["poff"][d])
        for a in range(P.sizes[d]):
            P.rows[d][a] = int(plan["rows"][d][a])
    for d in range(P.s + 1):
        P.M[d] = int(plan["M"][d])
        P.loff[d] = int(plan["loff"][d])
    return P


cdef void _update(Plan* P, double* llr, const unsigned char* ps, const int* digit,
                  int dstart, bint minsum, double cap) noexcept nogil:
    """Recompute node LLRs for depths ``dstart..s`` along the current digits."""
    cdef int d, c, j, p, a
    cdef long long b, Md
    cdef double Lb[PMAX]
    cdef unsigned char ub[PMAX]
    cdef const double* src
    cdef const unsigned char* pss
    for d in range(dstart, P.s + 1):
        p = P.sizes[d - 1]
        a = digit[d]
        Md = P.M[d]
        src = llr + P.loff[d - 1]
        pss = ps + P.poff[d - 1]
        for b in range(Md):
            for c in range(p):
                Lb[c] = src[c * Md + b]
            for j in range(a):
                ub[j] = pss[j * Md + b]
            llr[P.loff[d] + b] = _clip(_kernel_llr(P.rules[d - 1], p, P.rows[d - 1], a, Lb, ub, minsum), cap)


cdef void _commit(Plan* P, unsigned char* ps, const int* digit, int u) noexcept nogil:
    """Store decision ``u`` and fold every finished node into its parent."""
    cdef int d = P.s, p, a, c
    cdef long long b, Md, acc
    cdef unsigned char* node
    cdef unsigned char* dst
    ps[P.poff[P.s - 1] + digit[P.s]] = <unsigned char>u
    while d >= 2 and digit[d] == P.sizes[d - 1] - 1:
        # node at depth d-1 is complete; it is child digit[d-1] of depth d-2
        p = P.sizes[d - 1]
        Md = P.M[d]
        node = ps + P.poff[d - 1]
        dst = ps + P.poff[d - 2] + digit[d - 1] * P.M[d - 1]
        for b in range(Md):
            acc = 0
            for a in range(p):
                if node[a * Md + b]:
                    acc ^= P.rows[d - 1][a]
            for c in range(p):
                dst[c * Md + b] = (acc >> c) & 1
        d -= 1


cdef int _advance(Plan* P, int* digit) noexcept nogil:
    """Increment the mixed-radix counter; return the shallowest changed depth."""
    cdef int d = P.s
    while d >= 1:
        digit[d] += 1
        if digit[d] < P.sizes[d - 1]:
            return d
        digit[d] = 0
        d -= 1
    return 1


def sc_core(plan, double[::1] chan, const unsigned char[::1] frozen, bint minsum, double cap):
    """Successive cancellation; returns decisions and the LLR of every decision."""
    cdef Plan P = _make(plan)
    cdef int N = P.N, i, u, dstart = 1, d
    if chan.shape[0] != N or frozen.shape[0] != N:
        raise ValueError("length mismatch")
    cdef double[::1] llr = np.zeros(P.loff[P.s] + 1)
    cdef unsigned char[::1] ps = np.zeros(max(int(plan["ptotal"]), 1), dtype=np.uint8)
    cdef unsigned char[::1] uhat = np.zeros(N, dtype=np.uint8)
    cdef double[::1] lam = np.zeros(N)
    cdef int digit[SMAX + 1]
    for d in range(P.s + 1):
        digit[d] = 0
    with nogil:
        for i in range(N):
            llr[i] = _clip(chan[i], cap)
        for i in range(N):
            _update(&P, &llr[0], &ps[0], digit, dstart, minsum, cap)
            lam[i] = llr[P.loff[P.s]]
            u = 0 if frozen[i] else (1 if lam[i] < 0 else 0)
            uhat[i] = u
            _commit(&P, &ps[0], digit, u)
            dstart = _advance(&P, digit)
    return np.asarray(uhat), np.asarray(lam)


def scl_core(plan, double[::1] chan, const unsigned char[::1] frozen, int list_size,
             bint minsum, bint approx, double cap):
    """List decoding; returns ``(u_hats, metrics)`` of the survivors, best metric first."""
    cdef Plan P = _make(plan)
    cdef int N = P.N, Lmax = list_size, i, d, k, l, n = 1, ncand, keep, bit, t, cur = 0
    if list_size < 1:
        raise ValueError("list size must be at least 1")
    if chan.shape[0] != N or frozen.shape[0] != N:
        raise ValueError("length mismatch")
    cdef long long nl = P.loff[P.s] + 1, npz = max(int(plan["ptotal"]), 1)
    # two banks of path states; survivors are copied from bank cur into bank 1 - cur
    cdef double[:, :, ::1] llr = np.zeros((2, Lmax, nl))
    cdef unsigned char[:, :, ::1] ps = np.zeros((2, Lmax, npz), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] uh = np.zeros((2, Lmax, N), dtype=np.uint8)
    cdef double[::1] pm = np.zeros(Lmax)
    cdef double[::1] cm = np.zeros(2 * Lmax)
    cdef int[::1] corder = np.zeros(2 * Lmax, dtype=np.int32)
    cdef int[::1] newbit = np.zeros(Lmax, dtype=np.int32)
    cdef int dstart = 1
    cdef double lam, v
    cdef int digit[SMAX + 1]
    for d in range(P.s + 1):
        digit[d] = 0
    with nogil:
        for i in range(N):
            llr[0, 0, i] = _clip(chan[i], cap)
        for i in range(N):
            for l in range(n):
                _update(&P, &llr[cur, l, 0], &ps[cur, l, 0], digit, dstart, minsum, cap)
            if frozen[i]:
                for l in range(n):
                    pm[l] += _penalty(llr[cur, l, P.loff[P.s]], 0, approx)
                    uh[cur, l, i] = 0
                    _commit(&P, &ps[cur, l, 0], digit, 0)
            else:
                # candidate 2l is the hard decision of path l, 2l+1 the other value
                ncand = 2 * n
                for l in range(n):
                    lam = llr[cur, l, P.loff[P.s]]
                    bit = 1 if lam < 0 else 0
                    cm[2 * l] = pm[l] + _penalty(lam, bit, approx)
                    cm[2 * l + 1] = pm[l] + _penalty(lam, 1 - bit, approx)
                # stable insertion sort by metric
                for k in range(ncand):
                    corder[k] = k
                for k in range(1, ncand):
                    t = corder[k]
                    v = cm[t]
                    l = k - 1
                    while l >= 0 and cm[corder[l]] > v:
                        corder[l + 1] = corder[l]
                        l -= 1
                    corder[l + 1] = t
                keep = ncand if ncand < Lmax else Lmax
                for k in range(keep):
                    t = corder[k]
                    l = t // 2
                    newbit[k] = (1 if llr[cur, l, P.loff[P.s]] < 0 else 0) ^ (t & 1)
                    llr[1 - cur, k, :] = llr[cur, l, :]
                    ps[1 - cur, k, :] = ps[cur, l, :]
                    uh[1 - cur, k, :] = uh[cur, l, :]
                for k in range(keep):
                    pm[k] = cm[corder[k]]
                    uh[1 - cur, k, i] = newbit[k]
                    _commit(&P, &ps[1 - cur, k, 0], digit, newbit[k])
                n = keep
                cur = 1 - cur
            dstart = _advance(&P, digit)
    # frozen steps can reorder metrics; report them ascending
    order = np.argsort(np.asarray(pm[:n]), kind="stable")
    return np.asarray(uh[cur, :n])[order].copy(), np.asarray(pm[:n])[order].copy()
