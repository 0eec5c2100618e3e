# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernel; same contract as _kernel_py."""

from libc.stdlib cimport malloc, free
cimport numpy as cnp
import numpy as np

ctypedef long long i64

cdef enum:
    ATOM = 0
    INZ = 1
    NOT = 2
    AND = 3
    OR = 4
    IMP = 5
    EX = 6
    ALL = 7

cdef struct Ctx:
    i64* nodes
    i64* terms
    i64* asg
    i64* active
    int nactive
    i64 N
    i64 K
    i64 W
    int variant


cdef inline i64 fmod_(i64 a, i64 m) nogil:
    cdef i64 r = a % m
    return r + m if r < 0 else r


cdef inline bint is_z(i64 c, i64 K, i64 W) nogil:
    return c >= W and c <= K * W and c % W == 0


cdef i64 apply_fn(int code, i64 c, Ctx* ctx) nogil:
    cdef i64 K = ctx.K, W = ctx.W, n1 = ctx.N + 1, k, i, j
    if is_z(c, K, W):
        k = c / W - 1
        if code == 0:
            return (fmod_(k + 1, K) + 1) * W
        if code == 1:
            return (fmod_(k - 1, K) + 1) * W
        if code == 2:
            return c
        if code == 3:
            i = k / n1
            j = k % n1
            k = fmod_(i - 1, n1) * n1 + j
            if ctx.variant:
                k = fmod_(k - 1, K)
            return (k + 1) * W
        if ctx.variant:
            k = fmod_(k + 1, K)
        i = k / n1
        j = k % n1
        k = fmod_(i + 1, n1) * n1 + j
        return (k + 1) * W
    if code == 2:
        if c < W or c > K * W:
            return W
        return (c / W + 1) * W
    return c


cdef i64 eval_term(i64 off, Ctx* ctx) nogil:
    cdef i64* t = ctx.terms
    cdef i64 v
    cdef i64 n, idx
    if t[off] == 0:
        v = ctx.asg[t[off + 1]]
    else:
        v = t[off + 1]
    n = t[off + 2]
    for idx in range(n):
        v = apply_fn(<int>t[off + 3 + idx], v, ctx)
    return v


cdef inline bint cmp_(i64 op, i64 a, i64 b) nogil:
    if op == 0:
        return a < b
    if op == 1:
        return a > b
    if op == 2:
        return a == b
    if op == 3:
        return a <= b
    if op == 4:
        return a >= b
    return a != b


cdef inline i64 gap_of(i64 c, i64 K, i64 W) nogil:
    if c < W:
        return 0
    if c > K * W:
        return K
    return c / W


cdef inline i64 cand_bound(Ctx* ctx) nogil:
    # two per empty gap, and a gap with m parameter fillers holds 2m + 3
    return 2 * ctx.K + 4 + 3 * ctx.nactive


cdef int gen_candidates(Ctx* ctx, i64* out) nogil:
    """Fill out with representative coordinates; returns the count."""
    cdef i64 K = ctx.K, W = ctx.W
    cdef int nf = 0, i, j, fi = 0, n = 0
    cdef i64 c, tmp, gid, lo, hi, first, last
    cdef i64* fills = <i64*>malloc((ctx.nactive + 1) * sizeof(i64))
    for i in range(ctx.nactive):
        c = ctx.asg[ctx.active[i]]
        if not is_z(c, K, W):
            fills[nf] = c
            nf += 1
    # insertion sort and dedupe
    for i in range(1, nf):
        tmp = fills[i]
        j = i - 1
        while j >= 0 and fills[j] > tmp:
            fills[j + 1] = fills[j]
            j -= 1
        fills[j + 1] = tmp
    j = 0
    for i in range(nf):
        if j == 0 or fills[j - 1] != fills[i]:
            fills[j] = fills[i]
            j += 1
    nf = j
    gid = 0
    while gid <= K:
        lo = gid * W
        hi = (gid + 1) * W
        if fi < nf and gap_of(fills[fi], K, W) == gid:
            first = fills[fi]
            if gid == 0:
                out[n] = first - W
            else:
                out[n] = (lo + first) >> 1
            n += 1
            last = first
            out[n] = first
            n += 1
            fi += 1
            while fi < nf and gap_of(fills[fi], K, W) == gid:
                out[n] = (last + fills[fi]) >> 1
                n += 1
                last = fills[fi]
                out[n] = last
                n += 1
                fi += 1
            if gid == K:
                out[n] = last + W
            else:
                out[n] = (last + hi) >> 1
            n += 1
        else:
            out[n] = lo + (W >> 1)
            n += 1
        if gid < K:
            out[n] = hi
            n += 1
        gid += 1
    free(fills)
    return n


cdef bint eval_node(i64 off, Ctx* ctx) nogil:
    cdef i64* nd = ctx.nodes
    cdef i64 op = nd[off]
    cdef i64 i, cnt, slot, body
    cdef int ncand
    cdef bint want, r
    cdef i64* cands
    if op == ATOM:
        return cmp_(nd[off + 1], eval_term(nd[off + 2], ctx), eval_term(nd[off + 3], ctx))
    if op == INZ:
        return is_z(eval_term(nd[off + 1], ctx), ctx.K, ctx.W)
    if op == NOT:
        return not eval_node(nd[off + 1], ctx)
    if op == AND:
        cnt = nd[off + 1]
        for i in range(cnt):
            if not eval_node(nd[off + 2 + i], ctx):
                return False
        return True
    if op == OR:
        cnt = nd[off + 1]
        for i in range(cnt):
            if eval_node(nd[off + 2 + i], ctx):
                return True
        return False
    if op == IMP:
        return (not eval_node(nd[off + 1], ctx)) or eval_node(nd[off + 2], ctx)
    slot = nd[off + 1]
    body = nd[off + 2]
    want = op == EX
    cands = <i64*>malloc(cand_bound(ctx) * sizeof(i64))
    ncand = gen_candidates(ctx, cands)
    ctx.active[ctx.nactive] = slot
    ctx.nactive += 1
    r = not want
    for i in range(ncand):
        ctx.asg[slot] = cands[i]
        if eval_node(body, ctx) == want:
            r = want
            break
    ctx.nactive -= 1
    free(cands)
    return r


def candidates(asg, active, K, W):
    cdef Ctx ctx
    cdef cnp.ndarray[cnp.int64_t, ndim=1] a = np.ascontiguousarray(asg, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] act = np.ascontiguousarray(list(active) + [0], dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(2 * K + 4 + 3 * len(active), dtype=np.int64)
    ctx.asg = <i64*>a.data
    ctx.active = <i64*>act.data
    ctx.nactive = len(active)
    ctx.K = K
    ctx.W = W
    cdef int n = gen_candidates(&ctx, <i64*>out.data)
    return [int(v) for v in out[:n]]


def eval_formula(nodes, terms, root, asg, active, params):
    cdef Ctx ctx
    cdef cnp.ndarray[cnp.int64_t, ndim=1] nd = np.ascontiguousarray(nodes, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] tm = np.ascontiguousarray(terms, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] a = np.array(list(asg) + [0], dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] act = np.zeros(len(a) + len(active) + len(nodes) + 1, dtype=np.int64)
    for i, s in enumerate(active):
        act[i] = s
    ctx.nodes = <i64*>nd.data
    ctx.terms = <i64*>tm.data
    ctx.asg = <i64*>a.data
    ctx.active = <i64*>act.data
    ctx.nactive = len(active)
    ctx.N, ctx.K, ctx.W, ctx.variant = params
    cdef i64 r = root
    with nogil:
        res = eval_node(r, &ctx)
    return bool(res)


cdef bint diff_rec(int level, int nfree, i64* free_slots, Ctx* ca, Ctx* cb,
                   i64 ra, i64 rb, i64* count) nogil:
    cdef int i, ncand
    cdef i64 slot
    cdef bint bad = False
    cdef i64* cands
    if level == nfree:
        count[0] += 1
        return eval_node(ra, ca) != eval_node(rb, cb)
    slot = free_slots[level]
    cands = <i64*>malloc(cand_bound(ca) * sizeof(i64))
    ncand = gen_candidates(ca, cands)
    for i in range(ncand):
        ca.asg[slot] = cands[i]
        ca.active[ca.nactive] = slot
        ca.nactive += 1
        cb.nactive = ca.nactive
        bad = diff_rec(level + 1, nfree, free_slots, ca, cb, ra, rb, count)
        ca.nactive -= 1
        cb.nactive = ca.nactive
        if bad:
            break
    free(cands)
    return bad


def difftest(code_a, code_b, nslots, free_slots, params):
    cdef Ctx ca, cb
    cdef cnp.ndarray[cnp.int64_t, ndim=1] na = np.ascontiguousarray(code_a[0], dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ta = np.ascontiguousarray(code_a[1], dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] nb = np.ascontiguousarray(code_b[0], dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] tb = np.ascontiguousarray(code_b[1], dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] a = np.zeros(max(nslots, 1), dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] act = np.zeros(max(nslots, 1) + len(code_a[0]) + len(code_b[0]) + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] fs = np.array(list(free_slots) + [0], dtype=np.int64)
    cdef i64 count = 0
    ca.nodes = <i64*>na.data
    ca.terms = <i64*>ta.data
    cb.nodes = <i64*>nb.data
    cb.terms = <i64*>tb.data
    ca.asg = cb.asg = <i64*>a.data
    ca.active = cb.active = <i64*>act.data
    ca.nactive = cb.nactive = 0
    ca.N, ca.K, ca.W, ca.variant = params
    cb.N, cb.K, cb.W, cb.variant = params
    cdef int nfree = len(free_slots)
    cdef i64 ra = code_a[2], rb = code_b[2]
    with nogil:
        bad = diff_rec(0, nfree, <i64*>fs.data, &ca, &cb, ra, rb, &count)
    return int(count), ([int(v) for v in a] if bad else None)
