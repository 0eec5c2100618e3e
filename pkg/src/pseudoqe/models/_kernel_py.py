"""Pure-Python evaluation kernel over integer point coordinates.

Mirror of the compiled kernel; both must return identical results. A model is
described by (N, K, W, variant) with variant 0 = column shift, 1 = shifted
column shift. Z point k sits at (k+1)*W; everything else is a filler.
"""

ATOM, INZ, NOT, AND, OR, IMP, EX, ALL = range(8)


class _Ctx:
    __slots__ = ("nodes", "terms", "asg", "active", "N", "K", "W", "variant")

    def __init__(self, nodes, terms, asg, active, params):
        self.nodes = nodes
        self.terms = terms
        self.asg = asg
        self.active = active
        self.N, self.K, self.W, self.variant = params


def _is_z(c, K, W):
    return W <= c <= K * W and c % W == 0


def _fn(code, c, ctx):
    K, W, N = ctx.K, ctx.W, ctx.N
    if _is_z(c, K, W):
        k = c // W - 1
        if code == 0:
            return ((k + 1) % K + 1) * W
        if code == 1:
            return ((k - 1) % K + 1) * W
        if code == 2:
            return c
        n1 = N + 1
        if code == 3:
            i, j = divmod(k, n1)
            k = ((i - 1) % n1) * n1 + j
            if ctx.variant:
                k = (k - 1) % K
            return (k + 1) * W
        if ctx.variant:
            k = (k + 1) % K
        i, j = divmod(k, n1)
        k = ((i + 1) % n1) * n1 + j
        return (k + 1) * W
    if code == 2:
        if c < W or c > K * W:
            return W
        return (c // W + 1) * W
    return c


def _term(off, ctx):
    t = ctx.terms
    v = ctx.asg[t[off + 1]] if t[off] == 0 else t[off + 1]
    for i in range(t[off + 2]):
        v = _fn(t[off + 3 + i], v, ctx)
    return v


def _cmp(op, a, b):
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


def candidates(asg, active, K, W):
    """Representative coordinates given the currently assigned slots."""
    fills = sorted({asg[s] for s in active if not _is_z(asg[s], K, W)})
    out = []
    fi, nf = 0, len(fills)
    for gid in range(K + 1):
        vals = []
        while fi < nf:
            c = fills[fi]
            g = 0 if c < W else (K if c > K * W else c // W)
            if g != gid:
                break
            vals.append(c)
            fi += 1
        lo, hi = gid * W, (gid + 1) * W
        if not vals:
            out.append(lo + (W >> 1))
        else:
            out.append(vals[0] - W if gid == 0 else (lo + vals[0]) >> 1)
            for a, b in zip(vals, vals[1:]):
                out.append(a)
                out.append((a + b) >> 1)
            out.append(vals[-1])
            out.append(vals[-1] + W if gid == K else (vals[-1] + hi) >> 1)
        if gid < K:
            out.append(hi)
    return out


def _eval(off, ctx):
    nd = ctx.nodes
    op = nd[off]
    if op == ATOM:
        return _cmp(nd[off + 1], _term(nd[off + 2], ctx), _term(nd[off + 3], ctx))
    if op == INZ:
        return _is_z(_term(nd[off + 1], ctx), ctx.K, ctx.W)
    if op == NOT:
        return not _eval(nd[off + 1], ctx)
    if op == AND:
        for i in range(nd[off + 1]):
            if not _eval(nd[off + 2 + i], ctx):
                return False
        return True
    if op == OR:
        for i in range(nd[off + 1]):
            if _eval(nd[off + 2 + i], ctx):
                return True
        return False
    if op == IMP:
        return (not _eval(nd[off + 1], ctx)) or _eval(nd[off + 2], ctx)
    slot, body = nd[off + 1], nd[off + 2]
    want = op == EX
    cands = candidates(ctx.asg, ctx.active, ctx.K, ctx.W)
    ctx.active.append(slot)
    try:
        for c in cands:
            ctx.asg[slot] = c
            if _eval(body, ctx) == want:
                return want
        return not want
    finally:
        ctx.active.pop()


def eval_formula(nodes, terms, root, asg, active, params):
    ctx = _Ctx(list(map(int, nodes)), list(map(int, terms)), list(map(int, asg)), list(active), params)
    return bool(_eval(int(root), ctx))


def difftest(code_a, code_b, nslots, free_slots, params):
    """Compare two formulas over every representative assignment of the free slots.

    Returns (assignments checked, first mismatching slot vector or None).
    """
    ca = _Ctx(list(map(int, code_a[0])), list(map(int, code_a[1])), [0] * max(nslots, 1), [], params)
    cb = _Ctx(list(map(int, code_b[0])), list(map(int, code_b[1])), ca.asg, ca.active, params)
    ra, rb = int(code_a[2]), int(code_b[2])
    free_slots = list(free_slots)
    count = 0

    def rec(level):
        nonlocal count
        if level == len(free_slots):
            count += 1
            return _eval(ra, ca) != _eval(rb, cb)
        slot = free_slots[level]
        for c in candidates(ca.asg, ca.active, ca.K, ca.W):
            ca.asg[slot] = c
            ca.active.append(slot)
            bad = rec(level + 1)
            ca.active.pop()
            if bad:
                return True
        return False

    bad = rec(0)
    return count, (list(ca.asg) if bad else None)
