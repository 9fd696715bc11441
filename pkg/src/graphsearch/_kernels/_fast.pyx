# cython: language_level=3
"""Compiled kernels; semantics mirror `pyimpl` exactly (see its docstrings).

Bitmask routines require n <= 63; the min-ratio-cut subset-sum caps total
weight (same guard as the fallback).  `tests/test_kernels.py` asserts
backend equivalence.
"""

import numpy as np

cimport numpy as cnp
from libc.stdlib cimport free, malloc
from libc.string cimport memset

cnp.import_array()

BACKEND = "cython"

INF = 1 << 62
cdef long long C_INF = <long long> (1 << 62)
_WEIGHT_SUM_CAP = 100_000


cdef inline int _ctz(unsigned long long x) nogil:
    cdef int i = 0
    while not (x & 1):
        x >>= 1
        i += 1
    return i


cdef int _components_c(long long* adj, int n, unsigned long long mask,
                       unsigned long long* out) nogil:
    cdef int cnt = 0
    cdef int v
    cdef unsigned long long rest = mask, comp, frontier, grow
    while rest:
        comp = rest & (~rest + 1)
        frontier = comp
        while frontier:
            v = _ctz(frontier)
            frontier &= frontier - 1
            grow = (<unsigned long long> adj[v]) & rest & ~comp
            comp |= grow
            frontier |= grow
        out[cnt] = comp
        cnt += 1
        rest &= ~comp
    return cnt


cdef long long* _to_arr(list values) except NULL:
    cdef int n = len(values)
    cdef long long* arr = <long long*> malloc(n * sizeof(long long))
    if arr == NULL:
        raise MemoryError()
    cdef int i
    for i in range(n):
        arr[i] = values[i]
    return arr


def mask_components(adj_masks, mask):
    """See pyimpl.mask_components."""
    cdef long long* adj = _to_arr(list(adj_masks))
    cdef unsigned long long comps[64]
    cdef int cnt, i
    try:
        cnt = _components_c(adj, len(adj_masks), <unsigned long long> mask, comps)
        return [int(comps[i]) for i in range(cnt)]
    finally:
        free(adj)


def subset_dp_average(adj_masks, wc):
    """See pyimpl.subset_dp_average."""
    cdef int n = len(adj_masks)
    cdef unsigned long long full = (<unsigned long long> 1 << n) - 1
    cdef cnp.ndarray[cnp.int64_t, ndim=1] opt_arr = np.full(full + 1, INF, dtype=np.int64)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] root_arr = np.full(full + 1, -1, dtype=np.int8)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] wc_arr = np.asarray(wc, dtype=np.int64)
    cdef long long[::1] opt = opt_arr
    cdef signed char[::1] root = root_arr
    cdef long long[:, ::1] wcv = wc_arr
    cdef long long* adj = _to_arr(list(adj_masks))
    cdef unsigned long long mask, comp, frontier, grow, rest, m, x
    cdef unsigned long long comps[64]
    cdef int v, cnt, i, xv
    cdef long long best, total
    opt[0] = 0
    try:
        with nogil:
            for mask in range(1, full + 1):
                comp = mask & (~mask + 1)
                frontier = comp
                while frontier:
                    v = _ctz(frontier)
                    frontier &= frontier - 1
                    grow = (<unsigned long long> adj[v]) & mask & ~comp
                    comp |= grow
                    frontier |= grow
                if comp != mask:
                    continue
                best = C_INF
                m = mask
                while m:
                    v = _ctz(m)
                    m &= m - 1
                    total = 0
                    x = mask
                    while x:
                        xv = _ctz(x)
                        x &= x - 1
                        total += wcv[v, xv]
                    if total >= best:
                        continue
                    cnt = _components_c(adj, n, mask ^ (<unsigned long long> 1 << v), comps)
                    for i in range(cnt):
                        total += opt[comps[i]]
                        if total >= best:
                            break
                    if total < best:
                        best = total
                        root[mask] = <signed char> v
                opt[mask] = best
    finally:
        free(adj)
    return opt_arr, root_arr


cdef long long _worst_rec(long long* adj, long long* cost, int n,
                          unsigned long long mask, long long* acc,
                          long long ub) nogil:
    cdef long long best = ub
    cdef unsigned long long m = mask, rest, x
    cdef unsigned long long comps[64]
    cdef long long acc2[64]
    cdef long long final_v, cur, sub
    cdef int v, xv, i, cnt
    while m:
        v = _ctz(m)
        m &= m - 1
        final_v = acc[v] + cost[v * n + v]
        if final_v >= best:
            continue
        rest = mask ^ (<unsigned long long> 1 << v)
        for i in range(n):
            acc2[i] = acc[i]
        x = rest
        while x:
            xv = _ctz(x)
            x &= x - 1
            acc2[xv] = acc[xv] + cost[v * n + xv]
        cur = final_v
        cnt = _components_c(adj, n, rest, comps)
        for i in range(cnt):
            sub = _worst_rec(adj, cost, n, comps[i], acc2, best)
            if sub > cur:
                cur = sub
            if cur >= best:
                break
        if cur < best:
            best = cur
    return best


def worst_enum(adj_masks, costmat, mask, acc, ub):
    """See pyimpl.worst_enum."""
    cdef int n = len(adj_masks)
    cdef long long* adj = _to_arr(list(adj_masks))
    cdef long long* cost = <long long*> malloc(n * n * sizeof(long long))
    cdef long long acc_c[64]
    cdef int v, x
    cdef long long result
    if cost == NULL:
        free(adj)
        raise MemoryError()
    try:
        for v in range(n):
            for x in range(n):
                cost[v * n + x] = costmat[v][x]
        for v in range(n):
            acc_c[v] = acc[v]
        result = _worst_rec(adj, cost, n, <unsigned long long> mask, acc_c,
                            <long long> ub)
        return int(result)
    finally:
        free(adj)
        free(cost)


def alpha_separator(adj_masks, costs, weights, bound):
    """See pyimpl.alpha_separator."""
    cdef int n = len(adj_masks)
    cdef unsigned long long full = (<unsigned long long> 1 << n) - 1
    cdef long long* adj = _to_arr(list(adj_masks))
    cdef long long* cost = _to_arr(list(costs))
    cdef long long* weight = _to_arr(list(weights))
    cdef long long best_cost = C_INF, c, w
    cdef long long best_mask = -1
    cdef long long kbound = bound
    cdef unsigned long long smask, m, x
    cdef unsigned long long comps[64]
    cdef int v, i, cnt
    cdef bint ok
    try:
        with nogil:
            for smask in range(full + 1):
                c = 0
                m = smask
                while m:
                    v = _ctz(m)
                    m &= m - 1
                    c += cost[v]
                if c >= best_cost:
                    continue
                ok = True
                cnt = _components_c(adj, n, full ^ smask, comps)
                for i in range(cnt):
                    w = 0
                    x = comps[i]
                    while x:
                        v = _ctz(x)
                        x &= x - 1
                        w += weight[v]
                    if w > kbound:
                        ok = False
                        break
                if ok:
                    best_cost = c
                    best_mask = <long long> smask
    finally:
        free(adj)
        free(cost)
        free(weight)
    return int(best_cost), int(best_mask)


def min_ratio_cut(adj_masks, costs, weights):
    """See pyimpl.min_ratio_cut."""
    cdef int n = len(adj_masks)
    total_w_py = sum(weights)
    if total_w_py > _WEIGHT_SUM_CAP:
        raise ValueError(
            f"min-ratio-cut subset sums need total weight <= {_WEIGHT_SUM_CAP}"
        )
    cdef unsigned long long full = (<unsigned long long> 1 << n) - 1
    cdef long long* adj = _to_arr(list(adj_masks))
    cdef long long* cost = _to_arr(list(costs))
    cdef long long* weight = _to_arr(list(weights))
    cdef long long total_w = total_w_py
    cdef int words = <int> (total_w // 64 + 2)
    cdef unsigned long long* reach = <unsigned long long*> malloc(words * sizeof(unsigned long long))
    cdef unsigned long long* shifted = <unsigned long long*> malloc(words * sizeof(unsigned long long))
    cdef bint have = False
    cdef long long best_num = 0, best_den = 0, best_a = 0
    cdef unsigned long long best_smask = 0
    cdef unsigned long long smask, m, x, rest
    cdef unsigned long long comps[64]
    cdef long long c_s, w_s, remaining, cw, prod, best_prod, a, besta
    cdef int v, i, cnt, wshift, bshift, j
    if reach == NULL or shifted == NULL:
        free(adj); free(cost); free(weight)
        if reach != NULL:
            free(reach)
        if shifted != NULL:
            free(shifted)
        raise MemoryError()
    try:
        with nogil:
            for smask in range(full + 1):
                c_s = 0
                w_s = 0
                m = smask
                while m:
                    v = _ctz(m)
                    m &= m - 1
                    c_s += cost[v]
                    w_s += weight[v]
                rest = full ^ smask
                remaining = total_w - w_s
                memset(reach, 0, words * sizeof(unsigned long long))
                reach[0] = 1
                cnt = _components_c(adj, n, rest, comps)
                for i in range(cnt):
                    cw = 0
                    x = comps[i]
                    while x:
                        v = _ctz(x)
                        x &= x - 1
                        cw += weight[v]
                    # reach |= reach << cw
                    wshift = <int> (cw >> 6)
                    bshift = <int> (cw & 63)
                    for j in range(words - 1, -1, -1):
                        shifted[j] = 0
                        if j - wshift >= 0:
                            shifted[j] = reach[j - wshift] << bshift
                            if bshift and j - wshift - 1 >= 0:
                                shifted[j] |= reach[j - wshift - 1] >> (64 - bshift)
                    for j in range(words):
                        reach[j] |= shifted[j]
                best_prod = -1
                besta = -1
                for a in range(remaining + 1):
                    if (reach[a >> 6] >> (a & 63)) & 1:
                        prod = (w_s + a) * (w_s + remaining - a)
                        if prod > best_prod:
                            best_prod = prod
                            besta = a
                if best_prod <= 0:
                    continue
                if (not have) or c_s * best_den < best_num * best_prod:
                    have = True
                    best_num = c_s
                    best_den = best_prod
                    best_smask = smask
                    best_a = besta
    finally:
        free(adj)
        free(cost)
        free(weight)
        free(reach)
        free(shifted)
    if not have:
        return None
    # Rebuild one A-side achieving best_a, in min-vertex component order
    # (identical logic to the fallback, small enough to run in Python).
    comps_py = mask_components(adj_masks, int(full ^ best_smask))
    comp_w = []
    for comp in comps_py:
        cw_py = 0
        mm = comp
        while mm:
            low = mm & -mm
            cw_py += weights[low.bit_length() - 1]
            mm ^= low
        comp_w.append(cw_py)
    suffix = [1] * (len(comps_py) + 1)
    for i_py in range(len(comps_py) - 1, -1, -1):
        suffix[i_py] = suffix[i_py + 1] | (suffix[i_py + 1] << comp_w[i_py])
    a_mask = 0
    target = int(best_a)
    for i_py, comp in enumerate(comps_py):
        if comp_w[i_py] <= target and (suffix[i_py + 1] >> (target - comp_w[i_py])) & 1:
            a_mask |= comp
            target -= comp_w[i_py]
    rest_py = int(full ^ best_smask)
    return (
        int(best_num),
        int(best_den),
        int(best_smask),
        a_mask,
        rest_py ^ a_mask,
    )


def separator_dp(post_order, children, costs, weights, bound):
    """See pyimpl.separator_dp."""
    cdef int n = len(post_order)
    cdef long long k = bound
    cdef int kk = <int> k
    cdef cnp.ndarray[cnp.int64_t, ndim=1] c_in_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] c_out_arr = np.full((n, kk + 1), INF, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] c_best_arr = np.zeros(n, dtype=np.int64)
    cdef long long[::1] c_in = c_in_arr
    cdef long long[:, ::1] c_out = c_out_arr
    cdef long long[::1] c_best = c_best_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out_best_w_arr = np.full(n, -1, dtype=np.int64)
    cdef long long[::1] out_best_w = out_best_w_arr
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] mode_out_arr = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] mode_out = mode_out_arr
    # CSR layout of the children lists plus per-(vertex,position) code rows.
    cdef cnp.ndarray[cnp.int64_t, ndim=1] order_arr = np.asarray(post_order, dtype=np.int64)
    cdef long long[::1] order = order_arr
    child_flat: list = []
    child_off_py = [0] * (n + 1)
    for v_py in range(n):
        child_flat.extend(children[v_py])
        child_off_py[v_py + 1] = len(child_flat)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] child_arr = np.asarray(child_flat + [0], dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] child_off_arr = np.asarray(child_off_py, dtype=np.int64)
    cdef long long[::1] child = child_arr
    cdef long long[::1] child_off = child_off_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cost_arr = np.asarray(costs, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] weight_arr = np.asarray(weights, dtype=np.int64)
    cdef long long[::1] cost = cost_arr
    cdef long long[::1] weight = weight_arr
    cdef cnp.ndarray[cnp.int32_t, ndim=2] codes_arr = np.full(
        (max(1, len(child_flat)), kk + 1), -9, dtype=np.int32
    )
    cdef int[:, ::1] codes = codes_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] prefix_arr = np.full(kk + 1, INF, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] newrow_arr = np.full(kk + 1, INF, dtype=np.int64)
    cdef long long[::1] prefix = prefix_arr
    cdef long long[::1] newrow = newrow_arr
    cdef int oi, v, ci, c, w, j, d, pos0
    cdef long long wv, bestval, val, bv
    cdef int bestcode, bw

    with nogil:
        for oi in range(n):
            v = <int> order[oi]
            d = <int> (child_off[v + 1] - child_off[v])
            if d == 0:
                c_in[v] = cost[v]
                if weight[v] <= k:
                    c_out[v, <int> weight[v]] = 0
            else:
                c_in[v] = cost[v]
                for ci in range(d):
                    c = <int> child[child_off[v] + ci]
                    c_in[v] += c_best[c]
                for ci in range(d):
                    c = <int> child[child_off[v] + ci]
                    pos0 = <int> (child_off[v] + ci)
                    for w in range(kk + 1):
                        newrow[w] = C_INF
                    if ci == 0:
                        wv = weight[v]
                        if wv <= k:
                            if c_out[c, 0] <= c_in[c]:
                                newrow[<int> wv] = c_out[c, 0]
                                codes[pos0, <int> wv] = 0
                            else:
                                newrow[<int> wv] = c_in[c]
                                codes[pos0, <int> wv] = -2
                            for w in range(<int> wv + 1, kk + 1):
                                val = c_out[c, w - <int> wv]
                                if val < C_INF:
                                    newrow[w] = val
                                    codes[pos0, w] = w - <int> wv
                    else:
                        for w in range(kk + 1):
                            bestval = C_INF
                            bestcode = -9
                            for j in range(w + 1):
                                if prefix[w - j] < C_INF and c_out[c, j] < C_INF:
                                    val = prefix[w - j] + c_out[c, j]
                                    if val < bestval:
                                        bestval = val
                                        bestcode = j
                            if prefix[w] < C_INF and c_in[c] < C_INF:
                                val = prefix[w] + c_in[c]
                                if val < bestval:
                                    bestval = val
                                    bestcode = -2
                            newrow[w] = bestval
                            codes[pos0, w] = bestcode
                    for w in range(kk + 1):
                        prefix[w] = newrow[w]
                for w in range(kk + 1):
                    c_out[v, w] = prefix[w]
            bv = C_INF
            bw = -1
            for w in range(kk + 1):
                if c_out[v, w] < bv:
                    bv = c_out[v, w]
                    bw = w
            out_best_w[v] = bw
            if bv <= c_in[v]:
                mode_out[v] = 1
                c_best[v] = bv
            else:
                mode_out[v] = 0
                c_best[v] = c_in[v]

    root = int(order_arr[n - 1])
    sep = []
    stack = [(root, bool(mode_out_arr[root]),
              int(out_best_w_arr[root]) if mode_out_arr[root] else -1)]
    while stack:
        v_py, is_out, w_py = stack.pop()
        kids = children[v_py]
        if not is_out:
            sep.append(v_py)
            for cpy in kids:
                stack.append((cpy, bool(mode_out_arr[cpy]),
                              int(out_best_w_arr[cpy]) if mode_out_arr[cpy] else -1))
            continue
        if not kids:
            continue
        cur = w_py
        base = child_off_py[v_py]
        for i_py in range(len(kids) - 1, 0, -1):
            code = int(codes_arr[base + i_py, cur])
            if code == -2:
                stack.append((kids[i_py], False, -1))
            else:
                stack.append((kids[i_py], True, code))
                cur -= code
        code = int(codes_arr[base, cur])
        if code == -2:
            stack.append((kids[0], False, -1))
        else:
            stack.append((kids[0], True, code))
    return int(c_best_arr[root]), sorted(sep)


def schedule_dp(proc, wts, rej, deadline, shift):
    """See pyimpl.schedule_dp."""
    cdef int L = len(proc)
    cdef long long cap = 0
    cdef int i
    for i in range(L):
        if proc[i] <= deadline:
            cap += proc[i]
    if cap > deadline:
        cap = deadline
    cdef int capi = <int> cap
    cdef cnp.ndarray[cnp.int64_t, ndim=1] dp_arr = np.full(capi + 1, INF, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] nd_arr = np.full(capi + 1, INF, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] take_arr = np.zeros((max(1, L), capi + 1), dtype=np.uint8)
    cdef long long[::1] dp = dp_arr
    cdef long long[::1] nd = nd_arr
    cdef unsigned char[:, ::1] take = take_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] p_arr = np.asarray(proc, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] w_arr = np.asarray(wts, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] e_arr = np.asarray(rej, dtype=np.int64)
    cdef long long[::1] p = p_arr
    cdef long long[::1] w = w_arr
    cdef long long[::1] e = e_arr
    cdef int sh = shift
    cdef int total
    cdef long long best, val
    dp[0] = 0
    with nogil:
        for i in range(L):
            for total in range(capi + 1):
                best = C_INF
                if dp[total] < C_INF:
                    best = dp[total] + e[i]
                if p[i] <= total and dp[total - <int> p[i]] < C_INF:
                    val = dp[total - <int> p[i]] + w[i] * ((<long long> total) << sh)
                    if val < best:
                        best = val
                        take[i, total] = 1
                nd[total] = best
            for total in range(capi + 1):
                dp[total] = nd[total]
                nd[total] = C_INF
    best = C_INF
    cdef int best_total = 0
    for total in range(capi + 1):
        if dp_arr[total] < best:
            best = dp_arr[total]
            best_total = total
    mask = 0
    total_py = best_total
    for i in range(L - 1, -1, -1):
        if take_arr[i, total_py]:
            mask |= 1 << i
            total_py -= int(p_arr[i])
    return int(best), mask


cdef int _grid_bisect_left(long long[::1] g, int gl, long long value):
    cdef int lo = 0, hi = gl, mid
    while lo < hi:
        mid = (lo + hi) // 2
        if g[mid] < value:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef int _grid_bisect_right_minus1(long long[::1] g, int gl, long long value):
    cdef int lo = 0, hi = gl, mid
    while lo < hi:
        mid = (lo + hi) // 2
        if g[mid] <= value:
            lo = mid + 1
        else:
            hi = mid
    return lo - 1


cdef long long _gap_solve(int i, long long caps_code, dict memo,
                          long long[::1] g, int gl, long long[::1] pred,
                          long long[::1] cs, long long[::1] ws,
                          long long[::1] own, long long[::1] poff,
                          long long[::1] pdat):
    if i == 0:
        return 0
    key = ((<object> caps_code) << 16) | i
    hit = memo.get(key)
    if hit is not None:
        return hit
    cdef int idx = i - 1
    cdef long long c = cs[idx]
    cdef long long w = ws[idx]
    cdef long long best, val, capv, lo_val, down_code
    cdef int gi, gidx, capi, j
    if i == 1:
        best = own[idx]
        for gi in range(<int> poff[idx], <int> poff[idx + 1]):
            gidx = <int> pdat[gi]
            capi = <int> ((caps_code >> (12 * gidx)) & 0xFFF)
            capv = g[capi]
            lo_val = pred[gidx] + c
            if capv >= lo_val:
                j = _grid_bisect_left(g, gl, lo_val)
                val = w * g[j]
                if val < best:
                    best = val
    else:
        best = own[idx] + _gap_solve(i - 1, caps_code, memo, g, gl, pred, cs,
                                     ws, own, poff, pdat)
        for gi in range(<int> poff[idx], <int> poff[idx + 1]):
            gidx = <int> pdat[gi]
            capi = <int> ((caps_code >> (12 * gidx)) & 0xFFF)
            capv = g[capi]
            if capv >= pred[gidx] + c:
                j = _grid_bisect_right_minus1(g, gl, capv - c)
                down_code = (caps_code & ~((<long long> 0xFFF) << (12 * gidx))) | (
                    (<long long> j) << (12 * gidx)
                )
                val = w * capv + _gap_solve(i - 1, down_code, memo, g, gl,
                                            pred, cs, ws, own, poff, pdat)
                if val < best:
                    best = val
    memo[key] = best
    return best


def gap_dp(grid, pred_tau, init_caps, c_scaled, wts, owner, paths, trace=False):
    """See pyimpl.gap_dp."""
    cdef int L = len(c_scaled)
    cdef int k = len(init_caps)
    cdef int gl = len(grid)
    if gl > 4094 or k > 5:
        raise ValueError("gap DP limited to 4094 grid moments and 5 gaps")
    cdef cnp.ndarray[cnp.int64_t, ndim=1] grid_arr = np.asarray(grid, dtype=np.int64)
    cdef long long[::1] g = grid_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] pred_arr = np.asarray(pred_tau, dtype=np.int64)
    cdef long long[::1] pred = pred_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] c_arr = np.asarray(c_scaled, dtype=np.int64)
    cdef long long[::1] cs = c_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] w_arr = np.asarray(wts, dtype=np.int64)
    cdef long long[::1] ws = w_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] own_arr = np.asarray(owner, dtype=np.int64)
    cdef long long[::1] own = own_arr
    path_off_py = [0]
    path_flat = []
    for tup in paths:
        path_flat.extend(tup)
        path_off_py.append(len(path_flat))
    cdef cnp.ndarray[cnp.int64_t, ndim=1] poff_arr = np.asarray(path_off_py, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] pdat_arr = np.asarray(path_flat + [0], dtype=np.int64)
    cdef long long[::1] poff = poff_arr
    cdef long long[::1] pdat = pdat_arr
    memo = {}
    cdef long long caps0 = 0
    cdef int gi
    for gi in range(k):
        caps0 |= (<long long> init_caps[gi]) << (12 * gi)
    total = _gap_solve(L, caps0, memo, g, gl, pred, cs, ws, own, poff, pdat)
    if not trace:
        return int(total)
    assign = [0] * L
    cdef long long caps_code = caps0
    cdef int i, idx, gidx, capi, j
    cdef long long c, w, capv, want, val, down
    cdef bint found
    for i in range(L, 0, -1):
        want = _gap_solve(i, caps_code, memo, g, gl, pred, cs, ws, own, poff, pdat)
        idx = i - 1
        c = cs[idx]
        w = ws[idx]
        found = False
        if i == 1:
            if own[idx] == want:
                assign[idx] = 0
                found = True
            else:
                for gi in range(<int> poff[idx], <int> poff[idx + 1]):
                    gidx = <int> pdat[gi]
                    capi = <int> ((caps_code >> (12 * gidx)) & 0xFFF)
                    capv = g[capi]
                    if capv >= pred[gidx] + c:
                        j = _grid_bisect_left(g, gl, pred[gidx] + c)
                        if w * g[j] == want:
                            assign[idx] = gidx + 1
                            found = True
                            break
        else:
            if own[idx] + _gap_solve(i - 1, caps_code, memo, g, gl, pred, cs,
                                     ws, own, poff, pdat) == want:
                assign[idx] = 0
                found = True
            else:
                for gi in range(<int> poff[idx], <int> poff[idx + 1]):
                    gidx = <int> pdat[gi]
                    capi = <int> ((caps_code >> (12 * gidx)) & 0xFFF)
                    capv = g[capi]
                    if capv >= pred[gidx] + c:
                        j = _grid_bisect_right_minus1(g, gl, capv - c)
                        down = (caps_code & ~((<long long> 0xFFF) << (12 * gidx))) | (
                            (<long long> j) << (12 * gidx)
                        )
                        val = w * capv + _gap_solve(i - 1, down, memo, g, gl,
                                                    pred, cs, ws, own, poff, pdat)
                        if val == want:
                            assign[idx] = gidx + 1
                            caps_code = down
                            found = True
                            break
        if not found:
            raise AssertionError("gap placement traceback failed")
    return int(total), assign
