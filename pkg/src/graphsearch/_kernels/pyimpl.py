"""Pure-Python kernel implementations (reference semantics for `_fast`)."""

from __future__ import annotations

from bisect import bisect_left, bisect_right

BACKEND = "python"

INF = 1 << 62

WEIGHT_SUM_CAP = 100_000


def mask_components(adj_masks, mask):
    """Connected components of the vertex set `mask`, as bitmasks.

    Ordered by lowest set bit, which coincides with min-vertex order.
    """
    comps = []
    rest = mask
    while rest:
        comp = rest & -rest
        frontier = comp
        while frontier:
            v = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            grow = adj_masks[v] & rest & ~comp
            comp |= grow
            frontier |= grow
        comps.append(comp)
        rest &= ~comp
    return comps


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# ---------------------------------------------------------------------------
# Exact average-case optimum over connected vertex subsets
# ---------------------------------------------------------------------------


def subset_dp_average(adj_masks, wc):
    """Optimal average cost for every connected subset of vertices.

    `wc[v][x]` is the weighted cost w(x)*c(v,x) of querying v when x is the
    target.  Returns (opt, root): per-mask optimum and chosen root (-1 where
    the mask is disconnected and therefore never needed).
    """
    n = len(adj_masks)
    full = (1 << n) - 1
    opt = [INF] * (full + 1)
    root = [-1] * (full + 1)
    opt[0] = 0
    for mask in range(1, full + 1):
        comp = mask & -mask
        frontier = comp
        while frontier:
            v = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            grow = adj_masks[v] & mask & ~comp
            comp |= grow
            frontier |= grow
        if comp != mask:
            continue
        best = INF
        best_v = -1
        for v in _bits(mask):
            row = wc[v]
            total = 0
            for x in _bits(mask):
                total += row[x]
            if total >= best:
                continue
            for sub in mask_components(adj_masks, mask ^ (1 << v)):
                total += opt[sub]
                if total >= best:
                    break
            if total < best:
                best = total
                best_v = v
        opt[mask] = best
        root[mask] = best_v
    return opt, root


# ---------------------------------------------------------------------------
# Worst-case optimum by pruned enumeration of all decision trees
# ---------------------------------------------------------------------------


def worst_enum(adj_masks, costmat, mask, acc, ub):
    """Minimum worst-case cost of any decision tree for `mask`.

    `acc[x]` is the cost already accumulated on the path to each target x in
    `mask`.  Returns the exact optimum when it is < ub, otherwise some value
    >= ub (branch-and-bound contract).
    """
    best = ub
    for v in _bits(mask):
        row = costmat[v]
        final_v = acc[v] + row[v]
        if final_v >= best:
            continue
        rest = mask ^ (1 << v)
        acc2 = list(acc)
        for x in _bits(rest):
            acc2[x] += row[x]
        cur = final_v
        for comp in mask_components(adj_masks, rest):
            sub = worst_enum(adj_masks, costmat, comp, acc2, best)
            if sub > cur:
                cur = sub
            if cur >= best:
                break
        if cur < best:
            best = cur
    return best


# ---------------------------------------------------------------------------
# Exact weighted alpha-separator by subset enumeration
# ---------------------------------------------------------------------------


def alpha_separator(adj_masks, costs, weights, bound):
    """Cheapest S such that every component of G - S weighs at most `bound`.

    Returns (cost, separator_mask); ascending mask enumeration with strict
    improvement keeps the smallest mask among optima.
    """
    n = len(adj_masks)
    full = (1 << n) - 1
    best_cost = INF
    best_mask = -1
    for smask in range(full + 1):
        cost = 0
        for v in _bits(smask):
            cost += costs[v]
        if cost >= best_cost:
            continue
        ok = True
        for comp in mask_components(adj_masks, full ^ smask):
            w = 0
            for v in _bits(comp):
                w += weights[v]
            if w > bound:
                ok = False
                break
        if ok:
            best_cost = cost
            best_mask = smask
    return best_cost, best_mask


# ---------------------------------------------------------------------------
# Exact minimum-ratio vertex cut
# ---------------------------------------------------------------------------


def min_ratio_cut(adj_masks, costs, weights):
    """Exact minimizer of c(S) / (w(A|S) * w(B|S)) over vertex cuts (A,S,B).

    Cuts whose denominator would be zero are not feasible.  Returns
    (numerator, denominator, s_mask, a_mask, b_mask); ties prefer the smaller
    S mask, then the smaller w(A).
    """
    n = len(adj_masks)
    full = (1 << n) - 1
    total_w = sum(weights)
    if total_w > WEIGHT_SUM_CAP:
        raise ValueError(
            f"min-ratio-cut subset sums need total weight <= {WEIGHT_SUM_CAP}"
        )
    best = None  # (num, den, smask, a_weight)
    for smask in range(full + 1):
        c_s = 0
        w_s = 0
        for v in _bits(smask):
            c_s += costs[v]
            w_s += weights[v]
        rest = full ^ smask
        remaining = total_w - w_s
        reach = 1
        for comp in mask_components(adj_masks, rest):
            cw = 0
            for v in _bits(comp):
                cw += weights[v]
            reach |= reach << cw
        best_prod = -1
        best_a = -1
        for a in range(remaining + 1):
            if (reach >> a) & 1:
                prod = (w_s + a) * (w_s + remaining - a)
                if prod > best_prod:
                    best_prod = prod
                    best_a = a
        if best_prod <= 0:
            continue
        if best is None or c_s * best[1] < best[0] * best_prod:
            best = (c_s, best_prod, smask, best_a)
    if best is None:
        return None
    num, den, smask, target = best
    rest = full ^ smask
    comps = mask_components(adj_masks, rest)
    comp_w = []
    for comp in comps:
        cw = 0
        for v in _bits(comp):
            cw += weights[v]
        comp_w.append(cw)
    # Suffix reachability to rebuild a subset of components of weight `target`.
    suffix = [1] * (len(comps) + 1)
    for i in range(len(comps) - 1, -1, -1):
        suffix[i] = suffix[i + 1] | (suffix[i + 1] << comp_w[i])
    a_mask = 0
    for i, comp in enumerate(comps):
        if comp_w[i] <= target and (suffix[i + 1] >> (target - comp_w[i])) & 1:
            a_mask |= comp
            target -= comp_w[i]
    return num, den, smask, a_mask, rest ^ a_mask


# ---------------------------------------------------------------------------
# Weighted alpha-separator DP on trees
# ---------------------------------------------------------------------------


def separator_dp(post_order, children, costs, weights, bound):
    """Optimal separator on a rooted tree with per-component weight cap `bound`.

    Bottom-up over each vertex: either the vertex joins the separator (its
    children's subtrees are then independent), or it stays out and the DP
    tracks the exact weight of the component containing it, folding children
    in one at a time.  Returns (cost, sorted separator list); ties prefer
    keeping vertices out of the separator, then smaller component weights.
    """
    n = len(post_order)
    k = bound
    c_in = [0] * n
    c_out = [None] * n
    c_best = [0] * n
    out_best_w = [-1] * n
    mode_out = [False] * n
    choices = [None] * n  # per vertex: list over child position of per-w codes

    for v in post_order:
        ch = children[v]
        if not ch:
            c_in[v] = costs[v]
            row = [INF] * (k + 1)
            if weights[v] <= k:
                row[weights[v]] = 0
            c_out[v] = row
        else:
            c_in[v] = costs[v]
            for c in ch:
                c_in[v] += c_best[c]
            per_child_codes = []
            prefix = None
            for i, c in enumerate(ch):
                new = [INF] * (k + 1)
                codes = [-9] * (k + 1)
                out_c = c_out[c]
                if i == 0:
                    wv = weights[v]
                    if wv <= k:
                        # Component is {v} alone: the child is in the separator
                        # or its own component weighs exactly 0.
                        if out_c[0] <= c_in[c]:
                            new[wv] = out_c[0]
                            codes[wv] = 0
                        else:
                            new[wv] = c_in[c]
                            codes[wv] = -2
                        for w in range(wv + 1, k + 1):
                            val = out_c[w - wv]
                            if val < INF:
                                new[w] = val
                                codes[w] = w - wv
                else:
                    for w in range(k + 1):
                        bestval = INF
                        bestcode = -9
                        for j in range(w + 1):
                            if prefix[w - j] < INF and out_c[j] < INF:
                                val = prefix[w - j] + out_c[j]
                                if val < bestval:
                                    bestval = val
                                    bestcode = j
                        if prefix[w] < INF and c_in[c] < INF:
                            val = prefix[w] + c_in[c]
                            if val < bestval:
                                bestval = val
                                bestcode = -2
                        new[w] = bestval
                        codes[w] = bestcode
                per_child_codes.append(codes)
                prefix = new
            choices[v] = per_child_codes
            c_out[v] = prefix
        row = c_out[v]
        bw = -1
        bv = INF
        for w in range(k + 1):
            if row[w] < bv:
                bv = row[w]
                bw = w
        out_best_w[v] = bw
        mode_out[v] = bv <= c_in[v]
        c_best[v] = bv if mode_out[v] else c_in[v]

    root = post_order[-1]
    sep = []
    stack = [(root, mode_out[root], out_best_w[root] if mode_out[root] else -1)]
    while stack:
        v, is_out, w = stack.pop()
        ch = children[v]
        if not is_out:
            sep.append(v)
            for c in ch:
                stack.append((c, mode_out[c], out_best_w[c] if mode_out[c] else -1))
            continue
        if not ch:
            continue
        cur = w
        for i in range(len(ch) - 1, 0, -1):
            code = choices[v][i][cur]
            if code == -2:
                stack.append((ch[i], False, -1))
            else:
                stack.append((ch[i], True, code))
                cur -= code
        code = choices[v][0][cur]
        if code == -2:
            stack.append((ch[0], False, -1))
        else:
            stack.append((ch[0], True, code))
    return c_best[root], sorted(sep)


# ---------------------------------------------------------------------------
# Scheduling with rejection (exact DP over Smith-ordered jobs)
# ---------------------------------------------------------------------------


def schedule_dp(proc, wts, rej, deadline, shift):
    """Exact optimum of sum(w_i C_i) over accepted + sum(e_i) over rejected.

    Jobs must already be in the order accepted jobs would be scheduled in
    (nondecreasing processing/weight ratio).  Completion-time contributions
    are scaled by 2**shift so rejection costs may carry sub-integer moments.
    Returns (cost, accepted_mask) with mask bits indexing the given order.
    """
    L = len(proc)
    cap = 0
    for p in proc:
        if p <= deadline:
            cap += p
    cap = min(cap, deadline)
    dp = [INF] * (cap + 1)
    dp[0] = 0
    take = []
    for i in range(L):
        p, w, e = proc[i], wts[i], rej[i]
        nd = [INF] * (cap + 1)
        row = bytearray(cap + 1)
        for total in range(cap + 1):
            best = dp[total] + e if dp[total] < INF else INF
            if p <= total and dp[total - p] < INF:
                val = dp[total - p] + w * (total << shift)
                if val < best:
                    best = val
                    row[total] = 1
            nd[total] = best
        dp = nd
        take.append(row)
    best = INF
    best_total = 0
    for total in range(cap + 1):
        if dp[total] < best:
            best = dp[total]
            best_total = total
    mask = 0
    total = best_total
    for i in range(L - 1, -1, -1):
        if take[i][total]:
            mask |= 1 << i
            total -= proc[i]
    return best, mask


# ---------------------------------------------------------------------------
# Leaf-placement DP over aligned gap capacities
# ---------------------------------------------------------------------------


def gap_dp(grid, pred_tau, init_caps, c_scaled, wts, owner, paths, trace=False):
    """Cheapest placement of leaf queries into the gaps of an inner schedule.

    `grid` holds the aligned moments (scaled ints).  Each gap g spans from its
    predecessor's completion `pred_tau[g]` up to a cap, tracked as a grid
    index starting at `init_caps[g]`.  Leaves arrive in scheduling order;
    leaf i may be charged at its owner slot (`owner[i]`) or placed last into a
    gap on its root path, paying its weight times the gap cap and shrinking
    that cap for the leaves before it.  The earliest feasible aligned moment
    is used for the final (first-scheduled) leaf.
    """
    L = len(c_scaled)
    if len(grid) > 4094 or len(init_caps) > 5:
        raise ValueError("gap DP limited to 4094 grid moments and 5 gaps")
    memo = {}

    def options(i, caps):
        idx = i - 1
        c = c_scaled[idx]
        w = wts[idx]
        if i == 1:
            yield owner[idx], 0, caps
            for g in paths[idx]:
                capv = grid[caps[g]]
                lo = pred_tau[g] + c
                if capv >= lo:
                    j = bisect_left(grid, lo)
                    yield w * grid[j], g + 1, caps
        else:
            yield owner[idx] + solve(i - 1, caps), 0, caps
            for g in paths[idx]:
                capv = grid[caps[g]]
                if capv >= pred_tau[g] + c:
                    down = bisect_right(grid, capv - c) - 1
                    nc = caps[:g] + (down,) + caps[g + 1 :]
                    yield w * capv + solve(i - 1, nc), g + 1, nc

    def solve(i, caps):
        if i == 0:
            return 0
        key = (i, caps)
        hit = memo.get(key)
        if hit is not None:
            return hit
        best = INF
        for val, _, _ in options(i, caps):
            if val < best:
                best = val
        memo[key] = best
        return best

    total = solve(L, tuple(init_caps))
    if not trace:
        return total
    assign = [0] * L
    caps = tuple(init_caps)
    for i in range(L, 0, -1):
        want = solve(i, caps)
        for val, pick, nc in options(i, caps):
            if val == want:
                assign[i - 1] = pick
                caps = nc
                break
        else:  # pragma: no cover - would indicate a memoization bug
            raise AssertionError("gap placement traceback failed")
    return total, assign
