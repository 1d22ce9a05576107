"""Compiled local rules for f_M and g on integer-coded cells.

S-letters are coded ``tape * nC + ctrl`` with ctrl ``0 = '<'``, ``1 = '>'``
and ``>= 2`` for (plain or tagged) states.  R-letters are ``4 * s + d``
where bit 0 of ``d`` is a left-moving and bit 1 a right-moving particle.

``f_M`` is tabulated (see ``embed.Alphabets.tables``):

* ``ctrl[s]``: ctrl code of ``s``
* ``FS[s, 2*(ctrl(left) == '<') + (ctrl(right) == '>')]`` when ``s`` holds a state
* ``FA[s, ctrl(right)]`` when ``s`` is ``'<'``, ``FA[s, ctrl(left)]`` when ``'>'``

``IS``/``IA`` tabulate the inverse the same way; ``qfc`` is the ctrl code
of the plain final state.
"""

import numpy as np
from numba import njit


# The table lookups are written out in each loop: helpers are not inlined
# across cached compilation units and the call overhead would dominate.


@njit(cache=True)
def fm_range(x, lo, hi, out, ctrl, FS, FA, shift):
    """``out[p] = f_M(x)[p]`` for ``lo <= p < hi`` (aligned indices).

    ``shift = 2`` reads the S-track of R-coded ``x``.
    """
    for i in range(lo, hi):
        sl, s, sr = x[i - 1] >> shift, x[i] >> shift, x[i + 1] >> shift
        c = ctrl[s]
        if c >= 2:
            k = 0
            if ctrl[sl] == 0:
                k += 2
            if ctrl[sr] == 1:
                k += 1
            out[i] = FS[s, k]
        elif c == 0:
            out[i] = FA[s, ctrl[sr]]
        else:
            out[i] = FA[s, ctrl[sl]]


@njit(cache=True)
def g_range(x, lo, hi, out, s1, ctrl, FS, FA, qfc):
    """``out[p] = g(x)[p]`` for ``lo <= p < hi``; ``s1`` receives the S-track
    after step 1 on ``lo - 1 .. hi``."""
    fm_range(x, lo - 1, hi + 1, s1, ctrl, FS, FA, 2)
    for i in range(lo, hi):
        sm, sc, sp = s1[i - 1], s1[i], s1[i + 1]
        cm, cc, cp = ctrl[sm], ctrl[sc], ctrl[sp]
        bl = np.int64((cm != 0) & (cc != 1))
        br = np.int64((cc != 0) & (cp != 1))
        dl, dc, dr = x[i - 1] & 3, x[i] & 3, x[i + 1] & 3
        # R arrives from the left unless blocked; a blocked L turns into R
        rn = ((dl >> 1) & (1 - bl)) | (dc & bl)
        ln = (dr & (1 - br)) | ((dc >> 1) & br)
        dn = ln | (rn << 1)
        dn ^= np.int64(cc == qfc) << 1
        out[i] = sc * 4 + dn


@njit(cache=True)
def g_inv_range(x, lo, hi, out, ctrl, IS, IA, qfc):
    """``out[p] = g^-1(x)[p]`` for ``lo <= p < hi``."""
    for i in range(lo, hi):
        sm, sc, sp = x[i - 1] >> 2, x[i] >> 2, x[i + 1] >> 2
        cm, cc, cp = ctrl[sm], ctrl[sc], ctrl[sp]
        dm = (x[i - 1] & 3) ^ (np.int64(cm == qfc) << 1)
        dc = (x[i] & 3) ^ (np.int64(cc == qfc) << 1)
        dp = (x[i + 1] & 3) ^ (np.int64(cp == qfc) << 1)
        bl = np.int64((cm != 0) & (cc != 1))
        br = np.int64((cc != 0) & (cp != 1))
        lo_ = (dm & (1 - bl)) | ((dc >> 1) & bl)
        ro = ((dp >> 1) & (1 - br)) | (dc & br)
        if cc >= 2:
            k = 0
            if cm == 0:
                k += 2
            if cp == 1:
                k += 1
            so = IS[sc, k]
        elif cc == 0:
            so = IA[sc, cp]
        else:
            so = IA[sc, cm]
        out[i] = so * 4 + lo_ + (ro << 1)


@njit(cache=True)
def fm_word(x, ctrl, FS, FA):
    """``f_M`` on a finite word: ``len(out) == len(x) - 2``."""
    n = x.shape[0]
    out = np.empty(n, dtype=np.int64)
    fm_range(x, 1, n - 1, out, ctrl, FS, FA, 0)
    return out[1:max(n - 1, 1)].copy()


@njit(cache=True)
def g_word(x, ctrl, FS, FA, qfc):
    """One step of g; ``len(out) == len(x) - 4`` (memory = anticipation = 2)."""
    n = x.shape[0]
    out = np.empty(n, dtype=np.int64)
    s1 = np.empty(n, dtype=np.int64)
    if n >= 5:
        g_range(x, 2, n - 2, out, s1, ctrl, FS, FA, qfc)
    return out[2:max(n - 2, 2)].copy()


@njit(cache=True)
def g_inv_word(x, ctrl, IS, IA, qfc):
    """One step of g^-1; ``len(out) == len(x) - 2`` (radius 1)."""
    n = x.shape[0]
    out = np.empty(n, dtype=np.int64)
    g_inv_range(x, 1, n - 1, out, ctrl, IS, IA, qfc)
    return out[1:max(n - 1, 1)].copy()


@njit(cache=True)
def g_power_word(x, k, ctrl, FS, FA, IS, IA, qfc):
    """``k`` steps of g (``k < 0``: of g^-1); the word shrinks by the radius
    on both sides each step."""
    n = x.shape[0]
    a = x.copy()
    b = np.empty(n, dtype=np.int64)
    s1 = np.empty(n, dtype=np.int64)
    lo, hi = 0, n
    r = 2 if k >= 0 else 1
    for _ in range(abs(k)):
        if hi - lo < 2 * r + 1:
            return np.empty(0, dtype=np.int64)
        if k >= 0:
            g_range(a, lo + 2, hi - 2, b, s1, ctrl, FS, FA, qfc)
        else:
            g_inv_range(a, lo + 1, hi - 1, b, ctrl, IS, IA, qfc)
        lo, hi = lo + r, hi - r
        a, b = b, a
    return a[lo:hi].copy()


@njit(cache=True)
def g_cyclic(x, k, ctrl, FS, FA, IS, IA, qfc):
    """``k`` steps of g (or g^-1) on the spatially periodic word ``x``."""
    n = x.shape[0]
    pad = np.empty(n + 4, dtype=np.int64)
    out = np.empty(n + 4, dtype=np.int64)
    s1 = np.empty(n + 4, dtype=np.int64)
    y = x.copy()
    for _ in range(abs(k)):
        for i in range(n + 4):
            pad[i] = y[(i - 2) % n]
        if k >= 0:
            g_range(pad, 2, n + 2, out, s1, ctrl, FS, FA, qfc)
        else:
            g_inv_range(pad, 2, n + 2, out, ctrl, IS, IA, qfc)
        y[:] = out[2:n + 2]
    return y


@njit(cache=True)
def exhaust_g_roundtrip(letters, length, background, ctrl, FS, FA, IS, IA, qfc):
    """Check ``g^-1(g(x)) == x`` and ``g(g^-1(x)) == x`` for every center word
    of ``length`` letters drawn from ``letters`` on a uniform ``background``.

    Cases run in odometer order; after each increment only cells within
    reach of the changed digits are recomputed.
    Returns ``(cases, failures, first_failing_index)``.
    """
    nl = letters.shape[0]
    pad = 6
    n = length + 2 * pad
    x = np.empty(n, dtype=np.int64)
    x[:] = background
    for j in range(length):
        x[pad + j] = letters[0]
    gy = np.empty(n, dtype=np.int64)
    gz = np.empty(n, dtype=np.int64)
    iy = np.empty(n, dtype=np.int64)
    iz = np.empty(n, dtype=np.int64)
    s1 = np.empty(n, dtype=np.int64)
    s2 = np.empty(n, dtype=np.int64)
    digits = np.zeros(length, dtype=np.int64)
    total = nl ** length
    failures = 0
    first = -1
    # cells changed since the last evaluation; everything at first
    lo_c, hi_c = 0, n
    for idx in range(total):
        # g then g^-1, and g^-1 then g, on cells pad-3 .. pad+length+2
        g_range(x, max(lo_c - 2, 2), min(hi_c + 2, n - 2), gy, s1, ctrl, FS, FA, qfc)
        g_inv_range(gy, max(lo_c - 3, 3), min(hi_c + 3, n - 3), gz, ctrl, IS, IA, qfc)
        g_inv_range(x, max(lo_c - 1, 1), min(hi_c + 1, n - 1), iy, ctrl, IS, IA, qfc)
        g_range(iy, max(lo_c - 3, 3), min(hi_c + 3, n - 3), iz, s2, ctrl, FS, FA, qfc)
        ok = True
        for p in range(3, n - 3):
            if gz[p] != x[p] or iz[p] != x[p]:
                ok = False
                break
        if not ok:
            failures += 1
            if first < 0:
                first = idx
        j = length - 1
        while j >= 0:
            digits[j] += 1
            if digits[j] < nl:
                x[pad + j] = letters[digits[j]]
                break
            digits[j] = 0
            x[pad + j] = letters[0]
            j -= 1
        lo_c = pad + max(j, 0)
        hi_c = pad + length
    return total, failures, first


@njit(cache=True)
def exhaust_fm_conjugacy(letters, max_period, ctrl, FS, FA, IS, IA):
    """Check ``f^-1(f(x)) == x`` and ``f(f^-1(x)) == x`` on every spatially
    periodic word of period ``1 .. max_period`` over ``letters``.

    Returns ``(cases, failures, first_failing_period, first_failing_index)``.
    """
    nl = letters.shape[0]
    cases = 0
    failures = 0
    fp = -1
    fi = -1
    m = max_period
    x = np.empty(m + 4, dtype=np.int64)
    y = np.empty(m + 4, dtype=np.int64)
    z = np.empty(m + 4, dtype=np.int64)
    for p in range(1, max_period + 1):
        digits = np.zeros(p, dtype=np.int64)
        total = nl ** p
        for idx in range(total):
            # x holds cells -2 .. p+1 of the periodic word, aligned at +2
            for j in range(p + 4):
                x[j] = letters[digits[(j - 2) % p]]
            fm_range(x, 1, p + 3, y, ctrl, FS, FA, 0)
            fm_range(y, 2, p + 2, z, ctrl, IS, IA, 0)
            ok = True
            for j in range(2, p + 2):
                if z[j] != x[j]:
                    ok = False
                    break
            if ok:
                fm_range(x, 1, p + 3, y, ctrl, IS, IA, 0)
                fm_range(y, 2, p + 2, z, ctrl, FS, FA, 0)
                for j in range(2, p + 2):
                    if z[j] != x[j]:
                        ok = False
                        break
            cases += 1
            if not ok:
                failures += 1
                if fp < 0:
                    fp = p
                    fi = idx
            j = p - 1
            while j >= 0:
                digits[j] += 1
                if digits[j] < nl:
                    break
                digits[j] = 0
                j -= 1
    return cases, failures, fp, fi


@njit(cache=True)
def h_labels(x, T, n, ctrl, FS, FA, qfc):
    """Windows ``[-n, n]`` of ``h^t(x)`` for ``0 <= t < T``, ``h = sigma o g^2``.

    ``x`` holds cells ``-n - 3(T-1) .. n + 5(T-1)``, which is exactly the
    dependency cone of these windows.
    """
    w = 2 * n + 1
    out = np.empty((T, w), dtype=np.int64)
    if T == 0:
        return out
    L = x.shape[0]
    z = n + 3 * (T - 1)
    a = x.copy()
    b = np.empty(L, dtype=np.int64)
    s1 = np.empty(L, dtype=np.int64)
    lo, hi = 0, L
    for t in range(T):
        for j in range(w):
            out[t, j] = a[z + t - n + j]
        if t == T - 1:
            break
        for _ in range(2):
            g_range(a, lo + 2, hi - 2, b, s1, ctrl, FS, FA, qfc)
            lo, hi = lo + 2, hi - 2
            a, b = b, a
    return out


@njit(cache=True)
def _all_bg(a, lo, hi, bg):
    for k in range(lo, hi):
        if a[k] != bg:
            return False
    return True


@njit(cache=True)
def h_labels_uniform(cells, off, bg, T, n, ctrl, FS, FA, qfc):
    """As :func:`h_labels` for ``cells`` (starting at cell ``off``) on a
    uniform background ``bg`` that g fixes.  Only the stretch of cells
    differing from ``bg`` is recomputed, so the cost follows its size."""
    w = 2 * n + 1
    out = np.empty((T, w), dtype=np.int64)
    L = cells.shape[0]
    base = min(off, -n) - 4 * T - 8
    top = max(off + L, T + n + 1) + 4 * T + 8
    size = top - base
    a_buf = np.full(size, bg, dtype=np.int64)
    b_buf = np.full(size, bg, dtype=np.int64)
    s1 = np.empty(size, dtype=np.int64)
    for k in range(L):
        a_buf[off - base + k] = cells[k]
    lo, hi = off - base, off - base + L          # active stretch of a_buf
    dlo, dhi = 0, 0                              # stale stretch of b_buf
    for t in range(T):
        for j in range(w):
            out[t, j] = a_buf[t - n + j - base]
        if t == T - 1:
            break
        for _ in range(2):
            if lo >= hi:
                break
            for k in range(dlo, dhi):
                b_buf[k] = bg
            # recompute only cells within reach of a non-background cell
            k = lo
            while k < hi:
                if a_buf[k] == bg:
                    k += 1
                    continue
                e = k + 1
                while e < hi and (a_buf[e] != bg or e + 4 < hi and not _all_bg(a_buf, e, e + 5, bg)):
                    e += 1
                g_range(a_buf, k - 2, e + 2, b_buf, s1, ctrl, FS, FA, qfc)
                k = e
            nlo, nhi = lo - 2, hi + 2
            while nlo < nhi and b_buf[nlo] == bg:
                nlo += 1
            while nhi > nlo and b_buf[nhi - 1] == bg:
                nhi -= 1
            # the old input buffer becomes the next output; its stale
            # stretch is the old active one
            a_buf, b_buf = b_buf, a_buf
            dlo, dhi = lo, hi
            lo, hi = nlo, nhi
    return out


@njit(cache=True)
def dfa_factor_scan(delta, accepting, start, classes):
    """First factor ``classes[i:j]`` (smallest ``j``, then smallest ``i``)
    accepted by the DFA; ``(-1, -1)`` if none.

    ``classes[k] < 0`` marks a token outside the DFA alphabet; reading it
    leads to rejection.
    """
    nq = delta.shape[0]
    if accepting[start]:
        return 0, 0
    cur = np.full(nq, -1, dtype=np.int64)   # earliest start reaching each state
    nxt = np.empty(nq, dtype=np.int64)
    for j in range(classes.shape[0]):
        c = classes[j]
        if cur[start] < 0:
            cur[start] = j
        nxt[:] = -1
        if c >= 0:
            for q in range(nq):
                i = cur[q]
                if i >= 0:
                    r = delta[q, c]
                    if nxt[r] < 0 or i < nxt[r]:
                        nxt[r] = i
        best = -1
        for r in range(nq):
            if nxt[r] >= 0 and accepting[r] and (best < 0 or nxt[r] < best):
                best = nxt[r]
        if best >= 0:
            return best, j + 1
        cur, nxt = nxt, cur
    return -1, -1


@njit(cache=True)
def h_cyclic_return(x, max_t, ctrl, FS, FA, qfc):
    """Smallest ``t <= max_t`` with ``h^t(x) == x`` for the spatially
    periodic word ``x``; ``-1`` if there is none."""
    n = x.shape[0]
    pad = np.empty(n + 4, dtype=np.int64)
    out = np.empty(n + 4, dtype=np.int64)
    s1 = np.empty(n + 4, dtype=np.int64)
    y = x.copy()
    for t in range(1, max_t + 1):
        for _ in range(2):
            for i in range(n + 4):
                pad[i] = y[(i - 2) % n]
            g_range(pad, 2, n + 2, out, s1, ctrl, FS, FA, qfc)
            y[:] = out[2:n + 2]
        # sigma: cell i takes the letter of cell i + 1
        first = y[0]
        for i in range(n - 1):
            y[i] = y[i + 1]
        y[n - 1] = first
        same = True
        for i in range(n):
            if y[i] != x[i]:
                same = False
                break
        if same:
            return t
    return -1
