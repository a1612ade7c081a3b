"""Compiled event loop.

Mirrors ``Simulator`` exactly (same heap keys, same cancellation rule, same
listener-before-readers ordering) with the 4-phase environment built in, so
large handshake runs need not call back into Python per event.  Equivalence
with the reference loop is enforced by the test suite.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .netlist import GateKind, Netlist

KIND_CODE = {
    GateKind.AND2: 0, GateKind.AND3: 0,
    GateKind.OR2: 1, GateKind.OR3: 1, GateKind.OR4: 1, GateKind.OR6: 1,
    GateKind.AO21: 2, GateKind.AO22: 3, GateKind.AO222: 4, GateKind.CE2: 5,
}

# heap key: time << 33 | prio << 31 | order
_TIME_BITS, _ORDER_BITS = 30, 31
_PRE, _STIM, _POST, _GATE = 0, 1, 2, 3

# status codes
OK, ILLEGAL, OSCILLATION, OVERFLOW, FULL = 0, 1, 2, 3, 4

# actions / phases (phase 0 = none)
A_VALID, A_SPACER, A_AWAIT_HIGH, A_AWAIT_LOW = 0, 1, 2, 3
P_VALID, P_AWAIT_HIGH, P_SPACER, P_AWAIT_LOW = 1, 2, 3, 4
_TY_STIM, _TY_ACT = 0, 1


class Compiled:
    """Integer-indexed view of a netlist for the kernel."""

    def __init__(self, netlist: Netlist, gate_delay: dict[str, int]):
        self.wire_names = sorted(netlist.wires)
        wid = {w: i for i, w in enumerate(self.wire_names)}
        self.wid = wid
        gates = netlist.gates
        self.gate_ids = [g.id for g in gates]
        gidx = {g.id: i for i, g in enumerate(gates)}
        self.kind = np.array([KIND_CODE[g.kind] for g in gates], dtype=np.int8)
        ptr = [0]
        idx = []
        for g in gates:
            idx += [wid[w] for w in g.inputs]
            ptr.append(len(idx))
        self.in_ptr = np.array(ptr, dtype=np.int64)
        self.in_idx = np.array(idx, dtype=np.int64)
        self.out = np.array([wid[g.output] for g in gates], dtype=np.int64)
        self.delay = np.array([gate_delay[g.id] for g in gates], dtype=np.int64)
        rptr = [0]
        ridx = []
        readers = netlist.readers
        for w in self.wire_names:
            ridx += [gidx[g.id] for g in readers.get(w, ())]
            rptr.append(len(ridx))
        self.rd_ptr = np.array(rptr, dtype=np.int64)
        self.rd_idx = np.array(ridx, dtype=np.int64)
        partner = np.full(len(self.wire_names), -1, dtype=np.int64)
        for p in netlist.inputs + netlist.outputs:
            if p.is_dual:
                partner[wid[p.d1]] = wid[p.d0]
                partner[wid[p.d0]] = wid[p.d1]
        self.partner = partner


@njit(cache=True, inline="always")
def _eval(kind, vals, in_idx, s, held):
    if kind == 5:
        a = vals[in_idx[s]]
        if a == vals[in_idx[s + 1]]:
            return a
        return held
    if kind == 3:
        return (vals[in_idx[s]] & vals[in_idx[s + 1]]) | (vals[in_idx[s + 2]] & vals[in_idx[s + 3]])
    if kind == 2:
        return (vals[in_idx[s]] & vals[in_idx[s + 1]]) | vals[in_idx[s + 2]]
    if kind == 4:
        return ((vals[in_idx[s]] & vals[in_idx[s + 1]]) | (vals[in_idx[s + 2]] & vals[in_idx[s + 3]])
                | (vals[in_idx[s + 4]] & vals[in_idx[s + 5]]))
    return -1


@njit(cache=True, inline="always")
def _eval_gate(g, kind, in_ptr, in_idx, vals, held):
    k = kind[g]
    s = in_ptr[g]
    e = in_ptr[g + 1]
    if k == 0:
        for i in range(s, e):
            if vals[in_idx[i]] == 0:
                return 0
        return 1
    if k == 1:
        for i in range(s, e):
            if vals[in_idx[i]] == 1:
                return 1
        return 0
    return _eval(k, vals, in_idx, s, held)


@njit(cache=True, inline="always")
def _sift_up(hk, hs, pos, i):
    key = hk[i]
    sl = hs[i]
    while i > 0:
        p = (i - 1) >> 1
        if hk[p] <= key:
            break
        hk[i] = hk[p]
        hs[i] = hs[p]
        pos[hs[i]] = i
        i = p
    hk[i] = key
    hs[i] = sl
    pos[sl] = i


@njit(cache=True, inline="always")
def _sift_down(hk, hs, pos, i, n):
    key = hk[i]
    sl = hs[i]
    while True:
        m = 2 * i + 1
        if m >= n:
            break
        if m + 1 < n and hk[m + 1] < hk[m]:
            m += 1
        if hk[m] >= key:
            break
        hk[i] = hk[m]
        hs[i] = hs[m]
        pos[hs[i]] = i
        i = m
    hk[i] = key
    hs[i] = sl
    pos[sl] = i


@njit(cache=True, inline="always")
def _remove(hk, hs, pos, n, i):
    n -= 1
    if i != n:
        hk[i] = hk[n]
        hs[i] = hs[n]
        pos[hs[i]] = i
        if i > 0 and hk[i] < hk[(i - 1) >> 1]:
            _sift_up(hk, hs, pos, i)
        else:
            _sift_down(hk, hs, pos, i, n)
    return n


@njit(cache=True)
def run(kind, in_ptr, in_idx, out, delay, rd_ptr, rd_idx, partner, nwires,
        stim_t, stim_w, stim_v,
        env, codewords, cw_rails, spacer_rails, out_d1, out_d0, ackout, think,
        step_limit, ecap):
    ngates = kind.shape[0]
    vals = np.zeros(nwires, dtype=np.int64)
    pending = np.zeros(ngates, dtype=np.bool_)
    pend_val = np.zeros(ngates, dtype=np.int64)
    pend_cause = np.zeros(ngates, dtype=np.int64)

    # slots 0..ngates-1 belong to gates; the rest form a free pool
    npool = stim_t.shape[0] + max(cw_rails.shape[0], spacer_rails.shape[0]) + 8
    cap = ngates + npool
    hk = np.empty(cap, dtype=np.int64)
    hs = np.empty(cap, dtype=np.int64)
    pos = np.full(cap, -1, dtype=np.int64)
    pay_ty = np.zeros(cap, dtype=np.int64)
    pay_w = np.zeros(cap, dtype=np.int64)
    pay_v = np.zeros(cap, dtype=np.int64)
    free = np.arange(cap - 1, ngates - 1, -1).astype(np.int64)
    nfree = npool
    hn = 0
    order = 0
    now = 0
    phase = 0
    txn = 0
    tmax = (1 << _TIME_BITS) - 1
    omax = (1 << _ORDER_BITS) - 1
    tguard = tmax - think - (delay.max() if ngates else 0)
    status = OK

    ev_t = np.empty(ecap, dtype=np.int64)
    ev_w = np.empty(ecap, dtype=np.int32)
    ev_v = np.empty(ecap, dtype=np.int8)
    ev_c = np.empty(ecap, dtype=np.int64)
    ev_p = np.empty(ecap, dtype=np.int8)
    ev_x = np.empty(ecap, dtype=np.int32)
    ev_g = np.empty(ecap, dtype=np.int32)
    nev = 0

    ntx = codewords.shape[0]
    npairs = out_d1.shape[0]
    rec = np.full((max(ntx, 1), 6), -1, dtype=np.int64)
    bits = np.zeros((max(ntx, 1), max(npairs, 1)), dtype=np.int8)
    out_pair = np.full(nwires, -1, dtype=np.int64)
    for p in range(npairs):
        out_pair[out_d1[p]] = p
        out_pair[out_d0[p]] = p
    pair_any = np.zeros(max(npairs, 1), dtype=np.int64)
    nvalid = 0
    k = -1
    waiting = False
    done = ntx == 0

    # initial evaluation of every gate from the all-zero state
    for g in range(ngates):
        new = _eval_gate(g, kind, in_ptr, in_idx, vals, 0)
        if new != 0:
            order += 1
            hk[hn] = (delay[g] << 33) | (_GATE << 31) | order
            hs[hn] = g
            _sift_up(hk, hs, pos, hn)
            hn += 1
            pending[g] = True
            pend_val[g] = new
            pend_cause[g] = -1

    for i in range(stim_t.shape[0]):
        if stim_t[i] > tmax:
            return _result(OVERFLOW, now, phase, k, done, ev_t, ev_w, ev_v, ev_c, ev_p, ev_x, ev_g, nev, rec, bits)
        order += 1
        nfree -= 1
        sl = free[nfree]
        pay_ty[sl] = _TY_STIM
        pay_w[sl] = stim_w[i]
        pay_v[sl] = stim_v[i]
        hk[hn] = (stim_t[i] << 33) | (_STIM << 31) | order
        hs[hn] = sl
        _sift_up(hk, hs, pos, hn)
        hn += 1
    if env and ntx > 0:
        order += 1
        nfree -= 1
        sl = free[nfree]
        pay_ty[sl] = _TY_ACT
        pay_w[sl] = A_VALID
        hk[hn] = (_PRE << 31) | order
        hs[hn] = sl
        _sift_up(hk, hs, pos, hn)
        hn += 1

    while hn > 0:
        if order >= omax:
            status = OVERFLOW
            break
        key = hk[0]
        sl = hs[0]
        hn = _remove(hk, hs, pos, hn, 0)
        pos[sl] = -1
        now = key >> 33
        if now > tguard:
            status = OVERFLOW
            break
        check = False
        if sl < ngates:
            g = sl
            pending[g] = False
            w = out[g]
            v = pend_val[g]
            cause = pend_cause[g]
        else:
            free[nfree] = sl
            nfree += 1
            g = -1
            w = pay_w[sl]
            v = pay_v[sl]
            cause = -1
            if pay_ty[sl] == _TY_ACT:
                if w == A_VALID:
                    k += 1
                    txn = k
                    phase = P_VALID
                    for i in range(cw_rails.shape[0]):
                        order += 1
                        nfree -= 1
                        s2 = free[nfree]
                        pay_ty[s2] = _TY_STIM
                        pay_w[s2] = cw_rails[i]
                        pay_v[s2] = codewords[k, i]
                        hk[hn] = (now << 33) | (_STIM << 31) | order
                        hs[hn] = s2
                        _sift_up(hk, hs, pos, hn)
                        hn += 1
                    rec[k, 0] = now
                    order += 1
                    nfree -= 1
                    s2 = free[nfree]
                    pay_ty[s2] = _TY_ACT
                    pay_w[s2] = A_AWAIT_HIGH
                    hk[hn] = (now << 33) | (_POST << 31) | order
                    hs[hn] = s2
                    _sift_up(hk, hs, pos, hn)
                    hn += 1
                    waiting = False
                    continue
                elif w == A_SPACER:
                    phase = P_SPACER
                    for i in range(spacer_rails.shape[0]):
                        order += 1
                        nfree -= 1
                        s2 = free[nfree]
                        pay_ty[s2] = _TY_STIM
                        pay_w[s2] = spacer_rails[i]
                        pay_v[s2] = 0
                        hk[hn] = (now << 33) | (_STIM << 31) | order
                        hs[hn] = s2
                        _sift_up(hk, hs, pos, hn)
                        hn += 1
                    rec[k, 1] = now
                    order += 1
                    nfree -= 1
                    s2 = free[nfree]
                    pay_ty[s2] = _TY_ACT
                    pay_w[s2] = A_AWAIT_LOW
                    hk[hn] = (now << 33) | (_POST << 31) | order
                    hs[hn] = s2
                    _sift_up(hk, hs, pos, hn)
                    hn += 1
                    waiting = False
                    continue
                elif w == A_AWAIT_HIGH:
                    phase = P_AWAIT_HIGH
                else:
                    phase = P_AWAIT_LOW
                check = True
                w = -1
        if w >= 0:
            if vals[w] == v:
                continue
            if nev >= step_limit:
                status = OSCILLATION
                break
            if nev == ecap:
                status = FULL
                break
            ev_t[nev] = now
            ev_w[nev] = w
            ev_v[nev] = v
            ev_c[nev] = cause
            ev_p[nev] = phase
            ev_x[nev] = txn
            ev_g[nev] = g
            nev += 1
            vals[w] = v
            pw = partner[w]
            if pw >= 0 and v == 1 and vals[pw] == 1:
                status = ILLEGAL
                break
            if env:
                p = out_pair[w]
                if p >= 0:
                    a = vals[out_d1[p]] | vals[out_d0[p]]
                    nvalid += a - pair_any[p]
                    pair_any[p] = a
                    check = True
                elif w == ackout:
                    check = True

        # environment listener runs before the readers are re-evaluated
        if check and not done and not waiting and k >= 0:
            ack = vals[ackout]
            nxt = -1
            if phase == P_VALID or phase == P_AWAIT_HIGH:
                if rec[k, 2] < 0 and nvalid == npairs:
                    rec[k, 2] = now
                    for p in range(npairs):
                        bits[k, p] = vals[out_d1[p]]
                if rec[k, 3] < 0 and ack == 1:
                    rec[k, 3] = now
                if phase == P_AWAIT_HIGH and rec[k, 2] >= 0 and ack == 1:
                    waiting = True
                    nxt = A_SPACER
            else:
                if rec[k, 4] < 0 and nvalid == 0:
                    rec[k, 4] = now
                if rec[k, 5] < 0 and ack == 0:
                    rec[k, 5] = now
                if phase == P_AWAIT_LOW and rec[k, 4] >= 0 and ack == 0:
                    waiting = True
                    if k + 1 < ntx:
                        nxt = A_VALID
                    else:
                        done = True
            if nxt >= 0:
                order += 1
                nfree -= 1
                s2 = free[nfree]
                pay_ty[s2] = _TY_ACT
                pay_w[s2] = nxt
                hk[hn] = ((now + think) << 33) | (_PRE << 31) | order
                hs[hn] = s2
                _sift_up(hk, hs, pos, hn)
                hn += 1
        if w < 0:
            continue

        seq = nev - 1
        for ri in range(rd_ptr[w], rd_ptr[w + 1]):
            gg = rd_idx[ri]
            cur = vals[out[gg]]
            projected = pend_val[gg] if pending[gg] else cur
            new = _eval_gate(gg, kind, in_ptr, in_idx, vals, cur)
            if new == projected:
                continue
            if pending[gg]:
                pending[gg] = False
                hn = _remove(hk, hs, pos, hn, pos[gg])
                pos[gg] = -1
                continue
            order += 1
            hk[hn] = ((now + delay[gg]) << 33) | (_GATE << 31) | order
            hs[hn] = gg
            _sift_up(hk, hs, pos, hn)
            hn += 1
            pending[gg] = True
            pend_val[gg] = new
            pend_cause[gg] = seq

    return _result(status, now, phase, k, done, ev_t, ev_w, ev_v, ev_c, ev_p, ev_x, ev_g, nev, rec, bits)


@njit(cache=True)
def _result(status, now, phase, k, done, ev_t, ev_w, ev_v, ev_c, ev_p, ev_x, ev_g, nev, rec, bits):
    return (status, now, phase, k, done,
            ev_t[:nev].copy(), ev_w[:nev].copy(), ev_v[:nev].copy(), ev_c[:nev].copy(),
            ev_p[:nev].copy(), ev_x[:nev].copy(), ev_g[:nev].copy(), rec, bits)
