"""Compiled inner loop of the double description method.

Zero sets live in ``uint64`` word arrays (one bit per inequality) and the
quad types used by a ray in a second array packing three bits per
tetrahedron, 21 tetrahedra per word, so that the quadrilateral condition on
a union of supports is a few shifts and masks.  Ray coordinates stay exact
Python integers in the caller; only the pair filtering is compiled.
"""
from __future__ import annotations

import numpy as np
from numba import njit

QUADS_PER_WORD = 21

# bits 3t and 3t+1 of every packed tetrahedron, and bit 3t alone
_A = 0
_B = 0
for _t in range(QUADS_PER_WORD):
    _A |= (1 << (3 * _t)) | (1 << (3 * _t + 1))
    _B |= 1 << (3 * _t)
AMASK = np.uint64(_A)
BMASK = np.uint64(_B)


def words(nbits: int) -> int:
    return max(1, (nbits + 63) // 64)


def pack_bits(bits, nwords: int) -> np.ndarray:
    out = np.zeros(nwords, dtype=np.uint64)
    for b in bits:
        out[b >> 6] |= np.uint64(1) << np.uint64(b & 63)
    return out


def quad_word_bit(t: int, k: int) -> tuple[int, int]:
    return t // QUADS_PER_WORD, 3 * (t % QUADS_PER_WORD) + k


@njit(cache=True)
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return int((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True)
def popcounts(Z):
    out = np.zeros(Z.shape[0], dtype=np.int64)
    for r in range(Z.shape[0]):
        c = 0
        for h in range(Z.shape[1]):
            c += _popcount(Z[r, h])
        out[r] = c
    return out


@njit(cache=True)
def adjacent_pairs(Z, QB, pc, pos, neg, need, admissible, amask, bmask):
    """Pairs (u, w) from pos x neg whose common zero set has at least
    ``need`` bits, whose quad union is admissible (when asked) and which no
    third ray dominates: no r has Z[r] containing Z[u] & Z[w]."""
    V, W = Z.shape
    WQ = QB.shape[1]
    cap = 1024
    out_u = np.empty(cap, dtype=np.int64)
    out_w = np.empty(cap, dtype=np.int64)
    k = 0
    z = np.empty(W, dtype=np.uint64)
    one = np.uint64(1)
    two = np.uint64(2)
    for ii in range(pos.shape[0]):
        u = pos[ii]
        for jj in range(neg.shape[0]):
            w = neg[jj]
            cnt = 0
            for h in range(W):
                z[h] = Z[u, h] & Z[w, h]
                cnt += _popcount(z[h])
            if cnt < need:
                continue
            if admissible:
                bad = False
                for h in range(WQ):
                    y = QB[u, h] | QB[w, h]
                    if ((y & (y >> one) & amask) | (y & (y >> two) & bmask)) != np.uint64(0):
                        bad = True
                        break
                if bad:
                    continue
            ok = True
            for r in range(V):
                if r == u or r == w or pc[r] < cnt:
                    continue
                sup = True
                for h in range(W):
                    if (Z[r, h] & z[h]) != z[h]:
                        sup = False
                        break
                if sup:
                    ok = False
                    break
            if not ok:
                continue
            if k == cap:
                cap *= 2
                nu = np.empty(cap, dtype=np.int64)
                nw = np.empty(cap, dtype=np.int64)
                nu[:k] = out_u[:k]
                nw[:k] = out_w[:k]
                out_u = nu
                out_w = nw
            out_u[k] = u
            out_w[k] = w
            k += 1
    return out_u[:k], out_w[:k]
