# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled dense residue kernel; same interface as ``_box_py.Box``.

p = 2 rows are packed 64 coefficients per word, other p < 256 use one byte
per coefficient.
"""

from libc.stdlib cimport calloc, free, malloc
from libc.string cimport memcpy, memset
from libc.stdint cimport uint8_t, uint32_t, uint64_t

BACKEND = "cython"


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int _popcount(uint64_t v) nogil:
    return __builtin_popcountll(v)


cdef class Box:
    cdef readonly int p, nrows, stride
    cdef int *_widths
    cdef uint64_t *bits
    cdef uint8_t *vals

    def __cinit__(self, int p, widths):
        cdef int j, maxw = 0
        if p < 2 or p > 255:
            raise ValueError("compiled Box supports 2 <= p < 256")
        self.p = p
        self.nrows = len(widths)
        self._widths = <int *> malloc(max(self.nrows, 1) * sizeof(int))
        for j in range(self.nrows):
            self._widths[j] = int(widths[j])
            if self._widths[j] > maxw:
                maxw = self._widths[j]
        if p == 2:
            self.stride = (maxw + 63) >> 6
            self.bits = <uint64_t *> calloc(max(self.nrows * self.stride, 1), sizeof(uint64_t))
            if self.bits == NULL:
                raise MemoryError()
        else:
            self.stride = maxw
            self.vals = <uint8_t *> calloc(max(self.nrows * self.stride, 1), sizeof(uint8_t))
            if self.vals == NULL:
                raise MemoryError()

    def __dealloc__(self):
        free(self._widths)
        if self.bits != NULL:
            free(self.bits)
        if self.vals != NULL:
            free(self.vals)

    @property
    def widths(self):
        return tuple(self._widths[j] for j in range(self.nrows))

    def copy(self):
        cdef Box other = Box(self.p, self.widths)
        if self.p == 2:
            memcpy(other.bits, self.bits, self.nrows * self.stride * sizeof(uint64_t))
        else:
            memcpy(other.vals, self.vals, self.nrows * self.stride)
        return other

    def set_terms(self, terms):
        cdef int i, j, c
        if self.p == 2:
            memset(self.bits, 0, self.nrows * self.stride * sizeof(uint64_t))
        else:
            memset(self.vals, 0, self.nrows * self.stride)
        for (i, j), c in terms:
            c = c % self.p
            if c == 0 or j < 0 or j >= self.nrows or i < 0 or i >= self._widths[j]:
                continue
            if self.p == 2:
                self.bits[j * self.stride + (i >> 6)] ^= (<uint64_t> 1) << (i & 63)
            else:
                self.vals[j * self.stride + i] = (self.vals[j * self.stride + i] + c) % self.p
        return self

    def is_zero(self):
        cdef Py_ssize_t k, n = self.nrows * self.stride
        if self.p == 2:
            for k in range(n):
                if self.bits[k]:
                    return False
        else:
            for k in range(n):
                if self.vals[k]:
                    return False
        return True

    def nnz(self):
        cdef Py_ssize_t k, n = self.nrows * self.stride, total = 0
        if self.p == 2:
            for k in range(n):
                total += _popcount(self.bits[k])
        else:
            for k in range(n):
                if self.vals[k]:
                    total += 1
        return total

    def to_terms(self):
        cdef int i, j
        cdef uint64_t w
        out = {}
        for j in range(self.nrows):
            if self.p == 2:
                for i in range(self._widths[j]):
                    w = self.bits[j * self.stride + (i >> 6)]
                    if (w >> (i & 63)) & 1:
                        out[(i, j)] = 1
            else:
                for i in range(self._widths[j]):
                    if self.vals[j * self.stride + i]:
                        out[(i, j)] = self.vals[j * self.stride + i]
        return out

    def mul_terms(self, terms):
        """Multiply in place by the sparse polynomial ``{(i, j): c}`` and truncate."""
        cdef list clean = []
        for (a, b), c in terms:
            c = c % self.p
            if c and b < self.nrows:
                clean.append((int(a), int(b), int(c)))
        if self.p == 2:
            self._mul_bits(clean)
        else:
            self._mul_bytes(clean)
        return self

    cdef void _mul_bits(self, list terms):
        cdef int a, b, c, j, t, k, ws, bs, sw, dw, src_idx
        cdef int nrows = self.nrows, stride = self.stride
        cdef uint64_t *new = <uint64_t *> calloc(max(nrows * stride, 1), sizeof(uint64_t))
        cdef uint64_t *src
        cdef uint64_t *dst
        cdef uint64_t v, last
        cdef int w
        cdef int *live = <int *> malloc(max(nrows, 1) * sizeof(int))
        cdef int nlive = 0
        for j in range(nrows):
            src = self.bits + j * stride
            for k in range(stride):
                if src[k]:
                    live[nlive] = j
                    nlive += 1
                    break
        for (a, b, c) in terms:
            ws = a >> 6
            bs = a & 63
            with nogil:
                for k in range(nlive):
                    j = live[k]
                    t = j + b
                    if t >= nrows:
                        break
                    w = self._widths[t]
                    if a >= w:
                        continue
                    src = self.bits + j * stride
                    dst = new + t * stride
                    sw = (self._widths[j] + 63) >> 6
                    dw = (w + 63) >> 6
                    for src_idx in range(min(sw, dw - ws)):
                        v = src[src_idx]
                        if v:
                            if bs:
                                dst[src_idx + ws] ^= v << bs
                                if src_idx + ws + 1 < dw:
                                    dst[src_idx + ws + 1] ^= v >> (64 - bs)
                            else:
                                dst[src_idx + ws] ^= v
        free(live)
        # truncate each row to its width
        for t in range(nrows):
            w = self._widths[t]
            dst = new + t * stride
            dw = w >> 6
            if w & 63:
                dst[dw] &= ((<uint64_t> 1) << (w & 63)) - 1
                dw += 1
            for k in range(dw, stride):
                dst[k] = 0
        free(self.bits)
        self.bits = new

    cdef void _mul_bytes(self, list terms):
        # accumulate unreduced in 32-bit slots over the occupied prefix of each row
        cdef int a, b, c, j, t, i, k, lim, p = self.p
        cdef int nrows = self.nrows, stride = self.stride
        cdef Py_ssize_t n = nrows * stride
        cdef uint32_t *acc = <uint32_t *> calloc(max(n, 1), sizeof(uint32_t))
        cdef uint8_t *new = <uint8_t *> calloc(max(n, 1), sizeof(uint8_t))
        cdef uint8_t *src
        cdef uint32_t *dst
        cdef int *live = <int *> malloc(max(nrows, 1) * sizeof(int))
        cdef int *rowlen = <int *> calloc(max(nrows, 1), sizeof(int))
        cdef int *outlen = <int *> calloc(max(nrows, 1), sizeof(int))
        cdef int nlive = 0, pending = 0
        with nogil:
            for j in range(nrows):
                src = self.vals + j * stride
                i = self._widths[j]
                while i > 0 and not src[i - 1]:
                    i -= 1
                if i:
                    rowlen[j] = i
                    live[nlive] = j
                    nlive += 1
        for (a, b, c) in terms:
            with nogil:
                for k in range(nlive):
                    j = live[k]
                    t = j + b
                    if t >= nrows:
                        break
                    lim = self._widths[t] - a
                    if lim > rowlen[j]:
                        lim = rowlen[j]
                    if lim <= 0:
                        continue
                    if a + lim > outlen[t]:
                        outlen[t] = a + lim
                    src = self.vals + j * stride
                    dst = acc + t * stride + a
                    for i in range(lim):
                        dst[i] += c * src[i]
                pending += 1
                if pending == 60000:
                    for t in range(nrows):
                        dst = acc + t * stride
                        for i in range(outlen[t]):
                            dst[i] %= p
                    pending = 0
        with nogil:
            for t in range(nrows):
                dst = acc + t * stride
                for i in range(outlen[t]):
                    new[t * stride + i] = <uint8_t> (dst[i] % p)
        free(acc)
        free(live)
        free(rowlen)
        free(outlen)
        free(self.vals)
        self.vals = new
