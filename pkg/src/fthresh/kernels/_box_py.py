"""Pure-Python dense residue kernel.

A ``Box`` stores a bivariate polynomial over F_p modulo a monomial ideal whose
complement is a staircase: row ``j`` (the y-exponent) keeps x-exponents
``0 <= i < widths[j]``. Rows are packed into Python integers so that one
shifted add handles a whole row at C speed:

* p = 2: one bit per coefficient, addition is XOR;
* 2 < p <= 13: one byte per coefficient; slots are reduced with
  ``bytes.translate`` before they can overflow;
* larger p: plain lists.
"""

BACKEND = "python"


def _byte_budget(p):
    # additions of c*v (c, v < p) a slot already < p can absorb without passing 255
    return (255 - (p - 1)) // ((p - 1) ** 2)


class Box:
    def __init__(self, p, widths):
        self.p = p
        self.widths = tuple(int(w) for w in widths)
        self.nrows = len(self.widths)
        if p == 2:
            self._mode = "bits"
            self._masks = [(1 << w) - 1 for w in self.widths]
        elif p <= 13:
            self._mode = "bytes"
            self._masks = [(1 << (8 * w)) - 1 for w in self.widths]
            self._table = bytes(i % p for i in range(256))
        else:
            self._mode = "list"
        self._clear()

    def _clear(self):
        if self._mode == "list":
            self.rows = [[0] * w for w in self.widths]
        else:
            self.rows = [0] * self.nrows

    def copy(self):
        other = Box.__new__(Box)
        other.__dict__.update(self.__dict__)
        if self._mode == "list":
            other.rows = [list(r) for r in self.rows]
        else:
            other.rows = list(self.rows)
        return other

    def set_terms(self, terms):
        self._clear()
        p = self.p
        for (i, j), c in terms:
            c %= p
            if not c or j >= self.nrows or i >= self.widths[j]:
                continue
            if self._mode == "bits":
                self.rows[j] ^= 1 << i
            elif self._mode == "bytes":
                cur = (self.rows[j] >> (8 * i)) & 0xFF
                self.rows[j] += (((cur + c) % p) - cur) << (8 * i)
            else:
                self.rows[j][i] = (self.rows[j][i] + c) % p
        return self

    def is_zero(self):
        if self._mode == "list":
            return not any(any(r) for r in self.rows)
        return not any(self.rows)

    def nnz(self):
        if self._mode == "bits":
            return sum(bin(r).count("1") for r in self.rows)
        if self._mode == "bytes":
            total = 0
            for j, r in enumerate(self.rows):
                if r:
                    data = r.to_bytes(self.widths[j], "little")
                    total += len(data) - data.count(0)
            return total
        return sum(sum(1 for v in r if v) for r in self.rows)

    def to_terms(self):
        out = {}
        for j, r in enumerate(self.rows):
            if self._mode == "bits":
                while r:
                    low = r & -r
                    out[(low.bit_length() - 1, j)] = 1
                    r ^= low
            elif self._mode == "bytes":
                if r:
                    for i, v in enumerate(r.to_bytes(self.widths[j], "little")):
                        if v:
                            out[(i, j)] = v
            else:
                for i, v in enumerate(r):
                    if v:
                        out[(i, j)] = v
        return out

    def mul_terms(self, terms):
        """Multiply in place by the sparse polynomial ``{(i, j): c}`` and truncate."""
        terms = [((a, b), c % self.p) for (a, b), c in terms if c % self.p]
        nrows = self.nrows
        rows = self.rows
        live = [j for j in range(nrows) if rows[j]]
        if self._mode == "bits":
            new = [0] * nrows
            for (a, b), _ in terms:
                if b >= nrows:
                    continue
                for j in live:
                    t = j + b
                    if t >= nrows:
                        break
                    new[t] ^= rows[j] << a
            masks = self._masks
            self.rows = [new[j] & masks[j] for j in range(nrows)]
        elif self._mode == "bytes":
            new = [0] * nrows
            budget = _byte_budget(self.p)
            masks = self._masks
            pending = 0
            for (a, b), c in terms:
                if b >= nrows:
                    continue
                shift = 8 * a
                for j in live:
                    t = j + b
                    if t >= nrows:
                        break
                    new[t] += c * (rows[j] << shift)
                pending += 1
                if pending == budget:
                    new = self._reduce(new)
                    pending = 0
            self.rows = self._reduce(new)
        else:
            p = self.p
            widths = self.widths
            new = [[0] * w for w in widths]
            for (a, b), c in terms:
                for j in live:
                    t = j + b
                    if t >= nrows:
                        break
                    src = rows[j]
                    dst = new[t]
                    for i in range(min(len(src), widths[t] - a)):
                        v = src[i]
                        if v:
                            dst[i + a] = (dst[i + a] + c * v) % p
            self.rows = new
        return self

    def _reduce(self, rows):
        table = self._table
        out = []
        for j, r in enumerate(rows):
            if r:
                w = self.widths[j]
                r &= self._masks[j]
                r = int.from_bytes(r.to_bytes(w, "little").translate(table), "little")
            out.append(r)
        return out
