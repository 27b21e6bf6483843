"""Exact arithmetic: bivariate Laurent polynomials, determinants, GF(2), jets.

Rationals are :class:`fractions.Fraction`. :class:`LaurentPoly2` also accepts
any other exact coefficient ring that supports ``+ - *`` and truth testing
(the :class:`Jet` type below is used that way to differentiate whole
pipelines).
"""
from fractions import Fraction

from . import polygon
from .errors import Infeasible, NonSquare, NotDivisible, ZeroPolynomial

Rat = Fraction


def _is_zero(c):
    return not c


class LaurentPoly2:
    """Sparse Laurent polynomial in ``x`` and ``y``.

    ``terms`` maps exponent pairs ``(i, j)`` to nonzero coefficients. Instances
    are treated as immutable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for (i, j), c in dict(terms).items():
                if isinstance(c, int):
                    c = Fraction(c)
                if not _is_zero(c):
                    clean[(int(i), int(j))] = c
        self._terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, c, i=0, j=0):
        return cls({(i, j): c})

    @classmethod
    def x(cls):
        return cls({(1, 0): Fraction(1)})

    @classmethod
    def y(cls):
        return cls({(0, 1): Fraction(1)})

    @classmethod
    def zero(cls):
        return cls()

    # -- container protocol -------------------------------------------------
    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def coeff(self, i, j):
        return self._terms.get((i, j), 0)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly2):
            if isinstance(other, (int, Fraction)):
                other = LaurentPoly2.constant(other)
            else:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self._terms.items())))
        return self._hash

    # -- ring operations ----------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, LaurentPoly2):
            return other
        return LaurentPoly2.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out[k] + c if k in out else c
        return LaurentPoly2(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly2({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly2):
            if _is_zero(other):
                return LaurentPoly2()
            return LaurentPoly2({k: c * other for k, c in self._terms.items()})
        out = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                k = (i1 + i2, j1 + j2)
                p = c1 * c2
                out[k] = out[k] + p if k in out else p
        return LaurentPoly2(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials can be inverted")
            ((i, j), c), = self._terms.items()
            return LaurentPoly2({(i * n, j * n): (1 / c) ** (-n)})
        result = LaurentPoly2.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c):
        return self * c

    def shift(self, di, dj):
        """Multiply by the monomial ``x^di * y^dj``."""
        return LaurentPoly2({(i + di, j + dj): c for (i, j), c in self._terms.items()})

    def map_coefficients(self, fn):
        return LaurentPoly2({k: fn(c) for k, c in self._terms.items()})

    def divexact(self, other):
        """Exact quotient ``self / other``; raises NotDivisible otherwise.

        Repeatedly cancels the lexicographically greatest term. The quotient's
        support must fit in the exponent box implied by the two supports, which
        bounds the loop.
        """
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self:
            return LaurentPoly2()
        if len(other) == 1:
            ((i, j), c), = other._terms.items()
            inv = 1 / c
            return LaurentPoly2({(a - i, b - j): v * inv for (a, b), v in self._terms.items()})
        lo_i = min(k[0] for k in self._terms) - min(k[0] for k in other._terms)
        lo_j = min(k[1] for k in self._terms) - min(k[1] for k in other._terms)
        lead_k = max(other._terms)
        lead_c = other._terms[lead_k]
        rem = dict(self._terms)
        quot = {}
        while rem:
            k = max(rem)
            q = (k[0] - lead_k[0], k[1] - lead_k[1])
            if q[0] < lo_i or q[1] < lo_j:
                raise NotDivisible("polynomial division leaves a remainder")
            qc = rem[k] / lead_c
            quot[q] = qc
            for (a, b), c in other._terms.items():
                kk = (a + q[0], b + q[1])
                v = rem.get(kk, 0) - qc * c
                if _is_zero(v):
                    rem.pop(kk, None)
                else:
                    rem[kk] = v
        return LaurentPoly2(quot)

    # -- evaluation ---------------------------------------------------------
    def evaluate(self, x0, y0):
        total = 0
        for (i, j), c in self._terms.items():
            total = total + c * (x0 ** i) * (y0 ** j)
        return total

    # -- support & Newton polygon -------------------------------------------
    def support(self):
        return set(self._terms)

    def newton(self):
        if not self._terms:
            raise ZeroPolynomial("the zero polynomial has no Newton polygon")
        return polygon.convex_hull(self._terms)

    # -- text ---------------------------------------------------------------
    def render(self):
        return render(self)

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"LaurentPoly2({render(self)!r})"


def _monomial_text(i, j):
    parts = []
    for name, e in (("x", i), ("y", j)):
        if e == 0:
            continue
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def _fraction_text(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render(f):
    """Canonical text: terms in lexicographic (i, j) order, reduced fractions.

    >>> render(LaurentPoly2({(0, 0): 1, (1, -1): Fraction(-3, 2)}))
    '1 - 3/2*x*y^-1'
    """
    items = f.items()
    if not items:
        return "0"
    out = []
    for n, ((i, j), c) in enumerate(items):
        c = Fraction(c)
        neg = c < 0
        mag = -c if neg else c
        mono = _monomial_text(i, j)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{_fraction_text(mag)}*{mono}"
        else:
            body = _fraction_text(mag)
        if n == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f"{'-' if neg else '+'} {body}")
    return " ".join(out)


def lp_arith(a, b, op):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def lp_support(f):
    return f.support()


def lp_newton(f):
    return f.newton()


# ---------------------------------------------------------------------------
# determinants
# ---------------------------------------------------------------------------

def _check_square(m):
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise NonSquare(f"expected a nonempty square matrix, got {n} rows of lengths "
                        f"{sorted(set(len(r) for r in m))}")
    return n


def ff_det(m):
    """Fraction-free (Bareiss) determinant of a square matrix of LaurentPoly2.

    Full pivoting: the next pivot column is the remaining column with the
    fewest terms in total, and within it the nonzero entry with fewest terms;
    ties go to the lower index.
    """
    n = _check_square(m)
    a = [[LaurentPoly2._coerce(e) for e in row] for row in m]
    sign = 1
    prev = LaurentPoly2.constant(1)
    for k in range(n):
        best_col = None
        for c in range(k, n):
            entries = [a[r][c] for r in range(k, n)]
            if not any(entries):
                continue
            weight = sum(len(e) for e in entries)
            if best_col is None or weight < best_col[0]:
                best_col = (weight, c)
        if best_col is None:
            return LaurentPoly2()
        c = best_col[1]
        r = min((r for r in range(k, n) if a[r][c]), key=lambda r: (len(a[r][c]), r))
        if r != k:
            a[r], a[k] = a[k], a[r]
            sign = -sign
        if c != k:
            for row in a:
                row[c], row[k] = row[k], row[c]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                num = piv * a[i][j] - aik * a[k][j]
                a[i][j] = num.divexact(prev) if num else num
            a[i][k] = LaurentPoly2()
        prev = piv
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


def det_expand(m, one=None):
    """Division-free determinant by Laplace expansion over column subsets.

    Works over any commutative ring; costs O(n 2^n) ring multiplications, so
    it is meant for n up to about 12.
    """
    n = _check_square(m)
    if one is None:
        one = LaurentPoly2.constant(1)
    dp = {0: one}
    for r in range(n):
        nxt = {}
        for mask, acc in dp.items():
            for c in range(n):
                bit = 1 << c
                if mask & bit:
                    continue
                e = m[r][c]
                if not e:
                    continue
                # sign of inserting column c after the columns already used
                above = bin(mask >> (c + 1)).count("1")
                term = acc * e
                if above & 1:
                    term = -term
                key = mask | bit
                nxt[key] = nxt[key] + term if key in nxt else term
        dp = nxt
    full = (1 << n) - 1
    if full in dp:
        return dp[full]
    return one * 0


def rank(rows):
    """Rank of a matrix of rationals by exact Gaussian elimination."""
    a = [[Fraction(v) for v in row] for row in rows]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nrows):
            if a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        r += 1
        if r == nrows:
            break
    return r


# ---------------------------------------------------------------------------
# GF(2)
# ---------------------------------------------------------------------------

def gf2_solve(rows, targets, nvars=None):
    """Solve parity equations ``sum_{v in rows[k]} e_v = targets[k]`` over GF(2).

    A variable listed an even number of times in a row cancels. Elimination
    visits variables in increasing index and takes the lowest-index unused row
    as pivot; free variables are set to 0. Returns a list of bits, or raises
    :class:`Infeasible` with a certificate.
    """
    if len(rows) != len(targets):
        raise ValueError("rows and targets differ in length")
    masks = []
    top = -1
    for row in rows:
        m = 0
        for v in row:
            m ^= 1 << v
            top = max(top, v)
        masks.append(m)
    if nvars is None:
        nvars = top + 1
    elif top >= nvars:
        raise ValueError(f"variable index {top} out of range for {nvars} variables")
    rhs = [int(t) & 1 for t in targets]
    combo = [1 << k for k in range(len(rows))]
    used = [False] * len(rows)
    pivot_of = {}
    for v in range(nvars):
        bit = 1 << v
        p = next((k for k in range(len(rows)) if not used[k] and masks[k] & bit), None)
        if p is None:
            continue
        used[p] = True
        pivot_of[v] = p
        for k in range(len(rows)):
            if k != p and masks[k] & bit:
                masks[k] ^= masks[p]
                rhs[k] ^= rhs[p]
                combo[k] ^= combo[p]
    for k in range(len(rows)):
        if masks[k] == 0 and rhs[k]:
            cert = [i for i in range(len(rows)) if combo[k] >> i & 1]
            raise Infeasible(cert)
    sol = [0] * nvars
    for v, p in pivot_of.items():
        sol[v] = rhs[p]
    return sol


def gf2_check(rows, targets, sol):
    return all(sum(sol[v] for v in row) % 2 == (t & 1) for row, t in zip(rows, targets))


def gf2_check_certificate(rows, targets, cert):
    acc = 0
    for k in cert:
        for v in rows[k]:
            acc ^= 1 << v
    return acc == 0 and sum(targets[k] for k in cert) % 2 == 1


# ---------------------------------------------------------------------------
# first-order jets
# ---------------------------------------------------------------------------

class Jet:
    """Value plus exact first partial derivatives in a fixed set of variables."""

    __slots__ = ("value", "partials")

    def __init__(self, value, partials):
        self.value = Fraction(value)
        self.partials = tuple(Fraction(p) for p in partials)

    @classmethod
    def variable(cls, value, index, nvars):
        d = [Fraction(0)] * nvars
        d[index] = Fraction(1)
        return cls(value, d)

    @classmethod
    def constant(cls, value, nvars):
        return cls(value, (Fraction(0),) * nvars)

    def _lift(self, other):
        if isinstance(other, Jet):
            return other
        return Jet(other, (Fraction(0),) * len(self.partials))

    def __bool__(self):
        return bool(self.value) or any(self.partials)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._lift(other)
        if not isinstance(other, Jet):
            return NotImplemented
        return self.value == other.value and self.partials == other.partials

    def __hash__(self):
        return hash((self.value, self.partials))

    def __add__(self, other):
        o = self._lift(other)
        return Jet(self.value + o.value, [a + b for a, b in zip(self.partials, o.partials)])

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.value, [-a for a in self.partials])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            other = Fraction(other)
            return Jet(self.value * other, [a * other for a in self.partials])
        return Jet(self.value * other.value,
                   [self.value * b + other.value * a for a, b in zip(self.partials, other.partials)])

    __rmul__ = __mul__

    def reciprocal(self):
        if self.value == 0:
            raise ZeroDivisionError("jet with zero value is not invertible")
        inv = 1 / self.value
        f = -inv * inv
        return Jet(inv, [f * a for a in self.partials])

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            other = Fraction(other)
            return Jet(self.value / other, [a / other for a in self.partials])
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("jets only support integer powers")
        if n < 0:
            return self.reciprocal() ** (-n)
        if n == 0:
            return self._lift(1)
        v = self.value ** n
        f = n * self.value ** (n - 1)
        return Jet(v, [f * a for a in self.partials])

    def __repr__(self):
        return f"Jet({self.value}, {list(self.partials)})"
