"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Every scalar handled by this package is an element of some Q(zeta_n),
zeta_n = exp(2*pi*i/n), stored as a rational linear combination of roots of
unity in the canonical (Zumbroich) basis of Q(zeta_n) over Q.  Canonical
forms are unique, so equality is a structural comparison and zero-testing is
exact.  Elements are always kept at the minimal order that can represent
them (never an order congruent to 2 mod 4; plain rationals sit at order 1),
which keeps arithmetic in long accumulation loops cheap.

The Zumbroich basis of Q(zeta_n) consists of the roots zeta_n^e whose
residue at each prime power p^v || n avoids a forbidden digit: writing the
CRT component of e at p^v as a, the basis requires a // p^(v-1) != 0 for odd
p and a < 2^(v-1) for p = 2, v >= 2.  Any exponent can be rewritten into the
basis with the relations 1 + zeta_p + ... + zeta_p^(p-1) = 0 (shifted by a
root) and zeta_{2^v}^{2^(v-1)} = -1.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd

Rational = Fraction


@lru_cache(maxsize=None)
def _factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n as ((p, p**v), ...)."""
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            q = 1
            while m % p == 0:
                m //= p
                q *= p
            out.append((p, q))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, m))
    return tuple(out)


@lru_cache(maxsize=None)
def _crt_data(n: int) -> tuple[tuple[int, int, int], ...]:
    """Per prime power q = p**v of n: (p, q, inverse of n/q mod q)."""
    return tuple((p, q, pow(n // q, -1, q)) for p, q in _factorize(n))


@lru_cache(maxsize=None)
def _allowed_exponents(n: int) -> bytes:
    """Byte table: 1 at e iff zeta_n^e is a canonical basis element."""
    flags = bytearray([1]) * n
    for p, q, c in _crt_data(n):
        sub = q // p
        for e in range(n):
            a = (e * c) % q
            if p == 2:
                ok = q == 2 or a < sub
            else:
                ok = (a // sub) % p != 0
            if not ok:
                flags[e] = 0
    return bytes(flags)


def _reduce_terms(n: int, terms: dict[int, Fraction]) -> dict[int, Fraction]:
    """Rewrite a raw exponent->coefficient map into the canonical basis at order n."""
    allowed = _allowed_exponents(n)
    crt = _crt_data(n)
    out: dict[int, Fraction] = {}
    stack = []
    for e, c in terms.items():
        e %= n
        if allowed[e]:
            out[e] = out.get(e, 0) + c
        else:
            stack.append((e, c))
    while stack:
        e, c = stack.pop()
        for p, q, inv in crt:
            a = (e * inv) % q
            sub = q // p
            if p == 2:
                if q > 2 and a >= sub:
                    e2 = (e - n // 2) % n
                    if allowed[e2]:
                        out[e2] = out.get(e2, 0) - c
                    else:
                        stack.append((e2, -c))
                    break
            elif (a // sub) % p == 0:
                step = n // p
                for t in range(1, p):
                    e2 = (e + t * step) % n
                    if allowed[e2]:
                        out[e2] = out.get(e2, 0) - c
                    else:
                        stack.append((e2, -c))
                break
        else:
            out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def _combine(n: int, components: dict[int, int]) -> int:
    """Exponent e mod n whose CRT component (e * (n/q)^-1 mod q) is the given
    value at each prime power q of n."""
    e = 0
    for p, q, _ in _crt_data(n):
        a = components[q]
        m = n // q
        t = (a * m) % q
        e = (e + t * m * pow(m, -1, q)) % n
    return e


def _try_deflate_prime(n: int, coeffs: dict[int, Fraction], p: int, q: int):
    """Attempt to rewrite a canonical element at order n without the prime p.

    Returns (new_order, new_coeffs) or None if the element genuinely needs p.
    All bookkeeping is in CRT components: exponent e at order n corresponds
    to the component (e * inv_q) mod q at each prime power q of n.
    """
    inv_for = {qq: cc for _, qq, cc in _crt_data(n)}

    def comp(e: int, qq: int) -> int:
        return (e * inv_for[qq]) % qq

    rest_qs = [qq for pp, qq in _factorize(n) if pp != p]
    if q > p or p == 2:
        # Remove one factor of p (for p = 2 drop straight to the odd part
        # when only a factor of 4 remains, since orders 2 mod 4 are not used).
        if p == 2 and q == 4:
            if any(comp(e, q) != 0 for e in coeffs):
                return None
            n2 = n // 4
            if n2 == 1:
                return 1, dict(coeffs)
            out = {}
            for e, c in coeffs.items():
                out[_combine(n2, {qq: comp(e, qq) for qq in rest_qs})] = c
            return n2, out
        if any(comp(e, q) % p != 0 for e in coeffs):
            return None
        n2 = n // p
        q2 = q // p
        out = {}
        for e, c in coeffs.items():
            comps = {qq: comp(e, qq) for qq in rest_qs}
            comps[q2] = comp(e, q) // p
            out[_combine(n2, comps)] = c
        return n2, out
    # p odd, p || n: the element lies in Q(zeta_{n/p}) iff for every residual
    # exponent the p-components 1..p-1 all carry the same coefficient; the
    # relation sum_t zeta_p^t = -1 then collapses each group to one term.
    groups: dict[tuple, dict[int, Fraction]] = {}
    for e, c in coeffs.items():
        key = tuple(comp(e, qq) for qq in rest_qs)
        groups.setdefault(key, {})[comp(e, q)] = c
    n2 = n // p
    out = {}
    for key, slots in groups.items():
        if len(slots) != p - 1 or len(set(slots.values())) != 1:
            return None
        c = next(iter(slots.values()))
        if n2 == 1:
            out[0] = out.get(0, 0) - c
            continue
        comps = dict(zip(rest_qs, key))
        e2 = _combine(n2, comps)
        out[e2] = out.get(e2, 0) - c
    return n2, {e: c for e, c in out.items() if c}


def _deflate(n: int, coeffs: dict[int, Fraction]):
    """Find the minimal order representing a canonical element."""
    if not coeffs:
        return 1, {}
    changed = True
    while changed and n > 1:
        changed = False
        for p, q in _factorize(n):
            res = _try_deflate_prime(n, coeffs, p, q)
            if res is not None:
                n, coeffs = res
                changed = True
                break
    return n, coeffs


def _normalize_order(n: int, terms: dict[int, Fraction]):
    """Map exponents at an order 2 mod 4 onto the equivalent odd order."""
    if n % 4 != 2:
        return n, terms
    m = n // 2
    k = (m + 1) // 2
    out: dict[int, Fraction] = {}
    for e, c in terms.items():
        e2 = (e * k) % m
        c2 = -c if e % 2 else c
        out[e2] = out.get(e2, 0) + c2
    return m, out


class Cyclotomic:
    """An exact element of a cyclotomic field, immutable and always canonical."""

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order: int, coeffs: dict[int, Fraction], _canonical: bool = False):
        if not _canonical:
            order, coeffs = _normalize_order(order, coeffs)
            coeffs = _reduce_terms(order, coeffs)
            order, coeffs = _deflate(order, coeffs)
        self.order = order
        self.coeffs = coeffs
        self._hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(value) -> Cyclotomic:
        c = Fraction(value)
        return Cyclotomic(1, {0: c} if c else {}, _canonical=True)

    @staticmethod
    def zero() -> Cyclotomic:
        return Cyclotomic(1, {}, _canonical=True)

    @staticmethod
    def one() -> Cyclotomic:
        return Cyclotomic(1, {0: Fraction(1)}, _canonical=True)

    # -- predicates and conversions ---------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return self.order == 1

    def as_rational(self) -> Fraction:
        if self.order != 1:
            raise ValueError(f"not a rational number: {self}")
        return self.coeffs.get(0, Fraction(0))

    def is_integer(self) -> bool:
        return self.order == 1 and self.coeffs.get(0, Fraction(0)).denominator == 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_rational(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.order, frozenset(self.coeffs.items())))
        return self._hash

    # -- arithmetic --------------------------------------------------------

    def _lifted(self, n: int) -> dict[int, Fraction]:
        step = n // self.order
        if step == 1:
            return self.coeffs
        return {e * step: c for e, c in self.coeffs.items()}

    @staticmethod
    def _coerce(x) -> Cyclotomic:
        if isinstance(x, Cyclotomic):
            return x
        if isinstance(x, (int, Fraction)):
            return Cyclotomic.from_rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Cyclotomic")

    def __add__(self, other) -> Cyclotomic:
        other = self._coerce(other)
        n = _lcm_order(self.order, other.order)
        terms = dict(self._lifted(n))
        for e, c in other._lifted(n).items():
            terms[e] = terms.get(e, 0) + c
        return Cyclotomic(n, terms)

    __radd__ = __add__

    def __neg__(self) -> Cyclotomic:
        return Cyclotomic(self.order, {e: -c for e, c in self.coeffs.items()}, _canonical=True)

    def __sub__(self, other) -> Cyclotomic:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Cyclotomic:
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> Cyclotomic:
        other = self._coerce(other)
        if other.order == 1:
            c0 = other.coeffs.get(0)
            if c0 is None:
                return Cyclotomic.zero()
            return Cyclotomic(self.order, {e: c * c0 for e, c in self.coeffs.items()})
        if self.order == 1:
            return other.__mul__(self)
        n = _lcm_order(self.order, other.order)
        a = self._lifted(n)
        b = other._lifted(n)
        # Convolve with denominators cleared; integer arithmetic is much
        # faster than Fraction arithmetic in dense products.
        da = 1
        for c in a.values():
            da = da * c.denominator // gcd(da, c.denominator)
        db = 1
        for c in b.values():
            db = db * c.denominator // gcd(db, c.denominator)
        ia = {e: c.numerator * (da // c.denominator) for e, c in a.items()}
        ib = {e: c.numerator * (db // c.denominator) for e, c in b.items()}
        terms: dict[int, int] = {}
        for e1, c1 in ia.items():
            for e2, c2 in ib.items():
                e = e1 + e2
                if e >= n:
                    e -= n
                if e in terms:
                    terms[e] += c1 * c2
                else:
                    terms[e] = c1 * c2
        return _from_int_terms(n, terms, da * db)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Cyclotomic:
        if k < 0:
            return inverse(self) ** (-k)
        acc = Cyclotomic.one()
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base if k > 1 else base
            k >>= 1
        return acc

    def __truediv__(self, other) -> Cyclotomic:
        return self * inverse(self._coerce(other))

    def __rtruediv__(self, other) -> Cyclotomic:
        return self._coerce(other) * inverse(self)

    # -- presentation ------------------------------------------------------

    def __repr__(self) -> str:
        return f"Cyclotomic({self.order}, {format_exact(self)!r})"

    def __str__(self) -> str:
        return format_exact(self)


def _lcm_order(a: int, b: int) -> int:
    n = a * b // gcd(a, b)
    if n % 4 == 2:
        n *= 2
    return n


def _from_int_terms(order: int, terms: dict[int, int], denom: int) -> Cyclotomic:
    """Canonicalize an integer exponent map with a shared denominator."""
    order, terms = _normalize_order(order, terms)
    terms = _reduce_terms(order, terms)
    order, terms = _deflate(order, terms)
    coeffs = {e: Fraction(c, denom) for e, c in terms.items() if c}
    if not coeffs:
        return Cyclotomic(1, {}, _canonical=True)
    return Cyclotomic(order, coeffs, _canonical=True)


def cached_mul(cache: dict, a: Cyclotomic, b: Cyclotomic) -> Cyclotomic:
    """Multiply through a cache keyed by the operand pair.

    Bulk matrix work (Verlinde sums, S^2 checks) multiplies the same few
    distinct entry values over and over; memoizing the products turns a
    cubic number of dense convolutions into a handful.
    """
    key = (a, b)
    hit = cache.get(key)
    if hit is None:
        hit = a * b
        cache[key] = hit
        cache[(b, a)] = hit
    return hit


def root_of_unity(n: int, k: int = 1) -> Cyclotomic:
    """zeta_n^k as an exact element, in canonical form at minimal order."""
    if n < 1:
        raise ValueError("order must be a positive integer")
    return Cyclotomic(n, {k % n: Fraction(1)})


def conj(a: Cyclotomic) -> Cyclotomic:
    """Complex conjugation, zeta^e -> zeta^(-e) extended linearly."""
    n = a.order
    return Cyclotomic(n, {(-e) % n: c for e, c in a.coeffs.items()})


def is_real(a: Cyclotomic) -> bool:
    return conj(a) == a


@lru_cache(maxsize=None)
def sqrt_int(m: int) -> Cyclotomic:
    """The positive square root of a positive integer, as a cyclotomic.

    Built multiplicatively from primes: sqrt(2) = zeta_8 + zeta_8^-1, and for
    an odd prime p the quadratic Gauss sum sum_a zeta_p^(a^2) equals sqrt(p)
    for p = 1 mod 4 and i*sqrt(p) for p = 3 mod 4 (corrected by zeta_4^-1).
    The sign is pinned to the positive real embedding.
    """
    if m < 1:
        raise ValueError("argument must be a positive integer")
    result = Cyclotomic.one()
    rational_part = 1
    for p, q in _factorize(m):
        v = 0
        while q > 1:
            q //= p
            v += 1
        rational_part *= p ** (v // 2)
        if v % 2:
            result = result * _sqrt_prime(p)
    result = result * Fraction(rational_part)
    if embed(result).real < 0:
        result = -result
    return result


def _sqrt_prime(p: int) -> Cyclotomic:
    if p == 2:
        return root_of_unity(8, 1) + root_of_unity(8, 7)
    terms: dict[int, Fraction] = {}
    for a in range(p):
        e = (a * a) % p
        terms[e] = terms.get(e, 0) + 1
    g = Cyclotomic(p, terms)
    if p % 4 == 3:
        g = g * root_of_unity(4, 3)
    if embed(g).real < 0:
        g = -g
    return g


def inverse(a: Cyclotomic) -> Cyclotomic:
    """The exact multiplicative inverse; raises ZeroDivisionError at 0."""
    if a.is_zero():
        raise ZeroDivisionError("division by zero cyclotomic")
    if a.order == 1:
        return Cyclotomic.from_rational(1 / a.coeffs[0])
    # Fast path: if a * conj(a) is rational (true for all real elements and
    # for single roots of unity), the inverse is conj(a) / that rational.
    ac = conj(a)
    norm = a * ac
    if norm.order == 1:
        return ac * (1 / norm.coeffs[0])
    return _inverse_by_solve(a)


def _inverse_by_solve(a: Cyclotomic) -> Cyclotomic:
    """Solve a*x = 1 as a rational linear system over the canonical basis."""
    n = a.order
    basis = [e for e in range(n) if _allowed_exponents(n)[e]]
    index = {e: i for i, e in enumerate(basis)}
    dim = len(basis)
    cols = []
    for e in basis:
        prod = _reduce_terms(n, {(e + f) % n: c for f, c in a.coeffs.items()})
        col = [Fraction(0)] * dim
        for f, c in prod.items():
            col[index[f]] = c
        cols.append(col)
    one = _reduce_terms(n, {0: Fraction(1)})
    rhs = [Fraction(0)] * dim
    for f, c in one.items():
        rhs[index[f]] = c
    mat = [[cols[j][i] for j in range(dim)] for i in range(dim)]
    sol = _solve_rational(mat, rhs)
    if sol is None:
        raise ZeroDivisionError("element is not invertible")
    return Cyclotomic(n, {basis[j]: sol[j] for j in range(dim) if sol[j]})


def _solve_rational(mat: list[list[Fraction]], rhs: list[Fraction]):
    """Gaussian elimination over Q; returns the solution vector or None."""
    dim = len(rhs)
    for col in range(dim):
        piv = next((r for r in range(col, dim) if mat[r][col]), None)
        if piv is None:
            return None
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv_p = 1 / mat[col][col]
        mat[col] = [x * inv_p for x in mat[col]]
        rhs[col] *= inv_p
        for r in range(dim):
            if r != col and mat[r][col]:
                f = mat[r][col]
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[col])]
                rhs[r] -= f * rhs[col]
    return rhs


def embed(a: Cyclotomic, precision: int | None = None) -> complex:
    """Floating-point image sum c_e * exp(2*pi*i*e/n), for reports and cross-checks."""
    n = a.order
    z = 0j
    for e, c in a.coeffs.items():
        z += float(c) * cmath.exp(2j * cmath.pi * e / n)
    if precision is not None:
        z = complex(round(z.real, precision), round(z.imag, precision))
    return z


def format_exact(a: Cyclotomic) -> str:
    """Render in the scalar expression grammar: rationals and E(n)^k terms.

    The output parses back to an equal element, which keeps serialized data
    files exact and byte-stable.
    """
    if a.is_zero():
        return "0"
    n = a.order
    parts = []
    for e in sorted(a.coeffs):
        c = a.coeffs[e]
        if e == 0:
            term = _format_fraction(abs(c))
        else:
            root = f"E({n})" if e == 1 else f"E({n})^{e}"
            if abs(c) == 1:
                term = root
            else:
                term = f"{_format_fraction(abs(c))}*{root}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, term))
    first_sign, first_term = parts[0]
    out = ("-" if first_sign == "-" else "") + first_term
    for sign, term in parts[1:]:
        out += sign + term
    return out


def _format_fraction(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


# -- raw-term helpers for accumulation loops -------------------------------
#
# Long sums of many small products (the fusion-coefficient loops) avoid one
# canonicalization per addition by accumulating raw exponent maps at a fixed
# common order and canonicalizing once at the end.

def lift_terms(a: Cyclotomic, order: int) -> dict[int, Fraction]:
    """Exponent map of `a` rescaled to a compatible larger order."""
    if order % a.order:
        raise ValueError("target order must be a multiple of the element order")
    return a._lifted(order)


def mul_into(dest: dict[int, Fraction], a: dict[int, Fraction],
             b: dict[int, Fraction], order: int) -> None:
    """dest += a * b, all raw exponent maps at the same order."""
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            if e >= order:
                e -= order
            if e in dest:
                dest[e] += c1 * c2
            else:
                dest[e] = c1 * c2


def from_terms(order: int, terms: dict[int, Fraction]) -> Cyclotomic:
    """Canonicalize a raw accumulation into a Cyclotomic."""
    return Cyclotomic(order, terms)
