"""Sparse integer polynomials in deglex order and Groebner machinery over the integers.

A monomial is a tuple of exponents, position ``i`` holding the exponent of
``x_{i+1}``, with trailing zeros stripped so that equal monomials compare equal.
With that normalisation plain tuple comparison is lexicographic comparison of
the zero-padded exponent vectors, so ``(sum(m), m)`` is the deglex sort key.
"""

from __future__ import annotations

import math
import re
from itertools import zip_longest
from typing import Iterable, Iterator, Mapping

Monomial = tuple  # tuple[int, ...], trailing zeros stripped

ONE_MONO: Monomial = ()


class CompletionBudgetExhausted(RuntimeError):
    """Raised when Groebner completion exceeds its pair budget.

    ``partial`` holds the generator list reached so far.
    """

    def __init__(self, message: str, partial: list["Polynomial"]):
        super().__init__(message)
        self.partial = partial


# ---------------------------------------------------------------------------
# monomials


def mono(exponents: Mapping[int, int] | Iterable[int] = ()) -> Monomial:
    """Build a monomial from ``{variable: exponent}`` (1-based) or a dense sequence."""
    if isinstance(exponents, Mapping):
        if not exponents:
            return ONE_MONO
        if any(v < 1 for v in exponents):
            raise ValueError("variable indices are positive integers")
        if any(e < 0 for e in exponents.values()):
            raise ValueError("negative exponent")
        dense = [0] * max(exponents)
        for v, e in exponents.items():
            dense[v - 1] = e
        return _strip(dense)
    return _strip(list(exponents))


def _strip(dense) -> Monomial:
    k = len(dense)
    while k and dense[k - 1] == 0:
        k -= 1
    return tuple(dense[:k])


def mono_degree(m: Monomial) -> int:
    return sum(m)


def mono_exponents(m: Monomial) -> dict[int, int]:
    """Sparse view ``{variable: exponent}`` with zero exponents absent."""
    return {i + 1: e for i, e in enumerate(m) if e}


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    return tuple(x + y for x, y in zip_longest(a, b, fillvalue=0))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when ``a`` divides ``b``."""
    if len(a) > len(b):
        return False
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    """``b / a``; caller guarantees divisibility."""
    q = list(b)
    for i, x in enumerate(a):
        q[i] -= x
    return _strip(q)


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip_longest(a, b, fillvalue=0))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def deglex_key(m: Monomial) -> tuple:
    return (sum(m), m)


def deglex_compare(a: Monomial, b: Monomial) -> int:
    """Return -1, 0 or 1 as ``a`` is smaller than, equal to or larger than ``b``."""
    ka, kb = deglex_key(a), deglex_key(b)
    return (ka > kb) - (ka < kb)


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Immutable sparse polynomial with integer coefficients.

    Terms are kept as a dict ``{monomial: coefficient}``; the deglex-sorted
    view is built on demand. Zero coefficients never appear.
    """

    __slots__ = ("_d", "_sorted", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | Iterable[tuple[int, Monomial]] = ()):
        d: dict[Monomial, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else ((m, c) for c, m in terms)
        for m, c in items:
            m = _strip(list(m))
            c = d.get(m, 0) + int(c)
            if c:
                d[m] = c
            else:
                d.pop(m, None)
        self._d = d
        self._sorted = None
        self._hash = None

    @classmethod
    def _raw(cls, d: dict[Monomial, int]) -> "Polynomial":
        # d must already be canonical: stripped monomials, no zero coefficients
        p = cls.__new__(cls)
        p._d = d
        p._sorted = None
        p._hash = None
        return p

    @classmethod
    def constant(cls, c: int) -> "Polynomial":
        return cls._raw({ONE_MONO: c} if c else {})

    @classmethod
    def var(cls, i: int) -> "Polynomial":
        if i < 1:
            raise ValueError("variable indices start at 1")
        return cls._raw({mono({i: 1}): 1})

    @classmethod
    def monomial(cls, m: Monomial, c: int = 1) -> "Polynomial":
        return cls._raw({m: c} if c else {})

    @classmethod
    def product_of_vars(cls, variables: Iterable[int]) -> "Polynomial":
        exps: dict[int, int] = {}
        for v in variables:
            exps[v] = exps.get(v, 0) + 1
        return cls._raw({mono(exps): 1})

    # -- views ---------------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[int, Monomial], ...]:
        """``(coefficient, monomial)`` pairs, strictly descending in deglex."""
        if self._sorted is None:
            ms = sorted(self._d, key=deglex_key, reverse=True)
            self._sorted = tuple((self._d[m], m) for m in ms)
        return self._sorted

    def as_dict(self) -> dict[Monomial, int]:
        return dict(self._d)

    def __len__(self) -> int:
        return len(self._d)

    def __iter__(self) -> Iterator[tuple[int, Monomial]]:
        return iter(self.terms)

    def is_zero(self) -> bool:
        return not self._d

    def __bool__(self) -> bool:
        return bool(self._d)

    def is_one(self) -> bool:
        return self._d == {ONE_MONO: 1}

    def is_unit(self) -> bool:
        return len(self._d) == 1 and self._d.get(ONE_MONO) in (1, -1)

    def variables(self) -> set[int]:
        out: set[int] = set()
        for m in self._d:
            out.update(i + 1 for i, e in enumerate(m) if e)
        return out

    def total_degree(self) -> int:
        return max((sum(m) for m in self._d), default=-1)

    def leading(self) -> tuple[tuple[int, Monomial], Monomial, int]:
        """``(lt, lp, lc)``: leading term, leading power, leading coefficient."""
        if not self._d:
            raise ValueError("no leading term")
        if self._sorted is not None:
            c, m = self._sorted[0]
        else:
            m = max(self._d, key=deglex_key)
            c = self._d[m]
        return (c, m), m, c

    @property
    def lp(self) -> Monomial:
        return self.leading()[1]

    @property
    def lc(self) -> int:
        return self.leading()[2]

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        d = dict(self._d)
        for m, c in other._d.items():
            s = d.get(m, 0) + c
            if s:
                d[m] = s
            else:
                d.pop(m, None)
        return Polynomial._raw(d)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: -c for m, c in self._d.items()})

    def __sub__(self, other) -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, int):
            return self.scale(other)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        d: dict[Monomial, int] = {}
        for m1, c1 in self._d.items():
            for m2, c2 in other._d.items():
                m = mono_mul(m1, m2)
                s = d.get(m, 0) + c1 * c2
                if s:
                    d[m] = s
                else:
                    del d[m]
        return Polynomial._raw(d)

    __rmul__ = __mul__

    def scale(self, c: int) -> "Polynomial":
        if not c:
            return Polynomial._raw({})
        return Polynomial._raw({m: c * v for m, v in self._d.items()})

    def mul_term(self, c: int, m: Monomial) -> "Polynomial":
        if not c:
            return Polynomial._raw({})
        return Polynomial._raw({mono_mul(k, m): c * v for k, v in self._d.items()})

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def normalized_sign(self) -> "Polynomial":
        """Return ``self`` or ``-self`` so that the leading coefficient is positive."""
        if self._d and self.lc < 0:
            return -self
        return self

    def evaluate(self, assignment: Mapping[int, int] | list[int]) -> int:
        """Evaluate at integers; ``assignment`` maps variable ``i`` (1-based) to a value."""
        if isinstance(assignment, Mapping):
            get = assignment.__getitem__
        else:
            seq = list(assignment)

            def get(i):
                if i < 1 or i > len(seq):
                    raise KeyError(i)
                return seq[i - 1]

        total = 0
        for m, c in self._d.items():
            t = c
            for i, e in enumerate(m):
                if e:
                    try:
                        t *= get(i + 1) ** e
                    except KeyError:
                        raise KeyError(f"missing value for x{i + 1}") from None
            total += t
        return total

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._d == other._d

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def sort_key(self) -> tuple:
        """Total order on polynomials: deglex on the term sequences, then coefficients."""
        return tuple((deglex_key(m), c) for c, m in self.terms)

    def __repr__(self) -> str:
        return f"Polynomial({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


def _coerce(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, int):
        return Polynomial.constant(x)
    return NotImplemented


ZERO = Polynomial.constant(0)
ONE = Polynomial.constant(1)


def x(i: int) -> Polynomial:
    """Shorthand for the variable ``x_i``."""
    return Polynomial.var(i)


# ---------------------------------------------------------------------------
# text form


def format_mono(m: Monomial) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(f"x{i + 1}")
        elif e > 1:
            parts.append(f"x{i + 1}^{e}")
    return "*".join(parts)


def format_poly(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    out = []
    for k, (c, m) in enumerate(p.terms):
        body = format_mono(m)
        a = abs(c)
        if not body:
            body = str(a)
        elif a != 1:
            body = f"{a}*{body}"
        if k == 0:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(("+ " if c > 0 else "- ") + body)
    return " ".join(out)


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")
_FACTOR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def parse_poly(text: str) -> Polynomial:
    """Parse the text form produced by :func:`format_poly`.

    Accepts ``x1*x2^3``, ``3*x2``, ``-x1 + 2``; whitespace is free.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial")
    pos = 0
    terms: dict[Monomial, int] = {}
    first = True
    while pos < len(s):
        mt = _TERM.match(s, pos)
        if not mt or mt.end() == pos:
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
        sign, body = mt.group(1), mt.group(2).strip()
        if sign is None and not first:
            raise ValueError(f"missing operator before {body!r}")
        first = False
        coeff = -1 if sign == "-" else 1
        exps: dict[int, int] = {}
        for factor in body.split("*"):
            factor = factor.strip()
            if factor.isdigit():
                coeff *= int(factor)
                continue
            mf = _FACTOR.match(factor)
            if not mf:
                raise ValueError(f"bad factor {factor!r}")
            v = int(mf.group(1))
            if v < 1:
                raise ValueError("variable indices start at 1")
            exps[v] = exps.get(v, 0) + int(mf.group(2) or 1)
        m = mono(exps)
        c = terms.get(m, 0) + coeff
        if c:
            terms[m] = c
        else:
            terms.pop(m, None)
        pos = mt.end()
    return Polynomial._raw(terms)


# ---------------------------------------------------------------------------
# Groebner machinery


def generator_set(polys: Iterable[Polynomial]) -> list[Polynomial]:
    """Deduplicate nonzero polynomials and sort them by the fixed basis order.

    The order is descending by leading monomial, ties broken by the full
    canonical comparison; strong reduction scans the list in this order.
    """
    seen = {p for p in polys if not p.is_zero()}
    return sorted(seen, key=lambda p: p.sort_key(), reverse=True)


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    """Cancel the leading terms of ``f`` and ``g`` using lcm of powers and of coefficients."""
    if f.is_zero() or g.is_zero():
        raise ValueError("S-polynomial of the zero polynomial")
    _, pf, cf = f.leading()
    _, pg, cg = g.leading()
    X = mono_lcm(pf, pg)
    c = abs(cf * cg) // math.gcd(cf, cg)
    return f.mul_term(c // cf, mono_div(X, pf)) - g.mul_term(c // cg, mono_div(X, pg))


def gcd_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    """``u*(X/X_f)*f + v*(X/X_g)*g`` with ``u*c_f + v*c_g = gcd(c_f, c_g)``."""
    _, pf, cf = f.leading()
    _, pg, cg = g.leading()
    X = mono_lcm(pf, pg)
    _, u, v = extended_gcd(cf, cg)
    return f.mul_term(u, mono_div(X, pf)) + g.mul_term(v, mono_div(X, pg))


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, u, v)`` with ``u*a + v*b = g = gcd(a, b) >= 0`` and ``|u|`` minimal."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    g = old_r
    if g and b:
        # shift along the solution line to minimise |u|
        step = abs(b) // g
        sign_b = 1 if b > 0 else -1
        k = round(old_s / step) if step else 0
        cand = [(old_s - j * step, old_t + j * (a // g) * sign_b) for j in (k - 1, k, k + 1)]
        old_s, old_t = min(cand, key=lambda uv: (abs(uv[0]), abs(uv[1])))
    return g, old_s, old_t


def _reduce_dict(d: dict, basis: list[tuple[Monomial, int, Polynomial]]) -> dict:
    """Top-reduce ``d`` in place against ``basis`` (tuples ``(lp, lc, poly)``)."""
    while d:
        m = max(d, key=deglex_key)
        c = d[m]
        for lp, lc, b in basis:
            if c % lc == 0 and mono_divides(lp, m):
                q = c // lc
                qm = mono_div(m, lp)
                for bm, bc in b._d.items():
                    k = mono_mul(bm, qm) if qm else bm
                    s = d.get(k, 0) - q * bc
                    if s:
                        d[k] = s
                    else:
                        del d[k]
                break
        else:
            return d
    return d


def _prepared(B: Iterable[Polynomial]) -> list[tuple[Monomial, int, Polynomial]]:
    out = []
    for b in generator_set(B):
        _, lp, lc = b.leading()
        out.append((lp, lc, b))
    return out


def strong_reduce(f: Polynomial, B: Iterable[Polynomial], *, check_steps: bool = False) -> tuple[Polynomial, bool]:
    """Strongly reduce ``f`` modulo ``B`` until no leading-term step applies.

    A step needs ``lp(b) | lp(f)`` and ``lc(b) | lc(f)``; basis members are
    tried in :func:`generator_set` order. Returns ``(normal_form, is_zero)``.
    With ``check_steps`` every step is asserted to lower the leading term.
    """
    basis = _prepared(B)
    if any(b.is_zero() for _, _, b in basis):
        raise ValueError("zero polynomial in basis")
    d = dict(f._d)
    if check_steps:
        while d:
            m = max(d, key=deglex_key)
            if not _reduce_one(d, basis):
                break
            if d and not deglex_key(max(d, key=deglex_key)) < deglex_key(m):
                raise AssertionError("strong reduction did not lower the leading term")
    else:
        _reduce_dict(d, basis)
    nf = Polynomial._raw(d)
    return nf, nf.is_zero()


def _reduce_one(d: dict, basis) -> bool:
    m = max(d, key=deglex_key)
    c = d[m]
    for lp, lc, b in basis:
        if c % lc == 0 and mono_divides(lp, m):
            q = c // lc
            qm = mono_div(m, lp)
            for bm, bc in b._d.items():
                k = mono_mul(bm, qm) if qm else bm
                s = d.get(k, 0) - q * bc
                if s:
                    d[k] = s
                else:
                    del d[k]
            return True
    return False


def is_groebner_basis(B: Iterable[Polynomial]) -> bool:
    """Buchberger's criterion with S-polynomials only: every pair reduces to zero."""
    polys = generator_set(B)
    if not polys:
        raise ValueError("empty generator set")
    basis = _prepared(polys)
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            s = s_polynomial(polys[i], polys[j])
            if _reduce_dict(dict(s._d), basis):
                return False
    return True


def failing_pairs(B: Iterable[Polynomial]) -> list[tuple[Polynomial, Polynomial, Polynomial]]:
    """Pairs whose S-polynomial does not strongly reduce to zero, with the normal form."""
    polys = generator_set(B)
    basis = _prepared(polys)
    out = []
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            s = s_polynomial(polys[i], polys[j])
            r = _reduce_dict(dict(s._d), basis)
            if r:
                out.append((polys[i], polys[j], Polynomial._raw(r)))
    return out


def is_reduced_groebner_basis(B: Iterable[Polynomial]) -> bool:
    """Unit leading coefficients and no term of one member divisible by another's leading power.

    The Groebner property itself is the caller's responsibility.
    """
    polys = generator_set(B)
    lps = [p.lp for p in polys]
    if any(p.lc != 1 for p in polys):
        return False
    for i, p in enumerate(polys):
        for j, lp in enumerate(lps):
            if i == j:
                continue
            if any(mono_divides(lp, m) for m in p._d):
                return False
    return True


def groebner_complete(
    B: Iterable[Polynomial], max_pairs: int | None = 200_000, *, coprime_skip: bool = True
) -> list[Polynomial]:
    """Complete ``B`` to a strong Groebner basis of the same ideal over the integers.

    Each pair contributes its S-polynomial and, when neither leading
    coefficient divides the other, its gcd combination. Nonzero normal forms
    join the basis with positive leading coefficient. A unit short-circuits
    to ``[1]``. The result is interreduced on leading terms.

    ``coprime_skip`` drops the S-polynomial of a pair whose leading terms are
    coprime in both power and coefficient.
    """
    G: list[Polynomial] = []
    for p in generator_set(B):
        p = p.normalized_sign()
        if p.is_unit():
            return [ONE]
        G.append(p)
    if not G:
        raise ValueError("empty generator set")

    basis = [(p.lp, p.lc, p) for p in G]
    pairs: list[tuple[int, int]] = [(i, j) for j in range(len(G)) for i in range(j)]
    processed = 0
    while pairs:
        # smallest lcm first keeps intermediate degrees low
        pairs.sort(key=lambda ij: deglex_key(mono_lcm(basis[ij[0]][0], basis[ij[1]][0])), reverse=True)
        i, j = pairs.pop()
        processed += 1
        if max_pairs is not None and processed > max_pairs:
            raise CompletionBudgetExhausted("completion budget exhausted", [b for _, _, b in basis])
        pi, ci, fi = basis[i]
        pj, cj, fj = basis[j]
        candidates = []
        if not (coprime_skip and mono_coprime(pi, pj) and math.gcd(ci, cj) == 1):
            candidates.append(s_polynomial(fi, fj))
        if ci % cj and cj % ci:
            candidates.append(gcd_polynomial(fi, fj))
        for cand in candidates:
            r = _reduce_dict(dict(cand._d), basis)
            if not r:
                continue
            h = Polynomial._raw(r).normalized_sign()
            if h.is_unit():
                return [ONE]
            k = len(basis)
            basis.append((h.lp, h.lc, h))
            pairs.extend((a, k) for a in range(k))
    return _interreduce_leading([b for _, _, b in basis])


def _interreduce_leading(G: list[Polynomial]) -> list[Polynomial]:
    """Drop members whose leading term is strongly divisible by another member's."""
    G = generator_set(G)
    keep: list[Polynomial] = []
    # scan smallest leading terms first so divisors are kept
    for p in reversed(G):
        _, lp, lc = p.leading()
        if any(lc % q.lc == 0 and mono_divides(q.lp, lp) for q in keep):
            continue
        keep.append(p)
    return generator_set(keep)


def ideal_contains(G: list[Polynomial], f: Polynomial) -> bool:
    """Membership test; ``G`` must be a strong Groebner basis (e.g. from :func:`groebner_complete`)."""
    return strong_reduce(f, G)[1]


def contains_one(G: Iterable[Polynomial]) -> bool:
    return any(p.is_unit() for p in G)
