"""Truncated Hahn series: finite sums of complex-coefficient powers of t.

A series is ``c1*t^e1 + ... + cn*t^en`` with real exponents kept as exact
:class:`fractions.Fraction` values in strictly decreasing order.  The variable
t is large (t -> infinity), so the first stored term dominates.  Every series
carries a truncation marker ``trunc``: terms at exponents <= trunc have been
discarded by some windowed operation (inversion, square root) and are unknown.
``trunc = -inf`` means the series is exact.

Exponents are never floats internally; comparisons on them are exact, which is
what makes case analysis on leading exponents (alpha > 0 versus alpha = 0)
trustworthy.  Coefficients are ordinary complex floats, merged with a relative
tolerance of 1e-12 so that cancellations like ``sigma * (1/sigma) - 1`` do not
leave dust terms behind.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

NEG_INF = float("-inf")

COEFF_MERGE_RTOL = 1e-12

ExponentLike = Union[int, float, str, Fraction]
TruncLike = Union[int, float, str, Fraction]


class SeriesParseError(ValueError):
    """Malformed series text; carries the offending character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class InconclusiveTruncation(Exception):
    """A zero test hit the truncation horizon.

    The stored terms vanish but lower-order terms were discarded, so whether
    the quantity is actually zero is unknowable at this precision.  Raised
    instead of guessing a branch.
    """


def as_exponent(e: ExponentLike) -> Fraction:
    """Convert an exponent-like value to an exact Fraction.

    Floats convert via their exact binary expansion; strings via decimal
    parsing ("0.5", "1/3" both work).
    """
    if isinstance(e, Fraction):
        return e
    if isinstance(e, int):
        return Fraction(e)
    if isinstance(e, str):
        return Fraction(e)
    if isinstance(e, float):
        if e != e or e in (float("inf"), NEG_INF):
            raise ValueError(f"exponent must be finite, got {e}")
        return Fraction(e)
    raise TypeError(f"cannot interpret {e!r} as an exponent")


def _as_trunc(t: TruncLike) -> Union[Fraction, float]:
    if isinstance(t, float) and t == NEG_INF:
        return NEG_INF
    return as_exponent(t)


def _clean(c: complex) -> complex:
    # normalizes -0.0 components so printed forms are stable
    return complex(c.real + 0.0, c.imag + 0.0)


@dataclass(frozen=True)
class HahnTerm:
    exponent: Fraction
    coefficient: complex


class HahnSeries:
    """Immutable truncated series; use module functions or operators."""

    __slots__ = ("terms", "trunc")

    def __init__(
        self,
        terms: Iterable[Tuple[ExponentLike, complex]] = (),
        trunc: TruncLike = NEG_INF,
    ):
        tr = _as_trunc(trunc)
        merged: dict[Fraction, complex] = {}
        scale: dict[Fraction, float] = {}
        for e, c in terms:
            ef = as_exponent(e)
            cc = complex(c)
            merged[ef] = merged.get(ef, 0j) + cc
            scale[ef] = max(scale.get(ef, 0.0), abs(cc))
        kept = []
        for e, c in merged.items():
            if e <= tr:
                continue
            if abs(c) == 0.0 or abs(c) <= COEFF_MERGE_RTOL * scale[e]:
                continue
            kept.append(HahnTerm(e, _clean(c)))
        kept.sort(key=lambda t: t.exponent, reverse=True)
        object.__setattr__(self, "terms", tuple(kept))
        object.__setattr__(self, "trunc", tr)

    @classmethod
    def _from_sorted(cls, terms: Tuple[HahnTerm, ...], trunc) -> "HahnSeries":
        # fast path for callers that guarantee sorted, merged, nonzero terms
        # strictly above trunc
        obj = object.__new__(cls)
        object.__setattr__(obj, "terms", terms)
        object.__setattr__(obj, "trunc", trunc)
        return obj

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("HahnSeries is immutable")

    # ---- queries ----------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.trunc == NEG_INF

    def has_terms(self) -> bool:
        return bool(self.terms)

    def definitely_zero(self) -> bool:
        """True iff provably zero; raises at the truncation horizon."""
        if self.terms:
            return False
        if self.is_exact:
            return True
        raise InconclusiveTruncation(
            "series vanishes on stored terms but is truncated below "
            f"t^{self.trunc}; zero test is inconclusive"
        )

    def lead_exponent(self) -> Fraction:
        if not self.terms:
            raise ValueError("zero series has no leading term")
        return self.terms[0].exponent

    def coefficient_at(self, e: ExponentLike) -> complex:
        ef = as_exponent(e)
        for t in self.terms:
            if t.exponent == ef:
                return t.coefficient
        return 0j

    # ---- operators --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, HahnSeries):
            return add(self, other)
        if isinstance(other, (int, float, complex)):
            return add(self, constant(other))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        terms = tuple(HahnTerm(t.exponent, -t.coefficient) for t in self.terms)
        return HahnSeries._from_sorted(terms, self.trunc)

    def __sub__(self, other):
        if isinstance(other, HahnSeries):
            return add(self, -other)
        if isinstance(other, (int, float, complex)):
            return add(self, constant(-other))
        return NotImplemented

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, HahnSeries):
            return mul(self, other)
        if isinstance(other, (int, float, complex)):
            if other == 0:
                return HahnSeries._from_sorted((), self.trunc)
            terms = tuple(
                HahnTerm(t.exponent, t.coefficient * other) for t in self.terms
            )
            return HahnSeries._from_sorted(terms, self.trunc)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, HahnSeries):
            return NotImplemented
        return self.terms == other.terms and self.trunc == other.trunc

    def __repr__(self):
        body = print_series(self)
        if self.is_exact:
            return f"HahnSeries({body!r})"
        return f"HahnSeries({body!r}, trunc={self.trunc})"

    def __str__(self):
        return print_series(self)


# ---- constructors ---------------------------------------------------------


def zero() -> HahnSeries:
    return HahnSeries()


def one() -> HahnSeries:
    return HahnSeries([(0, 1.0)])


def constant(c: complex) -> HahnSeries:
    return HahnSeries([(0, c)])


def monomial(e: ExponentLike, c: complex = 1.0) -> HahnSeries:
    return HahnSeries([(e, c)])


def t_power(e: ExponentLike) -> HahnSeries:
    return monomial(e, 1.0)


# ---- ring operations ------------------------------------------------------


def _lcm_denominator(*series: HahnSeries) -> int:
    d = 1
    for s in series:
        for t in s.terms:
            den = t.exponent.denominator
            if den != 1:
                g = math.gcd(d, den)
                d = d // g * den
    return d


def _collect(accum, scale, denom, tr) -> HahnSeries:
    """Build a series from integer-keyed accumulated coefficients."""
    items = []
    for e_int, c in accum.items():
        if abs(c) == 0.0 or abs(c) <= COEFF_MERGE_RTOL * scale[e_int]:
            continue
        ef = Fraction(e_int, denom)
        if ef <= tr:
            continue
        items.append((e_int, ef, c))
    items.sort(key=lambda it: it[0], reverse=True)
    terms = tuple(HahnTerm(ef, _clean(c)) for _, ef, c in items)
    return HahnSeries._from_sorted(terms, tr)


def add(a: HahnSeries, b: HahnSeries) -> HahnSeries:
    tr = max(a.trunc, b.trunc)
    denom = _lcm_denominator(a, b)
    accum: dict = {}
    scale: dict = {}
    for s in (a, b):
        for t in s.terms:
            e = t.exponent.numerator * (denom // t.exponent.denominator)
            c = t.coefficient
            accum[e] = accum.get(e, 0j) + c
            mag = abs(c)
            if mag > scale.get(e, 0.0):
                scale[e] = mag
    return _collect(accum, scale, denom, tr)


def mul(a: HahnSeries, b: HahnSeries) -> HahnSeries:
    # trunc propagation: unknown tail of one factor shifted by the other's
    # leading exponent, conservatively on both sides
    tr = NEG_INF
    if a.trunc != NEG_INF:
        tr = max(tr, a.trunc + (b.lead_exponent() if b.terms else b.trunc))
    if b.trunc != NEG_INF:
        tr = max(tr, b.trunc + (a.lead_exponent() if a.terms else a.trunc))
    if not a.terms or not b.terms:
        return HahnSeries._from_sorted((), tr)
    denom = _lcm_denominator(a, b)
    ae = [(t.exponent.numerator * (denom // t.exponent.denominator), t.coefficient) for t in a.terms]
    be = [(t.exponent.numerator * (denom // t.exponent.denominator), t.coefficient) for t in b.terms]
    accum: dict = {}
    scale: dict = {}
    for ea, ca in ae:
        for eb, cb in be:
            e = ea + eb
            c = ca * cb
            accum[e] = accum.get(e, 0j) + c
            mag = abs(c)
            if mag > scale.get(e, 0.0):
                scale[e] = mag
    return _collect(accum, scale, denom, tr)


def _windowed_powers(r: HahnSeries, taylor: Sequence[complex], window: Fraction):
    """Sum taylor[k] * r^k keeping exponents >= -window.

    r must have strictly negative exponents.  Returns (series, max dropped
    exponent or None).  Each extra power lowers the leading exponent by at
    least |lead(r)|, so the loop terminates.
    """
    if r.terms and r.lead_exponent() >= 0:
        raise ValueError("tail series must have negative exponents")
    dropped: list[Fraction] = []

    def prune(s: HahnSeries) -> HahnSeries:
        kept, low = [], []
        for t in s.terms:
            (kept if t.exponent >= -window else low).append(t)
        if low:
            dropped.append(low[0].exponent)
        return HahnSeries._from_sorted(tuple(kept), s.trunc)

    acc = constant(taylor[0])
    power = one()
    k = 0
    while r.terms:
        k += 1
        if k >= len(taylor):
            break
        power = prune(mul(power, r))
        if not power.terms:
            break
        if power.lead_exponent() < -window:
            dropped.append(power.lead_exponent())
            break
        acc = add(acc, power * taylor[k])
    e_drop = max(dropped) if dropped else None
    return acc, e_drop


def _taylor_budget(r: HahnSeries, window: Fraction) -> int:
    if not r.terms:
        return 2
    gap = -r.lead_exponent()
    return int(window / gap) + 3


def invert(a: HahnSeries, depth: ExponentLike = 12) -> HahnSeries:
    """Multiplicative inverse, expanded to `depth` below the leading exponent.

    Factors the leading term c*t^e and sums the geometric series of the tail:
    (c t^e (1+r))^-1 = c^-1 t^-e * sum (-r)^k.
    """
    w = as_exponent(depth)
    if w <= 0:
        raise ValueError("depth must be positive")
    if not a.terms:
        if a.is_exact:
            raise ZeroDivisionError("division by zero series")
        raise InconclusiveTruncation("cannot invert a series with no stored terms")
    e, c = a.terms[0].exponent, a.terms[0].coefficient
    tail = HahnSeries([(t.exponent - e, t.coefficient / c) for t in a.terms[1:]])
    taylor = [(-1.0 + 0j) ** k for k in range(_taylor_budget(tail, w))]
    bracket, e_drop = _windowed_powers(tail, taylor, w)
    tr = NEG_INF
    if e_drop is not None:
        tr = e_drop - e
    if a.trunc != NEG_INF:
        tr = max(tr, a.trunc - 2 * e)
    pairs = [(t.exponent - e, t.coefficient / c) for t in bracket.terms]
    return HahnSeries(pairs, tr)


def sqrt(a: HahnSeries, depth: ExponentLike = 12) -> HahnSeries:
    """Principal square root: leading exponent halves, binomial tail.

    The leading coefficient takes its principal complex square root; the
    residual sign ambiguity is killed by the projective quotients downstream.
    """
    w = as_exponent(depth)
    if w <= 0:
        raise ValueError("depth must be positive")
    if not a.terms:
        if a.is_exact:
            raise ZeroDivisionError("square root of zero series")
        raise InconclusiveTruncation("cannot take sqrt of a series with no stored terms")
    e, c = a.terms[0].exponent, a.terms[0].coefficient
    tail = HahnSeries([(t.exponent - e, t.coefficient / c) for t in a.terms[1:]])
    n = _taylor_budget(tail, w)
    taylor = [1.0 + 0j]
    for k in range(n):
        taylor.append(taylor[-1] * (0.5 - k) / (k + 1))
    bracket, e_drop = _windowed_powers(tail, taylor, w)
    half = e / 2
    root_c = cmath.sqrt(c)
    tr = NEG_INF
    if e_drop is not None:
        tr = e_drop + half
    if a.trunc != NEG_INF:
        tr = max(tr, a.trunc - half)
    pairs = [(t.exponent + half, t.coefficient * root_c) for t in bracket.terms]
    return HahnSeries(pairs, tr)


def leading_term(a: HahnSeries) -> Tuple[Fraction, complex]:
    """(exponent, coefficient) of the dominant term."""
    if not a.terms:
        if a.is_exact:
            raise ValueError("no leading term: zero series")
        raise InconclusiveTruncation("no stored terms; leading term unknown at this truncation")
    t = a.terms[0]
    return t.exponent, t.coefficient


def evaluate(a: HahnSeries, t: float) -> complex:
    """Numeric value at a real t > 1, summed small-to-large in magnitude."""
    if not t > 1:
        raise ValueError("evaluation point must satisfy t > 1")
    vals = [term.coefficient * t ** float(term.exponent) for term in a.terms]
    vals.sort(key=abs)
    total = 0j
    for v in vals:
        total += v
    return total


def reparametrize(
    a: HahnSeries,
    gamma: ExponentLike,
    sigma: complex,
    alpha: ExponentLike,
) -> HahnSeries:
    """Field automorphism t^beta -> exp(-beta/gamma * sigma) * t^(alpha*beta/gamma).

    Fixes constants, is additive and multiplicative, and sends c*t^gamma with
    sigma = log(c) to t^alpha.  Exponent scaling is exact rational arithmetic.
    """
    g = as_exponent(gamma)
    al = as_exponent(alpha)
    if g <= 0 or al <= 0:
        raise ValueError("gamma and alpha must be positive")
    ratio = al / g
    pairs = []
    for term in a.terms:
        factor = cmath.exp(-float(term.exponent / g) * sigma)
        pairs.append((term.exponent * ratio, term.coefficient * factor))
    tr = a.trunc if a.trunc == NEG_INF else a.trunc * ratio
    return HahnSeries(pairs, tr)


# ---- parsing and printing -------------------------------------------------

_NUM = re.compile(r"(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")
_SIGNED_NUM = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")


def _num_to_fraction(text: str) -> Fraction:
    if "e" in text or "E" in text:
        mant, _, ex = text.replace("E", "e").partition("e")
        return Fraction(mant) * Fraction(10) ** int(ex)
    return Fraction(text)


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def done(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def error(self, msg: str):
        raise SeriesParseError(msg, self.pos)

    def number(self) -> float:
        m = _NUM.match(self.text, self.pos)
        if not m:
            self.error("expected a number")
        self.pos = m.end()
        return float(m.group(0))

    def signed_number_fraction(self) -> Fraction:
        m = _SIGNED_NUM.match(self.text, self.pos)
        if not m:
            self.error("expected an exponent")
        self.pos = m.end()
        return _num_to_fraction(m.group(0).lstrip("+"))


def _parse_coeff(sc: _Scanner):
    """Optional coefficient: real, imaginary (e.g. 2i, i), or (a+bi)."""
    ch = sc.peek()
    if ch == "(":
        sc.pos += 1
        sc.skip_ws()
        sign1 = 1.0
        if sc.peek() in "+-":
            sign1 = -1.0 if sc.peek() == "-" else 1.0
            sc.pos += 1
        re_part = sign1 * sc.number()
        sc.skip_ws()
        op = sc.peek()
        if op not in "+-":
            sc.error("expected '+' or '-' inside complex coefficient")
        sc.pos += 1
        sc.skip_ws()
        im_part = sc.number()
        if sc.peek() != "i":
            sc.error("expected 'i' inside complex coefficient")
        sc.pos += 1
        sc.skip_ws()
        if sc.peek() != ")":
            sc.error("expected ')' closing complex coefficient")
        sc.pos += 1
        return complex(re_part, im_part if op == "+" else -im_part)
    if ch == "i":
        sc.pos += 1
        return 1j
    if ch.isdigit() or ch == ".":
        val = sc.number()
        if sc.pos < len(sc.text) and sc.text[sc.pos] == "i":
            sc.pos += 1
            return complex(0.0, val)
        return complex(val, 0.0)
    return None


def _parse_term(sc: _Scanner):
    coeff = _parse_coeff(sc)
    exponent = Fraction(0)
    has_t = False
    if sc.peek() == "t":
        has_t = True
        sc.pos += 1
        exponent = Fraction(1)
        if sc.peek() == "^":
            sc.pos += 1
            sc.skip_ws()
            exponent = sc.signed_number_fraction()
    if coeff is None and not has_t:
        sc.error("expected a term")
    if coeff is None:
        coeff = 1.0 + 0j
    return exponent, coeff


def parse_series(text: str) -> HahnSeries:
    """Parse series text like ``t^2 + 3t^0.5 - t^-1`` or ``(1+2i)t``.

    Grammar: series := term (('+'|'-') term)*; term := coeff? ('t' ('^' real)?)?;
    coeff := real | imag | '(' real ('+'|'-') real 'i' ')'.  Whitespace is
    insignificant, a bare 't' means exponent 1, a bare coefficient exponent 0.
    Duplicate exponents merge.  Literal input is exact (trunc = -inf).
    """
    sc = _Scanner(text)
    if sc.done():
        sc.error("empty series")
    sign = 1.0
    if sc.peek() in "+-":
        sign = -1.0 if sc.peek() == "-" else 1.0
        sc.pos += 1
    pairs = []
    while True:
        e, c = _parse_term(sc)
        pairs.append((e, sign * c))
        if sc.done():
            break
        op = sc.peek()
        if op not in "+-":
            sc.error("expected '+' or '-' between terms")
        sign = -1.0 if op == "-" else 1.0
        sc.pos += 1
        if sc.done():
            sc.error("dangling sign")
    return HahnSeries(pairs)


def _format_float(x: float) -> str:
    r = repr(x)
    if r.endswith(".0"):
        r = r[:-2]
    return r


def _format_exponent(e: Fraction) -> str:
    den = e.denominator
    d2 = d5 = 0
    while den % 2 == 0:
        den //= 2
        d2 += 1
    while den % 5 == 0:
        den //= 5
        d5 += 1
    if den == 1:
        k = max(d2, d5)
        scaled = abs(e.numerator) * 10**k // e.denominator
        digits = str(scaled).rjust(k + 1, "0")
        if k:
            body = digits[:-k] + "." + digits[-k:]
            body = body.rstrip("0").rstrip(".")
        else:
            body = digits
        if len(body) <= 24:
            return ("-" if e < 0 else "") + body
    return _format_float(float(e))  # lossy fallback for wild exponents


def _format_term(e: Fraction, c: complex):
    """Returns (negate, body) with the sign pulled out when possible."""
    if e == 0:
        tpart = ""
    elif e == 1:
        tpart = "t"
    else:
        tpart = "t^" + _format_exponent(e)
    if c.imag == 0.0:
        mag = abs(c.real)
        if mag == 1.0 and tpart:
            return c.real < 0, tpart
        return c.real < 0, _format_float(mag) + tpart
    if c.real == 0.0:
        mag = abs(c.imag)
        body = ("i" if mag == 1.0 else _format_float(mag) + "i") + tpart
        return c.imag < 0, body
    op = "+" if c.imag > 0 else "-"
    body = f"({_format_float(c.real)}{op}{_format_float(abs(c.imag))}i)"
    return False, body + tpart


def print_series(a: HahnSeries) -> str:
    """Canonical descending-exponent form; parse(print(a)) == a for exact a."""
    if not a.terms:
        return "0"
    out = []
    for i, term in enumerate(a.terms):
        neg, body = _format_term(term.exponent, term.coefficient)
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)
