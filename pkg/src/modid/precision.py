"""Working-precision contexts, values with error bounds, and tail-bounded series."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import mpmath
from mpmath import mp

RIGOROUS = "rigorous"
HEURISTIC = "heuristic"


class PrecisionError(ValueError):
    pass


class ConvergenceError(ArithmeticError):
    pass


class DomainError(ValueError):
    """Raised when an argument lies outside an operation's domain."""


@dataclass(frozen=True)
class PrecisionContext:
    decimal_digits: int
    guard_digits: int = 15
    max_terms: int = 100000
    headroom: int = 0

    def __post_init__(self):
        if self.decimal_digits < 10:
            raise PrecisionError("precision too small")
        if self.guard_digits < 5:
            raise PrecisionError("guard digits must be at least 5")
        if self.max_terms < 1:
            raise PrecisionError("max_terms must be positive")

    @property
    def working_digits(self) -> int:
        return self.decimal_digits + self.guard_digits

    @property
    def eps(self):
        """Unit of the last working digit."""
        return mpmath.mpf(10) ** (-self.working_digits)

    @property
    def target(self):
        """Relative truncation target for tail-bounded series."""
        base = self.guard_digits - self.headroom
        return mpmath.mpf(10) ** (-(self.decimal_digits + self.headroom + base / 2))

    def workdps(self, extra: int = 0):
        return mp.workdps(self.working_digits + extra)

    def raised(self, extra_digits: int) -> "PrecisionContext":
        """Same output digits with `extra_digits` more internal headroom."""
        extra = max(0, int(extra_digits))
        return replace(self, guard_digits=self.guard_digits + extra,
                       headroom=self.headroom + extra)

    def with_digits(self, decimal_digits: int) -> "PrecisionContext":
        return replace(self, decimal_digits=decimal_digits)


def ctx_new(decimal_digits: int) -> PrecisionContext:
    return PrecisionContext(int(decimal_digits))


def _combine(a: str, b: str) -> str:
    return RIGOROUS if a == RIGOROUS and b == RIGOROUS else HEURISTIC


@dataclass(frozen=True)
class ValueWithError:
    """A number together with a bound on its distance from the true value.

    Arithmetic propagates bounds additively for sums and to first order for
    products and quotients.
    """

    value: object
    abs_error: object = 0
    rigor: str = RIGOROUS

    def __post_init__(self):
        err = mpmath.mpf(self.abs_error)
        if not mpmath.isfinite(err) or err < 0:
            raise ValueError("abs_error must be finite and nonnegative")
        object.__setattr__(self, "abs_error", err)
        if self.rigor not in (RIGOROUS, HEURISTIC):
            raise ValueError(f"unknown rigor flag {self.rigor!r}")

    @staticmethod
    def lift(x) -> "ValueWithError":
        if isinstance(x, ValueWithError):
            return x
        return ValueWithError(mpmath.mpmathify(x), 0, RIGOROUS)

    @property
    def rigorous(self) -> bool:
        return self.rigor == RIGOROUS

    def __add__(self, other):
        o = ValueWithError.lift(other)
        return ValueWithError(self.value + o.value, self.abs_error + o.abs_error,
                              _combine(self.rigor, o.rigor))

    __radd__ = __add__

    def __neg__(self):
        return ValueWithError(-self.value, self.abs_error, self.rigor)

    def __sub__(self, other):
        return self + (-ValueWithError.lift(other))

    def __rsub__(self, other):
        return ValueWithError.lift(other) - self

    def __mul__(self, other):
        o = ValueWithError.lift(other)
        err = abs(self.value) * o.abs_error + abs(o.value) * self.abs_error \
            + self.abs_error * o.abs_error
        return ValueWithError(self.value * o.value, err, _combine(self.rigor, o.rigor))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = ValueWithError.lift(other)
        if o.value == 0:
            raise ZeroDivisionError("division by zero value")
        q = self.value / o.value
        err = (self.abs_error + abs(q) * o.abs_error) / abs(o.value)
        return ValueWithError(q, err, _combine(self.rigor, o.rigor))

    def __rtruediv__(self, other):
        return ValueWithError.lift(other) / self

    def scale(self, c) -> "ValueWithError":
        """Multiply by an exactly known constant."""
        return ValueWithError(self.value * c, self.abs_error * abs(c), self.rigor)

    def with_error(self, extra, rigor: Optional[str] = None) -> "ValueWithError":
        return ValueWithError(self.value, self.abs_error + abs(extra),
                              rigor if rigor is not None else self.rigor)

    def heuristic(self) -> "ValueWithError":
        return ValueWithError(self.value, self.abs_error, HEURISTIC)

    def map_value(self, fn) -> "ValueWithError":
        return ValueWithError(fn(self.value), self.abs_error, self.rigor)

    def __repr__(self):
        return (f"ValueWithError({mpmath.nstr(self.value, 20)}, "
                f"±{mpmath.nstr(self.abs_error, 3)}, {self.rigor})")


def rounding_error(magnitude, ctx: PrecisionContext, ops: int = 1):
    """Bound for accumulated rounding at the current working precision."""
    return abs(magnitude) * ops * mpmath.mpf(10) ** (1 - mp.dps)


def sum_series(term: Callable[[int], object],
               tail_bound: Optional[Callable[[int], object]],
               ctx: PrecisionContext,
               start: int = 0) -> ValueWithError:
    """Sum term(start), term(start+1), ... until the remainder is negligible.

    With ``tail_bound`` (a bound on the remainder once the first n terms are
    taken) the stop is proven and the result is rigorous. Without it the
    stop is heuristic: three successive terms below the relative threshold.
    Runs at the caller's mpmath precision if it exceeds the context's.
    """
    with mp.workdps(max(mp.dps, ctx.working_digits)):
        target = ctx.target
        thresh = ctx.eps
        s = mpmath.mpf(0)
        biggest = mpmath.mpf(0)
        quiet = 0
        n = start
        count = 0
        while count < ctx.max_terms:
            t = term(n)
            s += t
            n += 1
            count += 1
            at = abs(t)
            if at > biggest:
                biggest = at
            scale = max(biggest, abs(s))
            if tail_bound is not None:
                b = tail_bound(n)
                if b is not None and mpmath.isfinite(b) and b <= target * max(1, abs(s)):
                    err = b + rounding_error(scale, ctx, count)
                    return ValueWithError(+s, err, RIGOROUS)
            else:
                if at <= thresh * abs(s) or (at == 0 and s == 0):
                    quiet += 1
                    if quiet >= 3:
                        err = 3 * at + rounding_error(scale, ctx, count)
                        return ValueWithError(+s, err, HEURISTIC)
                else:
                    quiet = 0
        raise ConvergenceError("no convergence")


def finite_sum(terms, ctx: PrecisionContext) -> ValueWithError:
    """Exact-up-to-rounding sum of finitely many terms."""
    with mp.workdps(max(mp.dps, ctx.working_digits)):
        s = mpmath.mpf(0)
        biggest = mpmath.mpf(0)
        k = 0
        for t in terms:
            s += t
            biggest = max(biggest, abs(t))
            k += 1
        return ValueWithError(+s, rounding_error(max(biggest, abs(s)), ctx, max(k, 1)), RIGOROUS)


def lost_digits(scale, value) -> float:
    """Decimal digits cancelled when terms of size `scale` produce `value`."""
    scale = abs(scale)
    value = abs(value)
    if scale == 0:
        return 0.0
    if value == 0:
        return float("inf")
    return max(0.0, float(mpmath.log10(scale / value)))


def adaptive(compute: Callable[[PrecisionContext], tuple], ctx: PrecisionContext,
             initial_extra: int = 0, max_rounds: int = 6, cap: int = 6000) -> ValueWithError:
    """Re-run `compute` with more headroom while cancellation eats the guard digits.

    `compute(c)` returns (ValueWithError, scale) where scale is the magnitude
    of the largest intermediate quantity that was combined into the value.
    `initial_extra` is an a-priori estimate of the digits that will be lost.
    """
    c = ctx.raised(initial_extra)
    res = None
    for _ in range(max_rounds):
        with c.workdps():
            res, scale = compute(c)
        headroom = c.guard_digits - ctx.guard_digits
        loss = lost_digits(scale, res.value)
        if loss <= ctx.guard_digits / 2 + headroom:
            return res
        need = (ctx.working_digits if loss == float("inf") else int(loss)) + 5
        garbage = res.abs_error >= abs(res.value) * mpmath.mpf(10) ** (-ctx.guard_digits / 2)
        if garbage:
            need = max(need, 2 * headroom + 10)
        if ctx.guard_digits + need > cap:
            break
        c = ctx.raised(need)
    return res


def is_real_input(*xs) -> bool:
    for x in xs:
        if isinstance(x, (mpmath.mpc, complex)):
            if mpmath.im(x) != 0:
                return False
    return True


def realify(v: ValueWithError, real: bool) -> ValueWithError:
    """Drop a spurious imaginary part when all inputs were real."""
    if real and isinstance(v.value, mpmath.mpc):
        return ValueWithError(mpmath.re(v.value), v.abs_error, v.rigor)
    return v


def to_mp(x):
    """Convert numbers and simple strings ("pi", "1+2i") to mpmath values."""
    if isinstance(x, ValueWithError):
        return x.value
    if isinstance(x, str):
        return parse_number(x)
    return mpmath.mpmathify(x)


def parse_number(text: str):
    s = text.strip().replace(" ", "").lower().replace("j", "i")
    if not s:
        raise ValueError("empty number")
    tokens = []
    i = 0
    # split into signed pieces: "1+2i", "-pi/2", "3e-5-0.5i"
    start = 0
    for i in range(1, len(s)):
        if s[i] in "+-" and s[i - 1] != "e":
            tokens.append(s[start:i])
            start = i
    tokens.append(s[start:])
    total = mpmath.mpf(0)
    for tok in tokens:
        # "pi" is a constant; any other "i" marks the piece as imaginary ("2i", "i/3", "pi*i")
        tok = tok.replace("pi", "π")
        imag = "i" in tok
        if imag:
            if tok.count("i") > 1:
                raise ValueError(f"cannot parse {text!r}")
            tok = tok.replace("*i", "").replace("i*", "").replace("i", "")
            body = tok.lstrip("+-")
            if body == "" or body.startswith("/"):
                tok = tok[: len(tok) - len(body)] + "1" + body
        val = _parse_real(tok)
        total += val * (mpmath.j if imag else 1)
    return total


def _parse_real(tok: str):
    sign = 1
    if tok.startswith("-"):
        sign, tok = -1, tok[1:]
    elif tok.startswith("+"):
        tok = tok[1:]
    val = mpmath.mpf(1)
    for k, part in enumerate(tok.split("/")):
        factor = mpmath.mpf(1)
        for piece in part.split("*"):
            if piece == "π":
                factor *= mpmath.pi
            elif piece.endswith("π"):
                factor *= mpmath.mpf(piece[:-1]) * mpmath.pi
            else:
                factor *= mpmath.mpf(piece)
        val = val * factor if k == 0 else val / factor
    return sign * val
