"""Commutative rings with a pseudo-involution.

A pseudo-involution is an additive map ``r -> bar(r)`` with ``bar(bar(r)) = r``
and ``bar(r1*r2) = bar(r2) * bar(1)^-1 * bar(r1)``.  The distinguished unit
``bar(1)`` is called ``lam`` here.

Elements are plain Python values so that matrix code can stay cheap:

* ``int``         -- integers and integers mod n (reduced to ``[0, n)``)
* ``(a, b)``      -- ``a + b*w`` in ``Z[w]/(w^2 = D)``

Rings are immutable once built.  All arithmetic goes through the ring object.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field
from typing import Any, Callable

Element = Any


class RingError(ValueError):
    pass


class LiteralError(RingError):
    """Malformed element literal."""


class UndecidableMembership(RingError):
    """Raised when a ring cannot decide membership in {s + bar(s)}."""


class Ring:
    """Base class. Subclasses fill in the arithmetic."""

    kind: str = ""
    commutative: bool = True

    def __init__(self) -> None:
        self.zero = self.from_int(0)
        self.one = self.from_int(1)
        self.lam = self.conj(self.one)
        lam_inv = self.unit_inverse(self.lam)
        if lam_inv is None:
            raise RingError(f"bar(1) = {self.format(self.lam)} is not a unit")
        self.lam_inv = lam_inv

    # -- identity ---------------------------------------------------------
    @property
    def descriptor(self) -> str:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.descriptor!r})"

    def __eq__(self, other: object) -> bool:
        return type(self) is type(other) and self.descriptor == other.descriptor

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.descriptor))

    # -- arithmetic -------------------------------------------------------
    def from_int(self, k: int) -> Element:
        raise NotImplementedError

    def add(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def neg(self, a: Element) -> Element:
        raise NotImplementedError

    def sub(self, a: Element, b: Element) -> Element:
        return self.add(a, self.neg(b))

    def mul(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def conj(self, a: Element) -> Element:
        raise NotImplementedError

    def eq(self, a: Element, b: Element) -> bool:
        return a == b

    def is_zero(self, a: Element) -> bool:
        return a == self.zero

    def unit_inverse(self, a: Element) -> Element | None:
        """Inverse of ``a`` if it is a unit, else ``None``."""
        raise NotImplementedError

    def sum(self, items) -> Element:
        acc = self.zero
        for x in items:
            acc = self.add(acc, x)
        return acc

    def prod(self, *items: Element) -> Element:
        acc = self.one
        for x in items:
            acc = self.mul(acc, x)
        return acc

    # -- literals ---------------------------------------------------------
    def parse(self, text: str) -> Element:
        raise NotImplementedError

    def format(self, a: Element) -> str:
        raise NotImplementedError

    # -- sampling ---------------------------------------------------------
    def random(self, rng: random.Random, bound: int = 20) -> Element:
        raise NotImplementedError

    # -- form parameters --------------------------------------------------
    def is_trace_like(self, a: Element) -> bool:
        """Decide whether ``a`` lies in ``{s + bar(s) : s in R}``."""
        raise UndecidableMembership(
            f"no decider for {{s + bar(s)}} over {self.descriptor}"
        )

    def antihermitian_unit(self) -> Element | None:
        """A unit ``x`` with ``bar(x) = -x``, if the ring ships one."""
        return None


def _parse_int(text: str) -> int:
    text = text.strip()
    if not re.fullmatch(r"[+-]?\d+", text):
        raise LiteralError(f"malformed integer literal {text!r}")
    return int(text)


class Integers(Ring):
    kind = "int"

    @property
    def descriptor(self) -> str:
        return "int"

    def from_int(self, k):
        return int(k)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def conj(self, a):
        return a

    def unit_inverse(self, a):
        return a if a in (1, -1) else None

    def parse(self, text):
        return _parse_int(text)

    def format(self, a):
        return str(a)

    def random(self, rng, bound=20):
        return rng.randint(-bound, bound)

    def is_trace_like(self, a):
        return a % 2 == 0


class IntegersMod(Ring):
    kind = "mod"

    def __init__(self, modulus: int) -> None:
        if modulus < 1:
            raise RingError(f"modulus must be positive, got {modulus}")
        self.modulus = modulus
        super().__init__()

    @property
    def descriptor(self) -> str:
        return f"mod:{self.modulus}"

    def from_int(self, k):
        return int(k) % self.modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def neg(self, a):
        return -a % self.modulus

    def sub(self, a, b):
        return (a - b) % self.modulus

    def mul(self, a, b):
        return a * b % self.modulus

    def conj(self, a):
        return a

    def unit_inverse(self, a):
        if self.modulus == 1:
            return 0
        if math.gcd(a, self.modulus) != 1:
            return None
        return pow(a, -1, self.modulus)

    def parse(self, text):
        value = _parse_int(text)
        if not 0 <= value < self.modulus:
            raise LiteralError(f"{text!r} is not reduced mod {self.modulus}")
        return value

    def format(self, a):
        return str(a)

    def random(self, rng, bound=20):
        return rng.randrange(self.modulus)

    def is_trace_like(self, a):
        # {2s mod n}: everything when n is odd, the even residues otherwise.
        return self.modulus % 2 == 1 or a % 2 == 0


_QUAD_RE = re.compile(r"([+-]?\d+)([+-]\d*)w")


class QuadraticIntegers(Ring):
    """``Z[w]/(w^2 = D)`` with the standard conjugation ``a+bw -> a-bw``."""

    kind = "quad"

    def __init__(self, disc: int) -> None:
        self.disc = disc
        super().__init__()

    @property
    def descriptor(self) -> str:
        return f"quad:{self.disc}"

    def from_int(self, k):
        return (int(k), 0)

    def add(self, a, b):
        return (a[0] + b[0], a[1] + b[1])

    def neg(self, a):
        return (-a[0], -a[1])

    def sub(self, a, b):
        return (a[0] - b[0], a[1] - b[1])

    def mul(self, a, b):
        return (a[0] * b[0] + self.disc * a[1] * b[1], a[0] * b[1] + a[1] * b[0])

    def conj(self, a):
        return (a[0], -a[1])

    def norm(self, a) -> int:
        return a[0] * a[0] - self.disc * a[1] * a[1]

    def unit_inverse(self, a):
        n = self.norm(a)
        if n not in (1, -1):
            return None
        return (a[0] * n, -a[1] * n)

    def parse(self, text):
        text = text.strip().replace(" ", "")
        m = _QUAD_RE.fullmatch(text)
        if m:
            b = m.group(2)
            return (int(m.group(1)), int(b + "1") if b in "+-" else int(b))
        if re.fullmatch(r"[+-]?\d*w", text):
            b = text[:-1]
            return (0, int(b + "1") if b in ("", "+", "-") else int(b))
        try:
            return (_parse_int(text), 0)
        except LiteralError:
            raise LiteralError(f"malformed quadratic literal {text!r}") from None

    def format(self, a):
        return f"{a[0]}{a[1]:+d}w"

    def random(self, rng, bound=20):
        return (rng.randint(-bound, bound), rng.randint(-bound, bound))

    def is_trace_like(self, a):
        # s + bar(s) = 2a for s = a + bw
        return a[1] == 0 and a[0] % 2 == 0

    def antihermitian_unit(self):
        if self.disc == -1:
            return (0, 1)
        return None


class TwistedGaussian(QuadraticIntegers):
    """``Z[w]/(w^2 = -1)`` with ``bar(r) = w * conj(r)``, so ``bar(1) = w``."""

    kind = "twisted"

    def __init__(self) -> None:
        super().__init__(-1)

    @property
    def descriptor(self) -> str:
        return "twisted"

    def conj(self, a):
        # w * (a - bw) = b + aw
        return (a[1], a[0])

    def is_trace_like(self, a):
        # s + bar(s) = (a+b) + (a+b)w for s = a + bw
        return a[0] == a[1]

    def antihermitian_unit(self):
        return None


def ring_from_descriptor(text: str) -> Ring:
    """Build a ring from ``int | mod:<n> | quad:<D> | twisted``."""
    text = text.strip()
    if text == "int":
        return Integers()
    if text == "twisted":
        return TwistedGaussian()
    kind, _, arg = text.partition(":")
    try:
        value = int(arg)
    except ValueError:
        raise RingError(f"bad ring descriptor {text!r}") from None
    if kind == "mod":
        return IntegersMod(value)
    if kind == "quad":
        return QuadraticIntegers(value)
    raise RingError(f"bad ring descriptor {text!r}")


SHIPPED_DESCRIPTORS = ("int", "mod:6", "quad:-1", "twisted")


def shipped_rings() -> list[Ring]:
    return [ring_from_descriptor(d) for d in SHIPPED_DESCRIPTORS]


# ---------------------------------------------------------------------------
# axiom checking
# ---------------------------------------------------------------------------


@dataclass
class AxiomResult:
    name: str
    passed: bool = True
    counterexample: tuple[str, ...] | None = None


@dataclass
class AxiomReport:
    ring: str
    samples: int
    results: list[AxiomResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[AxiomResult]:
        return [r for r in self.results if not r.passed]


def involution_laws(ring: Ring) -> list[tuple[str, int, Callable[..., bool]]]:
    R = ring
    lam, lam_inv = R.lam, R.lam_inv
    return [
        ("involutive", 1, lambda a: R.eq(R.conj(R.conj(a)), a)),
        ("additive", 2, lambda a, b: R.eq(R.conj(R.add(a, b)), R.add(R.conj(a), R.conj(b)))),
        (
            "twisted-multiplicative",
            2,
            lambda a, b: R.eq(R.conj(R.mul(a, b)), R.prod(R.conj(b), lam_inv, R.conj(a))),
        ),
        ("lambda-unit", 0, lambda: R.eq(R.mul(lam, lam_inv), R.one) and R.eq(R.mul(lam_inv, lam), R.one)),
        ("bar-lambda-is-one", 0, lambda: R.eq(R.conj(lam), R.one)),
        ("bar-lambda-inverse", 0, lambda: R.eq(R.conj(lam_inv), R.mul(lam, lam))),
        ("commutative", 2, lambda a, b: R.eq(R.mul(a, b), R.mul(b, a))),
    ]


def check_involution_axioms(ring: Ring, sample_count: int, seed: int) -> AxiomReport:
    """Test the pseudo-involution laws on ``sample_count`` random draws."""
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    rng = random.Random(seed)
    report = AxiomReport(ring.descriptor, sample_count)
    checks = involution_laws(ring)
    results = {name: AxiomResult(name) for name, _, _ in checks}
    for _ in range(sample_count):
        a, b = ring.random(rng), ring.random(rng)
        for name, arity, law in checks:
            res = results[name]
            if not res.passed:
                continue
            args = (a, b)[:arity]
            ok = False
            try:
                ok = law(*args)
            except Exception:
                ok = False
            if not ok:
                res.passed = False
                res.counterexample = tuple(ring.format(x) for x in args)
    report.results = list(results.values())
    return report
