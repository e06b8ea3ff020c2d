"""Exact arithmetic in F = Q(zeta_N)(v1, ..., vm).

Elements are reduced fractions of sparse polynomials from :mod:`sympy.polys.rings`.
The multiplicative group F^x (tensored with Q) is coordinatised by a factor base of
primes of Q and pairwise coprime monic polynomials which is refined by gcd splitting
whenever a new polynomial arrives, so no factorization into irreducibles is needed.
"""

from __future__ import annotations

import logging
import math
import threading
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from sympy import I, exp, factorint, pi
from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, PolyRing

from .errors import FieldError

logger = logging.getLogger("formal_polylog.field")

INFINITY = math.inf
"""Valuation of the zero element."""

AUX_PREFIX = "_t"


def rational(value: Any) -> Any:
    """Coerce ints, Fractions, ``p/q`` strings and QQ elements into QQ."""

    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return QQ(int(num), int(den))
        return QQ(int(text))
    if isinstance(value, bool):
        raise TypeError("Booleans are not rationals.")
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return QQ(int(value.numerator), int(value.denominator))
    raise TypeError(f"Cannot interpret {value!r} as a rational number.")


def format_rational(value: Any) -> str:
    num, den = int(value.numerator), int(value.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def _coeff_key(coeff: Any) -> tuple[Any, ...]:
    if hasattr(coeff, "to_list"):
        return tuple(coeff.to_list())
    return (coeff,)


def _poly_key(poly: PolyElement) -> tuple[Any, ...]:
    terms = tuple((monom, _coeff_key(coeff)) for monom, coeff in sorted(poly.items(), reverse=True))
    degree = max((sum(monom) for monom in poly), default=-1)
    return (degree, len(terms), terms)


class FieldContext:
    """The coefficient field: variables, optional cyclotomic extension, shared factor base."""

    def __init__(
        self,
        variables: Sequence[str] = ("t",),
        *,
        cyclotomic: int = 1,
        aux_variables: int = 4,
        characteristic: int = 0,
    ) -> None:
        if characteristic != 0:
            raise FieldError("Only fields of characteristic zero are supported.", details={"p": characteristic})
        if cyclotomic < 1:
            raise FieldError("Cyclotomic level must be a positive integer.")
        user = tuple(variables)
        aux = tuple(f"{AUX_PREFIX}{index}" for index in range(1, aux_variables + 1))
        names = user + aux
        if len(set(names)) != len(names):
            raise FieldError(f"Variables must be distinct: {names}.")
        for name in user:
            if not name.isidentifier() or name.startswith("_") or name in {"zeta", "cor", "II", "Li", "inf"}:
                raise FieldError(f"Invalid variable name {name!r}.")

        self.user_variables = user
        self.aux_variables = aux
        self.variables = names
        self.cyclotomic = cyclotomic
        if cyclotomic <= 2:
            self.domain = QQ
        else:
            self.domain = QQ.algebraic_field(exp(2 * pi * I / cyclotomic))
        self.ring = PolyRing(names, self.domain, lex)
        self._index = {name: position for position, name in enumerate(names)}
        self.factor_base = FactorBase(self)
        self.zero = FieldElem(self, self.ring.zero, self.ring.one, canonical=True)
        self.one = FieldElem(self, self.ring.one, self.ring.one, canonical=True)

    def __repr__(self) -> str:
        return f"FieldContext(variables={self.user_variables!r}, cyclotomic={self.cyclotomic})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise FieldError(f"Unknown variable {name!r}.") from None

    def variable(self, name: str) -> FieldElem:
        generator = self.ring.gens[self.index(name)]
        return FieldElem(self, generator, self.ring.one, canonical=True)

    def constant(self, value: Any, denominator: int | None = None) -> FieldElem:
        """Rational constant ``value`` (or ``value/denominator``)."""

        coeff = rational(value) if denominator is None else QQ(int(value), int(denominator))
        return FieldElem(self, self.ring.ground_new(self.domain.convert(coeff)), self.ring.one, canonical=True)

    def zeta(self) -> FieldElem:
        """A primitive N-th root of unity of the context."""

        if self.cyclotomic == 1:
            return self.one
        if self.cyclotomic == 2:
            return self.constant(-1)
        element = self.domain.unit
        return FieldElem(self, self.ring.ground_new(element), self.ring.one, canonical=True)

    def roots_of_unity(self, order: int) -> list[FieldElem]:
        """All ``order``-th roots of unity, which must lie in the context."""

        # Q(zeta_N) contains the 2N-th roots of unity when N is odd
        level = self.cyclotomic * 2 if self.cyclotomic % 2 else self.cyclotomic
        if order < 1 or level % order != 0:
            raise FieldError(
                f"The {order}-th roots of unity are not available over Q(zeta_{self.cyclotomic}).",
                details={"order": order, "cyclotomic": self.cyclotomic},
            )
        top = self.zeta() if level == self.cyclotomic else -self.zeta()
        primitive = top ** (level // order)
        roots = [self.one]
        for _ in range(order - 1):
            roots.append(roots[-1] * primitive)
        return roots

    def fresh_aux(self, used: Iterable[str]) -> str:
        """First auxiliary variable not in ``used``."""

        taken = set(used)
        for name in self.aux_variables:
            if name not in taken:
                return name
        raise FieldError(
            "No free auxiliary variable left; raise PLG_AUX_VARIABLES.",
            details={"aux_variables": len(self.aux_variables)},
        )

    def parse(self, text: str) -> FieldElem:
        """Parse a scalar expression in the shared grammar."""

        from .parser import parse_scalar

        return parse_scalar(text, self)

    def to_mult_word(self, element: FieldElem) -> MultWord:
        return self.factor_base.word(element)


class FieldElem:
    """Reduced fraction num/den with monic denominator; immutable and hashable."""

    __slots__ = ("ctx", "num", "den", "_hash", "_key")

    def __init__(self, ctx: FieldContext, num: PolyElement, den: PolyElement | None = None, *, canonical: bool = False):
        if den is None:
            den = ctx.ring.one
        if not canonical:
            num, den = _canonical(ctx, num, den)
        self.ctx = ctx
        self.num = num
        self.den = den
        self._hash: int | None = None
        self._key: tuple[Any, ...] | None = None

    # arithmetic -------------------------------------------------------
    def _coerce(self, other: Any) -> FieldElem:
        if isinstance(other, FieldElem):
            if other.ctx is not self.ctx:
                raise FieldError("Elements belong to different field contexts.")
            return other
        return self.ctx.constant(other)

    def __add__(self, other: Any) -> FieldElem:
        other = self._coerce(other)
        if self.den == other.den:
            return FieldElem(self.ctx, self.num + other.num, self.den)
        return FieldElem(self.ctx, self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> FieldElem:
        return FieldElem(self.ctx, -self.num, self.den, canonical=True)

    def __sub__(self, other: Any) -> FieldElem:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> FieldElem:
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> FieldElem:
        other = self._coerce(other)
        return FieldElem(self.ctx, self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> FieldElem:
        if not self.num:
            raise FieldError("Division by zero.")
        return FieldElem(self.ctx, self.den, self.num)

    def __truediv__(self, other: Any) -> FieldElem:
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: Any) -> FieldElem:
        return self._coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> FieldElem:
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return FieldElem(self.ctx, self.num**exponent, self.den**exponent, canonical=True)

    # comparison -------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = self.ctx.constant(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.ctx is other.ctx and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((id(self.ctx), frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    @property
    def sort_key(self) -> tuple[Any, ...]:
        """Global total order: degrees first, then coefficient sequences."""

        if self._key is None:
            num_key, den_key = _poly_key(self.num), _poly_key(self.den)
            self._key = (num_key[0], den_key[0], num_key[1:], den_key[1:])
        return self._key

    def __lt__(self, other: FieldElem) -> bool:
        return self.sort_key < other.sort_key

    # predicates -------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.num

    @property
    def is_one(self) -> bool:
        return self.num == self.den

    @property
    def is_constant(self) -> bool:
        return self.num.is_ground and self.den.is_ground

    def free_variables(self) -> tuple[str, ...]:
        used = [False] * len(self.ctx.variables)
        for poly in (self.num, self.den):
            for monom in poly:
                for position, power in enumerate(monom):
                    if power:
                        used[position] = True
        return tuple(name for name, flag in zip(self.ctx.variables, used, strict=True) if flag)

    def rational_value(self) -> Any:
        """The QQ value of a rational constant."""

        if not self.is_constant:
            raise FieldError(f"{self} is not constant.")
        coeff = self.num.coeff(1) if self.num else self.ctx.domain.zero
        if hasattr(coeff, "to_list"):
            listed = coeff.to_list()
            if len(listed) > 1:
                raise FieldError(f"{self} is not rational.")
            coeff = listed[0] if listed else QQ.zero
        return QQ.convert(coeff)

    # substitution -----------------------------------------------------
    def substitute(self, name: str, value: FieldElem) -> FieldElem:
        """Replace a variable by an element; raises FieldError when the denominator vanishes."""

        position = self.ctx.index(name)
        num = _evaluate_poly(self.ctx, self.num, position, value)
        den = _evaluate_poly(self.ctx, self.den, position, value)
        if den.is_zero:
            raise FieldError(f"Denominator of {self} vanishes at {name} = {value}.")
        return num / den

    def evaluate(self, assignment: Mapping[str, Any]) -> FieldElem:
        result = self
        for name, value in assignment.items():
            result = result.substitute(name, value if isinstance(value, FieldElem) else self.ctx.constant(value))
        return result

    # printing ---------------------------------------------------------
    def __str__(self) -> str:
        num = format_poly(self.ctx, self.num)
        if self.den == self.ctx.ring.one:
            return num
        return f"({num})/({format_poly(self.ctx, self.den)})"

    def __repr__(self) -> str:
        return f"FieldElem({self})"


def _canonical(ctx: FieldContext, num: PolyElement, den: PolyElement) -> tuple[PolyElement, PolyElement]:
    if not den:
        raise FieldError("Division by zero.")
    ring = ctx.ring
    if not num:
        return ring.zero, ring.one
    if den.is_ground:
        return num.quo_ground(den.LC), ring.one
    _, num, den = num.cofactors(den)
    lead = den.LC
    if lead != ctx.domain.one:
        num = num.quo_ground(lead)
        den = den.quo_ground(lead)
    return num, den


def split_by_variable(poly: PolyElement, position: int) -> dict[int, PolyElement]:
    """Coefficients of ``poly`` as a polynomial in one variable (that variable's exponent zeroed)."""

    ring = poly.ring
    parts: dict[int, dict[tuple[int, ...], Any]] = {}
    for monom, coeff in poly.items():
        power = monom[position]
        stripped = monom[:position] + (0,) + monom[position + 1 :]
        parts.setdefault(power, {})[stripped] = coeff
    return {power: ring.from_dict(terms) for power, terms in parts.items()}


def _evaluate_poly(ctx: FieldContext, poly: PolyElement, position: int, value: FieldElem) -> FieldElem:
    parts = split_by_variable(poly, position)
    if not parts:
        return ctx.zero
    result = ctx.zero
    for power in range(max(parts), -1, -1):
        result = result * value
        coeff = parts.get(power)
        if coeff:
            result = result + FieldElem(ctx, coeff, ctx.ring.one, canonical=True)
    return result


def format_poly(ctx: FieldContext, poly: PolyElement) -> str:
    """Deterministic text for a polynomial that the shared grammar parses back."""

    if not poly:
        return "0"
    pieces: list[str] = []
    for monom, coeff in sorted(poly.items(), reverse=True):
        factors = []
        for name, power in zip(ctx.variables, monom, strict=True):
            if power == 1:
                factors.append(name)
            elif power > 1:
                factors.append(f"{name}^{power}")
        negative, text = _format_coeff(ctx, coeff)
        if factors:
            body = "*".join(factors) if text == "1" else f"{text}*{'*'.join(factors)}"
        else:
            body = text
        pieces.append(("- " if negative else "+ ") + body)
    joined = " ".join(pieces)
    return joined[2:] if joined.startswith("+ ") else "-" + joined[2:]


def _format_coeff(ctx: FieldContext, coeff: Any) -> tuple[bool, str]:
    if not hasattr(coeff, "to_list"):
        value = QQ.convert(coeff)
        return value < 0, format_rational(abs(value))
    listed = [QQ.convert(c) for c in coeff.to_list()]
    if len(listed) <= 1:
        value = listed[0] if listed else QQ.zero
        return value < 0, format_rational(abs(value))
    degree = len(listed) - 1
    parts = []
    for offset, c in enumerate(listed):
        if not c:
            continue
        power = degree - offset
        base = "zeta" if power == 1 else (f"zeta^{power}" if power else "")
        magnitude = format_rational(abs(c))
        if base and magnitude == "1":
            term = base
        elif base:
            term = f"{magnitude}*{base}"
        else:
            term = magnitude
        parts.append(("- " if c < 0 else "+ ") + term)
    joined = " ".join(parts)
    joined = joined[2:] if joined.startswith("+ ") else "-" + joined[2:]
    return False, f"({joined})"


@dataclass(frozen=True)
class Valuation:
    """Order of vanishing along ``variable`` at ``center`` (None means infinity)."""

    variable: str
    center: FieldElem | None

    @property
    def is_infinite(self) -> bool:
        return self.center is None

    def __str__(self) -> str:
        return f"nu[{self.variable}->{'inf' if self.center is None else self.center}]"


def _center_polynomial(element: FieldElem, valuation: Valuation) -> PolyElement:
    center = valuation.center
    assert center is not None
    if valuation.variable in center.free_variables():
        raise FieldError(f"Center {center} must not involve {valuation.variable}.")
    generator = element.ctx.ring.gens[element.ctx.index(valuation.variable)]
    return center.den * generator - center.num


def _exact_divisions(poly: PolyElement, divisor: PolyElement) -> int:
    count = 0
    while poly:
        quotient, remainder = poly.div(divisor)
        if remainder:
            break
        poly = quotient
        count += 1
    return count


def valuation_of(element: FieldElem, valuation: Valuation) -> int | float:
    """Discrete valuation; ``INFINITY`` for zero."""

    if element.is_zero:
        return INFINITY
    position = element.ctx.index(valuation.variable)
    if valuation.is_infinite:
        return element.den.degree(position) - element.num.degree(position)
    divisor = _center_polynomial(element, valuation)
    return _exact_divisions(element.num, divisor) - _exact_divisions(element.den, divisor)


def residue(element: FieldElem, valuation: Valuation) -> FieldElem:
    """Image of an integral element in the residue field (the remaining variables)."""

    order = valuation_of(element, valuation)
    if order < 0:
        raise FieldError(
            f"Cannot take the residue of {element} at {valuation}: valuation {order} is negative.",
            details={"valuation": int(order)},
        )
    if order > 0:
        return element.ctx.zero
    ctx = element.ctx
    position = ctx.index(valuation.variable)
    if valuation.is_infinite:
        num_parts = split_by_variable(element.num, position)
        den_parts = split_by_variable(element.den, position)
        num_degree, den_degree = max(num_parts), max(den_parts)
        if num_degree < den_degree:
            return ctx.zero
        return FieldElem(ctx, num_parts[num_degree], den_parts[den_degree])
    assert valuation.center is not None
    return element.substitute(valuation.variable, valuation.center)


# ---------------------------------------------------------------------------
# F^x tensor Q
# ---------------------------------------------------------------------------

PRIME, POLY, CONST = 0, 1, 2


def sort_key_of(key: Any) -> Any:
    """Sort key of a basis element or of a tuple of them."""

    if isinstance(key, tuple):
        return tuple(sort_key_of(part) for part in key)
    return key.sort_key


class Atom:
    """A factor-base element: a rational prime, a monic polynomial, or an algebraic constant."""

    __slots__ = ("kind", "payload", "sort_key", "_hash", "_text")

    def __init__(self, kind: int, payload: Any, key: tuple[Any, ...], text: str) -> None:
        self.kind = kind
        self.payload = payload
        self.sort_key = (1, kind, key)
        self._hash = hash(self.sort_key)
        self._text = text

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Atom) and self.sort_key == other.sort_key

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: Atom) -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return self._text

    __repr__ = __str__


class Vector:
    """Finite Q-linear combination over orderable, hashable basis keys."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Any, Any] | None = None) -> None:
        self.terms: dict[Any, Any] = {key: coeff for key, coeff in (terms or {}).items() if coeff}

    def _new(self, terms: Mapping[Any, Any]) -> Any:
        return type(self)(terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self) -> list[tuple[Any, Any]]:
        return sorted(self.terms.items(), key=lambda item: sort_key_of(item[0]))

    def coefficient(self, key: Any) -> Any:
        return self.terms.get(key, QQ.zero)

    def _combine(self, other: Vector, sign: int) -> Any:
        merged = dict(self.terms)
        for key, coeff in other.terms.items():
            merged[key] = merged.get(key, QQ.zero) + (coeff if sign > 0 else -coeff)
        return self._new(merged)

    def __add__(self, other: Any) -> Any:
        if isinstance(other, int) and other == 0:
            return self
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other: Any) -> Any:
        return self._combine(other, -1)

    def __neg__(self) -> Any:
        return self._new({key: -coeff for key, coeff in self.terms.items()})

    def __mul__(self, scalar: Any) -> Any:
        factor = rational(scalar) if not isinstance(scalar, type(QQ.one)) else scalar
        return self._new({key: coeff * factor for key, coeff in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, Vector):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]


class MultWord(Vector):
    """An element of F^x tensor Q: exponents over factor-base atoms."""

    __slots__ = ("base",)

    def __init__(self, base: FactorBase, terms: Mapping[Atom, Any] | None = None) -> None:
        super().__init__(terms)
        self.base = base

    def _new(self, terms: Mapping[Any, Any]) -> MultWord:
        return MultWord(self.base, terms)

    def rebased(self) -> MultWord:
        """Re-express retired atoms in the current base."""

        return MultWord(self.base, self.base.rebase(self.terms))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.rebased().terms
        if not isinstance(other, MultWord):
            return NotImplemented
        return self.base.rebase(self.terms) == self.base.rebase(other.terms)

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        if not self.terms:
            return "{}"
        return "{" + ", ".join(f"{atom}: {format_rational(coeff)}" for atom, coeff in self.items()) + "}"

    __repr__ = __str__


class FactorBase:
    """Pairwise coprime monic polynomials plus rational primes, refined by gcd splitting.

    Refinement is the single mutation in the system and runs under a lock. Atoms that
    get split are retired and remembered with their expression in the newer atoms, so
    words built earlier stay valid after :meth:`rebase`.
    """

    def __init__(self, ctx: FieldContext) -> None:
        self.ctx = ctx
        self._polys: dict[Atom, PolyElement] = {}
        self._retired: dict[Atom, dict[Atom, int]] = {}
        self._lock = threading.RLock()
        self._cache: dict[frozenset[Any], tuple[int, dict[Atom, Any]]] = {}
        self.generation = 0

    # atoms ------------------------------------------------------------
    def _poly_atom(self, poly: PolyElement) -> Atom:
        return Atom(POLY, poly, _poly_key(poly), format_poly(self.ctx, poly))

    @staticmethod
    def _prime_atom(prime: int) -> Atom:
        return Atom(PRIME, prime, (prime,), str(prime))

    def value(self, atom: Atom) -> FieldElem:
        """The field element an atom stands for."""

        ring = self.ctx.ring
        if atom.kind == PRIME:
            return self.ctx.constant(atom.payload)
        if atom.kind == CONST:
            return FieldElem(self.ctx, ring.ground_new(atom.payload), ring.one, canonical=True)
        return FieldElem(self.ctx, atom.payload, ring.one, canonical=True)

    def atoms(self) -> list[Atom]:
        return sorted(self._polys)

    def polynomials(self) -> list[PolyElement]:
        return [self._polys[atom] for atom in self.atoms()]

    def expand(self, atom: Atom) -> dict[Atom, int]:
        """Current-base expression of a possibly retired atom."""

        split = self._retired.get(atom)
        if split is None:
            return {atom: 1}
        result: dict[Atom, int] = {}
        for part, power in split.items():
            for leaf, leaf_power in self.expand(part).items():
                result[leaf] = result.get(leaf, 0) + power * leaf_power
        return result

    def rebase(self, terms: Mapping[Atom, Any]) -> dict[Atom, Any]:
        if not any(atom in self._retired for atom in terms):
            return {atom: coeff for atom, coeff in terms.items() if coeff}
        result: dict[Atom, Any] = {}
        for atom, coeff in terms.items():
            for leaf, power in self.expand(atom).items():
                result[leaf] = result.get(leaf, QQ.zero) + coeff * power
        return {atom: coeff for atom, coeff in result.items() if coeff}

    def retired(self) -> int:
        return len(self._retired)

    # words ------------------------------------------------------------
    def empty(self) -> MultWord:
        return MultWord(self)

    def atom_word(self, atom: Atom) -> MultWord:
        return MultWord(self, {atom: QQ.one})

    def word(self, element: FieldElem) -> MultWord:
        """to_mult_word: coordinates of a nonzero element in F^x tensor Q."""

        if element.is_zero:
            raise FieldError("The zero element has no multiplicative word.")
        numerator = self._poly_word(element.num)
        denominator = self._poly_word(element.den)
        merged = dict(numerator)
        for atom, coeff in denominator.items():
            merged[atom] = merged.get(atom, QQ.zero) - coeff
        return MultWord(self, merged)

    def _poly_word(self, poly: PolyElement) -> dict[Atom, Any]:
        key = frozenset(poly.items())
        cached = self._cache.get(key)
        if cached is not None and cached[0] == self.generation:
            return cached[1]
        if cached is not None:
            result = self.rebase(cached[1])
            self._cache[key] = (self.generation, result)
            return result
        lead = poly.LC
        result = self._constant_word(lead)
        if not poly.is_ground:
            for atom, power in self._refine(poly.quo_ground(lead)).items():
                result[atom] = result.get(atom, QQ.zero) + QQ(power)
        result = {atom: coeff for atom, coeff in result.items() if coeff}
        self._cache[key] = (self.generation, result)
        return result

    def _constant_word(self, coeff: Any) -> dict[Atom, Any]:
        domain = self.ctx.domain
        if hasattr(coeff, "to_list"):
            listed = coeff.to_list()
            if len(listed) > 1:
                if coeff ** (2 * self.ctx.cyclotomic) == domain.one:
                    return {}
                atom = Atom(CONST, coeff, _coeff_key(coeff), f"({_format_coeff(self.ctx, coeff)[1]})")
                return {atom: QQ.one}
            coeff = listed[0] if listed else QQ.zero
        value = QQ.convert(coeff)
        if not value:
            raise FieldError("The zero element has no multiplicative word.")
        result: dict[Atom, Any] = {}
        for prime, power in factorint(abs(int(value.numerator))).items():
            result[self._prime_atom(int(prime))] = QQ(int(power))
        for prime, power in factorint(int(value.denominator)).items():
            atom = self._prime_atom(int(prime))
            result[atom] = result.get(atom, QQ.zero) - QQ(int(power))
        return result

    def _refine(self, monic: PolyElement) -> dict[Atom, int]:
        """Insert a monic polynomial and return its exponents over the refined base."""

        with self._lock:
            _, factors = monic.sqf_list()
            for factor, _power in factors:
                self._insert(factor.monic())
            exponents: dict[Atom, int] = {}
            remaining = monic
            support = _support(monic)
            for atom, base_poly in list(self._polys.items()):
                if remaining.is_ground:
                    break
                if not _support(base_poly) <= support:
                    continue
                while True:
                    quotient, remainder = remaining.div(base_poly)
                    if remainder:
                        break
                    remaining = quotient
                    exponents[atom] = exponents.get(atom, 0) + 1
            if not remaining.is_ground:
                raise FieldError(f"Factor base refinement failed for {format_poly(self.ctx, monic)}.")
            return exponents

    def _insert(self, poly: PolyElement) -> None:
        queue = [poly]
        while queue:
            candidate = queue.pop()
            if candidate.is_ground:
                continue
            candidate = candidate.monic()
            support = _support(candidate)
            for atom, base_poly in list(self._polys.items()):
                if not (_support(base_poly) & support):
                    continue
                common = candidate.gcd(base_poly)
                if common.is_ground:
                    continue
                common = common.monic()
                if common == base_poly:
                    if candidate != base_poly:
                        queue.append(candidate.exquo(base_poly))
                    break
                self._retire(atom, base_poly, common)
                queue.extend([common, candidate.exquo(common)])
                break
            else:
                self._polys[self._poly_atom(candidate)] = candidate
                self.generation += 1

    def _retire(self, atom: Atom, base_poly: PolyElement, common: PolyElement) -> None:
        rest = base_poly.exquo(common).monic()
        del self._polys[atom]
        pieces = {self._poly_atom(common): 1}
        self._polys[self._poly_atom(common)] = common
        if not rest.is_ground:
            rest_atom = self._poly_atom(rest)
            pieces[rest_atom] = pieces.get(rest_atom, 0) + 1
            self._polys[rest_atom] = rest
        self._retired[atom] = pieces
        self.generation += 1
        logger.debug("op=refine retired=%s into=%s", atom, ",".join(str(p) for p in pieces))

    def is_coprime(self) -> bool:
        """Pairwise coprimality of the active polynomial atoms."""

        polys = self.polynomials()
        for left_index, left in enumerate(polys):
            for right in polys[left_index + 1 :]:
                if not left.gcd(right).is_ground:
                    return False
        return True


def _support(poly: PolyElement) -> frozenset[int]:
    used: set[int] = set()
    for monom in poly:
        used.update(position for position, power in enumerate(monom) if power)
    return frozenset(used)


def iter_words(elements: Iterable[FieldElem]) -> Iterator[MultWord]:
    for element in elements:
        yield element.ctx.factor_base.word(element)
