"""Sparse polynomials with exact rational coefficients in formal psi symbols."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

Number = Union[int, Fraction]


@dataclass(frozen=True, order=True)
class PsiSymbol:
    """The formal class psi_h at target half-edge ``half_edge`` anchored at ``vertex``."""

    half_edge: int
    vertex: int = field(default=-1, compare=False)

    def latex(self) -> str:
        return rf"\psi_{{{self.half_edge}}}"

    def __str__(self):
        return f"psi{self.half_edge}"


Monomial = tuple  # sorted tuple of (PsiSymbol, exponent)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    powers: dict[PsiSymbol, int] = dict(a)
    for s, e in b:
        powers[s] = powers.get(s, 0) + e
    return tuple(sorted((s, e) for s, e in powers.items() if e))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class PsiExpression:
    """Immutable, always-normalised polynomial: no zero coefficients, merged monomials."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Number] | Iterable[tuple[Monomial, Number]] = ()):
        acc: dict[Monomial, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, c in items:
            mono = _mono_mul((), mono)
            acc[mono] = acc.get(mono, Fraction(0)) + Fraction(c)
        self._terms = {m: c for m, c in sorted(acc.items()) if c != 0}

    # constructors
    @classmethod
    def constant(cls, c: Number) -> "PsiExpression":
        return cls({(): c})

    @classmethod
    def symbol(cls, s: PsiSymbol | int) -> "PsiExpression":
        if isinstance(s, int):
            s = PsiSymbol(s)
        return cls({((s, 1),): 1})

    zero = classmethod(lambda cls: cls())
    one = classmethod(lambda cls: cls.constant(1))

    # accessors
    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def coefficient(self, *symbols: PsiSymbol | int) -> Fraction:
        powers: dict[PsiSymbol, int] = {}
        for s in symbols:
            s = PsiSymbol(s) if isinstance(s, int) else s
            powers[s] = powers.get(s, 0) + 1
        return self._terms.get(tuple(sorted(powers.items())), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Largest total degree of a monomial; -1 for the zero polynomial."""
        return max((_mono_degree(m) for m in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({_mono_degree(m) for m in self._terms}) <= 1

    def symbols(self) -> set[PsiSymbol]:
        return {s for m in self._terms for s, _ in m}

    # ring operations
    def __add__(self, other):
        other = _coerce(other)
        return PsiExpression(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        out = []
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                out.append((_mono_mul(m1, m2), c1 * c2))
        return PsiExpression(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = PsiExpression.one()
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c: Number) -> "PsiExpression":
        return PsiExpression({m: v * Fraction(c) for m, v in self._terms.items()})

    def substitute(self, mapping: Mapping[PsiSymbol | int, "PsiExpression | Number"]) -> "PsiExpression":
        """Replace each mapped symbol by an expression and re-expand."""
        table = {(PsiSymbol(k) if isinstance(k, int) else k): _coerce(v) for k, v in mapping.items()}
        out = PsiExpression()
        for mono, c in self._terms.items():
            term = PsiExpression.constant(c)
            for s, e in mono:
                term = term * (table[s] ** e if s in table else PsiExpression.symbol(s) ** e)
            out = out + term
        return out

    # comparison and output
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PsiExpression.constant(other)
        if not isinstance(other, PsiExpression):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __repr__(self):
        return f"PsiExpression({self})"

    def __str__(self):
        return self._render(lambda s: str(s), "*", lambda c: str(c))

    def latex(self) -> str:
        def coeff(c: Fraction) -> str:
            if c.denominator == 1:
                return str(c.numerator)
            return rf"\frac{{{c.numerator}}}{{{c.denominator}}}"
        return self._render(lambda s: s.latex(), " ", coeff)

    def _render(self, sym, sep, coeff) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self._terms.items():
            factors = [sym(s) + (f"^{{{e}}}" if e > 1 else "") for s, e in mono]
            mag = abs(c)
            body = sep.join(factors)
            if not factors:
                text = coeff(mag)
            elif mag == 1:
                text = body
            else:
                text = coeff(mag) + sep + body
            parts.append(("-" if c < 0 else "+", text))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def to_json(self) -> list:
        return [
            {"coefficient": str(c), "monomial": [[s.half_edge, e] for s, e in mono]}
            for mono, c in self._terms.items()
        ]

    @classmethod
    def from_json(cls, data: list) -> "PsiExpression":
        return cls([(tuple((PsiSymbol(h), e) for h, e in t["monomial"]), Fraction(t["coefficient"]))
                    for t in data])


def _coerce(x) -> PsiExpression:
    if isinstance(x, PsiExpression):
        return x
    if isinstance(x, (int, Fraction)):
        return PsiExpression.constant(x)
    if isinstance(x, PsiSymbol):
        return PsiExpression.symbol(x)
    raise TypeError(f"cannot use {type(x).__name__} as a psi expression")
