"""Sparse exact multivariate and Laurent polynomial arithmetic.

Polynomials are maps from exponent tuples to nonzero Fraction
coefficients. ``MultiPoly`` requires nonnegative exponents; ``LaurentPoly``
admits negative ones (needed for entries like 1/b). Only ring arithmetic,
evaluation, and coefficient extraction are provided.

Term order: graded lexicographic, variables compared by index with x1
most significant, listed leading term first.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .linalg import as_fraction


class MultiPoly:
    """Polynomial in a fixed number of variables, nonnegative exponents."""

    __slots__ = ("nvars", "terms")
    _allow_negative = False

    def __init__(self, nvars: int, terms: Mapping | None = None):
        clean = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent tuple {exps} has length != {nvars}")
            if not self._allow_negative and any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}; use LaurentPoly")
            coeff = as_fraction(coeff)
            if coeff == 0:
                continue
            clean[exps] = clean.get(exps, Fraction(0)) + coeff
            if clean[exps] == 0:
                del clean[exps]
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def zero(cls, nvars: int):
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value):
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, index: int):
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, {exps: 1})

    @classmethod
    def monomial(cls, nvars: int, exps: Sequence[int], coeff=1):
        return cls(nvars, {tuple(exps): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, MultiPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def _wrap(self, other, terms):
        cls = LaurentPoly if (self._allow_negative or getattr(other, "_allow_negative", False)) else MultiPoly
        return cls(self.nvars, terms)

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        return type(self).constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            terms[exps] = terms.get(exps, Fraction(0)) + coeff
        return self._wrap(other, terms)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        other = self._coerce(other)
        return self.__add__(-other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return self._wrap(self, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._wrap(self, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                terms[key] = terms.get(key, Fraction(0)) + c1 * c2
        return self._wrap(other, terms)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers only via explicit Laurent monomials")
        acc = type(self).constant(self.nvars, 1)
        for _ in range(n):
            acc = acc * self
        return acc

    def shift(self, index: int, amount: int = 1):
        """Multiply by a single variable power (exponent shift)."""
        terms = {}
        for exps, coeff in self.terms.items():
            e = list(exps)
            e[index] += amount
            terms[tuple(e)] = coeff
        return self._wrap(self, terms)

    def terms_sorted(self) -> list:
        """All nonzero (exponents, coefficient) pairs, leading term first."""
        return sorted(
            self.terms.items(), key=lambda item: (sum(item[0]), item[0]), reverse=True
        )

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact value at a rational point.

        Substituting 0 into a variable carrying a negative exponent raises
        ZeroDivisionError.
        """
        values = [as_fraction(v) for v in point]
        if len(values) != self.nvars:
            raise ValueError(f"point has dim {len(values)}, polynomial has {self.nvars} variables")
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            term = coeff
            for v, e in zip(values, exps):
                if e:
                    term *= v ** e
            total += term
        return total

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = point[0]
        return self.evaluate(point)

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        pieces = []
        for exps, coeff in self.terms_sorted():
            body = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e != 0
            )
            mag = abs(coeff)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            pieces.append(("-" if coeff < 0 else "+", text))
        sign, text = pieces[0]
        out = ("-" if sign == "-" else "") + text
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self):
        return f"{type(self).__name__}({self.to_str()})"


class LaurentPoly(MultiPoly):
    """Polynomial whose variables may carry negative exponents."""

    __slots__ = ()
    _allow_negative = True
