"""Summand types besides plain rational functions.

* :class:`LogTerm` -- t(n) = log q(n) for a rational function q that tends to 1;
  overrides on q fix individual values (q(0) = 1 means t(0) = 0).
* :class:`LinearTerm` -- sum_j c_j * f_j(n) with cyclotomic constants c_j, used
  where the summand itself carries complex constants such as i or zeta_d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .cyclo import CycloValue, parse_cyclo
from .rational_expr import RationalFn, analyze_decay, compose_affine, parse

__all__ = ["LogTerm", "LinearTerm", "Term", "parse_term", "term_to_json", "decay_exponent"]


@dataclass(frozen=True)
class LogTerm:
    q: RationalFn

    def compose_affine(self, a: int, b: int) -> LogTerm:
        return LogTerm(compose_affine(self.q, a, b))

    def __add__(self, other: LogTerm) -> LogTerm:
        return LogTerm(self.q * other.q)

    def __sub__(self, other: LogTerm) -> LogTerm:
        return LogTerm(self.q / other.q)

    def scale(self, k: int) -> LogTerm:
        if k < 0:
            return LogTerm(RationalFn.constant(1) / self.q ** (-k))
        return LogTerm(self.q**k)

    def is_zero(self) -> bool:
        return self.q.is_constant() and not self.q.overrides and self.q.num == self.q.den

    def __str__(self) -> str:
        return f"log({self.q})"


@dataclass(frozen=True)
class LinearTerm:
    parts: tuple[tuple[CycloValue, RationalFn], ...]

    def __str__(self) -> str:
        return " + ".join(f"[{c}]*({f})" for c, f in self.parts)


Term = Union[RationalFn, LogTerm, LinearTerm]


def parse_term(spec) -> Term:
    """A rational expression, ``log(<rational expression>)``, or a JSON-style
    list of ``[coefficient, expression]`` pairs."""
    if isinstance(spec, (list, tuple)):
        parts = []
        for coef, expr in spec:
            parts.append((parse_cyclo(str(coef)), parse(expr)))
        return LinearTerm(tuple(parts))
    text = spec.strip()
    if text.startswith("log(") and text.endswith(")"):
        return LogTerm(parse(text[4:-1]))
    return parse(text)


def term_to_json(term: Term):
    if isinstance(term, LinearTerm):
        return [[str(c), str(f)] for c, f in term.parts]
    return str(term)


def decay_exponent(term: Term) -> float:
    """s with |t(n)| of order n**-s (inf for the zero term)."""
    if isinstance(term, RationalFn):
        if not term.num:
            return math.inf
        return term.deg_den - term.deg_num
    if isinstance(term, LogTerm):
        rep = analyze_decay(term.q)
        if rep.limit != 1:
            return -math.inf
        return rep.difference_order - 1
    return min(decay_exponent(f) for _, f in term.parts)
