"""Exact kernel for free graded-commutative algebras over Q.

Generators commute or anticommute according to the parity of their degree.
Monomials are kept in a canonical sorted form with the Koszul sign of any
reordering absorbed into the coefficient, so equality of elements is plain
dictionary equality and all arithmetic is exact (fractions.Fraction).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Optional, Tuple, Union

__all__ = [
    "Generator",
    "Monomial",
    "Element",
    "Scalar",
    "INHOMOGENEOUS",
    "UniverseError",
    "monomial_product",
    "monomial_degree",
    "monomial_name",
    "s_bits_of",
    "s_indices_of",
    "s_insertion_sign",
    "parse_generator_name",
]

# generator families in canonical order: w < sw < decorated base symbols
_FAM_W = 0
_FAM_SW = 1
_FAM_V = 2

Scalar = Union[int, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class UniverseError(ValueError):
    """Raised when an element mixes generators from incompatible models."""


class _Inhomogeneous:
    __slots__ = ()

    def __repr__(self) -> str:
        return "INHOMOGENEOUS"


#: Sentinel returned by degree computations on mixed-degree elements.
INHOMOGENEOUS = _Inhomogeneous()


def s_bits_of(indices: Iterable[int]) -> int:
    """Pack a set of decoration indices (1-based) into a bitmask."""
    bits = 0
    for i in indices:
        if i < 1:
            raise ValueError(f"decoration index must be >= 1, got {i}")
        bit = 1 << (i - 1)
        if bits & bit:
            raise ValueError(f"repeated decoration index {i}")
        bits |= bit
    return bits


def s_indices_of(bits: int) -> Tuple[int, ...]:
    """Unpack a bitmask into the sorted tuple of decoration indices."""
    out = []
    i = 1
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return tuple(out)


def s_insertion_sign(bits: int, i: int) -> int:
    """Sign (-1)^#{j in bits : j < i} picked up when s_i joins the prefix s_I.

    Decoration operators of adjacent indices anticommute, so inserting s_i
    into an increasing word costs one sign per smaller index already present.
    """
    below = bits & ((1 << (i - 1)) - 1)
    return -1 if below.bit_count() & 1 else 1


class Generator:
    """One free generator: w_i, sw_i, or an s-decorated base symbol.

    Degree of a decorated generator is the base degree minus the number of
    decorations; parity is degree mod 2.  Instances are immutable value
    objects ordered by (family, position, decoration indices).
    """

    __slots__ = ("family", "index", "base", "base_pos", "base_degree",
                 "s_bits", "degree", "key", "_ident", "_hash")

    _interned: Dict[tuple, "Generator"] = {}

    def __new__(cls, family: int, index: int, base: str, base_pos: int,
                base_degree: int, s_bits: int):
        ident = (family, index, base, base_degree, s_bits)
        cached = cls._interned.get(ident)
        if cached is not None and cached.base_pos == base_pos:
            return cached
        self = super().__new__(cls)
        cls._interned.setdefault(ident, self)
        return self

    def __init__(self, family: int, index: int, base: str, base_pos: int,
                 base_degree: int, s_bits: int):
        if hasattr(self, "family"):
            return  # interned instance already initialized
        self.family = family
        self.index = index
        self.base = base
        self.base_pos = base_pos
        self.base_degree = base_degree
        self.s_bits = s_bits
        if family == _FAM_V:
            self.degree = base_degree - s_bits.bit_count()
            self.key = (2, base_pos, s_indices_of(s_bits))
        elif family == _FAM_W:
            self.degree = 2
            self.key = (0, index, ())
        else:
            self.degree = 1
            self.key = (1, index, ())
        self._ident = (family, index, base, base_degree, s_bits)
        self._hash = hash(self._ident)

    @staticmethod
    def w(i: int) -> "Generator":
        return Generator(_FAM_W, i, "", 0, 2, 0)

    @staticmethod
    def sw(i: int) -> "Generator":
        return Generator(_FAM_SW, i, "", 0, 1, 0)

    @staticmethod
    def decorated(base: str, base_pos: int, base_degree: int,
                  s_bits: int = 0) -> "Generator":
        return Generator(_FAM_V, 0, base, base_pos, base_degree, s_bits)

    @property
    def is_w(self) -> bool:
        return self.family == _FAM_W

    @property
    def is_sw(self) -> bool:
        return self.family == _FAM_SW

    @property
    def is_decorated_base(self) -> bool:
        return self.family == _FAM_V

    @property
    def parity(self) -> int:
        return self.degree & 1

    @property
    def s_indices(self) -> Tuple[int, ...]:
        return s_indices_of(self.s_bits)

    @property
    def name(self) -> str:
        if self.family == _FAM_W:
            return f"w{self.index}"
        if self.family == _FAM_SW:
            return f"sw{self.index}"
        return "".join(f"s{i}" for i in self.s_indices) + self.base

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Generator):
            return NotImplemented
        return self._ident == other._ident

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Generator({self.name}, deg={self.degree})"


_NAME_RE = re.compile(r"^((?:s\d+)*)(w\d+|sw\d+|[A-Za-z]\w*)$")


def parse_generator_name(name: str, base_table: Dict[str, Tuple[int, int]]) -> Generator:
    """Rebuild a generator from its canonical name.

    `base_table` maps base symbol -> (declaration position, degree).  Each
    decoration index carries its own 's' prefix, so names are unambiguous
    for any rank.
    """
    m = _NAME_RE.match(name)
    if not m:
        raise ValueError(f"unparseable generator name {name!r}")
    prefix, core = m.groups()
    if core.startswith("sw") and core[2:].isdigit():
        if prefix:
            raise ValueError(f"sw generators take no decorations: {name!r}")
        return Generator.sw(int(core[2:]))
    if core.startswith("w") and core[1:].isdigit():
        if prefix:
            raise ValueError(f"w generators take no decorations: {name!r}")
        return Generator.w(int(core[1:]))
    if core not in base_table:
        raise ValueError(f"unknown base symbol {core!r} in {name!r}")
    pos, deg = base_table[core]
    bits = s_bits_of(int(tok) for tok in re.findall(r"s(\d+)", prefix))
    return Generator.decorated(core, pos, deg, bits)


# A monomial is a sorted tuple of (generator, exponent >= 1) pairs; odd
# generators always have exponent 1.  The empty tuple is the unit.
Monomial = Tuple[Tuple[Generator, int], ...]

MONOMIAL_ONE: Monomial = ()


def monomial_degree(m: Monomial) -> int:
    return sum(g.degree * e for g, e in m)


def monomial_name(m: Monomial) -> str:
    if not m:
        return "1"
    return "*".join(g.name if e == 1 else f"{g.name}^{e}" for g, e in m)


def monomial_product(a: Monomial, b: Monomial) -> Optional[Tuple[int, Monomial]]:
    """Merge two canonical monomials; returns (koszul sign, monomial) or None.

    None means the product vanishes because some odd generator would acquire
    exponent two.  The sign counts each odd factor of `b` crossing the odd
    factors of `a` that exceed it in the canonical order.
    """
    if not a:
        return 1, b
    if not b:
        return 1, a
    la, lb = len(a), len(b)
    # odd_suffix[i] = number of odd factors among a[i:]
    odd_suffix = [0] * (la + 1)
    for i in range(la - 1, -1, -1):
        odd_suffix[i] = odd_suffix[i + 1] + (a[i][0].degree & 1)
    out = []
    sign = 1
    i = j = 0
    while i < la and j < lb:
        ga, ea = a[i]
        gb, eb = b[j]
        if ga == gb:
            if ga.degree & 1:
                return None
            out.append((ga, ea + eb))
            i += 1
            j += 1
        elif ga.key <= gb.key:
            out.append(a[i])
            i += 1
        else:
            if (gb.degree & 1) and (odd_suffix[i] & 1):
                sign = -sign
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return sign, tuple(out)


def _acc(d: Dict[Monomial, Fraction], m: Monomial, c: Fraction) -> None:
    cur = d.get(m)
    if cur is None:
        if c:
            d[m] = c
    else:
        cur += c
        if cur:
            d[m] = cur
        else:
            del d[m]


class Element:
    """A finite Q-linear combination of canonical monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Monomial, Fraction]] = None, *,
                 _raw: Optional[Dict[Monomial, Fraction]] = None):
        if _raw is not None:
            self.terms = _raw
        elif terms is None:
            self.terms = {}
        else:
            self.terms = {m: Fraction(c) for m, c in terms.items() if c}

    # -- constructors ---------------------------------------------------
    @staticmethod
    def zero() -> "Element":
        return Element(_raw={})

    @staticmethod
    def one() -> "Element":
        return Element(_raw={MONOMIAL_ONE: _ONE})

    @staticmethod
    def scalar(c: Scalar) -> "Element":
        c = Fraction(c)
        return Element(_raw={MONOMIAL_ONE: c} if c else {})

    @staticmethod
    def gen(g: Generator, c: Scalar = 1) -> "Element":
        c = Fraction(c)
        return Element(_raw={((g, 1),): c} if c else {})

    @staticmethod
    def monomial(m: Monomial, c: Scalar = 1) -> "Element":
        c = Fraction(c)
        return Element(_raw={m: c} if c else {})

    # -- queries ----------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> Union[int, None, _Inhomogeneous]:
        """Common degree of all monomials, None for zero, else INHOMOGENEOUS."""
        deg: Optional[int] = None
        for m in self.terms:
            d = monomial_degree(m)
            if deg is None:
                deg = d
            elif d != deg:
                return INHOMOGENEOUS
        return deg

    def is_homogeneous(self, d: int) -> bool:
        return all(monomial_degree(m) == d for m in self.terms)

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, _ZERO)

    def generators(self) -> Iterator[Generator]:
        seen = set()
        for m in self.terms:
            for g, _ in m:
                if g not in seen:
                    seen.add(g)
                    yield g

    def items(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self.terms.items())

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        acc = dict(self.terms)
        for m, c in other.terms.items():
            _acc(acc, m, c)
        return Element(_raw=acc)

    def __sub__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        acc = dict(self.terms)
        for m, c in other.terms.items():
            _acc(acc, m, -c)
        return Element(_raw=acc)

    def __neg__(self) -> "Element":
        return Element(_raw={m: -c for m, c in self.terms.items()})

    def __mul__(self, other: Union["Element", Scalar]) -> "Element":
        if isinstance(other, Element):
            acc: Dict[Monomial, Fraction] = {}
            for ma, ca in self.terms.items():
                for mb, cb in other.terms.items():
                    r = monomial_product(ma, mb)
                    if r is None:
                        continue
                    sign, m = r
                    _acc(acc, m, ca * cb if sign > 0 else -ca * cb)
            return Element(_raw=acc)
        c = Fraction(other)
        if not c:
            return Element.zero()
        return Element(_raw={m: q * c for m, q in self.terms.items()})

    def __rmul__(self, other: Scalar) -> "Element":
        return self.__mul__(other)

    def __pow__(self, e: int) -> "Element":
        if e < 0:
            raise ValueError("negative powers are not defined")
        out = Element.one()
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"Element({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=_mono_sort_key):
            c = self.terms[m]
            name = monomial_name(m)
            if m == MONOMIAL_ONE:
                body = str(abs(c))
            elif abs(c) == 1:
                body = name
            else:
                body = f"{abs(c)}*{name}"
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _mono_sort_key(m: Monomial):
    return tuple((g.key, e) for g, e in m)
