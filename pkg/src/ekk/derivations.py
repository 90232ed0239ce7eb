"""Graded derivations of a semifree DGCA and exact derivation-space solvers.

A derivation is stored by its generator images and extended to products by
the Koszul-Leibniz rule.  Brackets are graded commutators, again reduced to
generator images.  `derivation_basis` computes the exact nullspace of the
"degree-zero derivation commuting with d" system over Q.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import Element, Generator, Monomial
from .dgca import CheckReport, Dgca, Failure, s_derivation_images

__all__ = [
    "Derivation",
    "DerivationSpaceBasis",
    "s_derivation",
    "bracket",
    "commutes_with_differential",
    "derivation_basis",
    "nullspace",
    "FULL_MODE_GENERATOR_CAP",
]

FULL_MODE_GENERATOR_CAP = 8


class Derivation:
    """A graded derivation determined by generator images."""

    __slots__ = ("degree", "images", "model", "name")

    def __init__(self, degree: int, images: Dict[Generator, Element],
                 model: Optional[Dgca] = None, name: str = ""):
        self.degree = degree
        self.images = {g: img for g, img in images.items() if not img.is_zero}
        self.model = model
        self.name = name

    def image(self, g: Generator) -> Element:
        return self.images.get(g, Element.zero())

    def apply(self, x: Element) -> Element:
        """Koszul-Leibniz extension of the generator images.

        The term that differentiates factor i carries the sign for moving a
        degree-n operator past the prefix, and a second sign for computing
        the product with the differentiated factor pulled to the end.
        """
        from .algebra import monomial_product
        n_par = self.degree & 1
        images = self.images
        acc: Dict[Monomial, Fraction] = {}
        for mono, coeff in x.items():
            total = sum(g.degree * e for g, e in mono)
            pre = 0
            for idx, (g, e) in enumerate(mono):
                img = images.get(g)
                block = g.degree * e
                if img is not None:
                    suf = (total - pre - block) & 1
                    sgn = 1
                    if n_par and (pre & 1):
                        sgn = -sgn
                    if ((n_par + g.degree) & 1) and suf:
                        sgn = -sgn
                    if e == 1:
                        cof = mono[:idx] + mono[idx + 1:]
                        c = coeff if sgn > 0 else -coeff
                    else:
                        cof = mono[:idx] + ((g, e - 1),) + mono[idx + 1:]
                        c = coeff * (e * sgn)
                    for mb, cb in img.terms.items():
                        r = monomial_product(cof, mb)
                        if r is None:
                            continue
                        s2, m2 = r
                        c2 = c * cb if s2 > 0 else -c * cb
                        cur = acc.get(m2)
                        if cur is None:
                            acc[m2] = c2
                        else:
                            cur += c2
                            if cur:
                                acc[m2] = cur
                            else:
                                del acc[m2]
                pre += block
        return Element(_raw=acc)

    def is_linear(self) -> bool:
        """True when every image lies in the span of single generators."""
        for img in self.images.values():
            for mono, _ in img.items():
                if len(mono) != 1 or mono[0][1] != 1:
                    return False
        return True

    def linear_matrix(self) -> Dict[Tuple[Generator, Generator], Fraction]:
        """Sparse matrix (source gen, target gen) -> coefficient."""
        out: Dict[Tuple[Generator, Generator], Fraction] = {}
        for g, img in self.images.items():
            for mono, c in img.items():
                if len(mono) != 1 or mono[0][1] != 1:
                    raise ValueError(f"{self.name or 'derivation'} is not linear")
                out[(g, mono[0][0])] = c
        return out

    def __add__(self, other: "Derivation") -> "Derivation":
        if self.degree != other.degree:
            raise ValueError("cannot add derivations of different degree")
        images = dict(self.images)
        for g, img in other.images.items():
            images[g] = images.get(g, Element.zero()) + img
        return Derivation(self.degree, images, self.model or other.model)

    def __rmul__(self, c) -> "Derivation":
        return Derivation(self.degree,
                          {g: img * c for g, img in self.images.items()},
                          self.model, self.name)

    def __neg__(self) -> "Derivation":
        return self.__rmul__(-1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        if self.degree != other.degree:
            return False
        keys = set(self.images) | set(other.images)
        return all(self.image(g) == other.image(g) for g in keys)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        label = self.name or f"{len(self.images)} images"
        return f"Derivation(deg={self.degree}, {label})"


def s_derivation(i: int, m: Dgca) -> Derivation:
    """The decoration operator s_i as a degree -1 derivation of m."""
    return Derivation(degree=-1, images=s_derivation_images(i, m), model=m,
                      name=f"s{i}")


def bracket(d1: Derivation, d2: Derivation) -> Derivation:
    """Graded commutator d1 d2 - (-1)^{|d1||d2|} d2 d1, as generator images."""
    model = d1.model or d2.model
    if model is None:
        raise ValueError("bracket needs a model to enumerate generators")
    sign = -1 if (d1.degree & 1) and (d2.degree & 1) else 1
    images: Dict[Generator, Element] = {}
    for g in model.generators:
        a = d1.apply(d2.image(g)) if g in d2.images else Element.zero()
        b = d2.apply(d1.image(g)) if g in d1.images else Element.zero()
        img = a - b if sign > 0 else a + b
        if not img.is_zero:
            images[g] = img
    return Derivation(d1.degree + d2.degree, images, model,
                      name=f"[{d1.name},{d2.name}]")


def commutes_with_differential(D: Derivation) -> CheckReport:
    """Residues of [d, D] on every generator of D's model."""
    if D.model is None:
        raise ValueError("derivation carries no model")
    m = D.model
    d = m.differential_derivation()
    odd = D.degree & 1
    failures = []
    for g in m.generators:
        # [d, D](g) = d(D g) - (-1)^{|D|} D(d g)
        residue = d.apply(D.image(g))
        tail = D.apply(m.diff[g])
        residue = residue + tail if odd else residue - tail
        if not residue.is_zero:
            failures.append(Failure(m.name_of(g), residue))
    return CheckReport(f"[d,{D.name or 'D'}]=0 on {m.label}", failures,
                       len(m.generators))


class DerivationSpaceBasis:
    """Basis of the degree-zero derivations commuting with the differential."""

    __slots__ = ("mode", "degree", "basis", "dimension")

    def __init__(self, mode: str, basis: List[Derivation]):
        self.mode = mode
        self.degree = 0
        self.basis = basis
        self.dimension = len(basis)

    def __repr__(self) -> str:
        return f"DerivationSpaceBasis(mode={self.mode}, dim={self.dimension})"


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------

def nullspace(rows: List[Dict[int, Fraction]], n_unknowns: int
              ) -> List[Dict[int, Fraction]]:
    """Exact nullspace basis of a sparse rational matrix.

    Rows are {column: coefficient} maps.  Returns one sparse vector per free
    column, echelon style, exact over Q.
    """
    pivots: Dict[int, Dict[int, Fraction]] = {}
    for row in rows:
        row = dict(row)
        while row:
            col = min(row)
            piv = pivots.get(col)
            if piv is None:
                inv = 1 / row[col]
                pivots[col] = {c: v * inv for c, v in row.items()}
                break
            factor = row[col]
            for c, v in piv.items():
                cur = row.get(c)
                nxt = (cur if cur is not None else Fraction(0)) - factor * v
                if nxt:
                    row[c] = nxt
                elif cur is not None:
                    del row[c]
    free_cols = [c for c in range(n_unknowns) if c not in pivots]
    basis = []
    for fc in free_cols:
        vec = {fc: Fraction(1)}
        # back-substitute in increasing pivot order from the bottom up
        for pc in sorted(pivots, reverse=True):
            piv = pivots[pc]
            val = sum((vec.get(c, Fraction(0)) * v for c, v in piv.items()
                       if c != pc), Fraction(0))
            if val:
                vec[pc] = -val
        basis.append(vec)
    return basis


def sparse_rank(rows: Iterable[Dict[int, Fraction]]) -> int:
    """Rank of a set of sparse rational vectors."""
    pivots: Dict[int, Dict[int, Fraction]] = {}
    rank = 0
    for row in rows:
        row = dict(row)
        while row:
            col = min(row)
            piv = pivots.get(col)
            if piv is None:
                inv = 1 / row[col]
                pivots[col] = {c: v * inv for c, v in row.items()}
                rank += 1
                break
            factor = row[col]
            for c, v in piv.items():
                cur = row.get(c)
                nxt = (cur if cur is not None else Fraction(0)) - factor * v
                if nxt:
                    row[c] = nxt
                elif cur is not None:
                    del row[c]
    return rank


# ---------------------------------------------------------------------------
# derivation spaces
# ---------------------------------------------------------------------------

def _monomials_of_degree(gens: Sequence[Generator], degree: int
                         ) -> List[Monomial]:
    """All canonical monomials of the given total degree (positive grading)."""
    if any(g.degree <= 0 for g in gens):
        raise ValueError("degree enumeration needs strictly positive degrees")
    out: List[Monomial] = []

    def rec(idx: int, remaining: int, acc: List[Tuple[Generator, int]]):
        if remaining == 0:
            out.append(tuple(acc))
            return
        if idx == len(gens):
            return
        g = gens[idx]
        rec(idx + 1, remaining, acc)
        cap = 1 if g.degree & 1 else remaining // g.degree
        for e in range(1, cap + 1):
            if g.degree * e > remaining:
                break
            acc.append((g, e))
            rec(idx + 1, remaining - g.degree * e, acc)
            acc.pop()
    rec(0, degree, [])
    return out


def _model_weights(m: Dgca) -> Optional[Dict[Generator, Tuple[int, ...]]]:
    """Per-generator weights when the model is in the 4-sphere family."""
    from .action import weight_of
    try:
        return {g: weight_of(g, m.k) for g in m.generators}
    except ValueError:
        return None


def derivation_basis(m: Dgca, mode: str = "linear") -> DerivationSpaceBasis:
    """Exact basis of degree-0 derivations of m commuting with d.

    mode="linear": images in the span of generators of equal degree.
    mode="full": images range over all monomials of equal degree; guarded to
    small models because the candidate count grows quickly.
    """
    if mode not in ("linear", "full"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "full" and len(m.generators) > FULL_MODE_GENERATOR_CAP:
        raise ValueError(
            f"full mode is limited to models with <= {FULL_MODE_GENERATOR_CAP} "
            f"generators; {m.label} has {len(m.generators)}")

    weights = _model_weights(m)

    # candidate images per generator
    candidates: List[Tuple[Generator, Monomial]] = []
    for g in m.generators:
        if mode == "linear":
            monos = [((h, 1),) for h in m.generators if h.degree == g.degree]
        else:
            monos = _monomials_of_degree(m.generators, g.degree)
        candidates.extend((g, mono) for mono in monos)

    # block by the weight shift of the unknown; d preserves weight, so the
    # commutation system never couples different shifts
    def shift(g: Generator, mono: Monomial) -> Tuple[int, ...]:
        if weights is None:
            return ()
        w = [0] * (m.k + 1)
        for h, e in mono:
            for a, c in enumerate(weights[h]):
                w[a] += c * e
        return tuple(w[a] - c for a, c in enumerate(weights[g]))

    blocks: Dict[Tuple[int, ...], List[Tuple[Generator, Monomial]]] = {}
    for g, mono in candidates:
        blocks.setdefault(shift(g, mono), []).append((g, mono))

    d = m.differential_derivation()
    basis: List[Derivation] = []
    for _, block in sorted(blocks.items()):
        index = {(g, mono): col for col, (g, mono) in enumerate(block)}
        # residual of the unit derivation at each unknown, expanded over
        # (generator, monomial) rows
        rows: Dict[Tuple[Generator, Monomial], Dict[int, Fraction]] = {}
        for (g, mono), col in index.items():
            unit = Derivation(0, {g: Element.monomial(mono)}, m)
            for gen in m.generators:
                residue = d.apply(unit.image(gen)) - unit.apply(m.diff[gen])
                for mres, c in residue.items():
                    rows.setdefault((gen, mres), {})[col] = c
        vectors = nullspace(list(rows.values()), len(block))
        for vec in vectors:
            images: Dict[Generator, Element] = {}
            for col, c in vec.items():
                g, mono = block[col]
                images[g] = images.get(g, Element.zero()) + \
                    Element.monomial(mono, c)
            basis.append(Derivation(0, images, m))
    return DerivationSpaceBasis(mode, basis)
