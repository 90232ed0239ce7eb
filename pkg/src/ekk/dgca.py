"""Semifree DGCAs: model constructors, differentials, and chain-map checks.

A model is presented by an ordered list of free generators together with a
differential table on generators; the differential extends to products by
the Koszul-Leibniz rule.  The constructors build the minimal models of the
4-sphere, its iterated free loop spaces, the circle quotient of the loop
space, and the k-torus quotient, in both truncated and untruncated form.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import (
    Element,
    Generator,
    Scalar,
    UniverseError,
    s_bits_of,
    s_insertion_sign,
)

__all__ = [
    "Dgca",
    "DgcaHom",
    "CheckReport",
    "Failure",
    "model_s4",
    "free_loop_model",
    "cyclification_model",
    "toroidify",
    "semifree_model",
    "model_over_w",
    "s_derivation_images",
    "d_squared_zero",
    "is_chain_map",
    "hom0_check",
    "MAX_RANK",
]

# decoration indices are packed into a bitmask
MAX_RANK = 64


class Failure:
    """One nonzero residue found by a verification check."""

    __slots__ = ("subject", "residue")

    def __init__(self, subject: str, residue: Element):
        self.subject = subject
        self.residue = residue

    def __repr__(self) -> str:
        return f"Failure({self.subject}: {self.residue})"


class CheckReport:
    """Outcome of an exhaustive check; failures carry exact residues."""

    __slots__ = ("label", "failures", "checked")

    def __init__(self, label: str, failures: List[Failure], checked: int):
        self.label = label
        self.failures = failures
        self.checked = checked

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok

    def __repr__(self) -> str:
        state = "pass" if self.ok else f"FAIL({len(self.failures)})"
        return f"CheckReport({self.label}: {state}, checked={self.checked})"


class Dgca:
    """A semifree differential graded-commutative algebra.

    Immutable after construction.  `diff` maps every generator to an element
    of degree one higher; d^2 = 0 is a property to be checked, not a
    construction invariant (corrupted models are legal test data).
    """

    def __init__(self, label: str, k: int, generators: Iterable[Generator],
                 diff: Dict[Generator, Element],
                 display: Optional[Dict[Generator, str]] = None,
                 truncated: bool = True,
                 base_model: Optional["Dgca"] = None,
                 totalization_of: Optional["Dgca"] = None):
        self.label = label
        self.k = k
        self.generators: Tuple[Generator, ...] = tuple(
            sorted(generators, key=lambda g: g.key))
        self.generator_set = frozenset(self.generators)
        self.diff = dict(diff)
        self.display = dict(display or {})
        self.truncated = truncated
        self.base_model = base_model
        self.totalization_of = totalization_of
        self._by_name = {g.name: g for g in self.generators}
        self._validate()

    def _validate(self) -> None:
        for g in self.generators:
            img = self.diff.get(g)
            if img is None:
                raise ValueError(f"{self.label}: no differential for {g.name}")
            if img.is_zero:
                continue
            deg = img.degree()
            if deg != g.degree + 1:
                raise ValueError(
                    f"{self.label}: d({g.name}) has degree {deg}, "
                    f"expected {g.degree + 1}")
            for h in img.generators():
                if h not in self.generator_set:
                    raise UniverseError(
                        f"{self.label}: d({g.name}) uses foreign generator {h.name}")

    # -- lookups ---------------------------------------------------------
    def generator(self, name: str) -> Generator:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"{self.label} has no generator {name!r}") from None

    def gen_element(self, name: str) -> Element:
        return Element.gen(self.generator(name))

    def name_of(self, g: Generator) -> str:
        return self.display.get(g, g.name)

    def base_symbols(self) -> Tuple[Tuple[str, int], ...]:
        """Declared base symbols (name, degree) of the undecorated part."""
        seen: Dict[str, int] = {}
        for g in self.generators:
            if g.is_decorated_base and g.base not in seen:
                seen[g.base] = g.base_degree
        return tuple(seen.items())

    def check_element(self, x: Element) -> None:
        for g in x.generators():
            if g not in self.generator_set:
                raise UniverseError(
                    f"element uses {g.name}, not a generator of {self.label}")

    # -- differential ------------------------------------------------------
    def differential_derivation(self):
        from .derivations import Derivation
        return Derivation(degree=1, images=dict(self.diff), model=self,
                          name="d")

    def d(self, x: Element) -> Element:
        return self.differential_derivation().apply(x)

    def with_diff(self, replacements: Dict[Generator, Element],
                  label: Optional[str] = None) -> "Dgca":
        """Copy of the model with some differentials replaced (mutation tests)."""
        diff = dict(self.diff)
        diff.update(replacements)
        return Dgca(label or self.label + "'", self.k, self.generators, diff,
                    display=self.display, truncated=self.truncated,
                    base_model=self.base_model,
                    totalization_of=self.totalization_of)

    def __repr__(self) -> str:
        return f"Dgca({self.label}, k={self.k}, {len(self.generators)} generators)"


class DgcaHom:
    """A degree-preserving algebra map determined by generator images."""

    def __init__(self, source: Dgca, target: Dgca,
                 images: Dict[Generator, Element], name: str = ""):
        self.source = source
        self.target = target
        self.images = dict(images)
        self.name = name
        for g in source.generators:
            img = self.images.get(g)
            if img is None:
                raise ValueError(f"hom misses image of {g.name}")
            if not img.is_zero and not img.is_homogeneous(g.degree):
                raise ValueError(
                    f"hom image of {g.name} is not of degree {g.degree}")
            target.check_element(img)

    def apply(self, x: Element) -> Element:
        out = Element.zero()
        for mono, coeff in x.items():
            piece = Element.scalar(coeff)
            for g, e in mono:
                img = self.images.get(g)
                if img is None:
                    raise UniverseError(f"hom has no image for {g.name}")
                piece = piece * (img ** e)
                if piece.is_zero:
                    break
            out = out + piece
        return out

    def compose(self, inner: "DgcaHom") -> "DgcaHom":
        """self o inner."""
        if inner.target is not self.source and \
                inner.target.generator_set != self.source.generator_set:
            raise UniverseError("homs not composable")
        images = {g: self.apply(img) for g, img in inner.images.items()}
        return DgcaHom(inner.source, self.target, images,
                       name=f"{self.name}o{inner.name}")

    def __repr__(self) -> str:
        return f"DgcaHom({self.source.label} -> {self.target.label})"


# ---------------------------------------------------------------------------
# decoration operators
# ---------------------------------------------------------------------------

def s_derivation_images(i: int, model: Dgca) -> Dict[Generator, Element]:
    """Generator images of the degree -1 decoration operator s_i.

    s_i sends s_I v to +/- s_{I u {i}} v, kills generators already carrying
    the index, kills w and sw, and kills anything whose target was removed
    by the positive-degree truncation.
    """
    if not (1 <= i <= max(model.k, 1)):
        raise ValueError(f"decoration index {i} out of range for k={model.k}")
    bit = 1 << (i - 1)
    images: Dict[Generator, Element] = {}
    for g in model.generators:
        if not g.is_decorated_base or g.s_bits & bit:
            continue
        target = Generator.decorated(g.base, g.base_pos, g.base_degree,
                                     g.s_bits | bit)
        if target in model.generator_set:
            images[g] = Element.gen(target, s_insertion_sign(g.s_bits, i))
    return images


def _apply_s_word(indices: Sequence[int], x: Element, model: Dgca,
                  s_ops: Optional[Dict[int, "Derivation"]] = None) -> Element:
    """Apply the operator word s_{i_1} ... s_{i_p} (innermost last index)."""
    from .derivations import Derivation
    for i in sorted(indices, reverse=True):
        if s_ops is not None:
            op = s_ops[i]
        else:
            op = Derivation(degree=-1, images=s_derivation_images(i, model),
                            model=model)
        x = op.apply(x)
    return x


def _make_s_ops(model: Dgca) -> Dict[int, "Derivation"]:
    from .derivations import Derivation
    return {i: Derivation(degree=-1, images=s_derivation_images(i, model),
                          model=model, name=f"s{i}")
            for i in range(1, model.k + 1)}


# ---------------------------------------------------------------------------
# model constructors
# ---------------------------------------------------------------------------

def _decorated_generators(base_syms: Sequence[Tuple[str, int]], k: int,
                          truncated: bool) -> List[Generator]:
    gens = []
    for pos, (name, deg) in enumerate(base_syms):
        for p in range(k + 1):
            for combo in combinations(range(1, k + 1), p):
                if truncated and deg - p <= 0:
                    continue
                gens.append(Generator.decorated(name, pos, deg, s_bits_of(combo)))
    return gens


def _check_base_input(m: Dgca) -> List[Tuple[str, int]]:
    if m.k != 0:
        raise ValueError(f"base model must have k=0, got k={m.k}")
    syms = []
    for g in m.generators:
        if not g.is_decorated_base or g.s_bits:
            raise ValueError("base model must be undecorated")
        syms.append((g.base, g.base_degree))
    return syms


def model_s4() -> Dgca:
    """Minimal model of the 4-sphere: generators g4 and g7, d g7 = -1/2 g4^2."""
    g4 = Generator.decorated("g4", 0, 4)
    g7 = Generator.decorated("g7", 1, 7)
    diff = {
        g4: Element.zero(),
        g7: Element.monomial(((g4, 2),), Fraction(-1, 2)),
    }
    return Dgca("S4", 0, [g4, g7], diff)


def semifree_model(label: str, symbols: Sequence[Tuple[str, int]],
                   diff_names: Optional[Dict[str, List[Tuple[Scalar,
                                                             List[str]]]]]
                   = None) -> Dgca:
    """Build a small semifree model from names.

    `symbols` lists (name, degree) in declaration order; `diff_names` maps a
    generator name to a list of (coefficient, [factor names]) terms.
    """
    gens = {name: Generator.decorated(name, pos, deg)
            for pos, (name, deg) in enumerate(symbols)}
    diff: Dict[Generator, Element] = {g: Element.zero() for g in gens.values()}
    for name, terms in (diff_names or {}).items():
        acc = Element.zero()
        for coeff, factors in terms:
            piece = Element.scalar(coeff)
            for f in factors:
                piece = piece * Element.gen(gens[f])
            acc = acc + piece
        diff[gens[name]] = acc
    return Dgca(label, 0, list(gens.values()), diff)


def model_over_w(label: str, k: int, symbols: Sequence[Tuple[str, int]],
                 diff_names: Optional[Dict[str, List[Tuple[Scalar,
                                                           List[str]]]]]
                 = None) -> Dgca:
    """Semifree model over Q[w_1..w_k]: named generators plus the w's.

    Factor name "wi" refers to the polynomial generator w_i; d w_i = 0.
    """
    gens: Dict[str, Generator] = {}
    for i in range(1, k + 1):
        gens[f"w{i}"] = Generator.w(i)
    for pos, (name, deg) in enumerate(symbols):
        gens[name] = Generator.decorated(name, pos, deg)
    diff: Dict[Generator, Element] = {g: Element.zero() for g in gens.values()}
    for name, terms in (diff_names or {}).items():
        acc = Element.zero()
        for coeff, factors in terms:
            piece = Element.scalar(coeff)
            for f in factors:
                piece = piece * Element.gen(gens[f])
            acc = acc + piece
        diff[gens[name]] = acc
    return Dgca(label, k, list(gens.values()), diff)


def free_loop_model(m: Dgca, k: int) -> Dgca:
    """Model of the k-fold free loop space: decorations, no w generators.

    d commutes with every s_i up to the parity of the decoration word:
    d(s_I v) = (-1)^|I| s_I(d v).
    """
    if k < 0:
        raise ValueError(f"rank must be >= 0, got {k}")
    if k > MAX_RANK:
        raise ValueError(f"rank {k} exceeds bitmask capacity {MAX_RANK}")
    base_syms = _check_base_input(m)
    gens = _decorated_generators(base_syms, k, truncated=True)
    shell = Dgca(f"L^{k}S4-shell", k, gens,
                 {g: Element.zero() for g in gens},
                 base_model=m)
    s_ops = _make_s_ops(shell)
    diff: Dict[Generator, Element] = {}
    base_diff = {g.base: m.diff[g] for g in m.generators}
    for g in shell.generators:
        img = _apply_s_word(g.s_indices, base_diff[g.base], shell, s_ops)
        if g.s_bits.bit_count() & 1:
            img = -img
        diff[g] = img
    return Dgca(f"L^{k}({m.label})", k, gens, diff, base_model=m)


def toroidify(m: Dgca, k: int, truncated: bool = True) -> Dgca:
    """Torus-quotient model: decorated generators plus w_1..w_k.

    On an undecorated generator, d v = (d_base v) + sum_i w_i . s_i v; on a
    decorated generator the differential is pulled through the decoration
    word with the sign (-1)^|I|.  With `truncated` every generator of
    non-positive degree is dropped and any operator producing it gives zero.
    """
    if k < 0:
        raise ValueError(f"rank must be >= 0, got {k}")
    if k > MAX_RANK:
        raise ValueError(f"rank {k} exceeds bitmask capacity {MAX_RANK}")
    base_syms = _check_base_input(m)
    gens = _decorated_generators(base_syms, k, truncated)
    w_gens = [Generator.w(i) for i in range(1, k + 1)]
    all_gens = gens + w_gens
    shell = Dgca("T-shell", k, all_gens,
                 {g: Element.zero() for g in all_gens},
                 truncated=truncated, base_model=m)
    s_ops = _make_s_ops(shell)
    base_diff = {g.base: m.diff[g] for g in m.generators}
    base_pos = {g.base: (g.base_pos, g.base_degree) for g in m.generators}
    diff: Dict[Generator, Element] = {g: Element.zero() for g in w_gens}
    # d on the undecorated generator, inside the bigger model
    twisted: Dict[str, Element] = {}
    for name, (pos, deg) in base_pos.items():
        img = base_diff[name]
        for i in range(1, k + 1):
            s_i_v = Generator.decorated(name, pos, deg, s_bits_of([i]))
            if s_i_v in shell.generator_set:
                img = img + Element.gen(Generator.w(i)) * Element.gen(s_i_v)
        twisted[name] = img
    for g in gens:
        img = _apply_s_word(g.s_indices, twisted[g.base], shell, s_ops)
        if g.s_bits.bit_count() & 1:
            img = -img
        diff[g] = img
    tag = "~" if not truncated else ""
    return Dgca(f"{tag}T^{k}({m.label})", k, all_gens, diff,
                truncated=truncated, base_model=m)


def cyclification_model(m: Dgca) -> Dgca:
    """Circle-quotient model of the free loop space, built directly.

    Generators v, sv (positive degrees only) and one w of degree 2, with
    d v = d_base v + w . sv,  d sv = -s(d_base v),  d w = 0.  This is the
    rank-one torus model up to renaming; the agreement of the two
    construction paths is covered by a chain-map test.
    """
    base_syms = _check_base_input(m)
    gens = _decorated_generators(base_syms, 1, truncated=True)
    w = Generator.w(1)
    all_gens = gens + [w]
    shell = Dgca("cyc-shell", 1, all_gens,
                 {g: Element.zero() for g in all_gens},
                 base_model=m)
    base_diff = {g.base: m.diff[g] for g in m.generators}
    diff: Dict[Generator, Element] = {w: Element.zero()}
    display = {w: "w"}
    for g in gens:
        if g.s_bits == 0:
            img = base_diff[g.base]
            sv = Generator.decorated(g.base, g.base_pos, g.base_degree, 1)
            if sv in shell.generator_set:
                img = img + Element.gen(w) * Element.gen(sv)
            diff[g] = img
        else:
            diff[g] = -_apply_s_word((1,), base_diff[g.base], shell)
            display[g] = "s" + g.base
    return Dgca(f"Lc({m.label})", 1, all_gens, diff, display=display,
                base_model=m)


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def d_squared_zero(m: Dgca) -> CheckReport:
    """Expand d(d g) for every generator; collect nonzero residues."""
    d = m.differential_derivation()
    failures = []
    for g in m.generators:
        residue = d.apply(m.diff[g])
        if not residue.is_zero:
            failures.append(Failure(m.name_of(g), residue))
    return CheckReport(f"d^2=0 on {m.label}", failures, len(m.generators))


def is_chain_map(h: DgcaHom) -> CheckReport:
    """Check h(d_src g) = d_tgt(h g) on every source generator."""
    d_tgt = h.target.differential_derivation()
    failures = []
    for g in h.source.generators:
        residue = h.apply(h.source.diff[g]) - d_tgt.apply(h.images[g])
        if not residue.is_zero:
            failures.append(Failure(h.source.name_of(g), residue))
    return CheckReport(f"chain map {h.source.label}->{h.target.label}",
                       failures, len(h.source.generators))


def hom0_check(h: DgcaHom) -> bool:
    """True iff images of positive-degree generators lie in N+ x S(sW).

    The target must have been built by totalization; a monomial qualifies
    when its non-sw factors have positive total degree.
    """
    if h.target.totalization_of is None:
        raise ValueError("hom0_check target was not built by totalize()")
    for g in h.source.generators:
        if g.degree <= 0:
            continue
        for mono, _ in h.images[g].items():
            n_deg = sum(gg.degree * e for gg, e in mono if not gg.is_sw)
            if n_deg <= 0:
                return False
    return True
