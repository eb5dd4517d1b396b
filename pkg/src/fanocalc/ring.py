"""Exact intersection-theory engine for low-dimensional variety models.

A variety is presented by an ordered divisor basis together with the
top-degree symmetric multilinear form on that basis.  All arithmetic is
exact (``fractions.Fraction``); no floating point is used anywhere.

Models are built compositionally: projective spaces, products, split
projective bundles, blow-ups at points or along curves, double covers and
anticanonical-type hypersurfaces in a fourfold.  Every constructor derives
the full intersection form once; afterwards models and classes are
immutable and all operations are pure.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from . import parser as pmod
from .errors import (
    DegreeError,
    ForeignClassError,
    GeometryError,
    UnknownSymbolError,
    UnsupportedDimensionError,
)

Rational = Union[int, Fraction]


def _frac(x: Rational) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# --------------------------------------------------------------------------
# core data types
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DivisorClass:
    """Exact-rational coefficient vector over the owning model's basis."""

    model: "VarietyModel"
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != len(self.model.basis):
            raise GeometryError(
                f"coefficient vector of length {len(self.coeffs)} does not match "
                f"basis of size {len(self.model.basis)}"
            )

    def _check_sibling(self, other: "DivisorClass") -> None:
        if not isinstance(other, DivisorClass):
            raise TypeError(f"expected a divisor class, got {other!r}")
        if other.model is not self.model:
            raise ForeignClassError("divisor classes belong to different models")

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._check_sibling(other)
        return DivisorClass(self.model, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self._check_sibling(other)
        return DivisorClass(self.model, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(self.model, tuple(-a for a in self.coeffs))

    def __mul__(self, scalar: Rational) -> "DivisorClass":
        s = _frac(scalar)
        return DivisorClass(self.model, tuple(s * a for a in self.coeffs))

    __rmul__ = __mul__

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __str__(self) -> str:
        parts = []
        for name, c in zip(self.model.basis, self.coeffs):
            if c == 0:
                continue
            if c == 1:
                term = name
            elif c == -1:
                term = f"-{name}"
            else:
                term = f"{c}*{name}"
            parts.append(term if not parts or term.startswith("-") else f"+{term}")
        return "".join(parts) if parts else "0"


@dataclass(frozen=True)
class IntersectionForm:
    """Sparse symmetric n-linear form on basis indices.

    Entries are keyed by sorted index tuples; unlisted tuples are zero.
    """

    dimension: int
    entries: Mapping[tuple[int, ...], Fraction]

    def value(self, indices: Iterable[int]) -> Fraction:
        key = tuple(sorted(indices))
        if len(key) != self.dimension:
            raise DegreeError(f"expected {self.dimension} indices, got {len(key)}")
        return self.entries.get(key, Fraction(0))


def _freeze_entries(raw: Mapping[tuple[int, ...], Rational]) -> dict[tuple[int, ...], Fraction]:
    return {tuple(sorted(k)): _frac(v) for k, v in raw.items() if v != 0}


class VarietyModel:
    """Divisor basis + top-degree intersection form + marked classes.

    Instances are immutable after construction and compared by identity.
    ``aliases`` maps alternative symbol spellings to basis names (e.g. the
    hyperplane class of projective space answers to both ``H`` and ``L``).
    """

    def __init__(
        self,
        name: str,
        dimension: int,
        basis: Sequence[str],
        entries: Mapping[tuple[int, ...], Rational],
        anticanonical: Sequence[Rational],
        ample_ref: Sequence[Rational],
        aliases: Optional[Mapping[str, str]] = None,
    ):
        if len(set(basis)) != len(basis):
            raise GeometryError(f"basis names not unique: {basis}")
        self.name = name
        self.dimension = dimension
        self.basis = tuple(basis)
        self.form = IntersectionForm(dimension, _freeze_entries(entries))
        self.aliases = dict(aliases or {})
        self.anticanonical = DivisorClass(self, tuple(_frac(c) for c in anticanonical))
        self.ample_ref = DivisorClass(self, tuple(_frac(c) for c in ample_ref))
        top = intersection_number(self, [self.ample_ref] * dimension)
        if top <= 0:
            raise GeometryError(
                f"reference class of {name} has non-positive top self-intersection {top}"
            )

    # -- symbol handling ---------------------------------------------------

    def basis_index(self, symbol: str) -> int:
        if symbol in self.basis:
            return self.basis.index(symbol)
        target = self.aliases.get(symbol)
        if target in self.basis:
            return self.basis.index(target)
        raise UnknownSymbolError(f"unknown symbol {symbol!r} on model {self.name}")

    def basis_class(self, symbol: str) -> DivisorClass:
        i = self.basis_index(symbol)
        return DivisorClass(self, tuple(Fraction(int(j == i)) for j in range(len(self.basis))))

    def zero(self) -> DivisorClass:
        return DivisorClass(self, (Fraction(0),) * len(self.basis))

    def divisor(self, source: Union[str, pmod.ClassExpr, DivisorClass]) -> DivisorClass:
        """Linear class expression (or literal 0) as a divisor class."""
        if isinstance(source, DivisorClass):
            if source.model is not self:
                raise ForeignClassError("divisor class belongs to a different model")
            return source
        expr = pmod.parse_class_expr(source) if isinstance(source, str) else source
        monomials = _expand(self, expr)
        coeffs = [Fraction(0)] * len(self.basis)
        for exps, c in monomials.items():
            total = sum(exps)
            if total == 0:
                if c != 0:
                    raise DegreeError("class expression has a nonzero constant term")
                continue
            if total != 1:
                raise DegreeError("class expression is not linear in the basis symbols")
            coeffs[exps.index(1)] += c
        return DivisorClass(self, tuple(coeffs))

    # -- evaluation conveniences ------------------------------------------

    def intersection(self, classes: Sequence[DivisorClass]) -> Fraction:
        return intersection_number(self, classes)

    def evaluate(self, expr: Union[str, pmod.ClassExpr]) -> Fraction:
        return evaluate(self, expr)

    def __repr__(self) -> str:
        return f"<VarietyModel {self.name} dim={self.dimension} basis={self.basis}>"


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------


def intersection_number(model: VarietyModel, classes: Sequence[DivisorClass]) -> Fraction:
    """Multilinear extension of the model's form; exact rational."""
    n = model.dimension
    if len(classes) != n:
        raise DegreeError(f"expected {n} classes, got {len(classes)}")
    for c in classes:
        if not isinstance(c, DivisorClass):
            raise TypeError(f"expected a divisor class, got {c!r}")
        if c.model is not model:
            raise ForeignClassError("divisor class belongs to a different model")
    m = len(model.basis)
    total = Fraction(0)
    for indices in itertools.product(range(m), repeat=n):
        coeff = Fraction(1)
        for cls, i in zip(classes, indices):
            coeff *= cls.coeffs[i]
            if coeff == 0:
                break
        if coeff != 0:
            total += coeff * model.form.value(indices)
    return total


def _expand(model: VarietyModel, expr: pmod.ClassExpr) -> dict[tuple[int, ...], Fraction]:
    """Expand an expression into monomials keyed by basis exponent vectors."""
    m = len(model.basis)
    zero_key = (0,) * m

    def merge(a, b, sign=1):
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, Fraction(0)) + sign * v
            if out[k] == 0:
                del out[k]
        return out

    def mul(a, b):
        out: dict[tuple[int, ...], Fraction] = {}
        for ka, va in a.items():
            for kb, vb in b.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                out[k] = out.get(k, Fraction(0)) + va * vb
                if out[k] == 0:
                    del out[k]
        return out

    def walk(e) -> dict[tuple[int, ...], Fraction]:
        if isinstance(e, pmod.Sym):
            i = model.basis_index(e.name)
            key = tuple(int(j == i) for j in range(m))
            return {key: Fraction(1)}
        if isinstance(e, pmod.Num):
            return {zero_key: e.value} if e.value else {}
        if isinstance(e, pmod.Neg):
            return {k: -v for k, v in walk(e.arg).items()}
        if isinstance(e, pmod.Add):
            return merge(walk(e.left), walk(e.right))
        if isinstance(e, pmod.Sub):
            return merge(walk(e.left), walk(e.right), sign=-1)
        if isinstance(e, pmod.Mul):
            return mul(walk(e.left), walk(e.right))
        if isinstance(e, pmod.Pow):
            base = walk(e.base)
            out = {zero_key: Fraction(1)}
            for _ in range(e.exp):
                out = mul(out, base)
            return out
        raise TypeError(f"not a class expression: {e!r}")

    return walk(expr)


def evaluate(model: VarietyModel, expr: Union[str, pmod.ClassExpr]) -> Fraction:
    """Value of a degree-n polynomial in basis symbols under the form."""
    ast = pmod.parse_class_expr(expr) if isinstance(expr, str) else expr
    monomials = _expand(model, ast)
    n = model.dimension
    total = Fraction(0)
    for exps, coeff in monomials.items():
        if sum(exps) != n:
            raise DegreeError(
                f"expression is not homogeneous of degree {n} on {model.name} "
                f"(found a degree-{sum(exps)} monomial)"
            )
        indices: list[int] = []
        for i, e in enumerate(exps):
            indices.extend([i] * e)
        total += coeff * model.form.value(indices)
    return total


# --------------------------------------------------------------------------
# blow-up centers
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BlowupCenter:
    """A point, or a smooth curve given by its genus and basis degrees.

    ``degrees`` records D·C for each ambient basis class D; omitted names
    default to zero.  Degrees may be negative (strict-transform
    bookkeeping for centers inside an earlier exceptional divisor).
    """

    kind: str  # 'point' | 'curve'
    genus: Optional[int] = None
    degrees: Optional[tuple[tuple[str, int], ...]] = None

    def __post_init__(self):
        if self.kind == "point":
            if self.genus is not None or self.degrees is not None:
                raise GeometryError("point centers carry no genus or degrees")
        elif self.kind == "curve":
            if self.genus is None or self.genus < 0:
                raise GeometryError("curve centers need a nonnegative genus")
            if self.degrees is None:
                raise GeometryError("curve centers need a degrees mapping")
        else:
            raise GeometryError(f"unknown center kind {self.kind!r}")

    @classmethod
    def point(cls) -> "BlowupCenter":
        return cls("point")

    @classmethod
    def curve(cls, genus: int, degrees: Mapping[str, int]) -> "BlowupCenter":
        return cls("curve", genus, tuple(degrees.items()))


# --------------------------------------------------------------------------
# constructors
# --------------------------------------------------------------------------


def make_projective_space(n: int) -> VarietyModel:
    if not 1 <= n <= 4:
        raise UnsupportedDimensionError(f"projective space of dimension {n} not supported")
    return VarietyModel(
        name=f"P{n}",
        dimension=n,
        basis=["H"],
        entries={(0,) * n: 1},
        anticanonical=[n + 1],
        ample_ref=[1],
        aliases={"L": "H"},
    )


def make_del_pezzo_threefold(degree: int) -> VarietyModel:
    """Index-two Fano threefold with fundamental class H, H^3 = degree."""
    if not 1 <= degree <= 7:
        raise GeometryError(f"no del Pezzo threefold of degree {degree}")
    return VarietyModel(
        name=f"V{degree}",
        dimension=3,
        basis=["H"],
        entries={(0, 0, 0): degree},
        anticanonical=[2],
        ample_ref=[1],
        aliases={"L": "H"},
    )


def make_product(factors: Sequence[VarietyModel]) -> VarietyModel:
    if len(factors) < 2:
        raise GeometryError("a product needs at least two factors")
    n = sum(f.dimension for f in factors)
    if n > 4:
        raise UnsupportedDimensionError(f"product of dimension {n} not supported")

    # disjoint union of bases; names shared between factors get the factor
    # ordinal as a suffix (H, H -> H1, H2)
    counts: dict[str, int] = {}
    for f in factors:
        for b in f.basis:
            counts[b] = counts.get(b, 0) + 1
    basis: list[str] = []
    owner: list[int] = []  # product index -> factor position
    local: list[int] = []  # product index -> index within factor
    for pos, f in enumerate(factors):
        for j, b in enumerate(f.basis):
            name = f"{b}{pos + 1}" if counts[b] > 1 else b
            basis.append(name)
            owner.append(pos)
            local.append(j)
    if len(set(basis)) != len(basis):
        raise GeometryError(f"could not disambiguate product basis names: {basis}")

    entries: dict[tuple[int, ...], Fraction] = {}
    for tup in itertools.combinations_with_replacement(range(len(basis)), n):
        groups: dict[int, list[int]] = {}
        for i in tup:
            groups.setdefault(owner[i], []).append(local[i])
        value = Fraction(1)
        for pos, f in enumerate(factors):
            sub = groups.get(pos, [])
            if len(sub) != f.dimension:
                value = Fraction(0)
                break
            value *= f.form.value(sub)
            if value == 0:
                break
        if value != 0:
            entries[tup] = value

    antican: list[Fraction] = []
    ample: list[Fraction] = []
    for f in factors:
        antican.extend(f.anticanonical.coeffs)
        ample.extend(f.ample_ref.coeffs)
    return VarietyModel(
        name="x".join(f.name for f in factors),
        dimension=n,
        basis=basis,
        entries=entries,
        anticanonical=antican,
        ample_ref=ample,
        aliases={},
    )


# ---- split projective bundles --------------------------------------------

_BasePoly = dict[tuple[int, ...], Fraction]  # base exponent vector -> coeff


def _poly_mul(a: _BasePoly, b: _BasePoly, max_deg: int) -> _BasePoly:
    out: _BasePoly = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            if sum(k) > max_deg:
                continue
            out[k] = out.get(k, Fraction(0)) + va * vb
            if out[k] == 0:
                del out[k]
    return out


def make_projective_bundle(base: VarietyModel, summands: Sequence[DivisorClass]) -> VarietyModel:
    r = len(summands)
    if r < 2:
        raise GeometryError("a split bundle needs at least two summand classes")
    for s in summands:
        if s.model is not base:
            raise ForeignClassError("summand classes must live on the base model")
    n = base.dimension + r - 1
    if n > 4:
        raise UnsupportedDimensionError(f"bundle of total dimension {n} not supported")

    m = len(base.basis)
    d = base.dimension
    zero = (0,) * m

    # elementary symmetric polynomials of the summand linear forms, as
    # polynomials in the base basis symbols: prod_i (t + a_i)
    linear_forms: list[_BasePoly] = []
    for s in summands:
        form: _BasePoly = {}
        for i, c in enumerate(s.coeffs):
            if c != 0:
                key = tuple(int(j == i) for j in range(m))
                form[key] = c
        linear_forms.append(form)
    elem: list[_BasePoly] = [{zero: Fraction(1)}] + [{} for _ in range(r)]
    for lf in linear_forms:
        new = [dict(e) for e in elem]
        for k in range(r, 0, -1):
            prod = _poly_mul(elem[k - 1], lf, d)
            for key, v in prod.items():
                new[k][key] = new[k].get(key, Fraction(0)) + v
                if new[k][key] == 0:
                    del new[k][key]
        elem = new

    def reduce_value(zeta_power: int, mono: tuple[int, ...]) -> Fraction:
        """Top intersection of zeta^j times a base monomial."""
        terms: dict[tuple[int, tuple[int, ...]], Fraction] = {(zeta_power, mono): Fraction(1)}
        while True:
            hot = [(zp, mk) for (zp, mk) in terms if zp >= r]
            if not hot:
                break
            zp, mk = max(hot)
            coeff = terms.pop((zp, mk))
            # zeta^r = sum_{k>=1} (-1)^(k+1) e_k zeta^(r-k)
            for k in range(1, r + 1):
                sign = Fraction(1) if k % 2 == 1 else Fraction(-1)
                for ek_key, ek_val in elem[k].items():
                    new_mono = tuple(x + y for x, y in zip(mk, ek_key))
                    if sum(new_mono) > d:
                        continue
                    key = (zp - k, new_mono)
                    terms[key] = terms.get(key, Fraction(0)) + sign * coeff * ek_val
                    if terms[key] == 0:
                        del terms[key]
        total = Fraction(0)
        for (zp, mk), coeff in terms.items():
            if zp == r - 1 and sum(mk) == d:
                indices: list[int] = []
                for i, e in enumerate(mk):
                    indices.extend([i] * e)
                total += coeff * base.form.value(indices)
        return total

    basis = list(base.basis) + ["zeta"]
    zeta_idx = m
    entries: dict[tuple[int, ...], Fraction] = {}
    for tup in itertools.combinations_with_replacement(range(m + 1), n):
        j = tup.count(zeta_idx)
        mono = [0] * m
        for i in tup:
            if i != zeta_idx:
                mono[i] += 1
        value = reduce_value(j, tuple(mono))
        if value != 0:
            entries[tup] = value

    antican = [Fraction(0)] * m + [Fraction(r)]
    for i, c in enumerate(base.anticanonical.coeffs):
        antican[i] += c
    for s in summands:
        for i, c in enumerate(s.coeffs):
            antican[i] -= c

    model_name = f"P(E->{base.name})"
    # zeta alone need not be positive; shift by pulled-back ample multiples
    # until the top self-intersection is positive
    for shift in range(0, 64):
        ample = [(1 + shift) * c for c in base.ample_ref.coeffs] + [Fraction(1)]
        try:
            return VarietyModel(
                name=model_name,
                dimension=n,
                basis=basis,
                entries=entries,
                anticanonical=antican,
                ample_ref=ample,
                aliases=dict(base.aliases),
            )
        except GeometryError:
            continue
    raise GeometryError("could not find a positive reference class for the bundle")


def make_blowup(ambient: VarietyModel, center: BlowupCenter) -> VarietyModel:
    n = ambient.dimension
    if n not in (2, 3):
        raise UnsupportedDimensionError(f"blow-ups supported on surfaces and threefolds, not dim {n}")
    if center.kind == "curve" and n != 3:
        raise GeometryError("curve centers are only supported on threefolds")

    m = len(ambient.basis)
    e_idx = m
    existing = [b for b in ambient.basis if re.fullmatch(r"E\d+", b)]
    e_name = f"E{len(existing) + 1}"

    if center.kind == "curve":
        degrees = [0] * m
        for name, value in center.degrees:
            degrees[ambient.basis_index(name)] = value
        # K_Y . C from the stored degrees against the ambient anticanonical
        k_dot_c = -sum(c * dg for c, dg in zip(ambient.anticanonical.coeffs, degrees))
        e_top = Fraction(2 - 2 * center.genus) + k_dot_c
    else:
        degrees = None
        e_top = Fraction(1) if n == 3 else Fraction(-1)

    entries: dict[tuple[int, ...], Fraction] = {}
    for tup in itertools.combinations_with_replacement(range(m + 1), n):
        c = tup.count(e_idx)
        rest = [i for i in tup if i != e_idx]
        if c == 0:
            value = ambient.form.value(rest)
        elif c == n:
            value = e_top
        elif n == 3 and c == 2 and center.kind == "curve":
            value = Fraction(-degrees[rest[0]])
        else:
            value = Fraction(0)
        if value != 0:
            entries[tup] = value

    # exceptional coefficient of -K is codim - 1: -2E for a point on a
    # threefold, -E for a curve or a point on a surface
    codim = 2 if (center.kind == "curve" or n == 2) else n
    antican = list(ambient.anticanonical.coeffs) + [Fraction(-(codim - 1))]
    ample = list(ambient.ample_ref.coeffs) + [Fraction(0)]

    aliases = dict(ambient.aliases)
    aliases.pop("E", None)
    if not existing:
        aliases["E"] = e_name
    return VarietyModel(
        name=f"Bl({ambient.name})",
        dimension=n,
        basis=list(ambient.basis) + [e_name],
        entries=entries,
        anticanonical=antican,
        ample_ref=ample,
        aliases=aliases,
    )


def blowup_points(ambient: VarietyModel, count: int) -> VarietyModel:
    if count < 1:
        raise GeometryError("need a positive number of points")
    model = ambient
    for _ in range(count):
        model = make_blowup(model, BlowupCenter.point())
    return model


def make_double_cover(base: VarietyModel, half_branch: DivisorClass) -> VarietyModel:
    if base.dimension > 3:
        raise UnsupportedDimensionError("double covers supported up to dimension 3")
    if half_branch.model is not base:
        raise ForeignClassError("half branch class must live on the base model")
    entries = {k: 2 * v for k, v in base.form.entries.items()}
    antican = [a - b for a, b in zip(base.anticanonical.coeffs, half_branch.coeffs)]
    return VarietyModel(
        name=f"2:1({base.name})",
        dimension=base.dimension,
        basis=base.basis,
        entries=entries,
        anticanonical=antican,
        ample_ref=base.ample_ref.coeffs,
        aliases=dict(base.aliases),
    )


def make_divisor_in(ambient: VarietyModel, hypersurface_class: DivisorClass) -> VarietyModel:
    if ambient.dimension != 4:
        raise UnsupportedDimensionError("hypersurface models are cut out of fourfolds")
    if hypersurface_class.model is not ambient:
        raise ForeignClassError("hypersurface class must live on the ambient model")
    a = ambient.ample_ref
    positivity = intersection_number(ambient, [hypersurface_class, a, a, a])
    if positivity <= 0:
        raise GeometryError(
            f"hypersurface class is numerically trivial against the reference class "
            f"({positivity})"
        )
    m = len(ambient.basis)
    h = hypersurface_class.coeffs
    entries: dict[tuple[int, ...], Fraction] = {}
    for tup in itertools.combinations_with_replacement(range(m), 3):
        value = Fraction(0)
        for i in range(m):
            if h[i] != 0:
                value += h[i] * ambient.form.value(tup + (i,))
        if value != 0:
            entries[tup] = value
    antican = [a_ - b_ for a_, b_ in zip(ambient.anticanonical.coeffs, h)]
    return VarietyModel(
        name=f"D({ambient.name})",
        dimension=3,
        basis=ambient.basis,
        entries=entries,
        anticanonical=antican,
        ample_ref=ambient.ample_ref.coeffs,
        aliases=dict(ambient.aliases),
    )


# --------------------------------------------------------------------------
# recipe realization
# --------------------------------------------------------------------------


def model_from_recipe(recipe: Union[str, pmod.RecipeExpr]) -> VarietyModel:
    """Build the variety model described by a recipe expression."""
    r = pmod.parse_recipe(recipe) if isinstance(recipe, str) else recipe
    if isinstance(r, pmod.PSpace):
        return make_projective_space(r.n)
    if isinstance(r, pmod.DelPezzo3):
        return make_del_pezzo_threefold(r.degree)
    if isinstance(r, pmod.Prod):
        return make_product([model_from_recipe(f) for f in r.factors])
    if isinstance(r, pmod.Bundle):
        base = model_from_recipe(r.base)
        return make_projective_bundle(base, [base.divisor(s) for s in r.summands])
    if isinstance(r, pmod.BlowupPoint):
        return blowup_points(model_from_recipe(r.base), r.count)
    if isinstance(r, pmod.BlowupCurve):
        base = model_from_recipe(r.base)
        center = BlowupCenter("curve", r.genus, r.degrees)
        # validate names eagerly for a clean error position-free message
        for name, _ in r.degrees:
            base.basis_index(name)
        return make_blowup(base, center)
    if isinstance(r, pmod.DoubleCover):
        base = model_from_recipe(r.base)
        return make_double_cover(base, base.divisor(r.half_branch))
    if isinstance(r, pmod.DivisorIn):
        base = model_from_recipe(r.base)
        return make_divisor_in(base, base.divisor(r.hypersurface))
    raise TypeError(f"not a recipe expression: {r!r}")
