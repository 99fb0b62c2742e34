"""Finitely generated groups realized through exact canonical forms.

Every element carries a hashable canonical form; two elements are equal iff
their forms are equal, so equality, hashing and dictionary lookups never need
a rewriting step.  Forms are nested tuples of Python ints (arbitrary
precision), which also gives an injective byte serialization via ``repr``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class RealizationMismatch(ValueError):
    """Raised when elements of two different realizations are combined."""


class UnsupportedCapability(NotImplementedError):
    """Raised when an optional oracle (conjugacy, abelianization, ...) is absent."""


@dataclass(frozen=True)
class GeneratorSymbol:
    label: str
    inverse_label: str


class Element:
    __slots__ = ("group", "form", "_hash")

    def __init__(self, group: "Group", form):
        self.group = group
        self.form = form
        self._hash = hash(form)

    @property
    def key(self) -> bytes:
        """Injective byte serialization of the canonical form."""
        return repr(self.form).encode()

    def is_identity(self) -> bool:
        return self.form == self.group.identity_form

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.group is other.group and self.form == other.form

    def __hash__(self):
        return self._hash

    def __mul__(self, other: "Element") -> "Element":
        return self.group.mul(self, other)

    def __invert__(self) -> "Element":
        return self.group.inv(self)

    def __pow__(self, k: int) -> "Element":
        return self.group.power(self, k)

    def __repr__(self):
        return f"<{self.group.name}: {self.group.format(self)}>"

    def __str__(self):
        return self.group.format(self)


class Group:
    """Base class for a realization.

    Subclasses implement ``_mul`` and ``_inv`` on canonical forms and call
    ``_setup_generators`` with (label, form) pairs.  The generator list is
    always symmetric: missing inverses are appended (with a warning when the
    caller supplied the list).
    """

    kind = "abstract"
    identity_form = ()

    def __init__(self, name: str):
        self.name = name
        self.rho_bound = None  # set by specnorm.register_analytic_bound

    # -- generators ---------------------------------------------------------

    def _setup_generators(self, pairs: Sequence[tuple[str, object]], warn: bool = False):
        labels: list[str] = []
        forms: list = []
        for label, form in pairs:
            if label in labels:
                raise ValueError(f"duplicate generator label {label!r}")
            labels.append(label)
            forms.append(form)
        missing = []
        for label, form in list(zip(labels, forms)):
            inv = self._inv(form)
            if inv not in forms:
                missing.append((inverse_label(label), inv))
        if missing and warn:
            warnings.warn(
                f"{self.name}: generator list not symmetric; appending inverses "
                + ", ".join(lab for lab, _ in missing),
                stacklevel=3,
            )
        for label, form in missing:
            if label in labels:
                raise ValueError(f"inverse label {label!r} already in use")
            # keep a generator adjacent to its inverse
            pos = forms.index(self._inv(form)) + 1
            labels.insert(pos, label)
            forms.insert(pos, form)
        self.labels = labels
        self.generators = [Element(self, f) for f in forms]
        self.label_index = {lab: i for i, lab in enumerate(labels)}
        self.inverse_index = [forms.index(self._inv(f)) for f in forms]
        self.symbols = []
        seen = set()
        for i, lab in enumerate(labels):
            j = self.inverse_index[i]
            if i in seen:
                continue
            seen.update((i, j))
            self.symbols.append(GeneratorSymbol(lab, labels[j]))

    @property
    def identity(self) -> Element:
        return Element(self, self.identity_form)

    def element(self, form) -> Element:
        return Element(self, form)

    # -- arithmetic ---------------------------------------------------------

    def _mul(self, x, y):
        raise NotImplementedError

    def _inv(self, x):
        raise NotImplementedError

    def _check(self, *els: Element):
        for x in els:
            if x.group is not self:
                raise RealizationMismatch(
                    f"element of {x.group.name} used in {self.name}")

    def mul(self, x: Element, y: Element) -> Element:
        self._check(x, y)
        return Element(self, self._mul(x.form, y.form))

    def inv(self, x: Element) -> Element:
        self._check(x)
        return Element(self, self._inv(x.form))

    def power(self, x: Element, k: int) -> Element:
        self._check(x)
        base = x.form if k >= 0 else self._inv(x.form)
        result = self.identity_form
        k = abs(k)
        while k:
            if k & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            k >>= 1
        return Element(self, result)

    # -- words --------------------------------------------------------------

    def word_labels(self, text: str) -> list[str]:
        """Expand a word such as ``"a b^2 a^-1"`` into generator labels."""
        out: list[str] = []
        for tok in text.split():
            if tok in ("e", "1"):
                continue
            if tok in self.label_index:
                out.append(tok)
                continue
            base, sep, exp = tok.rpartition("^")
            if not sep or base not in self.label_index:
                raise ValueError(f"unknown generator {tok!r} in word {text!r}")
            try:
                k = int(exp)
            except ValueError:
                raise ValueError(f"bad exponent in {tok!r}") from None
            lab = base if k >= 0 else self.labels[self.inverse_index[self.label_index[base]]]
            out.extend([lab] * abs(k))
        return out

    def parse_word(self, text: str) -> Element:
        form = self.identity_form
        for lab in self.word_labels(text):
            form = self._mul(form, self.generators[self.label_index[lab]].form)
        return Element(self, form)

    def format(self, x: Element) -> str:
        return repr(x.form)

    # -- optional capabilities ---------------------------------------------

    @property
    def has_conjugacy_oracle(self) -> bool:
        return False

    @property
    def known_center(self) -> bool:
        return False

    def is_conjugate(self, x: Element, y: Element) -> bool:
        raise UnsupportedCapability(f"{self.name} has no conjugacy oracle")

    def abelianization(self, x: Element) -> tuple[int, ...]:
        raise UnsupportedCapability(f"{self.name} has no exponent-sum map")

    def geodesic_length(self, x: Element) -> int | None:
        """Fast word length when a closed form is known, else ``None``."""
        return None

    def centralizer_hull(self, g: Element) -> list[int] | None:
        """Indices of generators spanning an isometrically embedded subgroup
        that contains the centralizer of ``g``, when one is known."""
        return None

    def in_center(self, x: Element) -> bool:
        return all(commutes(x, s) for s in self.generators)

    def describe(self) -> dict:
        return {"kind": self.kind, "name": self.name, "generators": list(self.labels)}


def inverse_label(label: str) -> str:
    return label[:-3] if label.endswith("^-1") else label + "^-1"


# -- element-level oracles ---------------------------------------------------

def multiply(x: Element, y: Element) -> Element:
    if x.group is not y.group:
        raise RealizationMismatch("elements belong to different realizations")
    return x.group.mul(x, y)


def commutes(x: Element, g: Element) -> bool:
    if x.group is not g.group:
        raise RealizationMismatch("elements belong to different realizations")
    G = x.group
    return G._mul(x.form, g.form) == G._mul(g.form, x.form)


def conjugate(t: Element, g: Element) -> Element:
    """Return t g t^-1."""
    if t.group is not g.group:
        raise RealizationMismatch("elements belong to different realizations")
    G = t.group
    return Element(G, G._mul(G._mul(t.form, g.form), G._inv(t.form)))


def is_conjugate(x: Element, y: Element) -> bool:
    if x.group is not y.group:
        raise RealizationMismatch("elements belong to different realizations")
    return x.group.is_conjugate(x, y)


# -- free groups ---------------------------------------------------------------

def _default_letters(rank: int) -> list[str]:
    if rank <= 26:
        return [chr(ord("a") + i) for i in range(rank)]
    return [f"x{i + 1}" for i in range(rank)]


class FreeGroup(Group):
    """Free group on ``rank`` letters; forms are freely reduced tuples of
    nonzero ints (``i`` is letter i, ``-i`` its inverse)."""

    kind = "free"

    def __init__(self, rank: int, labels: Sequence[str] | None = None, name: str | None = None):
        if rank < 0:
            raise ValueError("rank must be nonnegative")
        labels = list(labels) if labels else _default_letters(rank)
        if len(labels) != rank:
            raise ValueError("need one label per free generator")
        super().__init__(name or f"F{rank}")
        self.rank = rank
        self._letter_labels = labels
        pairs = []
        for i, lab in enumerate(labels):
            pairs += [(lab, (i + 1,)), (inverse_label(lab), (-(i + 1),))]
        self._setup_generators(pairs)

    def _mul(self, x, y):
        k = 0
        m = min(len(x), len(y))
        n = len(x)
        while k < m and x[n - 1 - k] == -y[k]:
            k += 1
        if k == 0:
            return x + y
        return x[: n - k] + y[k:]

    def _inv(self, x):
        return tuple(-l for l in reversed(x))

    def format(self, x):
        if not x.form:
            return "e"
        return " ".join(self._letter_labels[l - 1] if l > 0 else
                        inverse_label(self._letter_labels[-l - 1]) for l in x.form)

    @property
    def has_conjugacy_oracle(self):
        return True

    @property
    def known_center(self):
        return True

    @staticmethod
    def _cyclic_reduce(w):
        i, j = 0, len(w)
        while j - i >= 2 and w[i] == -w[j - 1]:
            i += 1
            j -= 1
        return w[i:j]

    def is_conjugate(self, x, y):
        self._check(x, y)
        u = self._cyclic_reduce(x.form)
        v = self._cyclic_reduce(y.form)
        return _is_rotation(u, v)

    def abelianization(self, x):
        v = [0] * self.rank
        for l in x.form:
            v[abs(l) - 1] += 1 if l > 0 else -1
        return tuple(v)

    def geodesic_length(self, x):
        return len(x.form)

    def describe(self):
        return {"kind": "free", "rank": self.rank, "generators": list(self.labels)}


def _is_rotation(u: tuple, v: tuple) -> bool:
    if len(u) != len(v):
        return False
    if not u:
        return True
    doubled = u + u
    n = len(v)
    return any(doubled[i:i + n] == v for i in range(n))


# -- finitely generated abelian groups ------------------------------------------

class AbelianGroup(Group):
    """Z^rank x Z/m1 x ... ; forms are coordinate tuples, torsion coordinates
    reduced into [0, m)."""

    kind = "abelian"

    def __init__(self, rank: int, torsion: Sequence[int] = (), labels: Sequence[str] | None = None,
                 name: str | None = None):
        torsion = [int(m) for m in torsion]
        if rank < 0 or any(m < 2 for m in torsion):
            raise ValueError("rank must be >= 0 and torsion orders >= 2")
        dim = rank + len(torsion)
        if labels is None:
            labels = ["t"] if (rank, len(torsion)) == (1, 0) else (
                [f"t{i + 1}" for i in range(rank)] + [f"s{i + 1}" for i in range(len(torsion))])
        labels = list(labels)
        if len(labels) != dim:
            raise ValueError("need one label per cyclic factor")
        tag = "x".join(["Z"] * rank + [f"Z/{m}" for m in torsion]) or "1"
        super().__init__(name or (f"Z^{rank}" if not torsion and rank > 1 else tag))
        self.rank = rank
        self.torsion = torsion
        self.moduli = [0] * rank + torsion
        self.identity_form = (0,) * dim
        pairs = []
        for i, lab in enumerate(labels):
            e = [0] * dim
            e[i] = 1
            f = self._norm(e)
            pairs.append((lab, f))
            if self._inv(f) != f:
                pairs.append((inverse_label(lab), self._inv(f)))
        self._setup_generators(pairs)

    def _norm(self, v):
        return tuple(c % m if m else c for c, m in zip(v, self.moduli))

    def _mul(self, x, y):
        return self._norm([a + b for a, b in zip(x, y)])

    def _inv(self, x):
        return self._norm([-a for a in x])

    @property
    def has_conjugacy_oracle(self):
        return True

    @property
    def known_center(self):
        return True

    def is_conjugate(self, x, y):
        self._check(x, y)
        return x.form == y.form

    def abelianization(self, x):
        if self.torsion:
            raise UnsupportedCapability("exponent sums are not integers in torsion factors")
        return x.form

    def geodesic_length(self, x):
        return sum(abs(c) if not m else min(c, m - c) for c, m in zip(x.form, self.moduli))

    def in_center(self, x):
        return True

    def format(self, x):
        return "(" + ",".join(str(c) for c in x.form) + ")"

    def describe(self):
        return {"kind": "abelian", "rank": self.rank, "torsion": list(self.torsion),
                "generators": list(self.labels)}


# -- integer Heisenberg group ----------------------------------------------------

class HeisenbergGroup(Group):
    """Upper unitriangular 3x3 integer matrices [[1,a,c],[0,1,b],[0,0,1]],
    stored as (a, b, c).  Generators x = (1,0,0), y = (0,1,0); the central
    element [x, y] = (0,0,1) is not a generator."""

    kind = "heisenberg"
    identity_form = (0, 0, 0)

    def __init__(self, labels: Sequence[str] = ("x", "y"), name: str = "H3"):
        super().__init__(name)
        lx, ly = labels
        self._setup_generators([(lx, (1, 0, 0)), (inverse_label(lx), (-1, 0, 0)),
                                (ly, (0, 1, 0)), (inverse_label(ly), (0, -1, 0))])

    def _mul(self, x, y):
        return (x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1])

    def _inv(self, x):
        return (-x[0], -x[1], x[0] * x[1] - x[2])

    @property
    def has_conjugacy_oracle(self):
        return True

    @property
    def known_center(self):
        return True

    def is_conjugate(self, x, y):
        # t (a,b,c) t^-1 = (a, b, c + p b - q a) for t = (p, q, r)
        self._check(x, y)
        a, b, c = x.form
        a2, b2, c2 = y.form
        if (a, b) != (a2, b2):
            return False
        d = math.gcd(a, b)
        return c == c2 if d == 0 else (c - c2) % d == 0

    def abelianization(self, x):
        return x.form[:2]

    def in_center(self, x):
        return x.form[0] == 0 and x.form[1] == 0

    def matrix(self, x: Element) -> list[list[int]]:
        a, b, c = x.form
        return [[1, a, c], [0, 1, b], [0, 0, 1]]

    def format(self, x):
        return "(%d,%d,%d)" % x.form

    def describe(self):
        return {"kind": "heisenberg", "generators": list(self.labels)}


# -- groups of invertible integer matrices ------------------------------------

def _matmul(x, y):
    n = len(x)
    return tuple(tuple(sum(x[i][k] * y[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def _matinv(x):
    n = len(x)
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(x)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [u - f * v for u, v in zip(a[r], a[col])]
    out = []
    for row in a:
        inv_row = row[n:]
        if any(v.denominator != 1 for v in inv_row):
            raise ValueError("matrix is not invertible over the integers")
        out.append(tuple(int(v) for v in inv_row))
    return tuple(out)


class MatrixGroup(Group):
    """Subgroup of GL_n(Z) generated by the given matrices (entries are
    Python ints, so no overflow at any radius)."""

    kind = "matrix"

    def __init__(self, generators: Sequence[Sequence[Sequence[int]]], labels: Sequence[str] | None = None,
                 name: str | None = None):
        if not generators:
            raise ValueError("need at least one generator matrix")
        mats = [tuple(tuple(int(v) for v in row) for row in g) for g in generators]
        dim = len(mats[0])
        for m in mats:
            if len(m) != dim or any(len(row) != dim for row in m):
                raise ValueError("generator matrices must be square of equal size")
            _matinv(m)
        super().__init__(name or f"Mat{dim}")
        self.dim = dim
        self.identity_form = tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))
        labels = list(labels) if labels else _default_letters(len(mats))
        if len(labels) != len(mats):
            raise ValueError("need one label per matrix")
        self._setup_generators(list(zip(labels, mats)), warn=True)

    def _mul(self, x, y):
        return _matmul(x, y)

    def _inv(self, x):
        return _matinv(x)

    def format(self, x):
        return repr([list(r) for r in x.form])

    def describe(self):
        return {"kind": "matrix", "dim": self.dim, "generators": list(self.labels)}


# -- products -----------------------------------------------------------------------

def _relabel(factors: Sequence[Group]) -> list[list[str]]:
    """Keep factor labels when globally unique; later collisions get the
    1-based factor index appended (``t`` -> ``t2``)."""
    used: set[str] = set()
    out = []
    for idx, F in enumerate(factors):
        mapping = {}
        for sym in F.symbols:
            lab = sym.label
            new = lab
            if new in used or (sym.inverse_label != lab and sym.inverse_label in used):
                new = f"{lab}{idx + 1}"
                k = 0
                while new in used:
                    k += 1
                    new = f"{lab}{idx + 1}_{k}"
            mapping[sym.label] = new
            used.add(new)
            if sym.inverse_label != sym.label:
                mapping[sym.inverse_label] = inverse_label(new)
                used.add(inverse_label(new))
        out.append([mapping[lab] for lab in F.labels])
    return out


class DirectProduct(Group):
    kind = "direct_product"

    def __init__(self, factors: Sequence[Group], name: str | None = None):
        if not factors:
            raise ValueError("direct product needs at least one factor")
        self.factors = list(factors)
        super().__init__(name or " x ".join(F.name for F in self.factors))
        self.identity_form = tuple(F.identity_form for F in self.factors)
        pairs = []
        self._factor_of_gen = []
        for i, (F, labs) in enumerate(zip(self.factors, _relabel(self.factors))):
            for lab, g in zip(labs, F.generators):
                f = list(self.identity_form)
                f[i] = g.form
                pairs.append((lab, tuple(f)))
                self._factor_of_gen.append(i)
        self._setup_generators(pairs)

    def _mul(self, x, y):
        return tuple(F._mul(a, b) for F, a, b in zip(self.factors, x, y))

    def _inv(self, x):
        return tuple(F._inv(a) for F, a in zip(self.factors, x))

    def component(self, x: Element, i: int) -> Element:
        return Element(self.factors[i], x.form[i])

    def embed(self, i: int, y: Element) -> Element:
        f = list(self.identity_form)
        f[i] = y.form
        return Element(self, tuple(f))

    @property
    def has_conjugacy_oracle(self):
        return all(F.has_conjugacy_oracle for F in self.factors)

    @property
    def known_center(self):
        return all(F.known_center for F in self.factors)

    def is_conjugate(self, x, y):
        self._check(x, y)
        if not self.has_conjugacy_oracle:
            raise UnsupportedCapability(f"{self.name}: some factor lacks a conjugacy oracle")
        return all(F.is_conjugate(Element(F, a), Element(F, b))
                   for F, a, b in zip(self.factors, x.form, y.form))

    def abelianization(self, x):
        out: tuple = ()
        for F, a in zip(self.factors, x.form):
            out += F.abelianization(Element(F, a))
        return out

    def geodesic_length(self, x):
        total = 0
        for F, a in zip(self.factors, x.form):
            n = F.geodesic_length(Element(F, a))
            if n is None:
                return None
            total += n
        return total

    def in_center(self, x):
        return all(F.in_center(Element(F, a)) for F, a in zip(self.factors, x.form))

    def format(self, x):
        return "(" + ", ".join(F.format(Element(F, a)) for F, a in zip(self.factors, x.form)) + ")"

    def describe(self):
        return {"kind": "direct_product", "factors": [F.describe() for F in self.factors],
                "generators": list(self.labels)}


class FreeProduct(Group):
    """Free product; forms are tuples of syllables ``(factor index, form)``
    with consecutive syllables from different factors and no trivial ones."""

    kind = "free_product"

    def __init__(self, factors: Sequence[Group], name: str | None = None):
        if not factors:
            raise ValueError("free product needs at least one factor")
        self.factors = list(factors)
        super().__init__(name or " * ".join(
            f"({F.name})" if F.kind in ("direct_product", "free_product") else F.name
            for F in self.factors))
        pairs = []
        self._gen_factor = []
        for i, (F, labs) in enumerate(zip(self.factors, _relabel(self.factors))):
            for lab, g in zip(labs, F.generators):
                pairs.append((lab, ((i, g.form),)))
                self._gen_factor.append(i)
        self._setup_generators(pairs)

    def _mul(self, x, y):
        if not x:
            return y
        if not y:
            return x
        out = list(x)
        factors = self.factors
        for syl in y:
            if out and out[-1][0] == syl[0]:
                i = syl[0]
                F = factors[i]
                m = F._mul(out[-1][1], syl[1])
                if m == F.identity_form:
                    out.pop()
                else:
                    out[-1] = (i, m)
            else:
                out.append(syl)
        return tuple(out)

    def _inv(self, x):
        return tuple((i, self.factors[i]._inv(f)) for i, f in reversed(x))

    def embed(self, i: int, y: Element) -> Element:
        F = self.factors[i]
        return Element(self, () if y.form == F.identity_form else ((i, y.form),))

    @property
    def has_conjugacy_oracle(self):
        return all(F.has_conjugacy_oracle for F in self.factors)

    @property
    def known_center(self):
        return all(F.known_center for F in self.factors)

    def _cyclic_reduce(self, form):
        w = list(form)
        while len(w) >= 2 and w[0][0] == w[-1][0]:
            i, last = w.pop()
            F = self.factors[i]
            m = F._mul(last, w[0][1])
            if m == F.identity_form:
                w.pop(0)
            else:
                w[0] = (i, m)
        return tuple(w)

    def is_conjugate(self, x, y):
        self._check(x, y)
        if not self.has_conjugacy_oracle:
            raise UnsupportedCapability(f"{self.name}: some factor lacks a conjugacy oracle")
        u = self._cyclic_reduce(x.form)
        v = self._cyclic_reduce(y.form)
        if len(u) != len(v):
            return False
        if len(u) == 0:
            return True
        if len(u) == 1:
            (i, a), (j, b) = u[0], v[0]
            F = self.factors[i]
            return i == j and F.is_conjugate(Element(F, a), Element(F, b))
        return _is_rotation(u, v)

    def abelianization(self, x):
        parts = [list(F.abelianization(F.identity)) for F in self.factors]
        for i, f in x.form:
            F = self.factors[i]
            parts[i] = [p + q for p, q in zip(parts[i], F.abelianization(Element(F, f)))]
        return tuple(v for p in parts for v in p)

    def geodesic_length(self, x):
        total = 0
        for i, f in x.form:
            F = self.factors[i]
            n = F.geodesic_length(Element(F, f))
            if n is None:
                return None
            total += n
        return total

    def centralizer_hull(self, g):
        self._check(g)
        if len(g.form) == 1:
            i = g.form[0][0]
            return [k for k, fi in enumerate(self._gen_factor) if fi == i]
        return None

    def format(self, x):
        if not x.form:
            return "e"
        return " . ".join(self.factors[i].format(Element(self.factors[i], f)) for i, f in x.form)

    def describe(self):
        return {"kind": "free_product", "factors": [F.describe() for F in self.factors],
                "generators": list(self.labels)}


def generator_elements(group: Group, words: Iterable[str | Element]) -> list[Element]:
    """Resolve a list of words/elements and symmetrize it (inverses appended)."""
    els = [w if isinstance(w, Element) else group.parse_word(w) for w in words]
    for x in els:
        group._check(x)
    out = list(els)
    for x in els:
        if ~x not in out:
            out.append(~x)
    return out

