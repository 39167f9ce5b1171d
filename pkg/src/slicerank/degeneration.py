"""Degeneration maps between tensors and their verification.

A degeneration from T1 to T2 is given by maps alpha, beta, gamma sending
(source variable, target variable) pairs to polynomials in a formal
parameter lambda, together with an order h: after substituting
x -> sum alpha(x,x') x' (and likewise on the other axes) into T1 and
collecting the result as a polynomial in lambda with tensor
coefficients, the coefficient of lambda^h must equal T2 and every lower
coefficient must vanish.

Monomial degenerations restrict every polynomial to a single monomial
with at most one target per source variable; zeroing outs additionally
restrict all values to 0 or 1.  (Some authors define monomial
degenerations without the one-target-per-source condition, composing a
restriction with a map as used here; that variant is not supported.)

The module also contains a desk-scale exhaustive search for the largest
independent tensor reachable from T by zeroing out, used as an oracle
in tests and sanity checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .tensor_core import (
    BlockSet,
    ParseError,
    Tensor,
    _content_lines,
    tensor_power,
)

DEFAULT_SEARCH_CAP = 12


class LambdaPoly:
    """Sparse polynomial in lambda with Fraction coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        clean = {}
        if coeffs:
            for e, c in coeffs.items():
                c = Fraction(c)
                if c != 0:
                    if e < 0:
                        raise ValueError("negative lambda exponent")
                    clean[int(e)] = c
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LambdaPoly is immutable")

    @classmethod
    def monomial(cls, coeff, exponent=0):
        return cls({exponent: coeff})

    @classmethod
    def one(cls):
        return cls({0: 1})

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, LambdaPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e, Fraction(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return LambdaPoly(out)

    def __mul__(self, other):
        if isinstance(other, LambdaPoly):
            out = {}
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    e = e1 + e2
                    s = out.get(e, Fraction(0)) + c1 * c2
                    if s == 0:
                        out.pop(e, None)
                    else:
                        out[e] = s
            return LambdaPoly(out)
        return LambdaPoly({e: c * other for e, c in self.coeffs.items()})

    __rmul__ = __mul__

    def coefficient(self, exponent: int) -> Fraction:
        return self.coeffs.get(exponent, Fraction(0))

    def min_degree(self) -> Optional[int]:
        return min(self.coeffs) if self.coeffs else None

    def is_monomial(self) -> bool:
        return len(self.coeffs) <= 1

    def scale_exponents(self, factor: int) -> "LambdaPoly":
        """Substitute lambda -> lambda^factor."""
        return LambdaPoly({e * factor: c for e, c in self.coeffs.items()})

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = [f"{c}*l^{e}" for e, c in sorted(self.coeffs.items())]
        return " + ".join(terms)


class DegenerationMap:
    """The maps alpha, beta, gamma plus the order h.

    alpha/beta/gamma map (source index, target index) pairs to nonzero
    LambdaPoly values; absent pairs are zero.  `kind` is derived:
    'zeroing' when all values are the constant 1 with at most one target
    per source, 'monomial' when all values are single monomials with at
    most one target per source, else 'general'.
    """

    __slots__ = ("alpha", "beta", "gamma", "order", "kind")

    def __init__(self, alpha, beta, gamma, order):
        def clean(mapping, name):
            out = {}
            for (src, dst), poly in mapping.items():
                if not isinstance(poly, LambdaPoly):
                    poly = LambdaPoly.monomial(poly)
                if poly:
                    out[(int(src), int(dst))] = poly
            return out

        if order < 0:
            raise ValueError("order must be nonnegative")
        object.__setattr__(self, "alpha", clean(alpha, "alpha"))
        object.__setattr__(self, "beta", clean(beta, "beta"))
        object.__setattr__(self, "gamma", clean(gamma, "gamma"))
        object.__setattr__(self, "order", int(order))
        object.__setattr__(self, "kind", self._classify())

    def __setattr__(self, name, value):
        raise AttributeError("DegenerationMap is immutable")

    def _classify(self) -> str:
        one = LambdaPoly.one()
        zeroing = True
        monomial = True
        for mapping in (self.alpha, self.beta, self.gamma):
            sources = {}
            for (src, dst), poly in mapping.items():
                sources[src] = sources.get(src, 0) + 1
                if not poly.is_monomial():
                    monomial = False
                if poly != one:
                    zeroing = False
            if any(cnt > 1 for cnt in sources.values()):
                monomial = False
        if not monomial:
            return "general"
        return "zeroing" if zeroing else "monomial"

    def maps(self):
        return (self.alpha, self.beta, self.gamma)

    def __repr__(self):
        sizes = tuple(len(m) for m in self.maps())
        return f"DegenerationMap(kind={self.kind}, order={self.order}, nonzeros={sizes})"


@dataclass
class VerifyResult:
    ok: bool
    detail: str

    def __bool__(self):
        return self.ok


def _grouped_by_source(mapping):
    out = {}
    for (src, dst), poly in mapping.items():
        out.setdefault(src, []).append((dst, poly))
    return out


def _substitute(t1: Tensor, d: DegenerationMap) -> dict:
    """Image of t1 under d: map target entry -> LambdaPoly."""
    by_a = _grouped_by_source(d.alpha)
    by_b = _grouped_by_source(d.beta)
    by_c = _grouped_by_source(d.gamma)
    out: dict[tuple, LambdaPoly] = {}
    for (i, j, k), coef in t1.entries.items():
        for i2, pa in by_a.get(i, ()):
            pac = pa * coef
            for j2, pb in by_b.get(j, ()):
                pab = pac * pb
                for k2, pc in by_c.get(k, ()):
                    key = (i2, j2, k2)
                    poly = pab * pc
                    prev = out.get(key)
                    out[key] = poly if prev is None else prev + poly
    return {key: poly for key, poly in out.items() if poly}


def _check_domains(t1: Tensor, t2: Tensor, d: DegenerationMap):
    n1 = t1.shape
    n2 = t2.shape
    for pos, (name, mapping) in enumerate(
            zip(("alpha", "beta", "gamma"), d.maps())):
        for (src, dst) in mapping:
            if not 0 <= src < n1[pos]:
                raise ValueError(f"{name} source index {src} outside tensor variables")
            if not 0 <= dst < n2[pos]:
                raise ValueError(f"{name} target index {dst} outside tensor variables")


def verify_degeneration(t1: Tensor, t2: Tensor, d: DegenerationMap) -> VerifyResult:
    """Check that d witnesses a degeneration from t1 to t2.

    Substitutes, collects the lambda polynomial with tensor coefficients,
    and checks that the coefficient of lambda^order equals t2 exactly
    while every lower coefficient vanishes.  The diagnostic names the
    first failing lambda degree or tensor entry.
    """
    _check_domains(t1, t2, d)
    h = d.order
    image = _substitute(t1, d)
    low_bad = None
    at_h = {}
    for key in sorted(image):
        poly = image[key]
        for e in sorted(poly.coeffs):
            if e < h and (low_bad is None or (e, key) < low_bad):
                low_bad = (e, key)
        c = poly.coefficient(h)
        if c != 0:
            at_h[key] = c
    if low_bad is not None:
        e, key = low_bad
        return VerifyResult(False, f"nonzero lambda^{e} coefficient at entry {key}")
    if not at_h and t2.entries:
        return VerifyResult(False, f"lambda^{h} coefficient is the zero tensor")
    for key in sorted(set(at_h) | set(t2.entries)):
        got = at_h.get(key, Fraction(0))
        want = t2.entries.get(key, Fraction(0))
        if got != want:
            return VerifyResult(
                False,
                f"lambda^{h} coefficient at entry {key} is {got}, expected {want}")
    return VerifyResult(True, f"degeneration of order {h} verified ({d.kind})")


def apply_degeneration(t1: Tensor, d: DegenerationMap, target_shape):
    """Apply d to t1; returns (h_min, tensor at the lowest nonzero degree).

    Useful for building verified instances: with order set to the
    returned h_min, all lower coefficients vanish by construction.
    Returns (None, None) when the image is identically zero.
    """
    image = _substitute(t1, d)
    if not image:
        return None, None
    h = min(p.min_degree() for p in image.values())
    nx, ny, nz = target_shape
    entries = {}
    for key, poly in image.items():
        c = poly.coefficient(h)
        if c != 0:
            entries[key] = c
    return h, Tensor(range(nx), range(ny), range(nz), entries)


def identity_map(t: Tensor) -> DegenerationMap:
    nx, ny, nz = t.shape
    one = LambdaPoly.one()
    return DegenerationMap(
        {(i, i): one for i in range(nx)},
        {(j, j): one for j in range(ny)},
        {(k, k): one for k in range(nz)},
        order=0,
    )


def zeroing_to_block(bs: BlockSet, key) -> DegenerationMap:
    """The zeroing out that restricts the parent tensor to block `key`."""
    if key not in bs.blocks:
        raise ValueError(f"no block {key}")
    i, j, k = key
    p = bs.partition
    one = LambdaPoly.one()
    alpha = {(src, w): one for w, src in enumerate(p.parts_x[i][1])}
    beta = {(src, w): one for w, src in enumerate(p.parts_y[j][1])}
    gamma = {(src, w): one for w, src in enumerate(p.parts_z[k][1])}
    return DegenerationMap(alpha, beta, gamma, order=0)


def compose(d1: DegenerationMap, d2: DegenerationMap) -> DegenerationMap:
    """Composite map witnessing T1 -> T3 given d1: T1 -> T2 and d2: T2 -> T3.

    The naive product of the maps with order h1 + h2 is not sound: high
    lambda degrees of the first substitution can feed low degrees of the
    second.  Rescaling d1 by lambda -> lambda^(h2+1) separates the
    contributions, giving a valid witness of order h1*(h2+1) + h2.
    """
    factor = d2.order + 1

    def combine(m1, m2):
        by_src2 = _grouped_by_source(m2)
        out = {}
        for (src, mid), poly1 in m1.items():
            scaled = poly1.scale_exponents(factor)
            for dst, poly2 in by_src2.get(mid, ()):
                key = (src, dst)
                term = scaled * poly2
                prev = out.get(key)
                out[key] = term if prev is None else prev + term
        return out

    return DegenerationMap(
        combine(d1.alpha, d2.alpha),
        combine(d1.beta, d2.beta),
        combine(d1.gamma, d2.gamma),
        order=d1.order * factor + d2.order,
    )


# -- zeroing search --------------------------------------------------------


@dataclass
class ZeroingSearchResult:
    """Largest independent tensor found by zeroing out.

    `size` terms, witnessed by the kept variable index sets per axis and
    the list of surviving entry triples.
    """

    size: int
    kept_x: tuple
    kept_y: tuple
    kept_z: tuple
    terms: tuple


def search_zeroing_independent(t: Tensor, n: int = 1,
                               cap: int = DEFAULT_SEARCH_CAP) -> ZeroingSearchResult:
    """Exhaustive search for the largest diagonal zeroing out of t^(x)n.

    Finds the maximum set of pairwise variable-disjoint unit-coefficient
    terms whose variable sets contain no further term of the tensor, so
    that restricting to exactly those variables leaves an independent
    tensor.  Branch and bound over terms; exact, so usable as an oracle.

    n is limited to 1 or 2 and every axis of the power must have at most
    `cap` variables.
    """
    if n not in (1, 2):
        raise ValueError("only first and second powers are searchable")
    base = t if n == 1 else tensor_power(t, 2)
    nx, ny, nz = base.shape
    if max(nx, ny, nz) > cap:
        raise ValueError(
            f"axis sizes {base.shape} exceed search cap {cap}; pass a larger cap to force")
    terms = sorted(key for key, c in base.entries.items() if c == 1)
    all_terms = sorted(base.entries)

    best: list = [0, ()]

    def closure_ok(chosen):
        xs = {e[0] for e in chosen}
        ys = {e[1] for e in chosen}
        zs = {e[2] for e in chosen}
        for e in all_terms:
            if e[0] in xs and e[1] in ys and e[2] in zs and e not in chosen:
                return False
        return True

    def extend(candidates, chosen):
        if len(chosen) > best[0] and closure_ok(chosen):
            best[0] = len(chosen)
            best[1] = tuple(chosen)
        for idx, term in enumerate(candidates):
            remaining = candidates[idx + 1:]
            if len(chosen) + 1 + len(remaining) <= best[0]:
                break
            compatible = [
                e for e in remaining
                if e[0] != term[0] and e[1] != term[1] and e[2] != term[2]
            ]
            chosen.append(term)
            extend(compatible, chosen)
            chosen.pop()

    extend(terms, [])
    witness = set(best[1])
    return ZeroingSearchResult(
        size=best[0],
        kept_x=tuple(sorted({e[0] for e in witness})),
        kept_y=tuple(sorted({e[1] for e in witness})),
        kept_z=tuple(sorted({e[2] for e in witness})),
        terms=tuple(sorted(witness)),
    )


# -- text format -----------------------------------------------------------

_MAP_NAMES = {"alpha": 0, "beta": 1, "gamma": 2}


def parse_degeneration_map(text: str) -> DegenerationMap:
    """Parse the line-oriented map format.

    Monomial lines: `alpha src dst exponent num/den` (same for beta and
    gamma).  General polynomial lines: `alphaP src dst e1 c1 e2 c2 ...`.
    A final `order h` line sets the degeneration order (default 0).
    """
    maps = ({}, {}, {})
    order = 0
    saw_order = False
    for n, toks in _content_lines(text):
        head = toks[0]
        if head == "order":
            if len(toks) != 2:
                raise ParseError(n, "malformed order line")
            try:
                order = int(toks[1])
            except ValueError:
                raise ParseError(n, f"bad order {toks[1]!r}")
            saw_order = True
            continue
        general = head.endswith("P")
        name = head[:-1] if general else head
        if name not in _MAP_NAMES:
            raise ParseError(n, f"unknown directive {head!r}")
        target = maps[_MAP_NAMES[name]]
        try:
            src, dst = int(toks[1]), int(toks[2])
        except (IndexError, ValueError):
            raise ParseError(n, f"bad source/target in {' '.join(toks)!r}")
        body = toks[3:]
        if general:
            if not body or len(body) % 2:
                raise ParseError(n, "polynomial needs exponent/coefficient pairs")
            pairs = zip(body[0::2], body[1::2])
        else:
            if len(body) != 2:
                raise ParseError(n, "monomial line needs exponent and coefficient")
            pairs = [(body[0], body[1])]
        coeffs = {}
        try:
            for e_tok, c_tok in pairs:
                coeffs[int(e_tok)] = coeffs.get(int(e_tok), Fraction(0)) + Fraction(c_tok)
        except (ValueError, ZeroDivisionError):
            raise ParseError(n, f"bad polynomial in {' '.join(toks)!r}")
        key = (src, dst)
        poly = LambdaPoly(coeffs)
        if key in target:
            target[key] = target[key] + poly
        else:
            target[key] = poly
    if not saw_order:
        order = 0
    return DegenerationMap(maps[0], maps[1], maps[2], order)


def write_degeneration_map(d: DegenerationMap) -> str:
    lines = []
    for name, mapping in zip(("alpha", "beta", "gamma"), d.maps()):
        for (src, dst) in sorted(mapping):
            poly = mapping[(src, dst)]
            if poly.is_monomial():
                (e, c), = poly.coeffs.items()
                lines.append(f"{name} {src} {dst} {e} {c.numerator}/{c.denominator}")
            else:
                body = " ".join(
                    f"{e} {c.numerator}/{c.denominator}"
                    for e, c in sorted(poly.coeffs.items()))
                lines.append(f"{name}P {src} {dst} {body}")
    lines.append(f"order {d.order}")
    return "\n".join(lines) + "\n"
