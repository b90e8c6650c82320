"""Linear systems of plane curves with prescribed contact at a cusp.

Given a plane curve ``F = 0`` with its distinguished point at ``(0:0:1)`` and
a local parametrization ``(x(t), y(t))`` there, a degree-``l`` form ``G`` is
mapped to the series ``G(x(t), y(t), 1)``.  Lowest-order row reduction of the
monomial series gives the contact orders realised in degree ``l``, hence the
dimensions of ``X_{l,j}`` (members with contact >= j), the semigroup window
``Gamma ∩ [0, d^2]``, and explicit generators of the pencil ``X_{d,d^2}`` and
the net ``X_{d,d^2-1}``.

All arithmetic is exact (``Fraction``).  Series carry an explicit precision:
coefficients at or beyond it are unknown, and an all-zero series only
certifies order >= precision.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exact import order_echelon

Exp = tuple[int, int, int]


class SeriesPrecisionError(ArithmeticError):
    """A computation needs coefficients beyond the known precision."""


class CurveError(ValueError):
    pass


class TruncationError(CurveError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (int,)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {x!r}")


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# truncated power series
# ---------------------------------------------------------------------------

class TruncatedSeries:
    """Power series in ``t`` known modulo ``t^prec``."""

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs: Iterable, prec: int):
        cs = [_frac(c) for c in coeffs][:prec]
        if prec < 0:
            raise ValueError("precision must be nonnegative")
        cs += [Fraction(0)] * (prec - len(cs))
        self.coeffs = tuple(cs)
        self.prec = prec

    @classmethod
    def from_dict(cls, terms: Mapping, prec: int) -> "TruncatedSeries":
        cs = [Fraction(0)] * prec
        for e, c in terms.items():
            e = int(e)
            if e < 0:
                raise ValueError("negative exponent in a power series")
            if e < prec:
                cs[e] += _frac(c)
        return cls(cs, prec)

    @classmethod
    def monomial(cls, exponent: int, prec: int, coef=1) -> "TruncatedSeries":
        return cls.from_dict({exponent: coef}, prec)

    @classmethod
    def constant(cls, c, prec: int) -> "TruncatedSeries":
        return cls.from_dict({0: c}, prec)

    def order(self) -> int | None:
        """Least exponent with a nonzero coefficient, or ``None`` (order >= prec)."""
        return next((i for i, c in enumerate(self.coeffs) if c != 0), None)

    def order_bound(self) -> int:
        o = self.order()
        return self.prec if o is None else o

    def is_zero(self) -> bool:
        return self.order() is None

    def __getitem__(self, i: int) -> Fraction:
        if not 0 <= i < self.prec:
            raise SeriesPrecisionError(f"coefficient t^{i} is beyond precision {self.prec}")
        return self.coeffs[i]

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        p = min(self.prec, other.prec)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs[:p], other.coeffs[:p])], p)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries([-a for a in self.coeffs], self.prec)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def scale(self, c) -> "TruncatedSeries":
        c = _frac(c)
        return TruncatedSeries([c * a for a in self.coeffs], self.prec)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        p = min(self.prec + other.order_bound(), other.prec + self.order_bound())
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * p
        for i, x in enumerate(a):
            if x == 0 or i >= p:
                continue
            for j in range(min(len(b), p - i)):
                if b[j]:
                    out[i + j] += x * b[j]
        return TruncatedSeries(out, p)

    def __pow__(self, n: int) -> "TruncatedSeries":
        if n < 0:
            raise ValueError("negative power")
        result = TruncatedSeries.constant(1, self.prec + n * self.order_bound())
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate(self, prec: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs[:prec], min(prec, self.prec))

    def shift_down(self, r: int) -> "TruncatedSeries":
        """Divide by ``t^r``; the first ``r`` coefficients must vanish."""
        if r > self.prec:
            raise SeriesPrecisionError("cannot divide by t^r beyond the known precision")
        if any(self.coeffs[:r]):
            raise ValueError(f"series is not divisible by t^{r}")
        return TruncatedSeries(self.coeffs[r:], self.prec - r)

    def inverse(self) -> "TruncatedSeries":
        if self.prec == 0 or self.coeffs[0] == 0:
            raise ZeroDivisionError("only units (nonzero constant term) are invertible")
        a = self.coeffs
        inv = [Fraction(1) / a[0]]
        for k in range(1, self.prec):
            s = sum(a[i] * inv[k - i] for i in range(1, k + 1))
            inv.append(-s / a[0])
        return TruncatedSeries(inv, self.prec)

    def to_dict(self) -> dict[str, str]:
        return {str(i): _frac_str(c) for i, c in enumerate(self.coeffs) if c != 0}

    def __eq__(self, other) -> bool:
        return isinstance(other, TruncatedSeries) and self.prec == other.prec and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        terms = " + ".join(f"{_frac_str(c)}*t^{i}" for i, c in enumerate(self.coeffs) if c)
        return f"TruncatedSeries({terms or '0'} + O(t^{self.prec}))"


# ---------------------------------------------------------------------------
# homogeneous forms
# ---------------------------------------------------------------------------

def monomials(degree: int) -> list[Exp]:
    """Exponent triples ``(i, j, k)`` of ``X^i Y^j Z^k``, in descending lexicographic order."""
    return [(i, j, degree - i - j) for i in range(degree, -1, -1) for j in range(degree - i, -1, -1)]


class HomogeneousForm:
    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs: Mapping[Exp, object]):
        self.degree = degree
        cs: dict[Exp, Fraction] = {}
        for e, c in coeffs.items():
            e = tuple(int(x) for x in e)
            if len(e) != 3 or min(e) < 0 or sum(e) != degree:
                raise CurveError(f"exponent {e} does not have degree {degree}")
            c = _frac(c)
            if c:
                cs[e] = cs.get(e, Fraction(0)) + c
        self.coeffs = {e: c for e, c in cs.items() if c}

    @classmethod
    def monomial(cls, e: Exp, coef=1) -> "HomogeneousForm":
        return cls(sum(e), {e: coef})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "HomogeneousForm") -> "HomogeneousForm":
        if other.degree != self.degree:
            raise CurveError("cannot add forms of different degrees")
        cs = dict(self.coeffs)
        for e, c in other.coeffs.items():
            cs[e] = cs.get(e, Fraction(0)) + c
        return HomogeneousForm(self.degree, cs)

    def scale(self, c) -> "HomogeneousForm":
        c = _frac(c)
        return HomogeneousForm(self.degree, {e: c * v for e, v in self.coeffs.items()})

    def __sub__(self, other: "HomogeneousForm") -> "HomogeneousForm":
        return self + other.scale(-1)

    def leading(self) -> Exp | None:
        """First monomial of :func:`monomials` order with a nonzero coefficient."""
        return next((e for e in monomials(self.degree) if e in self.coeffs), None)

    def value_at_origin(self) -> Fraction:
        return self.coeffs.get((0, 0, self.degree), Fraction(0))

    def vector(self) -> list[Fraction]:
        return [self.coeffs.get(e, Fraction(0)) for e in monomials(self.degree)]

    def is_proportional(self, other: "HomogeneousForm") -> bool:
        if self.degree != other.degree or self.is_zero() or other.is_zero():
            return False
        e = self.leading()
        if e not in other.coeffs:
            return False
        r = other.coeffs[e] / self.coeffs[e]
        return other == self.scale(r)

    def __eq__(self, other) -> bool:
        return isinstance(other, HomogeneousForm) and self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.degree, frozenset(self.coeffs.items())))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e in monomials(self.degree):
            c = self.coeffs.get(e)
            if not c:
                continue
            mono = "*".join(
                v if p == 1 else f"{v}^{p}" for v, p in zip("XYZ", e) if p
            )
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = mono if mag == 1 and mono else (f"{_frac_str(mag)}*{mono}" if mono else _frac_str(mag))
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self) -> str:
        return f"HomogeneousForm({self})"

    def to_json(self) -> list[dict]:
        return [{"exp": list(e), "coef": _frac_str(c)} for e, c in sorted(self.coeffs.items(), reverse=True)]

    @classmethod
    def from_json(cls, terms, degree: int | None = None) -> "HomogeneousForm":
        try:
            exps = [tuple(int(x) for x in t["exp"]) for t in terms]
            coefs = [_frac(t["coef"]) for t in terms]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise CurveError(f"malformed form terms: {exc}") from None
        if degree is None:
            if not exps:
                raise CurveError("cannot infer the degree of an empty form")
            degree = sum(exps[0])
        out = cls(degree, {})
        for e, c in zip(exps, coefs):
            out = out + cls(degree, {e: c})
        return out

    def to_sympy(self, x, y, z=1):
        expr = 0
        for (i, j, k), c in self.coeffs.items():
            expr += c * x ** i * y ** j * z ** k
        return expr


# ---------------------------------------------------------------------------
# local curve
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AtLeast:
    """Contact order not determined below ``bound``: ``G`` vanishes to the working precision."""

    bound: int

    def __str__(self) -> str:
        return f">={self.bound}"


class LocalCurve:
    """A plane curve ``F`` with a parametrization of its branch at ``(0:0:1)``."""

    def __init__(self, F: HomogeneousForm, x: TruncatedSeries, y: TruncatedSeries,
                 truncation: int | None = None):
        d = F.degree
        K = truncation if truncation is not None else d * d + d + 5
        self.F, self.d, self.K = F, d, K
        self._powers: dict[tuple[str, int], TruncatedSeries] = {}
        self._echelons: dict[int, DegreeEchelon] = {}
        if d < 1:
            raise CurveError("F must have positive degree")
        if K <= d * d:
            raise TruncationError(f"truncation {K} must exceed d^2 = {d * d}")
        if x.prec < K or y.prec < K:
            raise TruncationError(f"parametrization known only to t^{min(x.prec, y.prec)}, need {K}")
        self.x, self.y = x.truncate(K), y.truncate(K)
        if self.x.order_bound() < 1 or self.y.order_bound() < 1:
            raise CurveError("parametrization must pass through the origin (orders >= 1)")
        if self.x.is_zero() and self.y.is_zero():
            raise CurveError("parametrization is constant")
        if F.value_at_origin() != 0:
            raise CurveError("F(0,0,1) must vanish: the distinguished point is (0:0:1)")
        res = self.evaluate(F)
        if not res.is_zero():
            raise CurveError(f"F(x(t),y(t),1) has order {res.order()} < truncation {K}")

    def _pow(self, which: str, n: int) -> TruncatedSeries:
        key = (which, n)
        if key not in self._powers:
            base = self.x if which == "x" else self.y
            self._powers[key] = (base ** n).truncate(self.K) if n else TruncatedSeries.constant(1, self.K)
        return self._powers[key]

    def monomial_series(self, e: Exp) -> TruncatedSeries:
        return (self._pow("x", e[0]) * self._pow("y", e[1])).truncate(self.K)

    def evaluate(self, G: HomogeneousForm) -> TruncatedSeries:
        total = TruncatedSeries([], self.K)
        for e, c in G.coeffs.items():
            total = total + self.monomial_series(e).scale(c)
        return total

    def _need(self, ell: int) -> None:
        if self.K <= ell * self.d:
            raise TruncationError(f"truncation {self.K} must exceed l*d = {ell * self.d}")

    # -- contact orders and echelons -------------------------------------

    def contact_order(self, G: HomogeneousForm) -> int | AtLeast:
        if G.degree < 1:
            raise CurveError("contact order needs a form of positive degree")
        self._need(G.degree)
        o = self.evaluate(G).order()
        return AtLeast(self.K) if o is None else o

    def echelon(self, ell: int) -> "DegreeEchelon":
        self._need(ell)
        if ell not in self._echelons:
            self._echelons[ell] = DegreeEchelon(self, ell)
        return self._echelons[ell]

    def semigroup_window(self) -> list[int]:
        """``Gamma ∩ [0, d^2]``, read off the degree-``d`` echelon."""
        d = self.d
        window = [o for o in self.echelon(d).orders if o <= d * d]
        expected = (d * d + 3 * d) // 2
        if len(window) != expected:
            raise CurveError(
                f"window size {len(window)} differs from (d^2+3d)/2 = {expected}: "
                "input is not a rational unicuspidal curve with this parametrization"
            )
        return window

    def dim_X(self, ell: int, j: int) -> int:
        if ell < 1:
            raise CurveError("degree must be positive")
        if j < 0 or j > ell * self.d:
            raise CurveError(f"j must lie in [0, {ell * self.d}]")
        ech = self.echelon(ell)
        return len(monomials(ell)) - 1 - sum(1 for o in ech.orders if o < j)

    def small_degree_X(self, ell: int) -> HomogeneousForm | None:
        """The unique degree-``l`` form with contact ``l*d`` (``0 < l < d``), if any."""
        if not 0 < ell < self.d:
            raise CurveError("small_degree_X needs 0 < l < d")
        return self.echelon(ell).form_with_order(ell * self.d)

    def inequality_check(self, ell: int) -> dict:
        if not 0 < ell < self.d:
            raise CurveError("inequality_check needs 0 < l < d")
        window = self.semigroup_window()
        bound = ell * self.d
        lhs = sum(1 for g in window if g <= bound)
        rhs = (ell + 1) * (ell + 2) // 2
        member = bound in window
        X = self.small_degree_X(ell)
        return {
            "l": ell, "lhs": lhs, "rhs": rhs, "ok": lhs >= rhs, "equality": lhs == rhs,
            "ld_in_gamma": member, "X_nonempty": X is not None,
            "converse_triggered": lhs == rhs and member,
        }

    def pencil_basis(self) -> tuple[HomogeneousForm, HomogeneousForm]:
        d = self.d
        if self.K <= d * d + d:
            raise TruncationError(f"pencil basis needs truncation > d^2 + d = {d * d + d}")
        G = self.echelon(d).form_with_order(d * d)
        if G is None:
            raise CurveError("no degree-d form reaches contact d^2")
        return self.F, G

    def net_basis(self) -> tuple[HomogeneousForm, HomogeneousForm, HomogeneousForm]:
        F, G = self.pencil_basis()
        H = self.echelon(self.d).form_with_order(self.d ** 2 - 1)
        if H is None:
            raise CurveError("d^2 - 1 is not a contact order in degree d")
        return F, G, H

    # -- JSON -------------------------------------------------------------

    def to_json(self) -> dict:
        return {"degree": self.d, "F": self.F.to_json(),
                "param": {"x": self.x.to_dict(), "y": self.y.to_dict()},
                "truncation": self.K}

    @classmethod
    def from_json(cls, doc: Mapping, truncation: int | None = None) -> "LocalCurve":
        try:
            d = int(doc["degree"])
            F = HomogeneousForm.from_json(doc["F"], d)
            K = truncation or doc.get("truncation") or d * d + d + 5
            x = TruncatedSeries.from_dict(doc["param"]["x"], K)
            y = TruncatedSeries.from_dict(doc["param"]["y"], K)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise CurveError(f"malformed curve document: {exc}") from None
        return cls(F, x, y, K)


class DegreeEchelon:
    """Lowest-order echelon of the degree-``l`` monomial series of a curve."""

    def __init__(self, curve: LocalCurve, ell: int):
        self.curve, self.ell = curve, ell
        self.monos = monomials(ell)
        rows = [list(curve.monomial_series(e).coeffs) for e in self.monos]
        pivots, kernel = order_echelon(rows)
        self.pivots = pivots
        self.kernel = kernel
        d = curve.d
        expected = 0 if ell < d else (ell - d + 1) * (ell - d + 2) // 2
        if len(kernel) != expected:
            raise CurveError(
                f"degree-{ell} kernel has dimension {len(kernel)}, expected {expected} "
                "(multiples of F): F reducible or parametrization inconsistent"
            )
        late = [c for c, _, _ in pivots if c > ell * d]
        if late:
            raise CurveError(f"contact order {late[0]} exceeds l*d = {ell * d}, violating Bezout")

    @property
    def orders(self) -> list[int]:
        return [c for c, _, _ in self.pivots]

    def _form(self, comb: Sequence[Fraction]) -> HomogeneousForm:
        return HomogeneousForm(self.ell, {e: c for e, c in zip(self.monos, comb) if c})

    def form_with_order(self, order: int) -> HomogeneousForm | None:
        """Pivot-normalized form with this exact contact order, reduced against ``F``."""
        for c, _, comb in self.pivots:
            if c == order:
                G = self._form(comb)
                F = self.curve.F
                if self.ell == F.degree:
                    lead = F.leading()
                    if lead in G.coeffs:
                        G = G - F.scale(G.coeffs[lead] / F.coeffs[lead])
                return G
        return None

    def kernel_forms(self) -> list[HomogeneousForm]:
        return [self._form(k) for k in self.kernel]


# ---------------------------------------------------------------------------
# multiplicity sequences by blowing up the parametrization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BranchSequences:
    minimal: tuple[int, ...]
    embedded: tuple[int, ...]


def multiplicity_sequence_from_param(x: TruncatedSeries, y: TruncatedSeries,
                                     max_steps: int = 10_000) -> BranchSequences:
    """Multiplicities at successive centres of the branch ``(x(t), y(t))``.

    Each step records ``r = min(ord u, ord v)`` and passes to the chart
    ``(u, v/u - c)`` after ordering so that ``ord u <= ord v``.  The local
    axes are tagged when they are strict transforms of exceptional curves,
    which decides when the embedded resolution is complete: the branch is
    smooth and crosses a single exceptional curve transversally.
    """
    u, v = x, y
    eu = ev = False  # is {u=0} / {v=0} an exceptional curve
    minimal: list[int] | None = None
    seq: list[int] = []
    for _ in range(max_steps):
        ou, ov = u.order(), v.order()
        if ou is None and ov is None:
            raise SeriesPrecisionError("both coordinates vanish to the working precision")
        if ou is None and u.prec <= ov or ov is None and v.prec <= ou:
            raise SeriesPrecisionError("precision exhausted while comparing orders")
        if ou is None or (ov is not None and ov < ou):
            u, v, eu, ev = v, u, ev, eu
            ou, ov = ov, ou
        if ou == 0:
            raise CurveError("the branch does not pass through the origin")
        r = ou
        if r == 1 and minimal is None:
            minimal = list(seq)
        if r == 1:
            n_exc = int(eu) + int(ev)
            # n_exc == 1: transverse means the branch meets that axis with order 1
            transverse = (eu and ou == 1) or (ev and ov == 1)
            if n_exc == 0 or (n_exc == 1 and transverse):
                return BranchSequences(tuple(minimal), tuple(seq))
        seq.append(r)
        # chart (u, v/u - c)
        unit = u.shift_down(r)
        q = v.shift_down(r) * unit.inverse()
        if q.prec == 0:
            raise SeriesPrecisionError("precision exhausted during blow-up")
        c = q[0]
        v = q - TruncatedSeries.constant(c, q.prec)
        ev = ev and c == 0
        eu = True
    raise CurveError("resolution did not terminate")


# ---------------------------------------------------------------------------
# fibre-count probe for a net
# ---------------------------------------------------------------------------

def map_degree_probe(net: Sequence[HomogeneousForm], trials: int = 10, seed: int = 0,
                     max_retries: int = 20, shears: int = 3) -> dict:
    """Estimate the number of points in a generic fibre of ``(F:G:H)``.

    For each random target ``(c0:c1:c2)`` the system ``c1 F = c0 G``,
    ``c2 F = c0 H`` is eliminated with a resultant after a random shear, and
    distinct roots are counted after discarding the x-coordinates of base
    points (common roots of ``F, G, H``).
    """
    import sympy as sp

    if len(net) != 3:
        raise CurveError("a net needs exactly three forms")
    d = net[0].degree
    if any(f.degree != d for f in net):
        raise CurveError("net forms must share a degree")
    if d > 5:
        raise CurveError("map_degree_probe supports degree <= 5")
    rng = random.Random(seed)
    X, Y = sp.symbols("x y")

    def sample(lo=-30, hi=30, nonzero=False):
        # a zero target coordinate puts the fibre inside a coordinate line
        while True:
            v = sp.Rational(rng.randint(lo, hi), rng.randint(1, 7))
            if v or not nonzero:
                return v

    def count_after_shear(target, shear) -> int | None:
        F, G, H = (sp.expand(f.to_sympy(X + shear * Y, Y)) for f in net)
        c0, c1, c2 = target
        A, B = sp.expand(c1 * F - c0 * G), sp.expand(c2 * F - c0 * H)
        if A == 0 or B == 0:
            return None
        R = sp.Poly(sp.resultant(A, B, Y), X)
        if R.is_zero:
            return None
        rb = sp.gcd(sp.resultant(F, G, Y), sp.resultant(F, H, Y))
        sqf = sp.Poly(sp.sqf_part(R.as_expr()), X) if R.degree() > 0 else R
        base = sp.Poly(sp.gcd(sqf.as_expr(), rb), X)
        return sqf.degree() - max(base.degree(), 0)

    counts = []
    for _ in range(trials):
        for _attempt in range(max_retries):
            target = tuple(sample(nonzero=True) for _ in range(3))
            # a shear can merge x-coordinates (with each other or with a base
            # point) but never split them, so the largest count is the honest one
            found = [count_after_shear(target, sample(nonzero=True)) for _ in range(shears)]
            found = [k for k in found if k is not None]
            if found:
                counts.append(max(found))
                break
        else:
            raise CurveError("degenerate targets: resultant vanished on every retry")
    tally = Counter(counts)
    modal = max(sorted(tally), key=lambda k: tally[k])
    return {"count": modal, "counts": counts, "stable": len(tally) == 1, "trials": trials, "seed": seed}
