"""Curves with closed-form parametrizations at their distinguished point.

Expected invariants are stored with each entry but re-derived on load from
the parametrization; a mismatch raises instead of being trusted.
"""
from __future__ import annotations

from dataclasses import dataclass

from .cusp_numerics import CuspProfile, nu_emb, nu_tilde
from .linear_systems import (
    CurveError,
    HomogeneousForm,
    LocalCurve,
    TruncatedSeries,
    multiplicity_sequence_from_param,
)

FAMILY_DEGREES = range(3, 9)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    degree: int
    F: dict
    param: dict
    expected_minseq: tuple[int, ...]
    expected_nu: int
    description: str = ""

    def curve(self, truncation: int | None = None) -> LocalCurve:
        d = self.degree
        K = truncation or d * d + d + 5
        form = HomogeneousForm(d, self.F)
        x = TruncatedSeries.from_dict(self.param["x"], K)
        y = TruncatedSeries.from_dict(self.param["y"], K)
        return LocalCurve(form, x, y, K)

    def load(self, truncation: int | None = None) -> tuple[LocalCurve, CuspProfile]:
        """Validated curve and profile, with the stored expectations re-checked."""
        c = self.curve(truncation)
        # enough precision for the branch resolution regardless of the curve's K
        K = max(c.K, 4 * self.degree + 8)
        seqs = multiplicity_sequence_from_param(
            TruncatedSeries.from_dict(self.param["x"], K),
            TruncatedSeries.from_dict(self.param["y"], K),
        )
        prof = CuspProfile(self.degree, seqs.minimal)
        if seqs.minimal != self.expected_minseq:
            raise CurveError(f"{self.name}: multiplicities {seqs.minimal} != expected {self.expected_minseq}")
        if nu_tilde(prof) != self.expected_nu:
            raise CurveError(f"{self.name}: nu_tilde {nu_tilde(prof)} != expected {self.expected_nu}")
        return c, prof

    def summary(self) -> dict:
        c, prof = self.load()
        return {
            "name": self.name,
            "degree": self.degree,
            "F": str(c.F),
            "param": {"x": self.param["x"], "y": self.param["y"]},
            "multiplicities": list(prof.multiplicities),
            "nu_tilde": nu_tilde(prof),
            "nu_emb": nu_emb(prof),
            "description": self.description,
        }

    def to_curve_json(self) -> dict:
        return self.curve().to_json()


def cusp_family(d: int) -> CatalogEntry:
    """``Z Y^{d-1} = X^d`` with parametrization ``(t^{d-1}, t^d)``."""
    if d < 3:
        raise ValueError("the cuspidal family starts at d = 3")
    return CatalogEntry(
        name=f"cusp{d}",
        degree=d,
        F={(0, d - 1, 1): 1, (d, 0, 0): -1},
        param={"x": {str(d - 1): "1"}, "y": {str(d): "1"}},
        expected_minseq=(d - 1,),
        expected_nu=2 * d - 1,
        description=f"Z*Y^{d - 1} = X^{d}, cusp of multiplicity {d - 1} at (0:0:1)",
    )


def _entries() -> dict[str, CatalogEntry]:
    out = {
        "line": CatalogEntry("line", 1, {(0, 1, 0): 1}, {"x": {"1": "1"}, "y": {}}, (), 1,
                             "the line Y = 0"),
        "conic": CatalogEntry("conic", 2, {(0, 1, 1): 1, (2, 0, 0): -1},
                              {"x": {"1": "1"}, "y": {"2": "1"}}, (), 4, "the conic Z*Y = X^2"),
    }
    for d in FAMILY_DEGREES:
        e = cusp_family(d)
        out[e.name] = e
    return out


CATALOG: dict[str, CatalogEntry] = _entries()


def get(name: str) -> CatalogEntry:
    if name in CATALOG:
        return CATALOG[name]
    if name.startswith("cusp") and name[4:].isdigit():
        return cusp_family(int(name[4:]))
    raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG)}")
