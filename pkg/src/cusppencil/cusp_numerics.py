"""Multiplicity-sequence arithmetic for unicuspidal plane curves.

Covers Euclidean blocks ``S(a, b)``, self-intersection bookkeeping of the
strict transform, the genus-zero test, proximity matrices built from the
Enriques equalities, staircase block decomposition, and the exhaustive study
of the system ``sum r_i^2 = d^2``, ``sum r_i = 3d - 2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterator, Sequence

DEFAULT_OBSTRUCTION_BOUND = 14


class ProfileError(ValueError):
    pass


class ProximityError(ValueError):
    """The multiplicity sequence violates the proximity (Enriques) rules."""


class GrammarError(ValueError):
    """The sequence is not a concatenation of Euclidean blocks."""


@dataclass(frozen=True)
class CuspProfile:
    degree: int
    multiplicities: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "multiplicities", tuple(int(r) for r in self.multiplicities))
        ms = self.multiplicities
        if self.degree < 1:
            raise ProfileError("degree must be positive")
        if any(r < 2 for r in ms):
            raise ProfileError("minimal multiplicity sequence entries must be >= 2")
        if any(a < b for a, b in zip(ms, ms[1:])):
            raise ProfileError("multiplicity sequence must be non-increasing")
        if ms and ms[0] > self.degree - 1:
            raise ProfileError(f"r_1 = {ms[0]} exceeds d - 1 = {self.degree - 1}")

    @property
    def d(self) -> int:
        return self.degree

    @property
    def n(self) -> int:
        return len(self.multiplicities)

    @property
    def singular(self) -> bool:
        return bool(self.multiplicities)

    @property
    def N(self) -> int:
        return self.n + self.multiplicities[-1] if self.singular else 0

    @property
    def delta(self) -> int:
        return (self.degree - 1) * (self.degree - 2) // 2

    def as_dict(self) -> dict:
        return {"degree": self.degree, "multiplicities": list(self.multiplicities)}

    @classmethod
    def from_json(cls, doc) -> "CuspProfile":
        try:
            d = doc["degree"]
            ms = doc.get("multiplicities", [])
        except (TypeError, KeyError, AttributeError):
            raise ProfileError("profile needs 'degree' and 'multiplicities'") from None
        if not isinstance(d, int) or not all(isinstance(r, int) for r in ms):
            raise ProfileError("profile entries must be integers")
        return cls(d, tuple(ms))


# ---------------------------------------------------------------------------
# Euclidean blocks
# ---------------------------------------------------------------------------

def euclid_sequence(a: int, b: int) -> tuple[int, ...]:
    """``S(a, b)``: each remainder of the Euclidean algorithm repeated by its quotient."""
    if a < 1 or b < 1:
        raise ValueError("S(a, b) needs a, b >= 1")
    x0, x1 = max(a, b), min(a, b)
    out: list[int] = []
    while x1:
        q, r = divmod(x0, x1)
        out += [x1] * q
        x0, x1 = x1, r
    return tuple(out)


def verify_euclid_identities(a: int, b: int) -> tuple[int, int, bool]:
    s = euclid_sequence(a, b)
    total = sum(s)
    sq = sum(r * r for r in s)
    return total, sq, total == a + b - gcd(a, b) and sq == a * b


# ---------------------------------------------------------------------------
# profile invariants
# ---------------------------------------------------------------------------

def nu_tilde(profile: CuspProfile) -> int:
    return profile.degree ** 2 - sum(r * r for r in profile.multiplicities)


def nu_emb(profile: CuspProfile) -> int:
    if not profile.singular:
        return profile.degree ** 2
    return nu_tilde(profile) - profile.multiplicities[-1]


def genus_zero_check(profile: CuspProfile) -> bool:
    d = profile.degree
    return (d - 1) * (d - 2) == sum(r * (r - 1) for r in profile.multiplicities)


def embedded_sequence(profile: CuspProfile) -> tuple[int, ...]:
    if not profile.singular:
        raise ProfileError("a smooth profile has no embedded resolution sequence")
    ms = profile.multiplicities
    return ms + (1,) * ms[-1]


# ---------------------------------------------------------------------------
# proximity
# ---------------------------------------------------------------------------

def proximity_matrix(seq: Sequence[int], extend_to: int | None = None) -> list[list[int]]:
    """Lower-triangular 0/1 matrix; entry ``[j][i] == 1`` iff P_{j+1} is proximate to P_{i+1}.

    Each point is proximate to its predecessor, and to an earlier point
    ``P_i`` as long as the points after ``P_i`` have not yet used up the
    capacity ``r_i``.  Raises :class:`ProximityError` when a capacity is
    exceeded or a point would be proximate to more than two points.
    """
    seq = list(seq)
    if any(r < 1 for r in seq):
        raise ProximityError("multiplicities must be positive")
    if any(a < b for a, b in zip(seq, seq[1:])):
        raise ProximityError("multiplicities must be non-increasing")
    m = len(seq) if extend_to is None else extend_to
    if m < len(seq):
        raise ProximityError("extend_to is shorter than the sequence")
    r = seq + [1] * (m - len(seq))
    prox = [[0] * m for _ in range(m)]
    used = [0] * m  # sum of multiplicities of points proximate to P_i so far
    for j in range(1, m):
        targets = [j - 1] + [i for i in range(j - 1) if sum(r[i + 1:j]) < r[i]]
        if len(targets) > 2:
            raise ProximityError(f"P_{j + 1} would be proximate to {len(targets)} points")
        for i in targets:
            prox[j][i] = 1
            used[i] += r[j]
            if used[i] > r[i]:
                raise ProximityError(
                    f"capacity of P_{i + 1} exceeded: proximate multiplicities sum to {used[i]} > r = {r[i]}"
                )
    return prox


def deficits(seq: Sequence[int], prox: list[list[int]]) -> list[int]:
    """``r_i - sum_{j -> i} r_j`` for each point."""
    m = len(prox)
    r = list(seq) + [1] * (m - len(seq))
    return [r[i] - sum(r[j] for j in range(m) if prox[j][i]) for i in range(m)]


def is_proximity_admissible(seq: Sequence[int], extend_to: int | None = None) -> bool:
    try:
        proximity_matrix(seq, extend_to)
    except ProximityError:
        return False
    return True


# ---------------------------------------------------------------------------
# staircase blocks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockDecomposition:
    pairs: tuple[tuple[int, int], ...]
    e: int
    tail: int

    @property
    def h(self) -> int:
        return len(self.pairs)

    def reassemble(self) -> tuple[int, ...]:
        out: list[int] = []
        for a, b in self.pairs:
            out += euclid_sequence(a, b)
        return tuple(out) + (self.tail,) * self.e

    def as_dict(self) -> dict:
        return {"pairs": [list(p) for p in self.pairs], "e": self.e, "tail": self.tail}


def block_decompose(seq: Sequence[int]) -> BlockDecomposition:
    """Split ``seq`` as ``S(a_1,b_1) ... S(a_h,b_h) (a_{h+1})^e``.

    Consecutive block leaders strictly decrease, so ``a_i`` never divides
    ``b_i`` and every block is pinned down by its leading run and the next
    smaller value: ``b = q * a + x``.  The next block must start at the gcd
    of the previous one; a trailing run of that gcd becomes ``e``.  A
    constant sequence ``(a)^k`` is read as ``S(a, a)`` followed by ``e = k - 1``.
    """
    seq = tuple(seq)
    if not seq:
        raise GrammarError("empty sequence")
    if any(x < 1 for x in seq) or any(a < b for a, b in zip(seq, seq[1:])):
        raise GrammarError("sequence must be positive and non-increasing")
    if len(set(seq)) == 1:
        return BlockDecomposition(((seq[0], seq[0]),), len(seq) - 1, seq[0])
    n = len(seq)
    pairs: list[tuple[int, int]] = []
    i = 0
    while True:
        a = seq[i]
        q = 0
        while i + q < n and seq[i + q] == a:
            q += 1
        if i + q == n:
            raise GrammarError(f"block at position {i + 1} has no remainder")
        b = q * a + seq[i + q]
        block = euclid_sequence(a, b)
        if seq[i:i + len(block)] != block:
            raise GrammarError(f"{seq!r} does not match S({a}, {b}) at position {i + 1}")
        pairs.append((a, b))
        i += len(block)
        g = gcd(a, b)
        rest = seq[i:]
        if all(x == g for x in rest):
            return BlockDecomposition(tuple(pairs), len(rest), g)
        if rest[0] != g:
            raise GrammarError(f"block at position {i + 1} must start at gcd {g}, found {rest[0]}")


# ---------------------------------------------------------------------------
# the system  sum r^2 = d^2,  sum r = 3d - 2
# ---------------------------------------------------------------------------

def _sequences(total_sq: int, total: int, max_part: int, min_part: int = 1) -> Iterator[tuple[int, ...]]:
    """Non-increasing sequences with given sum of squares and sum."""
    if total_sq == 0:
        if total == 0:
            yield ()
        return
    if total <= 0:
        return
    hi = min(max_part, total)
    for r in range(hi, min_part - 1, -1):
        if r * r > total_sq:
            continue
        # the remaining parts are <= r, so sum of squares <= r * sum
        rest_sq, rest = total_sq - r * r, total - r
        if rest_sq > r * rest or rest_sq < rest:
            continue
        for tail in _sequences(rest_sq, rest, r, min_part):
            yield (r,) + tail


@dataclass
class Candidate:
    sequence: tuple[int, ...]
    r_m: int
    blocks: BlockDecomposition | None
    checks: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        d = {"sequence": list(self.sequence), "r_m": self.r_m,
             "sum": sum(self.sequence), "sum_sq": sum(r * r for r in self.sequence)}
        d["blocks"] = self.blocks.as_dict() if self.blocks else None
        d.update(self.checks)
        return d


@dataclass
class ObstructionReport:
    degree: int
    candidates: list[Candidate]
    require_r1_bound: bool = True

    @property
    def singular_tail(self) -> list[Candidate]:
        """Candidates with ``r_m >= 2``, regardless of proximity deficits."""
        return [c for c in self.candidates if c.r_m >= 2]

    @property
    def constrained(self) -> list[Candidate]:
        """Candidates where only the last point can meet the strict transform.

        That is ``r_m >= 2`` and every earlier point has zero deficit, which is
        the situation in which the staircase and ``r_m = 2`` conclusions apply.
        """
        return [c for c in self.candidates if c.checks["no_section_hypothesis"]]

    @property
    def conclusion_holds(self) -> bool:
        return all(c.r_m == 2 and self.degree % 2 == 0 and c.blocks is not None
                   and c.checks.get("halved_sq_ok") and c.checks.get("halved_sum_ok")
                   and c.checks.get("gcd_e_alpha_h") == 1 and c.checks.get("e_positive")
                   for c in self.constrained)

    @property
    def non_staircase(self) -> list[Candidate]:
        return [c for c in self.candidates if c.blocks is None]

    def as_dict(self) -> dict:
        return {
            "d": self.degree,
            "r1_bound": self.require_r1_bound,
            "count": len(self.candidates),
            "count_r_m_ge_2": len(self.singular_tail),
            "count_constrained": len(self.constrained),
            "conclusion_holds": self.conclusion_holds,
            "candidates": [c.as_dict() for c in self.candidates],
        }


def enumerate_solutions(d: int, require_r1_bound: bool = True, admissible_only: bool = True) -> list[tuple[int, ...]]:
    """All non-increasing solutions of ``sum r^2 = d^2``, ``sum r = 3d - 2`` in lexicographic order."""
    max_part = d - 1 if require_r1_bound else d
    sols = [s for s in _sequences(d * d, 3 * d - 2, max(max_part, 1))]
    if admissible_only:
        sols = [s for s in sols if is_proximity_admissible(s)]
    return sorted(sols)


def analyse_sequence(seq: tuple[int, ...], d: int) -> Candidate:
    r_m = seq[-1]
    try:
        blocks = block_decompose(seq)
    except GrammarError:
        blocks = None
    defs = deficits(seq, proximity_matrix(seq))
    checks: dict = {"residual_sq": d * d - sum(r * r for r in seq),
                    "residual_sum": 3 * d - 2 - sum(seq),
                    "no_section_hypothesis": r_m >= 2 and all(x == 0 for x in defs[:-1])}
    if blocks is not None and r_m >= 2:
        tail = blocks.tail
        checks["tail_divides_d"] = d % tail == 0
        checks["tail_divides_2"] = 2 % tail == 0
        if tail == 2 and d % 2 == 0:
            delta = d // 2
            alphas = [a // 2 for a, _ in blocks.pairs] + [1]
            betas = [b // 2 for _, b in blocks.pairs]
            e = blocks.e
            checks["delta"] = delta
            checks["alpha"] = alphas
            checks["beta"] = betas
            checks["halved_sq_ok"] = delta * delta == sum(a * b for a, b in zip(alphas, betas)) + e
            checks["halved_sum_ok"] = 3 * delta == alphas[0] + e + sum(betas)
            checks["gcd_e_alpha_h"] = gcd(e, alphas[-2])
            checks["e_positive"] = e > 0
    return Candidate(seq, r_m, blocks, checks)


def section_obstruction(d: int, bound: int = DEFAULT_OBSTRUCTION_BOUND, require_r1_bound: bool = True) -> ObstructionReport:
    if d < 1:
        raise ValueError("d must be positive")
    if d > bound:
        raise ValueError(f"d = {d} exceeds the enumeration bound {bound}")
    sols = enumerate_solutions(d, require_r1_bound)
    return ObstructionReport(d, [analyse_sequence(s, d) for s in sols], require_r1_bound)


# ---------------------------------------------------------------------------
# admissible profiles
# ---------------------------------------------------------------------------

def is_branch_sequence(minseq: Sequence[int]) -> bool:
    """True when ``minseq`` extended by ``r_n`` ones satisfies every Enriques equality.

    After the embedded resolution the strict transform meets only the last
    exceptional curve, once; so all deficits vanish except the last, which is 1.
    """
    minseq = tuple(minseq)
    if not minseq:
        return True
    ext = minseq + (1,) * minseq[-1]
    try:
        defs = deficits(ext, proximity_matrix(ext))
    except ProximityError:
        return False
    return all(x == 0 for x in defs[:-1]) and defs[-1] == 1


def is_admissible(profile: CuspProfile) -> bool:
    return genus_zero_check(profile) and is_branch_sequence(profile.multiplicities)


def _genus_sequences(target: int, max_part: int) -> Iterator[tuple[int, ...]]:
    """Non-increasing sequences of parts >= 2 with ``sum r(r-1) == target``."""
    if target == 0:
        yield ()
        return
    for r in range(min(max_part, target), 1, -1):
        c = r * (r - 1)
        if c > target:
            continue
        for tail in _genus_sequences(target - c, r):
            yield (r,) + tail


def admissible_profiles(max_degree: int, min_degree: int = 1,
                        nonnegative: bool = True) -> list[CuspProfile]:
    """Every profile with branch-consistent multiplicities passing the genus check.

    With ``nonnegative`` only profiles with ``nu_tilde >= 0`` are kept.
    Ordered by degree, then lexicographically.
    """
    out = []
    for d in range(max(min_degree, 1), max_degree + 1):
        target = (d - 1) * (d - 2)
        for ms in sorted(_genus_sequences(target, max(d - 1, 1))):
            if not is_branch_sequence(ms):
                continue
            prof = CuspProfile(d, ms)
            if nonnegative and nu_tilde(prof) < 0:
                continue
            out.append(prof)
    return out
