"""Automorphisms and extended symmetries of substitutive subshifts.

The relabeling part of the automorphism group is computed exactly (a
symbol permutation commuting with the substitution induces a radius-0
automorphism, and for primitive bijective substitutions these are all of
them up to shifts).  Extended-symmetry candidates range over the signed
permutations of the axes; the checker first looks for an exact rule-table
equality at some alignment power and only then falls back to bounded
language comparison, whose positive outcome is reported as evidence, not
proof.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import CapExceeded, ScopeError, ValidationError
from .lattice import Rect, SignedPerm, Vec, signed_perm_group, spow
from .points import HalfSpacePair, half_space_fracture_pair
from .language import PatchLanguage, patch_language
from .substitution import (
    Pattern,
    RectSubstitution,
    corner_fixing_power,
    is_bijective,
    is_primitive,
    power,
)

Relabeling = tuple[int, ...]  # table: symbol -> symbol


def _require_primitive_bijective(theta: RectSubstitution, what: str) -> None:
    if not is_primitive(theta).primitive:
        raise ScopeError(f"{what} requires a primitive substitution")
    if not is_bijective(theta):
        raise ScopeError(f"{what} requires a bijective substitution")


def relabel_automorphisms(theta: RectSubstitution) -> list[Relabeling]:
    """All symbol permutations tau with tau(theta(a)_k) = theta(tau(a))_k.

    The commutation criterion is checked position by position; candidates
    failing already at position 0 are pruned before the full scan.
    """
    _require_primitive_bijective(theta, "relabel_automorphisms")
    n = len(theta.alphabet)
    support = list(theta.support().cells())
    first = support[0]
    pm0 = tuple(theta.rule(a).get(first) for a in range(n))
    out = []
    for perm in itertools.permutations(range(n)):
        if any(perm[pm0[a]] != pm0[perm[a]] for a in range(n)):
            continue
        if all(
            perm[theta.rule(a).get(k)] == theta.rule(perm[a]).get(k)
            for a in range(n)
            for k in support
        ):
            out.append(perm)
    _assert_subgroup(out, n)
    return out


def _assert_subgroup(perms: list[Relabeling], n: int) -> None:
    ident = tuple(range(n))
    group = set(perms)
    assert ident in group, "relabeling set lost the identity"
    for p in perms:
        inv = [0] * n
        for i, v in enumerate(p):
            inv[v] = i
        assert tuple(inv) in group, "relabeling set not closed under inverse"
        for q in perms:
            assert tuple(p[q[i]] for i in range(n)) in group, (
                "relabeling set not closed under composition"
            )


def compose_relabelings(p: Relabeling, q: Relabeling) -> Relabeling:
    """p after q."""
    return tuple(p[q[i]] for i in range(len(p)))


@dataclass(frozen=True)
class AutDescription:
    """Aut is (shifts) x (relabel group) for primitive bijective input."""

    dim: int
    relabel_group: tuple[Relabeling, ...]
    structure: str

    @property
    def relabel_order(self) -> int:
        return len(self.relabel_group)


def aut_group_description(theta: RectSubstitution) -> AutDescription:
    _require_primitive_bijective(theta, "aut_group_description")
    group = tuple(relabel_automorphisms(theta))
    n = len(theta.alphabet)
    if n == 2:
        assert len(group) in (1, 2), "binary relabel group must be trivial or C2"
    order = len(group)
    if order == 1:
        tail = "1"
    elif _is_cyclic(group):
        tail = f"C{order}"
    else:
        tail = f"R (order {order})"
    return AutDescription(theta.dim, group, f"Z^{theta.dim} x {tail}")


def _is_cyclic(group: tuple[Relabeling, ...]) -> bool:
    n = len(group)
    for g in group:
        e = g
        order = 1
        ident = tuple(range(len(g)))
        while e != ident:
            e = compose_relabelings(g, e)
            order += 1
            if order > n:
                return False
        if order == n:
            return True
    return n == 1


# ---------------------------------------------------------------------------
# Extended symmetries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SizeMismatch:
    """The axis permutation does not fix the size vector; no alignment power helps."""

    size: Vec
    permuted: Vec


def transformed_substitution(
    theta: RectSubstitution, a: SignedPerm, tau: Relabeling
) -> RectSubstitution | SizeMismatch:
    """Conjugate the rule table by the rigid map (A, tau).

    The patch of each symbol is moved cell-by-cell through A, re-anchored
    to [0, s-1], and relabeled; the rule for tau(sym) is the transform of
    the rule for sym.  Returns SizeMismatch if A's permutation part moves
    the size vector.
    """
    if a.dim != theta.dim:
        raise ValidationError("matrix dimension mismatch")
    s = theta.size
    inv = a.inverse_perm()
    permuted = tuple(s[inv[j]] for j in range(a.dim))
    if permuted != s:
        return SizeMismatch(s, permuted)
    n = len(theta.alphabet)

    def re_anchor(k: Vec) -> Vec:
        return tuple(
            k[inv[j]] if a.signs[inv[j]] == 0 else s[j] - 1 - k[inv[j]]
            for j in range(a.dim)
        )

    box = Rect.box(s)
    new_rules: list[Pattern | None] = [None] * n
    for sym in range(n):
        patch = theta.rule(sym)
        buf = bytearray(len(patch.cells))
        out = Pattern(patch.anchor, patch.extent, bytes(buf))
        for k in box.cells():
            buf[out.index_of(re_anchor(k))] = tau[patch.get(k)]
        new_rules[tau[sym]] = Pattern(patch.anchor, patch.extent, bytes(buf))
    return RectSubstitution(theta.alphabet, s, tuple(new_rules))  # type: ignore[arg-type]


EXACT_YES = "ExactYes"
VERIFIED_UP_TO = "VerifiedUpTo"
REFUTED_AT = "RefutedAt"
SIZE_MISMATCH = "SizeMismatch"

#: Hard cap on alignment powers tried by the exact-equality fast path.
ALIGN_POWER_CAP = 24


@dataclass(frozen=True)
class SymmetryCandidate:
    a: SignedPerm
    verdict: str
    tau: Relabeling | None = None
    taus: tuple[Relabeling, ...] = ()
    align_power: int | None = None
    depth: int | None = None
    witness: Pattern | None = None
    witness_missing_from: str | None = None  # "original" or "transformed"

    def describe(self) -> str:
        if self.verdict == EXACT_YES:
            return f"{EXACT_YES},tau={_tau_str(self.tau)}"
        if self.verdict == VERIFIED_UP_TO:
            return f"{VERIFIED_UP_TO}({self.depth}),tau={_tau_str(self.tau)}"
        if self.verdict == REFUTED_AT:
            return f"{REFUTED_AT}({self.depth})"
        return SIZE_MISMATCH


def _tau_str(tau: Relabeling | None) -> str:
    return "" if tau is None else ",".join(str(t) for t in tau)


def _alignment_powers(theta: RectSubstitution, m_cap: int) -> list[int]:
    cfp = corner_fixing_power(theta)
    top = min(m_cap, max(2 * cfp, 2))
    return list(range(1, top + 1))


def extended_symmetry_check(
    theta: RectSubstitution,
    a: SignedPerm,
    depth: int = 3,
    m_cap: int = ALIGN_POWER_CAP,
) -> SymmetryCandidate:
    """Decide how the rigid axis map A interacts with the subshift.

    Fast path: if some relabeling makes the transformed rule table of some
    power theta^m equal theta^m exactly, the rigid map is a genuine
    extended symmetry (ExactYes).  Otherwise bounded language comparison
    for cube shapes up to `depth` either finds a witness pattern on one
    side only (RefutedAt) or reports agreement (VerifiedUpTo - explicitly
    not a proof).
    """
    _require_primitive_bijective(theta, "extended_symmetry_check")
    n = len(theta.alphabet)
    taus = list(itertools.permutations(range(n)))

    probe = transformed_substitution(theta, a, taus[0])
    if isinstance(probe, SizeMismatch):
        return SymmetryCandidate(a, SIZE_MISMATCH)

    for m in _alignment_powers(theta, m_cap):
        try:
            theta_m = power(theta, m)
        except CapExceeded:
            break
        hits = []
        for tau in taus:
            cand = transformed_substitution(theta_m, a, tau)
            assert not isinstance(cand, SizeMismatch)
            if all(
                cand.rule(sym).cells == theta_m.rule(sym).cells for sym in range(n)
            ):
                hits.append(tau)
        if hits:
            return SymmetryCandidate(
                a, EXACT_YES, tau=hits[0], taus=tuple(hits), align_power=m
            )

    return _language_comparison(theta, a, taus, depth)


def _language_comparison(
    theta: RectSubstitution, a: SignedPerm, taus: list[Relabeling], depth: int
) -> SymmetryCandidate:
    shapes = [(side,) * theta.dim for side in range(2, depth + 1)]
    base: dict[Vec, PatchLanguage] = {
        sh: patch_language(theta, sh, mode="minimal") for sh in shapes
    }
    first_witness: tuple[Pattern, str] | None = None
    for tau in taus:
        cand = transformed_substitution(theta, a, tau)
        assert not isinstance(cand, SizeMismatch)
        agree = True
        for sh in shapes:
            lang_t = patch_language(cand, sh, mode="minimal")
            extra = lang_t.patterns - base[sh].patterns
            missing = base[sh].patterns - lang_t.patterns
            if extra or missing:
                agree = False
                if first_witness is None:
                    if extra:
                        cells = min(extra)
                        first_witness = (
                            Pattern((0,) * theta.dim, sh, cells),
                            "original",
                        )
                    else:
                        cells = min(missing)
                        first_witness = (
                            Pattern((0,) * theta.dim, sh, cells),
                            "transformed",
                        )
                break
        if agree:
            return SymmetryCandidate(a, VERIFIED_UP_TO, tau=tau, depth=depth)
    assert first_witness is not None
    return SymmetryCandidate(
        a,
        REFUTED_AT,
        depth=depth,
        witness=first_witness[0],
        witness_missing_from=first_witness[1],
    )


@dataclass(frozen=True)
class SymReport:
    dim: int
    depth: int
    candidates: tuple[SymmetryCandidate, ...]  # in signed_perm_group order
    psi_image_order: int
    split: str  # yes | no | unknown
    closure_ok: bool

    def by_matrix(self) -> dict[SignedPerm, SymmetryCandidate]:
        return {c.a: c for c in self.candidates}

    def summary_line(self) -> str:
        return f"psi_image_order={self.psi_image_order} split={self.split}"


def sym_group_report(
    theta: RectSubstitution, depth: int = 3, threads: int = 1
) -> SymReport:
    """Run the symmetry check over the whole hyperoctahedral group.

    The ExactYes subset is checked for closure under composition and
    inverse, including compatibility of the relabelings; the result is
    deterministic regardless of the thread count.
    """
    group = signed_perm_group(theta.dim)

    def job(a: SignedPerm) -> SymmetryCandidate:
        return extended_symmetry_check(theta, a, depth=depth)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(job, group))
    else:
        results = [job(a) for a in group]

    by_a = {c.a: c for c in results}
    exact = [c for c in results if c.verdict == EXACT_YES]
    closure_ok = True
    for c1 in exact:
        inv = by_a.get(c1.a.inverse())
        if inv is None or inv.verdict != EXACT_YES:
            closure_ok = False
            break
        for c2 in exact:
            prod = by_a.get(c1.a.compose(c2.a))
            if prod is None or prod.verdict != EXACT_YES:
                closure_ok = False
                break
            composed_tau = compose_relabelings(c1.tau, c2.tau)
            if composed_tau not in prod.taus:
                closure_ok = False
                break
        if not closure_ok:
            break

    any_verified = any(c.verdict == VERIFIED_UP_TO for c in results)
    split = "yes" if (exact and closure_ok and not any_verified) else (
        "unknown" if any_verified else "no"
    )
    return SymReport(
        theta.dim, depth, tuple(results), len(exact), split, closure_ok
    )


# ---------------------------------------------------------------------------
# Fracture witnesses and refuters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HalfSpace:
    """{k : +-<k, normal> >= threshold}."""

    normal: Vec
    threshold: int
    side: int  # +1 or -1

    def contains(self, k: Vec) -> bool:
        v = sum(x * y for x, y in zip(k, self.normal))
        return self.side * v >= self.threshold


@dataclass(frozen=True)
class FractureWitness:
    pair: HalfSpacePair
    window: Rect
    equal_on_upper: bool
    unequal_on_lower: bool

    @property
    def ok(self) -> bool:
        return self.equal_on_upper and self.unequal_on_lower


def fracture_normal_witness(
    theta: RectSubstitution, axis: int, window: int = 64
) -> FractureWitness:
    """Package an axis fracture pair with window-level verification masks."""
    pair = half_space_fracture_pair(theta, axis)
    rect = Rect((-window,) * theta.dim, (window - 1,) * theta.dim)
    wx = pair.x.window(rect)
    wy = pair.y.window(rect)
    equal_upper = True
    unequal_lower = True
    for k in rect.cells():
        same = wx.get(k) == wy.get(k)
        if k[axis] >= 0:
            equal_upper &= same
        else:
            unequal_lower &= not same
    return FractureWitness(pair, rect, equal_upper, unequal_lower)


@dataclass(frozen=True)
class StraddlingBlock:
    """A level-m inflation block meeting both half-spaces of a band.

    Any two points that agree on S+ agree on the whole block (one shared
    cell determines a bijective inflation patch), hence on the block's
    S- part - which is what refutes an everywhere-difference fracture in
    a non-axis direction.
    """

    level: int
    block: Rect
    upper_cell: Vec
    lower_cell: Vec
    upper_count: int
    lower_count: int


@dataclass(frozen=True)
class RefuterReport:
    normal: Vec
    threshold: int
    window: int
    conclusive: bool
    block: StraddlingBlock | None = None
    required_window: int | None = None


def non_axis_fracture_refuter(
    theta: RectSubstitution, v: Vec, threshold: int, window: int = 128
) -> RefuterReport:
    """Find a level-m block straddling the band |<k, v>| < threshold.

    The block side is chosen so that the straddle is guaranteed for every
    possible inflation-grid offset, mirroring how the hierarchical
    structure contradicts a fracture along a non-axis normal.
    """
    if len(v) != theta.dim or all(x == 0 for x in v):
        raise ValidationError("v must be a nonzero vector")
    if sum(1 for x in v if x != 0) < 2:
        raise ScopeError("v is axis-parallel; only non-axis normals are refutable")
    if not is_bijective(theta):
        raise ScopeError("the refuter argument needs a bijective substitution")
    if threshold < 1:
        raise ValidationError("threshold must be >= 1")

    upper = HalfSpace(v, threshold, +1)
    lower = HalfSpace(v, threshold, -1)
    s = theta.size
    for m in range(1, 40):
        side = spow(s, m)
        span = sum(abs(x) * (L - 1) for x, L in zip(v, side))
        grid_gcd = math.gcd(*(L * abs(x) for L, x in zip(side, v) if x != 0))
        if span - 2 * threshold + 1 < grid_gcd:
            continue
        m_minus = sum(min(0, x * (L - 1)) for x, L in zip(v, side))
        m_plus = sum(max(0, x * (L - 1)) for x, L in zip(v, side))
        lo_t, hi_t = threshold - m_plus, -threshold - m_minus
        # search the origin-anchored grid for a block inside the window
        span_z = [range(-(window // L) - 1, window // L + 2) for L in side]
        for z in itertools.product(*span_z):
            t = tuple(zi * L for zi, L in zip(z, side))
            if not lo_t <= _dot(t, v) <= hi_t:
                continue
            block = Rect(t, tuple(x + L - 1 for x, L in zip(t, side)))
            win = Rect((-window,) * theta.dim, (window,) * theta.dim)
            if not win.contains_rect(block):
                continue
            up_cells = [k for k in block.cells() if upper.contains(k)]
            low_cells = [k for k in block.cells() if lower.contains(k)]
            assert up_cells and low_cells
            return RefuterReport(
                v,
                threshold,
                window,
                True,
                StraddlingBlock(
                    m, block, up_cells[0], low_cells[0], len(up_cells), len(low_cells)
                ),
            )
        # a straddling block exists but not inside this window
        need = max(side) * (2 + max(abs(x) for x in v)) + 2 * threshold
        return RefuterReport(v, threshold, window, False, None, need)
    raise ScopeError("no straddling level found within 40 inflation levels")


def _dot(a: Vec, b: Vec) -> int:
    return sum(x * y for x, y in zip(a, b))
