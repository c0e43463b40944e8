"""Lazy points of a substitutive subshift.

Every point here is a shifted fixed point: a seed on {-1,0}^d that the
seed dynamics fix, inflated forever, then translated.  Symbol queries
walk the digit expansion of the coordinate, so a lookup costs O(depth)
table hits and no patch is ever materialized.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CapExceeded, ScopeError, SearchFailure, ValidationError
from .lattice import Rect, Vec, vadd, vmod, vsub, zero
from .substitution import (
    DEFAULT_CELL_CAP,
    Pattern,
    RectSubstitution,
    Seed,
    corner_order,
    fixed_seeds,
    is_bijective,
    position_map,
    seed_step,
)


@dataclass(frozen=True, slots=True)
class OdometerCoord:
    """Finite-precision element of the product odometer.

    residues[m-1] is the coordinate mod s^m (componentwise); consecutive
    residues must cohere.
    """

    size: Vec
    residues: tuple[Vec, ...]

    def __post_init__(self) -> None:
        for m, r in enumerate(self.residues, start=1):
            bound = tuple(x**m for x in self.size)
            if any(not 0 <= c < b for c, b in zip(r, bound)):
                raise ValidationError(f"residue {r} out of range mod {bound}")
            if m > 1:
                prev_bound = tuple(x ** (m - 1) for x in self.size)
                prev = self.residues[m - 2]
                if tuple(c % b for c, b in zip(r, prev_bound)) != prev:
                    raise ValidationError("incoherent odometer residues")

    @property
    def precision(self) -> int:
        return len(self.residues)

    @classmethod
    def from_integer(cls, v: Vec, size: Vec, precision: int) -> "OdometerCoord":
        res = []
        for m in range(1, precision + 1):
            bound = tuple(x**m for x in size)
            res.append(tuple(c % b for c, b in zip(v, bound)))
        return cls(size, tuple(res))

    def add_integer(self, k: Vec) -> "OdometerCoord":
        res = []
        for m, r in enumerate(self.residues, start=1):
            bound = tuple(x**m for x in self.size)
            res.append(tuple((c + x) % b for c, x, b in zip(r, k, bound)))
        return OdometerCoord(self.size, tuple(res))


class AddressablePoint:
    """sigma_v(x_P) for a fixed seed P: total, O(depth) symbol queries.

    The substitution must fix the seed (seed_step(theta, seed) == seed);
    replacing theta by its corner-fixing power makes every seed eligible
    for bijective substitutions.
    """

    __slots__ = ("theta", "seed", "shift", "_pos_maps")

    def __init__(self, theta: RectSubstitution, seed: Seed, shift: Vec | None = None):
        if seed.dim != theta.dim:
            raise ValidationError("seed dimension mismatch")
        if seed_step(theta, seed) != seed:
            raise ScopeError(
                "seed is not fixed by the substitution; "
                "replace theta by a corner-fixing power first"
            )
        self.theta = theta
        self.seed = seed
        self.shift = shift if shift is not None else zero(theta.dim)
        self._pos_maps = {
            k: position_map(theta, k) for k in theta.support().cells()
        }

    @property
    def dim(self) -> int:
        return self.theta.dim

    def with_shift(self, v: Vec) -> "AddressablePoint":
        clone = AddressablePoint.__new__(AddressablePoint)
        clone.theta = self.theta
        clone.seed = self.seed
        clone.shift = v
        clone._pos_maps = self._pos_maps
        return clone

    def symbol_at(self, k: Vec) -> int:
        """Symbol at coordinate k.

        The coordinate is routed to the quadrant of the seed cell it falls
        in, converted to a nonnegative in-quadrant offset, and resolved by
        composing position maps along its digit expansion.  The result is
        independent of the expansion depth because the seed is fixed.
        """
        w = vsub(k, self.shift)
        u = tuple(0 if x >= 0 else -1 for x in w)
        offs = tuple(x if ui == 0 else -1 - x for x, ui in zip(w, u))
        s = self.theta.size
        sym = self.seed.corner(u)
        digit_stack = []
        rest = list(offs)
        while any(rest):
            digit = []
            for i, b in enumerate(s):
                rest[i], r = divmod(rest[i], b)
                digit.append(r)
            digit_stack.append(tuple(digit))
        # digit d on a sign-flipped axis reads patch position s-1-d
        for digit in reversed(digit_stack):
            actual = tuple(
                d if ui == 0 else si - 1 - d for d, ui, si in zip(digit, u, s)
            )
            sym = self._pos_maps[actual][sym]
        return sym

    def window(self, r: Rect, cell_cap: int = DEFAULT_CELL_CAP) -> Pattern:
        """Materialize symbol_at over an inclusive rect."""
        n = r.cell_count()
        if n > cell_cap:
            raise CapExceeded(f"window of {n} cells exceeds cap {cell_cap}")
        buf = bytearray(n)
        out = Pattern(r.lo, r.extent(), bytes(n))
        for k in r.cells():
            buf[out.index_of(k)] = self.symbol_at(k)
        return Pattern(r.lo, r.extent(), bytes(buf))

    def phi(self, precision: int) -> OdometerCoord:
        """Odometer coordinate: the underlying fixed point maps to 0."""
        if precision < 1:
            raise ValidationError("precision must be >= 1")
        return OdometerCoord.from_integer(self.shift, self.theta.size, precision)

    def __repr__(self) -> str:  # pragma: no cover
        return f"AddressablePoint(seed={self.seed.symbols}, shift={self.shift})"


def shift_point(x: AddressablePoint, k: Vec) -> AddressablePoint:
    return x.with_shift(vadd(x.shift, k))


def desubstitute_point(x: AddressablePoint) -> tuple[Vec, AddressablePoint]:
    """Unique k1 in S and y with x = sigma_k1(theta(y))."""
    s = x.theta.size
    k1 = vmod(x.shift, s)
    y_shift = tuple((v - r) // b for v, r, b in zip(x.shift, k1, s))
    return k1, x.with_shift(y_shift)


@dataclass(frozen=True)
class DesubFit:
    """One consistent de-substitution offset for a finite pattern."""

    offset: Vec
    block_candidates: dict[Vec, tuple[int, ...]]


def desubstitute_pattern(theta: RectSubstitution, p: Pattern) -> list[DesubFit]:
    """All offsets o in [0, s-1] consistent with p being part of sigma_o(theta(q)).

    Each surviving offset carries, per touched block, the symbols whose
    patches agree with p there.  No uniqueness is ever asserted.
    """
    s = theta.size
    nsym = len(theta.alphabet)
    fits = []
    for o in theta.support().cells():
        blocks: dict[Vec, set[int]] = {}
        ok = True
        for k in p.rect().cells():
            rel = vsub(k, o)
            block = tuple(x // b for x, b in zip(rel, s))
            inner = tuple(x % b for x, b in zip(rel, s))
            cands = blocks.setdefault(block, set(range(nsym)))
            cands &= {
                a for a in range(nsym) if theta.rule(a).get(inner) == p.get(k)
            }
            if not cands:
                ok = False
                break
        if ok:
            fits.append(
                DesubFit(o, {b: tuple(sorted(c)) for b, c in blocks.items()})
            )
    return fits


# ---------------------------------------------------------------------------
# Special point pairs
# ---------------------------------------------------------------------------


def quadrant_cell_of(k: Vec) -> Vec:
    """Seed cell addressed by coordinate k (k_i >= 0 reads corner entry 0)."""
    return tuple(0 if x >= 0 else -1 for x in k)


def _cell_of_sign(u: Vec) -> Vec:
    """Seed cell sitting inside the quadrant with sign vector u."""
    return tuple(0 if ui == 1 else -1 for ui in u)


@dataclass(frozen=True)
class ContradictionPair:
    """Two points matching everywhere except on one quadrant.

    `quadrant_sign` names the quadrant (as a +-1 vector); inside it the
    two points differ at every coordinate, outside they agree.  For binary
    alphabets the difference is the symbol swap.
    """

    x: AddressablePoint
    y: AddressablePoint
    quadrant_sign: Vec
    complement_on_quadrant: bool

    def expected_equal(self, k: Vec) -> bool:
        return quadrant_cell_of(k) != _cell_of_sign(self.quadrant_sign)


def contradiction_pair(
    theta: RectSubstitution, u: Vec, base_seed: Seed | None = None
) -> ContradictionPair:
    """Flip one seed corner of a fixed point; bijectivity spreads the flip
    over exactly that quadrant.

    Requires a bijective substitution whose corner maps are already
    identity (corner-fixed), so every seed is fixed.
    """
    if not is_bijective(theta):
        raise ScopeError("contradiction_pair requires a bijective substitution")
    if any(ui not in (-1, 1) for ui in u) or len(u) != theta.dim:
        raise ScopeError("u must be a +-1 sign vector of the right dimension")
    cell = _cell_of_sign(u)
    seed_x = base_seed if base_seed is not None else Seed.constant(theta.dim, 0)
    a = seed_x.corner(cell)
    b = (a + 1) % len(theta.alphabet)
    seed_y = seed_x.with_corner(cell, b)
    x = AddressablePoint(theta, seed_x)
    y = AddressablePoint(theta, seed_y)
    return ContradictionPair(x, y, tuple(u), len(theta.alphabet) == 2)


@dataclass(frozen=True)
class HalfSpacePair:
    """Two points agreeing on {k_axis >= 0} and differing on all of {k_axis < 0}."""

    x: AddressablePoint
    y: AddressablePoint
    axis: int

    def expected_equal(self, k: Vec) -> bool:
        return k[self.axis] >= 0


def half_space_fracture_pair(
    theta: RectSubstitution, axis: int
) -> HalfSpacePair:
    """Search the fixed seeds for a pair realizing an axis half-space split.

    The pair must share every seed cell with coordinate 0 on `axis` and
    differ on every seed cell with coordinate -1 there.  Bijectivity then
    forces agreement on the closed upper half-space and disagreement at
    every single coordinate of the open lower one.
    """
    if not 0 <= axis < theta.dim:
        raise ValidationError(f"axis {axis} out of range")
    if not is_bijective(theta):
        raise ScopeError("half_space_fracture_pair requires a bijective substitution")
    fixed = fixed_seeds(theta).fixed
    order = corner_order(theta.dim)
    upper = [i for i, u in enumerate(order) if u[axis] == 0]
    lower = [i for i, u in enumerate(order) if u[axis] == -1]
    for sx in fixed:
        for sy in fixed:
            if all(sx.symbols[i] == sy.symbols[i] for i in upper) and all(
                sx.symbols[i] != sy.symbols[i] for i in lower
            ):
                return HalfSpacePair(
                    AddressablePoint(theta, sx), AddressablePoint(theta, sy), axis
                )
    raise SearchFailure("faithfulness witness not found at seed level")
