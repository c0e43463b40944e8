"""Rectangular substitutions over finite alphabets.

A substitution maps each symbol to a patch with common box support
[0, s - 1]; it extends cellwise to patterns and configurations.  Symbols
are stored as dense byte indices; names only matter at the I/O boundary.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import CapExceeded, ScopeError, ValidationError
from .lattice import Rect, Vec, spow, vadd, vmul, zero

#: Default cap on materialized pattern cells; theta^m grows exponentially,
#: beyond this callers must go through the lazy point queries.
DEFAULT_CELL_CAP = 2**26


@dataclass(frozen=True, slots=True)
class Alphabet:
    names: tuple[str, ...]

    def __post_init__(self) -> None:
        if not 2 <= len(self.names) <= 255:
            raise ValidationError("alphabet size must be in [2, 255]")
        if len(set(self.names)) != len(self.names):
            raise ValidationError("alphabet names must be unique")

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValidationError(f"unknown symbol {name!r}") from None


class Pattern:
    """Finite rectangular symbol array with an integer anchor.

    Cells are a flat byte string with coordinate 0 varying fastest
    (column-major in matrix terms).
    """

    __slots__ = ("anchor", "extent", "cells", "_strides")

    def __init__(self, anchor: Vec, extent: Vec, cells: bytes) -> None:
        if len(anchor) != len(extent):
            raise ValidationError("anchor/extent dimension mismatch")
        if any(e <= 0 for e in extent):
            raise ValidationError("pattern extent must be positive")
        if len(cells) != math.prod(extent):
            raise ValidationError("cell buffer does not match extent")
        self.anchor = anchor
        self.extent = extent
        self.cells = bytes(cells)
        strides = [1] * len(extent)
        for i in range(1, len(extent)):
            strides[i] = strides[i - 1] * extent[i - 1]
        self._strides = tuple(strides)

    @classmethod
    def single(cls, anchor: Vec, symbol: int) -> "Pattern":
        return cls(anchor, (1,) * len(anchor), bytes([symbol]))

    @classmethod
    def from_rows(cls, anchor: Vec, rows) -> "Pattern":
        """Build from nested lists; outermost index is the last coordinate."""
        dims = []
        probe = rows
        while isinstance(probe, (list, tuple)):
            dims.append(len(probe))
            probe = probe[0]
        extent = tuple(reversed(dims))
        buf = bytearray(math.prod(extent))
        pat = cls(anchor, extent, bytes(buf))
        for k in pat.rect().cells():
            node = rows
            for c in reversed(tuple(x - a for x, a in zip(k, anchor))):
                node = node[c]
            buf[pat.index_of(k)] = node
        return cls(anchor, extent, bytes(buf))

    @property
    def dim(self) -> int:
        return len(self.extent)

    def rect(self) -> Rect:
        return Rect(self.anchor, tuple(a + e - 1 for a, e in zip(self.anchor, self.extent)))

    def index_of(self, k: Vec) -> int:
        return sum((x - a) * st for x, a, st in zip(k, self.anchor, self._strides))

    def get(self, k: Vec) -> int:
        return self.cells[self.index_of(k)]

    def translate(self, v: Vec) -> "Pattern":
        return Pattern(vadd(self.anchor, v), self.extent, self.cells)

    def normalized(self) -> "Pattern":
        return Pattern(zero(self.dim), self.extent, self.cells)

    def key(self) -> tuple[Vec, bytes]:
        """Anchor-free canonical form."""
        return (self.extent, self.cells)

    def subpattern(self, r: Rect) -> "Pattern":
        if not self.rect().contains_rect(r):
            raise ValidationError("subpattern rect outside pattern support")
        ext = r.extent()
        buf = bytearray(r.cell_count())
        out = Pattern(r.lo, ext, bytes(buf))
        for k in r.cells():
            buf[out.index_of(k)] = self.get(k)
        return Pattern(r.lo, ext, bytes(buf))

    def subpattern_keys(self, shape: Vec) -> Iterator[bytes]:
        """Cell buffers of every `shape`-window inside this pattern."""
        if any(sh > e for sh, e in zip(shape, self.extent)):
            return
        offs = [range(e - sh + 1) for sh, e in zip(shape, self.extent)]
        rel_idx = [
            sum(c * st for c, st in zip(k, self._strides))
            for k in Rect.box(shape).cells()
        ]
        cells = self.cells
        for rev in itertools.product(*reversed(offs)):
            base = sum(c * st for c, st in zip(reversed(rev), self._strides))
            yield bytes(cells[base + ri] for ri in rel_idx)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Pattern)
            and self.anchor == other.anchor
            and self.extent == other.extent
            and self.cells == other.cells
        )

    def __hash__(self) -> int:
        return hash((self.anchor, self.extent, self.cells))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Pattern(anchor={self.anchor}, extent={self.extent})"


def complement_pattern(p: Pattern) -> Pattern:
    """Swap the two symbols of a binary pattern."""
    if any(c > 1 for c in p.cells):
        raise ScopeError("complement_pattern requires a binary pattern")
    return Pattern(p.anchor, p.extent, bytes(1 - c for c in p.cells))


@dataclass(frozen=True)
class RectSubstitution:
    """Alphabet + size vector + one patch with support [0, s-1] per symbol."""

    alphabet: Alphabet
    size: Vec
    rules: tuple[Pattern, ...]

    def __post_init__(self) -> None:
        if any(s < 2 for s in self.size):
            raise ValidationError("all size components must be > 1")
        if len(self.rules) != len(self.alphabet):
            raise ValidationError("one rule per symbol required")
        for r in self.rules:
            if r.anchor != zero(self.dim) or r.extent != self.size:
                raise ValidationError("every rule must have anchor 0 and extent s")
            if any(c >= len(self.alphabet) for c in r.cells):
                raise ValidationError("rule cell outside alphabet")

    @property
    def dim(self) -> int:
        return len(self.size)

    def support(self) -> Rect:
        return Rect.box(self.size)

    def rule(self, symbol: int) -> Pattern:
        return self.rules[symbol]

    def __hash__(self) -> int:
        return hash((self.alphabet.names, self.size, tuple(r.cells for r in self.rules)))


def apply(theta: RectSubstitution, p: Pattern) -> Pattern:
    """Cellwise image: output cell at m*s + k is theta(p_m)_k."""
    s = theta.size
    anchor = vmul(p.anchor, s)
    extent = vmul(p.extent, s)
    n_cells = math.prod(extent)
    if n_cells > DEFAULT_CELL_CAP:
        raise CapExceeded(f"apply would materialize {n_cells} cells")
    buf = bytearray(n_cells)
    out = Pattern(anchor, extent, bytes(n_cells))
    box = Rect.box(s)
    for m in p.rect().cells():
        patch = theta.rule(p.get(m))
        corner = vmul(m, s)
        base = out.index_of(corner)
        for k in box.cells():
            buf[base + sum(x * st for x, st in zip(k, out._strides))] = patch.cells[
                patch.index_of(k)
            ]
    return Pattern(anchor, extent, bytes(buf))


def power(theta: RectSubstitution, m: int, cell_cap: int = DEFAULT_CELL_CAP) -> RectSubstitution:
    """theta^m with rules materialized eagerly."""
    if m < 1:
        raise ValidationError("power requires m >= 1")
    per_rule = math.prod(x**m for x in theta.size)
    if per_rule * len(theta.alphabet) > cell_cap:
        raise CapExceeded(f"theta^{m} needs {per_rule} cells per rule")
    if m == 1:
        return theta
    rules = []
    for a in range(len(theta.alphabet)):
        patch = theta.rule(a)
        for _ in range(m - 1):
            patch = apply(theta, patch)
        rules.append(patch)
    return RectSubstitution(theta.alphabet, spow(theta.size, m), tuple(rules))


@dataclass(frozen=True)
class PrimitivityReport:
    primitive: bool
    witness_power: int | None
    missing: tuple[tuple[int, int], ...]  # (a, b): b never reached from a


def is_primitive(theta: RectSubstitution) -> PrimitivityReport:
    """Occurrence-matrix test: some theta^k(a) contains every symbol.

    k is searched up to |A|^2, the standard primitivity bound.
    """
    n = len(theta.alphabet)
    occ = [[False] * n for _ in range(n)]
    for a in range(n):
        for c in set(theta.rule(a).cells):
            occ[a][c] = True
    reach = [row[:] for row in occ]
    for k in range(1, n * n + 1):
        if all(all(row) for row in reach):
            return PrimitivityReport(True, k, ())
        reach = [
            [any(reach[a][c] and occ[c][b] for c in range(n)) for b in range(n)]
            for a in range(n)
        ]
    missing = tuple(
        (a, b) for a in range(n) for b in range(n) if not reach[a][b]
    )
    return PrimitivityReport(False, None, missing)


def position_map(theta: RectSubstitution, k: Vec) -> tuple[int, ...]:
    """The map a -> theta(a)_k as a table."""
    if not theta.support().contains(k):
        raise ValidationError(f"position {k} outside substitution support")
    return tuple(theta.rule(a).get(k) for a in range(len(theta.alphabet)))


def is_bijective(theta: RectSubstitution) -> bool:
    n = len(theta.alphabet)
    return all(
        len(set(position_map(theta, k))) == n for k in theta.support().cells()
    )


def corners(size: Vec) -> list[Vec]:
    """The 2^d corners of [0, s-1]."""
    return [
        tuple(0 if pick == 0 else s - 1 for pick, s in zip(choice, size))
        for choice in itertools.product((0, 1), repeat=len(size))
    ]


def _perm_order(table: Sequence[int]) -> int:
    order = 1
    seen = [False] * len(table)
    for i in range(len(table)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = table[j]
            length += 1
        order = math.lcm(order, length)
    return order


def corner_fixing_power(theta: RectSubstitution) -> int:
    """Least m with every corner map of theta^m equal to the identity.

    This is the lcm of the 2^d corner-permutation orders; it only exists
    for bijective substitutions.
    """
    if not is_bijective(theta):
        raise ScopeError("corner_fixing_power requires a bijective substitution")
    return math.lcm(
        *(_perm_order(position_map(theta, c)) for c in corners(theta.size))
    )


def corner_fixed(theta: RectSubstitution) -> tuple[RectSubstitution, int]:
    """Replace theta by the power whose corner maps are all identity."""
    m = corner_fixing_power(theta)
    return power(theta, m), m


# ---------------------------------------------------------------------------
# Seeds
# ---------------------------------------------------------------------------


def corner_order(d: int) -> tuple[Vec, ...]:
    """Canonical enumeration of the seed support {-1, 0}^d."""
    return tuple(itertools.product((-1, 0), repeat=d))


@dataclass(frozen=True, slots=True)
class Seed:
    """Pattern on {-1, 0}^d, stored in the canonical corner order."""

    dim: int
    symbols: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.symbols) != 1 << self.dim:
            raise ValidationError("a seed needs exactly 2^d entries")

    @classmethod
    def constant(cls, d: int, symbol: int) -> "Seed":
        return cls(d, (symbol,) * (1 << d))

    def corner(self, u: Vec) -> int:
        return self.symbols[corner_order(self.dim).index(u)]

    def with_corner(self, u: Vec, symbol: int) -> "Seed":
        i = corner_order(self.dim).index(u)
        syms = list(self.symbols)
        syms[i] = symbol
        return Seed(self.dim, tuple(syms))

    def pattern(self) -> Pattern:
        """As a 2x...x2 pattern anchored at (-1, ..., -1)."""
        ext = (2,) * self.dim
        buf = bytearray(1 << self.dim)
        p = Pattern((-1,) * self.dim, ext, bytes(buf))
        for u, sym in zip(corner_order(self.dim), self.symbols):
            buf[p.index_of(u)] = sym
        return Pattern((-1,) * self.dim, ext, bytes(buf))


def _expansion_corner(u: Vec, size: Vec) -> Vec:
    """Position inside theta(seed corner u) that stays on that corner."""
    return tuple(0 if ui == 0 else s - 1 for ui, s in zip(u, size))


def seed_step(theta: RectSubstitution, seed: Seed) -> Seed:
    """One inflation step of the seed dynamics."""
    syms = tuple(
        theta.rule(seed.corner(u)).get(_expansion_corner(u, theta.size))
        for u in corner_order(theta.dim)
    )
    return Seed(theta.dim, syms)


def all_seeds(theta: RectSubstitution) -> Iterator[Seed]:
    n = len(theta.alphabet)
    for syms in itertools.product(range(n), repeat=1 << theta.dim):
        yield Seed(theta.dim, syms)


@dataclass(frozen=True)
class SeedCycles:
    """Cycle structure of the seed dynamics."""

    cycles: tuple[tuple[Seed, ...], ...]  # each cycle in traversal order

    @property
    def fixed(self) -> tuple[Seed, ...]:
        return tuple(c[0] for c in self.cycles if len(c) == 1)

    @property
    def on_cycles(self) -> tuple[Seed, ...]:
        return tuple(s for c in self.cycles for s in c)

    def period_of(self, seed: Seed) -> int | None:
        for c in self.cycles:
            if seed in c:
                return len(c)
        return None


def fixed_seeds(theta: RectSubstitution) -> SeedCycles:
    """All cycles of seed_step; a seed on a cycle of length L is theta^L-fixed."""
    step: dict[Seed, Seed] = {s: seed_step(theta, s) for s in all_seeds(theta)}
    cycles: list[tuple[Seed, ...]] = []
    seen: set[Seed] = set()
    for start in step:
        if start in seen:
            continue
        trail = []
        trail_set = set()
        node = start
        while node not in trail_set and node not in seen:
            trail.append(node)
            trail_set.add(node)
            node = step[node]
        if node in trail_set:
            i = trail.index(node)
            cycles.append(tuple(trail[i:]))
        seen.update(trail)
    return SeedCycles(tuple(cycles))
