"""Substitution spec files: parsing, validation, canonical serialization.

Format: a single JSON object with keys `name` (string), `dim` (int),
`size` (array of dim ints), `alphabet` (array of strings), `rules`
(object symbol -> nested arrays, outermost index = coordinate dim,
innermost = coordinate 1, index 0 = lowest coordinate).  Unknown keys
are rejected; every diagnostic carries the offending path.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass
from importlib import resources

from .errors import ValidationError
from .substitution import Alphabet, Pattern, RectSubstitution

_REQUIRED_KEYS = {"name", "dim", "size", "alphabet", "rules"}


@dataclass(frozen=True)
class SubstitutionSpec:
    name: str
    dim: int
    size: tuple[int, ...]
    alphabet: tuple[str, ...]
    rules: dict[str, object]  # nested lists as parsed

    def to_obj(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "size": list(self.size),
            "alphabet": list(self.alphabet),
            "rules": self.rules,
        }


def _fail(path: str, msg: str) -> ValidationError:
    return ValidationError(f"{path}: {msg}")


def parse_spec(text: str) -> SubstitutionSpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _fail("$", f"not valid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(obj, dict):
        raise _fail("$", "top level must be an object")
    unknown = set(obj) - _REQUIRED_KEYS
    if unknown:
        raise _fail("$", f"unknown keys {sorted(unknown)}")
    missing = _REQUIRED_KEYS - set(obj)
    if missing:
        raise _fail("$", f"missing keys {sorted(missing)}")
    if not isinstance(obj["name"], str):
        raise _fail("$.name", "must be a string")
    dim = obj["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise _fail("$.dim", "must be a positive integer")
    size = obj["size"]
    if (
        not isinstance(size, list)
        or len(size) != dim
        or any(not isinstance(s, int) for s in size)
    ):
        raise _fail("$.size", f"must be an array of {dim} integers")
    if any(s < 2 for s in size):
        raise _fail("$.size", "every component must be >= 2")
    alphabet = obj["alphabet"]
    if not isinstance(alphabet, list) or any(not isinstance(a, str) for a in alphabet):
        raise _fail("$.alphabet", "must be an array of strings")
    rules = obj["rules"]
    if not isinstance(rules, dict):
        raise _fail("$.rules", "must be an object")
    if set(rules) != set(alphabet):
        raise _fail("$.rules", "must have exactly one entry per alphabet symbol")
    spec = SubstitutionSpec(
        obj["name"], dim, tuple(size), tuple(alphabet), rules
    )
    build_substitution(spec)  # validation happens during the build
    return spec


def _flatten_rule(node, size, alphabet_idx, path: str, depth: int, out: list) -> None:
    """Walk nested arrays, outermost axis = coordinate dim."""
    axis = len(size) - 1 - depth
    if depth == len(size):
        if not isinstance(node, str):
            raise _fail(path, "rule cell must be a symbol string")
        if node not in alphabet_idx:
            raise _fail(path, f"unknown symbol {node!r}")
        out.append(alphabet_idx[node])
        return
    if not isinstance(node, list) or len(node) != size[axis]:
        raise _fail(path, f"expected an array of length {size[axis]} (coordinate {axis + 1})")
    for i, sub in enumerate(node):
        _flatten_rule(sub, size, alphabet_idx, f"{path}[{i}]", depth + 1, out)


def build_substitution(spec: SubstitutionSpec) -> RectSubstitution:
    alphabet = Alphabet(spec.alphabet)
    idx = {name: i for i, name in enumerate(spec.alphabet)}
    rules = []
    zero = (0,) * spec.dim
    for name in spec.alphabet:
        flat: list[int] = []
        _flatten_rule(spec.rules[name], spec.size, idx, f"$.rules.{name}", 0, flat)
        # flat is ordered with coordinate dim outermost, i.e. coordinate 1 fastest
        rules.append(Pattern(zero, spec.size, bytes(flat)))
    return RectSubstitution(alphabet, spec.size, tuple(rules))


def canonical_text(spec: SubstitutionSpec) -> str:
    """Byte-stable serialization: sorted keys, two-space indent, newline."""
    return json.dumps(spec.to_obj(), sort_keys=True, indent=2) + "\n"


def spec_digest(spec: SubstitutionSpec) -> str:
    return hashlib.sha256(canonical_text(spec).encode()).hexdigest()[:16]


def load_spec_file(path: str) -> SubstitutionSpec:
    with open(path, "r", encoding="utf-8") as f:
        return parse_spec(f.read())


BUNDLED = ("tm1d", "tm2d", "tm3d", "cyc3", "rig3", "dbl")


def load_bundled(name: str) -> SubstitutionSpec:
    if name not in BUNDLED:
        raise ValidationError(f"no bundled spec named {name!r}; have {BUNDLED}")
    text = resources.files("subsym.data").joinpath(f"specs/{name}.json").read_text()
    return parse_spec(text)


def bundled_substitution(name: str) -> RectSubstitution:
    return build_substitution(load_bundled(name))


# ---------------------------------------------------------------------------
# Language dump format: one `extent:hex-bytes` line per pattern, sorted.
# ---------------------------------------------------------------------------


def dump_language(shape: tuple[int, ...], patterns) -> str:
    ext = ",".join(str(s) for s in shape)
    lines = sorted(f"{ext}:{cells.hex()}" for cells in patterns)
    return "\n".join(lines) + "\n" if lines else ""


def parse_language_dump(text: str) -> tuple[tuple[int, ...], frozenset[bytes]]:
    shape: tuple[int, ...] | None = None
    cells = set()
    for i, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            ext, hx = line.split(":")
            this_shape = tuple(int(v) for v in ext.split(","))
            buf = bytes.fromhex(hx)
        except ValueError:
            raise ValidationError(f"line {i}: bad language dump entry") from None
        if shape is None:
            shape = this_shape
        elif shape != this_shape:
            raise ValidationError(f"line {i}: mixed shapes in language dump")
        if len(buf) != math.prod(this_shape):
            raise ValidationError(f"line {i}: cell count does not match extent")
        cells.add(buf)
    if shape is None:
        raise ValidationError("empty language dump")
    return shape, frozenset(cells)


# ---------------------------------------------------------------------------
# Text rendering of substitution patterns
# ---------------------------------------------------------------------------

_GLYPHS = (
    "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    "!#$%&()*+,-./:;<=>?@[]^_`{|}~"
)


def glyph_for(symbol: int) -> str:
    return _GLYPHS[symbol] if symbol < len(_GLYPHS) else "?"


def render_pattern_text(p: Pattern) -> str:
    """One char per cell; rows printed top to bottom, 3d+ slices separated
    by blank lines (last coordinate outermost)."""
    r = p.rect()
    if p.dim == 1:
        return "".join(glyph_for(p.get((x,))) for x in range(r.lo[0], r.hi[0] + 1)) + "\n"
    lines = []
    outer_axes = list(range(2, p.dim))
    outer_ranges = [range(r.lo[a], r.hi[a] + 1) for a in reversed(outer_axes)]
    first_block = True
    for outer in itertools.product(*outer_ranges) if outer_axes else [()]:
        if not first_block:
            lines.append("")
        first_block = False
        if outer_axes:
            coords = ",".join(str(v) for v in reversed(outer))
            lines.append(f"[slice {coords}]")
        for y in range(r.hi[1], r.lo[1] - 1, -1):
            row = []
            for x in range(r.lo[0], r.hi[0] + 1):
                k = (x, y) + tuple(reversed(outer))
                row.append(glyph_for(p.get(k)))
            lines.append("".join(row))
    return "\n".join(lines) + "\n"


def render_pattern_ppm(p: Pattern, scale: int = 8) -> bytes:
    """P6 image of a 2d pattern using the shared palette."""
    if p.dim != 2:
        raise ValidationError("ppm rendering requires a 2d pattern")
    from .robinson import _load_palette

    palette = _load_palette()
    r = p.rect()
    ext = r.extent()
    w, h = ext[0] * scale, ext[1] * scale
    rows = []
    for y in range(r.hi[1], r.lo[1] - 1, -1):
        row = bytearray()
        for x in range(r.lo[0], r.hi[0] + 1):
            row += bytes(palette[p.get((x, y))]) * scale
        rows.extend([bytes(row)] * scale)
    return b"P6\n%d %d\n255\n" % (w, h) + b"".join(rows)
