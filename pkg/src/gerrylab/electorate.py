"""Voter point sets and the uniform lattice electorate family.

Coordinates are exact rationals so that cell membership never depends on
floating-point rounding: the unit square is split into half-open cells
[c/g, (c+1)/g) x [r/g, (r+1)/g), with the top and right edges of the square
closed, and every point lands in exactly one cell for every resolution g.

A lattice electorate places the same local pattern in every eps-square of
side 1/n: the square holds an l x l block of lattice points (the lattice is
offset by half a step, so points never sit on eps-square boundaries), the
first ``a`` slots in bottom-left row-major order belong to party A and the
remaining ``b`` to party B.  Such electorates are kept as parameters, not
point lists, so cell tallies can be computed exactly at any scale without
materializing the points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ElectorateError, UnknownDistrictError
from .grid import CellPartition

__all__ = [
    "LatticeParams",
    "Electorate",
    "Rect",
    "generate_lattice_electorate",
    "count_in_district",
    "repaint_region",
    "party_cell_counts",
    "save_electorate",
    "load_electorate",
]

# Refuse to expand lattice electorates beyond this many points; all metric
# paths work from per-cell tallies and never need the expansion.
MATERIALIZE_LIMIT = 2_000_000

Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class LatticeParams:
    """Parameters of a uniform lattice electorate.

    n: eps-squares per side (eps = 1/n); l: lattice points per square side;
    a, b: party A / party B voters per square, with a + b = l*l.
    """

    n: int
    l: int
    a: int
    b: int
    pattern: str = "row_major"

    def __post_init__(self) -> None:
        if self.n < 1 or self.l < 1:
            raise ElectorateError(f"n and l must be positive, got n={self.n}, l={self.l}")
        if self.a < 0 or self.b < 0:
            raise ElectorateError(f"a and b must be nonnegative, got a={self.a}, b={self.b}")
        if self.a + self.b != self.l * self.l:
            raise ElectorateError(
                f"a+b must equal l^2: a={self.a}, b={self.b}, l^2={self.l * self.l}"
            )
        if self.pattern != "row_major":
            raise ElectorateError(f"unknown lattice pattern {self.pattern!r}")

    @property
    def total_a(self) -> int:
        return self.a * self.n * self.n

    @property
    def total_b(self) -> int:
        return self.b * self.n * self.n


def _coerce_coord(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)  # exact binary value; callers wanting decimals pass strings
    raise ElectorateError(f"cannot interpret coordinate {value!r}")


def _check_point(p: Point) -> Point:
    x, y = p
    if not (0 <= x <= 1 and 0 <= y <= 1):
        raise ElectorateError(f"point ({x}, {y}) outside the unit square")
    return p


class Electorate:
    """Disjoint party point sets A and B in the unit square.

    Holds either explicit point lists or lattice provenance.  Lattice-backed
    electorates compute tallies directly from their parameters; their point
    lists are materialized lazily and only below ``MATERIALIZE_LIMIT``.
    """

    __slots__ = ("_a_points", "_b_points", "lattice", "_hist_cache")

    def __init__(self, a_points=None, b_points=None, lattice: LatticeParams | None = None):
        self.lattice = lattice
        self._hist_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        if lattice is not None:
            if a_points is not None or b_points is not None:
                raise ElectorateError("pass either explicit points or lattice params, not both")
            self._a_points = None
            self._b_points = None
            return
        a_pts = tuple(_check_point((_coerce_coord(x), _coerce_coord(y))) for x, y in (a_points or ()))
        b_pts = tuple(_check_point((_coerce_coord(x), _coerce_coord(y))) for x, y in (b_points or ()))
        overlap = set(a_pts) & set(b_pts)
        if overlap:
            x, y = next(iter(overlap))
            raise ElectorateError(f"point ({x}, {y}) appears in both A and B")
        self._a_points = a_pts
        self._b_points = b_pts

    # -- point access -----------------------------------------------------

    def _materialize(self) -> None:
        lat = self.lattice
        total = lat.total_a + lat.total_b
        if total > MATERIALIZE_LIMIT:
            raise ElectorateError(
                f"lattice electorate with {total} points is too large to expand; "
                "use the tally operations, which work from parameters"
            )
        m = lat.n * lat.l
        den = 2 * m
        a_pts, b_pts = [], []
        for j in range(m):
            y = Fraction(2 * j + 1, den)
            v = j % lat.l
            for i in range(m):
                x = Fraction(2 * i + 1, den)
                u = i % lat.l
                (a_pts if v * lat.l + u < lat.a else b_pts).append((x, y))
        self._a_points = tuple(a_pts)
        self._b_points = tuple(b_pts)

    @property
    def a_points(self) -> tuple[Point, ...]:
        if self._a_points is None:
            self._materialize()
        return self._a_points

    @property
    def b_points(self) -> tuple[Point, ...]:
        if self._b_points is None:
            self._materialize()
        return self._b_points

    @property
    def a_count(self) -> int:
        if self.lattice is not None:
            return self.lattice.total_a
        return len(self._a_points)

    @property
    def b_count(self) -> int:
        if self.lattice is not None:
            return self.lattice.total_b
        return len(self._b_points)

    @property
    def total(self) -> int:
        return self.a_count + self.b_count

    def __eq__(self, other) -> bool:
        if not isinstance(other, Electorate):
            return NotImplemented
        if self.lattice is not None and self.lattice == other.lattice:
            return True
        return (
            frozenset(self.a_points) == frozenset(other.a_points)
            and frozenset(self.b_points) == frozenset(other.b_points)
        )

    def __repr__(self) -> str:
        if self.lattice is not None:
            lat = self.lattice
            return f"Electorate(lattice n={lat.n} l={lat.l} a={lat.a} b={lat.b})"
        return f"Electorate({self.a_count} A points, {self.b_count} B points)"


def generate_lattice_electorate(params: LatticeParams) -> Electorate:
    """Electorate with ``a`` A-voters and ``b`` B-voters in every eps-square.

    The point set is the half-offset lattice ((Z + 1/2)/(n*l))^2 clipped to
    the unit square; within each eps-square the l*l slots are ordered
    row-major from the bottom-left and the first ``a`` belong to A.
    """
    return Electorate(lattice=params)


# -- exact cell tallies ---------------------------------------------------


def _cell_of(x: Fraction, y: Fraction, g: int) -> int:
    # half-open cells, top/right edges of the square closed
    col = min((x.numerator * g) // x.denominator, g - 1)
    row = min((y.numerator * g) // y.denominator, g - 1)
    return row * g + col


def _lattice_axis_counts(m: int, l: int, g: int) -> np.ndarray:
    """counts[u, c] = #{i in [0, m) : i mod l == u and slot i falls in grid column c}."""
    i = np.arange(m, dtype=np.int64)
    col = ((2 * i + 1) * g) // (2 * m)
    counts = np.zeros((l, g), dtype=np.int64)
    np.add.at(counts, (i % l, col), 1)
    return counts


def _lattice_histograms(lat: LatticeParams, g: int) -> tuple[np.ndarray, np.ndarray]:
    # Separable: a slot's grid cell is (row(j), col(i)) and its party depends
    # only on (j mod l, i mod l), so per-cell tallies factor into two axis
    # counts joined through the l x l party pattern.  O(n*l + g^2*l) exact
    # integer work at any n.
    l = lat.l
    axis = _lattice_axis_counts(lat.n * l, l, g)  # same for both axes
    idx = np.arange(l * l, dtype=np.int64).reshape(l, l)  # [v, u] = v*l + u
    pattern_a = (idx < lat.a).astype(np.int64)
    hist_a = axis.T @ pattern_a @ axis  # [r, c]
    hist_b = axis.T @ (1 - pattern_a) @ axis
    return hist_a.reshape(-1), hist_b.reshape(-1)


def _explicit_histogram(points: tuple[Point, ...], g: int) -> np.ndarray:
    hist = np.zeros(g * g, dtype=np.int64)
    for x, y in points:
        hist[_cell_of(x, y, g)] += 1
    return hist


def party_cell_counts(e: Electorate, g: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-cell (A, B) voter tallies on the g x g grid, exact, cached per g.

    Arrays are int64 of length g*g, indexed like CellPartition assignments
    (row-major, bottom row first).  Do not mutate the returned arrays.
    """
    if g < 1:
        raise ElectorateError(f"grid resolution must be >= 1, got {g}")
    cached = e._hist_cache.get(g)
    if cached is not None:
        return cached
    if e.lattice is not None:
        hists = _lattice_histograms(e.lattice, g)
    else:
        hists = (_explicit_histogram(e.a_points, g), _explicit_histogram(e.b_points, g))
    e._hist_cache[g] = hists
    return hists


def count_in_district(e: Electorate, p: CellPartition, district: int) -> tuple[int, int]:
    """(A, B) voter counts in the cells assigned to ``district``."""
    if not 1 <= district <= p.k:
        raise UnknownDistrictError(f"district id {district} outside 1..{p.k}")
    hist_a, hist_b = party_cell_counts(e, p.g)
    mask = np.asarray(p.assignment, dtype=np.int64) == district
    return int(hist_a[mask].sum()), int(hist_b[mask].sum())


# -- repainting -----------------------------------------------------------


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle [x0, x1) x [y0, y1) within the unit square.

    Membership is half-open like cell membership; an edge lying on the top or
    right edge of the unit square is closed so the whole-square rectangle
    covers every voter.
    """

    x0: Fraction
    x1: Fraction
    y0: Fraction
    y1: Fraction

    @classmethod
    def of(cls, x0, y0, x1, y1) -> "Rect":
        return cls(_coerce_coord(x0), _coerce_coord(x1), _coerce_coord(y0), _coerce_coord(y1))

    def __post_init__(self) -> None:
        if not (0 <= self.x0 and self.x1 <= 1 and 0 <= self.y0 and self.y1 <= 1):
            raise ElectorateError("rectangle must lie within the unit square")
        if self.x0 >= self.x1 or self.y0 >= self.y1:
            raise ElectorateError("rectangle must have positive width and height")

    def contains(self, x: Fraction, y: Fraction) -> bool:
        in_x = self.x0 <= x < self.x1 or (self.x1 == 1 and x == 1)
        in_y = self.y0 <= y < self.y1 or (self.y1 == 1 and y == 1)
        return in_x and in_y


def repaint_region(e: Electorate, rect: Rect) -> Electorate:
    """Electorate with every B voter inside ``rect`` recolored to A.

    A voters are untouched and the union of points is preserved, so the
    operation is idempotent.  Lattice provenance cannot survive a repaint;
    the result is an explicit electorate.
    """
    moved = [p for p in e.b_points if rect.contains(*p)]
    if not moved:
        return e
    staying = [p for p in e.b_points if not rect.contains(*p)]
    return Electorate(a_points=list(e.a_points) + moved, b_points=staying)


# -- file format ----------------------------------------------------------

_HEADER = "gerrylab-electorate v1"


def save_electorate(e: Electorate, path) -> None:
    """Write an electorate file: lattice provenance when present, else points."""
    lines = [_HEADER]
    if e.lattice is not None:
        lat = e.lattice
        lines.append("lattice")
        lines.append(f"n {lat.n}")
        lines.append(f"l {lat.l}")
        lines.append(f"a {lat.a}")
        lines.append(f"b {lat.b}")
        lines.append(f"pattern {lat.pattern}")
    else:
        lines.append("points")
        for x, y in e.a_points:
            lines.append(f"A {x} {y}")
        for x, y in e.b_points:
            lines.append(f"B {x} {y}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_electorate(path) -> Electorate:
    """Read an electorate file; regenerates from lattice provenance when present.

    Raises ElectorateError on out-of-range coordinates, A/B overlap, or
    inconsistent lattice parameters, and on malformed files.
    """
    with open(path, "r", encoding="utf-8") as fh:
        raw = [ln.strip() for ln in fh]
    lines = [ln for ln in raw if ln and not ln.startswith("#")]
    if not lines or lines[0] != _HEADER:
        raise ElectorateError(f"{path}: not a gerrylab electorate file")
    if len(lines) < 2:
        raise ElectorateError(f"{path}: missing section line")
    kind, body = lines[1], lines[2:]
    if kind == "lattice":
        fields = {}
        for ln in body:
            parts = ln.split()
            if len(parts) != 2:
                raise ElectorateError(f"{path}: bad lattice line {ln!r}")
            fields[parts[0]] = parts[1]
        try:
            params = LatticeParams(
                n=int(fields["n"]),
                l=int(fields["l"]),
                a=int(fields["a"]),
                b=int(fields["b"]),
                pattern=fields.get("pattern", "row_major"),
            )
        except KeyError as exc:
            raise ElectorateError(f"{path}: missing lattice field {exc}") from exc
        e = generate_lattice_electorate(params)
        # count verification via the tally path (works at any scale)
        hist_a, hist_b = party_cell_counts(e, 1)
        if int(hist_a[0]) != params.total_a or int(hist_b[0]) != params.total_b:
            raise ElectorateError(f"{path}: lattice point counts do not match parameters")
        return e
    if kind == "points":
        a_pts, b_pts = [], []
        for ln in body:
            parts = ln.split()
            if len(parts) != 3 or parts[0] not in ("A", "B"):
                raise ElectorateError(f"{path}: bad point line {ln!r}")
            try:
                x, y = Fraction(parts[1]), Fraction(parts[2])
            except (ValueError, ZeroDivisionError) as exc:
                raise ElectorateError(f"{path}: bad coordinate in {ln!r}") from exc
            (a_pts if parts[0] == "A" else b_pts).append((x, y))
        return Electorate(a_points=a_pts, b_points=b_pts)
    raise ElectorateError(f"{path}: unknown section {kind!r}")
