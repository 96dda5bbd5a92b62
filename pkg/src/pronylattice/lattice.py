"""Arithmetic-progression geometry of Gamma pole lattices.

A factor ``Gamma(a s + b)`` has poles at ``-(b + k)/a`` for ``k >= 0``: a
one-sided progression with spacing ``1/|a|``, descending when ``a > 0`` and
ascending when ``a < 0``.  Questions about how such progressions meet the
integers or each other are linear Diophantine problems.  With rational
parameters they are answered exactly; irrational scales are searched
numerically and the answer is flagged as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import _kernels
from .errors import IncommensurateInput
from .exact import Irrational, Scalar, as_fraction, number_to_json, to_float

IRRATIONAL_SEARCH = 10**6
IRRATIONAL_TOL = 1e-9
LOG_KERNEL_WARNING = (
    "coincident simple poles form a double pole; the modulus acquires a "
    "logarithmic relaxation kernel t^(-s0) ln t"
)


@dataclass(frozen=True)
class Progression:
    """Pole lattice ``{-(shift + k)/scale : k = 0, 1, 2, ...}``.

    ``scale`` may be negative (e.g. ``Gamma(1 - s)``); the progression then
    ascends.  Exact when both parameters are fractions.
    """

    scale: Scalar
    shift: Scalar = Fraction(0)

    def __post_init__(self):
        if to_float(self.scale) == 0:
            raise ValueError("progression scale must be non-zero")

    @property
    def exact(self) -> bool:
        return isinstance(self.scale, Fraction) and isinstance(self.shift, Fraction)

    @property
    def direction(self) -> int:
        """-1 for a descending progression, +1 for an ascending one."""
        return -1 if to_float(self.scale) > 0 else 1

    @property
    def spacing(self) -> Scalar:
        if isinstance(self.scale, Fraction):
            return 1 / abs(self.scale)
        if isinstance(self.scale, Irrational):
            return self.scale.reciprocal() if self.scale.value > 0 else (-self.scale).reciprocal()
        return 1.0 / abs(self.scale)

    def member(self, k: int) -> Scalar:
        if self.exact:
            return -(self.shift + k) / self.scale
        return -(to_float(self.shift) + k) / to_float(self.scale)

    def index_of(self, s) -> Optional[int]:
        """Index ``k`` with ``member(k) == s`` exactly, or ``None``."""
        if not self.exact:
            raise TypeError("index_of needs an exact progression")
        k = -self.scale * Fraction(s) - self.shift
        if k.denominator == 1 and k >= 0:
            return int(k)
        return None

    def members(self, count: int) -> List[Scalar]:
        return [self.member(k) for k in range(count)]

    def to_json(self):
        return {"scale": number_to_json(self.scale), "shift": number_to_json(self.shift)}


@dataclass(frozen=True)
class IntersectionResult:
    """Where a lattice meets the integers or another lattice.

    Intersection points are indexed by a parameter ``t >= 0``.  For a meet
    with the integers the lattice indices are ``k0 + t * index_step``; for a
    meet of two lattices the index pairs are ``(k0, k0') + t * (p, q)``, as
    stored in ``parameterization``.  ``count`` is ``None`` for an infinite
    sub-progression.  ``certified`` is ``"exact"`` or ``"numerical"``.
    """

    kind: str
    points: Tuple[Scalar, ...] = ()
    step_in_s: Optional[Fraction] = None
    parameterization: Optional[Tuple[int, ...]] = None
    count: Optional[int] = 0
    start: Optional[Scalar] = None
    direction: int = -1
    certified: str = "exact"

    @property
    def empty(self) -> bool:
        return self.kind == "Empty"

    def point(self, t: int) -> Scalar:
        if self.step_in_s is None:
            return self.points[t]
        return self.start + self.direction * self.step_in_s * t

    def points_in_window(self, lo, hi) -> List[Scalar]:
        """All intersection points with ``lo <= s <= hi``."""
        if self.empty:
            return []
        if self.step_in_s is None:
            return [p for p in self.points if lo <= to_float(p) <= hi]
        out = []
        t = 0
        while self.count is None or t < self.count:
            s = self.point(t)
            if lo <= s <= hi:
                out.append(s)
            elif (self.direction < 0 and s < lo) or (self.direction > 0 and s > hi):
                break
            t += 1
        return out

    def to_json(self):
        out = {"kind": self.kind, "certified": self.certified}
        if self.step_in_s is not None:
            out["start"] = number_to_json(self.start)
            out["step"] = number_to_json(self.step_in_s)
            out["direction"] = self.direction
            out["count"] = self.count
        else:
            out["points"] = [number_to_json(p) for p in self.points]
        if self.parameterization is not None:
            out["parameterization"] = list(self.parameterization)
        return out


EMPTY = IntersectionResult("Empty")


def _ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    # returns (g, x, y) with a x + b y = g = gcd(a, b) >= 0
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def intersect_with_integers(lat: Progression) -> IntersectionResult:
    """Members of ``lat`` that are integers.

    With ``scale = p/q`` in lowest terms and ``shift = u/v``, member ``k`` is
    an integer iff ``v`` divides ``q`` and ``u + k v = 0 (mod p)``.  The hits
    therefore sit at indices ``k0 + |p| t`` and step by ``q`` in ``s``.  A
    rational scale against an irrational shift never hits.  An irrational
    scale admits at most one hit, which is located by a bounded scan over
    ``k <= 10**6`` at tolerance 1e-9 and flagged ``"numerical"``.
    """
    scale = as_fraction(lat.scale)
    shift = as_fraction(lat.shift)
    if scale is not None and shift is None:
        return IntersectionResult("Empty", certified="exact")
    if scale is None or shift is None:
        hits = _kernels.near_integer(
            -1.0 / to_float(lat.scale),
            -to_float(lat.shift) / to_float(lat.scale),
            IRRATIONAL_SEARCH,
            IRRATIONAL_TOL,
        )
        if hits.size == 0:
            return IntersectionResult("Empty", certified="numerical")
        k = int(hits[0])
        s = round(to_float(lat.member(k)))
        return IntersectionResult(
            "SinglePoint", points=(Fraction(s),), parameterization=(k,), count=1,
            certified="numerical",
        )
    p, q = scale.numerator, scale.denominator
    u, v = shift.numerator, shift.denominator
    if q % v:
        return EMPTY
    ap = abs(p)
    k0 = 0 if ap == 1 else (-u * pow(v, -1, ap)) % ap
    start = -(shift + k0) / scale
    return IntersectionResult(
        "SubProgression",
        points=tuple(start + lat.direction * q * t for t in range(3)),
        step_in_s=Fraction(q),
        parameterization=(k0, ap),
        count=None,
        start=start,
        direction=lat.direction,
    )


def contained_in_integers(lat: Progression) -> bool:
    """Whether every member of ``lat`` is an integer.

    True exactly when the integer hits start at index 0 and recur at every
    index, i.e. ``scale = +-1/q`` with ``q * shift`` integral.
    """
    res = intersect_with_integers(lat)
    return res.kind == "SubProgression" and res.parameterization == (0, 1)


def intersect_progressions(lat1: Progression, lat2: Progression) -> IntersectionResult:
    """Common points of two pole lattices.

    Solves ``a' k - a k' = a b' - a' b`` over ``k, k' >= 0``.  For a
    rational ratio ``a/a' = p/q`` the solutions are
    ``(k, k') = (k0, k0') + t (p, q)``; same-direction lattices give a
    one-sided progression, opposite directions a finite set.  Irrational
    data are scanned numerically (``k <= 10**6``).
    """
    a, b = as_fraction(lat1.scale), as_fraction(lat1.shift)
    a2, b2 = as_fraction(lat2.scale), as_fraction(lat2.shift)
    if None in (a, b, a2, b2):
        return _intersect_numeric(lat1, lat2)
    # integer form A k - B k' = C
    den = math.lcm(a.denominator, a2.denominator, (a * b2 - a2 * b).denominator)
    A = int(a2 * den)
    B = int(a * den)
    C = int((a * b2 - a2 * b) * den)
    g, x, y = _ext_gcd(A, -B)
    if C % g:
        return EMPTY
    kp, kp2 = x * (C // g), y * (C // g)
    # homogeneous direction (p, q): A p = B q
    p, q = B // g, A // g
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    # k = kp + p t >= 0 and k' = kp2 + q t >= 0
    t_lo, t_hi = -math.inf, math.inf
    for base, step in ((kp, p), (kp2, q)):
        if step > 0:
            t_lo = max(t_lo, _ceil_div(-base, step))
        elif step < 0:
            t_hi = min(t_hi, base // (-step))
        elif base < 0:
            return EMPTY
    if t_lo > t_hi:
        return EMPTY
    k0, k02 = kp + p * t_lo, kp2 + q * t_lo
    count = None if math.isinf(t_hi) else int(t_hi - t_lo) + 1
    start = -(b + k0) / a
    step = Fraction(p) / abs(a)
    direction = lat1.direction
    if count == 1:
        return IntersectionResult(
            "SinglePoint", points=(start,), parameterization=(k0, k02, p, q), count=1,
        )
    kind = "SubProgression" if count is None else "Finite"
    n_show = 3 if count is None else min(count, 3)
    return IntersectionResult(
        kind,
        points=tuple(start + direction * step * t for t in range(n_show)),
        step_in_s=step,
        parameterization=(k0, k02, p, q),
        count=count,
        start=start,
        direction=direction,
    )


def _intersect_numeric(lat1: Progression, lat2: Progression) -> IntersectionResult:
    a, b = to_float(lat1.scale), to_float(lat1.shift)
    a2, b2 = to_float(lat2.scale), to_float(lat2.shift)
    # k' = a'(b + k)/a - b' must be a non-negative integer
    hits = _kernels.near_integer(a2 / a, a2 * b / a - b2, IRRATIONAL_SEARCH, IRRATIONAL_TOL)
    pts = []
    for k in hits:
        k2 = a2 * (b + k) / a - b2
        if k2 > -IRRATIONAL_TOL:
            pts.append(lat1.member(int(k)))
    if not pts:
        return IntersectionResult("Empty", certified="numerical")
    kind = "SinglePoint" if len(pts) == 1 else "Finite"
    return IntersectionResult(
        kind, points=tuple(pts), count=len(pts), certified="numerical"
    )


@dataclass(frozen=True)
class AlignmentResult:
    satisfiable: bool
    witness: Optional[Tuple[int, ...]] = None
    certified: str = "exact"

    def to_json(self):
        out = {"satisfiable": self.satisfiable, "certified": self.certified}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        return out


def alignment_test(delta_G: Scalar, candidate_spacings: Sequence[Scalar]) -> AlignmentResult:
    """Non-negative integers ``n_i`` with ``sum n_i * spacing_i == delta_G``.

    Solved exactly as a bounded coin problem over the common denominator;
    the witness maximises the leading coefficients lexicographically.

    Raises
    ------
    IncommensurateInput
        If an irrational spacing is involved that does not equal
        ``delta_G`` exactly.
    """
    spacings = list(candidate_spacings)
    if to_float(delta_G) <= 0 or any(to_float(d) <= 0 for d in spacings):
        raise ValueError("spacings must be positive")
    for i, d in enumerate(spacings):
        if d == delta_G:
            return AlignmentResult(True, tuple(int(j == i) for j in range(len(spacings))))
    if any(isinstance(x, float) for x in [delta_G, *spacings]):
        return _alignment_numeric(to_float(delta_G), [to_float(d) for d in spacings])
    target = as_fraction(delta_G)
    exact = [as_fraction(d) for d in spacings]
    if any(e is None for e in exact):
        raise IncommensurateInput(
            "irrational candidate spacing is not an exact multiple of delta_G"
        )
    if target is None:
        # a non-negative rational combination is rational
        return AlignmentResult(False, None)
    den = math.lcm(target.denominator, *(e.denominator for e in exact))
    D = int(target * den)
    coins = [int(e * den) for e in exact]
    # suffix[i][v]: v reachable with coins i..end
    m = len(coins)
    suffix = [[False] * (D + 1) for _ in range(m + 1)]
    suffix[m][0] = True
    for i in range(m - 1, -1, -1):
        row, nxt, c = suffix[i], suffix[i + 1], coins[i]
        for v in range(D + 1):
            row[v] = nxt[v] or (v >= c and row[v - c])
    if not suffix[0][D]:
        return AlignmentResult(False, None)
    witness, rest = [], D
    for i, c in enumerate(coins):
        n = rest // c
        while not suffix[i + 1][rest - n * c]:
            n -= 1
        witness.append(n)
        rest -= n * c
    return AlignmentResult(True, tuple(witness))


def _alignment_numeric(target: float, spacings: Sequence[float], budget: int = 10**6) -> AlignmentResult:
    # depth-first over n_i <= target/spacing_i, largest coefficients first
    tol = IRRATIONAL_TOL * max(1.0, target)
    visited = 0

    def search(i, rest):
        nonlocal visited
        if i == len(spacings):
            return () if abs(rest) <= tol else None
        for n in range(int((rest + tol) // spacings[i]), -1, -1):
            visited += 1
            if visited > budget:
                return None
            found = search(i + 1, rest - n * spacings[i])
            if found is not None:
                return (n,) + found
        return None

    witness = search(0, target)
    return AlignmentResult(witness is not None, witness, certified="numerical")


def covers(lat: Progression, others: Sequence[Progression], integers: bool = True) -> bool:
    """Whether every member of ``lat`` lies in ``Z`` or one of ``others``.

    Each intersection hits ``lat`` on an arithmetic set of indices, so the
    union is eventually periodic; checking one period past the latest start
    decides coverage exactly.
    """
    index_sets = []
    if integers:
        res = intersect_with_integers(lat)
        if res.kind == "SubProgression" and res.certified == "exact":
            index_sets.append((res.parameterization[0], res.parameterization[1], None))
        elif not res.empty:
            return False
    for other in others:
        res = intersect_progressions(lat, other)
        if res.empty:
            continue
        if res.certified != "exact":
            return False
        k0, _, p, _ = res.parameterization
        index_sets.append((k0, p, res.count))
    infinite = [step for _, step, count in index_sets if count is None]
    if not infinite:
        return False
    period = math.lcm(*infinite)
    horizon = period + max(
        k0 + (0 if count is None else step * count) for k0, step, count in index_sets
    )
    for k in range(horizon + 1):
        if not any(
            k >= k0 and (k - k0) % step == 0 and (count is None or (k - k0) // step < count)
            for k0, step, count in index_sets
        ):
            return False
    return True


@dataclass(frozen=True)
class CoincidenceReport:
    location: Scalar
    partner: str
    order_index: int
    forced: bool
    warning: str = LOG_KERNEL_WARNING

    def to_json(self):
        return {
            "location": number_to_json(self.location),
            "partner": self.partner,
            "order_index": self.order_index,
            "forced": self.forced,
            "warning": self.warning,
        }


def detect_coincidences(
    lat_G: Progression,
    candidate_lattices: Sequence[Progression] = (),
    window: Tuple[float, float] = (-50.0, 50.0),
) -> List[CoincidenceReport]:
    """Every point of ``lat_G`` in ``window`` shared with ``Z`` or a candidate.

    Each point is a potential double pole and carries the logarithmic-kernel
    warning.  ``forced`` is set when the whole lattice sits inside the
    integers, so the kernel poles meet it by construction.
    """
    lo, hi = window
    forced = contained_in_integers(lat_G)
    out: List[CoincidenceReport] = []
    partners = [("integers", intersect_with_integers(lat_G))]
    for i, cand in enumerate(candidate_lattices):
        partners.append((f"candidate[{i}]", intersect_progressions(lat_G, cand)))
    for name, res in partners:
        for s in res.points_in_window(lo, hi):
            k = lat_G.index_of(s) if lat_G.exact else _numeric_index(lat_G, s)
            out.append(CoincidenceReport(s, name, k, forced))
    out.sort(key=lambda r: (-to_float(r.location), r.partner))
    return out


def _numeric_index(lat: Progression, s) -> int:
    return int(round(-to_float(lat.scale) * to_float(s) - to_float(lat.shift)))
