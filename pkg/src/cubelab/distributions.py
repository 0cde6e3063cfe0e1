"""Smooth distributions on the hypercube with exact mass arithmetic.

Three kinds are supported: uniform, product (independent coordinate means),
and an explicit probability table over all 2^n vertices.  All of them are
full-support by construction except tables produced by ``condition``, which
may carry zeros outside the conditioning event.

The smoothness certificate is the least alpha such that adjacent vertices
have pmf ratio at most alpha; uniform certifies at 1, a product at
``max(p/(1-p), (1-p)/p)`` over coordinates, and a table by an exhaustive
edge scan done in log space (ratios of tiny numbers stay exact there).

Randomness is explicit everywhere: a named seed or numpy Generator goes in,
and experiment code derives independent per-trial streams from
``rng_stream(master_seed, trial_index)`` so parallel trial order can never
change results.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .concepts import Concept, evaluate
from .errors import CapExceededError, ValidationError
from .hypercube import EXACT_ORACLE_CAP, Point, PointSet

_TABLE_TOL = 1e-12


def rng_stream(seed: int, *path: int) -> np.random.Generator:
    """Independent, reproducible PCG64 stream for (seed, *path)."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, path)]))


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return rng_stream(0 if seed is None else int(seed))


@dataclass(frozen=True, eq=False)
class Distribution:
    """Immutable distribution over {0,1}^n; build via uniform/product/table."""

    n: int
    kind: str
    means: tuple[float, ...] | None = None
    probs: np.ndarray | None = None
    full_support: bool = True

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"dimension must be >= 1, got {self.n}")
        if self.kind not in ("uniform", "product", "table"):
            raise ValidationError(f"unknown distribution kind {self.kind!r}")

    def describe(self) -> dict:
        d: dict = {"kind": self.kind, "n": self.n}
        if self.kind == "product":
            d["means"] = list(self.means)
        return d


def uniform(n: int) -> Distribution:
    return Distribution(n, "uniform")


def product(means: Sequence[float], alpha: float | None = None) -> Distribution:
    """Product distribution with the given coordinate means.

    When a target smoothness ``alpha`` is supplied, every mean must lie in
    [1/(1+alpha), alpha/(1+alpha)]; that window is exactly what keeps the
    product alpha-smooth edge by edge.
    """
    ms = tuple(float(p) for p in means)
    if not ms:
        raise ValidationError("product distribution needs at least one mean")
    for p in ms:
        if not 0.0 < p < 1.0:
            raise ValidationError(f"product means must lie strictly in (0,1), got {p}")
    if alpha is not None:
        if alpha < 1.0:
            raise ValidationError(f"alpha must be >= 1, got {alpha}")
        lo, hi = 1.0 / (1.0 + alpha), alpha / (1.0 + alpha)
        for p in ms:
            if not lo - 1e-12 <= p <= hi + 1e-12:
                raise ValidationError(
                    f"mean {p} outside [{lo:.6g}, {hi:.6g}] required for alpha={alpha}"
                )
    return Distribution(len(ms), "product", means=ms)


def table(probs: Iterable[float], *, _allow_zero: bool = False) -> Distribution:
    """Explicit pmf over all 2^n vertices, in vertex-encoding order."""
    arr = np.asarray(list(probs) if not isinstance(probs, np.ndarray) else probs, dtype=float)
    size = arr.size
    if size < 2 or size & (size - 1):
        raise ValidationError(f"table length must be a power of two >= 2, got {size}")
    n = size.bit_length() - 1
    if n > EXACT_ORACLE_CAP:
        raise CapExceededError(f"table distributions are capped at n <= {EXACT_ORACLE_CAP}")
    if np.any(arr < 0):
        raise ValidationError("table probabilities must be nonnegative")
    if not _allow_zero and np.any(arr == 0):
        raise ValidationError("table pmf has a zero-mass point; full support is required")
    total = math.fsum(arr.tolist())
    if abs(total - 1.0) > _TABLE_TOL:
        raise ValidationError(f"table pmf sums to {total!r}, not 1 within {_TABLE_TOL}")
    arr = arr.copy()
    arr.flags.writeable = False
    return Distribution(n, "table", probs=arr, full_support=not np.any(arr == 0))


def to_table(d: Distribution) -> Distribution:
    """Materialize any distribution as an explicit table (cap permitting)."""
    if d.kind == "table":
        return d
    if d.n > EXACT_ORACLE_CAP:
        raise CapExceededError(f"cannot materialize a table beyond n={EXACT_ORACLE_CAP}")
    if d.kind == "uniform":
        return table(np.full(1 << d.n, 2.0 ** -d.n))
    w = np.ones(1)
    for j in range(d.n - 1, -1, -1):
        w = np.kron(w, np.array([1.0 - d.means[j], d.means[j]]))
    return table(w)


def pmf(d: Distribution, x: Point) -> float:
    """Exact probability of a single vertex."""
    if x.n != d.n:
        raise ValidationError(f"dimension mismatch: point n={x.n}, distribution n={d.n}")
    if d.kind == "uniform":
        return 2.0 ** -d.n
    if d.kind == "product":
        out = 1.0
        for i, p in enumerate(d.means):
            out *= p if (x.bits >> i) & 1 else 1.0 - p
        return out
    return float(d.probs[x.bits])


def sample(d: Distribution, m: int, seed=None) -> list[Point]:
    """m i.i.d. draws, deterministic given the seed (int or Generator)."""
    if m < 0:
        raise ValidationError(f"sample size must be >= 0, got {m}")
    if m == 0:
        return []
    rng = _as_rng(seed)
    n = d.n
    if d.kind == "table":
        cdf = np.cumsum(d.probs)
        cdf[-1] = 1.0
        idx = np.searchsorted(cdf, rng.random(m), side="right")
        return [Point(n, int(i)) for i in idx]
    p = np.full(n, 0.5) if d.kind == "uniform" else np.asarray(d.means)
    rows = rng.random((m, n)) < p
    packed = np.packbits(rows, axis=1, bitorder="little")
    return [Point(n, int.from_bytes(row.tobytes(), "little")) for row in packed]


def _product_mass(means: Sequence[float], s: PointSet) -> float:
    # Fold the indicator one coordinate at a time inside fixed-size chunks;
    # the high coordinates of each chunk contribute a scalar weight.  Keeps
    # peak memory small even at the cap.
    n = s.n
    chunk_bits = min(n, 16)
    chunk_vertices = 1 << chunk_bits
    nbytes = max(1, (1 << n) // 8)
    raw = s.bits.to_bytes(nbytes, "little")
    parts: list[float] = []
    for h in range(1 << (n - chunk_bits)):
        lo = h * (chunk_vertices // 8) if chunk_vertices >= 8 else 0
        seg = np.frombuffer(raw[lo : lo + max(1, chunk_vertices // 8)], dtype=np.uint8)
        v = np.unpackbits(seg, bitorder="little")[:chunk_vertices].astype(float)
        for i in range(chunk_bits):
            v = v[0::2] * (1.0 - means[i]) + v[1::2] * means[i]
        w = 1.0
        for i in range(chunk_bits, n):
            w *= means[i] if (h >> (i - chunk_bits)) & 1 else 1.0 - means[i]
        parts.append(float(v[0]) * w)
    return math.fsum(parts)


def mass(d: Distribution, s: PointSet) -> float:
    """Total probability of a dense vertex set."""
    if s.n != d.n:
        raise ValidationError(f"dimension mismatch: set n={s.n}, distribution n={d.n}")
    if d.kind == "uniform":
        return s.bits.bit_count() * 2.0 ** -d.n
    if d.kind == "product":
        return _product_mass(d.means, s)
    sel = d.probs[s.to_bool_array()]
    return math.fsum(sel.tolist())


def log_lipschitz_constant(d: Distribution) -> float:
    """Least alpha with |log pmf(x) - log pmf(x')| <= log alpha on every edge."""
    if d.kind == "uniform":
        return 1.0
    if d.kind == "product":
        worst = 1.0
        for p in d.means:
            worst = max(worst, p / (1.0 - p), (1.0 - p) / p)
        return worst
    if np.any(d.probs == 0):
        raise ValidationError("pmf has a zero-mass point; smoothness constant undefined")
    logs = np.log(d.probs)
    worst_log = 0.0
    for j in range(d.n):
        a = logs.reshape(-1, 2, 1 << j)
        worst_log = max(worst_log, float(np.abs(a[:, 1, :] - a[:, 0, :]).max()))
    return float(math.exp(worst_log))


def marginal(d: Distribution, keep: Iterable[int]) -> Distribution:
    """Marginal onto the kept variables (ascending order becomes the new axes)."""
    ks = sorted(set(keep))
    if not ks:
        raise ValidationError("must keep at least one variable")
    if ks[0] < 0 or ks[-1] >= d.n:
        raise ValidationError(f"keep set {ks} out of range for n={d.n}")
    if d.kind == "uniform":
        return uniform(len(ks))
    if d.kind == "product":
        return product([d.means[i] for i in ks])
    dropped = [i for i in range(d.n) if i not in set(ks)]
    if not dropped:
        return d
    a = d.probs.reshape([2] * d.n)
    # axis of variable i is (n-1-i): the reshape puts the highest bit first
    summed = a.sum(axis=tuple(d.n - 1 - i for i in dropped))
    return table(summed.reshape(-1), _allow_zero=not d.full_support)


def condition(d: Distribution, event: PointSet) -> Distribution:
    """Renormalized restriction to an event; result is a table distribution.

    The output has zero mass outside the event, so its own edge-scan
    constant is undefined; the useful object is its marginal onto the
    variables the event does not mention, which stays as smooth as d.
    """
    if event.n != d.n:
        raise ValidationError(f"dimension mismatch: event n={event.n}, distribution n={d.n}")
    base = to_table(d)
    ind = event.to_bool_array()
    w = np.where(ind, base.probs, 0.0)
    z = math.fsum(w[ind].tolist())
    if z <= 0.0:
        raise ValidationError("conditioning event has zero mass")
    return table(w / z, _allow_zero=True)


# ---------------------------------------------------------------------------
# Labeled samples

@dataclass(frozen=True)
class LabeledSample:
    """Points plus labels, with the seed and concept that produced them."""

    points: tuple[Point, ...]
    labels: tuple[int, ...]
    seed: int | None = None
    concept: str | None = None
    n: int = field(init=False)

    def __post_init__(self) -> None:
        if len(self.points) != len(self.labels):
            raise ValidationError("points and labels must have equal length")
        for v in self.labels:
            if v not in (0, 1):
                raise ValidationError(f"labels must be bits, got {v}")
        dims = {p.n for p in self.points}
        if len(dims) > 1:
            raise ValidationError(f"mixed point dimensions in sample: {sorted(dims)}")
        object.__setattr__(self, "n", dims.pop() if dims else 0)

    def __len__(self) -> int:
        return len(self.points)


def draw_labeled_sample(c: Concept, d: Distribution, m: int, seed=None) -> LabeledSample:
    """Draw m points from d and label them with c."""
    pts = tuple(sample(d, m, seed))
    labels = tuple(evaluate(c, p) for p in pts)
    return LabeledSample(pts, labels, seed=seed if isinstance(seed, int) else None,
                         concept=str(c))


# ---------------------------------------------------------------------------
# Table CSV round-trip: one row per vertex, "bitstring,probability"

def table_to_csv(d: Distribution) -> str:
    t = to_table(d)
    buf = io.StringIO()
    writer = csv.writer(buf)
    for idx in range(1 << t.n):
        writer.writerow([str(Point(t.n, idx)), repr(float(t.probs[idx]))])
    return buf.getvalue()


def table_from_csv(text: str) -> Distribution:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        raise ValidationError("empty table CSV")
    n = len(rows[0][0].strip())
    probs = np.zeros(1 << n)
    seen = 0
    for line_no, row in enumerate(rows, start=1):
        if len(row) != 2:
            raise ValidationError(f"line {line_no}: expected 'bitstring,probability'")
        p = Point.parse(row[0])
        if p.n != n:
            raise ValidationError(f"line {line_no}: inconsistent bitstring width")
        probs[p.bits] = float(row[1])
        seen += 1
    if seen != 1 << n:
        raise ValidationError(f"expected {1 << n} rows, got {seen}")
    return table(probs)
