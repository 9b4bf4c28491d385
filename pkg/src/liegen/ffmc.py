"""Monte Carlo torus statistics for GL_n(q) and SL_n(q), q prime.

A regular semisimple element of GL_n(q) has squarefree characteristic
polynomial, and the degrees of its irreducible factors give the partition
labelling its maximal torus.  Sampling uniform matrices and tallying these
partitions estimates the torus-class proportions, which should approach
the cycle-type proportions 1/z_lambda of S_n up to O(1/q).

Characteristic polynomials are computed in batches with the division-free
Berkowitz recursion in int64 arithmetic mod p.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import ContractError, RangeError
from .weyl_stats import Partition, centralizer_order_sym, partitions

MAX_N = 8
MAX_SAMPLES = 10 ** 8
EXHAUSTIVE_LIMIT = 10 ** 6   # group order
_ENUM_LIMIT = 1 << 24        # q^(n^2) matrices scanned in exhaustive mode

Poly = tuple[int, ...]  # coefficients mod p, lowest degree first


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    return all(p % d for d in range(3, math.isqrt(p) + 1, 2))


@dataclass(frozen=True)
class PrimePowerField:
    """F_q with q = p^k; only k = 1 is implemented."""

    p: int
    k: int = 1

    def __post_init__(self):
        if not (2 <= self.p < 2 ** 31 and _is_prime(self.p)):
            raise RangeError(f"p must be a prime below 2^31, got {self.p}")
        if self.k != 1:
            raise ContractError("only prime fields are supported (k = 1)")

    @property
    def q(self) -> int:
        return self.p ** self.k

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.p - 2, self.p)


def _field(q: int) -> PrimePowerField:
    if isinstance(q, PrimePowerField):
        return q
    return PrimePowerField(q)


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise RangeError(f"n must lie in [1, {MAX_N}], got {n}")


# ------------------------------------------------------------ GF(p)[x] arithmetic

def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _monic(f: list[int], p: int) -> list[int]:
    inv = pow(f[-1], p - 2, p)
    return [c * inv % p for c in f]


def _sub(f: list[int], g: list[int], p: int) -> list[int]:
    out = [0] * max(len(f), len(g))
    for i, c in enumerate(f):
        out[i] = c
    for i, c in enumerate(g):
        out[i] = (out[i] - c) % p
    return _trim(out)


def _mul(f: list[int], g: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return _trim([c % p for c in out])


def poly_divmod(f: list[int], g: list[int], p: int) -> tuple[list[int], list[int]]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    dg = len(g) - 1
    lead = g[-1]
    inv = 1 if lead == 1 else pow(lead, p - 2, p)
    quot = [0] * max(len(f) - dg, 0)
    for shift in range(len(r) - 1 - dg, -1, -1):
        c = r[shift + dg] * inv % p
        if c:
            quot[shift] = c
            for i in range(dg + 1):
                r[shift + i] = (r[shift + i] - c * g[i]) % p
    del r[dg:]
    return _trim(quot), _trim(r)


def poly_gcd(f: list[int], g: list[int], p: int) -> list[int]:
    """Monic gcd (empty list for gcd(0, 0))."""
    a, b = _trim(list(f)), _trim(list(g))
    while b:
        a, b = b, poly_divmod(a, b, p)[1]
    return _monic(a, p) if a else a


def _deriv(f: list[int], p: int) -> list[int]:
    return _trim([i * c % p for i, c in enumerate(f)][1:])


def _powmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = poly_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = poly_divmod(_mul(result, base, p), mod, p)[1]
        base = poly_divmod(_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def squarefree_decomposition(f: list[int], p: int) -> list[tuple[list[int], int]]:
    """Pairs (g, e) with f = prod g^e, each g squarefree and monic; f monic."""
    f = _trim(list(f))
    if len(f) <= 1:
        return []
    out = []
    c = poly_gcd(f, _deriv(f, p), p) if _deriv(f, p) else list(f)
    w = poly_divmod(f, c, p)[0]
    i = 1
    while len(w) > 1:
        y = poly_gcd(w, c, p)
        fac = poly_divmod(w, y, p)[0]
        if len(fac) > 1:
            out.append((fac, i))
        w, c = y, poly_divmod(c, y, p)[0]
        i += 1
    if len(c) > 1:
        root = [c[k] for k in range(0, len(c), p)]   # a^p = a in F_p
        out += [(g, e * p) for g, e in squarefree_decomposition(root, p)]
    return out


def distinct_degree_factorization(f: list[int], p: int) -> list[tuple[list[int], int]]:
    """For squarefree monic f, pairs (g_d, d): g_d is the product of the degree-d factors."""
    out = []
    g = _trim(list(f))
    x = [0, 1]
    h = x
    d = 1
    while len(g) - 1 >= 2 * d:
        h = _powmod(h, p, g, p)
        factor = poly_gcd(g, _sub(h, x, p), p)
        if len(factor) > 1:
            out.append((factor, d))
            g = poly_divmod(g, factor, p)[0]
            h = poly_divmod(h, g, p)[1]
        d += 1
    if len(g) > 1:
        out.append((g, len(g) - 1))
    return out


def is_squarefree(f: list[int], p: int) -> bool:
    f = _trim(list(f))
    if len(f) <= 2:
        return True
    df = _deriv(f, p)
    if not df:
        return False
    return len(poly_gcd(f, df, p)) == 1


def factor_degrees(f: list[int], p: int) -> Partition:
    """Degrees of the irreducible factors of monic f, with multiplicity."""
    degrees = []
    for g, e in squarefree_decomposition(f, p):
        for part, d in distinct_degree_factorization(g, p):
            degrees += [d] * ((len(part) - 1) // d * e)
    return tuple(sorted(degrees, reverse=True))


# -------------------------------------------------------- characteristic polys

def char_polys(mats: np.ndarray, p: int) -> np.ndarray:
    """Characteristic polynomials det(xI - M) of a batch, shape (B, n+1).

    Row b holds the coefficients highest degree first (column 0 is 1).
    Entries of ``mats`` must lie in [0, p).
    """
    mats = np.asarray(mats, dtype=np.int64)
    if mats.ndim == 2:
        mats = mats[None]
    batch, n, _ = mats.shape
    poly = np.ones((batch, 1), dtype=np.int64)
    for r in range(n):
        # A_{r+1} = [[A_r, S], [R, a]]
        a = mats[:, r, r]
        R = mats[:, r, :r]
        S = mats[:, :r, r]
        c = np.zeros((batch, r + 2), dtype=np.int64)
        c[:, 0] = 1
        c[:, 1] = (-a) % p
        v = S
        for k in range(r):
            c[:, k + 2] = (-((R * v) % p).sum(axis=1)) % p
            if k + 1 < r:
                v = ((mats[:, :r, :r] * v[:, None, :]) % p).sum(axis=2) % p
        new = np.zeros((batch, r + 2), dtype=np.int64)
        for i in range(r + 2):
            acc = np.zeros(batch, dtype=np.int64)
            for j in range(min(i, r) + 1):
                acc = (acc + c[:, i - j] * poly[:, j]) % p
            new[:, i] = acc
        poly = new
    return poly


def determinants(mats: np.ndarray, p: int) -> np.ndarray:
    polys = char_polys(mats, p)
    n = polys.shape[1] - 1
    return polys[:, n] if n % 2 == 0 else (-polys[:, n]) % p


@dataclass(frozen=True)
class CharPolyAnalysis:
    poly: Poly            # lowest degree first, monic
    squarefree: bool
    degree_partition: Partition


def _analyse(poly_high_first: tuple[int, ...], p: int) -> CharPolyAnalysis:
    f = list(reversed(poly_high_first))
    pieces = squarefree_decomposition(f, p)
    degrees = []
    for g, e in pieces:
        for part, d in distinct_degree_factorization(g, p):
            degrees += [d] * ((len(part) - 1) // d * e)
    squarefree = all(e == 1 for _, e in pieces)
    return CharPolyAnalysis(tuple(f), squarefree, tuple(sorted(degrees, reverse=True)))


def char_poly_analysis(M, q) -> CharPolyAnalysis:
    F = _field(q)
    M = np.asarray(M, dtype=np.int64) % F.p
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ContractError("expected a square matrix")
    poly = char_polys(M, F.p)[0]
    if poly[-1] % F.p == 0:
        raise ContractError("matrix is singular")
    return _analyse(tuple(int(c) for c in poly), F.p)


# ---------------------------------------------------------------- sampling

def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Independent generator for stream ``stream`` of ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,))))


def gl_acceptance(n: int, q: int) -> float:
    return math.prod(1 - q ** -i for i in range(1, n + 1))


def sample_gl(n: int, q, count: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray, int]:
    """``count`` uniform elements of GL_n(q) by rejection.

    Returns (matrices, characteristic polynomials, rejected draws).
    """
    F = _field(q)
    _check_n(n)
    p = F.p
    mats, polys, rejected = [], [], 0
    have = 0
    accept = gl_acceptance(n, p)
    while have < count:
        want = count - have
        draw = max(16, int(want / accept * 1.05) + 8)
        batch = rng.integers(0, p, size=(draw, n, n), dtype=np.int64)
        cp = char_polys(batch, p)
        accepted = np.flatnonzero(cp[:, n] != 0)[:want]
        if len(accepted):
            # draws after the last accepted one are discarded unseen
            rejected += int(accepted[-1]) + 1 - len(accepted)
        else:
            rejected += draw
        batch, cp = batch[accepted], cp[accepted]
        take = len(accepted)
        mats.append(batch)
        polys.append(cp)
        have += take
    return np.concatenate(mats), np.concatenate(polys), rejected


def _scale_to_sl(mats: np.ndarray, polys: np.ndarray, p: int) -> np.ndarray:
    n = mats.shape[1]
    det = polys[:, n] if n % 2 == 0 else (-polys[:, n]) % p
    inv = np.array([pow(int(d), p - 2, p) for d in det.tolist()], dtype=np.int64)
    out = mats.copy()
    out[:, 0, :] = (out[:, 0, :] * inv[:, None]) % p
    return out


def sample_sl(n: int, q, count: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray, int]:
    """Uniform SL_n(q): uniform GL_n(q) with row 0 scaled by det^-1."""
    p = _field(q).p
    mats, polys, rejected = sample_gl(n, q, count, rng)
    mats = _scale_to_sl(mats, polys, p)
    return mats, char_polys(mats, p), rejected


def random_gl(n: int, q, rng: np.random.Generator) -> np.ndarray:
    return sample_gl(n, q, 1, rng)[0][0]


def random_sl(n: int, q, rng: np.random.Generator) -> np.ndarray:
    return sample_sl(n, q, 1, rng)[0][0]


# ------------------------------------------------------------- statistics

@dataclass(frozen=True)
class MCConfig:
    group: str = "GL"
    n: int = 3
    q: int = 101
    samples: int = 100_000
    seed: int = 42
    streams: int = 1
    workers: int = 1
    batch: int = 50_000

    def __post_init__(self):
        if self.group not in ("GL", "SL"):
            raise RangeError(f"group must be GL or SL, got {self.group!r}")
        _check_n(self.n)
        _field(self.q)
        if not 1 <= self.samples <= MAX_SAMPLES:
            raise RangeError(f"samples must lie in [1, {MAX_SAMPLES}]")
        if not 1 <= self.streams <= self.samples:
            raise RangeError("streams must lie in [1, samples]")
        if self.workers < 1 or self.batch < 1:
            raise RangeError("workers and batch must be positive")


@dataclass
class SampleReport:
    group: str
    n: int
    q: int
    samples: int
    seed: Optional[int]
    counts: dict[Partition, int]
    regular_semisimple: int
    rejected: int = 0
    streams: int = 1
    exhaustive: bool = False

    def __post_init__(self):
        if sum(self.counts.values()) != self.regular_semisimple:
            raise ContractError("partition counts must sum to the regular semisimple count")
        if self.regular_semisimple > self.samples:
            raise ContractError("more regular semisimple elements than samples")

    def frequency(self, lam: Partition) -> Fraction:
        if self.samples == 0:
            raise ContractError("empty report")
        return Fraction(self.counts.get(lam, 0), self.samples)

    @property
    def non_regular_fraction(self) -> Fraction:
        return Fraction(self.samples - self.regular_semisimple, self.samples)

    def merge(self, other: SampleReport) -> SampleReport:
        if (self.group, self.n, self.q, self.exhaustive) != (other.group, other.n, other.q, other.exhaustive):
            raise ContractError("reports describe different experiments")
        counts = Counter(self.counts)
        counts.update(other.counts)
        return SampleReport(self.group, self.n, self.q, self.samples + other.samples, self.seed,
                            dict(counts), self.regular_semisimple + other.regular_semisimple,
                            self.rejected + other.rejected, self.streams + other.streams)


class _Classifier:
    """Caches the analysis of each distinct characteristic polynomial."""

    def __init__(self, p: int):
        self.p = p
        self.cache: dict[tuple, Optional[Partition]] = {}

    def tally(self, polys: np.ndarray, counts: Counter) -> int:
        rs = 0
        cache, p = self.cache, self.p
        for row in map(tuple, polys.tolist()):
            lam = cache.get(row, False)
            if lam is False:
                a = _analyse(row, p)
                lam = cache[row] = a.degree_partition if a.squarefree else None
            if lam is not None:
                counts[lam] += 1
                rs += 1
        return rs


def _run_stream(cfg: MCConfig, stream: int, count: int) -> SampleReport:
    rng = make_rng(cfg.seed, stream)
    sampler = sample_gl if cfg.group == "GL" else sample_sl
    clf = _Classifier(cfg.q)
    counts: Counter = Counter()
    rs = rejected = 0
    done = 0
    while done < count:
        take = min(cfg.batch, count - done)
        _, polys, rej = sampler(cfg.n, cfg.q, take, rng)
        rs += clf.tally(polys, counts)
        rejected += rej
        done += take
    return SampleReport(cfg.group, cfg.n, cfg.q, count, cfg.seed, dict(counts), rs, rejected, 1)


def _stream_sizes(samples: int, streams: int) -> list[int]:
    base, extra = divmod(samples, streams)
    return [base + (1 if i < extra else 0) for i in range(streams)]


def run(cfg: MCConfig) -> SampleReport:
    """Sample across ``cfg.streams`` independent streams and merge by addition."""
    sizes = _stream_sizes(cfg.samples, cfg.streams)
    if cfg.workers > 1 and cfg.streams > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(_run_stream, itertools.repeat(cfg), range(cfg.streams), sizes))
    else:
        parts = [_run_stream(cfg, i, s) for i, s in enumerate(sizes)]
    report = parts[0]
    for other in parts[1:]:
        report = report.merge(other)
    report.streams = cfg.streams
    return report


def group_order(group: str, n: int, q: int) -> int:
    order = math.prod(q ** n - q ** i for i in range(n))
    return order // (q - 1) if group == "SL" else order


def enumerate_group(group: str, n: int, q) -> np.ndarray:
    """All elements of GL_n(q) or SL_n(q) as an array (B, n, n)."""
    p = _field(q).p
    _check_n(n)
    if p ** (n * n) > _ENUM_LIMIT:
        raise RangeError(f"{p}^{n * n} matrices is too many to enumerate")
    total = p ** (n * n)
    idx = np.arange(total, dtype=np.int64)
    digits = np.empty((total, n * n), dtype=np.int64)
    for k in range(n * n):
        digits[:, k] = idx % p
        idx //= p
    mats = digits.reshape(total, n, n)
    det = determinants(mats, p)
    keep = det == 1 if group == "SL" else det != 0
    return mats[keep]


def torus_statistics(group: str, n: int, q, samples: Optional[int] = None, seed: int = 42,
                     streams: int = 1, exhaustive: bool = False, workers: int = 1) -> SampleReport:
    """Classify sampled (or all) group elements by characteristic polynomial."""
    if group not in ("GL", "SL"):
        raise RangeError(f"group must be GL or SL, got {group!r}")
    p = _field(q).p
    _check_n(n)
    if exhaustive:
        if group_order(group, n, p) > EXHAUSTIVE_LIMIT:
            raise RangeError("group too large for exhaustive mode")
        mats = enumerate_group(group, n, p)
        counts: Counter = Counter()
        rs = _Classifier(p).tally(char_polys(mats, p), counts)
        return SampleReport(group, n, p, len(mats), None, dict(counts), rs, 0, 1, True)
    if samples is None or samples < 1:
        raise RangeError("samples must be a positive integer")
    return run(MCConfig(group, n, p, samples, seed, streams, workers))


# ---------------------------------------------------------- comparison

@dataclass(frozen=True)
class Deviation:
    partition: Partition
    count: int
    frequency: Fraction
    exact: Fraction
    deviation: Fraction
    sigma: float
    threshold: float
    flagged: bool


def weyl_reference(n: int) -> dict[Partition, Fraction]:
    return {lam: Fraction(1, centralizer_order_sym(lam)) for lam in partitions(n)}


def compare_to_weyl(report: SampleReport) -> list[Deviation]:
    """Per partition: empirical frequency minus 1/z_lambda, flagged past 1/q + 4 sigma."""
    if report.group not in ("GL", "SL"):
        raise ContractError(f"no Weyl reference for group {report.group}")
    if report.samples <= 0:
        raise ContractError("report has no samples")
    rows = []
    for lam, exact in weyl_reference(report.n).items():
        count = report.counts.get(lam, 0)
        freq = Fraction(count, report.samples)
        if report.exhaustive:
            sigma = 0.0
        else:
            ph = float(freq)
            sigma = math.sqrt(ph * (1 - ph) / report.samples)
        threshold = 1 / report.q + 4 * sigma
        dev = freq - exact
        rows.append(Deviation(lam, count, freq, exact, dev, sigma, threshold,
                              abs(float(dev)) > threshold))
    return rows


def report_to_dict(report: SampleReport, deviations: Optional[list[Deviation]] = None) -> dict:
    """JSON-ready document: integer counts, 6-digit decimal frequencies, exact p/q strings."""
    doc = {
        "group": report.group, "n": report.n, "q": report.q,
        "samples": report.samples, "seed": report.seed, "streams": report.streams,
        "exhaustive": report.exhaustive,
        "regular_semisimple": report.regular_semisimple,
        "rejected": report.rejected,
        "counts": {",".join(map(str, lam)): report.counts.get(lam, 0) for lam in partitions(report.n)},
        "frequencies": {",".join(map(str, lam)): f"{report.counts.get(lam, 0) / report.samples:.6f}"
                        for lam in partitions(report.n)},
    }
    if deviations is not None:
        doc["comparison"] = [
            {"partition": ",".join(map(str, d.partition)),
             "exact": f"{d.exact.numerator}/{d.exact.denominator}",
             "frequency": f"{float(d.frequency):.6f}",
             "deviation": f"{float(d.deviation):.6f}",
             "sigma": f"{d.sigma:.6f}",
             "threshold": f"{d.threshold:.6f}",
             "flagged": d.flagged}
            for d in deviations]
    return doc
