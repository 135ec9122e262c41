"""Zero ordinates: parsing, counting, and local generation via Gram blocks."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import lambertw

from .evaluate import DEFAULT, ZetaEvalConfig, riemann_siegel_theta, siegel_z

__all__ = [
    "ZeroDataset",
    "ZeroFileError",
    "load_zeros",
    "n_of_t",
    "n_of_t_formula",
    "gram_points",
    "generate_zeros",
]

FIRST_ZERO = 14.134725141734693
FIRST_ZERO_TOL = 1e-3


class ZeroFileError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class ZeroDataset:
    """Ascending positive ordinates γ_j with a source label and content hash."""

    ordinates: np.ndarray
    source: str = "memory"
    digest: str = field(default="", compare=False)

    def __post_init__(self):
        g = np.asarray(self.ordinates, float)
        if g.ndim != 1:
            raise ValueError("ordinates must be one-dimensional")
        if g.size and (g[0] <= 0 or np.any(np.diff(g) <= 0)):
            raise ValueError("ordinates must be positive and strictly ascending")
        g.setflags(write=False)
        object.__setattr__(self, "ordinates", g)
        if not self.digest:
            object.__setattr__(self, "digest", hashlib.sha256(g.tobytes()).hexdigest())

    @property
    def count(self) -> int:
        return int(self.ordinates.size)

    def __len__(self) -> int:
        return self.count

    def check_standard(self) -> None:
        """Sanity gate for data claiming to start at the first zero."""
        if self.count and abs(self.ordinates[0] - FIRST_ZERO) > FIRST_ZERO_TOL:
            raise ValueError(f"first ordinate {self.ordinates[0]} is not the first zeta zero")

    def truncated(self, limit: int) -> "ZeroDataset":
        return ZeroDataset(self.ordinates[:limit], self.source)

    def write(self, path: str | Path, digits: int = 12) -> None:
        text = "".join(f"{g:.{digits}f}\n" for g in self.ordinates.tolist())
        Path(path).write_text(text, encoding="utf-8")


def load_zeros(path: str | Path, limit: int | None = None) -> ZeroDataset:
    """Parse one decimal ordinate per line; blank lines are skipped."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"zeros file not found: {path}")
    raw = path.read_bytes()
    vals: list[float] = []
    prev = -math.inf
    for lineno, line in enumerate(raw.decode("utf-8").splitlines(), start=1):
        text = line.strip()
        if not text:
            continue
        try:
            v = float(text)
        except ValueError:
            raise ZeroFileError(f"not a number: {text!r}", lineno) from None
        if not math.isfinite(v) or v <= 0:
            raise ZeroFileError(f"ordinate must be a positive finite number: {text!r}", lineno)
        if v <= prev:
            raise ZeroFileError(f"ordinates not strictly ascending ({v} after {prev})", lineno)
        prev = v
        vals.append(v)
        if limit is not None and len(vals) >= limit:
            break
    digest = hashlib.sha256(raw).hexdigest()
    if limit is not None:
        digest = hashlib.sha256(f"{digest}:{limit}".encode()).hexdigest()
    return ZeroDataset(np.array(vals, float), str(path), digest)


def n_of_t(dataset: ZeroDataset, T: float) -> int:
    """Number of ordinates 0 < γ ≤ T."""
    if T <= 0:
        raise ValueError("T must be positive")
    return int(np.searchsorted(dataset.ordinates, T, side="right"))


def n_of_t_formula(T: float) -> float:
    """(T/2π) log(T/2πe)."""
    if T <= 0:
        raise ValueError("T must be positive")
    return T / (2 * math.pi) * math.log(T / (2 * math.pi * math.e))


# --------------------------------------------------------------- generation


def gram_points(n) -> np.ndarray:
    """g_n with θ(g_n) = nπ (n ≥ −1), by Newton from the Lambert-W guess."""
    n = np.asarray(n, float)
    t = 2 * math.pi * np.exp(1 + lambertw((8 * n + 1) / (8 * math.e)).real)
    for _ in range(60):
        dth = 0.5 * np.log(t / (2 * math.pi))
        step = (riemann_siegel_theta(t) - n * math.pi) / dth
        t = t - step
        if np.max(np.abs(step)) < 1e-13 * np.max(t):
            break
    return t


def _sign_changes(v: np.ndarray) -> np.ndarray:
    return np.signbit(v[..., 1:]) != np.signbit(v[..., :-1])


def _brackets(config: ZetaEvalConfig, last: int, max_level: int = 10) -> tuple[np.ndarray, np.ndarray]:
    """Sign-change brackets for every zero below g_last using Rosser blocks."""
    idx = np.arange(-1, last + 1)
    g = gram_points(idx)
    zg = siegel_z(g, config)
    good = np.signbit(zg) == (idx % 2 == 1)  # (−1)^n Z(g_n) > 0
    good[0] = good[-1] = True
    gi = np.nonzero(good)[0]
    lo_list, hi_list = [], []
    span = np.diff(gi)
    single = span == 1
    a = gi[:-1][single]
    lo_list.append(g[a])
    hi_list.append(g[a + 1])
    pending = [(int(s), int(e)) for s, e in zip(gi[:-1][~single], gi[1:][~single])]
    level = 1
    while pending:
        if level > max_level:
            raise RuntimeError(f"could not resolve {len(pending)} Gram blocks, first at t={g[pending[0][0]]}")
        sub = 2**level
        grids = [np.concatenate([np.linspace(g[j], g[j + 1], sub + 1)[:-1] for j in range(s, e)] + [g[e : e + 1]]) for s, e in pending]
        vals = siegel_z(np.concatenate(grids), config)
        still = []
        pos = 0
        for (s, e), grid in zip(pending, grids):
            v = vals[pos : pos + grid.size]
            pos += grid.size
            ch = np.nonzero(_sign_changes(v))[0]
            if ch.size == e - s:
                lo_list.append(grid[ch])
                hi_list.append(grid[ch + 1])
            elif ch.size > e - s:
                raise RuntimeError(f"more sign changes than zeros in the Gram block at t={g[s]}")
            else:
                still.append((s, e))
        pending = still
        level += 1
    lo = np.concatenate(lo_list)
    hi = np.concatenate(hi_list)
    order = np.argsort(lo)
    return lo[order], hi[order]


def _illinois(lo: np.ndarray, hi: np.ndarray, config: ZetaEvalConfig, iters: int = 200) -> np.ndarray:
    flo = siegel_z(lo, config)
    fhi = siegel_z(hi, config)
    side = np.zeros(lo.shape, np.int8)
    active = np.ones(lo.shape, bool)
    for _ in range(iters):
        ia = np.nonzero(active)[0]
        if ia.size == 0:
            break
        a, b, fa, fb = lo[ia], hi[ia], flo[ia], fhi[ia]
        c = (a * fb - b * fa) / (fb - fa)
        c = np.where((c <= a) | (c >= b) | ~np.isfinite(c), 0.5 * (a + b), c)
        fc = siegel_z(c, config)
        left = np.signbit(fc) == np.signbit(fa)
        # left: root in [c, b]
        lo[ia] = np.where(left, c, a)
        flo[ia] = np.where(left, fc, fa)
        hi[ia] = np.where(left, b, c)
        fhi[ia] = np.where(left, fb, fc)
        s = side[ia]
        fhi[ia] = np.where(left & (s == 1), 0.5 * fhi[ia], fhi[ia])
        flo[ia] = np.where(~left & (s == -1), 0.5 * flo[ia], flo[ia])
        side[ia] = np.where(left, 1, -1)
        width = hi[ia] - lo[ia]
        done = (width <= 4 * np.spacing(hi[ia])) | (fc == 0)
        lo[ia[fc == 0]] = c[fc == 0]
        hi[ia[fc == 0]] = c[fc == 0]
        active[ia[done]] = False
    if active.any():
        raise RuntimeError("root refinement did not converge")
    return 0.5 * (lo + hi)


def generate_zeros(count: int, config: ZetaEvalConfig = DEFAULT) -> ZeroDataset:
    """First ``count`` zero ordinates, isolated by Rosser's rule on Gram blocks."""
    if count < 1:
        raise ValueError("count must be positive")
    last = count + 20
    while True:
        lo, hi = _brackets(config, last)
        if lo.size >= count:
            break
        last += max(20, count - lo.size + 20)
    lo, hi = lo[:count].copy(), hi[:count].copy()
    return ZeroDataset(_illinois(lo, hi, config), "generated: Gram blocks + Riemann-Siegel/Euler-Maclaurin")
