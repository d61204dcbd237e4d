"""Zeta-zero ordinates and truncation tails of the zero sums."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

ENV_VAR = "CESARO_ZEROS"
SAFETY = 4.0
TWO_PI = 2 * math.pi
# sum over conjugate pairs: 2 re(term) <= 2 |term|
_PAIR = 2.0


class ZeroLoadError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ZeroSet:
    """Ascending positive ordinates gamma; every zero is taken as 1/2 + i gamma."""

    gammas: np.ndarray = field(repr=False)
    source: str = ""
    beta: float = 0.5

    @property
    def height(self) -> float:
        return float(self.gammas[-1]) if len(self.gammas) else 0.0

    @property
    def empty(self) -> bool:
        return len(self.gammas) == 0

    def __len__(self):
        return len(self.gammas)

    def __eq__(self, other):
        if not isinstance(other, ZeroSet):
            return NotImplemented
        return (
            self.source == other.source
            and self.beta == other.beta
            and np.array_equal(self.gammas, other.gammas)
        )

    def __hash__(self):
        return hash((self.source, len(self.gammas), self.height))

    def count_below(self, T: float) -> int:
        return int(np.searchsorted(self.gammas, T, side="right"))

    def up_to(self, T: float) -> "ZeroSet":
        return ZeroSet(self.gammas[: self.count_below(T)], self.source, self.beta)


def riemann_von_mangoldt(T: float) -> float:
    """Smooth zero count N(T) = (T/2pi) log(T/2pi) - T/2pi + 7/8."""
    x = T / TWO_PI
    return x * math.log(x) - x + 0.875


def bundled_zeros_path() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(str(resources.files("cesaro_hl").joinpath("data/zeros_1e5.txt")))


def density_checkpoints(height: float):
    return [T for T in (100.0, 1000.0) if T <= height] + ([height] if height > 0 else [])


def load_zeros(path=None, max_count: int | None = None) -> ZeroSet:
    """Parse a zero table: one ordinate per line, '#' comments, ascending.

    ``max_count`` keeps only the first ``max_count`` ordinates; 0 gives an
    empty (flagged) set.  Raises :class:`ZeroLoadError` naming the offending
    line for parse errors, ordering violations, ordinates <= 14 and density
    mismatches.
    """
    path = Path(path) if path is not None else bundled_zeros_path()
    if max_count is not None and max_count < 0:
        raise ValueError("max_count must be >= 0")
    vals = []
    lines = []
    try:
        fh = open(path, encoding="ascii")
    except OSError as exc:
        raise ZeroLoadError(f"{path}: cannot open ({exc.strerror})") from exc
    with fh:
        for lineno, raw in enumerate(fh, 1):
            if max_count is not None and len(vals) >= max_count:
                break
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                g = float(line)
            except ValueError:
                raise ZeroLoadError(f"{path}:{lineno}: not a number: {line!r}") from None
            if not math.isfinite(g) or g <= 14.0:
                raise ZeroLoadError(f"{path}:{lineno}: ordinate {line} not > 14")
            if vals and g <= vals[-1]:
                raise ZeroLoadError(
                    f"{path}:{lineno}: not ascending ({line} after {vals[-1]!r})"
                )
            vals.append(g)
            lines.append(lineno)
    gammas = np.array(vals, dtype=float)
    for T in density_checkpoints(gammas[-1] if len(gammas) else 0.0):
        n = int(np.searchsorted(gammas, T, side="right"))
        expect = riemann_von_mangoldt(T)
        if abs(n - expect) > 1.0:
            where = lines[n - 1] if n else 0
            raise ZeroLoadError(
                f"{path}:{where}: density check failed at T={T:g}: "
                f"{n} ordinates, Riemann-von Mangoldt expects {expect:.2f}"
            )
    return ZeroSet(gammas, str(path))


# ---------------------------------------------------------------------------
# tails


def _log_moment(T: float, s: float) -> float:
    """int_T^oo t^{-s} log(t / 2 pi) dt for s > 1."""
    d = s - 1.0
    return T ** (-d) * (math.log(T / TWO_PI) / d + 1.0 / (d * d))


def tail_bound_m2m3(T: float, k: float, ell: int, N: int, variant: str) -> float:
    """Upper estimate of sum_{gamma > T} |paired term| for the M2 or M3 series.

    Uses |Gamma(rho/l) / Gamma(k + c + rho/l)| ~ (gamma/l)^{-k-c} (c = 3/2 for
    M2, 1 for M3), an extra t^{1/(2l)} of slack, and zero density
    (1/2pi) log(t/2pi), times a safety factor of 4.
    """
    if T < 50:
        raise ValueError("tail bounds need T >= 50")
    if variant == "m2":
        c, const, n_pow = 1.5, math.sqrt(math.pi) / ell, 0.5 + 0.5 / ell
    elif variant == "m3":
        c, const, n_pow = 1.0, 1.0 / ell, 0.5 / ell
    else:
        raise ValueError(f"variant must be 'm2' or 'm3', got {variant!r}")
    s = k + c - 0.5 / ell
    if s <= 1:
        raise ValueError(f"{variant} tail integral diverges for k={k}, ell={ell}")
    # the pair factor 2 cancels the 1/2 in the term prefactors
    const *= ell ** (k + c)
    return SAFETY * const * N**n_pow * _log_moment(T, s) / TWO_PI


def m6_slow_regime(k: float) -> bool:
    """True when epsilon = (k-1)/2 is so small that the tail decays hopelessly slowly."""
    return k <= 1.2


def tail_bound_m6(T: float, k: float, ell: int, N: int) -> float:
    """Estimate of the M6 zero tail from per-zero decay gamma^{-1-eps}, eps = (k-1)/2."""
    if k <= 1:
        raise ValueError("the M6 tail needs k > 1")
    if T < 50:
        raise ValueError("tail bounds need T >= 50")
    eps = 0.5 * (k - 1.0)
    integral = T ** (-eps) * (math.log(T) / eps + 1.0 / (eps * eps))
    return SAFETY * _PAIR * N ** (0.25 - 0.5 * k + 0.5 / ell) * integral / TWO_PI
