"""Heilbronn sums H_p(a), the spectrum (H_p(g^1), ..., H_p(g^p)) with
certified error bounds, the (p+2)x(p+2) supercharacter table, and the
explicit bordered unitary matrix."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .modarith import InvalidInput, PrimeContext, pow_mod
from .sctheory import (SuperclassPartition, SupercharacterMatrices,
                       UnitAction, superclasses)

DEFAULT_PRECISION_BITS = 53
EXTENDED_PRECISION_BITS = 106
MAX_PRECISION_BITS = 256


class PrecisionError(RuntimeError):
    """Certified error bound too large for the requested integer recovery."""


def _err_bound(p: int, precision_bits: int) -> float:
    # Worst-case budget: each of the p-1 cosines is accurate to
    # 2^-(precision_bits - ceil(4 log2 p)) after angle scaling by p^2
    # and the 2*pi*a*l^p reduction.
    return (p - 1) * 2.0 ** (-(precision_bits - math.ceil(4 * math.log2(p))))


def _pth_powers(ctx: PrimeContext) -> list[int]:
    return [pow_mod(l, ctx.p, ctx.modulus) for l in range(1, ctx.p)]


def _cos_sum(residues, p2: int, precision_bits: int) -> float:
    if precision_bits <= DEFAULT_PRECISION_BITS:
        r = np.asarray(residues, dtype=np.float64)
        return float(np.cos((2.0 * np.pi / p2) * r).sum())
    import mpmath

    with mpmath.workprec(precision_bits + 10):
        w = 2 * mpmath.pi / p2
        return float(mpmath.fsum(mpmath.cos(w * r) for r in residues))


def heilbronn_sum(ctx: PrimeContext, a: int,
                  precision_bits: int = DEFAULT_PRECISION_BITS,
                  err_cap: float | None = None) -> tuple[float, float]:
    """H_p(a) = sum over l = 1..p-1 of cos(2*pi*a*l^p / p^2).

    The residues a*l^p mod p^2 are computed exactly; only the final cosine
    is approximate.  Sines cancel structurally (l pairs with p-l), which is
    asserted on the residues rather than summed numerically.  Returns the
    value and a certified absolute error bound.
    """
    if precision_bits < DEFAULT_PRECISION_BITS:
        raise InvalidInput(f"precision_bits must be >= {DEFAULT_PRECISION_BITS}")
    p, p2 = ctx.p, ctx.modulus
    bound = _err_bound(p, precision_bits)
    if err_cap is not None and bound > err_cap:
        raise PrecisionError(
            f"certified bound {bound:.3g} exceeds cap {err_cap:.3g} "
            f"at {precision_bits} bits")
    a %= p2
    residues = [a * lp % p2 for lp in _pth_powers(ctx)]
    for l in range(1, (p + 1) // 2):
        assert (residues[l - 1] + residues[p - 1 - l]) % p2 == 0, \
            "sine terms fail to pair off"
    return _cos_sum(residues, p2, precision_bits), bound


@dataclass(frozen=True)
class Spectrum:
    """The real vector (H_p(g^1), ..., H_p(g^p)) with a uniform error bound.

    values[m] holds H_p(g^(m+1)); by periodicity H_p(g^k) depends only on
    k mod p, so value_at(k) indexes cyclically.
    """

    p: int
    g: int
    values: np.ndarray = field(repr=False)
    err_bound: float
    precision_bits: int

    def value_at(self, k: int) -> float:
        return float(self.values[(k - 1) % self.p])

    def shifted(self, t: int) -> np.ndarray:
        """Vector (H_p(g^(t+1)), ..., H_p(g^(t+p))) as a cyclic shift."""
        return np.roll(self.values, -t % self.p)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["ell", "value", "err_bound"])
        for m, v in enumerate(self.values, start=1):
            w.writerow([m, repr(float(v)), repr(self.err_bound)])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({
            "p": self.p,
            "g": self.g,
            "precision_bits": self.precision_bits,
            "err_bound": self.err_bound,
            "values": [float(v) for v in self.values],
        })


def spectrum(ctx: PrimeContext,
             precision_bits: int = DEFAULT_PRECISION_BITS) -> Spectrum:
    """All p Heilbronn sums H_p(g^l), l = 1..p; Theta(p^2) phase evaluations."""
    p, p2 = ctx.p, ctx.modulus
    lp = np.array(_pth_powers(ctx), dtype=np.int64)
    powers_of_g = []
    x = 1
    for _ in range(p):
        x = x * ctx.g % p2
        powers_of_g.append(x)
    if precision_bits <= DEFAULT_PRECISION_BITS and p2 < (1 << 31):
        # a * l^p < p^4 < 2^62 fits int64 for p below ~2^15.5
        a = np.array(powers_of_g, dtype=np.int64)
        residues = (a[:, None] * lp[None, :]) % p2
        values = np.cos((2.0 * np.pi / p2) * residues).sum(axis=1)
    else:
        values = np.array([
            heilbronn_sum(ctx, a, precision_bits)[0] for a in powers_of_g])
    return Spectrum(p=p, g=ctx.g, values=values,
                    err_bound=_err_bound(p, precision_bits),
                    precision_bits=precision_bits)


@dataclass(frozen=True)
class SpectrumIdentityReport:
    """Residuals of the three unitarity identities on the spectrum."""

    sum_residual: float            # |sum H|
    norm_residual: float           # |sum H^2 - p(p-1)|
    dot_residual: float            # max over shifts i != 0 of |sum H H_shift + p|
    tolerances: tuple[float, float, float]

    @property
    def passed(self) -> bool:
        r = (self.sum_residual, self.norm_residual, self.dot_residual)
        return all(x <= t for x, t in zip(r, self.tolerances))


def verify_spectrum_identities(s: Spectrum) -> SpectrumIdentityReport:
    """Check sum H = 0, sum H^2 = p(p-1), and the shifted dot products = -p."""
    p = s.p
    v = s.values
    sum_res = abs(float(v.sum()))
    norm_res = abs(float((v * v).sum()) - p * (p - 1))
    dot_res = max(abs(float((v * np.roll(v, -i)).sum()) + p)
                  for i in range(1, p))
    # Worst-case propagation of the per-entry bound.
    e = s.err_bound
    hmax = p - 1
    tol1 = p * e
    tol2 = p * (2 * hmax * e + e * e)
    return SpectrumIdentityReport(sum_residual=sum_res, norm_residual=norm_res,
                                  dot_residual=dot_res,
                                  tolerances=(tol1, tol2, tol2))


def subgroup_pth_powers(ctx: PrimeContext) -> list[int]:
    """A = {1^p, ..., (p-1)^p} mod p^2; a subgroup of order p-1."""
    return sorted(set(_pth_powers(ctx)))


def heilbronn_partition(ctx: PrimeContext) -> SuperclassPartition:
    """Orbits of A on Z/p^2Z with the labeling X_i = g^i A for i = 1..p,
    X_{p+1} the nonzero multiples of p, X_{p+2} = {0}."""
    p, p2 = ctx.p, ctx.modulus
    A = subgroup_pth_powers(ctx)
    ordered: list[list[int]] = []
    for i in range(1, p + 1):
        gi = pow_mod(ctx.g, i, p2)
        ordered.append([gi * a % p2 for a in A])
    ordered.append([p * m for m in range(1, p)])
    ordered.append([0])
    action = UnitAction(n=p2, generators=(pow_mod(ctx.g, p, p2),))
    return superclasses(action, ordered_classes=ordered)


@dataclass(frozen=True)
class HeilbronnTable:
    """Table-pattern sigma and the explicit bordered U for the X_1..X_{p+2}
    labeling, cross-validated against the generic engine."""

    partition: SuperclassPartition
    sigma: np.ndarray
    U: np.ndarray


def heilbronn_table(ctx: PrimeContext, s: Spectrum,
                    generic: SupercharacterMatrices | None = None,
                    tol: float = 1e-8) -> HeilbronnTable:
    """Assemble sigma and U from the spectrum by the known block pattern.

    sigma[i,j] = H_p(g^(i+j)) on the p x p block, bordered by -1, p-1 and
    the all-ones row; U is (1/p) times the same block bordered by -1 and
    sqrt(p-1) entries.  If `generic` is supplied it is used for the
    cross-validation; otherwise the generic engine is run on the partition.
    """
    p = ctx.p
    N = p + 2
    sq = math.sqrt(p - 1)
    sigma = np.empty((N, N))
    U = np.empty((N, N))
    for i in range(1, p + 1):
        for j in range(1, p + 1):
            sigma[i - 1, j - 1] = s.value_at(i + j)
            U[i - 1, j - 1] = s.value_at(i + j) / p
    sigma[:p, p] = -1.0
    sigma[:p, p + 1] = p - 1.0
    sigma[p, :p] = -1.0
    sigma[p, p] = p - 1.0
    sigma[p, p + 1] = p - 1.0
    sigma[p + 1, :] = 1.0
    U[:p, p] = -1.0 / p
    U[:p, p + 1] = sq / p
    U[p, :p] = -1.0 / p
    U[p, p] = (p - 1.0) / p
    U[p, p + 1] = sq / p
    U[p + 1, :p + 1] = sq / p
    U[p + 1, p + 1] = 1.0 / p

    partition = heilbronn_partition(ctx)
    if generic is None:
        from .sctheory import build_U
        generic = build_U(partition)
    if np.abs(generic.sigma.imag).max() > 1e-10:
        raise InvalidInput("generic sigma has nonreal entries for Heilbronn action")
    mismatch = np.abs(generic.sigma.real - sigma).max()
    if mismatch > max(tol, 10 * p * s.err_bound):
        raise InvalidInput(
            f"table pattern disagrees with generic engine by {mismatch:.3g}; "
            "class labeling is inconsistent")
    return HeilbronnTable(partition=partition, sigma=sigma, U=U)
