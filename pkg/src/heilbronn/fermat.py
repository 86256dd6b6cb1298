"""Fermat-congruence counting mod p^2: the spectral formula for
F(p;a,b,c), brute-force oracles, the all-triples structure tensor via
matrix products, moment identities, and diagonal-coefficient bounds."""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .modarith import InvalidInput, PrimeContext, build_context, odd_primes_upto, pow_mod
from .spectra import (EXTENDED_PRECISION_BITS, MAX_PRECISION_BITS,
                      PrecisionError, Spectrum, spectrum)

# Rounding residuals beyond this trigger a precision escalation; 0.5 is the
# hard validity limit, 0.25 leaves a factor-2 margin.
RESIDUAL_LIMIT = 0.25


class GoldenMismatch(RuntimeError):
    """Computed F(p) disagrees with the embedded reference table."""


def _check_coprime(ctx: PrimeContext, *coeffs: int) -> None:
    for c in coeffs:
        if c % ctx.p == 0:
            raise InvalidInput(f"p = {ctx.p} divides coefficient {c}")


@dataclass(frozen=True)
class FermatResult:
    """Solution count of a*x^p + b*y^p == c*z^p mod p^2 with p not dividing xyz."""

    p: int
    a: int
    b: int
    c: int
    F: int
    residual: float
    method: str  # "spectral" | "naive"

    @property
    def solution_count(self) -> int:
        return self.p ** 3 * (self.p - 1) * self.F

    def to_json(self) -> str:
        return json.dumps({
            "p": self.p, "a": self.a, "b": self.b, "c": self.c,
            "F": self.F, "solution_count": self.solution_count,
            "residual": self.residual, "method": self.method,
        })


def fermat_F_spectral(ctx: PrimeContext, s: Spectrum,
                      a: int, b: int, c: int) -> FermatResult:
    """F(p;a,b,c) = 1 - 2/p + (1/p^2) * sum_l H(a g^l) H(b g^l) H(c g^l).

    Coefficients are reduced to spectrum shifts through the dlog table, so
    no new cosines are evaluated.  The pre-rounding value must land within
    RESIDUAL_LIMIT of an integer; otherwise the spectrum is recomputed at
    higher precision.
    """
    _check_coprime(ctx, a, b, c)
    p = ctx.p
    i, j, k = (ctx.class_index(x) for x in (a, b, c))
    while True:
        triple = float((s.shifted(i) * s.shifted(j) * s.shifted(k)).sum())
        f_tilde = 1.0 - 2.0 / p + triple / (p * p)
        F = round(f_tilde)
        residual = abs(f_tilde - F)
        if residual < RESIDUAL_LIMIT and F >= 0:
            return FermatResult(p=p, a=a, b=b, c=c, F=F,
                                residual=residual, method="spectral")
        if s.precision_bits >= MAX_PRECISION_BITS:
            raise PrecisionError(
                f"residual {residual:.3g} at {s.precision_bits} bits for "
                f"F({p};{a},{b},{c})")
        bits = (EXTENDED_PRECISION_BITS if s.precision_bits < EXTENDED_PRECISION_BITS
                else MAX_PRECISION_BITS)
        s = spectrum(ctx, precision_bits=bits)


def fermat_count_naive_reduced(ctx: PrimeContext, a: int, b: int, c: int) -> int:
    """Exhaustive count of 1 <= x,y,z <= p-1 with a x^p + b y^p == c z^p
    mod p^2; equals (p-1) * F(p;a,b,c).  Theta(p^3), oracle scale only."""
    _check_coprime(ctx, a, b, c)
    p, p2 = ctx.p, ctx.modulus
    axp = [a * pow_mod(x, p, p2) % p2 for x in range(1, p)]
    byp = [b * pow_mod(y, p, p2) % p2 for y in range(1, p)]
    czp = [c * pow_mod(z, p, p2) % p2 for z in range(1, p)]
    total = 0
    for u in axp:
        for v in byp:
            s = (u + v) % p2
            for w in czp:
                if w == s:
                    total += 1
    return total


def fermat_count_full_naive(ctx: PrimeContext, a: int, b: int, c: int) -> int:
    """Count of (x,y,z) in (Z/p^2 Z)^3 with p not dividing xyz satisfying
    a x^p + b y^p == c z^p mod p^2.  Restricted to p <= 11 (p^6 scale)."""
    _check_coprime(ctx, a, b, c)
    p, p2 = ctx.p, ctx.modulus
    if p > 11:
        raise InvalidInput(f"full naive count limited to p <= 11, got {p}")
    units = [u for u in range(1, p2) if u % p != 0]
    xp = {u: pow_mod(u, p, p2) for u in units}
    pair_counts = Counter((a * xp[x] + b * xp[y]) % p2
                          for x in units for y in units)
    return sum(pair_counts.get(c * xp[z] % p2, 0) for z in units)


def class_of_array(ctx: PrimeContext) -> np.ndarray:
    """0-based class labels per residue: j-1 for X_j (units), p for X_{p+1}
    (nonzero multiples of p), p+1 for X_{p+2} = {0}."""
    p, p2 = ctx.p, ctx.modulus
    cls = np.empty(p2, dtype=np.int64)
    for u in range(p2):
        if u == 0:
            cls[u] = p + 1
        elif u % p == 0:
            cls[u] = p
        else:
            cls[u] = (ctx.dlog[u] - 1) % p
    return cls


def structure_block_enumerated(ctx: PrimeContext, i: int) -> np.ndarray:
    """c(i,j,k) for fixed i, all 1 <= j <= p and 1 <= k <= p+2, by exhaustive
    enumeration of (x, y) in {1..p-1}^2 per j.  Exact integers, Theta(p^3)."""
    p, p2 = ctx.p, ctx.modulus
    cls = class_of_array(ctx)
    xp = [pow_mod(x, p, p2) for x in range(1, p)]
    gi = pow_mod(ctx.g, i, p2)
    out = np.zeros((p, p + 2), dtype=np.int64)
    for j in range(1, p + 1):
        gj = pow_mod(ctx.g, j, p2)
        row = out[j - 1]
        lhs = [x * gi % p2 for x in xp]
        rhs = [y * gj % p2 for y in xp]
        for u in lhs:
            for v in rhs:
                row[cls[(u + v) % p2]] += 1
        # counts per class k still carry the p-1 representatives of X_k
        for k in range(p + 1):
            size = p - 1
            assert row[k] % size == 0
            row[k] //= size
    return out


@dataclass(frozen=True)
class StructureTensorP:
    """All c(i,j,k) for the Heilbronn classes, stored as the single block
    c(p, ., .) plus closed-form borders; shift invariance recovers the rest."""

    p: int
    base: np.ndarray = field(repr=False)  # (p, p), base[j-1, k-1] = c(p, j, k)
    origin: str

    def c(self, i: int, j: int, k: int) -> int:
        p = self.p
        if not (1 <= i <= p and 1 <= j <= p and 1 <= k <= p + 2):
            raise IndexError(f"indices out of range: ({i},{j},{k})")
        if k == p + 1:
            return 1 if j != i else 0
        if k == p + 2:
            return p - 1 if j == i else 0
        return int(self.base[(j - i - 1) % p, (k - i - 1) % p])

    def block(self, i: int) -> np.ndarray:
        """The p x p matrix [c(i,j,k)]_{j,k} via cyclic index shifts."""
        t = (self.p - i) % self.p
        return np.roll(self.base, (-t, -t), axis=(0, 1))

    def diagonal(self, i: int | None = None) -> np.ndarray:
        """(c(i,i,1), ..., c(i,i,p)); the multiset is i-independent."""
        i = self.p if i is None else i
        return np.array([self.c(i, i, k) for k in range(1, self.p + 1)],
                        dtype=np.int64)


def bordered_unitary(s: Spectrum) -> np.ndarray:
    """The explicit (p+2) x (p+2) unitary with Heilbronn block and
    -1 / sqrt(p-1) borders, scaled by 1/p."""
    p = s.p
    sq = math.sqrt(p - 1)
    U = np.empty((p + 2, p + 2))
    for i in range(1, p + 1):
        U[i - 1, :p] = s.shifted(i)
    U[:p, p] = -1.0
    U[:p, p + 1] = sq
    U[p, :p] = -1.0
    U[p, p] = p - 1.0
    U[p, p + 1] = sq
    U[p + 1, :p + 1] = sq
    U[p + 1, p + 1] = 1.0
    return U / p


def _eigenvalue_diag(s: Spectrum, i: int) -> np.ndarray:
    p = s.p
    d = np.empty(p + 2)
    d[:p] = s.shifted(i)
    d[p] = -1.0
    d[p + 1] = p - 1.0
    return d


def structure_constants_spectral_all(ctx: PrimeContext, s: Spectrum,
                                     debug: bool = False) -> StructureTensorP:
    """All c(i,j,k) via the matrix identity T_i = U D_i U, computed for a
    single i (shift invariance supplies the rest) with classical matrix
    products and certified integer rounding.

    Debug mode recomputes a second i independently and cross-checks the
    shift-invariance reconstruction against it.
    """
    p = ctx.p
    while True:
        U = bordered_unitary(s)
        T_p = U @ np.diag(_eigenvalue_diag(s, p)) @ U
        block = T_p[:p, :p]  # |X_j| = |X_k| = p-1 there, so entries are c(p,j,k)
        rounded = np.rint(block)
        residual = float(np.abs(block - rounded).max())
        if residual < RESIDUAL_LIMIT and rounded.min() >= 0:
            break
        if s.precision_bits >= MAX_PRECISION_BITS:
            raise PrecisionError(
                f"tensor rounding residual {residual:.3g} at "
                f"{s.precision_bits} bits for p={p}")
        bits = (EXTENDED_PRECISION_BITS if s.precision_bits < EXTENDED_PRECISION_BITS
                else MAX_PRECISION_BITS)
        s = spectrum(ctx, precision_bits=bits)
    tensor = StructureTensorP(p=p, base=rounded.astype(np.int64),
                              origin="spectral")
    if debug:
        i2 = 1 if p > 1 else p
        T_1 = U @ np.diag(_eigenvalue_diag(s, i2)) @ U
        direct = np.rint(T_1[:p, :p]).astype(np.int64)
        if not np.array_equal(direct, tensor.block(i2)):
            raise AssertionError("shift-invariance reconstruction mismatch")
    return tensor


@dataclass(frozen=True)
class MomentCheck:
    lhs: float
    rhs: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return abs(self.lhs - self.rhs) <= self.tolerance


def third_moment_check(ctx: PrimeContext, s: Spectrum,
                       i: int, j: int, k: int,
                       tolerance: float = 1e-3) -> MomentCheck:
    """sum_l H(g^{i+l}) H(g^{j+l}) H(g^{k+l}) against p^2 (c(i,j,k) - 1) + 2p
    with c(i,j,k) obtained by exhaustive enumeration."""
    p, p2 = ctx.p, ctx.modulus
    lhs = float((s.shifted(i) * s.shifted(j) * s.shifted(k)).sum())
    cls = class_of_array(ctx)
    gi, gj, gk = (pow_mod(ctx.g, t, p2) for t in (i, j, k))
    c = sum(1 for a in range(1, p)
            if cls[(gk - pow_mod(a, p, p2) * gi) % p2] == j - 1)
    rhs = p * p * (c - 1) + 2 * p
    return MomentCheck(lhs=lhs, rhs=float(rhs), tolerance=tolerance)


# Correction = 1 + (p-1)^3 - p^2 * e where e counts the two border terms of
# sum_r |X_r| c(i,k,r) c(j,l,r): e = p-1 when i=k and j=l, e = 1 when i!=k
# and j!=l, and e = 0 in the mixed cases.
_FOURTH_MOMENT_CORRECTION = {
    (True, True): lambda p: -2 * p * p + 3 * p,
    (False, False): lambda p: p ** 3 - 4 * p * p + 3 * p,
    (True, False): lambda p: p ** 3 - 3 * p * p + 3 * p,
    (False, True): lambda p: p ** 3 - 3 * p * p + 3 * p,
}


def fourth_moment_check(ctx: PrimeContext, s: Spectrum,
                        tensor: StructureTensorP,
                        i: int, j: int, k: int, l: int,
                        tolerance: float = 1e-3) -> MomentCheck:
    """p^2 sum_r c(i,k,r) c(j,l,r) against the quartic spectral sum plus the
    case-dependent correction term."""
    p = ctx.p
    lhs = p * p * sum(tensor.c(i, k, r) * tensor.c(j, l, r)
                      for r in range(1, p + 1))
    quartic = float((s.shifted(i) * s.shifted(j)
                     * s.shifted(k) * s.shifted(l)).sum())
    correction = _FOURTH_MOMENT_CORRECTION[(i == k, j == l)](p)
    return MomentCheck(lhs=float(lhs), rhs=quartic + correction,
                       tolerance=tolerance)


def quartic_power_check(ctx: PrimeContext, s: Spectrum,
                        tensor: StructureTensorP, i: int | None = None,
                        tolerance: float = 1e-3) -> MomentCheck:
    """sum_l H^4(g^l) against p^2 sum_l c(i,i,l)^2 + 2p^2 - 3p."""
    p = ctx.p
    i = p if i is None else i
    lhs = float((s.values ** 4).sum())
    diag = tensor.diagonal(i).astype(np.int64)
    rhs = p * p * int((diag * diag).sum()) + 2 * p * p - 3 * p
    return MomentCheck(lhs=lhs, rhs=float(rhs), tolerance=tolerance)


@dataclass(frozen=True)
class DiagonalBoundReport:
    """Bounds on the diagonal coefficients c(i,i,k)."""

    p: int
    max_ciik: int
    max_bound: float
    diag_sum: int
    level_counts: dict[float, int]  # alpha -> #{k : c(i,i,k) >= p^alpha}

    @property
    def passed(self) -> bool:
        if self.max_ciik > self.max_bound or self.diag_sum != self.p - 2:
            return False
        return all(cnt < self.p ** (1.0 - alpha)
                   for alpha, cnt in self.level_counts.items())


def ciik_report(tensor: StructureTensorP,
                alphas: tuple[float, ...] = (0.25, 0.5)) -> DiagonalBoundReport:
    """max_k c(i,i,k) <= 44 p^(2/3), sum_k c(i,i,k) = p-2, and the level
    counts #{k : c(i,i,k) >= p^alpha} < p^(1-alpha)."""
    p = tensor.p
    diag = tensor.diagonal()
    return DiagonalBoundReport(
        p=p,
        max_ciik=int(diag.max()),
        max_bound=44.0 * p ** (2.0 / 3.0),
        diag_sum=int(diag.sum()),
        level_counts={a: int((diag >= p ** a).sum()) for a in alphas},
    )


def golden_table() -> list[tuple[int, int]]:
    """The embedded reference values of F(p;1,1,1) for the first 174 odd primes."""
    text = resources.files("heilbronn.data").joinpath("fermat_table.csv").read_text()
    rows = list(csv.DictReader(io.StringIO(text)))
    return [(int(r["p"]), int(r["F"])) for r in rows]


@dataclass(frozen=True)
class TableRow:
    p: int
    F: int
    golden: int | None
    match: bool


def fermat_table(p_max: int, strict: bool = True) -> list[TableRow]:
    """F(p;1,1,1) for all odd primes <= p_max via the spectral path, compared
    against the embedded reference table where it has entries."""
    golden = dict(golden_table())
    rows = []
    for p in odd_primes_upto(p_max):
        ctx = build_context(p)
        s = spectrum(ctx)
        F = fermat_F_spectral(ctx, s, 1, 1, 1).F
        ref = golden.get(p)
        ok = ref is None or F == ref
        rows.append(TableRow(p=p, F=F, golden=ref, match=ok))
        if strict and not ok:
            raise GoldenMismatch(f"F({p}) = {F}, reference says {ref}")
    return rows
