"""Exact modular arithmetic mod p and p**2: modexp, primitive roots,
discrete logs, and the truncated logarithm with its level sets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# Dense dlog tables get large quadratically; keep p at desk scale.
MAX_PRIME = 1 << 20


class InvalidInput(ValueError):
    """Raised when an argument violates a documented precondition."""


def pow_mod(base: int, exponent: int, modulus: int) -> int:
    """base**exponent mod modulus by square-and-multiply."""
    if modulus < 2:
        raise InvalidInput(f"modulus must be >= 2, got {modulus}")
    if exponent < 0:
        raise InvalidInput("exponent must be nonnegative")
    result = 1
    base %= modulus
    while exponent:
        if exponent & 1:
            result = result * base % modulus
        base = base * base % modulus
        exponent >>= 1
    return result


def is_odd_prime(n: int) -> bool:
    """Deterministic trial division; intended for desk-scale n."""
    if n < 3 or n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _check_odd_prime(p: int) -> None:
    if not is_odd_prime(p):
        raise InvalidInput(f"{p} is not an odd prime")
    if p > MAX_PRIME:
        raise InvalidInput(f"p = {p} exceeds supported cap {MAX_PRIME}")


def _is_primitive_root_mod_p(g: int, p: int) -> bool:
    order = p - 1
    for q in _prime_factors(order):
        if pow_mod(g, order // q, p) == 1:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def primitive_roots_mod_p2(p: int, count: int = 1) -> list[int]:
    """First `count` primitive roots mod p**2, in deterministic search order.

    Candidates are the primitive roots h mod p in increasing order; each is
    kept if h**(p-1) != 1 mod p**2 and replaced by h + p otherwise (the lift
    always has full order p(p-1)).  If that pool is too small (only p = 3),
    further lifts h + k*p are used: among the p lifts of a primitive root
    mod p, every one except a single exception has full order mod p**2.
    """
    _check_odd_prime(p)
    p2 = p * p
    roots: list[int] = []
    base_roots = [h for h in range(2, p) if _is_primitive_root_mod_p(h, p)]
    for h in base_roots:
        g = h if pow_mod(h, p - 1, p2) != 1 else h + p
        roots.append(g)
        if len(roots) == count:
            return roots
    for k in range(1, p):
        for h in base_roots:
            g = h + k * p
            if g in roots or pow_mod(g, p - 1, p2) == 1:
                continue
            roots.append(g)
            if len(roots) == count:
                return roots
    raise InvalidInput(f"fewer than {count} primitive roots found for p={p}")


def primitive_root_mod_p2(p: int) -> int:
    """Smallest-candidate primitive root mod p**2 (order p(p-1))."""
    return primitive_roots_mod_p2(p, 1)[0]


@dataclass(frozen=True)
class PrimeContext:
    """A prime p with modulus p**2, a fixed primitive root g, and a dense
    discrete-log table for the units mod p**2.

    dlog[u] is the exponent in {1, ..., p(p-1)} with g**dlog[u] == u for
    units u; 0 marks non-units.  Immutable after construction.
    """

    p: int
    modulus: int
    g: int
    dlog: list[int] = field(repr=False)

    def dlog_of(self, u: int) -> int:
        e = self.dlog[u % self.modulus]
        if e == 0:
            raise InvalidInput(f"{u} is not a unit mod {self.modulus}")
        return e

    def class_index(self, u: int) -> int:
        """Superclass index in 1..p of a unit u (dlog mod p, p for 0)."""
        e = self.dlog_of(u) % self.p
        return e if e != 0 else self.p


def build_context(p: int, g: int | None = None) -> PrimeContext:
    """PrimeContext with a complete dlog table; O(p**2) time and space."""
    _check_odd_prime(p)
    p2 = p * p
    if g is None:
        g = primitive_root_mod_p2(p)
    order = p * (p - 1)
    dlog = [0] * p2
    x = 1
    for e in range(1, order + 1):
        x = x * g % p2
        if dlog[x] != 0:
            raise InvalidInput(f"g = {g} does not have order {order} mod {p2}")
        dlog[x] = e
    return PrimeContext(p=p, modulus=p2, g=g, dlog=dlog)


def _trunc_log_poly(p: int, u: int) -> int:
    # Horner evaluation of u + u^2/2 + ... + u^(p-1)/(p-1) mod p:
    # L(u) = u*(inv(1) + u*(inv(2) + u*(... + u*inv(p-1))))
    u %= p
    acc = 0
    for k in range(p - 1, 0, -1):
        inv_k = pow_mod(k, p - 2, p)
        acc = (acc * u + inv_k) % p
    return acc * u % p


def truncated_log(p: int, u: int) -> int:
    """L_p(u) = u + u^2/2 + ... + u^(p-1)/(p-1) mod p, for p not dividing u."""
    _check_odd_prime(p)
    if u % p == 0:
        raise InvalidInput(f"p = {p} divides u = {u}")
    return _trunc_log_poly(p, u)


@dataclass(frozen=True)
class TruncatedLogTable:
    """Values of L_p on units mod p and the level sets N_r over {2,...,p}."""

    p: int
    values: dict[int, int]
    level_sets: dict[int, list[int]]
    max_level_size: int


def log_level_sets(p: int) -> TruncatedLogTable:
    """Tabulate L_p and its level sets N_r = {2 <= x <= p : L_p(x) == r}."""
    _check_odd_prime(p)
    values = {u: _trunc_log_poly(p, u) for u in range(1, p)}
    level_sets: dict[int, list[int]] = {}
    for x in range(2, p + 1):
        r = values[x] if x < p else 0  # x = p reduces to 0, where L_p vanishes
        level_sets.setdefault(r, []).append(x)
    max_size = max(len(s) for s in level_sets.values())
    bound = 44.0 * p ** (2.0 / 3.0)
    if max_size > bound:
        raise AssertionError(
            f"level-set bound violated at p={p}: {max_size} > {bound:.3f}"
        )
    return TruncatedLogTable(p=p, values=values, level_sets=level_sets,
                             max_level_size=max_size)


def odd_primes_upto(n: int) -> list[int]:
    """Odd primes <= n by sieve."""
    if n < 3:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for d in range(2, int(math.isqrt(n)) + 1):
        if sieve[d]:
            sieve[d * d:: d] = bytearray(len(sieve[d * d:: d]))
    return [i for i in range(3, n + 1, 2) if sieve[i]]
