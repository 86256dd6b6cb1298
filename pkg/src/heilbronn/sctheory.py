"""Generic supercharacter engine for unit-subgroup actions on Z/nZ:
orbits, character values, the symmetric unitary matrix U, structure
constants by enumeration, and the T_i matrices diagonalized by U."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .modarith import InvalidInput


@dataclass(frozen=True)
class UnitAction:
    """A subgroup A of (Z/nZ)* given by generators, acting by multiplication."""

    n: int
    generators: tuple[int, ...]

    def __post_init__(self):
        if self.n < 2:
            raise InvalidInput(f"modulus must be >= 2, got {self.n}")
        for g in self.generators:
            if math.gcd(g, self.n) != 1:
                raise InvalidInput(f"generator {g} is not a unit mod {self.n}")

    def subgroup(self) -> list[int]:
        """Elements of A by closure under multiplication; sorted."""
        elems = {1 % self.n}
        frontier = [1 % self.n]
        while frontier:
            x = frontier.pop()
            for g in self.generators:
                y = x * g % self.n
                if y not in elems:
                    elems.add(y)
                    frontier.append(y)
        return sorted(elems)


@dataclass(frozen=True)
class SuperclassPartition:
    """Orbits X_1..X_N of A on Z/nZ, with sizes and a residue -> class map.

    Class indices are 1-based throughout, matching the usual labeling.
    """

    n: int
    classes: tuple[tuple[int, ...], ...]
    class_of: list[int] = field(repr=False)

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def size(self, i: int) -> int:
        return len(self.classes[i - 1])

    def representative(self, i: int) -> int:
        return self.classes[i - 1][0]


def superclasses(action: UnitAction,
                 ordered_classes: list[list[int]] | None = None) -> SuperclassPartition:
    """Orbit partition of Z/nZ under multiplication by A.

    Default order: increasing minimal representative, zero class last.
    `ordered_classes` overrides the ordering (used by the Heilbronn layer
    to follow the X_1..X_{p+2} labeling); it must be the same partition.
    """
    n = action.n
    subgroup = action.subgroup()
    class_of = [0] * n
    classes: list[tuple[int, ...]] = []
    for x in range(1, n):
        if class_of[x]:
            continue
        orbit = sorted({x * a % n for a in subgroup})
        classes.append(tuple(orbit))
        idx = len(classes)
        for y in orbit:
            class_of[y] = idx
    classes.append((0,))
    class_of[0] = len(classes)

    if ordered_classes is not None:
        relabeled = [tuple(sorted(c)) for c in ordered_classes]
        if sorted(relabeled) != sorted(classes):
            raise InvalidInput("ordered_classes is not the orbit partition")
        classes = relabeled
        for idx, orbit in enumerate(classes, start=1):
            for y in orbit:
                class_of[y] = idx
    return SuperclassPartition(n=n, classes=tuple(classes), class_of=class_of)


def supercharacter_value(partition: SuperclassPartition, i: int, j: int,
                         debug: bool = False) -> complex:
    """sigma_i(X_j) = sum over x in X_i of e(x*y/n), y any element of X_j."""
    N = partition.num_classes
    if not (1 <= i <= N and 1 <= j <= N):
        raise IndexError(f"class index out of range: ({i},{j}) with N={N}")
    n = partition.n
    xs = np.array(partition.classes[i - 1])
    reps = partition.classes[j - 1] if debug else partition.classes[j - 1][:1]
    vals = [np.exp(2j * np.pi * ((xs * y) % n) / n).sum() for y in reps]
    if debug:
        assert max(abs(v - vals[0]) for v in vals) < 1e-9 * len(xs)
    return complex(vals[0])


@dataclass(frozen=True)
class SupercharacterMatrices:
    """sigma table, the symmetric unitary U, and the eigenvalue diagonals."""

    partition: SuperclassPartition
    sigma: np.ndarray  # complex, sigma[i-1, j-1] = sigma_i(X_j)
    U: np.ndarray

    def D(self, i: int) -> np.ndarray:
        return np.diag(self.sigma[i - 1])


def build_U(partition: SuperclassPartition) -> SupercharacterMatrices:
    """U[i,j] = sigma_i(X_j) * sqrt(|X_j|) / (sqrt(n) * sqrt(|X_i|))."""
    N = partition.num_classes
    n = partition.n
    sigma = np.empty((N, N), dtype=complex)
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            sigma[i - 1, j - 1] = supercharacter_value(partition, i, j)
    sizes = np.array([partition.size(i) for i in range(1, N + 1)], dtype=float)
    U = sigma * np.sqrt(sizes)[None, :] / (np.sqrt(n) * np.sqrt(sizes)[:, None])
    return SupercharacterMatrices(partition=partition, sigma=sigma, U=U)


@dataclass(frozen=True)
class StructureTensor:
    """Nonnegative integers c(i,j,k): pair counts x+y == z with x in X_i,
    y in X_j, z a fixed representative of X_k."""

    N: int
    c: np.ndarray  # int64, shape (N, N, N), 0-based internally
    origin: str  # "enumeration" | "spectral"

    def __call__(self, i: int, j: int, k: int) -> int:
        return int(self.c[i - 1, j - 1, k - 1])


def structure_constants_enumerated(partition: SuperclassPartition,
                                   i: int, j: int, k: int,
                                   debug: bool = False) -> int:
    """Count pairs (x,y) in X_i x X_j with x + y == z mod n, z the minimal
    representative of X_k.  Debug mode re-counts with a second representative."""
    n = partition.n
    reps = partition.classes[k - 1]
    class_of = partition.class_of

    def count(z: int) -> int:
        return sum(1 for x in partition.classes[i - 1]
                   if class_of[(z - x) % n] == j)

    c = count(reps[0])
    if debug and len(reps) > 1:
        assert count(reps[1]) == c, "structure constant depends on representative"
    return c


def structure_tensor_enumerated(partition: SuperclassPartition) -> StructureTensor:
    """Full tensor by exhaustive counting, O(N * n) per representative choice."""
    n = partition.n
    N = partition.num_classes
    class_of = partition.class_of
    c = np.zeros((N, N, N), dtype=np.int64)
    for k in range(1, N + 1):
        z = partition.representative(k)
        for x in range(n):
            c[class_of[x] - 1, class_of[(z - x) % n] - 1, k - 1] += 1
    return StructureTensor(N=N, c=c, origin="enumeration")


def build_T(partition: SuperclassPartition, tensor: StructureTensor,
            i: int) -> np.ndarray:
    """[T_i]_{j,k} = c(i,j,k) * sqrt(|X_k|) / sqrt(|X_j|)."""
    N = partition.num_classes
    sizes = np.array([partition.size(m) for m in range(1, N + 1)], dtype=float)
    return tensor.c[i - 1] * np.sqrt(sizes)[None, :] / np.sqrt(sizes)[:, None]


def ramanujan_sum(n: int, x: int) -> complex:
    """Classical Ramanujan sum c_n(x) by direct summation over units mod n."""
    return sum(np.exp(2j * np.pi * j * x / n)
               for j in range(1, n + 1) if math.gcd(j, n) == 1)
