"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from slicerank.tensor_core import Tensor, VariablePartition

COEFFS = [Fraction(n) for n in (-2, -1, 1, 2, 3)] + [Fraction(1, 2), Fraction(-3, 2)]


def random_tensor(rng: random.Random, max_dim: int = 3, density: float = 0.5,
                  unit: bool = False) -> Tensor:
    """A random sparse tensor with at least one entry."""
    nx = rng.randint(1, max_dim)
    ny = rng.randint(1, max_dim)
    nz = rng.randint(1, max_dim)
    entries = {}
    for i in range(nx):
        for j in range(ny):
            for k in range(nz):
                if rng.random() < density:
                    entries[(i, j, k)] = 1 if unit else rng.choice(COEFFS)
    if not entries:
        entries[(rng.randrange(nx), rng.randrange(ny), rng.randrange(nz))] = \
            1 if unit else rng.choice(COEFFS)
    return Tensor(range(nx), range(ny), range(nz), entries)


def random_symmetric_tensor(rng: random.Random, n: int) -> Tensor:
    """Random tensor on n vars per axis whose term set is rotation closed."""
    entries = {}
    for _ in range(rng.randint(1, 2 * n)):
        i, j, k = rng.randrange(n), rng.randrange(n), rng.randrange(n)
        c = rng.choice(COEFFS)
        for key in ((i, j, k), (j, k, i), (k, i, j)):
            entries[key] = c
    return Tensor(range(n), range(n), range(n), entries)


def random_index_partition(rng: random.Random, n: int):
    """Random ordered partition of range(n) into 1..n parts."""
    idx = list(range(n))
    rng.shuffle(idx)
    nparts = rng.randint(1, n)
    cuts = sorted(rng.sample(range(1, n), nparts - 1)) if nparts > 1 else []
    parts = []
    prev = 0
    for c in cuts + [n]:
        parts.append(sorted(idx[prev:c]))
        prev = c
    return parts


def random_partition(rng: random.Random, t: Tensor) -> VariablePartition:
    nx, ny, nz = t.shape
    return VariablePartition(
        [(str(i), p) for i, p in enumerate(random_index_partition(rng, nx))],
        [(str(i), p) for i, p in enumerate(random_index_partition(rng, ny))],
        [(str(i), p) for i, p in enumerate(random_index_partition(rng, nz))],
        sizes=t.shape,
    )


def shared_index_partition(rng: random.Random, t: Tensor) -> VariablePartition:
    """The same random index partition on all three axes (for symmetric tensors)."""
    n = t.shape[0]
    parts = [(str(i), p) for i, p in enumerate(random_index_partition(rng, n))]
    return VariablePartition(parts, list(parts), list(parts), sizes=t.shape)


def scramble(t: Tensor, rng: random.Random) -> Tensor:
    """Relabel/permute the variables of each axis uniformly at random."""
    nx, ny, nz = t.shape
    px = list(range(nx))
    py = list(range(ny))
    pz = list(range(nz))
    rng.shuffle(px)
    rng.shuffle(py)
    rng.shuffle(pz)
    inv = [{old: new for new, old in enumerate(perm)} for perm in (px, py, pz)]
    return Tensor(
        [t.x_labels[i] for i in px],
        [t.y_labels[j] for j in py],
        [t.z_labels[k] for k in pz],
        {(inv[0][i], inv[1][j], inv[2][k]): c for (i, j, k), c in t.entries.items()},
    )


def gauss_rank(rows) -> int:
    """Plain fraction Gaussian elimination; independent of the Bareiss path."""
    m = [list(map(Fraction, row)) for row in rows if any(row)]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, len(m)):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = Fraction(1) / m[row][col]
        m[row] = [v * inv for v in m[row]]
        for r in range(len(m)):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [v - f * w for v, w in zip(m[r], m[row])]
        row += 1
        rank += 1
        if row == len(m):
            break
    return rank


def flattening_dense(t: Tensor, axis: str):
    """Dense flattening rows built directly from the definition."""
    nx, ny, nz = t.shape
    if axis == "x":
        rows = [[Fraction(0)] * (ny * nz) for _ in range(nx)]
        for (i, j, k), c in t.entries.items():
            rows[i][j * nz + k] = c
    elif axis == "y":
        rows = [[Fraction(0)] * (nz * nx) for _ in range(ny)]
        for (i, j, k), c in t.entries.items():
            rows[j][k * nx + i] = c
    else:
        rows = [[Fraction(0)] * (nx * ny) for _ in range(nz)]
        for (i, j, k), c in t.entries.items():
            rows[k][i * ny + j] = c
    return rows


def oracle_rank(t: Tensor, axis: str) -> int:
    return gauss_rank(flattening_dense(t, axis))
