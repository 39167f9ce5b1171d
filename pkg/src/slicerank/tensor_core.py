"""Exact sparse 3-tensors (trilinear forms) over the rationals.

A tensor lives over three ordered variable lists X, Y, Z and is stored as a
sparse map from index triples (i, j, k) to nonzero Fraction coefficients.
Tensors are immutable after construction: every operation returns a new
tensor, so values can be shared freely across threads.

Besides the generic algebra (product, direct sum, rotation, addition) this
module provides the standard structured families used in matrix
multiplication exponent work -- matrix multiplication tensors <a,b,c>,
independent (diagonal) tensors <q>, Coppersmith-Winograd tensors CW_q and
cw_q with an optional permutation twist, cyclic group tensors and their
lower triangular part, and the t_112 tensor -- together with their
conventional variable partitions.

Convention: the cyclic family constructors index the z axis so that the
term set is invariant under rotating the three axes.  This is an
isomorphic relabeling of the usual presentation (see the constructor
docstrings) and makes the rotation symmetry of these tensors visible to
the positional `is_variable_symmetric` check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

Entry = tuple[int, int, int]

AXES = ("x", "y", "z")

# Tensor powers are materialized eagerly; this cap keeps an accidental
# T**n from exhausting memory.  Asymptotic statements never need powers.
DEFAULT_POWER_CAP = 3


@dataclass(frozen=True)
class RankFact:
    """An externally asserted asymptotic rank value with its provenance.

    `exact` False means the value is only a lower bound on the asymptotic
    rank (still usable in exponent bounds, which are monotone in it).
    """

    value: int
    exact: bool
    source: str


class Tensor:
    """Sparse trilinear form with exact rational coefficients.

    `x_labels`, `y_labels`, `z_labels` are the ordered variable lists;
    entries map positional index triples to nonzero coefficients.
    """

    __slots__ = ("x_labels", "y_labels", "z_labels", "entries", "meta")

    def __init__(self, x_labels, y_labels, z_labels, entries, meta=None):
        x_labels = tuple(x_labels)
        y_labels = tuple(y_labels)
        z_labels = tuple(z_labels)
        for name, labels in (("x", x_labels), ("y", y_labels), ("z", z_labels)):
            if len(set(labels)) != len(labels):
                raise ValueError(f"duplicate {name} variable labels")
        clean = {}
        nx, ny, nz = len(x_labels), len(y_labels), len(z_labels)
        for (i, j, k), c in entries.items():
            c = Fraction(c)
            if c == 0:
                continue
            if not (0 <= i < nx and 0 <= j < ny and 0 <= k < nz):
                raise ValueError(f"entry index {(i, j, k)} out of range")
            clean[(int(i), int(j), int(k))] = c
        object.__setattr__(self, "x_labels", x_labels)
        object.__setattr__(self, "y_labels", y_labels)
        object.__setattr__(self, "z_labels", z_labels)
        object.__setattr__(self, "entries", clean)
        object.__setattr__(self, "meta", dict(meta) if meta else {})

    def __setattr__(self, name, value):
        raise AttributeError("Tensor is immutable")

    # -- basic views ------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int, int]:
        return (len(self.x_labels), len(self.y_labels), len(self.z_labels))

    def labels(self, axis: str):
        return {"x": self.x_labels, "y": self.y_labels, "z": self.z_labels}[axis]

    def coefficient(self, i: int, j: int, k: int) -> Fraction:
        return self.entries.get((i, j, k), Fraction(0))

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return (
            self.x_labels == other.x_labels
            and self.y_labels == other.y_labels
            and self.z_labels == other.z_labels
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash(
            (self.x_labels, self.y_labels, self.z_labels, frozenset(self.entries.items()))
        )

    def __repr__(self):
        nx, ny, nz = self.shape
        return f"Tensor({nx}x{ny}x{nz}, {len(self.entries)} entries)"

    def label_form(self) -> dict:
        """The form as a map (x label, y label, z label) -> coefficient."""
        return {
            (self.x_labels[i], self.y_labels[j], self.z_labels[k]): c
            for (i, j, k), c in self.entries.items()
        }

    def used_indices(self, axis: str) -> set[int]:
        pos = AXES.index(axis)
        return {e[pos] for e in self.entries}

    def rank_fact(self) -> Optional[RankFact]:
        return self.meta.get("asymptotic_rank")


def is_minimal(t: Tensor) -> bool:
    """True when every variable of every axis occurs in some entry."""
    nx, ny, nz = t.shape
    return (
        len(t.used_indices("x")) == nx
        and len(t.used_indices("y")) == ny
        and len(t.used_indices("z")) == nz
    )


def trimmed(t: Tensor) -> Tensor:
    """Drop unused variables so the result is minimal for its axes."""
    if is_minimal(t):
        return t
    keep = [sorted(t.used_indices(ax)) for ax in AXES]
    remap = [{old: new for new, old in enumerate(kp)} for kp in keep]
    return Tensor(
        [t.x_labels[i] for i in keep[0]],
        [t.y_labels[j] for j in keep[1]],
        [t.z_labels[k] for k in keep[2]],
        {
            (remap[0][i], remap[1][j], remap[2][k]): c
            for (i, j, k), c in t.entries.items()
        },
        meta=t.meta,
    )


# -- constructors ---------------------------------------------------------


def make_matmul(a: int, b: int, c: int) -> Tensor:
    """The matrix multiplication tensor <a,b,c> = sum x_ij y_jk z_ki."""
    if min(a, b, c) < 1:
        raise ValueError("matmul dimensions must be positive")
    x = [(i, j) for i in range(a) for j in range(b)]
    y = [(j, k) for j in range(b) for k in range(c)]
    z = [(k, i) for k in range(c) for i in range(a)]
    entries = {}
    for i in range(a):
        for j in range(b):
            for k in range(c):
                entries[(i * b + j, j * c + k, k * a + i)] = 1
    return Tensor(x, y, z, entries, meta={"family": "matmul", "dims": (a, b, c)})


def make_independent(q: int) -> Tensor:
    """The independent (diagonal) tensor <q> = sum_i x_i y_i z_i."""
    if q < 1:
        raise ValueError("q must be positive")
    idx = list(range(q))
    return Tensor(idx, idx, idx, {(i, i, i): 1 for i in idx},
                  meta={"family": "independent", "q": q})


def _check_permutation(q: int, sigma) -> tuple[int, ...]:
    if sigma is None:
        return tuple(range(1, q + 1))
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(1, q + 1)):
        raise ValueError(f"sigma must be a permutation of 1..{q}")
    return sigma


def make_cw(q: int, sigma: Optional[Sequence[int]] = None) -> Tensor:
    """Coppersmith-Winograd tensor CW_{q,sigma} on q+2 variables per axis.

    x_0 y_0 z_{q+1} + x_0 y_{q+1} z_0 + x_{q+1} y_0 z_0
      + sum_{i=1..q} (x_i y_{sigma(i)} z_0 + x_i y_0 z_i + x_0 y_i z_i)

    The default sigma is the identity, giving the classical CW_q.  The
    asymptotic rank q+2 is recorded as asserted metadata, not computed.
    """
    if q < 0:
        raise ValueError("q must be nonnegative")
    sigma = _check_permutation(q, sigma)
    n = q + 2
    idx = list(range(n))
    entries = {(0, 0, q + 1): 1, (0, q + 1, 0): 1, (q + 1, 0, 0): 1}
    for i in range(1, q + 1):
        entries[(i, sigma[i - 1], 0)] = 1
        entries[(i, 0, i)] = 1
        entries[(0, i, i)] = 1
    return Tensor(idx, idx, idx, entries, meta={
        "family": "CW", "q": q, "sigma": sigma,
        "asymptotic_rank": RankFact(q + 2, True,
                                    "CW border rank construction (1990) with matching flattening lower bound"),
    })


def make_cw_small(q: int, sigma: Optional[Sequence[int]] = None) -> Tensor:
    """Simple Coppersmith-Winograd tensor cw_{q,sigma} (no corner terms):

    sum_{i=1..q} (x_i y_{sigma(i)} z_0 + x_i y_0 z_i + x_0 y_i z_i)
    """
    if q < 1:
        raise ValueError("q must be positive")
    sigma = _check_permutation(q, sigma)
    idx = list(range(q + 1))
    entries = {}
    for i in range(1, q + 1):
        entries[(i, sigma[i - 1], 0)] = 1
        entries[(i, 0, i)] = 1
        entries[(0, i, i)] = 1
    return Tensor(idx, idx, idx, entries, meta={
        "family": "cw", "q": q, "sigma": sigma,
        "asymptotic_rank": RankFact(q + 1, False, "x-flattening rank lower bound"),
    })


def make_cyclic(q: int) -> Tensor:
    """Structural tensor of the cyclic group C_q, in rotation-invariant form.

    Constructed as sum over i+j+k = q-1 (mod q) of x_i y_j z_k, which is
    the usual sum_{i,j} x_i y_j z_{i+j mod q} with the z axis relabeled by
    the reflection k -> q-1-k mod q.  The asymptotic rank q (group algebra
    diagonalization) is recorded as asserted metadata.
    """
    if q < 1:
        raise ValueError("q must be positive")
    idx = list(range(q))
    entries = {(i, j, (q - 1 - i - j) % q): 1 for i in range(q) for j in range(q)}
    return Tensor(idx, idx, idx, entries, meta={
        "family": "cyclic", "q": q,
        "asymptotic_rank": RankFact(q, True, "cyclic group algebra diagonalization"),
    })


def make_cyclic_lower(q: int) -> Tensor:
    """Lower triangular part of the cyclic group tensor, rotation-invariant form.

    Constructed as sum over i+j+k = q-1 (i,j,k >= 0) of x_i y_j z_k, i.e.
    the usual sum_{i+j <= q-1} x_i y_j z_{i+j} with z_k relabeled to
    z_{q-1-k}.  Shares the asserted asymptotic rank q of the full tensor.
    """
    if q < 1:
        raise ValueError("q must be positive")
    idx = list(range(q))
    entries = {
        (i, j, q - 1 - i - j): 1
        for i in range(q) for j in range(q - i)
    }
    return Tensor(idx, idx, idx, entries, meta={
        "family": "cyclic_lower", "q": q,
        "asymptotic_rank": RankFact(q, True, "restriction of the cyclic group tensor"),
    })


def make_t112(q: int) -> Tensor:
    """The t_112 tensor on 2q x-vars, 2q y-vars and q^2+2 z-vars:

    sum_i x_(i,0) y_(i,0) z_(0,q+1) + sum_k x_(0,k) y_(0,k) z_(q+1,0)
      + sum_{i,k} x_(i,0) y_(0,k) z_(i,k) + sum_{i,k} x_(0,k) y_(i,0) z_(i,k)
    """
    if q < 1:
        raise ValueError("q must be positive")
    xy = [(i, 0) for i in range(1, q + 1)] + [(0, k) for k in range(1, q + 1)]
    z = [(i, k) for i in range(1, q + 1) for k in range(1, q + 1)]
    z += [(0, q + 1), (q + 1, 0)]
    zpos = lambda i, k: (i - 1) * q + (k - 1)
    entries = {}
    for i in range(1, q + 1):
        entries[(i - 1, i - 1, q * q)] = 1            # x_(i,0) y_(i,0) z_(0,q+1)
    for k in range(1, q + 1):
        entries[(q + k - 1, q + k - 1, q * q + 1)] = 1  # x_(0,k) y_(0,k) z_(q+1,0)
    for i in range(1, q + 1):
        for k in range(1, q + 1):
            entries[(i - 1, q + k - 1, zpos(i, k))] = 1
            entries[(q + k - 1, i - 1, zpos(i, k))] = 1
    return Tensor(xy, xy, z, entries, meta={"family": "t112", "q": q})


# -- algebra --------------------------------------------------------------


def tensor_product(a: Tensor, b: Tensor) -> Tensor:
    """Tensor product; variables are pairs, ordered with `a`'s index major."""
    bx, by, bz = b.shape
    entries = {}
    for (i1, j1, k1), c1 in a.entries.items():
        for (i2, j2, k2), c2 in b.entries.items():
            key = (i1 * bx + i2, j1 * by + j2, k1 * bz + k2)
            prev = entries.get(key)
            entries[key] = c1 * c2 if prev is None else prev + c1 * c2
    return Tensor(
        [(p, q) for p in a.x_labels for q in b.x_labels],
        [(p, q) for p in a.y_labels for q in b.y_labels],
        [(p, q) for p in a.z_labels for q in b.z_labels],
        entries,
    )


def tensor_power(t: Tensor, n: int, cap: int = DEFAULT_POWER_CAP) -> Tensor:
    """n-th tensor power, refused above `cap` to bound memory."""
    if n < 1:
        raise ValueError("power must be >= 1")
    if n > cap:
        raise ValueError(
            f"tensor power {n} exceeds cap {cap}; raise cap explicitly if intended")
    out = t
    for _ in range(n - 1):
        out = tensor_product(out, t)
    return out


def direct_sum(a: Tensor, b: Tensor) -> Tensor:
    """Disjoint sum; labels are tagged (0, label) resp. (1, label)."""
    ax, ay, az = a.shape
    entries = {k: c for k, c in a.entries.items()}
    for (i, j, k), c in b.entries.items():
        entries[(ax + i, ay + j, az + k)] = c
    return Tensor(
        [(0, l) for l in a.x_labels] + [(1, l) for l in b.x_labels],
        [(0, l) for l in a.y_labels] + [(1, l) for l in b.y_labels],
        [(0, l) for l in a.z_labels] + [(1, l) for l in b.z_labels],
        entries,
    )


def n_copies(m: int, t: Tensor) -> Tensor:
    """Disjoint sum of m copies of t."""
    if m < 1:
        raise ValueError("m must be positive")
    nx, ny, nz = t.shape
    entries = {}
    for copy in range(m):
        for (i, j, k), c in t.entries.items():
            entries[(copy * nx + i, copy * ny + j, copy * nz + k)] = c
    return Tensor(
        [(copy, l) for copy in range(m) for l in t.x_labels],
        [(copy, l) for copy in range(m) for l in t.y_labels],
        [(copy, l) for copy in range(m) for l in t.z_labels],
        entries,
    )


def tensor_add(a: Tensor, b: Tensor) -> Tensor:
    """Coefficient-wise sum of two tensors over identical variable lists."""
    if (a.x_labels, a.y_labels, a.z_labels) != (b.x_labels, b.y_labels, b.z_labels):
        raise ValueError("tensor_add requires identical variable lists")
    entries = dict(a.entries)
    for key, c in b.entries.items():
        s = entries.get(key, Fraction(0)) + c
        if s == 0:
            entries.pop(key, None)
        else:
            entries[key] = s
    return Tensor(a.x_labels, a.y_labels, a.z_labels, entries)


def rotate(t: Tensor) -> Tensor:
    """Rotation: the coefficient of y_j z_k x_i in rot(T) is that of x_i y_j z_k."""
    return Tensor(
        t.y_labels, t.z_labels, t.x_labels,
        {(j, k, i): c for (i, j, k), c in t.entries.items()},
        meta=t.meta,
    )


def symmetric_cube(t: Tensor) -> Tensor:
    """T (x) rot(T) (x) rot(rot(T)), ordered to be rotation symmetric.

    Each axis of the result is the full product X x Y x Z of the three
    axes of T; on every axis the variables are listed by their
    (x-component, y-component, z-component) triple in lexicographic
    order.  Under this alignment the result passes the positional
    `is_variable_symmetric` check for every input tensor.  (The plain
    `tensor_product` ordering does not: its y axis is ordered
    (y, z, x)-major.)
    """
    nx, ny, nz = t.shape
    flat = lambda a, b, c: (a * ny + b) * nz + c
    labels = [
        (t.x_labels[a], t.y_labels[b], t.z_labels[c])
        for a in range(nx) for b in range(ny) for c in range(nz)
    ]
    entries = {}
    items = list(t.entries.items())
    for (i1, j1, k1), c1 in items:
        for (i2, j2, k2), c2 in items:
            c12 = c1 * c2
            for (i3, j3, k3), c3 in items:
                key = (flat(i1, j2, k3), flat(i3, j1, k2), flat(i2, j3, k1))
                prev = entries.get(key)
                entries[key] = c12 * c3 if prev is None else prev + c12 * c3
    return Tensor(labels, list(labels), list(labels), entries)


# -- symmetry predicates --------------------------------------------------


def is_variable_symmetric(t: Tensor) -> bool:
    """Equal axis sizes and coefficient(i,j,k) == coefficient(j,k,i).

    This is a positional check under the constructor's index order, not a
    search over relabelings; isomorphism testing in general is out of
    scope.
    """
    nx, ny, nz = t.shape
    if not (nx == ny == nz):
        return False
    return all(t.coefficient(j, k, i) == c for (i, j, k), c in t.entries.items())


# -- partitions and blocks ------------------------------------------------


class VariablePartition:
    """A partition of each axis into labeled, ordered parts.

    Each part is (label, indices); indices are stored sorted.  Parts must
    be nonempty, disjoint, and cover 0..n-1 for the axis sizes given.
    """

    __slots__ = ("parts_x", "parts_y", "parts_z", "sizes")

    def __init__(self, parts_x, parts_y, parts_z, sizes):
        def normalize(parts, n, axis):
            out = []
            seen = set()
            for label, idx in parts:
                idx = tuple(sorted(int(i) for i in idx))
                if not idx:
                    raise ValueError(f"empty part {label!r} on axis {axis}")
                for i in idx:
                    if not 0 <= i < n:
                        raise ValueError(f"index {i} out of range on axis {axis}")
                    if i in seen:
                        raise ValueError(f"index {i} in two parts on axis {axis}")
                    seen.add(i)
                out.append((str(label), idx))
            if len(seen) != n:
                raise ValueError(f"parts do not cover axis {axis}")
            return tuple(out)

        nx, ny, nz = sizes
        object.__setattr__(self, "sizes", (nx, ny, nz))
        object.__setattr__(self, "parts_x", normalize(parts_x, nx, "x"))
        object.__setattr__(self, "parts_y", normalize(parts_y, ny, "y"))
        object.__setattr__(self, "parts_z", normalize(parts_z, nz, "z"))

    def __setattr__(self, name, value):
        raise AttributeError("VariablePartition is immutable")

    def parts(self, axis: str):
        return {"x": self.parts_x, "y": self.parts_y, "z": self.parts_z}[axis]

    def part_sizes(self, axis: str) -> list[int]:
        return [len(idx) for _, idx in self.parts(axis)]

    def part_count(self, axis: str) -> int:
        return len(self.parts(axis))

    def index_to_part(self, axis: str) -> dict[int, int]:
        out = {}
        for p, (_, idx) in enumerate(self.parts(axis)):
            for i in idx:
                out[i] = p
        return out

    def __eq__(self, other):
        if not isinstance(other, VariablePartition):
            return NotImplemented
        return (self.sizes == other.sizes and self.parts_x == other.parts_x
                and self.parts_y == other.parts_y and self.parts_z == other.parts_z)

    def __repr__(self):
        kx, ky, kz = (len(self.parts_x), len(self.parts_y), len(self.parts_z))
        return f"VariablePartition({kx}/{ky}/{kz} parts, sizes {self.sizes})"


def trivial_partition(t: Tensor) -> VariablePartition:
    """One part per axis."""
    nx, ny, nz = t.shape
    return VariablePartition(
        [("all", range(nx))], [("all", range(ny))], [("all", range(nz))],
        sizes=t.shape,
    )


def singleton_partition(t: Tensor) -> VariablePartition:
    """Every variable in its own part, parts ordered by position."""
    nx, ny, nz = t.shape
    return VariablePartition(
        [(str(i), (i,)) for i in range(nx)],
        [(str(j), (j,)) for j in range(ny)],
        [(str(k), (k,)) for k in range(nz)],
        sizes=t.shape,
    )


def cw_partition(q: int) -> VariablePartition:
    """Standard 0-indexed CW_q partition: {0}, {1..q}, {q+1} on each axis."""
    parts = [("0", (0,)), ("1", tuple(range(1, q + 1))), ("2", (q + 1,))]
    n = q + 2
    return VariablePartition(parts, list(parts), list(parts), sizes=(n, n, n))


def cw_small_partition(q: int) -> VariablePartition:
    """Standard cw_q partition: {0}, {1..q} on each axis."""
    parts = [("0", (0,)), ("1", tuple(range(1, q + 1)))]
    n = q + 1
    return VariablePartition(parts, list(parts), list(parts), sizes=(n, n, n))


def t112_partition(q: int) -> VariablePartition:
    """Standard t_112 partition: two x/y parts, three z parts."""
    half = [("0", tuple(range(q))), ("1", tuple(range(q, 2 * q)))]
    zparts = [("0", tuple(range(q * q))), ("1", (q * q,)), ("2", (q * q + 1,))]
    return VariablePartition(half, list(half), zparts,
                             sizes=(2 * q, 2 * q, q * q + 2))


def cube_partition(t: Tensor, p: VariablePartition) -> VariablePartition:
    """Product partition on symmetric_cube(t) induced by a partition of t.

    Parts on every cube axis are indexed by (x-part, y-part, z-part)
    triples of the base partition, in lexicographic order, matching the
    variable ordering used by `symmetric_cube`.
    """
    nx, ny, nz = t.shape
    if p.sizes != t.shape:
        raise ValueError("partition does not match tensor")
    flat = lambda a, b, c: (a * ny + b) * nz + c
    parts = []
    for lx, ix in p.parts_x:
        for ly, iy in p.parts_y:
            for lz, iz in p.parts_z:
                idx = [flat(a, b, c) for a in ix for b in iy for c in iz]
                parts.append((f"{lx},{ly},{lz}", idx))
    n = nx * ny * nz
    return VariablePartition(parts, list(parts), list(parts), sizes=(n, n, n))


class BlockSet:
    """The nonzero blocks of a tensor under a partition.

    `blocks` maps part index triples (i, j, k) to the restriction of the
    parent tensor to the corresponding parts, as a standalone tensor over
    those parts' variables (in part order).
    """

    __slots__ = ("tensor", "partition", "blocks")

    def __init__(self, tensor: Tensor, partition: VariablePartition, blocks):
        object.__setattr__(self, "tensor", tensor)
        object.__setattr__(self, "partition", partition)
        object.__setattr__(self, "blocks", dict(blocks))

    def __setattr__(self, name, value):
        raise AttributeError("BlockSet is immutable")

    def keys(self):
        return sorted(self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __getitem__(self, key) -> Tensor:
        return self.blocks[key]

    def part_sizes(self, axis: str) -> list[int]:
        return self.partition.part_sizes(axis)

    def __repr__(self):
        return f"BlockSet({len(self.blocks)} blocks of {self.tensor!r})"


def blocks(t: Tensor, p: VariablePartition) -> BlockSet:
    """Split t into its nonzero blocks under the partition p."""
    if p.sizes != t.shape:
        raise ValueError("partition sizes do not match tensor axes")
    to_part = [p.index_to_part(ax) for ax in AXES]
    within = []
    for ax_idx, ax in enumerate(AXES):
        pos = {}
        for _, idx in p.parts(ax):
            for w, i in enumerate(idx):
                pos[i] = w
        within.append(pos)
    buckets: dict[Entry, dict] = {}
    for (i, j, k), c in t.entries.items():
        key = (to_part[0][i], to_part[1][j], to_part[2][k])
        buckets.setdefault(key, {})[(within[0][i], within[1][j], within[2][k])] = c
    out = {}
    for key in sorted(buckets):
        bi, bj, bk = key
        out[key] = Tensor(
            [t.x_labels[i] for i in p.parts_x[bi][1]],
            [t.y_labels[j] for j in p.parts_y[bj][1]],
            [t.z_labels[k] for k in p.parts_z[bk][1]],
            buckets[key],
        )
    return BlockSet(t, p, out)


def split_by_blocks(t: Tensor, p: VariablePartition) -> dict:
    """The nonzero blocks as tensors over the parent's full variable lists.

    Unlike `blocks`, the returned tensors keep the ambient axes, so they
    sum (entrywise) to the parent tensor.
    """
    if p.sizes != t.shape:
        raise ValueError("partition sizes do not match tensor axes")
    to_part = [p.index_to_part(ax) for ax in AXES]
    buckets: dict[Entry, dict] = {}
    for (i, j, k), c in t.entries.items():
        key = (to_part[0][i], to_part[1][j], to_part[2][k])
        buckets.setdefault(key, {})[(i, j, k)] = c
    return {
        key: Tensor(t.x_labels, t.y_labels, t.z_labels, buckets[key])
        for key in sorted(buckets)
    }


def is_t_symmetric_partition(t: Tensor, p: VariablePartition) -> bool:
    """Whether p is a symmetric partition of the variable-symmetric t.

    Checks equal part counts, |X_i| = |Y_i| = |Z_i|, and that the block
    in position (j,k,i) is the rotation of the block in position (i,j,k)
    under the within-part index alignment.
    """
    if not is_variable_symmetric(t):
        return False
    if not (len(p.parts_x) == len(p.parts_y) == len(p.parts_z)):
        return False
    if not (p.part_sizes("x") == p.part_sizes("y") == p.part_sizes("z")):
        return False
    to_part = [p.index_to_part(ax) for ax in AXES]
    within = []
    for ax in AXES:
        pos = {}
        for _, idx in p.parts(ax):
            for w, i in enumerate(idx):
                pos[i] = w
        within.append(pos)
    # Rotated image of entry (a,b,c): x part j at b's slot, y part k at
    # c's slot, z part i at a's slot.  Compare as whole entry maps.
    rotated = {}
    for (a, b, c), coef in t.entries.items():
        i, j, k = to_part[0][a], to_part[1][b], to_part[2][c]
        wa, wb, wc = within[0][a], within[1][b], within[2][c]
        a2 = p.parts_x[j][1][wb]
        b2 = p.parts_y[k][1][wc]
        c2 = p.parts_z[i][1][wa]
        rotated[(a2, b2, c2)] = coef
    return rotated == t.entries


# -- text formats ---------------------------------------------------------


class ParseError(ValueError):
    """Input file syntax error; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _content_lines(text: str):
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line.split()


def parse_tensor(text: str) -> Tensor:
    """Parse the line-oriented tensor format.

    Header lines `xvars n`, `yvars n`, `zvars n` (any order, before the
    entries), then one entry per line: `i j k num/den` with 0-based
    indices.  `#` starts a comment.
    """
    sizes = {}
    entries = {}
    for n, toks in _content_lines(text):
        if toks[0] in ("xvars", "yvars", "zvars"):
            if len(toks) != 2:
                raise ParseError(n, f"malformed header {' '.join(toks)!r}")
            try:
                sizes[toks[0][0]] = int(toks[1])
            except ValueError:
                raise ParseError(n, f"bad variable count {toks[1]!r}")
            continue
        if len(sizes) != 3:
            raise ParseError(n, "entry before xvars/yvars/zvars headers")
        if len(toks) != 4:
            raise ParseError(n, f"expected 'i j k coeff', got {' '.join(toks)!r}")
        try:
            i, j, k = int(toks[0]), int(toks[1]), int(toks[2])
            c = Fraction(toks[3])
        except (ValueError, ZeroDivisionError):
            raise ParseError(n, f"bad entry {' '.join(toks)!r}")
        key = (i, j, k)
        if key in entries:
            raise ParseError(n, f"duplicate entry for {key}")
        for idx, ax in zip(key, "xyz"):
            if not 0 <= idx < sizes[ax]:
                raise ParseError(n, f"{ax} index {idx} out of range")
        entries[key] = c
    if len(sizes) != 3:
        raise ParseError(1, "missing xvars/yvars/zvars headers")
    return Tensor(range(sizes["x"]), range(sizes["y"]), range(sizes["z"]), entries)


def write_tensor(t: Tensor) -> str:
    nx, ny, nz = t.shape
    lines = [f"xvars {nx}", f"yvars {ny}", f"zvars {nz}"]
    for (i, j, k) in sorted(t.entries):
        c = t.entries[(i, j, k)]
        lines.append(f"{i} {j} {k} {c.numerator}/{c.denominator}")
    return "\n".join(lines) + "\n"


def parse_partition(text: str, sizes=None) -> VariablePartition:
    """Parse the partition format: one `axis label index index ...` per line.

    If `sizes` is omitted the axis sizes are taken to be the total index
    counts seen per axis.
    """
    parts = {"x": [], "y": [], "z": []}
    for n, toks in _content_lines(text):
        if toks[0] not in parts or len(toks) < 3:
            raise ParseError(n, f"expected 'axis label idx...', got {' '.join(toks)!r}")
        try:
            idx = [int(tok) for tok in toks[2:]]
        except ValueError:
            raise ParseError(n, f"bad index in {' '.join(toks)!r}")
        parts[toks[0]].append((toks[1], idx))
    if sizes is None:
        sizes = tuple(sum(len(idx) for _, idx in parts[ax]) for ax in AXES)
    try:
        return VariablePartition(parts["x"], parts["y"], parts["z"], sizes)
    except ValueError as exc:
        raise ParseError(1, str(exc))


def write_partition(p: VariablePartition) -> str:
    lines = []
    for ax in AXES:
        for label, idx in p.parts(ax):
            lines.append(f"{ax} {label} " + " ".join(str(i) for i in idx))
    return "\n".join(lines) + "\n"
