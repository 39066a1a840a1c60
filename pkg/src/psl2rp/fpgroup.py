"""PSL(2, p) as a concrete indexed group.

Elements are 2x2 determinant-one matrices over F_p taken modulo -I.  Each
coset is stored by a canonical representative whose first nonzero entry (in
the order a, b, c, d) lies in 1..(p-1)/2, and elements are indexed by the
lexicographic order of those tuples, except that the identity is moved to
index 0.
"""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .bits import ElementSet

log = logging.getLogger(__name__)

CACHE_VERSION = 1
DEFAULT_MAX_P = 101
DEFAULT_TABLE_THRESHOLD = 5000


class GroupError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int, allow_small: bool = False, max_p: int = DEFAULT_MAX_P) -> int:
    if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
        raise GroupError(f"p must be an integer, got {p!r}")
    p = int(p)
    if not is_prime(p):
        raise GroupError(f"p={p} is not prime")
    lower = 5 if allow_small else 7
    if p < lower:
        raise GroupError(f"p={p} is out of range: need a prime > 5")
    if p > max_p:
        raise GroupError(f"p={p} exceeds the configured ceiling {max_p}")
    return p


def canonical(a: int, b: int, c: int, d: int, p: int) -> tuple[int, int, int, int]:
    """Canonical representative of the class {M, -M}."""
    m = (a % p, b % p, c % p, d % p)
    half = (p - 1) // 2
    for x in m:
        if x:
            if x > half:
                return tuple((-y) % p for y in m)  # type: ignore[return-value]
            return m
    raise GroupError("zero matrix has no canonical form")


def _canonical_arrays(a, b, c, d, p):
    half = (p - 1) // 2
    # the first nonzero entry is a, or b when a = 0 (b c = -1 forces b != 0)
    flip = np.where(a != 0, a, b) > half
    return tuple(np.where(flip, (p - x) % p, x) for x in (a, b, c, d))


def _enumerate_canonical(p: int) -> np.ndarray:
    """All canonical det-1 tuples, sorted lexicographically, as an (N, 4) array."""
    rows = []
    r = np.arange(p, dtype=np.int64)
    inv = np.array([0] + [pow(int(x), p - 2, p) for x in range(1, p)], dtype=np.int64)
    # a != 0: d = (1 + b c) / a
    A, B, C = np.meshgrid(r[1:], r, r, indexing="ij")
    A, B, C = A.ravel(), B.ravel(), C.ravel()
    D = ((1 + B * C) * inv[A]) % p
    rows.append(np.stack([A, B, C, D], axis=1))
    # a == 0: b c = -1, d free
    B2, D2 = np.meshgrid(r[1:], r, indexing="ij")
    B2, D2 = B2.ravel(), D2.ravel()
    C2 = ((p - 1) * inv[B2]) % p
    rows.append(np.stack([np.zeros_like(B2), B2, C2, D2], axis=1))
    allm = np.concatenate(rows)
    a, b, c, d = _canonical_arrays(allm[:, 0], allm[:, 1], allm[:, 2], allm[:, 3], p)
    codes = np.unique(((a * p + b) * p + c) * p + d)
    ident = ((1 * p + 0) * p + 0) * p + 1
    codes = np.concatenate([[ident], codes[codes != ident]])
    out = np.empty((codes.size, 4), dtype=np.int64)
    rest = codes
    for k in (3, 2, 1, 0):
        out[:, k] = rest % p
        rest = rest // p
    return out


class PSL2:
    """The group PSL(2, p) with indexed elements.

    Multiplication works on index arrays (``mul_many``); a full product table
    is built only when the group order is at most ``table_threshold``.
    """

    def __init__(self, p: int, mats: np.ndarray, table_threshold: int = DEFAULT_TABLE_THRESHOLD,
                 inv: np.ndarray | None = None, orders: np.ndarray | None = None):
        self.p = p
        self.mats = np.ascontiguousarray(mats, dtype=np.int64)
        self.order = len(self.mats)
        self._a, self._b, self._c, self._d = (self.mats[:, k].copy() for k in range(4))
        self._mats32 = self.mats.astype(np.int32)
        self.codes = self._encode(self._a, self._b, self._c, self._d)
        if tuple(self.mats[0]) != (1, 0, 0, 1):
            raise GroupError("index 0 is not the identity")
        if np.any(np.diff(self.codes[1:]) <= 0):
            raise GroupError("element list is not strictly sorted")
        self.identity = 0
        # A det-1 matrix is determined by (a, b, c) when a != 0 and by
        # (0, b, d) otherwise; both M and -M are keyed so products need no
        # canonicalization before lookup.
        self._lookup = np.full(p ** 3, -1, dtype=np.int64)
        keys = self._key(self._a, self._b, self._c, self._d)
        neg = self._key(*((p - x) % p for x in (self._a, self._b, self._c, self._d)))
        if np.unique(np.concatenate([keys, neg])).size != 2 * self.order:
            raise GroupError("lookup keys are not unique")
        self._lookup[keys] = np.arange(self.order)
        self._lookup[neg] = np.arange(self.order)
        self.all = np.arange(self.order, dtype=np.int64)
        self._table: np.ndarray | None = None
        if self.order <= table_threshold:
            dtype = np.int16 if self.order < 2**15 else np.int32
            self._table = self.mul_many(self.all[:, None], self.all[None, :]).astype(dtype)
        if inv is None:
            inv = self.index_many((self._d, -self._b, -self._c, self._a))
        self.inv = np.asarray(inv, dtype=np.int64)
        self.elem_orders = self._compute_orders() if orders is None else np.asarray(orders, dtype=np.int64)
        self.classes, self.class_of = self._compute_classes()
        self.full = ElementSet((1 << self.order) - 1)

    # -- arithmetic ------------------------------------------------------

    def _encode(self, a, b, c, d):
        p = self.p
        return ((a * p + b) * p + c) * p + d

    def _key(self, a, b, c, d):
        p = self.p
        return (a * p + b) * p + np.where(a != 0, c, d)

    def index_many(self, entries, check: bool = False) -> np.ndarray:
        """Indices of matrices given as four entry arrays (assumed det 1)."""
        p = self.p
        a, b, c, d = (np.asarray(x, dtype=np.int64) % p for x in entries)
        idx = self._lookup[self._key(a, b, c, d)]
        if check:
            ca, cb, cc, cd = _canonical_arrays(a, b, c, d, p)
            if np.any(idx < 0) or np.any(self.codes[idx] != self._encode(ca, cb, cc, cd)):
                raise GroupError("matrix is not in SL(2, p)")
        return idx

    def index(self, m: Sequence[Sequence[int]] | Sequence[int]) -> int:
        """Index of a matrix given as ((a, b), (c, d)) or (a, b, c, d)."""
        flat = [int(x) for row in m for x in (row if isinstance(row, (list, tuple, np.ndarray)) else [row])]
        a, b, c, d = (x % self.p for x in flat)
        if (a * d - b * c) % self.p != 1:
            raise GroupError(f"determinant of {flat} is not 1 mod {self.p}")
        return int(self.index_many(([a], [b], [c], [d]), check=True)[0])

    def matrix(self, g: int) -> tuple[int, int, int, int]:
        return tuple(int(x) for x in self.mats[g])  # type: ignore[return-value]

    def mul_many(self, g, h) -> np.ndarray:
        g = np.asarray(g, dtype=np.int64)
        h = np.asarray(h, dtype=np.int64)
        if self._table is not None:
            return self._table[g, h].astype(np.int64)
        p = self.p
        m1 = self._mats32[g]
        m2 = self._mats32[h]
        a1, b1, c1, d1 = m1[..., 0], m1[..., 1], m1[..., 2], m1[..., 3]
        a2, b2, c2, d2 = m2[..., 0], m2[..., 1], m2[..., 2], m2[..., 3]
        a = (a1 * a2 + b1 * c2) % p
        b = (a1 * b2 + b1 * d2) % p
        key = (a * p + b) * p
        nz = a != 0
        key += np.where(nz, (c1 * a2 + d1 * c2) % p, (c1 * b2 + d1 * d2) % p)
        return self._lookup[key]

    def mul(self, g: int, h: int) -> int:
        if self._table is not None:
            return int(self._table[g, h])
        return int(self.mul_many(np.array([g]), np.array([h]))[0])

    def power(self, g: int, k: int) -> int:
        result, base = 0, int(g)
        if k < 0:
            base, k = int(self.inv[base]), -k
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def conj(self, g, h) -> np.ndarray:
        """h g h^-1, vectorized over broadcastable index arrays."""
        h = np.asarray(h, dtype=np.int64)
        return self.mul_many(self.mul_many(h, g), self.inv[h])

    def elem_order(self, g: int) -> int:
        return int(self.elem_orders[g])

    def _compute_orders(self) -> np.ndarray:
        orders = np.zeros(self.order, dtype=np.int64)
        orders[0] = 1
        cur = self.all.copy()
        k = 1
        pending = orders == 0
        while pending.any():
            if k > self.order:
                raise GroupError("element order computation did not terminate")
            hit = pending & (cur == 0)
            orders[hit] = k
            pending &= ~hit
            cur = self.mul_many(cur, self.all)
            k += 1
        return orders

    def _compute_classes(self):
        class_of = np.full(self.order, -1, dtype=np.int64)
        classes: list[np.ndarray] = []
        for g in range(self.order):
            if class_of[g] >= 0:
                continue
            orbit = np.unique(self.conj(g, self.all))
            class_of[orbit] = len(classes)
            classes.append(orbit)
        return classes, class_of

    # -- subgroups -------------------------------------------------------

    def closure(self, gens: Iterable[int], seed: ElementSet | None = None,
                limit: int | None = None) -> ElementSet | None:
        """Subgroup generated by ``gens`` (and ``seed`` if given).

        Frontier expansion by right multiplication with the generators.  With
        ``limit`` set, returns None as soon as the subgroup exceeds that size.
        ``seed`` must be a subgroup generated by a subset of ``gens``.
        """
        gens_arr = np.unique(np.fromiter((int(x) for x in gens), dtype=np.int64))
        gens_arr = gens_arr[gens_arr != 0]
        member = np.zeros(self.order, dtype=bool)
        if seed is not None:
            frontier = seed.indices()
        else:
            frontier = np.array([0], dtype=np.int64)
        member[frontier] = True
        member[0] = True
        count = int(member.sum())
        if gens_arr.size == 0:
            return ElementSet.from_mask(member)
        while frontier.size:
            new = self.mul_many(frontier[:, None], gens_arr[None, :]).ravel()
            new = np.unique(new[~member[new]])
            if new.size == 0:
                break
            member[new] = True
            count += new.size
            if limit is not None and count > limit:
                return None
            frontier = new
        return ElementSet.from_mask(member)

    def generates(self, gens: Iterable[int]) -> bool:
        """Closure-based generation test (no use of subgroup data)."""
        return self.closure(gens).size == self.order

    def conj_set(self, s: ElementSet, h: int) -> ElementSet:
        return ElementSet.from_indices(self.conj(s.indices(), h))

    def is_subgroup(self, s: ElementSet) -> bool:
        idx = s.indices()
        if 0 not in s:
            return False
        mask = np.zeros(self.order, dtype=bool)
        mask[idx] = True
        if not mask[self.inv[idx]].all():
            return False
        prod = self.mul_many(idx[:, None], idx[None, :])
        return bool(mask[prod].all())

    def centralizer(self, g: int) -> ElementSet:
        g = int(g)
        return ElementSet.from_mask(self.mul_many(self.all, g) == self.mul_many(g, self.all))

    def normalizer(self, s: ElementSet) -> ElementSet:
        idx = s.indices()
        # image of every element of s under conjugation by every h
        images = self.conj(idx[None, :], self.all[:, None])
        mask = np.zeros(self.order, dtype=bool)
        mask[idx] = True
        return ElementSet.from_mask(mask[images].all(axis=1))

    def conjugates(self, s: ElementSet) -> list[ElementSet]:
        """All distinct conjugates of ``s``, sorted by smallest member index."""
        idx = s.indices()
        images = np.sort(self.conj(idx[None, :], self.all[:, None]), axis=1)
        # np.unique orders rows lexicographically by sorted member indices
        return [ElementSet.from_indices(r) for r in np.unique(images, axis=0)]

    # -- persistence -----------------------------------------------------

    def save(self, path: os.PathLike | str) -> None:
        np.savez_compressed(
            path, version=np.int64(CACHE_VERSION), p=np.int64(self.p),
            elements=self.mats, inverse=self.inv, orders=self.elem_orders)


def _cache_file(cache_dir: os.PathLike | str, p: int) -> Path:
    return Path(cache_dir) / f"psl2_{p}_v{CACHE_VERSION}.npz"


def build_group(p: int, *, allow_small: bool = False, max_p: int = DEFAULT_MAX_P,
                table_threshold: int = DEFAULT_TABLE_THRESHOLD,
                cache_dir: os.PathLike | str | None = None) -> PSL2:
    """Build PSL(2, p); ``allow_small`` admits p = 5 for testing."""
    p = check_prime(p, allow_small=allow_small, max_p=max_p)
    if cache_dir is None:
        cache_dir = os.environ.get("PSL2RP_CACHE") or None
    mats = None
    if cache_dir is not None:
        f = _cache_file(cache_dir, p)
        if f.exists():
            with np.load(f) as data:
                if int(data["version"]) == CACHE_VERSION and int(data["p"]) == p:
                    mats = data["elements"]
                    cached_inv, cached_orders = data["inverse"], data["orders"]
            if mats is None:
                log.warning("ignoring stale cache file %s", f)
    if mats is None:
        group = PSL2(p, _enumerate_canonical(p), table_threshold)
        if cache_dir is not None:
            Path(cache_dir).mkdir(parents=True, exist_ok=True)
            group.save(_cache_file(cache_dir, p))
        return group
    if len(mats) != p * (p * p - 1) // 2:
        raise GroupError(f"cache for p={p} has the wrong number of elements")
    return PSL2(p, mats, table_threshold, inv=cached_inv, orders=cached_orders)
