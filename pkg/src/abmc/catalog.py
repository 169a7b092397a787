"""Deterministic module/morphism catalogs and seeded samplers.

Universe generation for property sweeps: field-base group algebras get the
complete list of isomorphism-class representatives up to a dimension bound
(one canonical companion-block representative per multiset of prime-power
divisors of x^n - 1, the recorded normal form); integer-base algebras get
every canonical underlying group within the bounds crossed with exhaustively
enumerated small action matrices, deduplicated literally.  Every entry
carries its construction provenance.  Samplers draw from Hom groups and Ext
classes with an explicit seed; seed and bounds belong in every report.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .linalg import BaseRing, Mat
from .modules import (
    Algebra,
    Module,
    ModuleError,
    Morphism,
    SES,
    base_algebra,
    direct_sum,
    free_module,
    identity,
    zero_module,
)
from .homology import ext, hom_group, ses_of_class


@dataclass(frozen=True)
class CatalogEntry:
    module: Module
    provenance: str


@dataclass(frozen=True)
class CatalogBounds:
    max_dim: int = 4          # base dimension bound (field) / generator bound (Z)
    max_invariant: int = 4    # largest invariant factor (integer base)
    max_free_rank: int = 2    # free rank bound (integer base)
    entry_bound: int = 1      # |entry| bound for enumerated integer actions


# ---------------------------------------------------------------------------
# Field base: modules over F_p[x]/(x^n - 1) via elementary divisors
# ---------------------------------------------------------------------------


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _poly_mod(a, m, p):
    a = [x % p for x in a]
    dm = len(m) - 1
    inv = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < dm:
            break
        c = (a[-1] * inv) % p
        shift = len(a) - 1 - dm
        for i, x in enumerate(m):
            a[shift + i] = (a[shift + i] - c * x) % p
    while a and a[-1] == 0:
        a.pop()
    return a


def _monic_polys(p, deg):
    for code in range(p**deg):
        coeffs = []
        c = code
        for _ in range(deg):
            coeffs.append(c % p)
            c //= p
        yield coeffs + [1]


def _factor_xn_minus_1(n: int, p: int) -> list[tuple[tuple[int, ...], int]]:
    """Irreducible factorization of x^n - 1 over F_p by trial division."""
    rem = [(-1) % p] + [0] * (n - 1) + [1]
    factors = []
    deg = 1
    while len(rem) - 1 > 0:
        found = False
        for cand in _monic_polys(p, deg):
            if len(cand) - 1 > len(rem) - 1:
                break
            if not _poly_mod(rem, cand, p):
                e = 0
                while not _poly_mod(rem, cand, p):
                    rem = _poly_divide(rem, cand, p)
                    e += 1
                factors.append((tuple(cand), e))
                found = True
                break
        if not found:
            deg += 1
            if deg > n:
                raise ModuleError("factorization failed (internal)")
    return factors


def _poly_divide(a, b, p):
    a = [x % p for x in a]
    out = [0] * (len(a) - len(b) + 1)
    inv = pow(b[-1], p - 2, p)
    for shift in range(len(a) - len(b), -1, -1):
        c = (a[shift + len(b) - 1] * inv) % p
        out[shift] = c
        if c:
            for i, x in enumerate(b):
                a[shift + i] = (a[shift + i] - c * x) % p
    return out


def _companion(poly: Sequence[int], p: int) -> Mat:
    d = len(poly) - 1
    rows = [[0] * d for _ in range(d)]
    for i in range(1, d):
        rows[i][i - 1] = 1
    for i in range(d):
        rows[i][d - 1] = (-poly[i]) % p
    return Mat.from_rows(rows)


def _block_diag(mats: Sequence[Mat]) -> Mat:
    g = sum(m.rows for m in mats)
    ent = [0] * (g * g)
    off = 0
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                ent[(off + i) * g + (off + j)] = m[i, j]
        off += m.rows
    return Mat(g, g, tuple(ent))


def _cyclic_field_catalog(alg: Algebra, max_dim: int) -> list[CatalogEntry]:
    """All modules over F_p[C_n] of dimension <= max_dim, one per iso class.

    A module is an F_p[x]/(x^n - 1) module: a direct sum of companion blocks
    of prime-power divisors f^e | x^n - 1.  The multiset of blocks is the
    recorded normal form.
    """
    p = alg.base.p
    n = alg.rank
    gt = alg.group_table
    # identify the generator index: an element g with g-powers covering the basis
    gen_idx = None
    for i in range(n):
        seen = {gt["unit"]}
        x = gt["unit"]
        for _ in range(n):
            x = gt["op"][i][x]
            seen.add(x)
        if len(seen) == n:
            gen_idx = i
            break
    if gen_idx is None:
        raise ModuleError("catalog enumeration needs a cyclic group algebra")
    blocks = []
    for f, e in _factor_xn_minus_1(n, p):
        power = [1]
        for k in range(1, e + 1):
            power = _poly_mul(power, list(f), p)
            blocks.append((tuple(power), (len(f) - 1) * k, f"{_poly_name(f, p)}^{k}"))
    blocks.sort(key=lambda b: (b[1], b[0]))

    entries: list[CatalogEntry] = [CatalogEntry(zero_module(alg), "zero module")]
    multisets: list[list[int]] = [[]]
    # enumerate multisets of block indices with bounded total degree
    def rec(start: int, total: int, chosen: list[int]):
        for bi in range(start, len(blocks)):
            d = blocks[bi][1]
            if total + d > max_dim:
                continue
            chosen.append(bi)
            multisets.append(list(chosen))
            rec(bi, total + d, chosen)
            chosen.pop()

    rec(0, 0, [])
    for ms in multisets[1:]:
        gen_mat = _block_diag([_companion(blocks[bi][0], p) for bi in ms])
        g = gen_mat.rows
        # build all action matrices as powers of the generator matrix
        acts: list[Optional[Mat]] = [None] * n
        acts[gt["unit"]] = Mat.identity(g)
        x = gt["unit"]
        powm = Mat.identity(g)
        for _ in range(n - 1):
            x = gt["op"][gen_idx][x]
            powm = (powm @ gen_mat).reduce(alg.base)
            acts[x] = powm
        mod = Module(alg, (0,) * g, tuple(acts))
        name = " + ".join(blocks[bi][2] for bi in ms)
        entries.append(CatalogEntry(mod, f"companion blocks {name}"))
    return entries


def _poly_name(f, p) -> str:
    terms = []
    for i, c in enumerate(f):
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append(f"{'' if c == 1 else c}x")
        else:
            terms.append(f"{'' if c == 1 else c}x^{i}")
    return "(" + "+".join(reversed(terms)) + ")"


# ---------------------------------------------------------------------------
# Integer base: canonical groups x enumerated actions
# ---------------------------------------------------------------------------


def _canonical_order_tuples(bounds: CatalogBounds) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = [()]

    def rec(prefix: list[int], min_d: int):
        if len(prefix) >= bounds.max_dim:
            return
        for d in range(max(2, min_d), bounds.max_invariant + 1):
            if min_d > 1 and d % min_d:
                continue
            cand = prefix + [d]
            for free in range(0, bounds.max_free_rank + 1):
                t = tuple(cand + [0] * free)
                if len(t) <= bounds.max_dim:
                    out.append(t)
            rec(cand, d)

    rec([], 1)
    for free in range(1, bounds.max_free_rank + 1):
        if free <= bounds.max_dim:
            out.append((0,) * free)
    seen = set()
    uniq = []
    for t in sorted(out, key=lambda t: (len(t), t)):
        if t not in seen:
            seen.add(t)
            uniq.append(t)
    return uniq


def _enumerate_action_tuples(alg: Algebra, orders: tuple[int, ...], entry_bound: int) -> Iterator[tuple[Mat, ...]]:
    """All valid action assignments for the non-unit basis elements.

    Entries of the candidate matrices range over [0, d) for torsion target
    rows and [-entry_bound, entry_bound] for free rows.  Validity is decided
    by the Module constructor.
    """
    g = len(orders)
    n = alg.rank
    if g == 0:
        yield tuple(Mat.zeros(0, 0) for _ in range(n))
        return
    gt = alg.group_table
    if n == 1:
        yield (Mat.identity(g),)
        return
    if gt is None:
        raise ModuleError("integer-base enumeration is shipped for group algebras")
    unit = gt["unit"]
    # entry ranges per row
    row_ranges = []
    for d in orders:
        row_ranges.append(list(range(d)) if d else list(range(-entry_bound, entry_bound + 1)))

    def matrices() -> Iterator[Mat]:
        cells = [(i, j) for i in range(g) for j in range(g)]

        def rec(idx: int, acc: list[int]):
            if idx == len(cells):
                yield Mat(g, g, tuple(acc))
                return
            i, _ = cells[idx]
            for v in row_ranges[i]:
                acc.append(v)
                yield from rec(idx + 1, acc)
                acc.pop()

        yield from rec(0, [])

    # one free generator matrix per non-unit basis element would explode;
    # shipped integer group algebras are cyclic, so a single generator matrix
    # determines everything.
    gen_idx = None
    for i in range(n):
        seen = {unit}
        x = unit
        for _ in range(n):
            x = gt["op"][i][x]
            seen.add(x)
        if len(seen) == n:
            gen_idx = i
            break
    if gen_idx is None:
        raise ModuleError("integer-base enumeration needs a cyclic group")
    for T in matrices():
        acts: list[Optional[Mat]] = [None] * n
        acts[unit] = Mat.identity(g)
        x = unit
        powm = Mat.identity(g)
        for _ in range(n - 1):
            x = gt["op"][gen_idx][x]
            powm = powm @ T
            acts[x] = powm
        yield tuple(acts)


def _integer_catalog(alg: Algebra, bounds: CatalogBounds) -> list[CatalogEntry]:
    entries = []
    seen = set()
    for orders in _canonical_order_tuples(bounds):
        for acts in _enumerate_action_tuples(alg, orders, bounds.entry_bound):
            try:
                mod = Module(alg, orders, acts)
            except ModuleError:
                continue
            key = (mod.orders, mod.actions)
            if key in seen:
                continue
            seen.add(key)
            entries.append(
                CatalogEntry(mod, f"orders {orders}, enumerated action")
            )
    return entries


def module_catalog(alg: Algebra, bounds: CatalogBounds) -> list[CatalogEntry]:
    """Deterministic catalog of modules within the bounds."""
    if alg.base.is_field:
        if alg.rank == 1:
            return [CatalogEntry(zero_module(alg), "zero module")] + [
                CatalogEntry(free_module(alg, r), f"vector space of dimension {r}")
                for r in range(1, bounds.max_dim + 1)
            ]
        if alg.group_table is None:
            raise ModuleError(f"no catalog rule for {alg!r}")
        return _cyclic_field_catalog(alg, bounds.max_dim)
    return _integer_catalog(alg, bounds)


def catalog_modules(alg: Algebra, bounds: CatalogBounds) -> list[Module]:
    return [e.module for e in module_catalog(alg, bounds)]


# ---------------------------------------------------------------------------
# Seeded samplers
# ---------------------------------------------------------------------------


class Sampler:
    """Deterministic sampler of morphisms and short exact sequences."""

    def __init__(self, modules: Sequence[Module], seed: int, tag: str = ""):
        if not modules:
            raise ModuleError("sampler needs a nonempty universe")
        self.modules = list(modules)
        self.rng = random.Random(f"{seed}:{tag}")

    def module(self) -> Module:
        return self.rng.choice(self.modules)

    def nonzero_module(self) -> Module:
        pool = [m for m in self.modules if not m.is_zero]
        return self.rng.choice(pool) if pool else self.modules[0]

    def morphism(self, src: Optional[Module] = None, dst: Optional[Module] = None) -> Morphism:
        src = src or self.module()
        dst = dst or self.module()
        h = hom_group(src, dst)
        if not h.invariants:
            return Morphism(src, dst, Mat.zeros(dst.gens, src.gens))
        coeffs = [
            self.rng.randrange(d) if d else self.rng.randint(-2, 2)
            for d in h.invariants
        ]
        return h.element(coeffs)

    def ses(self) -> SES:
        """Extension of a random catalog member by another, via a random class."""
        c = self.nonzero_module()
        a = self.nonzero_module()
        e = ext(c, a, 1)
        if e.invariants and self.rng.random() < 0.8:
            coeffs = [
                self.rng.randrange(d) if d else self.rng.randint(-2, 2)
                for d in e.invariants
            ]
            return ses_of_class(e, coeffs)
        b = direct_sum(a, c)
        return SES(b.i1, b.p2)

    def split_ses(self) -> SES:
        a = self.module()
        c = self.module()
        b = direct_sum(a, c)
        return SES(b.i1, b.p2)
