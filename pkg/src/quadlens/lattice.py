"""Embeddings of plumbing lattices into the diagonal negative lattice.

The ambient lattice is Z^N with pairing ``<u, v> = -sum(u_k v_k)``.  An
embedding assigns to each plumbing vertex an integer vector whose self-
pairing is the vertex weight, with consecutive chain vertices pairing
to +1 and all other pairs orthogonal.  ``embed_search`` enumerates all
such assignments up to the equivalence generated by signed permutations
of the ambient basis and sign flips of whole chains, by backtracking:

* vertices are placed chain by chain, heaviest chains first, so that
  the sparsest candidate sets come earliest;
* coordinates already touched by placed vectors may carry arbitrary
  integer coefficients, pruned by a Cauchy-Schwarz bound against every
  pending pairing constraint;
* coordinates never touched before enter canonically — the smallest
  unused indices, with positive non-increasing coefficients — which
  breaks the ambient symmetry without losing any class;
* surviving assignments are deduplicated by a canonical form minimized
  over chain flips and signed column permutations.

On top of the search sit the two per-embedding tests: the orthogonal
complement must have the square the filling demands, and every
characteristic collection of disjoint vertex spheres must satisfy the
mod-16 signature congruence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .singtypes import Plumbing, SingularityType, plumbing_of

DEFAULT_NODE_BUDGET = 10**8

COMPLETE = "Complete"
BUDGET_EXHAUSTED = "Budget_Exhausted"
WITNESS = "Witness"  # produced when a known embedding bypasses the search


class CorankMismatch(ValueError):
    pass


def pairing(u, v) -> int:
    return -sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class Embedding:
    ambient_rank: int
    vectors: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        assert all(len(v) == self.ambient_rank for v in self.vectors)


def gram_matches(emb: Embedding, pl: Plumbing) -> bool:
    """Exact re-verification, independent of search bookkeeping."""
    weights = pl.weights
    vs = emb.vectors
    if len(vs) != pl.size:
        return False
    for i, v in enumerate(vs):
        if pairing(v, v) != weights[i]:
            return False
        for j in range(i):
            want = 1 if pl.is_adjacent(i, j) else 0
            if pairing(vs[i], vs[j]) != want:
                return False
    return True


# --------------------------------------------------------------------------
# canonical forms under the equivalence group

def _canonical_columns(rows: list[tuple[int, ...]], n: int) -> tuple:
    cols = []
    for k in range(n):
        col = tuple(r[k] for r in rows)
        for x in col:
            if x:
                if x < 0:
                    col = tuple(-y for y in col)
                break
        cols.append(col)
    return tuple(sorted(cols))


def class_canonical_form(emb: Embedding, pl: Plumbing) -> tuple:
    """Invariant of the embedding class: minimal column-sorted matrix
    over all chain sign flips, with per-column sign normalization."""
    ids = pl.vertex_chain_ids()
    nchains = len(pl.chains)
    best = None
    for mask in range(1 << nchains):
        rows = [
            tuple(-x for x in v) if (mask >> ids[i]) & 1 else v
            for i, v in enumerate(emb.vectors)
        ]
        form = _canonical_columns(rows, emb.ambient_rank)
        if best is None or form < best:
            best = form
    return best


def canonical_representative(emb: Embedding, pl: Plumbing) -> Embedding:
    form = class_canonical_form(emb, pl)
    rows = tuple(
        tuple(col[i] for col in form) for i in range(len(emb.vectors))
    )
    return Embedding(emb.ambient_rank, rows)


# --------------------------------------------------------------------------
# the backtracking search

class _Exhausted(Exception):
    pass


def _square_partitions(r: int, max_part: int):
    """Non-increasing positive tuples whose squares sum to r."""
    if r == 0:
        yield ()
        return
    for c in range(min(max_part, isqrt(r)), 0, -1):
        for rest in _square_partitions(r - c * c, c):
            yield (c, *rest)


class _Search:
    def __init__(self, pl: Plumbing, n: int, enumerate_all: bool, budget: int):
        self.pl = pl
        self.n = n
        self.enumerate_all = enumerate_all
        self.nodes_left = budget
        self.exhausted = False

        order = sorted(
            range(len(pl.chains)),
            key=lambda ci: (max(-w for w in pl.chains[ci]), len(pl.chains[ci])),
            reverse=True,
        )
        chain_start = []
        acc = 0
        for chain in pl.chains:
            chain_start.append(acc)
            acc += len(chain)
        self.proc_weight: list[int] = []
        self.proc_prev: list[int | None] = []
        self.proc_global: list[int] = []
        for ci in order:
            for off, w in enumerate(pl.chains[ci]):
                self.proc_weight.append(-w)
                self.proc_prev.append(len(self.proc_global) - 1 if off else None)
                self.proc_global.append(chain_start[ci] + off)

        self.placed: list[list[int]] = []
        self.used = 0  # coordinates 0..used-1 are touched
        self.found: dict[tuple, Embedding] = {}
        self.done = False

    def _spend(self):
        if self.nodes_left <= 0:
            self.exhausted = True
            raise _Exhausted
        self.nodes_left -= 1

    def run(self):
        try:
            self._place(0)
        except _Exhausted:
            pass

    def _record(self):
        vectors = [None] * self.pl.size
        for pos, vec in enumerate(self.placed):
            vectors[self.proc_global[pos]] = tuple(vec) + (0,) * (
                self.n - len(vec)
            )
        emb = Embedding(self.n, tuple(vectors))
        if not gram_matches(emb, self.pl):  # independent of the search
            raise AssertionError(f"search produced a non-embedding: {emb}")
        self.found.setdefault(
            class_canonical_form(emb, self.pl), canonical_representative(emb, self.pl)
        )
        if not self.enumerate_all:
            self.done = True

    def _place(self, pos: int):
        self._spend()
        if pos == len(self.proc_weight):
            self._record()
            return
        a = self.proc_weight[pos]
        prev = self.proc_prev[pos]
        targets = [(-1 if j == prev else 0) for j in range(len(self.placed))]
        # suffix_sq[j][k] = sum of squares of placed[j] over coordinates >= k
        suffix = []
        for u in self.placed:
            s = [0] * (self.used + 1)
            for k in range(self.used - 1, -1, -1):
                s[k] = s[k + 1] + u[k] * u[k]
            suffix.append(s)
        coeffs = [0] * self.used
        dots = [0] * len(self.placed)
        self._assign(pos, a, 0, coeffs, dots, targets, suffix, 0)

    def _assign(self, pos, a, k, coeffs, dots, targets, suffix, norm):
        if self.done:
            return
        self._spend()
        rem = a - norm
        for j, u in enumerate(self.placed):
            gap = targets[j] - dots[j]
            if gap * gap > rem * suffix[j][k]:
                return
        if k == self.used:
            if any(dots[j] != targets[j] for j in range(len(self.placed))):
                return
            capacity = self.n - self.used
            for part in _square_partitions(rem, isqrt(rem) if rem else 1):
                if len(part) > capacity:
                    continue
                vec = coeffs + list(part)
                old_used = self.used
                self.placed.append(vec)
                self.used += len(part)
                self._place(pos + 1)
                self.used = old_used
                self.placed.pop()
                if self.done:
                    return
            return
        bound = isqrt(rem)
        for c in range(-bound, bound + 1):
            coeffs[k] = c
            for j, u in enumerate(self.placed):
                dots[j] += c * u[k]
            self._assign(pos, a, k + 1, coeffs, dots, targets, suffix, norm + c * c)
            for j, u in enumerate(self.placed):
                dots[j] -= c * u[k]
            coeffs[k] = 0
            if self.done:
                return


def embed_search(
    pl: Plumbing,
    n: int,
    mode: str = "classes",
    budget: int = DEFAULT_NODE_BUDGET,
) -> tuple[list[Embedding], str]:
    """All embedding classes of ``pl`` into rank ``n`` (mode "classes"),
    or the first one found (mode "exists").

    Returns ``(classes, status)`` where status ``Budget_Exhausted``
    means the node budget ran out: the class list is then a subset and
    absence of embeddings is NOT established.
    """
    if mode not in ("classes", "exists"):
        raise ValueError(f"unknown mode {mode!r}")
    if n < 1:
        raise ValueError("ambient rank must be >= 1")
    if any(w > -2 for c in pl.chains for w in c):
        raise ValueError("plumbing weights must be <= -2")
    search = _Search(pl, n, enumerate_all=(mode == "classes"), budget=budget)
    search.run()
    classes = [search.found[key] for key in sorted(search.found)]
    status = BUDGET_EXHAUSTED if search.exhausted else COMPLETE
    return classes, status


# --------------------------------------------------------------------------
# per-embedding obstructions

def complement_check(emb: Embedding, P: int) -> tuple[tuple[int, ...], int, bool]:
    """Primitive generator of the rank-1 orthogonal complement.

    Returns ``(generator, norm, pass)`` with ``norm = <w, w>``; pass
    iff the norm is exactly ``-P``, the square a filling's generator
    must have.
    """
    V, N = len(emb.vectors), emb.ambient_rank
    if N != V + 1:
        raise CorankMismatch(f"need ambient rank {V + 1}, got {N}")
    # fraction-exact row reduction of the vector matrix
    rows = [[Fraction(x) for x in v] for v in emb.vectors]
    pivot_cols: list[int] = []
    r = 0
    for col in range(N):
        piv = next((i for i in range(r, V) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][col]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(V):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivot_cols.append(col)
        r += 1
    if r != V:
        raise CorankMismatch("embedded vectors are linearly dependent")
    free_col = next(c for c in range(N) if c not in pivot_cols)
    w = [Fraction(0)] * N
    w[free_col] = Fraction(1)
    for i, col in enumerate(pivot_cols):
        w[col] = -rows[i][free_col]
    scale = 1
    for x in w:
        scale = scale * x.denominator // gcd(scale, x.denominator)
    ints = [int(x * scale) for x in w]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x)
    if first < 0:
        ints = [-x for x in ints]
    gen = tuple(ints)
    assert all(pairing(gen, v) == 0 for v in emb.vectors)
    norm = pairing(gen, gen)
    return gen, norm, norm == -P


def km_check(
    emb: Embedding, pl: Plumbing, coset_limit: int = 1 << 22
) -> tuple[list[tuple[tuple[int, ...], int]], bool]:
    """Signature congruence over all characteristic disjoint collections.

    A subset of pairwise non-adjacent vertices whose vector sum has all
    coordinates odd gives a smoothly embedded characteristic sphere; its
    square must be congruent to ``-N`` mod 16.  Returns the violating
    ``(subset, square)`` pairs; pass is False iff any exist.
    """
    V, N = len(emb.vectors), emb.ambient_rank
    # GF(2) system: one equation per ambient coordinate, unknowns = vertices
    eqs = []
    for coord in range(N):
        mask = 0
        for v in range(V):
            if emb.vectors[v][coord] & 1:
                mask |= 1 << v
        eqs.append((mask, 1))
    # eliminate
    pivots: list[tuple[int, int, int]] = []  # (pivot bit, mask, rhs)
    for mask, rhs in eqs:
        for bit, pmask, prhs in pivots:
            if (mask >> bit) & 1:
                mask ^= pmask
                rhs ^= prhs
        if mask == 0:
            if rhs:
                return [], True  # no characteristic subset at all
            continue
        bit = mask.bit_length() - 1
        pivots.append((bit, mask, rhs))
    # particular solution: set free vars to 0, read pivots bottom-up
    x0 = 0
    for bit, mask, rhs in reversed(pivots):
        val = rhs ^ bin(mask & x0 & ~(1 << bit)).count("1") % 2
        if val:
            x0 |= 1 << bit
    pivot_bits = {bit for bit, _, _ in pivots}
    free_bits = [b for b in range(V) if b not in pivot_bits]
    basis = []
    for fb in free_bits:
        vec = 1 << fb
        for bit, mask, _ in reversed(pivots):
            if bin(mask & vec & ~(1 << bit)).count("1") % 2:
                vec |= 1 << bit
        basis.append(vec)
    if 1 << len(basis) > coset_limit:
        raise RuntimeError(
            f"characteristic coset 2^{len(basis)} exceeds limit {coset_limit}"
        )
    adj = [0] * V
    for i, j in pl.adjacent_pairs():
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    violations = []
    for combo in range(1 << len(basis)):
        s = x0
        c = combo
        bi = 0
        while c:
            if c & 1:
                s ^= basis[bi]
            c >>= 1
            bi += 1
        ok = True
        t = s
        while t:
            v = t & -t
            if adj[v.bit_length() - 1] & s:
                ok = False
                break
            t ^= v
        if not ok:
            continue
        members = [v for v in range(V) if (s >> v) & 1]
        total = [0] * N
        for v in members:
            for kk, x in enumerate(emb.vectors[v]):
                total[kk] += x
        assert all(x & 1 for x in total)
        square = -sum(x * x for x in total)
        if (square + N) % 16 != 0:
            violations.append((tuple(members), square))
    return violations, not violations


# --------------------------------------------------------------------------
# the combined smooth battery

@dataclass(frozen=True)
class ClassReport:
    embedding: Embedding
    complement_generator: tuple[int, ...]
    complement_norm: int
    complement_pass: bool
    km_violations: tuple[tuple[tuple[int, ...], int], ...]
    km_pass: bool

    @property
    def survives(self) -> bool:
        return self.complement_pass and self.km_pass


@dataclass(frozen=True)
class SmoothReport:
    ambient_rank: int
    classes: tuple[ClassReport, ...]
    donaldson_pass: bool
    search_status: str

    @property
    def survivor_exists(self) -> bool:
        return any(c.survives for c in self.classes)

    @property
    def obstructed(self) -> bool | None:
        """True/False when established; None when the budget ran out
        (or a single witness embedding failed) without a survivor."""
        if self.survivor_exists:
            return False
        return True if self.search_status == COMPLETE else None


def smooth_battery(
    stype: SingularityType,
    budget: int = DEFAULT_NODE_BUDGET,
    known_embedding: Embedding | None = None,
) -> SmoothReport:
    """Donaldson embedding census plus both per-class tests.

    A known Gram-exact embedding short-circuits the census (status
    ``Witness``); that is sound for establishing survival, never for
    obstruction.
    """
    pl = plumbing_of(stype)
    n = pl.size + 1
    if known_embedding is not None:
        if not gram_matches(known_embedding, pl):
            raise ValueError("known embedding fails the Gram conditions")
        classes, status = [canonical_representative(known_embedding, pl)], WITNESS
    else:
        classes, status = embed_search(pl, n, mode="classes", budget=budget)
    P = stype.order_product
    reports = []
    for emb in classes:
        gen, norm, cpass = complement_check(emb, P)
        violations, kpass = km_check(emb, pl)
        reports.append(
            ClassReport(
                embedding=emb,
                complement_generator=gen,
                complement_norm=norm,
                complement_pass=cpass,
                km_violations=tuple(violations),
                km_pass=kpass,
            )
        )
    return SmoothReport(
        ambient_rank=n,
        classes=tuple(reports),
        donaldson_pass=bool(classes),
        search_status=status,
    )


# --------------------------------------------------------------------------
# fixture serialization: "vertex_id: c1 c2 ... cN"

def format_embedding(emb: Embedding) -> str:
    return "\n".join(
        f"{i + 1}: " + " ".join(str(x) for x in v)
        for i, v in enumerate(emb.vectors)
    )


def parse_embedding(text: str) -> Embedding:
    rows = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(":")
        rows[int(head)] = tuple(int(tok) for tok in rest.split())
    if sorted(rows) != list(range(1, len(rows) + 1)):
        raise ValueError("vertex ids must be 1..V")
    vectors = tuple(rows[i] for i in range(1, len(rows) + 1))
    widths = {len(v) for v in vectors}
    if len(widths) != 1:
        raise ValueError("rows have differing lengths")
    return Embedding(widths.pop(), vectors)
