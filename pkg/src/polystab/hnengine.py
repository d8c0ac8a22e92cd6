"""Harder-Narasimhan filtrations on finite quiver representations over F_p.

Subobjects of a representation are enumerated exhaustively (arrow-closed
tuples of subspaces in reduced row echelon form), which turns semistability,
maximal destabilizing quotients and HN filtrations into finite searches.  A
vertex charge ``Z_v`` is a polynomial whose leading coefficient lies in the
semi-closed upper half plane; a representation of dimension vector ``(d_v)``
has charge ``sum_v d_v Z_v``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .errors import CapExceeded, PolystabError, ValidationError
from .phasecore import CPoly, Ordering, PhaseGerm, cmp_phase, in_half_plane
from .stabfam import pin_to_window

DEFAULT_CAP = 6

Vector = tuple[int, ...]
Basis = tuple[Vector, ...]


class NoUniqueMdq(PolystabError):
    """The smallest minimal-phase kernel is not contained in every other one."""


# -- linear algebra over F_p ---------------------------------------------------


def rref(rows: Sequence[Sequence[int]], p: int) -> Basis:
    """Reduced row echelon form with zero rows dropped."""
    m = [[x % p for x in r] for r in rows]
    if not m:
        return ()
    ncols = len(m[0])
    out: list[list[int]] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    out = [row for row in m[:r]]
    return tuple(tuple(row) for row in out)


def _pivot(row: Vector) -> int:
    return next(i for i, x in enumerate(row) if x)


def in_span(v: Sequence[int], basis: Basis, p: int) -> bool:
    w = [x % p for x in v]
    for row in basis:
        c = _pivot(row)
        if w[c]:
            f = w[c]
            w = [(a - f * b) % p for a, b in zip(w, row)]
    return not any(w)


def subspaces(dim: int, p: int) -> list[Basis]:
    """Every subspace of F_p^dim, once, as its RREF basis."""
    out: list[Basis] = []
    for r in range(dim + 1):
        for pivots in itertools.combinations(range(dim), r):
            free = [(i, c) for i, pc in enumerate(pivots) for c in range(pc + 1, dim) if c not in pivots]
            for values in itertools.product(range(p), repeat=len(free)):
                rows = [[0] * dim for _ in range(r)]
                for i, pc in enumerate(pivots):
                    rows[i][pc] = 1
                for (i, c), val in zip(free, values):
                    rows[i][c] = val
                out.append(tuple(tuple(row) for row in rows))
    return out


def mat_vec(A: Sequence[Sequence[int]], v: Sequence[int], p: int) -> Vector:
    return tuple(sum(a * x for a, x in zip(row, v)) % p for row in A)


# -- quiver data ----------------------------------------------------------------


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True, eq=False)
class QuiverModel:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    charges: Mapping[str, CPoly]
    field: int = 2
    cap: int = DEFAULT_CAP

    def __post_init__(self) -> None:
        if self.field < 2 or any(self.field % k == 0 for k in range(2, int(self.field**0.5) + 1)):
            raise ValidationError("field", None, f"field size {self.field} must be prime")
        for v in self.vertices:
            Z = self.charges.get(v)
            if Z is None or Z.is_zero():
                raise ValidationError("charge", None, f"vertex {v!r} needs a nonzero charge")
            if not in_half_plane(Z.lead):
                raise ValidationError("charge", None, f"vertex {v!r}: leading coefficient {Z.lead} outside H")
        for a in self.arrows:
            if a.source not in self.vertices or a.target not in self.vertices:
                raise ValidationError("arrow", None, f"arrow {a.name!r} has an unknown endpoint")

    def vertex_index(self, v: str) -> int:
        return self.vertices.index(v)


def linear_quiver(n: int, charges: Sequence[CPoly], field: int = 2, cap: int = DEFAULT_CAP) -> QuiverModel:
    """A_n with arrows 1 -> 2 -> ... -> n."""
    verts = tuple(str(i + 1) for i in range(n))
    arrows = tuple(Arrow(f"a{i + 1}", verts[i], verts[i + 1]) for i in range(n - 1))
    return QuiverModel(verts, arrows, dict(zip(verts, charges)), field, cap)


@dataclass(frozen=True)
class QuiverRep:
    dims: tuple[int, ...]
    # arrow name -> matrix with dim(target) rows and dim(source) columns
    matrices: tuple[tuple[str, tuple[tuple[int, ...], ...]], ...] = ()

    def matrix(self, name: str) -> tuple[tuple[int, ...], ...]:
        for k, m in self.matrices:
            if k == name:
                return m
        return ()

    @property
    def total(self) -> int:
        return sum(self.dims)


def make_rep(M: QuiverModel, dims: Mapping[str, int] | Sequence[int],
             matrices: Mapping[str, Sequence[Sequence[int]]] | None = None) -> QuiverRep:
    if isinstance(dims, Mapping):
        dvec = tuple(int(dims.get(v, 0)) for v in M.vertices)
    else:
        dvec = tuple(int(x) for x in dims)
    if len(dvec) != len(M.vertices) or any(d < 0 for d in dvec):
        raise ValidationError("rep-shape", None, "dimension vector does not match the vertices")
    matrices = matrices or {}
    mats = []
    for a in M.arrows:
        rows_expected = dvec[M.vertex_index(a.target)]
        cols_expected = dvec[M.vertex_index(a.source)]
        raw = matrices.get(a.name)
        if raw is None:
            mat = tuple(tuple(0 for _ in range(cols_expected)) for _ in range(rows_expected))
        else:
            mat = tuple(tuple(int(x) % M.field for x in row) for row in raw)
            if rows_expected == 0 and mat in ((), ((),)):
                mat = ()
            if len(mat) != rows_expected or any(len(row) != cols_expected for row in mat):
                raise ValidationError("rep-shape", None, f"matrix for {a.name!r} must be {rows_expected}x{cols_expected}")
        mats.append((a.name, mat))
    return QuiverRep(dvec, tuple(mats))


@dataclass(frozen=True)
class SubRep:
    spaces: tuple[Basis, ...]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.spaces)

    @property
    def total(self) -> int:
        return sum(self.dims)


def contained(A: SubRep, B: SubRep, p: int) -> bool:
    return all(all(in_span(v, sb, p) for v in sa) for sa, sb in zip(A.spaces, B.spaces))


def _closed(M: QuiverModel, E: QuiverRep, spaces: Sequence[Basis]) -> bool:
    for a in M.arrows:
        s, t = M.vertex_index(a.source), M.vertex_index(a.target)
        A = E.matrix(a.name)
        for v in spaces[s]:
            if not in_span(mat_vec(A, v, M.field), spaces[t], M.field):
                return False
    return True


def _check_cap(M: QuiverModel, E: QuiverRep) -> None:
    if E.total > M.cap:
        raise CapExceeded(f"total dimension {E.total} exceeds the enumeration cap {M.cap}")


def enumerate_subreps(M: QuiverModel, E: QuiverRep) -> list[SubRep]:
    """All arrow-closed subrepresentations, including 0 and E, each once."""
    _check_cap(M, E)
    per_vertex = [subspaces(d, M.field) for d in E.dims]
    out = []
    for combo in itertools.product(*per_vertex):
        if _closed(M, E, combo):
            out.append(SubRep(tuple(combo)))
    return out


def full_subrep(M: QuiverModel, E: QuiverRep) -> SubRep:
    return SubRep(tuple(rref([[int(i == j) for j in range(d)] for i in range(d)], M.field) for d in E.dims))


def zero_subrep(E: QuiverRep) -> SubRep:
    return SubRep(tuple(() for _ in E.dims))


# -- phases ---------------------------------------------------------------------


def charge_of(M: QuiverModel, dims: Sequence[int]) -> CPoly:
    total = CPoly()
    for v, d in zip(M.vertices, dims):
        if d:
            total = total + M.charges[v] * d
    return total


def phase_of(M: QuiverModel, obj: QuiverRep | SubRep | Sequence[int]) -> PhaseGerm:
    """Phase germ of an object (or dimension vector), branch pinned to phi(oo) in (0, 1]."""
    dims = obj.dims if isinstance(obj, (QuiverRep, SubRep)) else tuple(obj)
    if not any(dims):
        raise ValidationError("zero-object", None, "the zero object has no phase")
    return pin_to_window(charge_of(M, dims))


def _minus(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))


@dataclass
class _Lattice:
    """Subrepresentations of one fixed E with cached containment queries."""

    M: QuiverModel
    E: QuiverRep
    subs: list[SubRep]
    _phase: dict[tuple[int, ...], PhaseGerm] = field(default_factory=dict)

    @classmethod
    def of(cls, M: QuiverModel, E: QuiverRep, subs: list[SubRep] | None = None) -> "_Lattice":
        return cls(M, E, enumerate_subreps(M, E) if subs is None else subs)

    def phase(self, dims: Sequence[int]) -> PhaseGerm:
        key = tuple(dims)
        if key not in self._phase:
            self._phase[key] = phase_of(self.M, key)
        return self._phase[key]

    def below(self, top: SubRep) -> list[SubRep]:
        return [S for S in self.subs if contained(S, top, self.M.field)]

    def between(self, bottom: SubRep, top: SubRep) -> list[SubRep]:
        return [S for S in self.below(top) if contained(bottom, S, self.M.field)]


def _semistable_between(L: _Lattice, bottom: SubRep, top: SubRep) -> tuple[bool, SubRep | None]:
    """Semistability of top/bottom; the witness maximizes the phase of S/bottom."""
    qdims = _minus(top.dims, bottom.dims)
    phi = L.phase(qdims)
    best: SubRep | None = None
    best_phase: PhaseGerm | None = None
    for S in L.between(bottom, top):
        if S.total in (bottom.total, top.total):
            continue
        ph = L.phase(_minus(S.dims, bottom.dims))
        if best_phase is None:
            better = True
        else:
            c = cmp_phase(ph, best_phase)
            better = c is Ordering.GT or (c is Ordering.EQ and S.total > best.total)
        if better:
            best, best_phase = S, ph
    if best_phase is not None and cmp_phase(best_phase, phi) is Ordering.GT:
        return False, best
    return True, None


def is_semistable(M: QuiverModel, E: QuiverRep) -> tuple[bool, SubRep | None]:
    """True iff no proper nonzero subrepresentation has strictly larger phase."""
    if E.total == 0:
        raise ValidationError("zero-object", None, "semistability needs a nonzero object")
    L = _Lattice.of(M, E)
    return _semistable_between(L, zero_subrep(E), full_subrep(M, E))


def _mdq_within(L: _Lattice, top: SubRep) -> tuple[tuple[int, ...], SubRep]:
    p = L.M.field
    kernels = [K for K in L.below(top) if K.total < top.total]
    best: list[SubRep] = []
    best_phase: PhaseGerm | None = None
    for K in kernels:
        ph = L.phase(_minus(top.dims, K.dims))
        c = Ordering.LT if best_phase is None else cmp_phase(ph, best_phase)
        if c is Ordering.LT:
            best, best_phase = [K], ph
        elif c is Ordering.EQ:
            best.append(K)
    smallest = min(best, key=lambda K: K.total)
    if not all(contained(smallest, K, p) for K in best):
        raise NoUniqueMdq("minimal-phase quotients do not all factor through a single one")
    return _minus(top.dims, smallest.dims), smallest


def mdq(M: QuiverModel, E: QuiverRep) -> tuple[tuple[int, ...], SubRep]:
    """Maximal destabilizing quotient: (quotient dimension vector, kernel)."""
    if E.total == 0:
        raise ValidationError("zero-object", None, "the zero object has no quotients")
    L = _Lattice.of(M, E)
    return _mdq_within(L, full_subrep(M, E))


@dataclass(frozen=True)
class HNFiltration:
    chain: tuple[SubRep, ...]  # 0 = E_0 < E_1 < ... < E_k = E
    factors: tuple[tuple[int, ...], ...]
    phases: tuple[PhaseGerm, ...]
    steps: int = 0  # mdq iterations used


def hn_filter(M: QuiverModel, E: QuiverRep) -> HNFiltration:
    """HN filtration by repeatedly splitting off the mdq of the remaining kernel."""
    L = _Lattice.of(M, E)
    top = full_subrep(M, E)
    tops = [top]
    steps = 0
    while top.total:
        _, K = _mdq_within(L, top)
        steps += 1
        if steps > E.total:  # pragma: no cover - a hard bound on finite models
            raise PolystabError("mdq iteration failed to terminate")
        tops.append(K)
        top = K
    chain = tuple(reversed(tops))
    factors = tuple(_minus(chain[i].dims, chain[i - 1].dims) for i in range(1, len(chain)))
    return HNFiltration(chain, factors, tuple(L.phase(f) for f in factors), steps)


def brute_force_validate(M: QuiverModel, E: QuiverRep, F: HNFiltration) -> bool:
    """Check F against the defining properties that make an HN filtration unique."""
    L = _Lattice.of(M, E)
    p = M.field
    chain = F.chain
    if not chain or chain[0].total != 0:
        return False
    if chain[-1] != full_subrep(M, E):
        return False
    if any(S not in L.subs for S in chain):
        return False
    if len(F.factors) != len(chain) - 1 or len(F.phases) != len(F.factors):
        return False
    for i in range(1, len(chain)):
        lo, hi = chain[i - 1], chain[i]
        if hi.total <= lo.total or not contained(lo, hi, p):
            return False
        if F.factors[i - 1] != _minus(hi.dims, lo.dims):
            return False
        if cmp_phase(F.phases[i - 1], L.phase(F.factors[i - 1])) is not Ordering.EQ:
            return False
        ok, _ = _semistable_between(L, lo, hi)
        if not ok:
            return False
    for a, b in zip(F.phases, F.phases[1:]):
        if cmp_phase(a, b) is not Ordering.GT:
            return False
    return tuple(map(sum, zip(*F.factors))) == E.dims if F.factors else E.total == 0


def short_exact_sequences(M: QuiverModel, E: QuiverRep) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """(dim A, dim B) for every sequence A -> E -> B with A, B nonzero."""
    for S in enumerate_subreps(M, E):
        if 0 < S.total < E.total:
            yield S.dims, _minus(E.dims, S.dims)


def all_reps(M: QuiverModel, max_dim: int) -> Iterator[QuiverRep]:
    """Every representation with per-vertex dimension at most ``max_dim``."""
    q = M.field
    for dims in itertools.product(range(max_dim + 1), repeat=len(M.vertices)):
        shapes = []
        for a in M.arrows:
            r, c = dims[M.vertex_index(a.target)], dims[M.vertex_index(a.source)]
            shapes.append((a.name, r, c))
        entry_counts = [r * c for _, r, c in shapes]
        for values in itertools.product(range(q), repeat=sum(entry_counts)):
            mats = {}
            pos = 0
            for name, r, c in shapes:
                flat = values[pos: pos + r * c]
                pos += r * c
                mats[name] = [list(flat[i * c: (i + 1) * c]) for i in range(r)]
            yield make_rep(M, dims, mats)
