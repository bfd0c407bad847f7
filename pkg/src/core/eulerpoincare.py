"""
DefCoh - Euler-Poincaré Characteristics of Finite Complexes

A finite complex 0 -> V0 -> V1 -> ... -> Vn -> 0 over QQ has
χ_d = Σ (-1)^i dim V^i equal to χ_h = Σ (-1)^i dim H^i. A deformation
replaces each differential by a matrix polynomial in h with the same value
at h = 0 and δ_h∘δ_h = 0; over QQ(h) the cohomology can only shrink and χ
does not move.

Random complexes are built from chosen ranks in a B ⊕ H ⊕ C splitting and
conjugated by random unimodular integer matrices, so every draw is valid
and its cohomology is known in advance. Random deformations add unipotent
gauge moves I + h·E and h-multiples of partial identities between
neighbouring H blocks.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy.polys.matrices import DomainMatrix

from . import scalars
from .exceptions import NotAComplex, NotADeformation, OutOfRange, PoleAtSpecialization
from .hochschild import CochainWindow, hkr_cohomology_dims, window_cohomology_dims
from .scalars import ScalarField
from ..utils.linalg import matrix_rank

logger = logging.getLogger(__name__)

RATIONAL = ScalarField.rational()
DEFORMATION = ScalarField.rational(hbar=True)

# Fuzzing defaults
DEFAULT_FUZZ_COUNT = 200
DEFAULT_MAX_DIM = 6
DEFAULT_MAX_LENGTH = 5
DEFAULT_SEED = 42
MAX_REROLLS = 3
ENTRY_RANGE = 2
MAX_BLOCK = 2


def _matrix(rows, shape: Tuple[int, int], field: ScalarField) -> DomainMatrix:
    """DomainMatrix from nested lists of ints, Fractions or field elements."""
    if isinstance(rows, DomainMatrix):
        if rows.shape != shape:
            raise NotAComplex(f"matrix of shape {rows.shape}, expected {shape}")
        return rows.convert_to(field.domain)
    dod: Dict[int, Dict[int, object]] = {}
    if len(rows) != shape[0] or any(len(row) != shape[1] for row in rows):
        raise NotAComplex(f"matrix rows do not match shape {shape}")
    for i, row in enumerate(rows):
        for j, value in enumerate(row):
            value = field.convert(value)
            if value:
                dod.setdefault(i, {})[j] = value
    return DomainMatrix.from_dod(dod, shape, field.domain)


def _alternating(values: Sequence[int]) -> int:
    return sum(v if i % 2 == 0 else -v for i, v in enumerate(values))


def _cohomology(dims: Sequence[int], maps: Sequence[DomainMatrix]) -> List[int]:
    ranks = [matrix_rank(M) for M in maps]
    out = []
    for i, d in enumerate(dims):
        outgoing = ranks[i] if i < len(ranks) else 0
        incoming = ranks[i - 1] if i > 0 else 0
        out.append(d - outgoing - incoming)
    return out


def _check_square_zero(maps: Sequence[DomainMatrix], error) -> None:
    for i in range(len(maps) - 1):
        if not (maps[i + 1] * maps[i]).is_zero_matrix:
            raise error(f"δ∘δ != 0 from degree {i} to {i + 2}")


@dataclass(frozen=True)
class FiniteComplex:
    """
    0 -> V^0 -> ... -> V^n -> 0 with maps[i] of shape dims[i+1] x dims[i].

    Raises:
        NotAComplex: a shape mismatch or maps[i+1]·maps[i] != 0
    """
    dims: Tuple[int, ...]
    maps: Tuple[DomainMatrix, ...]
    field: ScalarField = RATIONAL

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.maps) != max(len(self.dims) - 1, 0):
            raise NotAComplex(f"{len(self.dims)} spaces need {len(self.dims) - 1} maps")
        maps = tuple(
            _matrix(M, (self.dims[i + 1], self.dims[i]), self.field) for i, M in enumerate(self.maps)
        )
        object.__setattr__(self, "maps", maps)
        _check_square_zero(maps, NotAComplex)

    @classmethod
    def from_lists(cls, dims: Sequence[int], matrices: Sequence, field: ScalarField = RATIONAL):
        return cls(tuple(dims), tuple(matrices), field)

    def cohomology_dims(self) -> List[int]:
        return _cohomology(self.dims, self.maps)

    def chi_dimensional(self) -> int:
        return _alternating(self.dims)

    def chi_homological(self) -> int:
        return _alternating(self.cohomology_dims())


def chi_dimensional(C: FiniteComplex) -> int:
    """χ_d = Σ (-1)^i dim V^i."""
    return C.chi_dimensional()


def chi_homological(C: FiniteComplex) -> int:
    """χ_h = Σ (-1)^i dim H^i, by exact ranks."""
    return C.chi_homological()


def cohomology_dims(C: FiniteComplex) -> List[int]:
    return C.cohomology_dims()


# Deformations


def _specialize_matrix(M: DomainMatrix, h0) -> DomainMatrix:
    rows, cols = M.shape
    dod = {}
    for i, row in M.to_dod().items():
        for j, value in row.items():
            v = scalars.embed(value, DEFORMATION, RATIONAL, hbar_value=h0)
            if v:
                dod.setdefault(i, {})[j] = v
    return DomainMatrix.from_dod(dod, (rows, cols), RATIONAL.domain)


@dataclass(frozen=True)
class DeformedComplex:
    """
    Differentials over QQ(h) that reduce to base at h = 0.

    Raises:
        NotADeformation: wrong shapes, δ_h∘δ_h != 0, or a map that does not
            reduce to the base differential
    """
    base: FiniteComplex
    maps: Tuple[DomainMatrix, ...]

    def __post_init__(self):
        if len(self.maps) != len(self.base.maps):
            raise NotADeformation("a deformation needs one map per base differential")
        dims = self.base.dims
        try:
            maps = tuple(
                _matrix(M, (dims[i + 1], dims[i]), DEFORMATION) for i, M in enumerate(self.maps)
            )
        except NotAComplex as exc:
            raise NotADeformation(str(exc)) from exc
        object.__setattr__(self, "maps", maps)
        _check_square_zero(maps, NotADeformation)
        for i, (M, M0) in enumerate(zip(maps, self.base.maps)):
            try:
                reduced = _specialize_matrix(M, 0)
            except PoleAtSpecialization as exc:
                raise NotADeformation(f"map {i} has a pole at h = 0") from exc
            if reduced.to_dod() != M0.to_dod():
                raise NotADeformation(f"map {i} does not reduce to the base differential")

    @property
    def dims(self) -> Tuple[int, ...]:
        return self.base.dims

    def cohomology_dims(self) -> List[int]:
        return _cohomology(self.dims, self.maps)

    def chi(self) -> int:
        return _alternating(self.cohomology_dims())


def deform(C: FiniteComplex, perturbations: Sequence[Sequence]) -> DeformedComplex:
    """
    M_i(h) = M_i + h·δ_i,1 + h²·δ_i,2 + ...

    perturbations[i] lists the matrices δ_i,k for map i (missing entries are
    zero).

    Raises:
        NotADeformation: δ_h∘δ_h != 0
    """
    h = DEFORMATION.h
    maps = []
    for i, M in enumerate(C.maps):
        shape = M.shape
        total = M.convert_to(DEFORMATION.domain)
        terms = perturbations[i] if i < len(perturbations) else ()
        for k, delta in enumerate(terms, start=1):
            try:
                D = _matrix(delta, shape, DEFORMATION)
            except NotAComplex as exc:
                raise NotADeformation(str(exc)) from exc
            total = total + D * (h**k)
        maps.append(total)
    return DeformedComplex(C, tuple(maps))


def specialize(D: DeformedComplex, h0) -> FiniteComplex:
    """
    Evaluate every entry at h = h0.

    Raises:
        PoleAtSpecialization: some entry has a pole at h0
    """
    return FiniteComplex(D.dims, tuple(_specialize_matrix(M, h0) for M in D.maps))


@dataclass
class InvarianceReport:
    chi_base: int
    chi_deformed: int
    dims_base: List[int]
    dims_deformed: List[int]
    chi_equal: bool
    dims_nonincreasing: bool

    def to_row(self) -> Dict[str, object]:
        return {
            "chi_base": self.chi_base,
            "chi_deformed": self.chi_deformed,
            "dims_base": self.dims_base,
            "dims_deformed": self.dims_deformed,
            "chi_equal": self.chi_equal,
            "dims_nonincreasing": self.dims_nonincreasing,
        }


def invariance_report(D: DeformedComplex) -> InvarianceReport:
    """Cohomology over QQ(h) against the base; χ equality and dim H^n non-increase."""
    dims_base = D.base.cohomology_dims()
    dims_deformed = D.cohomology_dims()
    chi_base = _alternating(dims_base)
    chi_deformed = _alternating(dims_deformed)
    return InvarianceReport(
        chi_base,
        chi_deformed,
        dims_base,
        dims_deformed,
        chi_base == chi_deformed,
        all(d <= b for d, b in zip(dims_deformed, dims_base)),
    )


# Random complexes


@dataclass
class ComplexShape:
    """Block sizes of the splitting V^i = B^i ⊕ H^i ⊕ C^i, with rank(δ_i) = ranks[i]."""
    hdims: List[int]
    ranks: List[int]
    jumps: List[int] = dc_field(default_factory=list)

    @property
    def dims(self) -> List[int]:
        n = len(self.hdims)
        return [
            (self.ranks[i - 1] if i > 0 else 0) + self.hdims[i] + (self.ranks[i] if i < n - 1 else 0)
            for i in range(n)
        ]


def random_shape(rng: np.random.Generator, max_dim: int, max_len: int) -> ComplexShape:
    """Block sizes for a complex of 2..max_len spaces, each of dim <= max_dim."""
    if max_len < 2 or max_dim < 1:
        raise OutOfRange(f"need max_len >= 2 and max_dim >= 1, got {max_len}, {max_dim}")
    length = int(rng.integers(2, max_len + 1))
    while True:
        ranks = [int(r) for r in rng.integers(0, MAX_BLOCK + 1, size=length - 1)]
        hdims = [int(h) for h in rng.integers(0, MAX_BLOCK + 1, size=length)]
        shape = ComplexShape(hdims, ranks)
        if max(shape.dims) <= max_dim:
            return shape


def _standard_maps(shape: ComplexShape, field: ScalarField) -> List[DomainMatrix]:
    """C^i -> B^(i+1) identity blocks."""
    dims = shape.dims
    out = []
    for i, r in enumerate(shape.ranks):
        offset = (shape.ranks[i - 1] if i > 0 else 0) + shape.hdims[i]
        dod = {k: {offset + k: field.one} for k in range(r)}
        out.append(DomainMatrix.from_dod(dod, (dims[i + 1], dims[i]), field.domain))
    return out


def _jump_maps(shape: ComplexShape, field: ScalarField) -> List[DomainMatrix]:
    """Last jumps[i] vectors of H^i onto the first jumps[i] vectors of H^(i+1)."""
    dims = shape.dims
    out = []
    for i, k in enumerate(shape.jumps):
        source = (shape.ranks[i - 1] if i > 0 else 0) + shape.hdims[i] - k
        target = shape.ranks[i]
        dod = {target + t: {source + t: field.one} for t in range(k)}
        out.append(DomainMatrix.from_dod(dod, (dims[i + 1], dims[i]), field.domain))
    return out


def _random_unimodular(rng: np.random.Generator, n: int) -> DomainMatrix:
    """L·U with unit triangular integer factors."""
    lower = np.tril(rng.integers(-ENTRY_RANGE, ENTRY_RANGE + 1, size=(n, n)), -1) + np.eye(n, dtype=int)
    upper = np.triu(rng.integers(-ENTRY_RANGE, ENTRY_RANGE + 1, size=(n, n)), 1) + np.eye(n, dtype=int)
    return _matrix((lower @ upper).tolist(), (n, n), RATIONAL)


def _random_nilpotent(rng: np.random.Generator, n: int) -> DomainMatrix:
    strict = np.tril(rng.integers(-ENTRY_RANGE, ENTRY_RANGE + 1, size=(n, n)), -1)
    return _matrix(strict.tolist(), (n, n), RATIONAL)


def _inverse(A: DomainMatrix) -> DomainMatrix:
    if A.shape[0] == 0:
        return A
    return A.inv()


def _unipotent_inverse(E: DomainMatrix, h) -> DomainMatrix:
    """(I + h·E)^(-1) = Σ (-h·E)^k for nilpotent E."""
    n = E.shape[0]
    step = E * (-h)
    total = DomainMatrix.eye(n, DEFORMATION.domain)
    power = total
    for _ in range(n):
        power = power * step
        if power.is_zero_matrix:
            break
        total = total + power
    return total


def random_complex(rng: np.random.Generator, max_dim: int = DEFAULT_MAX_DIM, max_len: int = DEFAULT_MAX_LENGTH) -> FiniteComplex:
    """A valid complex with M_i = A_(i+1)·S_i·A_i^(-1), S_i in standard form."""
    shape = random_shape(rng, max_dim, max_len)
    gauges = [_random_unimodular(rng, d) for d in shape.dims]
    standard = _standard_maps(shape, RATIONAL)
    maps = tuple(gauges[i + 1] * S * _inverse(gauges[i]) for i, S in enumerate(standard))
    return FiniteComplex(tuple(shape.dims), maps)


def random_deformation(
    rng: np.random.Generator, max_dim: int = DEFAULT_MAX_DIM, max_len: int = DEFAULT_MAX_LENGTH
) -> DeformedComplex:
    """
    A random complex and a deformation of it.

    In standard form the deformation is S_i + h·J_i with J_i a partial
    identity between H blocks (J_(i+1)·J_i = 0 by disjoint supports); it is
    then moved by A_i·(I + h·E_i) with E_i nilpotent, so every entry stays
    polynomial in h.
    """
    shape = random_shape(rng, max_dim, max_len)
    jumps = []
    previous = 0
    for i in range(len(shape.ranks)):
        k = int(rng.integers(0, min(shape.hdims[i] - previous, shape.hdims[i + 1]) + 1))
        jumps.append(k)
        previous = k
    shape.jumps = jumps

    dims = shape.dims
    K = DEFORMATION.domain
    h = DEFORMATION.h
    gauges = [_random_unimodular(rng, d) for d in dims]
    inverses = [_inverse(A) for A in gauges]
    nilpotents = [_random_nilpotent(rng, d) for d in dims]

    standard = _standard_maps(shape, RATIONAL)
    base = FiniteComplex(
        tuple(dims), tuple(gauges[i + 1] * S * inverses[i] for i, S in enumerate(standard))
    )

    deformed = []
    jump_maps = _jump_maps(shape, DEFORMATION)
    for i, S in enumerate(standard):
        left = gauges[i + 1].convert_to(K) * (
            DomainMatrix.eye(dims[i + 1], K) + nilpotents[i + 1].convert_to(K) * h
        )
        right = _unipotent_inverse(nilpotents[i].convert_to(K), h) * inverses[i].convert_to(K)
        middle = S.convert_to(K) + jump_maps[i] * h
        deformed.append(left * middle * right)
    return DeformedComplex(base, tuple(deformed))


def _random_rational(rng: np.random.Generator) -> Fraction:
    return Fraction(int(rng.integers(2, 60)), int(rng.integers(1, 60)))


def generic_specialization_matches(D: DeformedComplex, rng: np.random.Generator) -> bool:
    """dims at a random rational h0 equal the generic dims, re-rolling h0 up to MAX_REROLLS times."""
    generic = D.cohomology_dims()
    for _ in range(MAX_REROLLS + 1):
        h0 = _random_rational(rng)
        try:
            if specialize(D, h0).cohomology_dims() == generic:
                return True
        except PoleAtSpecialization:
            continue
    return False


@dataclass
class FuzzRow:
    seed: int
    dims_base: List[int]
    dims_deformed: List[int]
    chi: int
    flags: Dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.flags.values())

    def to_row(self) -> Dict[str, object]:
        return {
            "seed": self.seed,
            "dims_base": self.dims_base,
            "dims_deformed": self.dims_deformed,
            "chi": self.chi,
            "flags": dict(self.flags),
        }


def fuzz_case(seed: int, max_dim: int = DEFAULT_MAX_DIM, max_len: int = DEFAULT_MAX_LENGTH) -> FuzzRow:
    """One seeded random deformation and every invariance check on it."""
    rng = np.random.default_rng(seed)
    D = random_deformation(rng, max_dim, max_len)
    report = invariance_report(D)
    flags = {
        "chi_d_equals_chi_h": D.base.chi_dimensional() == D.base.chi_homological(),
        "chi_equal": report.chi_equal,
        "dims_nonincreasing": report.dims_nonincreasing,
        "generic_specialization": generic_specialization_matches(D, rng),
    }
    return FuzzRow(seed, report.dims_base, report.dims_deformed, report.chi_base, flags)


def fuzz(
    count: int = DEFAULT_FUZZ_COUNT,
    max_dim: int = DEFAULT_MAX_DIM,
    max_len: int = DEFAULT_MAX_LENGTH,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> List[FuzzRow]:
    """count cases with seeds seed, seed+1, ...; rows come back in seed order."""
    seeds = [seed + i for i in range(count)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(fuzz_case, seeds, [max_dim] * count, [max_len] * count))
    else:
        rows = [fuzz_case(s, max_dim, max_len) for s in seeds]
    failed = [row.seed for row in rows if not row.passed]
    if failed:
        logger.warning("Euler-Poincaré fuzz: %d failing seeds: %s", len(failed), failed)
    else:
        logger.info("Euler-Poincaré fuzz: %d cases passed", count)
    return rows


# Bigraded characteristic of k[x,y]


@dataclass
class ChiTable:
    entries: Dict[Tuple[int, int], int]
    mismatches: List[Tuple[int, int]]

    def total(self) -> int:
        return sum(self.entries.values())


def chi_bidegree_table(
    bound: Tuple[int, int] = (4, 4),
    cross_check: bool = False,
    check_bound: Optional[Tuple[int, int]] = None,
) -> ChiTable:
    """
    χ_(r,s) = h0 - h1 + h2 for -1 <= r <= bound[0], -1 <= s <= bound[1].

    With cross_check, every bidegree within check_bound (default: the whole
    range) is recomputed from window cohomology in arities 0..3 and compared
    entry by entry with the closed form.
    """
    entries = {}
    mismatches = []
    limit = check_bound or bound
    for r in range(-1, bound[0] + 1):
        for s in range(-1, bound[1] + 1):
            dims = hkr_cohomology_dims((r, s))
            entries[(r, s)] = _alternating(dims)
            if not cross_check or r > limit[0] or s > limit[1]:
                continue
            window_dims = [
                window_cohomology_dims(None, n, (r, s), CochainWindow.default(n, (r, s))).dim
                for n in range(4)
            ]
            if window_dims != list(dims) + [0]:
                logger.warning("window dims %s disagree with %s at %s", window_dims, dims, (r, s))
                mismatches.append((r, s))
    return ChiTable(entries, mismatches)
