"""Fundamental systems of units of real bi- and triquadratic fields.

The descent starts from the fundamental units of all quadratic subfields and
saturates: every {0,1}-exponent product of the current generators (up to
sign) is tested for being a square in the field, and each square found
replaces a generator by its square root.  Each replacement doubles the
generated group, so the unit index q(K) is 2^(number of replacements).
Exponent vectors over the quadratic units are tracked exactly, which gives
an independent determinant cross-check of q(K) and an exact test of group
equality against any reference generator list.

The 2-class number then follows from the unit-index class number formula
  degree 4:  h2(K) = q(K) / 2^2 * prod h2(subfields)
  degree 8:  h2(K) = q(K) / 2^9 * prod h2(subfields)
where a non-integer value certifies an inconsistent unit index.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .conditions import check_conditions, squarefree_part
from .fields import (
    MQElement,
    MQField,
    SignPattern,
    apply_automorphism,
    mqfield,
    sqrt_in_field,
)
from .quadratic import fundamental_unit, h2_of, quadratic_subfield_radicands

Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class AdjunctionStep:
    """One square root adjoined during saturation."""

    level: str  # "biquadratic" or "triquadratic"
    candidate: Vector  # exponents of the square over the quadratic units
    replaced: int  # generator slot that received the root


@dataclass(frozen=True)
class FsuResult:
    """A fundamental system of units together with its provenance."""

    field: MQField
    unit_basis: tuple[int, ...]  # radicands of the quadratic subfields
    generators: tuple[MQElement, ...]
    exponents: tuple[Vector, ...]  # generator exponents over the unit basis
    q_index: int
    provenance: tuple[AdjunctionStep, ...]
    subfield_h2: tuple[int, ...] | None = None
    h2: Fraction | None = None

    def generator_names(self) -> tuple[str, ...]:
        return tuple(_vector_name(v, self.unit_basis) for v in self.exponents)


def _vector_name(vec: Vector, basis: tuple[int, ...]) -> str:
    den = 1
    for c in vec:
        den = max(den, c.denominator)
    parts = []
    for c, d in zip(vec, basis):
        e = c * den
        if e == 0:
            continue
        parts.append(f"eps{d}" if e == 1 else f"eps{d}^{e}")
    body = "*".join(parts) if parts else "1"
    if den == 1:
        return body
    if den == 2:
        return f"sqrt({body})"
    if den == 4:
        return f"4rt({body})"
    return f"({body})^(1/{den})"


# -- exact linear algebra over Q ---------------------------------------------


def det_fraction(rows: list[Vector]) -> Fraction:
    n = len(rows)
    m = [list(r) for r in rows]
    det = Fraction(1)
    for i in range(n):
        pivot = next((r for r in range(i, n) if m[r][i]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != i:
            m[i], m[pivot] = m[pivot], m[i]
            det = -det
        det *= m[i][i]
        inv = 1 / m[i][i]
        for r in range(i + 1, n):
            f = m[r][i] * inv
            if f:
                for c in range(i, n):
                    m[r][c] -= f * m[i][c]
    return det


def solve_fraction(rows: list[Vector], target: Vector) -> list[Fraction] | None:
    """Solve sum_i x_i * rows[i] = target over Q, or None if unsolvable."""
    n = len(rows)
    width = len(target)
    aug = [[Fraction(rows[i][j]) for i in range(n)] for j in range(width)]
    rhs = [Fraction(t) for t in target]
    piv_cols: list[int] = []
    row = 0
    for col in range(n):
        pivot = next((r for r in range(row, width) if aug[r][col]), None)
        if pivot is None:
            continue
        aug[row], aug[pivot] = aug[pivot], aug[row]
        rhs[row], rhs[pivot] = rhs[pivot], rhs[row]
        inv = 1 / aug[row][col]
        aug[row] = [v * inv for v in aug[row]]
        rhs[row] *= inv
        for r in range(width):
            if r != row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
                rhs[r] -= f * rhs[row]
        piv_cols.append(col)
        row += 1
    x = [Fraction(0)] * n
    for r, col in enumerate(piv_cols):
        x[col] = rhs[r]
    # consistency on the remaining equations
    for j in range(width):
        if sum(x[i] * rows[i][j] for i in range(n)) != target[j]:
            return None
    return x


def in_lattice(rows: list[Vector], target: Vector) -> bool:
    x = solve_fraction(rows, target)
    return x is not None and all(c.denominator == 1 for c in x)


# -- saturation ---------------------------------------------------------------


def _sign_split(elem: MQElement) -> MQElement | None:
    """The totally positive one of +-elem, or None if the signs are mixed."""
    signs = elem.signs_at_embeddings()
    if all(s > 0 for s in signs):
        return elem
    if all(s < 0 for s in signs):
        return -elem
    return None


def _saturate(
    gens: list[tuple[MQElement, Vector]],
    level: str,
    steps: list[AdjunctionStep],
) -> None:
    """Adjoin square roots of {0,1}-products until none remain."""
    tested: set[tuple] = set()
    while True:
        k = len(gens)
        found = None
        for mask in range(1, 1 << k):
            cand = None
            for i in range(k):
                if (mask >> i) & 1:
                    cand = gens[i][0] if cand is None else cand * gens[i][0]
            key = cand.coords
            if key in tested:
                continue
            pos = _sign_split(cand)
            if pos is None:
                tested.add(key)
                continue
            root = sqrt_in_field(pos)
            if root is None:
                tested.add(key)
                continue
            found = (mask, root)
            break
        if found is None:
            return
        mask, root = found
        vec = _half_sum(gens, mask)
        replaced = mask.bit_length() - 1  # highest set bit keeps shared units stable
        steps.append(AdjunctionStep(level=level, candidate=_sum_vec(gens, mask), replaced=replaced))
        gens[replaced] = (root, vec)


def _sum_vec(gens, mask) -> Vector:
    width = len(gens[0][1])
    acc = [Fraction(0)] * width
    for i, (_, vec) in enumerate(gens):
        if (mask >> i) & 1:
            for j, c in enumerate(vec):
                acc[j] += c
    return tuple(acc)


def _half_sum(gens, mask) -> Vector:
    return tuple(c / 2 for c in _sum_vec(gens, mask))


def _unit_vector(basis: tuple[int, ...], d: int) -> Vector:
    return tuple(Fraction(1) if b == d else Fraction(0) for b in basis)


def _base_units(field: MQField, basis: tuple[int, ...]) -> list[tuple[MQElement, Vector]]:
    out = []
    for d in quadratic_subfield_radicands(field.radicands):
        unit = fundamental_unit(d)
        out.append((unit.as_element(field), _unit_vector(basis, d)))
    return out


@lru_cache(maxsize=None)
def fsu_of(field: MQField) -> FsuResult:
    """Fundamental system of units of a real bi- or triquadratic field."""
    t = len(field.radicands)
    basis = quadratic_subfield_radicands(field.radicands)
    steps: list[AdjunctionStep] = []
    if t == 2:
        gens = _base_units(field, basis)
        _saturate(gens, "biquadratic", steps)
    elif t == 3:
        d0, d1, d2 = field.radicands
        gens_map: dict[tuple, tuple[MQElement, Vector]] = {}
        for pair in ((d0, d1), (d0, d2), (d0, squarefree_part(d1 * d2))):
            sub = fsu_of(mqfield(*pair))
            steps.extend(sub.provenance)
            for elem, vec in zip(sub.generators, sub.exponents):
                lifted = field.lift(elem)
                big_vec = _rebase(vec, sub.unit_basis, basis)
                gens_map.setdefault(lifted.coords, (lifted, big_vec))
        gens = [gens_map[k] for k in sorted(gens_map)]
        if len(gens) != field.degree - 1:
            raise AssertionError(
                f"expected {field.degree - 1} independent generators, got {len(gens)}"
            )
        _saturate(gens, "triquadratic", steps)
    else:
        raise ValueError("unit descent implemented for degrees 4 and 8")
    q_index = 1 << len(steps)
    vectors = [vec for _, vec in gens]
    d = det_fraction(vectors)
    if abs(d) * q_index != 1:
        raise AssertionError(
            f"determinant cross-check failed: |det| = {abs(d)}, q = {q_index}"
        )
    return FsuResult(
        field=field,
        unit_basis=basis,
        generators=tuple(e for e, _ in gens),
        exponents=tuple(vectors),
        q_index=q_index,
        provenance=tuple(steps),
    )


def _rebase(vec: Vector, small: tuple[int, ...], big: tuple[int, ...]) -> Vector:
    out = [Fraction(0)] * len(big)
    for c, d in zip(vec, small):
        if c:
            out[big.index(d)] = c
    return tuple(out)


def biquadratic_fsu(d1: int, d2: int, certificates=None) -> FsuResult:
    """FSU of Q(sqrt d1, sqrt d2), optionally cross-checked by certificates.

    Certificates whose radicals lie in the field must describe roots that
    the computed unit group already contains.
    """
    field = mqfield(d1, d2)
    result = fsu_of(field)
    for cert in certificates or ():
        root = cert.root_element()
        if all(field.contains_radical(r) for r in root.field.basis_radicals):
            vec = _unit_vector(result.unit_basis, cert.d)
            half = tuple(c / 2 for c in vec)
            if not in_lattice(list(result.exponents), half):
                raise AssertionError(
                    f"certificate root sqrt(eps_{cert.d}) missing from the unit group"
                )
    return result


def triquadratic_fsu(p: int, q: int) -> FsuResult:
    """FSU, unit index and 2-class number of Q(sqrt 2, sqrt p, sqrt q)."""
    cc = check_conditions(p, q)
    if not cc.cond1:
        raise ValueError(f"({p}, {q}) does not satisfy condition 1")
    return triquadratic_descent(p, q)


@lru_cache(maxsize=None)
def triquadratic_descent(p: int, q: int) -> FsuResult:
    """The descent itself, valid for any pair of distinct odd primes."""
    field = mqfield(2, p, q)
    result = fsu_of(field)
    h2s = tuple(h2_of(d) for d in result.unit_basis)
    h2 = class_number_formula(field, result.q_index, h2s)
    return FsuResult(
        field=result.field,
        unit_basis=result.unit_basis,
        generators=result.generators,
        exponents=result.exponents,
        q_index=result.q_index,
        provenance=result.provenance,
        subfield_h2=h2s,
        h2=h2,
    )


def norm_to_subfield(u: MQElement, s: SignPattern) -> MQElement:
    """Relative norm u * s(u); lands in the fixed field of s."""
    return u * apply_automorphism(u, s)


def class_number_formula(field: MQField, q_index: int, subfield_h2s) -> Fraction:
    """Unit-index class number formula for real multiquadratic fields.

    Returns an exact rational; a non-integer output signals an inconsistent
    q_index rather than an error.
    """
    h2s = list(subfield_h2s)
    if field.degree == 4:
        if len(h2s) != 3:
            raise ValueError("three quadratic subfield class numbers required")
        denom = 4
    elif field.degree == 8:
        if len(h2s) != 7:
            raise ValueError("seven quadratic subfield class numbers required")
        denom = 512
    else:
        raise ValueError("formula implemented for degrees 4 and 8")
    value = Fraction(q_index, denom)
    for h in h2s:
        value *= h
    return value


# -- comparison against reference generator lists ------------------------------


def reference_fsu_vectors(p: int, q: int) -> list[Vector]:
    """Exponent vectors of the classical FSU of Q(sqrt2, sqrt p, sqrt q).

    Over the unit basis sorted ascending, for condition-1 pairs:
    p = 5 (mod 8): eps2, eps_p, sqrt(eps_q), sqrt(eps_2q), sqrt(eps_pq),
                   sqrt(eps2 eps_p eps_2p), 4rt(eps_2q eps_pq eps_2pq);
    p = 3 (mod 8): eps2, sqrt(eps_q), sqrt(eps_2q), sqrt(eps_p),
                   sqrt(eps_2pq), 4rt(eps_2q eps_pq eps_2pq),
                   4rt(eps2^2 eps_q eps_2q eps_p eps_2p).
    """
    basis = quadratic_subfield_radicands((2, p, q))
    h = Fraction(1, 2)
    f = Fraction(1, 4)
    one = Fraction(1)

    def vec(entries: dict[int, Fraction]) -> Vector:
        return tuple(entries.get(d, Fraction(0)) for d in basis)

    if p % 8 == 5:
        return [
            vec({2: one}),
            vec({p: one}),
            vec({q: h}),
            vec({2 * q: h}),
            vec({p * q: h}),
            vec({2: h, p: h, 2 * p: h}),
            vec({2 * q: f, p * q: f, 2 * p * q: f}),
        ]
    if p % 8 == 3:
        return [
            vec({2: one}),
            vec({q: h}),
            vec({2 * q: h}),
            vec({p: h}),
            vec({2 * p * q: h}),
            vec({2 * q: f, p * q: f, 2 * p * q: f}),
            vec({2: h, q: f, 2 * q: f, p: f, 2 * p: f}),
        ]
    raise ValueError("reference list exists only for p = 3, 5 (mod 8)")


@dataclass(frozen=True)
class GroupComparison:
    same_group: bool
    reference_in_computed: tuple[bool, ...]
    computed_in_reference: tuple[bool, ...]
    det_ratio: Fraction


def compare_unit_groups(fsu: FsuResult, reference: list[Vector]) -> GroupComparison:
    """Exact equality test of the generated unit groups (mod +-1)."""
    comp = list(fsu.exponents)
    ref_in = tuple(in_lattice(comp, v) for v in reference)
    comp_in = tuple(in_lattice(reference, v) for v in comp)
    det_ratio = det_fraction(reference) / det_fraction(comp)
    same = all(ref_in) and all(comp_in) and abs(det_ratio) == 1
    return GroupComparison(same, ref_in, comp_in, det_ratio)


def sqrt_totally_positive(elem: MQElement) -> MQElement | None:
    """Square root of whichever of +-elem is totally positive."""
    pos = _sign_split(elem)
    if pos is None:
        return None
    return sqrt_in_field(pos)


def build_reference_generator(fsu: FsuResult, vec: Vector) -> MQElement | None:
    """Construct the unit with the given exponent vector by nested roots.

    Doubling the vector until integral gives a product of quadratic units;
    repeated exact square roots then descend to the generator itself.
    """
    field = fsu.field
    depth = 0
    scaled = vec
    while any(c.denominator != 1 for c in scaled):
        scaled = tuple(c * 2 for c in scaled)
        depth += 1
    elem = field.one()
    for c, d in zip(scaled, fsu.unit_basis):
        if c:
            elem = elem * fundamental_unit(d).as_element(field) ** int(c)
    for _ in range(depth):
        elem = sqrt_totally_positive(elem)
        if elem is None:
            return None
    return elem
