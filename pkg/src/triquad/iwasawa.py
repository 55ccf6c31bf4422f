"""Tower bookkeeping and the lambda-invariant inference rules.

Combines four ingredients into per-pair predictions for F = Q(sqrt p,
sqrt q, i):

  * the tower of real layers Q(sqrt(pi_n)), pi_1 = 2, pi_n = 2 + sqrt(pi_{n-1});
  * a Riemann-Hurwitz style transfer of lambda-minus through a 2-extension
    of CM fields (ramification indices of primes coprime to 2);
  * the stabilization rule: once the 2-rank of the class group agrees at two
    consecutive layers of a totally ramified Z2-tower it is constant;
  * the rank law rank_2(A_n) = lambda for n >= lambda, under mu = 0 and an
    elementary Iwasawa module.

Computed facts are labelled VERIFIED; imported constants CONSISTENT; the
remaining hypotheses are ASSUMED and always listed, never silent.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .conditions import ConditionClass, check_conditions
from .fields import mqfield
from .intervals import Interval
from .quadratic import h2_of, quadratic_subfield_radicands
from .splitting import AbelianField, layer_splitting, real_cyclotomic_2power
from .wada import class_number_formula, fsu_of, triquadratic_descent


class Status(str, Enum):
    VERIFIED = "VERIFIED"
    CONSISTENT = "CONSISTENT"
    ASSUMED = "ASSUMED"


@dataclass(frozen=True)
class Assumption:
    name: str
    status: Status
    description: str


# lambda-minus of Q(sqrt q, i) for q = 7 (mod 16): an imported constant,
# stored with provenance rather than recomputed.
LAMBDA_MINUS_BASE = 1

BASE_ASSUMPTIONS = (
    Assumption(
        name="mu_zero",
        status=Status.ASSUMED,
        description="mu-invariants of the CM fields involved vanish",
    ),
    Assumption(
        name="elementary_lambda_module",
        status=Status.ASSUMED,
        description="the inverse limit of the 2-class groups is an elementary module",
    ),
)

LAMBDA_BASE_ASSUMPTION = Assumption(
    name="lambda_minus_base_field",
    status=Status.CONSISTENT,
    description="lambda^-(Q(sqrt q, i)) = 1 for q = 7 (mod 16), imported constant",
)

NO_FINITE_PART_CITATION = Assumption(
    name="minus_part_no_finite_submodule",
    status=Status.CONSISTENT,
    description="the minus part of the limit has no finite submodule once the "
    "plus-part class numbers are odd and the CM layers are unramified",
)


class NestedRadical:
    """pi_n: the tower element 2 + sqrt(2 + sqrt(2 + ...)), depth n."""

    __slots__ = ("n",)

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("depth must be at least 1")
        self.n = n

    def interval(self, prec: int = 64) -> Interval:
        iv = Interval.from_fraction(2, prec)
        for _ in range(self.n - 1):
            iv = iv.sqrt().shift(2)
        return iv

    def __repr__(self):
        text = "2"
        for _ in range(self.n - 1):
            text = f"2+√({text})"
        return text

    def __eq__(self, other):
        return isinstance(other, NestedRadical) and self.n == other.n


@dataclass(frozen=True)
class TowerLayer:
    """Layer n of the cyclotomic Z2-extension of Q: Q(sqrt(pi_n))."""

    n: int
    pi: NestedRadical
    field: AbelianField


def pi_layer(n: int) -> TowerLayer:
    """The n-th tower layer with its conductor-subgroup descriptor."""
    if n < 1:
        raise ValueError("n must be at least 1")
    pi = NestedRadical(n)
    field = real_cyclotomic_2power(n)
    layer = TowerLayer(n=n, pi=pi, field=field)
    iv = pi.interval(96)
    if not iv.is_positive():
        raise AssertionError("tower element must be positive")
    if field.degree != 1 << n:
        raise AssertionError("tower layer degree mismatch")
    return layer


@dataclass(frozen=True)
class KidaInput:
    """Data of a 2-extension of CM fields for the lambda transfer formula."""

    lambda_base: int
    delta_base: int
    delta_top: int
    degree: int
    e_list: tuple[int, ...]
    e_plus_list: tuple[int, ...]
    mu_base_zero: bool

    def __post_init__(self):
        if self.degree < 1 or self.degree & (self.degree - 1):
            raise ValueError("degree must be a power of 2")
        if self.delta_base not in (0, 1) or self.delta_top not in (0, 1):
            raise ValueError("delta flags must be 0 or 1")
        if any(e < 1 for e in self.e_list + self.e_plus_list):
            raise ValueError("ramification indices must be positive")


def kida_lambda(inp: KidaInput) -> int:
    """lambda^- of the top field from the base field's invariants."""
    if not inp.mu_base_zero:
        raise ValueError("the transfer formula requires mu^-(base) = 0")
    ram = sum(e - 1 for e in inp.e_list)
    ram_plus = sum(e - 1 for e in inp.e_plus_list)
    return (
        inp.degree * (inp.lambda_base - inp.delta_base)
        + ram
        - ram_plus
        + inp.delta_top
    )


@dataclass(frozen=True)
class RankInference:
    """Ranks known at some layers, completed by the stabilization rule."""

    known: tuple[tuple[int, int], ...]
    witness: int
    value: int

    def rank_at(self, n: int) -> int | None:
        for level, r in self.known:
            if level == n:
                return r
        return self.value if n >= self.witness else None


def fukuda_propagate(ranks: dict[int, int]) -> RankInference:
    """Extend a partial rank map to all higher layers.

    A witness is either rank(A_r) = rank(A_{r+1}) for consecutive known
    layers, or a layer of rank 0.  Later known ranks that exceed the
    stabilized value are inconsistent and rejected.
    """
    if not ranks:
        raise ValueError("at least one rank is required")
    items = sorted(ranks.items())
    witness = None
    value = None
    for n, r in items:
        if r == 0:
            witness, value = n, 0
            break
        if n + 1 in ranks and ranks[n + 1] == r:
            witness, value = n, r
            break
    if witness is None:
        raise ValueError(
            "no stabilization witness: need equal ranks at consecutive layers"
        )
    for n, r in items:
        if n >= witness and r != value:
            raise ValueError(
                f"rank {r} at layer {n} contradicts stabilization at {witness}"
            )
    return RankInference(known=tuple(items), witness=witness, value=value)


@dataclass(frozen=True)
class RankBound:
    value: int
    exact: bool

    def __str__(self):
        return str(self.value) if self.exact else f"<= {self.value}"


def rank_from_lambda(lam: int, n: int) -> RankBound:
    """rank_2(A_n) = lambda for n >= lambda; below that only a bound."""
    if lam < 0 or n < 0:
        raise ValueError("negative arguments")
    if lam == 0 or n >= lam:
        return RankBound(value=lam, exact=True)
    return RankBound(value=lam, exact=False)


@dataclass(frozen=True)
class LayerCheck:
    """Exact 2-class numbers of the first real tower layers over (p, q)."""

    h2_layer0: int
    h2_layer1: int
    q_index_layer0: int
    q_index_layer1: int
    plus_ranks: RankInference


@dataclass(frozen=True)
class IwasawaReport:
    p: int
    q: int
    condition: ConditionClass
    q_mod16: int
    no_finite_part: bool
    lambda_minus: int | None
    structure: str
    rank_threshold: int | None
    rank_value: int | None
    assumptions: tuple[Assumption, ...]
    layer_check: LayerCheck | None
    stable_g_full: int | None
    stable_g_plus: int | None
    kida: KidaInput | None

    def rank_claim(self, n: int) -> RankBound | None:
        if self.lambda_minus is None:
            return None
        return rank_from_lambda(self.lambda_minus, n)

    @property
    def structure_determined(self) -> bool:
        return self.structure != "undetermined"


def verify_plus_layers(p: int, q: int) -> LayerCheck:
    """Layers 0 and 1 of the real tower over Q(sqrt p, sqrt q), exactly.

    Layer 0 is the biquadratic field itself, layer 1 adjoins sqrt 2; both
    2-class numbers come from the unit-index formula, and rank 0 at two
    consecutive layers feeds the stabilization rule.
    """
    field0 = mqfield(p, q)
    fsu0 = fsu_of(field0)
    h2s0 = tuple(h2_of(d) for d in quadratic_subfield_radicands((p, q)))
    h2_0 = class_number_formula(field0, fsu0.q_index, h2s0)
    fsu1 = triquadratic_descent(p, q)
    h2_1 = fsu1.h2
    if h2_0.denominator != 1 or h2_1.denominator != 1:
        raise ArithmeticError("non-integer class number from the unit formula")
    ranks = {}
    if int(h2_0) == 1:
        ranks[0] = 0
    if int(h2_1) == 1:
        ranks[1] = 0
    inference = fukuda_propagate(ranks)
    return LayerCheck(
        h2_layer0=int(h2_0),
        h2_layer1=int(h2_1),
        q_index_layer0=fsu0.q_index,
        q_index_layer1=fsu1.q_index,
        plus_ranks=inference,
    )


def two_adically_totally_ramified(p: int, q: int) -> bool:
    """The tower over Q(sqrt p, sqrt q, i) is totally ramified above 2.

    Sufficient criterion: no quadratic subfield is Q(sqrt(+-2) * square),
    which holds since every subfield radicand of the CM field is odd.
    """
    radicands = [-1]
    for d in quadratic_subfield_radicands((p, q)):
        radicands.extend((d, -d))
    return all(d % 2 for d in radicands)


def cm_layers_unramified(q: int) -> bool:
    """F_n / F_n^+ is unramified at the finite primes.

    For q = 7 (mod 8), -q = 1 (mod 8) makes i a local square at 2 inside
    F_1^+, so the CM quadratic extension splits there; odd primes ramify in
    neither.
    """
    return q % 8 == 7


def predict_structure(p: int, q: int, verify_layers: bool = True) -> IwasawaReport:
    """Full prediction for the Iwasawa module of F = Q(sqrt p, sqrt q, i)."""
    cc = check_conditions(p, q)
    if not cc.in_family:
        raise ValueError(f"({p}, {q}) satisfies neither condition")
    assumptions = list(BASE_ASSUMPTIONS)
    layer_check = None
    if verify_layers:
        layer_check = verify_plus_layers(p, q)
        if layer_check.plus_ranks.value != 0:
            raise ArithmeticError("plus-part class groups did not stabilize at 0")
    if not two_adically_totally_ramified(p, q):
        raise ArithmeticError("tower is not totally ramified above 2")
    if not cm_layers_unramified(q):
        raise ArithmeticError("CM layers are ramified at a finite prime")
    assumptions.append(NO_FINITE_PART_CITATION)
    no_finite_part = True
    lambda_minus = None
    structure = "undetermined"
    rank_threshold = None
    rank_value = None
    g_full = g_plus = None
    kida = None
    if q % 16 == 7:
        ls_full = layer_splitting(p, q, 2, "full")
        ls_plus = layer_splitting(p, q, 2, "plus")
        g_full = ls_full.stable_g
        g_plus = ls_plus.stable_g
        kida = KidaInput(
            lambda_base=LAMBDA_MINUS_BASE,
            delta_base=1,
            delta_top=1,
            degree=2,
            e_list=(2,) * g_full,
            e_plus_list=(2,) * g_plus,
            mu_base_zero=True,
        )
        assumptions.append(LAMBDA_BASE_ASSUMPTION)
        lambda_minus = kida_lambda(kida)
        structure = f"Z2^{lambda_minus}"
        rank_threshold = max(lambda_minus, 0)
        rank_value = lambda_minus
    return IwasawaReport(
        p=p,
        q=q,
        condition=cc,
        q_mod16=q % 16,
        no_finite_part=no_finite_part,
        lambda_minus=lambda_minus,
        structure=structure,
        rank_threshold=rank_threshold,
        rank_value=rank_value,
        assumptions=tuple(assumptions),
        layer_check=layer_check,
        stable_g_full=g_full,
        stable_g_plus=g_plus,
        kida=kida,
    )
