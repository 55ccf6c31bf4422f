"""triquad: exact arithmetic and 2-adic invariants of multiquadratic fields.

The package verifies, by exact finite computation, the unit groups and
2-class numbers of the real triquadratic fields Q(sqrt 2, sqrt p, sqrt q),
prime decomposition along the cyclotomic 2-tower, and the resulting
Iwasawa-invariant predictions for Q(sqrt p, sqrt q, i).
"""

from ._kernels import BACKEND
from .conditions import check_conditions, is_prime, legendre
from .fields import (
    MQElement,
    MQField,
    SignPattern,
    apply_automorphism,
    embed,
    mq_mul,
    mqfield,
    sqrt_in_field,
)
from .iwasawa import (
    KidaInput,
    fukuda_propagate,
    kida_lambda,
    pi_layer,
    predict_structure,
    rank_from_lambda,
)
from .quadratic import QuadUnit, class_group, fundamental_unit, h2_of
from .certificates import (
    check_lemma_a5,
    classify_decomposition,
    verify_lemma_families,
)
from .report import run_verification, survey
from .splitting import AbelianField, SplittingData, field_for, layer_splitting, split_prime
from .wada import (
    FsuResult,
    biquadratic_fsu,
    class_number_formula,
    norm_to_subfield,
    triquadratic_fsu,
)

__version__ = "0.1.0"
