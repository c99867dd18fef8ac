"""Demand-private coded caching: construction, exhaustive verifier, exact rates."""

from .combinatorics import binomial, rank_subset, unrank_subset
from .model import (
    BroadcastMessage,
    CacheContent,
    FileLibrary,
    SchemeParams,
    enumerate_worlds,
    sample_library,
    validate_params,
)
from .private import (
    PrivateScheme,
    compute_shifts,
    lift_demands,
    private_decode,
    private_deliver,
    private_place,
    run_episode,
    sample_keys,
)
from .rates import emit_curves, envelope, rate_private, theorem2_report
from .verifier import WorldPolicy, check_decodability, check_privacy_uniform, mutual_information, verify
from .yma import yma_decode, yma_deliver, yma_place, yma_rate

__version__ = "0.1.0"
