"""Absolute separability of quantum states and absolutely separating maps."""

__version__ = "0.1.0"

from .channels import (
    BipartiteDepolarizing,
    Depolarizing,
    GeneralizedPauli,
    LocalProduct,
    OneSided,
    TraceIdTranspose,
    TracingMap,
    UnitalQubit,
    apply,
    channel_from_dict,
    max_output_purity,
    min_output_entropy,
)
from .classifier import MapStatus, MapVerdict, classify_channel
from .linalg import ContractError, Spectrum
from .states import Bipartition, MultiPartition, Status, Verdict, classify_spectrum, classify_state, parse_partition
from .witness import Witness, product_rotation_witness, ppt_negativity, random_unitary_witness

__all__ = [
    "BipartiteDepolarizing",
    "Bipartition",
    "ContractError",
    "Depolarizing",
    "GeneralizedPauli",
    "LocalProduct",
    "MapStatus",
    "MapVerdict",
    "MultiPartition",
    "OneSided",
    "Spectrum",
    "Status",
    "TraceIdTranspose",
    "TracingMap",
    "UnitalQubit",
    "Verdict",
    "Witness",
    "apply",
    "channel_from_dict",
    "classify_channel",
    "classify_spectrum",
    "classify_state",
    "product_rotation_witness",
    "max_output_purity",
    "min_output_entropy",
    "parse_partition",
    "ppt_negativity",
    "random_unitary_witness",
]
