"""Entropies of quantum channels: map entropy versus optimized relative entropy."""

__version__ = "0.1.0"

from .channels import (
    Channel,
    amplitude_damping,
    apply,
    apply_extended,
    check_cptp,
    choi_from_kraus,
    depolarizing,
    identity,
    is_cptp,
    is_unital,
    kraus_from_choi,
    named_channel,
    partial_depolarizing,
    pauli_mixture,
    random_channel,
    random_unitary_mixture,
    sample_schmidt,
    schmidt_state,
    unitary,
)
from .entropy import (
    EntropyReport,
    channel_entropy,
    channel_relative_entropy,
    lemma1_gap,
    map_entropy,
    objective,
    relative_entropy,
    von_neumann,
)
from .errors import ChannelEntropyError
