"""Minimum-error discrimination of quantum channels under parallel, sequential,
causally separable and general strategies, with exactly certified bounds."""
__version__ = "0.1.0"

from qdisc.channels import (  # noqa: E402
    Ensemble,
    amplitude_damping,
    bit_flip,
    ensemble,
    ensemble_from_specs,
    parse_channel_spec,
    preparation_channel,
    random_channel,
)
from qdisc.certify import Certificate, CertificationFailed, verify  # noqa: E402
from qdisc.sdp import discriminate  # noqa: E402
from qdisc.strategies import ALL_STRATEGIES, GEN, HIERARCHY, PAR, SEP, SEQ12, SEQ21, Strategy  # noqa: E402

__all__ = [
    "ALL_STRATEGIES", "Certificate", "CertificationFailed", "Ensemble", "GEN", "HIERARCHY", "PAR",
    "SEP", "SEQ12", "SEQ21", "Strategy", "amplitude_damping", "bit_flip", "discriminate",
    "ensemble", "ensemble_from_specs", "parse_channel_spec", "preparation_channel", "random_channel",
    "verify", "__version__",
]
