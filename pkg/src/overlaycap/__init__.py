"""Transmission capacities of overlaid primary/secondary Poisson ad hoc networks."""

from .capacity_model import (
    DEFAULT_CHANNEL,
    DEFAULT_PR,
    DEFAULT_SR,
    CapacityReport,
    ChannelParams,
    TierParams,
    overlaid_report,
)
from .stable_interference import InterferenceComponent, StableLaw

__all__ = [
    "DEFAULT_CHANNEL",
    "DEFAULT_PR",
    "DEFAULT_SR",
    "CapacityReport",
    "ChannelParams",
    "InterferenceComponent",
    "StableLaw",
    "TierParams",
    "overlaid_report",
]
