"""Interference creation-resurrection schemes for the two-user SISO X-channel
with alternating CSIT: channel simulation, exact decoding, DoF estimation and
classification of three-slot CSIT patterns."""

from .channel import (
    ChannelRealization,
    ReceivedBlock,
    SymbolVector,
    apply_channel,
    draw_channel,
    draw_symbols,
)
from .classifier import (
    PatternReport,
    Verdict,
    classify,
    enumerate_patterns,
    satisfies_theorem1,
)
from .csit import CsitPattern, CsitState, SlotCsit, dominates
from .decoder import DecodeResult, EffectiveSystem, assemble_effective_system, decode
from .dof import (
    DofEstimate,
    RatePoint,
    estimate_dof,
    sum_rate,
    weighted_average_dof,
)
from .schemes import (
    TABLE1,
    CsitAccessError,
    CsitView,
    SchemeId,
    TransmitPlan,
    build_plan,
    build_tdm_plan,
    select_scheme,
)

__version__ = "0.1.0"
