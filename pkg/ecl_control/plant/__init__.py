from .systems import DynamicPolicy, OutputPlant, Plant, StaticGain, gain_matrix  # noqa
from .closed_loop import (  # noqa
    ClosedLoop,
    assemble_closed_loop,
    closed_loop,
    resolvent,
    state_feedback_closed_loop,
    transfer_at,
    tzw_at,
)
