"""
Cellblind Package
Blind interference alignment for cellular networks
"""

__version__ = "1.0.0"
__author__ = "Cellblind Team"

from .net_model import CBProblem, CellGrouping, NetworkTopology, Node
from .channel import FadingSpec, ChannelRealization, sample_channels
from .schemes import LinearScheme, Schedule, Stream, aligned_reuse, conventional_reuse
from .verifier import DoFReport, verify, verify_exact
from .bounds import BoundReport, converse_lp, orthogonal_max
from .index_coding import GICProblem, cb_to_gic, gic_to_cb, half_dof_feasible, verify_xor_scheme
from .simulator import RateTable, estimate_dof, simulate_rates

__all__ = [
    'CBProblem',
    'CellGrouping',
    'NetworkTopology',
    'Node',
    'FadingSpec',
    'ChannelRealization',
    'sample_channels',
    'LinearScheme',
    'Schedule',
    'Stream',
    'aligned_reuse',
    'conventional_reuse',
    'DoFReport',
    'verify',
    'verify_exact',
    'BoundReport',
    'converse_lp',
    'orthogonal_max',
    'GICProblem',
    'cb_to_gic',
    'gic_to_cb',
    'half_dof_feasible',
    'verify_xor_scheme',
    'RateTable',
    'estimate_dof',
    'simulate_rates',
]
