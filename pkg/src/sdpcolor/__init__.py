"""SDP certificates, formulations, and heuristics for graph coloring."""

from .graphs import Coloring, Graph, KTreeTrace
from .sdp import SdpProblem, SdpSolution, solve

__all__ = [
    "Coloring",
    "Graph",
    "KTreeTrace",
    "SdpProblem",
    "SdpSolution",
    "solve",
]
