"""Classical complexity quantifiers."""

from .entropy import SymbolDistribution, shannon_entropy
from .geometry import (
    BinaryGrid2D,
    BoxCountFit,
    box_counting_dimension,
    default_box_sizes,
    filled_grid,
    koch_raster,
    lacunarity,
    line_grid,
    read_pbm,
    write_pbm,
)
from .lyapunov import TrajectoryPair, iterate_map_pair, largest_lyapunov
from .lz77 import compress, decompress, description_length_proxy, logical_depth_proxy
from .sandpile import SandpileState, log_binned_frequency, relax, sandpile_avalanches

__all__ = [
    "BinaryGrid2D",
    "BoxCountFit",
    "SandpileState",
    "SymbolDistribution",
    "TrajectoryPair",
    "box_counting_dimension",
    "compress",
    "decompress",
    "default_box_sizes",
    "description_length_proxy",
    "filled_grid",
    "iterate_map_pair",
    "koch_raster",
    "lacunarity",
    "largest_lyapunov",
    "line_grid",
    "log_binned_frequency",
    "logical_depth_proxy",
    "read_pbm",
    "relax",
    "sandpile_avalanches",
    "shannon_entropy",
    "write_pbm",
]
