"""Executable toolkit for complete one-way functions: tiling expansion,
machine-to-tile compilation, GF(2^n) hashing transforms, perfect rounding of
measures, and Las Vegas inversion with volume betting."""

from .gf2 import FieldElement, inv, mul, reduction_polynomial
from .rounding import Dyadic, Measure, RoundedDistribution, check_perfectly_rounded, m_decode, m_encode, perfect_round
from .tableau import CompiledReduction, compile_to_tiles
from .tiling import ParseError, Tile, TileSet, figure_tiles, tiling_expansion
from .transform import CandidateFunction, compress_to_length, pair_hash, sibling_separate, sibling_stats
from .turing import Machine, force_length, program_prefix_embed, tm_run
from .vegas import DiceStream, GeneratorRegistry, LProgram, invert_optimal, multimedian, run_l, sample_complete

__version__ = "0.1.0"

__all__ = [
    "FieldElement", "inv", "mul", "reduction_polynomial",
    "Dyadic", "Measure", "RoundedDistribution", "check_perfectly_rounded", "m_decode", "m_encode",
    "perfect_round",
    "CompiledReduction", "compile_to_tiles",
    "ParseError", "Tile", "TileSet", "figure_tiles", "tiling_expansion",
    "CandidateFunction", "compress_to_length", "pair_hash", "sibling_separate", "sibling_stats",
    "Machine", "force_length", "program_prefix_embed", "tm_run",
    "DiceStream", "GeneratorRegistry", "LProgram", "invert_optimal", "multimedian", "run_l",
    "sample_complete",
]
