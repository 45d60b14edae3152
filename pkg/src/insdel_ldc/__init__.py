"""Locally decodable and correctable codes for insertion/deletion channels."""

from .bitstring import BitString, EditScript, Delete, Insert, apply_edit_script, edit_distance
from .channel import corrupt
from .decoder import DecodeSession, WordOracle, block_decode, buff_find, interval_decode, noisy_binary_search
from .encoder import Code, build_code, desk_config, encode
from .goodness import analyze, check_bounds
from .inner import build_codebook, dec_in, enc_in
from .outer import BOTTOM, HadamardCode
from .params import CodeParams, derive_params

__version__ = "0.1.0"
