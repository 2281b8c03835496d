"""Two-scan, single-scan and compact single-scan min-sum decoders for binary LDPC codes."""

from .arith import FLOAT64, NumericMode, VariantRule, apply_variant, quantize, sgn
from .channel import ChannelParams, LlrMode, ebn0_to_sigma2, llr_init, modulate_bpsk, transmit_awgn, trial_seed
from .compact import CompactCheckState, CompactDecoder, compact_iterate, recover_message
from .core import ENGINES, DecodeResult, DecoderConfig, hard_decision, run_decode, syndrome
from .reference import ReferenceDecoder
from .single_scan import SingleScanDecoder, SingleScanState, single_scan_iterate
from .tanner import AlistError, CodeError, ParityCheckMatrix, from_triples, generate_regular, parse_alist, write_alist

__version__ = "0.1.0"
