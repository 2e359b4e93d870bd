"""Multi-kernel polar codes: kernels, transforms, distance spectra, frozen-set
design, SC/SCL decoding and Monte-Carlo simulation."""

from ._backend import BACKEND
from .crc import CrcConfig
from .decode import crc_aided_select, ml_decode_bruteforce, path_metric_update, sc_decode, scl_decode
from .design import (DesignResult, ReliabilityProfile, dega_reliabilities, distance_design,
                     hybrid_design, kernel_order_search, reliability_design)
from .kernel import Kernel, KernelSpectrum, builtin_kernel, kernel_llr, kernel_llr_exact
from .sim import ChannelModel, SimConfig, SimRecord, bpsk_awgn_llrs, simulate_bler
from .spectrum import kronecker_spectrum, min_distance_bruteforce
from .transform import CodeSpec, KernelSequence, encode, polar_transform, transform_matrix

__version__ = "0.1.0"
