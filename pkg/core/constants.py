"""
Core workbench constants.

Centralizes decoder defaults, experiment protocol values and identifiers.
"""

# Application Identifiers
APP_NAME = "l2box-workbench"
APP_VERSION = "0.1.0"

# Decoder Identifiers
DECODER_L2BOX = "l2box"
DECODER_PENALIZED = "penalized"
DECODER_BP = "bp"
DECODER_MINSUM = "minsum"
DECODER_NORMMINSUM = "normminsum"
ALL_MP_DECODERS = [DECODER_BP, DECODER_MINSUM, DECODER_NORMMINSUM]
ALL_DECODERS = [DECODER_L2BOX, DECODER_PENALIZED] + ALL_MP_DECODERS

# l2-box ADMM Defaults
DEFAULT_MU1 = 50.0
DEFAULT_MU2 = 50.0
DEFAULT_EPSILON = 1e-5
DEFAULT_ADMM_MAX_ITERS = 1000

# Penalized ADMM LP Defaults
DEFAULT_PENALIZED_MU = 5.0
DEFAULT_ALPHA = 1.0

# Message Passing Defaults
DEFAULT_MP_MAX_ITERS = 60
DEFAULT_NORMALIZATION = 0.75
DEFAULT_LLR_CLIP = 30.0

# Geometry Tolerances
PP_MEMBERSHIP_TOL = 1e-7
PP_FEASIBILITY_TOL = 1e-6
SPHERE_FEASIBILITY_TOL = 1e-9  # per coordinate
PP_BRUTEFORCE_MAX_DIM = 8
ML_BRUTEFORCE_MAX_K = 24

# Monte Carlo Protocol
DEFAULT_STOP_WORD_ERRORS = 200
DEFAULT_MAX_TRIALS = 10_000_000
DEFAULT_BATCH_SIZE = 64
DEFAULT_THREADS = 1
DEFAULT_SEED = 20240601
DEFAULT_CODE = "regular96"
DEFAULT_SNR_DB = 2.0
WILSON_Z = 1.96

# Transmit Modes
TRANSMIT_ALL_ZERO = "all_zero"
TRANSMIT_RANDOM = "random_codeword"

# Logging
DEFAULT_LOG_LEVEL = "INFO"

# CLI Exit Codes
EXIT_OK = 0
EXIT_INVALID_WORD = 1
EXIT_USAGE = 2
EXIT_IO = 3
