# Step-size adaptation (Robbins-Monro on the log step, active during burn-in)
TARGET_ACCEPTANCE = 0.30
ADAPTATION_WINDOW = 100
ADAPTATION_DECAY = 0.6
INITIAL_LOG_STEP = -1.0
MIN_LOG_STEP = -12.0
MAX_LOG_STEP = 3.0

# Joint blocks learn a proposal covariance during the first half of burn-in
COVARIANCE_SCALE = 2.38
COVARIANCE_JITTER = 1e-10

# Starting points: target's initial point plus N(0, INIT_JITTER_SD^2) per coordinate
INIT_JITTER_SD = 0.1

# Chain profiles: (n_chains, iterations, burn_in)
CHAIN_PROFILES = {
    "zero": (3, 7000, 2000),
    "free": (3, 20000, 10000),
    "simulation": (2, 5000, 2000),
    "desk": (3, 3000, 1000),
}

# Convergence gate
RHAT_THRESHOLD = 1.05

# ESS never exceeds this multiple of the total retained draws
ESS_INFLATION_BOUND = 2.0

# Summary quantiles (percent)
SUMMARY_QUANTILES = (2.5, 25.0, 50.0, 75.0, 97.5)
