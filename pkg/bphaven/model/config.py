# Non-informative prior settings (normal priors written as N(mean, variance))
MU_PRIOR_MEAN = 0.0
MU_PRIOR_VARIANCE = 25.0
HA_PRIOR_MEAN = 0.0
HA_PRIOR_VARIANCE = 25.0

# Inverse-Gamma(shape, rate) on every hierarchical scale
SIGMA_PRIOR_SHAPE = 1.0
SIGMA_PRIOR_RATE = 1.0

# Prior variance of gamma = log(lambda3) by outcome
GAMMA_PRIOR_VARIANCE = {"goals": 0.5, "yellows": 2.0}

# Empirical-Bayes prior: s = 3 x SD of the stage-1 posterior means
EB_SD_MULTIPLIER = 3.0

# Effect families by outcome
EFFECT_FAMILIES = {"goals": ("attack", "defend"), "yellows": ("team_card",)}
SCALE_NAMES = {"attack": "sigma_att", "defend": "sigma_def", "team_card": "sigma_team"}
