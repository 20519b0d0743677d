# League shape
N_TEAMS = 20
STRENGTH_SD = 0.35

# Grid axes
DGPS = ("bvp", "bvn")
RHO_STAR_GRID = (-0.8, -0.4, 0.0)
T_STAR_GRID = (0.0, 0.25, 0.5)
SEASONS_PER_CELL = {"desk": 25, "full": 100}

# Rounded truncated-normal goals
BVN_MEAN = 0.2
BVN_SD = 1.75
BVN_LOWER = -0.49
BVN_T_STARS = (0.0, 0.25, 0.5)

# Paired-comparison model priors (normal priors written N(mean, variance))
PAIRED_ALPHA_PRIOR_VARIANCE = 100.0
PAIRED_SIGMA_SHAPE = 1.0
PAIRED_SIGMA_RATE = 1.0

# Labels of simulated matches fed to the league model
SIM_LEAGUE_ID = "sim"
SIM_SEASON_ID = "sim"
