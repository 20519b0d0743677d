# Density exports
DEFAULT_BINS = 50
MIN_BINS = 10
DENSITY_PARAMETERS = ("T", "T_prime")
DIFFERENCE_NAME = "T_minus_T_prime"

# Leagues counted as declining above these posterior probabilities
DECLINE_THRESHOLDS = (0.5, 0.9)

# Quadrants of the joint goals / yellow-cards report
QUADRANTS = ("both_decline", "goals_rise_yellows_decline", "both_rise", "goals_decline_yellows_rise")

# Artifact suffixes: <league>_<outcome>_<covariance>.<suffix>
SUMMARY_SUFFIX = "summary.csv"
DENSITY_SUFFIX = "density.csv"
DRAWS_SUFFIX = "draws.csv"
REPORT_SUFFIX = "report.json"
