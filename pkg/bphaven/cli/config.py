# Commands
COMMANDS = ("validate", "fit", "simulate", "report")

# Run profiles: chain profile per covariance mode and simulated seasons per grid cell
PROFILES = {
    "desk": {"chains": {"zero": "desk", "free": "desk"}, "seasons_per_cell": "desk"},
    "full": {"chains": {"zero": "zero", "free": "free"}, "seasons_per_cell": "full"},
    "paper-scale": {"chains": {"zero": "zero", "free": "free"}, "seasons_per_cell": "full"},
}
PROFILE_ALIASES = {"published": "paper-scale"}
DEFAULT_PROFILE = "desk"

# Covariance mode used when --cov is not given
DEFAULT_COVARIANCE = {"goals": "zero", "yellows": "free"}

# Output file names
MANIFEST_TEMPLATE = "manifest.{tag}.json"
STAGE1_TEMPLATE = "stage1_{outcome}.json"
RUN_LOG = "run.log"

# RunConfig fields left out of manifests and config hashes
EXECUTION_FIELDS = ("n_jobs", "force")
