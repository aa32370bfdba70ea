# Value detectors read as "the base learner was wrong".
ERROR_SIGNAL = 1

# Half-width used to open a constant feature into a usable bin range.
DEGENERATE_LIMIT_EPSILON = 1e-9

NB_VARIANCE_FLOOR = 1e-9

# Reported mean detection distance when a run has no true positive.
MU_D_WITHOUT_TP = 1000.0

# Acceptance windows, as a fraction of the concept size.
ABRUPT_WINDOW_FRACTION = 0.02
GRADUAL_WINDOW_FRACTION = 0.10

DEFAULT_CONCEPT_SIZE = 10000
DEFAULT_PREP_SIZE = 50

BYTES_PER_GB = 1024 ** 3

# Grids above this many cells still work but get a warning: storage is dense.
DENSE_GRID_WARNING_CELLS = 10 ** 6

# Per-cell mutation timestamps kept for snapshots; detection only needs the last.
MUTATION_LOG_LENGTH = 16
