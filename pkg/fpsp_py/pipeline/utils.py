"""Pipeline utilities.

Contains the manifest vocabulary, output layout and run defaults.
"""

# Manifest
MANIFEST_VERSION = 1
MANIFEST_NAME = 'manifest.json'
ROLE_TRAINING = 'training'
ROLE_TARGET = 'target'
USM_MEAN = 'mean'
USM_PROVIDED = 'provided'
ENCODING_PSM = 'psm'
ENCODING_DIFFERENCE = 'difference'

# Target-person data access purposes
PURPOSE_FIT = 'fit'
PURPOSE_EVALUATE = 'evaluate'

# Where target ground truth comes from
TARGET_SOURCE_AUTO = 'auto'
TARGET_SOURCE_MAPS = 'maps'
TARGET_SOURCE_FIXATIONS = 'fixations'

# Common images per target person
DEFAULT_COMMON_IMAGES = 100

# Splits: 500 test images of 1600, 10 target persons of 30
DEFAULT_TEST_FRACTION = 0.3125
DEFAULT_TARGET_FRACTION = 1 / 3

# Output layout
MODELS_DIR = 'models'
PREDICTIONS_DIR = 'predictions'
SELECTION_FILE = 'selection.json'
REPORT_CSV = 'report.csv'
REPORT_JSON = 'report.json'
SWEEP_CSV = 'sweep.csv'
RUN_LOG = 'run.log'
FAILED_MARKER = 'FAILED'
MODEL_SUFFIX = '.fpsp'

# Method names in reports
METHOD_PROPOSED = 'proposed'
METHOD_SIMILARITY = 'similarity'
METHOD_UNIFORM = 'uniform'
UNIFORM_NOTE = 'universal saliency map, usm source {0}'

# Environment variables read from the process or a .env file
ENV_OUTPUT_DIR = 'FPSP_OUTPUT_DIR'
ENV_LOG_LEVEL = 'FPSP_LOG_LEVEL'
