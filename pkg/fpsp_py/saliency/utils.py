"""Saliency utilities.

Contains constants for map construction and file formats.
"""

# Gaussian kernel is truncated at this many standard deviations
GAUSSIAN_TRUNCATE = 4.0

# Default sigma is image width divided by this
SIGMA_WIDTH_DIVISOR = 25

# Map sidecar format
MAP_FORMAT_VERSION = 1
MAP_DTYPE = 'f32'
RASTER_SUFFIX = '.raw'
SIDECAR_SUFFIX = '.json'

# Normalization tags written to sidecars
NORMALIZATION_MAX = 'max'
NORMALIZATION_NONE = 'none'
NORMALIZATION_DIFFERENCE = 'difference'

# Fixation CSV header
FIXATION_COLUMNS = ('image_id', 'person_id', 'x', 'y')
