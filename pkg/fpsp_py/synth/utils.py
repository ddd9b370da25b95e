"""Synthetic data utilities."""

# Largest supported number of latent components
MAX_COMPONENTS = 8

# Component blob std range, as fractions of the map extent
BLOB_SIGMA_RANGE = (1 / 12, 1 / 6)

# Blob centers stay inside this central fraction of the map
BLOB_CENTER_MARGIN = 0.1

# Annotation boxes span this many stds around the blob center
BBOX_HALF_WIDTH = 2.0

# Range of the per-image component intensity
CONTENT_RANGE = (0.5, 1.5)

# Range of person mixing weights
MIXING_RANGE = (0.05, 1.0)

# Noiseless maps span [BACKGROUND_LEVEL, PEAK_LEVEL]; the peak is reached
# once over all persons and images
BACKGROUND_LEVEL = 0.1
PEAK_LEVEL = 0.9
