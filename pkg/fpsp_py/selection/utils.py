"""Selection utilities.

Contains constants of the annotation format and the selection search.
"""

# Keys of one annotation JSON line
ANNOTATION_KEYS = ('image_id', 'category', 'row', 'col', 'h', 'w')

# Largest number of candidate cores searched exhaustively
DEFAULT_EXACT_LIMIT = 100000
