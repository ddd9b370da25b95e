"""Synthetic dataset configuration."""

from dataclasses import dataclass

from fpsp_py.errors import ValidationError
from fpsp_py.synth.utils import MAX_COMPONENTS


@dataclass(frozen=True)
class SynthConfig(object):
    """Sizes and seeds of a synthetic dataset.

    persons counts training persons, targets counts target persons.
    Component k of an image is present with probability `presence` and
    annotated with category k modulo `categories`.
    """

    seed: int = 0
    persons: int = 5
    targets: int = 2
    images: int = 80
    categories: int = 4
    shape: tuple[int, int] = (32, 24)
    components: int = 4
    noise: float = 0.02
    planted_rank: int = 2
    fixations: int = 1000
    presence: float = 0.7

    def __post_init__(self) -> None:
        """Validate fields.

        Raises:
            ValidationError: A field is out of range.
        """
        object.__setattr__(  # noqa: WPS609
            self, 'shape', tuple(self.shape),
        )
        counts = (
            self.persons,
            self.images,
            self.categories,
            self.components,
            self.planted_rank,
            self.fixations,
        )
        if min(counts) < 1 or self.targets < 0 or min(self.shape) < 1:
            raise ValidationError('synthetic counts must be >= 1')
        if self.components > MAX_COMPONENTS:
            raise ValidationError(
                'at most {0} components are supported'.format(MAX_COMPONENTS),
            )
        if not self.noise >= 0:
            raise ValidationError('noise must be >= 0')
        if not 0 < self.presence <= 1:
            raise ValidationError('presence must be in (0, 1]')
