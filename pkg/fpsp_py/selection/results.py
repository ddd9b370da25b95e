"""Selection results."""

from dataclasses import dataclass, field

from fpsp_py.errors import ValidationError


@dataclass(frozen=True)
class ImageScore(object):
    """Variance score of one image.

    per_category holds q for every annotated category (the largest over
    its instances); total is their sum.
    """

    total: float
    per_category: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class SelectionResult(object):
    """Chosen common images."""

    image_ids: tuple[str, ...]
    scores: dict[str, float]
    covered_categories: tuple[str, ...]

    def __post_init__(self) -> None:
        """Check the chosen images are distinct.

        Raises:
            ValidationError: An image is chosen twice.
        """
        object.__setattr__(  # noqa: WPS609
            self, 'image_ids', tuple(self.image_ids),
        )
        if len(set(self.image_ids)) != len(self.image_ids):
            raise ValidationError('selected images must be distinct')
