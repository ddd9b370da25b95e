"""Writing a synthetic dataset to disk.

The latent-mixture world or, with `planted`, a planted-weight world.
The layout is the one `ingest` reads:

    manifest.json
    annotations.jsonl
    maps/<person>/<image>.json + .raw
    fixations/<target>.csv
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Union

from fpsp_py.pipeline.utils import (
    ENCODING_PSM,
    MANIFEST_NAME,
    MANIFEST_VERSION,
    ROLE_TARGET,
    ROLE_TRAINING,
    USM_MEAN,
)
from fpsp_py.saliency.io import save_map, write_fixations
from fpsp_py.saliency.utils import NORMALIZATION_NONE
from fpsp_py.selection.annotations import ObjectAnnotation, write_annotations
from fpsp_py.synth.config import SynthConfig
from fpsp_py.synth.fixations import sample_fixations
from fpsp_py.synth.persons import SynthWorld, generate_persons
from fpsp_py.synth.planted import PlantedWorld, plant_persons
from fpsp_py.synth.utils import BBOX_HALF_WIDTH
from fpsp_py.utils import make_rng

logger = logging.getLogger(__name__)

ANNOTATIONS_NAME = 'annotations.jsonl'

# Fixation seeds are drawn below this bound
_SEED_BOUND = 2 ** 31


def write_dataset(
    config: SynthConfig,
    out_dir: Union[str, Path],
    planted: bool = False,
) -> Path:
    """Generate a dataset and write it under out_dir.

    Every person gets a PSM per image; target persons also get sampled
    fixations per image. Annotations list every present component with a
    box of two stds around its blob; planted worlds have one full-frame
    box per image instead.

    Args:
        config (SynthConfig): Sizes, noise and seed.
        out_dir (Union[str, Path]): Destination directory.
        planted (bool): Write a planted-weight world, see plant_persons.

    Returns:
        Path: Manifest path.
    """
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    world: Union[SynthWorld, PlantedWorld]
    if planted:
        world = plant_persons(config)
        annotations = _frame_annotations(world, config)
    else:
        world = generate_persons(config)
        annotations = _annotations(world, config)

    person_records = []
    for person in world.persons:
        maps = {}
        for image in world.image_ids:
            relative = Path('maps') / person / '{0}.json'.format(image)
            save_map(
                root / relative,
                world.psm(person, image),
                normalization=NORMALIZATION_NONE,
            )
            maps[image] = relative.as_posix()
        record: dict[str, Any] = {
            'id': person,
            'role': ROLE_TARGET if person in world.targets else ROLE_TRAINING,
            'maps': maps,
        }
        person_records.append(record)

    seeds = make_rng(config.seed + 1)
    for record in person_records:
        if record['role'] != ROLE_TARGET:
            continue
        relative = Path('fixations') / '{0}.csv'.format(record['id'])
        write_fixations(root / relative, [
            sample_fixations(
                world.psm(record['id'], image),
                config.fixations,
                int(seeds.integers(_SEED_BOUND)),
                image_id=image,
                person_id=record['id'],
            )
            for image in world.image_ids
        ])
        record['fixations'] = relative.as_posix()

    write_annotations(root / ANNOTATIONS_NAME, annotations)
    height, width = config.shape
    manifest = {
        'version': MANIFEST_VERSION,
        'usm': USM_MEAN,
        'psm_encoding': ENCODING_PSM,
        'annotations': ANNOTATIONS_NAME,
        'images': [
            {'id': image, 'd1': height, 'd2': width}
            for image in world.image_ids
        ],
        'persons': person_records,
    }
    manifest_path = root / MANIFEST_NAME
    manifest_path.write_text(json.dumps(manifest, indent=2) + '\n')
    logger.info(
        'wrote %d persons x %d images to %s',
        len(world.persons), len(world.image_ids), root,
    )
    return manifest_path


def _annotations(
    world: SynthWorld,
    config: SynthConfig,
) -> list[ObjectAnnotation]:
    height, width = config.shape
    annotations = []
    for image_index, image in enumerate(world.image_ids):
        for component, blob in enumerate(world.blobs):
            if world.content[image_index, component] <= 0:
                continue
            row, box_height = _span(blob.row, blob.row_sigma, height)
            col, box_width = _span(blob.col, blob.col_sigma, width)
            annotations.append(ObjectAnnotation(
                image_id=image,
                category=str(component % config.categories),
                row=row,
                col=col,
                height=box_height,
                width=box_width,
            ))
    return annotations


def _span(center: float, sigma: float, extent: int) -> tuple[int, int]:
    start = max(0, math.floor(center - BBOX_HALF_WIDTH * sigma))
    stop = min(extent, math.ceil(center + BBOX_HALF_WIDTH * sigma) + 1)
    return (start, max(stop - start, 1))


def _frame_annotations(
    world: PlantedWorld,
    config: SynthConfig,
) -> list[ObjectAnnotation]:
    height, width = config.shape
    return [
        ObjectAnnotation(
            image_id=image,
            category=str(index % config.categories),
            row=0,
            col=0,
            height=height,
            width=width,
        )
        for index, image in enumerate(world.image_ids)
    ]
