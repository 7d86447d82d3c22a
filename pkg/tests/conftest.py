import numpy as np
import pytest

from stretchstyle import bounding_box


@pytest.fixture
def rng():
    return np.random.RandomState(20240817)


def usable_levels(mask, requested=3):
    """Largest depth (up to `requested`) at which the stretched instance
    still yields at least two feature samples. 0 means the instance is too
    small to stylize at any depth and whitening must degenerate."""
    box = bounding_box(mask)
    cap = 0
    for level in range(1, requested + 1):
        blocks = -(-box.height // 2**level) * -(-box.width // 2**level)
        if blocks >= 2:
            cap = level
    return cap


def random_image(rng, height, width, channels=3):
    return rng.random_sample((height, width, channels))


def byte_grid_image(rng, height, width):
    """Random image whose samples sit exactly on the 8-bit grid k/255."""
    return rng.randint(0, 256, size=(height, width, 3)).astype(np.float64) / 255.0


def random_mask(rng, height, width):
    """Random nonempty mask; density varies so disconnected shapes and
    single-pixel rows show up naturally."""
    density = rng.uniform(0.05, 0.9)
    mask = rng.random_sample((height, width)) < density
    if not mask.any():
        mask[rng.randint(height), rng.randint(width)] = True
    return mask


def mask_cases(rng, count, max_side=64):
    """Random masks plus the shapes that exercise the edge rules."""
    cases = []
    for _ in range(count):
        h = rng.randint(1, max_side + 1)
        w = rng.randint(1, max_side + 1)
        cases.append((h, w, random_mask(rng, h, w)))
    # single pixel
    single = np.zeros((7, 9), dtype=bool)
    single[3, 4] = True
    cases.append((7, 9, single))
    # full rectangle
    cases.append((6, 5, np.ones((6, 5), dtype=bool)))
    # disconnected: two blobs with empty rows between them
    gap = np.zeros((10, 10), dtype=bool)
    gap[1, 2:5] = True
    gap[8, 6:9] = True
    cases.append((10, 10, gap))
    # rows with a single masked pixel
    thin = np.zeros((5, 12), dtype=bool)
    thin[0, 3] = True
    thin[2, 7] = True
    thin[4, 0] = thin[4, 11] = True
    cases.append((5, 12, thin))
    return cases
