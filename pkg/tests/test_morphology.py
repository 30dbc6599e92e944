import numpy as np
import pytest

from src.models.image import GrayImage
from src.models.structuring_element import make_se
from src.morphology import closing, dilate, erode, opening
from src.morphology.reference import (reference_closing, reference_dilate, reference_erode,
                                      reference_opening)

SHAPES = ['square', 'disk']
OPS = [
    (dilate, reference_dilate),
    (erode, reference_erode),
    (opening, reference_opening),
    (closing, reference_closing),
]


@pytest.mark.parametrize('shape', SHAPES)
@pytest.mark.parametrize('size', [3, 15])
@pytest.mark.parametrize('dims', [(3, 3), (30, 20)])
def test_constant_image_is_a_fixed_point(shape, size, dims):
    img = GrayImage.filled(dims[0], dims[1], 77)
    se = make_se(shape, size)
    for op, _ in OPS:
        assert op(img, se) == img


def test_dilating_an_impulse_reproduces_the_square(impulse):
    out = dilate(impulse, make_se('square', 3))
    expected = np.zeros((5, 5), dtype=np.uint8)
    expected[1:4, 1:4] = 255
    np.testing.assert_array_equal(out.data, expected)


def test_eroding_an_impulse_removes_it(impulse):
    out = erode(impulse, make_se('square', 3))
    assert not out.data.any()


def test_large_impulse_dilation_matches_disk_footprint():
    data = np.zeros((40, 40), dtype=np.uint8)
    data[20, 20] = 200
    se = make_se('disk', 9)
    out = dilate(GrayImage(data), se)
    expected = np.zeros((40, 40), dtype=np.uint8)
    expected[16:25, 16:25][se.footprint] = 200
    np.testing.assert_array_equal(out.data, expected)


def test_random_16x16_disk_5_matches_oracle(random_gray):
    img = random_gray(16, 16)
    se = make_se('disk', 5)
    assert dilate(img, se) == reference_dilate(img, se)


@pytest.mark.parametrize('shape', SHAPES)
def test_oracle_grid(shape, rng):
    # 200 random images per shape, 1x1 up to 64x64, against every SE size up to 35
    for _ in range(200):
        width, height = (int(v) for v in rng.integers(1, 65, size=2))
        img = GrayImage(rng.integers(0, 256, size=(height, width), dtype=np.uint8))
        for size in range(3, 37, 2):
            se = make_se(shape, size)
            assert dilate(img, se) == reference_dilate(img, se), (width, height, size)
            assert erode(img, se) == reference_erode(img, se), (width, height, size)


@pytest.mark.parametrize('shape', SHAPES)
@pytest.mark.parametrize('size', [3, 7, 21])
def test_duality_under_complement(shape, size, random_gray):
    img = random_gray(16, 16)
    se = make_se(shape, size)
    assert erode(img, se) == dilate(img.complement(), se).complement()
    big = random_gray(50, 37)
    assert opening(big, se) == closing(big.complement(), se).complement()


@pytest.mark.parametrize('shape', SHAPES)
@pytest.mark.parametrize('size', [3, 9, 17])
def test_opening_and_closing_are_idempotent_and_ordered(shape, size, random_gray):
    img = random_gray(48, 40)
    se = make_se(shape, size)
    opened, closed = opening(img, se), closing(img, se)
    assert opening(opened, se) == opened
    assert closing(closed, se) == closed
    assert (opened.data <= img.data).all()
    assert (closed.data >= img.data).all()


def test_square_granulometry_is_monotone(random_gray):
    # larger squares are unions of smaller ones, so openings only ever decrease
    img = random_gray(60, 45)
    sizes = [3, 5, 9, 15, 21]
    openings = [opening(img, make_se('square', s)).data for s in sizes]
    closings = [closing(img, make_se('square', s)).data for s in sizes]
    for smaller, larger in zip(openings, openings[1:]):
        assert (larger <= smaller).all()
    for smaller, larger in zip(closings, closings[1:]):
        assert (larger >= smaller).all()


def test_disk_openings_are_not_nested():
    # a disk of size 7 is not a union of size-3 disks: its (2, 2) corner is unreachable
    se3, se7 = make_se('disk', 3), make_se('disk', 7)
    data = np.zeros((21, 21), dtype=np.uint8)
    data[7:14, 7:14][se7.footprint] = 255
    img = GrayImage(data)
    open3, open7 = opening(img, se3), opening(img, se7)
    assert open7 == reference_opening(img, se7)
    assert open3 == reference_opening(img, se3)
    assert open7.data[12, 12] == 255
    assert open3.data[12, 12] == 0
    closed3 = closing(img.complement(), se3).data
    closed7 = closing(img.complement(), se7).data
    assert closed7[12, 12] < closed3[12, 12]


@pytest.mark.parametrize('shape', SHAPES)
@pytest.mark.parametrize('workers', [2, 3, 8])
def test_threaded_rows_match_serial(shape, workers, random_gray):
    img = random_gray(70, 53)
    for size in (3, 11, 35):
        se = make_se(shape, size)
        assert dilate(img, se, workers) == dilate(img, se)
        assert closing(img, se, workers) == closing(img, se)


def test_outputs_are_read_only(random_gray):
    out = dilate(random_gray(20, 20), make_se('square', 3))
    with pytest.raises(ValueError):
        out.data[0, 0] = 1
