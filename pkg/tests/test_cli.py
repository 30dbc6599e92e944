import json

import numpy as np
import pytest

from src.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, DmpToolkitCLI
from src.data import read_png, read_tensor, write_png
from src.features import preset, stack_depth_extended
from src.models.image import LabelMask, RgbImage
from src.tiling import extract_tile, load_plan


def run(*args):
    return DmpToolkitCLI().run([str(a) for a in args])


@pytest.fixture
def scene(rng, tmp_path):
    """Smooth synthetic aerial-like raster with blocky structures."""
    height, width = 120, 150
    yy, xx = np.mgrid[0:height, 0:width]
    base = (xx * 255 // width).astype(np.uint8)
    data = np.stack([base, base[::-1], (yy * 2).astype(np.uint8)], axis=-1)
    data[30:45, 40:70] = 250
    data[80:84, 10:140] = 5
    data = np.clip(data.astype(int) + rng.integers(0, 8, size=data.shape), 0, 255).astype(np.uint8)
    return write_png(RgbImage(data), tmp_path / 'scene.png')


def _write_masks(directory, masks):
    for name, data in masks.items():
        write_png(LabelMask(np.array(data, dtype=np.uint8)), directory / name)


def test_dmp_preset(scene, tmp_path):
    out = tmp_path / 'scene.dmpt'
    assert run('dmp', scene, '--preset', 'improved', '--shape', 'disk', '-o', out, '-q') == EXIT_OK
    stack = read_tensor(out)
    assert stack.channels == 15
    assert stack.labels[7] == 'gray'
    assert stack == stack_depth_extended(read_png(scene), preset('improved', 'disk'))


def test_dmp_pairs_and_raw8(scene, tmp_path):
    out = tmp_path / 'pairs.dmpt'
    assert run('dmp', scene, '--pairs', '9-3,5-3', '--raw8', '-o', out, '-q') == EXIT_OK
    stack = read_tensor(out)
    assert stack.channels == 5
    assert stack.data.dtype == np.uint8


def test_dmp_hybrid_writes_both_streams(scene, tmp_path):
    out = tmp_path / 'h.dmpt'
    assert run('dmp', scene, '--preset', 'original', '--hybrid', '-o', out, '-q') == EXIT_OK
    assert read_tensor(tmp_path / 'h_rgb.dmpt').labels == ['red', 'green', 'blue']
    assert read_tensor(out).channels == 7


def test_threads_do_not_change_output(scene, tmp_path):
    one, four = tmp_path / 'one.dmpt', tmp_path / 'four.dmpt'
    assert run('dmp', scene, '--preset', 'evo2', '--shape', 'disk', '-o', one, '-q') == EXIT_OK
    assert run('dmp', scene, '--preset', 'evo2', '--shape', 'disk', '-o', four,
               '--threads', 4, '-q') == EXIT_OK
    assert one.read_bytes() == four.read_bytes()


def test_usage_errors_exit_2(scene, tmp_path):
    assert run('dmp', scene, '--preset', 'nope', '-o', tmp_path / 'x.dmpt') == EXIT_USAGE
    assert run('dmp', scene, '--pairs', '3-5', '-o', tmp_path / 'x.dmpt', '-q') == EXIT_USAGE
    assert run('tile', scene, '-o', tmp_path / 't', '--window', 10, '--step', 20, '-q') == EXIT_USAGE
    assert run() == EXIT_USAGE


@pytest.mark.parametrize('pairs', [[5, 3], 7, {'outer': 5}, [[5, 3, 1]]])
def test_malformed_pairs_in_config_file_exit_2(pairs, scene, tmp_path, capsys):
    config = tmp_path / 'bad.json'
    config.write_text(json.dumps({'pairs': pairs}))
    assert run('dmp', scene, '--config', config, '-o', tmp_path / 'x.dmpt', '-q') == EXIT_USAGE
    assert 'pair' in capsys.readouterr().err.lower()


def test_read_errors_exit_1(tmp_path):
    empty = tmp_path / 'empty.png'
    empty.write_bytes(b'')
    assert run('tile', empty, '-o', tmp_path / 't', '-q') == EXIT_DATA
    assert run('dmp', tmp_path / 'missing.png', '-o', tmp_path / 'x.dmpt', '-q') == EXIT_DATA


def test_print_config(scene, tmp_path, capsys):
    config = tmp_path / 'pipeline.json'
    config.write_text(json.dumps({'preset': 'original', 'shape': 'disk'}))
    assert run('dmp', scene, '--config', config, '--print-config', '-q',
               '-o', tmp_path / 'c.dmpt') == EXIT_OK
    echoed = json.loads(capsys.readouterr().out)
    assert echoed['preset'] == 'original' and echoed['shape'] == 'disk'


def test_tile_single_window(tmp_path):
    image = write_png(RgbImage.filled(64, 64, (10, 20, 30)), tmp_path / 'small.png')
    out = tmp_path / 'tiles'
    assert run('tile', image, '-o', out, '--window', 64, '--step', 32, '-q') == EXIT_OK
    assert sorted(p.name for p in out.iterdir()) == ['small_plan.json', 'small_x0_y0.png']


def test_tile_exact_fit(tmp_path):
    image = write_png(RgbImage.filled(88, 56, (1, 2, 3)), tmp_path / 'wide.png')
    out = tmp_path / 'tiles'
    assert run('tile', image, '-o', out, '--window', 56, '--step', 32, '-q') == EXIT_OK
    plan, manifest = load_plan(out / 'wide_plan.json')
    assert plan.tile_count == 2
    assert manifest['tiles'] == ['wide_x0_y0.png', 'wide_x32_y0.png']


@pytest.mark.parametrize('whole_image', [False, True])
def test_tile_with_stacks(scene, tmp_path, whole_image):
    out = tmp_path / 'tiles'
    args = ['tile', scene, '-o', out, '--window', 64, '--step', 48, '--with-dmp',
            '--preset', 'original', '--raw8', '-q']
    if whole_image:
        args.append('--dmp-before-tiling')
    assert run(*args) == EXIT_OK
    plan, _ = load_plan(out / 'scene_plan.json')
    assert len(list(out.glob('*.dmpt'))) == plan.tile_count
    origin = plan.origins[1]
    stack = read_tensor(out / f'scene_x{origin[0]}_y{origin[1]}.dmpt')
    assert stack.data.shape == (7, 64, 64)
    tile = extract_tile(read_png(scene), origin, 64)
    if not whole_image:
        assert stack == stack_depth_extended(tile, preset('original', 'square'), 'raw8')


def test_tile_then_stitch_labels(rng, tmp_path):
    labels = LabelMask(rng.integers(0, 16, size=(70, 90), dtype=np.uint8))
    source = write_png(labels, tmp_path / 'gt.png')
    tiles = tmp_path / 'tiles'
    assert run('tile', source, '-o', tiles, '--labels', '--window', 40, '--step', 25, '-q') == EXIT_OK
    stitched = tmp_path / 'stitched.png'
    assert run('stitch', tiles / 'gt_plan.json', tiles, '-o', stitched, '-q') == EXIT_OK
    assert read_png(stitched, 'labels') == labels


def test_eval_worked_example(tmp_path, capsys):
    gt_dir, pred_dir, out = tmp_path / 'gt', tmp_path / 'pred', tmp_path / 'report'
    _write_masks(gt_dir, {'a.png': [[0, 0], [1, 1]]})
    _write_masks(pred_dir, {'a.png': [[0, 1], [1, 1]]})
    assert run('eval', gt_dir, pred_dir, '--num-classes', 2, '-o', out, '--chart') == EXIT_OK
    assert 'mIoU 58.33' in capsys.readouterr().out
    report = json.loads((out / 'metrics.json').read_text())
    assert report['macro']['mIoU'] == pytest.approx(7 / 12)
    assert report['confusion_matrix'] == [[1, 1], [0, 2]]
    assert report['run'] == 'pred'
    assert (out / 'eval_report.md').exists()
    assert (out / 'class_iou.html').exists()


def test_eval_identical_dirs_score_100(rng, tmp_path):
    gt_dir = tmp_path / 'gt'
    _write_masks(gt_dir, {f'{i}.png': rng.integers(0, 16, size=(20, 20)) for i in range(3)})
    out = tmp_path / 'report'
    assert run('eval', gt_dir, gt_dir, '-o', out, '--threads', 3, '-q') == EXIT_OK
    report = json.loads((out / 'metrics.json').read_text())
    assert all(v == 1.0 for v in report['macro'].values())


def test_eval_failures(tmp_path):
    gt_dir, pred_dir = tmp_path / 'gt', tmp_path / 'pred'
    gt_dir.mkdir()
    pred_dir.mkdir()
    assert run('eval', gt_dir, pred_dir, '-q') == EXIT_USAGE

    _write_masks(gt_dir, {'a.png': [[0]], 'b.png': [[0]]})
    _write_masks(pred_dir, {'a.png': [[0]]})
    assert run('eval', gt_dir, pred_dir, '-o', tmp_path / 'r', '-q') == EXIT_DATA

    _write_masks(pred_dir, {'b.png': [[0, 0]]})
    assert run('eval', gt_dir, pred_dir, '-o', tmp_path / 'r', '-q') == EXIT_DATA

    _write_masks(pred_dir, {'b.png': [[20]]})
    assert run('eval', gt_dir, pred_dir, '--num-classes', 16, '-o', tmp_path / 'r', '-q') == EXIT_DATA


def test_errmask(tmp_path):
    _write_masks(tmp_path, {'gt.png': [[3, 3, 0, 7]], 'pred.png': [[3, 0, 3, 3]]})
    out = tmp_path / 'err.png'
    assert run('errmask', tmp_path / 'gt.png', tmp_path / 'pred.png', '--class', 3,
               '-o', out, '-q') == EXIT_OK
    assert read_png(out).data.tolist() == [[[255, 255, 255], [255, 0, 0],
                                            [255, 255, 0], [0, 0, 255]]]
    assert run('errmask', tmp_path / 'gt.png', tmp_path / 'pred.png', '--class', 0,
               '-o', out, '-q') == EXIT_USAGE


def test_compare_runs(tmp_path):
    gt_dir = tmp_path / 'gt'
    _write_masks(gt_dir, {'a.png': [[0, 0, 1, 1]]})
    _write_masks(tmp_path / 'run_a', {'a.png': [[0, 1, 1, 1]]})
    _write_masks(tmp_path / 'run_b', {'a.png': [[0, 0, 1, 1]]})
    for name in ('run_a', 'run_b'):
        assert run('eval', gt_dir, tmp_path / name, '--num-classes', 2,
                   '-o', tmp_path / f'{name}_report', '-q') == EXIT_OK
    out = tmp_path / 'comparison'
    assert run('compare', tmp_path / 'run_a_report' / 'metrics.json',
               tmp_path / 'run_b_report' / 'metrics.json', '-o', out, '-q') == EXIT_OK
    comparison = json.loads((out / 'comparison.json').read_text())
    assert comparison['baseline'] == 'run_a'
    assert comparison['best_run'] == {'class_0': 'run_b', 'class_1': 'run_b'}
    assert (out / 'comparison_report.md').exists()
    assert run('compare', tmp_path / 'run_a_report' / 'metrics.json', '-o', out, '-q') == EXIT_USAGE


def test_end_to_end_smoke(tmp_path):
    """Tile a 2000x1500 raster, stack every tile, evaluate and render an error mask."""
    height, width = 1500, 2000
    yy, xx = np.mgrid[0:height, 0:width]
    data = np.stack([(xx % 256), (yy % 256), ((xx + yy) // 16 % 256)], axis=-1).astype(np.uint8)
    scene = write_png(RgbImage(data), tmp_path / 'big.png')
    tiles = tmp_path / 'tiles'
    assert run('tile', scene, '-o', tiles, '--with-dmp', '--preset', 'evo2', '--shape', 'disk',
               '--raw8', '--threads', 4, '-q') == EXIT_OK
    plan, manifest = load_plan(tiles / 'big_plan.json')
    assert plan.tile_count == 12
    for name in manifest['tiles'][:2]:
        stack = read_tensor(tiles / name.replace('.png', '.dmpt'))
        assert stack.data.shape == (15, 896, 896)

    truth = LabelMask(((xx // 100 + yy // 100) % 4).astype(np.uint8))
    predicted = truth.data.copy()
    predicted[:50] = 0
    gt_dir, pred_dir = tmp_path / 'gt', tmp_path / 'pred'
    write_png(truth, gt_dir / 'big.png')
    write_png(LabelMask(predicted), pred_dir / 'big.png')
    assert run('eval', gt_dir, pred_dir, '--num-classes', 4, '-o', tmp_path / 'report', '-q') == EXIT_OK
    assert run('errmask', gt_dir / 'big.png', pred_dir / 'big.png', '--class', 2,
               '-o', tmp_path / 'err.png', '-q') == EXIT_OK
    assert read_png(tmp_path / 'err.png').shape == (1500, 2000)
