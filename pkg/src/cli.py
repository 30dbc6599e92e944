"""Command-line interface for DMP feature extraction, tiling and evaluation."""

import argparse
import json
import sys
from concurrent import futures
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .analysis.metrics import ConfusionMatrix, class_names_for, compute_metrics
from .analysis.statistics import RunComparator
from .config import PipelineConfig
from .data.loader import ImageLoader, read_png, write_png
from .data.tensor import write_tensor
from .errors import DataError, DmpToolkitError, ParameterError
from .features.stack import stack_depth_extended, stack_hybrid
from .models.feature_stack import FeatureStack, ValueDomain
from .models.image import LabelMask, RgbImage
from .models.specs import DmpPreset
from .models.structuring_element import SEShape
from .reports.markdown import MarkdownReportGenerator, format_console_table
from .tiling.tiler import (TilePlan, extract_stack_tile, extract_tile, load_plan, plan_tiles,
                           save_plan, stitch_labels)
from .visualization.charts import ChartGenerator
from .visualization.error_mask import error_counts, render_error_mask
from .visualization.exporter import VisualizationExporter

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2


class DmpToolkitCLI:
    """Command-line interface for the DMP toolkit."""

    def __init__(self):
        self.parser = self._create_parser()
        self.verbose = True

    def _create_parser(self) -> argparse.ArgumentParser:
        """Create argument parser."""
        parser = argparse.ArgumentParser(
            description='Differential morphological profile features for aerial segmentation',
            formatter_class=argparse.RawDescriptionHelpFormatter,
            epilog="""
Examples:
  # 15-channel depth-extended stack with disk SEs
  python dmp.py dmp scene.png --preset improved --shape disk -o scene.dmpt

  # Explicit differential pairs
  python dmp.py dmp scene.png --pairs 9-3,5-3 -o scene.dmpt

  # 896x896 crops every 512 pixels, with a per-tile Evo-2 stack
  python dmp.py tile scene.png -o tiles/ --with-dmp --preset evo2 --shape disk

  # Evaluate predictions against ground truth masks
  python dmp.py eval gt_masks/ pred_masks/ --num-classes 16 -o report/

  # Error mask for class 3
  python dmp.py errmask gt.png pred.png --class 3 -o errors.png
            """
        )

        common = argparse.ArgumentParser(add_help=False)
        common.add_argument('--config', help='JSON pipeline config (flags override its values)')
        common.add_argument('--threads', type=int, help='Worker threads (outputs do not depend on it)')
        common.add_argument('--print-config', action='store_true',
                            help='Echo the effective configuration as JSON')
        common.add_argument('--quiet', '-q', action='store_true', help='Only print errors')

        dmp_options = argparse.ArgumentParser(add_help=False)
        source = dmp_options.add_mutually_exclusive_group()
        source.add_argument('--preset', choices=DmpPreset.names(),
                            help='Named SE differential set (default: improved)')
        source.add_argument('--pairs', help='Explicit OUTER-INNER pairs, e.g. "9-3,5-3"')
        dmp_options.add_argument('--shape', choices=[s.value for s in SEShape],
                                 help='Structuring element shape (default: square)')
        dmp_options.add_argument('--raw8', action='store_const', const=ValueDomain.RAW8.key,
                                 dest='value_domain',
                                 help='Store raw 8-bit values instead of values / 255')

        subparsers = parser.add_subparsers(dest='command', help='Command to run')

        # DMP command
        dmp_parser = subparsers.add_parser('dmp', parents=[common, dmp_options],
                                           help='Compute a depth-extended DMP stack')
        dmp_parser.add_argument('input', help='Input PNG (RGB or grayscale)')
        dmp_parser.add_argument('--output', '-o', required=True, help='Output DMPT file')
        dmp_parser.add_argument('--hybrid', action='store_true', default=None,
                                help='Also write the RGB stream as <output stem>_rgb.dmpt')
        dmp_parser.add_argument('--preview', action='store_true',
                                help='Write an HTML preview of every channel next to the output')

        # Tile command
        tile_parser = subparsers.add_parser('tile', parents=[common, dmp_options],
                                            help='Cut a raster into overlapping crops')
        tile_parser.add_argument('input', help='Input PNG')
        tile_parser.add_argument('--output', '-o', required=True, help='Output directory')
        tile_parser.add_argument('--window', type=int, help='Crop size in pixels (default: 896)')
        tile_parser.add_argument('--step', type=int, help='Step between crops (default: 512)')
        tile_parser.add_argument('--labels', action='store_true',
                                 help='Treat the input as a label mask')
        tile_parser.add_argument('--with-dmp', action='store_true',
                                 help='Write a DMPT stack for every tile')
        tile_parser.add_argument('--dmp-before-tiling', action='store_true', default=None,
                                 help='Compute the stack on the whole image, then crop it')

        # Stitch command
        stitch_parser = subparsers.add_parser('stitch', parents=[common],
                                              help='Reassemble per-tile label maps')
        stitch_parser.add_argument('manifest', help='Tile plan manifest JSON')
        stitch_parser.add_argument('tile_dir', help='Directory with per-tile label PNGs')
        stitch_parser.add_argument('--output', '-o', required=True, help='Output PNG')
        stitch_parser.add_argument('--num-classes', type=int, help='Number of classes (default: 16)')

        # Eval command
        eval_parser = subparsers.add_parser('eval', parents=[common],
                                            help='Score predictions against ground truth')
        eval_parser.add_argument('gt_dir', help='Ground truth mask directory')
        eval_parser.add_argument('pred_dir', help='Prediction mask directory')
        eval_parser.add_argument('--num-classes', type=int, help='Number of classes (default: 16)')
        eval_parser.add_argument('--exclude-background', action='store_true', default=None,
                                 help='Leave the background class out of macro averages')
        eval_parser.add_argument('--background-class', type=int, help='Background index (default: 0)')
        eval_parser.add_argument('--class-names', choices=['index', 'isaid'], default='index',
                                 help='Row labels for the report')
        eval_parser.add_argument('--name', help='Run name stored in the report (default: pred_dir name)')
        eval_parser.add_argument('--chart', action='store_true',
                                 help='Export a per-class IoU chart (HTML, plus PNG via kaleido)')
        eval_parser.add_argument('--output', '-o', default='output',
                                 help='Output directory (default: output)')

        # Error mask command
        err_parser = subparsers.add_parser('errmask', parents=[common],
                                           help='Render a color-coded error mask')
        err_parser.add_argument('gt', help='Ground truth mask PNG')
        err_parser.add_argument('pred', help='Prediction mask PNG')
        err_parser.add_argument('--class', dest='class_index', type=int, required=True,
                                help='Foreground class to render')
        err_parser.add_argument('--background-class', type=int, help='Background index (default: 0)')
        err_parser.add_argument('--output', '-o', required=True, help='Output PNG')

        # Compare command
        compare_parser = subparsers.add_parser('compare', parents=[common],
                                               help='Compare per-class metrics of several runs')
        compare_parser.add_argument('reports', nargs='+',
                                    help='metrics.json files; the first is the baseline')
        compare_parser.add_argument('--metric', choices=['iou', 'precision', 'recall', 'f1'],
                                    default='iou', help='Per-class metric to compare')
        compare_parser.add_argument('--output', '-o', default='output',
                                    help='Output directory (default: output)')

        return parser

    def run(self, args: Optional[List[str]] = None) -> int:
        """Run the CLI and return the process exit status."""
        try:
            parsed_args = self.parser.parse_args(args)
        except SystemExit as e:
            return EXIT_OK if e.code in (0, None) else EXIT_USAGE

        if not parsed_args.command:
            self.parser.print_help()
            return EXIT_USAGE

        self.verbose = not parsed_args.quiet
        handlers = {
            'dmp': self._run_dmp,
            'tile': self._run_tile,
            'stitch': self._run_stitch,
            'eval': self._run_eval,
            'errmask': self._run_errmask,
            'compare': self._run_compare,
        }
        try:
            config = self._load_config(parsed_args)
            return handlers[parsed_args.command](parsed_args, config)
        except ParameterError as e:
            self._error(str(e))
            self.parser.print_usage(sys.stderr)
            return EXIT_USAGE
        except (DmpToolkitError, OSError) as e:
            self._error(str(e))
            return EXIT_DATA

    # ------------------------------------------------------------------ helpers

    def _say(self, message: str = ""):
        if self.verbose:
            print(message)

    @staticmethod
    def _error(message: str):
        print(f"Error: {message}", file=sys.stderr)

    def _banner(self, title: str):
        self._say("\n" + "=" * 60)
        self._say(title)
        self._say("=" * 60)

    def _load_config(self, args: argparse.Namespace) -> PipelineConfig:
        overrides = {
            name: getattr(args, name, None)
            for name in ('preset', 'pairs', 'shape', 'value_domain', 'window', 'step',
                         'dmp_before_tiling', 'num_classes', 'exclude_background',
                         'background_class', 'threads', 'hybrid')
        }
        config = PipelineConfig.load(args.config, overrides)
        if args.print_config:
            print(json.dumps(config.to_dict(), indent=2))
        return config

    @staticmethod
    def _map(config: PipelineConfig, func, items):
        """Ordered map over items using up to config.threads workers."""
        if config.threads <= 1 or len(items) <= 1:
            return [func(item) for item in items]
        with futures.ThreadPoolExecutor(max_workers=config.threads) as executor:
            return list(executor.map(func, items))

    def _print_stack_summary(self, stack: FeatureStack):
        self._say(f"\n📐 {stack.channels} channels, {stack.width}x{stack.height}, "
                  f"{stack.value_domain.key}")
        self._say(stack.summary().to_string(index=False))

    # ----------------------------------------------------------------- commands

    def _run_dmp(self, args: argparse.Namespace, config: PipelineConfig) -> int:
        """Run the dmp command."""
        self._banner("DMP FEATURE STACK")
        spec = config.differential_spec()

        self._say(f"\n📂 Loading image: {args.input}")
        image = read_png(args.input, 'auto')

        self._say(f"⚙️  Computing {len(spec)} {spec.shape.value} differentials...")
        output = Path(args.output)
        if config.hybrid:
            if not isinstance(image, RgbImage):
                raise DataError(f"--hybrid needs an RGB input, {args.input} is single-channel")
            rgb_stack, stack = stack_hybrid(image, spec, config.domain, config.threads)
            rgb_path = write_tensor(rgb_stack, output.with_name(f"{output.stem}_rgb.dmpt"))
            self._say(f"Exported DMPT: {rgb_path}")
        else:
            stack = stack_depth_extended(image, spec, config.domain, config.threads)

        write_tensor(stack, output)
        self._say(f"Exported DMPT: {output}")
        self._print_stack_summary(stack)

        if args.preview:
            exporter = VisualizationExporter(str(output.parent), verbose=self.verbose)
            exporter.export_html(ChartGenerator().create_stack_preview(stack), f"{output.stem}_preview")

        self._say("\n✅ DMP stack complete!")
        return EXIT_OK

    def _run_tile(self, args: argparse.Namespace, config: PipelineConfig) -> int:
        """Run the tile command."""
        self._banner("RASTER TILING")
        self._say(f"\n📂 Loading image: {args.input}")
        image = read_png(args.input, 'labels' if args.labels else 'auto')
        want_dmp = args.with_dmp or config.dmp_before_tiling
        if want_dmp and isinstance(image, LabelMask):
            raise ParameterError("DMP stacks cannot be computed from a label mask")

        plan = plan_tiles(image.width, image.height, config.window, config.step)
        self._say(f"🧩 {plan.tile_count} tiles of {plan.window}px every {plan.step}px "
                  f"over {image.width}x{image.height}")

        out_dir = Path(args.output)
        out_dir.mkdir(parents=True, exist_ok=True)
        stem = Path(args.input).stem

        def write_tile(origin: Tuple[int, int]) -> Path:
            return write_png(extract_tile(image, origin, plan.window),
                             out_dir / TilePlan.tile_name(stem, origin))

        self._map(config, write_tile, list(plan.origins))

        if want_dmp:
            spec = config.differential_spec()
            if config.dmp_before_tiling:
                self._say("⚙️  Computing the stack on the whole image...")
                whole = stack_depth_extended(image, spec, config.domain, config.threads)

                def stack_for(origin):
                    return extract_stack_tile(whole, origin, plan.window)
            else:
                self._say("⚙️  Computing a stack per tile...")

                def stack_for(origin):
                    return stack_depth_extended(extract_tile(image, origin, plan.window),
                                                spec, config.domain)

            def write_stack(origin: Tuple[int, int]) -> Path:
                return write_tensor(stack_for(origin),
                                    out_dir / TilePlan.tile_name(stem, origin, '.dmpt'))

            self._map(config, write_stack, list(plan.origins))

        manifest = save_plan(plan, out_dir / f"{stem}_plan.json", stem)
        self._say(f"Exported JSON: {manifest}")
        self._say(f"\n✅ Tiling complete! Output saved to: {out_dir}/")
        return EXIT_OK

    def _run_stitch(self, args: argparse.Namespace, config: PipelineConfig) -> int:
        """Run the stitch command."""
        self._banner("LABEL STITCHING")
        plan, manifest = load_plan(args.manifest)
        stem = manifest.get('stem')
        names = manifest.get('tiles') or [
            TilePlan.tile_name(stem or 'tile', origin) for origin in plan.origins
        ]
        tile_dir = Path(args.tile_dir)
        self._say(f"\n📂 Loading {len(names)} tiles from: {tile_dir}")
        tiles = self._map(config, lambda name: read_png(tile_dir / name, 'labels'), names)

        stitched = stitch_labels(plan, tiles, config.num_classes)
        write_png(stitched, args.output)
        self._say(f"Exported PNG: {args.output}")
        self._say("\n✅ Stitching complete!")
        return EXIT_OK

    def _evaluate_pair(self, pair: Tuple[Path, Path], num_classes: int) -> ConfusionMatrix:
        gt_path, pred_path = pair
        gt = read_png(gt_path, 'labels')
        pred = read_png(pred_path, 'labels')
        if gt.shape != pred.shape:
            raise DataError(f"{gt_path.name}: ground truth {gt.width}x{gt.height} "
                            f"vs prediction {pred.width}x{pred.height}")
        return ConfusionMatrix(num_classes).add(gt, pred)

    def _run_eval(self, args: argparse.Namespace, config: PipelineConfig) -> int:
        """Run the eval command."""
        self._banner("SEGMENTATION EVALUATION")
        pairs, unmatched = ImageLoader.match_directories(args.gt_dir, args.pred_dir)
        if not pairs and not unmatched:
            self._error("Nothing to evaluate: both directories are empty")
            return EXIT_USAGE
        if unmatched:
            raise DataError("Files without a counterpart: " + ", ".join(unmatched))

        self._say(f"\n📂 Evaluating {len(pairs)} mask pairs")

        def evaluate(pair):
            try:
                return self._evaluate_pair(pair, config.num_classes), None
            except DataError as e:
                return None, str(e)

        results = self._map(config, evaluate, pairs)
        problems = [problem for _, problem in results if problem]
        if problems:
            for problem in problems:
                self._error(problem)
            raise DataError(f"{len(problems)} of {len(pairs)} mask pairs could not be evaluated")

        matrix = ConfusionMatrix.merge((cm for cm, _ in results), config.num_classes)
        names = class_names_for(config.num_classes, args.class_names)
        metrics = compute_metrics(matrix, config.exclude_background, config.background_class, names)

        self._say("")
        self._say(format_console_table(metrics))

        run_name = args.name or Path(args.pred_dir).resolve().name
        exporter = VisualizationExporter(args.output, verbose=self.verbose)
        report = {
            'run': run_name,
            **metrics.to_dict(),
            'files': [gt.name for gt, _ in pairs],
            'confusion_matrix': matrix.to_list(),
        }
        exporter.export_data(report, 'metrics')

        report_gen = MarkdownReportGenerator(args.output, verbose=self.verbose)
        report_gen.generate_evaluation_report(metrics, {
            'Run': run_name,
            'Mask pairs': len(pairs),
            'Pixels': matrix.total,
            'Background excluded': 'yes' if config.exclude_background else 'no',
        })

        if args.chart:
            fig = ChartGenerator().create_class_iou_chart(metrics, run_name)
            exporter.export_html(fig, 'class_iou')
            exporter.export_image(fig, 'class_iou')

        self._say(f"\n✅ Evaluation complete! Output saved to: {args.output}/")
        return EXIT_OK

    def _run_errmask(self, args: argparse.Namespace, config: PipelineConfig) -> int:
        """Run the errmask command."""
        self._banner("ERROR MASK")
        gt = read_png(args.gt, 'labels')
        pred = read_png(args.pred, 'labels')
        mask = render_error_mask(gt, pred, args.class_index, config.background_class)
        write_png(mask, args.output)
        self._say(f"Exported PNG: {args.output}")
        for name, count in error_counts(gt, pred, args.class_index, config.background_class).items():
            self._say(f"  {name:<15} {count}")
        return EXIT_OK

    def _run_compare(self, args: argparse.Namespace, config: PipelineConfig) -> int:
        """Run the compare command."""
        self._banner("RUN COMPARISON")
        reports: Dict[str, Dict] = {}
        for path in map(Path, args.reports):
            try:
                report = json.loads(path.read_text(encoding='utf-8'))
            except json.JSONDecodeError as e:
                raise DataError(f"{path} is not valid JSON: {e}") from None
            name = report.get('run') or path.stem
            if name in reports:
                name = f"{name} ({path.parent.name}/{path.name})"
            reports[name] = report

        comparator = RunComparator(reports)
        self._say(f"\n🔍 Comparing {len(comparator.runs)} runs against {comparator.baseline}")
        self._say(comparator.per_class_table(args.metric).to_string())

        exporter = VisualizationExporter(args.output, verbose=self.verbose)
        exporter.export_data(comparator.to_dict(args.metric), 'comparison')
        exporter.export_table(comparator.per_class_table(args.metric), f"comparison_{args.metric}")
        fig = ChartGenerator().create_comparison_chart(comparator, args.metric)
        exporter.export_html(fig, 'comparison_chart')
        MarkdownReportGenerator(args.output, verbose=self.verbose).generate_comparison_report(
            comparator, args.metric)

        self._say(f"\n✅ Comparison complete! Output saved to: {args.output}/")
        return EXIT_OK


def main():
    """Main entry point."""
    cli = DmpToolkitCLI()
    sys.exit(cli.run())


if __name__ == '__main__':
    main()
