"""
Hometown - command-line interface
Subcommands: predict, eval, fit, synth, cluster.
Exit codes: 0 success, 1 validation error, 2 usage error.
"""
import argparse
import contextlib
import sys

from ingest.parsers import group_by_owner, load_homes, load_photos
from ingest.writers import (build_report, dump_report, format_timestamp, write_homes_csv,
                            write_per_user_csv, write_photos_csv)
from models.distance_distribution import (DEFAULT_X_MIN_KM, LINEAR, LOG, LSQ, MLE,
                                          fit_power_law, histogram, pooled_home_distances)
from models.evaluation import evaluate_cohort
from models.hometown_predictor import HometownPredictor, PredictorConfig
from models.mobility_synth import SynthParams, generate_cohort, with_overrides
from models.mst_clustering import cluster_points
from utils.config import DEFAULT_CDF_RESOLUTION, DEFAULT_MIN_PHOTOS, DEFAULT_THRESHOLDS_KM
from utils.errors import (DegenerateCentroid, EmptySamples, HometownError, InputTooLarge, InvalidK,
                          NoGroundTruth, TooFewPhotos)
from utils.logger import get_logger

logger = get_logger('cli')

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2

# Per-user failures that are reported instead of aborting the run
USER_FAILURES = (TooFewPhotos, DegenerateCentroid, InputTooLarge, InvalidK)


def _thresholds(value):
    try:
        return tuple(float(part) for part in value.split(',') if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated kilometers, got {value!r}")


def _add_input_arguments(parser, homes_required=False):
    parser.add_argument("--photos", required=True,
                        help="Photo file: CSV (photo_id,owner_id,lat,lon,taken_at) or Flickr-shaped .json")
    parser.add_argument("--homes", required=homes_required, default=None,
                        help="Reported hometowns CSV (owner_id,lat,lon)")
    parser.add_argument("--lenient", action="store_true", default=False,
                        help="Skip malformed rows instead of failing; they are listed in the report")


def _add_mode_arguments(parser):
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--k", type=int, default=None,
                      help="Number of clusters to cut the spanning tree into (default from HOMETOWN_DEFAULT_K)")
    mode.add_argument("--threshold-km", type=float, default=None, dest="threshold_km",
                      help="Cut every spanning-tree edge longer than this distance instead")
    parser.add_argument("--min-photos", type=int, default=DEFAULT_MIN_PHOTOS, dest="min_photos",
                        help="Users with fewer photos are not predicted")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hometown",
        description="Predict users' hometowns from their geotagged photos.",
    )
    subparsers = parser.add_subparsers(dest="command")

    predict = subparsers.add_parser("predict", help="Predict the hometown of every owner in a photo file")
    _add_input_arguments(predict)
    _add_mode_arguments(predict)
    predict.add_argument("--out", default="-", help="Report JSON path ('-' for stdout)")
    predict.set_defaults(handler=run_predict)

    evaluate = subparsers.add_parser("eval", help="Score predictions against reported hometowns")
    _add_input_arguments(evaluate, homes_required=True)
    _add_mode_arguments(evaluate)
    evaluate.add_argument("--thresholds", type=_thresholds, default=DEFAULT_THRESHOLDS_KM,
                          help="Comma-separated 'low error' thresholds in km")
    evaluate.add_argument("--cdf-resolution", type=int, default=DEFAULT_CDF_RESOLUTION, dest="cdf_resolution")
    evaluate.add_argument("--out", default="-", help="Report JSON path ('-' for stdout)")
    evaluate.add_argument("--per-user", default=None, dest="per_user", help="Optional per-user errors CSV")
    evaluate.set_defaults(handler=run_eval)

    fit = subparsers.add_parser("fit", help="Fit the power law of photo-to-home distances")
    _add_input_arguments(fit, homes_required=True)
    fit.add_argument("--x-min-km", type=float, default=DEFAULT_X_MIN_KM, dest="x_min_km")
    fit.add_argument("--method", choices=(MLE, LSQ), default=MLE)
    fit.add_argument("--bins", type=int, default=30)
    fit.add_argument("--log", action="store_true", default=False, help="Log-spaced histogram bins")
    fit.add_argument("--out", default="-", help="Fit JSON path ('-' for stdout)")
    fit.set_defaults(handler=run_fit)

    synth = subparsers.add_parser("synth", help="Generate a synthetic photo cohort")
    synth.add_argument("--users", type=int, default=31)
    synth.add_argument("--photos-per-user", type=int, default=None, dest="n_photos")
    synth.add_argument("--exponent", type=float, default=None)
    synth.add_argument("--home-fraction", type=float, default=None, dest="home_fraction")
    synth.add_argument("--x-min-km", type=float, default=None, dest="x_min_km")
    synth.add_argument("--r-cap-km", type=float, default=None, dest="r_cap_km")
    synth.add_argument("--travel-clusters", type=int, default=None, dest="n_travel_clusters")
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--out", default="-", help="Photo CSV path ('-' for stdout)")
    synth.add_argument("--homes-out", default=None, dest="homes_out", help="Optional homes CSV path")
    synth.set_defaults(handler=run_synth)

    cluster = subparsers.add_parser("cluster", help="Cluster every owner's photos on the spanning tree")
    _add_input_arguments(cluster)
    _add_mode_arguments(cluster)
    cluster.add_argument("--out", default="-", help="Clusters JSON path ('-' for stdout)")
    cluster.set_defaults(handler=run_cluster)

    return parser


@contextlib.contextmanager
def _output(path):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as stream:
            yield stream


def config_from_args(args):
    if args.threshold_km is not None:
        return PredictorConfig.threshold(args.threshold_km, min_photos=args.min_photos)
    return PredictorConfig.fixed_k(args.k, min_photos=args.min_photos)


def _load_datasets(args):
    rejected = []
    records = load_photos(args.photos, strict=not args.lenient, rejected=rejected)
    homes = load_homes(args.homes) if args.homes else None
    return group_by_owner(records, homes), [e.to_dict() for e in rejected]


def build_predict_report(datasets, config, rejected=()):
    predictor = HometownPredictor(config)
    predictions = []
    failures = []
    for dataset in datasets:
        try:
            result = predictor.predict_dataset(dataset)
        except USER_FAILURES as e:
            failures.append({'user_id': dataset.owner_id, 'reason': f"{type(e).__name__}: {e}"})
            continue
        row = {'owner_id': dataset.owner_id, 'n_photos': dataset.n_photos}
        row.update(result.to_dict())
        if dataset.window is not None:
            row['taken_between'] = [format_timestamp(moment) for moment in dataset.window]
        predictions.append(row)
    return build_report('predict', config.to_dict(), {
        'predictions': predictions,
        'failures': failures,
        'rejected': list(rejected),
    })


def build_eval_report(datasets, config, thresholds, cdf_resolution=DEFAULT_CDF_RESOLUTION, rejected=()):
    report = evaluate_cohort(datasets, config, thresholds, cdf_resolution)
    echo = config.to_dict()
    echo['thresholds_km'] = list(thresholds)
    payload = report.to_dict()
    payload['rejected'] = list(rejected)
    return report, build_report('eval', echo, payload)


def build_fit_report(datasets, x_min_km, method=MLE, bins=30, scale=LINEAR):
    if all(dataset.reported_home is None for dataset in datasets):
        raise NoGroundTruth("no owner has a reported home to measure distances from")
    distances = pooled_home_distances(datasets)
    fit = fit_power_law(distances, x_min_km, method)

    # Zero distances have no place on a log axis
    plotted = [d for d in distances if d > 0] if scale == LOG else distances
    if not plotted:
        raise EmptySamples("no positive distances to bin")
    series = histogram(plotted, bins=bins, scale=scale)

    return build_report('fit', {'x_min_km': x_min_km, 'method': method, 'bins': bins, 'scale': scale}, {
        'n_samples': len(distances),
        'fit': fit.to_dict(),
        'histogram': series.to_dict(),
    })


def build_cluster_report(datasets, config):
    users = []
    failures = []
    for dataset in datasets:
        try:
            if config.threshold_mode:
                cluster_set = cluster_points(dataset.locations, d_max_km=config.d_max_km,
                                             max_points=config.max_points)
            else:
                cluster_set = cluster_points(dataset.locations, k=config.k, max_points=config.max_points)
        except USER_FAILURES as e:
            failures.append({'user_id': dataset.owner_id, 'reason': f"{type(e).__name__}: {e}"})
            continue
        row = {'owner_id': dataset.owner_id, 'photo_ids': [photo.photo_id for photo in dataset.photos]}
        row.update(cluster_set.to_dict())
        users.append(row)
    return build_report('cluster', config.to_dict(), {'users': users, 'failures': failures})


def run_predict(args):
    datasets, rejected = _load_datasets(args)
    report = build_predict_report(datasets, config_from_args(args), rejected)
    with _output(args.out) as stream:
        dump_report(report, stream)
    return EXIT_OK


def run_eval(args):
    datasets, rejected = _load_datasets(args)
    report, document = build_eval_report(
        datasets, config_from_args(args), args.thresholds, args.cdf_resolution, rejected
    )
    with _output(args.out) as stream:
        dump_report(document, stream)
    if args.per_user:
        with _output(args.per_user) as stream:
            write_per_user_csv(report, stream)
    return EXIT_OK


def run_fit(args):
    datasets, _ = _load_datasets(args)
    report = build_fit_report(datasets, args.x_min_km, args.method, args.bins, LOG if args.log else LINEAR)
    with _output(args.out) as stream:
        dump_report(report, stream)
    return EXIT_OK


def run_synth(args):
    params = with_overrides(
        SynthParams(),
        n_photos=args.n_photos,
        exponent=args.exponent,
        home_fraction=args.home_fraction,
        x_min_km=args.x_min_km,
        r_cap_km=args.r_cap_km,
        n_travel_clusters=args.n_travel_clusters,
        seed=args.seed,
    )
    cohort = generate_cohort(params, args.users)
    with _output(args.out) as stream:
        write_photos_csv([photo for user in cohort for photo in user.photos], stream)
    if args.homes_out:
        with _output(args.homes_out) as stream:
            write_homes_csv({user.user_id: user.true_home for user in cohort}, stream)
    return EXIT_OK


def run_cluster(args):
    datasets, _ = _load_datasets(args)
    report = build_cluster_report(datasets, config_from_args(args))
    with _output(args.out) as stream:
        dump_report(report, stream)
    return EXIT_OK


def cli_main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    if args.command is None:
        parser.print_usage(sys.stderr)
        print("hometown: error: a subcommand is required", file=sys.stderr)
        return EXIT_USAGE

    try:
        return args.handler(args)
    except (HometownError, ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"hometown {args.command}: error: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == '__main__':
    sys.exit(cli_main())
