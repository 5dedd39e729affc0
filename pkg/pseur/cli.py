import argparse
import logging
import sys
import yaml
from collections import OrderedDict
from os import path as osp

from pseur.data import create_dataset, steering_vector
from pseur.metrics import (beampattern, calculate_optimal_sinr,
                           notch_prediction)
from pseur.models import create_model
from pseur.models.archs.pseur_arch import PipelineConfig, estimate_ipn
from pseur.ops import NoInterferenceError, NumericalError
from pseur.sweep import (METHOD_PRESETS, ExperimentPlan, run_sweep,
                         select_methods)
from pseur.utils import (MessageLogger, export_beampattern, export_sweep,
                         get_env_info, get_root_logger, get_time_str,
                         make_exp_dirs, write_csv)
from pseur.utils.options import (complete_opt, dict2str, example_path,
                                 load_yaml)

COMMANDS = ('sweep-snr', 'sweep-snapshots', 'beampattern', 'trial')
COMMAND_AXES = {'sweep-snr': 'snr_db', 'sweep-snapshots': 'num_snapshots'}


def build_parser():
    parser = argparse.ArgumentParser(
        prog='pseur',
        description='Robust adaptive beamforming experiments on a ULA.')
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument(
        '-opt', '--scenario', dest='opt', type=str, default=None,
        help='Path to option YAML file.')
    parser.add_argument(
        '--example', type=int, choices=[1, 2, 3, 4], default=None,
        help='Use a bundled simulation example.')
    parser.add_argument(
        '--methods', type=str, default=None,
        help='Comma separated methods: ' + ', '.join(METHOD_PRESETS) + '.')
    parser.add_argument('--trials', type=int, default=None)
    parser.add_argument('--seed', type=int, default=None)
    parser.add_argument('--num_worker', type=int, default=None)
    parser.add_argument(
        '--index', type=int, default=0,
        help='Trial index of the beampattern and trial commands.')
    parser.add_argument('--out', type=str, default=None, help='Output CSV.')
    return parser


def parse_options(argv=None):
    """Options of one CLI call: file or example, then flag overrides."""
    args = build_parser().parse_args(argv)
    if args.opt is not None and args.example is not None:
        raise ValueError('Use either --scenario or --example, not both.')
    if args.index < 0:
        raise ValueError(f'--index must be >= 0, got {args.index}.')
    if args.opt is not None:
        raw = load_yaml(args.opt)
    elif args.example is not None:
        raw = load_yaml(example_path(args.example))
    else:
        raw = OrderedDict()

    axis = COMMAND_AXES.get(args.command)
    sweep = raw.get('sweep') or OrderedDict()
    raw['sweep'] = sweep
    if axis is not None and sweep.get('axis', 'snr_db') != axis:
        sweep['axis'] = axis
        sweep.pop('values', None)
    if args.trials is not None:
        raw['trials'] = args.trials
    if args.seed is not None:
        raw['manual_seed'] = args.seed
    if args.num_worker is not None:
        raw['num_worker'] = args.num_worker
    if args.methods is not None:
        tags = [t.strip() for t in args.methods.split(',') if t.strip()]
        raw['methods'] = select_methods(tags)
    opt = complete_opt(raw)
    return args, opt


def _default_out(opt, command):
    return osp.join(opt['path']['results_root'],
                    f'{opt["name"]}_{command.replace("-", "_")}.csv')


def sweep(args, opt, logger):
    plan = ExperimentPlan.from_opt(opt)
    msg_logger = MessageLogger(opt)
    rows = run_sweep(plan, msg_logger=msg_logger, use_pbar=True)
    out = args.out or _default_out(opt, args.command)
    export_sweep(rows, out)
    logger.info(f'Sweep of {len(rows)} rows saved to {out}')


def _trial_batch(args, opt):
    plan = ExperimentPlan.from_opt(opt)
    dataset = create_dataset(
        OrderedDict(
            name=opt['name'],
            type='SnapshotDataset',
            scenario=plan.scenario,
            num_snapshots=plan.num_snapshots,
            trials=args.index + 1,
            manual_seed=plan.base_seed,
            snr_db=plan.snr_db))
    return dataset[args.index]


def _model(tag, reconstructor, opt):
    return create_model(
        OrderedDict(
            name=tag,
            model_type='MVDRBeamformer',
            reconstructor=reconstructor,
            metrics=opt['metrics']))


def trial(args, opt, logger):
    batch = _trial_batch(args, opt)
    optimal = calculate_optimal_sinr(batch)
    logger.info(f'Trial {args.index}: optimal SINR {optimal:.3f} dB')
    rows = []
    for tag, reconstructor in opt['methods'].items():
        values = _model(tag, reconstructor, opt).evaluate(batch)
        if values is None:
            rows.append((tag, float('nan'), float('nan')))
            continue
        logger.info(f'{tag}: ' + ', '.join(
            f'{name} {value:.3f}' for name, value in values.items()))
        rows.append((tag, values['sinr'], values['deviation']))
    if args.out:
        write_csv(args.out, ('method', 'sinr_db', 'dev_db'), rows)
        logger.info(f'Trial results saved to {args.out}')


def pattern(args, opt, logger):
    tag = next(iter(opt['methods'])) if args.methods else 'pseur'
    reconstructor = opt['methods'].get(tag, METHOD_PRESETS.get(tag))
    batch = _trial_batch(args, opt)
    model = _model(tag, reconstructor, opt)
    model.feed_data(batch)
    model.test()
    weights = model.get_current_weights()
    result = beampattern(weights, batch.spec)
    out = args.out or _default_out(opt, args.command)
    export_beampattern(result, out)
    logger.info(f'{tag} beampattern saved to {out}')

    if reconstructor['type'] != 'PseurReconstructor':
        return
    kwargs = {k: v for k, v in reconstructor.items() if k != 'type'}
    try:
        state = estimate_ipn(batch, batch.look_direction,
                             PipelineConfig.from_opt(kwargs))
    except NoInterferenceError:
        return
    product = state.product
    for sector in state.sectors:
        predicted = notch_prediction(
            product.partial_eig, product.spectrum.gamma_low,
            product.spectrum.gamma_high, weights.look_steering,
            sector.center, batch.spec)
        measured = abs(
            weights.response(steering_vector(sector.center, batch.spec)))
        logger.info(f'Notch at {sector.center:.1f} deg '
                    f'(+-{sector.half_width:.2f}): predicted '
                    f'{predicted:.3e}, measured {measured:.3e}')


def main(argv=None):
    """Entry point. Returns 0 on success, 1 on a configuration error and 2
    on a numerical failure."""
    try:
        args, opt = parse_options(argv)
    except (ValueError, TypeError, OSError, yaml.YAMLError) as err:
        get_root_logger().error(f'Configuration error: {err}')
        return 1

    make_exp_dirs(opt, archive=args.command in COMMAND_AXES)
    log_file = osp.join(opt['path']['log'],
                        f'{args.command}_{opt["name"]}_{get_time_str()}.log')
    logger = get_root_logger(
        logger_name='pseur', log_level=logging.INFO, log_file=log_file)
    logger.info(get_env_info())
    logger.info(dict2str(opt))

    try:
        if args.command in COMMAND_AXES:
            sweep(args, opt, logger)
        elif args.command == 'trial':
            trial(args, opt, logger)
        else:
            pattern(args, opt, logger)
    except NumericalError as err:
        logger.error(f'Numerical failure: {err}')
        return 2
    except (ValueError, TypeError, OSError) as err:
        logger.error(f'Configuration error: {err}')
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
