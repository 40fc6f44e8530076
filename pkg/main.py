#!/usr/bin/env python3
"""
Main Module for Correlation Dynamics
----------------------------------
Command-line entry point: thickness sweeps, single-state reports, event
detection, conditional-entropy scans and the tomography pipeline
"""

import argparse
import json
import logging
import os
import sys

import numpy as np
import pandas as pd

# Add the current directory to the path so we can import our modules
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from bootstrap import bootstrap_report, bootstrap_to_dict
from correlation_measures import full_report
from dephasing_channel import evolve
from dynamics_sweep import emit, sweep
from event_detector import events, qc_gap_scan
from exceptions import CorrelationDynamicsError, ValidationError
from linalg_core import trace_distance
from matrix_io import matrix_to_dict
from measurement_optimizer import MeasurementOptimizer, conditional_entropies
from run_config import config_from_args, load_run_config, run_config_from_args, save_run_config
from tomography import read_counts, reconstruct, simulate_counts, write_counts

# Directory for generated files
OUTPUT_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'output')
DEFAULT_LOG_FILE = os.path.join(OUTPUT_DIR, "correlation_dynamics.log")

EXIT_OK = 0
EXIT_IO = 1
EXIT_VALIDATION = 2

logger = logging.getLogger('correlation_dynamics')


def setup_logging(log_file=DEFAULT_LOG_FILE):
    """
    Configure logging to a file and to stderr

    Args:
        log_file (str): Log file path
    """
    os.makedirs(os.path.dirname(os.path.abspath(log_file)), exist_ok=True)
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(log_file),
            logging.StreamHandler(sys.stderr)
        ],
        force=True
    )


class CorrelationStudy:
    def __init__(self, config, output_dir=OUTPUT_DIR):
        """
        Initialize a study for one CLI invocation

        Args:
            config (RunConfig): Validated run configuration
            output_dir (str): Directory for files written without --out
        """
        self.config = config
        self.output_dir = output_dir
        self.optimizer = MeasurementOptimizer(dict(
            config.optimizer, single_outcome=False
        ))

    def output_path(self, name, fmt):
        if self.config.out:
            return self.config.out
        return os.path.join(self.output_dir, f"{name}.{fmt}")

    def evolved_state(self, thickness):
        return evolve(self.config.spec, self.config.model, thickness, channel=self.config.channel)

    def cmd_sweep(self):
        """Sweep the thickness grid, detect events and write the table"""
        cfg = self.config
        table = sweep(cfg.spec, cfg.model, cfg.l_max, cfg.steps,
                      workers=cfg.workers, channel=cfg.channel, optimizer=self.optimizer)
        markers = events(cfg.spec, cfg.model, table)
        path = self.output_path('sweep', cfg.fmt)
        emit(table, markers, cfg.fmt, path)

        print(f"\nSweep of {cfg.spec.label()} written to {path}")
        for line in markers.summary():
            print(line)
        return EXIT_OK

    def cmd_report(self):
        """Print the correlation report of one evolved state"""
        report = full_report(self.evolved_state(self.config.thickness), optimizer=self.optimizer)
        text = json.dumps(report.to_dict(), indent=2)
        print(text)
        if self.config.out:
            self._write_text(self.config.out, text)
        return EXIT_OK

    def cmd_cond_entropy(self):
        """Conditional entropy of A against the measurement angle on B"""
        cfg = self.config
        thetas = np.linspace(0.0, 180.0, cfg.theta_steps)
        rows = []
        for thickness in cfg.thicknesses:
            values = conditional_entropies(self.evolved_state(thickness), np.radians(thetas), 0.0,
                                           single_outcome=cfg.single_outcome)
            rows.extend({'L_lambda0': thickness, 'theta_deg': t, 'S_cond': s}
                        for t, s in zip(thetas, values))
            best = int(np.nanargmin(values))
            print(f"L = {thickness:g} lambda0: minimum S = {values[best]:.6f} at theta = {thetas[best]:g} deg")

        frame = pd.DataFrame(rows, columns=['L_lambda0', 'theta_deg', 'S_cond'])
        path = self.output_path('cond-entropy', cfg.fmt)
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        if cfg.fmt == 'csv':
            frame.to_csv(path, index=False, float_format='%.9g', lineterminator='\n')
        else:
            self._write_text(path, frame.to_json(orient='records', indent=2))
        logger.info(f"Saved conditional entropies to {path}")
        return EXIT_OK

    def cmd_tomo(self):
        """Simulate counts (sim) or reconstruct from a counts file (fit)"""
        cfg = self.config
        if cfg.action == 'sim':
            count_set = simulate_counts(self.evolved_state(cfg.thickness), cfg.counts,
                                        seed=cfg.seed, exact=cfg.exact)
            path = self.output_path('tomo_sim', 'json')
            write_counts(count_set, path)
            print(f"Wrote {len(count_set.records)} count records to {path}")
            return EXIT_OK

        count_set = read_counts(cfg.counts_file)
        raw, physical = reconstruct(count_set)
        resamples = 0 if count_set.exact else cfg.bootstrap
        result = {
            "counts_file": cfg.counts_file,
            "N": count_set.n,
            "matrix": matrix_to_dict(physical),
            "raw_matrix": matrix_to_dict(raw),
            "trace_distance_raw_physical": trace_distance(raw, physical),
            "report": full_report(physical, optimizer=self.optimizer).to_dict(),
            "bootstrap": bootstrap_to_dict(
                bootstrap_report(count_set, resamples, cfg.seed, optimizer=self.optimizer)
            ),
        }
        text = json.dumps(result, indent=2)
        self._write_text(self.output_path('tomo_fit', 'json'), text)
        print(text)
        return EXIT_OK

    def cmd_events(self):
        """Detect and print the landmarks of a trajectory"""
        cfg = self.config
        table = sweep(cfg.spec, cfg.model, cfg.l_max, cfg.steps,
                      workers=cfg.workers, channel=cfg.channel, optimizer=self.optimizer)
        markers = events(cfg.spec, cfg.model, table)
        if markers.source == 'sweep':
            print(f"{cfg.spec.label()} is not Bell-diagonal; events located from the sweep")
        text = json.dumps(markers.to_dict(), indent=2, allow_nan=False)
        self._write_text(self.output_path('events', 'json'), text)
        for line in markers.summary():
            print(line)
        return EXIT_OK

    def cmd_qc_scan(self):
        """Scan the four-Bell family for the largest Q - C excess"""
        cfg = self.config
        scan = qc_gap_scan(cfg.model, cfg.b_values, cfg.r_values, cfg.kappa_steps)
        path = self.output_path('qc-scan', cfg.fmt)
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        if cfg.fmt == 'csv':
            scan.to_csv(path, index=False, float_format='%.9g', lineterminator='\n')
        else:
            self._write_text(path, scan.to_json(orient='records', indent=2))
        print("\nQ - C gap scan:")
        print(scan.head(10).to_string(index=False))
        logger.info(f"Saved gap scan to {path}")
        return EXIT_OK

    def run(self):
        """
        Run the configured command

        Returns:
            int: Exit code
        """
        logger.info(f"Running command {self.config.command}")
        handlers = {
            'sweep': self.cmd_sweep,
            'report': self.cmd_report,
            'cond-entropy': self.cmd_cond_entropy,
            'tomo': self.cmd_tomo,
            'events': self.cmd_events,
            'qc-scan': self.cmd_qc_scan,
        }
        return handlers[self.config.command]()

    @staticmethod
    def _write_text(path, text):
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, 'w') as f:
            f.write(text)
            f.write('\n')
        logger.info(f"Saved {path}")


def parse_arguments(argv=None, config=None):
    """
    Parse command line arguments, using config values as defaults

    Args:
        argv (list): Arguments, sys.argv[1:] if None
        config (dict): Run configuration supplying defaults

    Returns:
        Namespace: Parsed arguments
    """
    config = config or load_run_config()
    formatter = argparse.ArgumentDefaultsHelpFormatter

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', default=None, help='JSON run configuration file')
    common.add_argument('--log-file', default=DEFAULT_LOG_FILE, help='Log file path')
    common.add_argument('--save-config', default=None,
                        help='Write the effective run configuration to this JSON file')
    common.add_argument('--model-lhalf', type=float, default=config['model']['l_half_lambda0'],
                        help='Thickness (lambda0) at which |kappa| = 1/2')
    common.add_argument('--model-profile', choices=['gaussian', 'lorentzian'],
                        default=config['model']['profile'], help='Spectral profile of the photons')
    common.add_argument('--format', choices=['csv', 'json'], default=config['output']['format'],
                        help='Output format for tables')
    common.add_argument('--out', default=None, help='Output path (default: output/<command>.<format>)')
    common.add_argument('--grid-theta', type=int, default=config['optimizer']['grid_theta'],
                        help='Polar grid intervals of the measurement optimizer')
    common.add_argument('--grid-phi', type=int, default=config['optimizer']['grid_phi'],
                        help='Azimuthal grid points of the measurement optimizer')
    common.add_argument('--refine-iters', type=int, default=config['optimizer']['refine_iters'],
                        help='Golden-section iterations per coordinate')

    state = argparse.ArgumentParser(add_help=False)
    state.add_argument('--family', choices=['interference', 'four-mix'], default='interference',
                       help='Input state family')
    state.add_argument('--b', type=float, default=None, help='Family weight b')
    state.add_argument('--r', type=float, default=None, help='Four-mix weight R')
    state.add_argument('--matrix', default=None, help='Explicit 4x4 density matrix JSON file')
    state.add_argument('--channel', choices=['phase_damping', 'environment'],
                       default=config['channel']['kind'],
                       help='Channel implementation (default: closed elementwise form)')

    span = argparse.ArgumentParser(add_help=False)
    span.add_argument('--l-max', type=float, default=config['sweep']['l_max'], help='Largest thickness (lambda0)')
    span.add_argument('--steps', type=int, default=config['sweep']['steps'], help='Grid points including endpoints')
    span.add_argument('--workers', type=int, default=config['sweep']['workers'], help='Threads evaluating rows')

    parser = argparse.ArgumentParser(description='Correlation dynamics under one-sided dephasing',
                                     formatter_class=formatter)
    commands = parser.add_subparsers(dest='command', required=True)

    commands.add_parser('sweep', parents=[common, state, span], formatter_class=formatter,
                        help='Correlations along a thickness grid')
    commands.add_parser('events', parents=[common, state, span], formatter_class=formatter,
                        help='Sudden change, sudden death, Q > C windows, plateaus')

    report = commands.add_parser('report', parents=[common, state], formatter_class=formatter,
                                 help='Correlation report of one state')
    report.add_argument('--l', type=float, default=0.0, help='Quartz thickness (lambda0)')

    cond = commands.add_parser('cond-entropy', parents=[common, state], formatter_class=formatter,
                               help='Conditional entropy against the measurement angle')
    cond.add_argument('--l', type=float, nargs='+', default=[0.0], help='Quartz thicknesses (lambda0)')
    cond.add_argument('--theta-steps', type=int, default=config['cond_entropy']['theta_steps'],
                      help='Angles over [0, 180] degrees')
    outcome = cond.add_mutually_exclusive_group()
    outcome.add_argument('--single-outcome', dest='single_outcome', action='store_true',
                         help='Entropy of the |l> outcome only')
    outcome.add_argument('--two-outcome', dest='single_outcome', action='store_false',
                         help='Probability-weighted entropy of both outcomes')
    cond.set_defaults(single_outcome=config['cond_entropy']['single_outcome'])

    tomo = commands.add_parser('tomo', help='Simulated tomography')
    actions = tomo.add_subparsers(dest='action', required=True)
    sim = actions.add_parser('sim', parents=[common, state], formatter_class=formatter,
                             help='Simulate counts for an evolved state')
    sim.add_argument('--l', type=float, default=0.0, help='Quartz thickness (lambda0)')
    sim.add_argument('--counts', type=int, default=config['tomography']['counts'],
                     help='Mean coincidences per setting')
    sim.add_argument('--seed', type=int, default=config['tomography']['seed'], help='PRNG seed')
    sim.add_argument('--exact', action='store_true', help='Noise-free counts')
    fit = actions.add_parser('fit', parents=[common], formatter_class=formatter,
                             help='Reconstruct a state from a counts file')
    fit.add_argument('--counts', required=True, help='Counts JSON file')
    fit.add_argument('--bootstrap', type=int, default=config['tomography']['bootstrap'],
                     help='Poisson resamples (0 disables)')
    fit.add_argument('--seed', type=int, default=config['tomography']['seed'], help='PRNG seed')

    scan = commands.add_parser('qc-scan', parents=[common], formatter_class=formatter,
                               help='Scan the four-mix family for the largest Q - C gap')
    scan.add_argument('--b-values', type=float, nargs='+', default=config['qc_scan']['b_values'])
    scan.add_argument('--r-values', type=float, nargs='+', default=config['qc_scan']['r_values'])
    scan.add_argument('--kappa-steps', type=int, default=config['qc_scan']['kappa_steps'])

    return parser.parse_args(argv)


def main(argv=None):
    """
    Run the CLI

    Args:
        argv (list): Arguments, sys.argv[1:] if None

    Returns:
        int: 0 on success, 1 on I/O failure, 2 on invalid input
    """
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument('--config', default=None)
    pre.add_argument('--log-file', default=DEFAULT_LOG_FILE)
    known, _ = pre.parse_known_args(argv)
    setup_logging(known.log_file)

    try:
        config = load_run_config(known.config)
        args = parse_arguments(argv, config)
        run_config = run_config_from_args(args)
        if args.save_config:
            save_run_config(config_from_args(args, config), args.save_config)
        return CorrelationStudy(run_config).run()
    except ValidationError as e:
        logger.error(f"Invalid input: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except CorrelationDynamicsError as e:
        logger.error(f"Computation failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
