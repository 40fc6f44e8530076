#!/usr/bin/env python3
"""
Run Configuration Module
----------------------
Handles reading and writing run configuration files and turns parsed
command-line arguments into a validated RunConfig
"""

import copy
from contextlib import contextmanager
from dataclasses import dataclass, field
import json
import logging
import math
import os

from channels.base_channel import ChannelKind
from dephasing_model import DephasingModel
from exceptions import ConfigError, ValidationError
from matrix_io import read_matrix_json
from state_factory import StateFamily, StateFamilySpec

logger = logging.getLogger('correlation_dynamics.run_config')

CONFIG_VERSION = "1.0.0"

# Default run configuration
DEFAULT_RUN_CONFIG = {
    "version": CONFIG_VERSION,
    "model": {
        "profile": "gaussian",        # Options: gaussian, lorentzian
        "l_half_lambda0": 138.0       # thickness where |kappa| = 1/2
    },
    "channel": {
        "kind": None                  # None: closed form; or phase_damping, environment
    },
    "sweep": {
        "l_max": 350.0,
        "steps": 141,
        "workers": 1
    },
    "optimizer": {
        "grid_theta": 64,
        "grid_phi": 32,
        "refine_iters": 40
    },
    "tomography": {
        "counts": 10000,              # mean coincidences per setting
        "bootstrap": 200,
        "seed": 42
    },
    "cond_entropy": {
        "theta_steps": 37,            # 5 degree grid over [0, 180]
        "single_outcome": True
    },
    "qc_scan": {
        "b_values": [0.6, 0.7, 0.8, 0.9, 0.95],
        "r_values": [0.5, 0.6, 0.7, 0.8, 0.9],
        "kappa_steps": 201
    },
    "output": {
        "format": "csv"               # Options: csv, json
    }
}


def load_run_config(config_path=None):
    """
    Load run configuration from a JSON file

    Args:
        config_path (str): Path to the configuration file

    Returns:
        dict: Run configuration merged over the defaults
    """
    merged_config = copy.deepcopy(DEFAULT_RUN_CONFIG)
    if not config_path:
        logger.info("No configuration file specified, using default configuration")
        return merged_config

    if not os.path.exists(config_path):
        logger.warning(f"Configuration file {config_path} not found, using default configuration")
        return merged_config

    with open(config_path, 'r') as f:
        try:
            config = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError('--config', f"{config_path} is not valid JSON: {e}")
    if not isinstance(config, dict):
        raise ConfigError('--config', f"{config_path} must hold a JSON object")
    logger.info(f"Loaded run configuration from {config_path}")

    # Merge with defaults to ensure all required fields exist
    _deep_update(merged_config, config)
    return merged_config


def save_run_config(config, config_path):
    """
    Save run configuration to a JSON file

    Args:
        config (dict): Run configuration
        config_path (str): Path to save the configuration file
    """
    os.makedirs(os.path.dirname(os.path.abspath(config_path)), exist_ok=True)
    with open(config_path, 'w') as f:
        json.dump(config, f, indent=4)
        f.write('\n')
    logger.info(f"Saved run configuration to {config_path}")


def extract_model_config(config):
    """
    Build the thickness calibration from a run configuration

    Args:
        config (dict): Run configuration

    Returns:
        DephasingModel: Calibration
    """
    model = config.get("model", {})
    return DephasingModel(
        l_half=model.get("l_half_lambda0", DEFAULT_RUN_CONFIG["model"]["l_half_lambda0"]),
        profile=model.get("profile", DEFAULT_RUN_CONFIG["model"]["profile"]),
    )


def config_from_args(args, base=None):
    """
    Run configuration with the parsed flag values written over it

    Args:
        args (Namespace): Parsed arguments
        base (dict): Configuration the flags override, defaults if None

    Returns:
        dict: Effective run configuration
    """
    config = copy.deepcopy(base if base is not None else DEFAULT_RUN_CONFIG)
    config["model"]["l_half_lambda0"] = args.model_lhalf
    config["model"]["profile"] = args.model_profile
    config["optimizer"].update({
        "grid_theta": args.grid_theta,
        "grid_phi": args.grid_phi,
        "refine_iters": args.refine_iters,
    })
    config["output"]["format"] = args.format
    if getattr(args, 'channel', None) is not None:
        config["channel"]["kind"] = args.channel
    for key in ("l_max", "steps", "workers"):
        if hasattr(args, key):
            config["sweep"][key] = getattr(args, key)
    # tomo fit reuses --counts for the counts file path
    if isinstance(getattr(args, 'counts', None), int):
        config["tomography"]["counts"] = args.counts
    for key in ("bootstrap", "seed"):
        if hasattr(args, key):
            config["tomography"][key] = getattr(args, key)
    if hasattr(args, 'theta_steps'):
        config["cond_entropy"]["theta_steps"] = args.theta_steps
        config["cond_entropy"]["single_outcome"] = args.single_outcome
    for key in ("b_values", "r_values", "kappa_steps"):
        if hasattr(args, key):
            config["qc_scan"][key] = getattr(args, key)
    return config


def _deep_update(target, source):
    """
    Deep update a nested dictionary

    Args:
        target (dict): Target dictionary to update
        source (dict): Source dictionary with updates
    """
    for key, value in source.items():
        if key in target and isinstance(target[key], dict) and isinstance(value, dict):
            _deep_update(target[key], value)
        else:
            target[key] = value


@contextmanager
def _flag_error(flag):
    """Re-raise library validation errors under the flag that caused them"""
    try:
        yield
    except ConfigError:
        raise
    except ValidationError as e:
        raise ConfigError(flag, str(e)) from e


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI invocation needs, after defaults are applied"""
    command: str
    action: str = None
    spec: StateFamilySpec = None
    model: DephasingModel = field(default_factory=DephasingModel)
    channel: str = None
    thickness: float = 0.0
    thicknesses: tuple = (0.0,)
    l_max: float = 350.0
    steps: int = 141
    workers: int = 1
    optimizer: dict = field(default_factory=dict)
    counts: int = 10000
    counts_file: str = None
    bootstrap: int = 200
    seed: int = 42
    exact: bool = False
    theta_steps: int = 37
    single_outcome: bool = True
    b_values: tuple = ()
    r_values: tuple = ()
    kappa_steps: int = 201
    fmt: str = 'csv'
    out: str = None

    def validate(self):
        """
        Check every numeric setting against its documented range

        Returns:
            RunConfig: self, for chaining
        """
        def require(condition, flag, message):
            if not condition:
                raise ConfigError(flag, message)

        require(self.l_max > 0 and math.isfinite(self.l_max), '--l-max', f"must be positive, got {self.l_max}")
        require(self.steps >= 2, '--steps', f"must be at least 2, got {self.steps}")
        require(self.workers >= 1, '--workers', f"must be at least 1, got {self.workers}")
        require(self.thickness >= 0 and math.isfinite(self.thickness), '--l',
                f"must be non-negative, got {self.thickness}")
        require(all(t >= 0 and math.isfinite(t) for t in self.thicknesses), '--l',
                "thicknesses must be non-negative")
        require(self.counts >= 1, '--counts', f"must be a positive integer, got {self.counts}")
        require(self.bootstrap == 0 or self.bootstrap >= 50, '--bootstrap',
                f"must be 0 or at least 50, got {self.bootstrap}")
        require(self.seed >= 0, '--seed', f"must be non-negative, got {self.seed}")
        require(self.theta_steps >= 2, '--theta-steps', f"must be at least 2, got {self.theta_steps}")
        require(self.kappa_steps >= 2, '--kappa-steps', f"must be at least 2, got {self.kappa_steps}")
        require(self.fmt in ('csv', 'json'), '--format', f"must be csv or json, got {self.fmt!r}")
        for key in ('grid_theta', 'grid_phi'):
            require(int(self.optimizer.get(key, 8)) >= 8, f"--{key.replace('_', '-')}", "must be at least 8")
        require(int(self.optimizer.get('refine_iters', 0)) >= 0, '--refine-iters', "must be non-negative")
        for flag, values in (('--b-values', self.b_values), ('--r-values', self.r_values)):
            require(all(0.0 <= v <= 1.0 for v in values), flag, "values must lie in [0, 1]")
        return self


def spec_from_args(args):
    """
    Build the input state from --family/--b/--r or --matrix

    Args:
        args (Namespace): Parsed arguments

    Returns:
        StateFamilySpec: Input state
    """
    matrix_path = getattr(args, 'matrix', None)
    if matrix_path:
        matrix = read_matrix_json(matrix_path)
        with _flag_error('--matrix'):
            return StateFamilySpec(StateFamily.EXPLICIT, matrix=matrix)

    family = StateFamily(args.family)
    if family is StateFamily.EXPLICIT:
        raise ConfigError('--matrix', "the explicit family needs a matrix file")
    if args.b is None:
        raise ConfigError('--b', f"required for the {family.value} family")
    if family is StateFamily.FOUR_MIX and args.r is None:
        raise ConfigError('--r', "required for the four-mix family")
    with _flag_error('--b'):
        if not 0.0 <= args.b <= 1.0:
            raise ValidationError(f"must lie in [0, 1], got {args.b}")
    with _flag_error('--r'):
        if args.r is not None and not 0.0 <= args.r <= 1.0:
            raise ValidationError(f"must lie in [0, 1], got {args.r}")
        return StateFamilySpec(family, b=args.b, r=args.r if family is StateFamily.FOUR_MIX else None)


def run_config_from_args(args):
    """
    Turn parsed arguments into a validated RunConfig

    Args:
        args (Namespace): Parsed arguments, config defaults already applied

    Returns:
        RunConfig: Validated configuration
    """
    with _flag_error('--model-lhalf'):
        model = extract_model_config(config_from_args(args))

    channel = getattr(args, 'channel', None)
    if channel is not None:
        with _flag_error('--channel'):
            try:
                ChannelKind(channel)
            except ValueError:
                raise ValidationError(f"unknown channel {channel!r}")

    needs_state = args.command in ('sweep', 'report', 'cond-entropy', 'events') or \
        (args.command == 'tomo' and args.action == 'sim')
    spec = spec_from_args(args) if needs_state else None

    thickness = getattr(args, 'l', 0.0)
    thicknesses = tuple(thickness) if isinstance(thickness, (list, tuple)) else (thickness,)

    config = RunConfig(
        command=args.command,
        action=getattr(args, 'action', None),
        spec=spec,
        model=model,
        channel=channel,
        thickness=float(thicknesses[0]),
        thicknesses=tuple(float(t) for t in thicknesses),
        l_max=float(getattr(args, 'l_max', 350.0)),
        steps=int(getattr(args, 'steps', 141)),
        workers=int(getattr(args, 'workers', 1)),
        optimizer={
            'grid_theta': args.grid_theta,
            'grid_phi': args.grid_phi,
            'refine_iters': args.refine_iters,
        },
        counts=int(args.counts) if isinstance(getattr(args, 'counts', None), int) else 10000,
        counts_file=args.counts if isinstance(getattr(args, 'counts', None), str) else None,
        bootstrap=int(getattr(args, 'bootstrap', 0)),
        seed=int(getattr(args, 'seed', 0)),
        exact=bool(getattr(args, 'exact', False)),
        theta_steps=int(getattr(args, 'theta_steps', 37)),
        single_outcome=bool(getattr(args, 'single_outcome', True)),
        b_values=tuple(getattr(args, 'b_values', ()) or ()),
        r_values=tuple(getattr(args, 'r_values', ()) or ()),
        kappa_steps=int(getattr(args, 'kappa_steps', 201)),
        fmt=args.format,
        out=args.out,
    )
    return config.validate()
