# -*- coding: utf-8 -*-
# File: config.py

import copy
import json
import os
import numpy as np

from ..errors import ConfigurationError, DomainError
from ..processes import ProcessSpec
from ..subordinators import SubordinatorSpec
from ..utils.fs import normpath
from ..verify.checks import MartingaleProbe

__all__ = ['Scenario', 'load_scenario', 'CHECK_PARAMS', 'DEFAULT_OUTPUT_DIR', 'OUTPUT_ENV']

DEFAULT_OUTPUT_DIR = 'fracount_out'
OUTPUT_ENV = 'FRACOUNT_OUT'
MIN_N_PATHS = 100

CHECK_PARAMS = {
    'exponential_martingale': ((), ()),
    'compensated_martingale': ((), ()),
    'moments': (('t',), ('of', 'grid_bias')),
    'laplace': (('s_values', 't_values'), ()),
    'poisson_fit': (('s', 't'), ()),
    'increment_correlation': (('times',), ()),
    'distribution_equality': (('t_values', 'against'), ()),
    'pgf': (('v_values', 't'), ()),
    'mean': (('t', 'target'), ()),
    'degenerate_reduction': (('variants',), ()),
}
"""
Required and optional parameters of every check a scenario may run.
"""


def _field(prefix, e):
    if isinstance(e, DomainError) and e.param:
        return prefix + '.' + e.param
    return prefix


def _number(value, field, low=None, high=None, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError("expected a number, got {!r}".format(value), field=field)
    if integer and int(value) != value:
        raise ConfigurationError("expected an integer, got {!r}".format(value), field=field)
    if not np.isfinite(value):
        raise ConfigurationError("expected a finite number, got {!r}".format(value), field=field)
    if low is not None and value < low:
        raise ConfigurationError("must be >= {}, got {}".format(low, value), field=field)
    if high is not None and value > high:
        raise ConfigurationError("must be <= {}, got {}".format(high, value), field=field)
    return int(value) if integer else float(value)


def _times(values, field, horizon):
    if not isinstance(values, list) or not values:
        raise ConfigurationError("expected a nonempty list", field=field)
    return [_number(v, '{}[{}]'.format(field, i), 0, horizon) for i, v in enumerate(values)]


def _parse_check(cfg, field, horizon):
    if not isinstance(cfg, dict) or 'name' not in cfg:
        raise ConfigurationError("a check needs a 'name'", field=field)
    name = cfg['name']
    if name not in CHECK_PARAMS:
        raise ConfigurationError("unknown check '{}', choose from {}".format(name, sorted(CHECK_PARAMS)),
                                 field=field + '.name')
    required, optional = CHECK_PARAMS[name]
    for k in cfg:
        if k != 'name' and k not in required and k not in optional:
            raise ConfigurationError("check '{}' takes no parameter '{}'".format(name, k), field=field + '.' + k)
    for k in required:
        if k not in cfg:
            raise ConfigurationError("check '{}' needs parameter '{}'".format(name, k), field=field + '.' + k)
    ret = {'name': name}
    for k in ['t', 's']:
        if k in cfg:
            ret[k] = _number(cfg[k], field + '.' + k, 0, horizon)
    if 't_values' in cfg:
        ret['t_values'] = _times(cfg['t_values'], field + '.t_values', horizon)
    if 'times' in cfg:
        ret['times'] = _times(cfg['times'], field + '.times', horizon)
        if len(ret['times']) != 3 or np.any(np.diff(ret['times']) < 0):
            raise ConfigurationError("expected three nondecreasing times", field=field + '.times')
    if 's' in ret and ret['s'] > ret['t']:
        raise ConfigurationError("need s <= t", field=field + '.s')
    if 's_values' in cfg:
        ret['s_values'] = _times(cfg['s_values'], field + '.s_values', None)
    if 'v_values' in cfg:
        ret['v_values'] = _times(cfg['v_values'], field + '.v_values', 1.)
        if 0 in ret['v_values']:
            raise ConfigurationError("v must lie in (0, 1]", field=field + '.v_values')
    if 'target' in cfg:
        ret['target'] = _number(cfg['target'], field + '.target')
    if 'of' in cfg or name == 'moments':
        ret['of'] = cfg.get('of', 'process')
        if ret['of'] not in ('process', 'clock'):
            raise ConfigurationError("expected 'process' or 'clock', got {!r}".format(ret['of']), field=field + '.of')
    if name == 'moments':
        ret['grid_bias'] = cfg.get('grid_bias', False)
        if not isinstance(ret['grid_bias'], bool):
            raise ConfigurationError("expected true or false", field=field + '.grid_bias')
    if 'against' in cfg:
        try:
            ret['against'] = ProcessSpec.from_config(cfg['against'])
        except DomainError as e:
            raise ConfigurationError(str(e), field=_field(field + '.against', e))
    if 'variants' in cfg:
        if not isinstance(cfg['variants'], list) or not cfg['variants']:
            raise ConfigurationError("expected a nonempty list", field=field + '.variants')
        ret['variants'] = []
        for i, v in enumerate(cfg['variants']):
            sub = '{}.variants[{}]'.format(field, i)
            try:
                ret['variants'].append(SubordinatorSpec.from_config(v))
            except DomainError as e:
                raise ConfigurationError(str(e), field=_field(sub, e))
    return ret


class Scenario(object):
    """
    One verification run: what to simulate, how many paths, and which checks to run.

    Built from a JSON object such as:

    .. code-block:: json

        {"name": "npp_watanabe", "seed": 7, "n_paths": 100000, "horizon": 1.0,
         "process": {"kind": "npp", "rate": {"type": "power", "c": 1, "p": 2}},
         "probes": {"u_values": [-1, 0, 0.5, 1], "time_pairs": [[0, 0.5], [0, 1]]},
         "checks": [{"name": "exponential_martingale"}]}
    """

    FIELDS = ('name', 'description', 'seed', 'n_paths', 'horizon', 'process', 'probes', 'checks',
              'output_dir', 'dump_paths', 'significance', 'threads', 'z_threshold')

    def __init__(self, name, process, n_paths, horizon, checks, seed=0, probes=None, description='',
                 output_dir=DEFAULT_OUTPUT_DIR, dump_paths=False, significance=0.01, threads=None,
                 z_threshold=4.0):
        self.name = name
        self.description = description
        self.process = process
        self.n_paths = n_paths
        self.horizon = horizon
        self.checks = checks
        self.seed = seed
        self.probes = probes or MartingaleProbe()
        self.output_dir = output_dir
        self.dump_paths = dump_paths
        self.significance = significance
        self.threads = threads
        self.z_threshold = z_threshold

    @staticmethod
    def from_config(cfg):
        """
        Validate a parsed scenario object.

        Raises:
            ConfigurationError: naming the dotted path of the first invalid field.
        """
        if not isinstance(cfg, dict):
            raise ConfigurationError("a scenario must be a JSON object")
        for k in cfg:
            if k not in Scenario.FIELDS:
                raise ConfigurationError("unknown scenario field", field=k)
        for k in ['name', 'n_paths', 'horizon', 'process', 'checks']:
            if k not in cfg:
                raise ConfigurationError("missing required field", field=k)
        name = cfg['name']
        if not isinstance(name, str) or not name or os.sep in name:
            raise ConfigurationError("expected a nonempty name without path separators", field='name')
        horizon = _number(cfg['horizon'], 'horizon', 0)
        if horizon == 0:
            raise ConfigurationError("must be > 0", field='horizon')
        kwargs = {
            'name': name,
            'description': str(cfg.get('description', '')),
            'seed': _number(cfg.get('seed', 0), 'seed', 0, 2 ** 64 - 1, integer=True),
            'n_paths': _number(cfg['n_paths'], 'n_paths', MIN_N_PATHS, integer=True),
            'horizon': horizon,
            'output_dir': cfg.get('output_dir', DEFAULT_OUTPUT_DIR),
            'significance': _number(cfg.get('significance', 0.01), 'significance', 0, 1),
            'z_threshold': _number(cfg.get('z_threshold', 4.0), 'z_threshold', 0),
        }
        if kwargs['significance'] in (0, 1):
            raise ConfigurationError("must lie in (0, 1)", field='significance')
        if cfg.get('threads') is not None:
            kwargs['threads'] = _number(cfg['threads'], 'threads', 1, integer=True)
        dump = cfg.get('dump_paths', False)
        if not isinstance(dump, bool):
            raise ConfigurationError("expected true or false", field='dump_paths')
        kwargs['dump_paths'] = dump
        if not isinstance(kwargs['output_dir'], str):
            raise ConfigurationError("expected a path", field='output_dir')

        try:
            kwargs['process'] = ProcessSpec.from_config(cfg['process'])
        except DomainError as e:
            raise ConfigurationError(str(e), field=_field('process', e))
        except (TypeError, ValueError, AttributeError) as e:
            raise ConfigurationError("malformed process: {}".format(e), field='process')
        try:
            probes = MartingaleProbe.from_config(cfg.get('probes', {}))
            probes.validate(horizon)
        except DomainError as e:
            raise ConfigurationError(str(e), field=_field('probes', e))
        except (TypeError, ValueError, AttributeError) as e:
            raise ConfigurationError("malformed probes: {}".format(e), field='probes')
        kwargs['probes'] = probes

        checks = cfg['checks']
        if not isinstance(checks, list) or not checks:
            raise ConfigurationError("expected a nonempty list", field='checks')
        kwargs['checks'] = [_parse_check(c, 'checks[{}]'.format(i), horizon) for i, c in enumerate(checks)]
        for i, c in enumerate(kwargs['checks']):
            if c['name'] in ('exponential_martingale', 'compensated_martingale') and not probes.time_pairs:
                raise ConfigurationError("martingale checks need probes.time_pairs", field='checks[{}]'.format(i))
            if c['name'] == 'exponential_martingale' and not probes.u_values:
                raise ConfigurationError("needs probes.u_values", field='checks[{}]'.format(i))
        return Scenario(**kwargs)

    def to_config(self):
        cfg = {
            'name': self.name, 'seed': self.seed, 'n_paths': self.n_paths, 'horizon': self.horizon,
            'process': self.process.to_config(), 'probes': self.probes.to_config(),
            'checks': [_check_to_config(c) for c in self.checks],
            'output_dir': self.output_dir, 'dump_paths': self.dump_paths,
            'significance': self.significance, 'z_threshold': self.z_threshold,
        }
        if self.description:
            cfg['description'] = self.description
        if self.threads is not None:
            cfg['threads'] = self.threads
        return cfg

    def replace(self, **kwargs):
        """ A copy with some fields replaced. """
        ret = copy.copy(self)
        for k, v in kwargs.items():
            if k not in self.FIELDS:
                raise AttributeError(k)
            setattr(ret, k, v)
        return ret

    @property
    def report_dir(self):
        """ ``<output_dir>/<name>``, with ``~`` and environment variables expanded. """
        return os.path.join(normpath(self.output_dir), self.name)

    def __repr__(self):
        return "Scenario(name={}, process={}, n_paths={}, seed={})".format(
            self.name, self.process.family, self.n_paths, self.seed)


def _check_to_config(check):
    ret = {}
    for k, v in check.items():
        if isinstance(v, ProcessSpec):
            v = v.to_config()
        elif k == 'variants':
            v = [x.to_config() for x in v]
        ret[k] = v
    return ret


def load_scenario(path, seed=None, threads=None, output_dir=None):
    """
    Read and validate a scenario file. Explicit arguments override the file;
    the output directory falls back to the ``FRACOUNT_OUT`` environment variable,
    then to the file, then to :data:`DEFAULT_OUTPUT_DIR`.

    Raises:
        ConfigurationError: for unreadable files, malformed JSON (with line and column) and invalid fields.
    """
    try:
        with open(path) as f:
            cfg = json.load(f)
    except ValueError as e:
        lineno = getattr(e, 'lineno', None)
        where = " at line {} column {}".format(lineno, e.colno) if lineno is not None else ''
        raise ConfigurationError("{}: invalid JSON{}: {}".format(path, where, getattr(e, 'msg', e)))
    except (IOError, OSError) as e:
        raise ConfigurationError("cannot read {}: {}".format(path, e))
    scenario = Scenario.from_config(cfg)
    updates = {}
    if seed is not None:
        updates['seed'] = _number(seed, 'seed', 0, 2 ** 64 - 1, integer=True)
    if threads is not None:
        updates['threads'] = _number(threads, 'threads', 1, integer=True)
    out = output_dir or os.environ.get(OUTPUT_ENV)
    if out:
        updates['output_dir'] = out
    return scenario.replace(**updates)
