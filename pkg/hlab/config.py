"""
Experiment configs: JSON documents parsed into module inputs.

Every literal is checked against the fields it may carry; a bad or unknown
field raises ConfigError naming its path, e.g. ``distribution.terms[1].anchor``.
"""
import json
import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from hlab.distributions import (Bump, Density, EulerForm, LinearCombination, Plateau,
                                PointMassCombo, Polynomial, Term, TestFunction,
                                distribution_types, random_test_functions)
from hlab.distributions.profiles import DecayClass, make_profile
from hlab.errors import ConfigError
from hlab.euler import EulerPolynomial
from hlab.regions import Interval, Region
from hlab.regions.strata import w_eps
from hlab.settings import DEFAULT_SETTINGS
from hlab.utils import read_js

TOP_LEVEL = {
    'name', 'dimension', 'distribution', 'domain', 'test_functions', 'alpha',
    'tolerances', 'seed', 'euler', 'm', 'n', 's', 't', 'points', 'grid_n',
    'bench', 'condition2', 'dilation',
}


@dataclass
class ExperimentConfig:
    name: str = ''
    dimension: int = None
    distribution: object = None
    domain: Region = None
    test_functions: list = field(default_factory=list)
    alphas: list = field(default_factory=list)
    settings: object = DEFAULT_SETTINGS
    seed: int = 0
    euler: EulerPolynomial = None
    m: Region = None
    n: Region = None
    s: object = None
    t: object = None
    points: np.ndarray = None
    bench_n: int = 4096
    condition2: tuple = None
    dilation: tuple = None

    def require(self, *names):
        for name in names:
            value = getattr(self, name)
            if value is None or (isinstance(value, list) and not value):
                raise ConfigError(name, 'required by this command')


def _fields(obj, path, allowed, required=()):
    if not isinstance(obj, dict):
        raise ConfigError(path, 'expected an object, got {}'.format(type(obj).__name__))
    for key in obj:
        if key not in allowed:
            raise ConfigError(_join(path, key), 'unknown field')
    for key in required:
        if key not in obj:
            raise ConfigError(_join(path, key), 'missing field')
    return obj


def _join(path, key):
    if isinstance(key, int):
        return '{}[{}]'.format(path, key)
    return '{}.{}'.format(path, key) if path else key


def _number(v, path, positive=False, integer=False):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(path, 'expected a number, got {!r}'.format(v))
    if integer and not isinstance(v, int):
        raise ConfigError(path, 'expected an integer, got {!r}'.format(v))
    if not math.isfinite(v):
        raise ConfigError(path, 'expected a finite number')
    if positive and v <= 0:
        raise ConfigError(path, 'expected a positive number, got {!r}'.format(v))
    return v


def _vector(v, path, d, integer=False, positive=False):
    if isinstance(v, (int, float)) and not isinstance(v, bool) and d == 1:
        v = [v]
    if not isinstance(v, list):
        raise ConfigError(path, 'expected a list of {} numbers'.format(d))
    if d is not None and len(v) != d:
        raise ConfigError(path, 'expected {} entries, got {}'.format(d, len(v)))
    return [_number(x, _join(path, i), positive, integer) for i, x in enumerate(v)]


def _list(v, path):
    if not isinstance(v, list) or not v:
        raise ConfigError(path, 'expected a non-empty list')
    return v


def _wrap(path, fn, *args):
    try:
        return fn(*args)
    except ConfigError:
        raise
    except (ValueError, TypeError) as e:
        raise ConfigError(path, str(e))


# regions


def parse_region(obj, path, d):
    """Box list (interval strings per coordinate) or a named family."""
    if isinstance(obj, str):
        obj = [obj]
    if isinstance(obj, list):
        boxes = []
        for i, b in enumerate(_list(obj, path)):
            bpath = _join(path, i)
            if isinstance(b, str):
                b = [b]
            if not isinstance(b, list) or not all(isinstance(s, str) for s in b):
                raise ConfigError(bpath, 'expected a list of interval strings')
            if d is not None and len(b) != d:
                raise ConfigError(bpath, 'expected {} intervals, got {}'.format(d, len(b)))
            boxes.append(tuple(_wrap(_join(bpath, j), Interval.parse, s)
                               for j, s in enumerate(b)))
        return Region(boxes)
    _fields(obj, path, {'cube', 'w_eps', 'punctured', 'nonzero', 'whole'})
    if len(obj) != 1:
        raise ConfigError(path, 'expected exactly one region family')
    if d is None:
        raise ConfigError(_join(path, next(iter(obj))), 'needs a top-level dimension')
    (kind, value), = obj.items()
    kpath = _join(path, kind)
    if kind == 'cube':
        return Region.cube(_number(value, kpath, positive=True), d)
    if kind == 'w_eps':
        return w_eps(_number(value, kpath, positive=True), d)
    if value is not True:
        raise ConfigError(kpath, 'expected true')
    return {'punctured': Region.punctured, 'nonzero': Region.nonzero,
            'whole': Region.whole}[kind](d)


# distributions


def _profile(obj, path):
    if isinstance(obj, str):
        obj = {'name': obj}
    _fields(obj, path, {'name', 'params'}, ('name',))
    params = obj.get('params', [])
    if not isinstance(params, list):
        raise ConfigError(_join(path, 'params'), 'expected a list')
    params = [_number(p, _join(_join(path, 'params'), i)) for i, p in enumerate(params)]
    return _wrap(path, make_profile, obj['name'], *params)


def _decay(obj, path):
    _fields(obj, path, {'kind', 'order'}, ('kind',))
    return _wrap(path, DecayClass, obj['kind'], obj.get('order'))


def _density(obj, path, d):
    _fields(obj, path, {'kind', 'weight', 'profiles', 'support', 'decay'}, ('support',))
    support = parse_region(obj['support'], _join(path, 'support'), d)
    profiles = obj.get('profiles', ['constant'] * support.dimension)
    if isinstance(profiles, str):
        profiles = [profiles] * support.dimension
    profiles = [_profile(p, _join(_join(path, 'profiles'), i))
                for i, p in enumerate(_list(profiles, _join(path, 'profiles')))]
    weight = _number(obj.get('weight', 1.0), _join(path, 'weight'))
    decay = _decay(obj['decay'], _join(path, 'decay')) if 'decay' in obj else None
    return _wrap(path, Density, weight, profiles, support, decay)


def _point_mass(obj, path, d):
    _fields(obj, path, {'kind', 'terms'}, ('terms',))
    terms = []
    tpath = _join(path, 'terms')
    for i, t in enumerate(_list(obj['terms'], tpath)):
        ipath = _join(tpath, i)
        _fields(t, ipath, {'anchor', 'order', 'weight'}, ('anchor',))
        anchor = _vector(t['anchor'], _join(ipath, 'anchor'), d)
        order = _vector(t.get('order', [0] * len(anchor)), _join(ipath, 'order'),
                        len(anchor), integer=True)
        if any(b < 0 for b in order):
            raise ConfigError(_join(ipath, 'order'), 'orders must be nonnegative')
        weight = _number(t.get('weight', 1.0), _join(ipath, 'weight'))
        if weight == 0:
            raise ConfigError(_join(ipath, 'weight'), 'weights must be nonzero')
        terms.append((anchor, order, weight))
    return _wrap(path, PointMassCombo, terms)


def _euler_form(obj, path, d):
    _fields(obj, path, {'kind', 'terms'}, ('terms',))
    terms = []
    tpath = _join(path, 'terms')
    for i, t in enumerate(_list(obj['terms'], tpath)):
        ipath = _join(tpath, i)
        _fields(t, ipath, {'order', 'density'}, ('density',))
        dens = _density(t['density'], _join(ipath, 'density'), d)
        order = _vector(t.get('order', [0] * dens.dimension), _join(ipath, 'order'),
                        dens.dimension, integer=True)
        if any(b < 0 for b in order):
            raise ConfigError(_join(ipath, 'order'), 'orders must be nonnegative')
        terms.append((order, dens))
    return _wrap(path, EulerForm, terms)


def _sum(obj, path, d):
    _fields(obj, path, {'kind', 'parts'}, ('parts',))
    ppath = _join(path, 'parts')
    parts = [parse_distribution(p, _join(ppath, i), d)
             for i, p in enumerate(_list(obj['parts'], ppath))]
    return _wrap(path, LinearCombination, parts)


PARSERS = {
    PointMassCombo: _point_mass,
    Density: _density,
    EulerForm: _euler_form,
    LinearCombination: _sum,
}


def parse_distribution(obj, path, d):
    if not isinstance(obj, dict) or 'kind' not in obj:
        raise ConfigError(_join(path, 'kind'), 'missing field')
    kind = obj['kind']
    types = distribution_types()
    if not isinstance(kind, str) or kind not in types:
        raise ConfigError(_join(path, 'kind'), 'unknown distribution {!r}; expected one of {}'.format(
            kind, sorted(types)))
    dist = PARSERS[types[kind]](obj, path, d)
    if d is not None and dist.dimension != d:
        raise ConfigError(path, 'is {}-dimensional, expected {}'.format(dist.dimension, d))
    return dist


# test functions


def _factor(obj, path):
    kind = obj.get('kind') if isinstance(obj, dict) else None
    if kind == 'bump':
        _fields(obj, path, {'kind', 'center', 'radius'}, ('center', 'radius'))
        return _wrap(path, Bump, _number(obj['center'], _join(path, 'center')),
                     _number(obj['radius'], _join(path, 'radius'), positive=True))
    if kind == 'plateau':
        _fields(obj, path, {'kind', 'lower', 'upper', 'margin'}, ('lower', 'upper', 'margin'))
        return _wrap(path, Plateau, _number(obj['lower'], _join(path, 'lower')),
                     _number(obj['upper'], _join(path, 'upper')),
                     _number(obj['margin'], _join(path, 'margin'), positive=True))
    if kind == 'polynomial':
        _fields(obj, path, {'kind', 'coeffs'}, ('coeffs',))
        return _wrap(path, Polynomial, _vector(obj['coeffs'], _join(path, 'coeffs'), None))
    raise ConfigError(_join(path, 'kind'), 'expected bump, plateau or polynomial')


def _product(obj, path, d, order):
    _fields(obj, path, {'kind', 'terms', 'max_order'}, ('terms',))
    terms = []
    tpath = _join(path, 'terms')
    for i, t in enumerate(_list(obj['terms'], tpath)):
        ipath = _join(tpath, i)
        _fields(t, ipath, {'coef', 'factors'}, ('factors',))
        fpath = _join(ipath, 'factors')
        coords = _list(t['factors'], fpath)
        if d is not None and len(coords) != d:
            raise ConfigError(fpath, 'expected {} coordinate factor lists'.format(d))
        factors = [[_factor(f, _join(_join(fpath, j), k))
                    for k, f in enumerate(_list(fs, _join(fpath, j)))]
                   for j, fs in enumerate(coords)]
        coef = _number(t.get('coef', 1.0), _join(ipath, 'coef'))
        terms.append(_wrap(ipath, Term, factors, coef))
    return _wrap(path, TestFunction, terms, order)


def parse_test_functions(items, path, d, domain, rng):
    out = []
    for i, obj in enumerate(_list(items, path)):
        ipath = _join(path, i)
        kind = obj.get('kind') if isinstance(obj, dict) else None
        order = obj.get('max_order', DEFAULT_SETTINGS.max_derivative_order) \
            if isinstance(obj, dict) else None
        if order is not None:
            order = _number(order, _join(ipath, 'max_order'), integer=True)
        if kind == 'bump':
            _fields(obj, ipath, {'kind', 'center', 'radius', 'monomial', 'max_order'},
                    ('center', 'radius'))
            center = _vector(obj['center'], _join(ipath, 'center'), d)
            radius = _vector(obj['radius'], _join(ipath, 'radius'), len(center), positive=True)
            mono = obj.get('monomial')
            if mono is not None:
                mono = _vector(mono, _join(ipath, 'monomial'), len(center), integer=True)
            out.append(_wrap(ipath, TestFunction.bump, center, radius, order, mono))
        elif kind == 'plateau':
            _fields(obj, ipath, {'kind', 'lower', 'upper', 'margin', 'monomial', 'max_order'},
                    ('lower', 'upper', 'margin'))
            lower = _vector(obj['lower'], _join(ipath, 'lower'), d)
            upper = _vector(obj['upper'], _join(ipath, 'upper'), len(lower))
            margin = _vector(obj['margin'], _join(ipath, 'margin'), len(lower), positive=True)
            mono = obj.get('monomial')
            if mono is not None:
                mono = _vector(mono, _join(ipath, 'monomial'), len(lower), integer=True)
            out.append(_wrap(ipath, TestFunction.plateau, lower, upper, margin, order, mono))
        elif kind == 'product':
            out.append(_product(obj, ipath, d, order))
        elif kind == 'random':
            _fields(obj, ipath, {'kind', 'count', 'max_order'}, ('count',))
            count = _number(obj['count'], _join(ipath, 'count'), positive=True, integer=True)
            if domain is None:
                raise ConfigError(_join(ipath, 'kind'), 'random test functions need a domain')
            out.extend(random_test_functions(domain, count, rng, order))
        else:
            raise ConfigError(_join(ipath, 'kind'), 'expected bump, plateau, product or random')
    return out


# euler polynomials


def parse_euler(obj, path, d):
    _fields(obj, path, {'terms'}, ('terms',))
    coeffs = {}
    tpath = _join(path, 'terms')
    for i, t in enumerate(_list(obj['terms'], tpath)):
        ipath = _join(tpath, i)
        _fields(t, ipath, {'order', 'coef'}, ('order',))
        order = tuple(_vector(t['order'], _join(ipath, 'order'), d, integer=True))
        if any(b < 0 for b in order):
            raise ConfigError(_join(ipath, 'order'), 'orders must be nonnegative')
        coef = _number(t.get('coef', 1), _join(ipath, 'coef'))
        coeffs[order] = coeffs.get(order, 0) + coef
    return _wrap(path, EulerPolynomial, coeffs, d)


# scalar sections


def parse_alphas(obj, path, d, alpha_max=None):
    if obj is None:
        obj = {}
    if isinstance(obj, dict):
        _fields(obj, path, {'min', 'max'})
        lo = _number(obj.get('min', 0), _join(path, 'min'), integer=True)
        hi = alpha_max if alpha_max is not None else obj.get('max', 8)
        hi = _number(hi, _join(path, 'max'), integer=True)
        if hi < lo:
            raise ConfigError(_join(path, 'max'), 'max is below min')
        return sorted(product(range(lo, hi + 1), repeat=d))
    values = [tuple(_vector(a, _join(path, i), d, integer=True))
              for i, a in enumerate(_list(obj, path))]
    if alpha_max is not None:
        values = [a for a in values if max(abs(v) for v in a) <= alpha_max]
    return sorted(set(values))


TOLERANCE_FIELDS = {'quad': 'quad_tol', 'resid': 'resid_tol', 'mellin': 'mellin_tol'}


def parse_tolerances(obj, path, overrides):
    _fields(obj, path, set(TOLERANCE_FIELDS))
    values = {TOLERANCE_FIELDS[k]: _number(v, _join(path, k), positive=True)
              for k, v in obj.items()}
    values.update({k: v for k, v in overrides.items() if v is not None})
    return DEFAULT_SETTINGS.replace(**values)


def _points(obj, path, d):
    return np.array([_vector(p, _join(path, i), d)
                     for i, p in enumerate(_list(obj, path))], dtype=float)


def parse_config(data, name='', overrides=None):
    """ExperimentConfig from a decoded JSON document.

    `overrides` holds the CLI flags (alpha_max, quad_tol, resid_tol, grid_n,
    seed); a flag set to None keeps the config value.
    """
    overrides = dict(overrides or {})
    _fields(data, '', TOP_LEVEL)
    cfg = ExperimentConfig(name=data.get('name', name))
    d = data.get('dimension')
    if d is not None:
        d = _number(d, 'dimension', positive=True, integer=True)
    cfg.dimension = d

    seed = overrides.get('seed')
    cfg.seed = seed if seed is not None else _number(data.get('seed', 0), 'seed', integer=True)
    rng = np.random.default_rng(cfg.seed)

    grid_n = overrides.get('grid_n') or data.get('grid_n')
    if grid_n is not None:
        grid_n = _number(grid_n, 'grid_n', positive=True, integer=True)
        if grid_n & (grid_n - 1):
            raise ConfigError('grid_n', 'must be a power of two')
    cfg.settings = parse_tolerances(data.get('tolerances', {}), 'tolerances', {
        'quad_tol': overrides.get('quad_tol'),
        'resid_tol': overrides.get('resid_tol'),
        'grid_n': grid_n,
    })

    if 'distribution' in data:
        cfg.distribution = parse_distribution(data['distribution'], 'distribution', d)
        d = d or cfg.distribution.dimension
    if 'domain' in data:
        cfg.domain = parse_region(data['domain'], 'domain', d)
        d = d or cfg.domain.dimension
    for key in ('m', 'n'):
        if key in data:
            setattr(cfg, key, parse_region(data[key], key, d))
    for key in ('s', 't'):
        if key in data:
            setattr(cfg, key, parse_distribution(data[key], key, d))
    if 'test_functions' in data:
        cfg.test_functions = parse_test_functions(
            data['test_functions'], 'test_functions', d, cfg.domain, rng)
    if 'euler' in data:
        if d is None:
            raise ConfigError('euler', 'needs a top-level dimension')
        cfg.euler = parse_euler(data['euler'], 'euler', d)
    if 'points' in data:
        if d is None:
            raise ConfigError('points', 'needs a top-level dimension')
        cfg.points = _points(data['points'], 'points', d)
    if 'bench' in data:
        _fields(data['bench'], 'bench', {'n'})
        cfg.bench_n = _number(data['bench'].get('n', cfg.bench_n), 'bench.n',
                              positive=True, integer=True)
    if 'condition2' in data:
        _fields(data['condition2'], 'condition2', {'small', 'large'}, ('small', 'large'))
        cfg.condition2 = (parse_region(data['condition2']['small'], 'condition2.small', d),
                          parse_region(data['condition2']['large'], 'condition2.large', d))
    if 'dilation' in data:
        if d is None:
            raise ConfigError('dilation', 'needs a top-level dimension')
        _fields(data['dilation'], 'dilation', {'eta', 'y'}, ('eta', 'y'))
        eta = _vector(data['dilation']['eta'], 'dilation.eta', d)
        if any(v == 0 for v in eta):
            raise ConfigError('dilation.eta', 'dilation factors must be nonzero')
        cfg.dilation = (np.array(eta, dtype=float),
                        _points(data['dilation']['y'], 'dilation.y', d))
    cfg.dimension = d
    if d is not None:
        cfg.alphas = parse_alphas(data.get('alpha'), 'alpha', d, overrides.get('alpha_max'))
    return cfg


def load_config(file, overrides=None):
    try:
        data = read_js(file)
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError('', 'cannot read {}: {}'.format(file, e))
    except json.JSONDecodeError as e:
        raise ConfigError('', '{}: line {} column {}: {}'.format(
            file, e.lineno, e.colno, e.msg))
    return parse_config(data, str(file), overrides)
