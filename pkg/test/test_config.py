import json

import pytest

from hlab.config import PARSERS, load_config, parse_config
from hlab.distributions import Density, distribution_types
from hlab.errors import ConfigError
from hlab.regions import Region
from hlab.utils import write_gz_js

EXP_TAIL = {
    'name': 'exp-tail',
    'dimension': 1,
    'distribution': {
        'kind': 'density',
        'profiles': [{'name': 'exponential', 'params': [1]}],
        'support': '[1,inf)',
    },
    'domain': '(0,1)',
    'test_functions': [{'kind': 'bump', 'center': 1.5, 'radius': 0.5}],
    'alpha': {'max': 3},
}

ONE = {'dimension': 1}
TWO = {'dimension': 2}
POINT_MASS = {'kind': 'point_mass', 'terms': [{'anchor': [2]}]}

MALFORMED = [
    ({'bogus': 1}, 'bogus'),
    ({'inputs': [[1.0]]}, 'inputs'),
    ({'dimension': 0}, 'dimension'),
    ({'dimension': 1.5}, 'dimension'),
    ({'distribution': {'kind': 'gamma'}}, 'distribution.kind'),
    ({'distribution': {}}, 'distribution.kind'),
    ({'distribution': {'kind': ['density']}}, 'distribution.kind'),
    (dict(ONE, distribution={'kind': 'point_mass', 'terms': [{'anchor': [1]}, {'anchor': 'x'}]}),
     'distribution.terms[1].anchor'),
    (dict(ONE, distribution={'kind': 'point_mass', 'terms': [{'anchor': [1], 'weight': 0}]}),
     'distribution.terms[0].weight'),
    (dict(ONE, distribution={'kind': 'point_mass', 'terms': [{'anchor': [1], 'order': [-1]}]}),
     'distribution.terms[0].order'),
    (dict(ONE, distribution={'kind': 'point_mass', 'terms': [{'anchor': [1, 2]}]}),
     'distribution.terms[0].anchor'),
    (dict(ONE, distribution={'kind': 'point_mass', 'terms': [{'anchor': [1], 'at': 2}]}),
     'distribution.terms[0].at'),
    (dict(ONE, distribution={'kind': 'density', 'support': '[1,2'}),
     'distribution.support[0][0]'),
    (dict(ONE, distribution={'kind': 'density', 'support': [['[1,2]', '[1,2]']]}),
     'distribution.support[0]'),
    (dict(ONE, distribution={'kind': 'density', 'support': '[1,2]',
                             'profiles': [{'name': 'lorentzian'}]}),
     'distribution.profiles[0]'),
    (dict(ONE, distribution={'kind': 'density', 'support': '[1,2]',
                             'decay': {'kind': 'weird'}}),
     'distribution.decay'),
    ({'domain': {'cube': 1}}, 'domain.cube'),
    (dict(TWO, domain={'cube': -1}), 'domain.cube'),
    (dict(TWO, domain={'cube': 1, 'whole': True}), 'domain'),
    (dict(TWO, domain={'whole': 1}), 'domain.whole'),
    (dict(ONE, test_functions=[{'kind': 'bump', 'center': [1], 'radius': [0]}]),
     'test_functions[0].radius[0]'),
    (dict(ONE, test_functions=[{'kind': 'random', 'count': 2}]), 'test_functions[0].kind'),
    (dict(ONE, test_functions=[{'kind': 'wavelet'}]), 'test_functions[0].kind'),
    (dict(TWO, test_functions=[{'kind': 'product', 'terms': [
        {'factors': [[{'kind': 'bump', 'center': 0, 'radius': 1}]]}]}]),
     'test_functions[0].terms[0].factors'),
    (dict(ONE, alpha={'min': 3, 'max': 1}), 'alpha.max'),
    (dict(ONE, alpha=[[0], [1, 2]]), 'alpha[1]'),
    ({'tolerances': {'quad': -1}}, 'tolerances.quad'),
    ({'tolerances': {'speed': 1}}, 'tolerances.speed'),
    ({'grid_n': 1000}, 'grid_n'),
    ({'euler': {'terms': [{'order': [1]}]}}, 'euler'),
    (dict(ONE, euler={'terms': [{'order': [1, 2]}]}), 'euler.terms[0].order'),
    (dict(ONE, dilation={'eta': [0], 'y': [[1]]}), 'dilation.eta'),
    (dict(ONE, condition2={'small': '[1/5,2/5]'}), 'condition2.large'),
    (dict(ONE, distribution=POINT_MASS, points=[]), 'points'),
]


@pytest.mark.parametrize('data,path', MALFORMED, ids=[p for _, p in MALFORMED])
def test_malformed_config_names_the_field(data, path):
    with pytest.raises(ConfigError) as e:
        parse_config(data)
    assert e.value.path == path
    assert str(e.value).startswith(path)


def test_exp_tail_config():
    cfg = parse_config(EXP_TAIL)
    assert cfg.name == 'exp-tail'
    assert isinstance(cfg.distribution, Density)
    assert cfg.domain.equals(Region.parse(['(0,1)']))
    assert cfg.alphas == [(0,), (1,), (2,), (3,)]
    assert len(cfg.test_functions) == 1
    cfg.require('distribution', 'domain', 'test_functions')
    with pytest.raises(ConfigError):
        cfg.require('euler')


def test_overrides_take_precedence():
    cfg = parse_config(dict(EXP_TAIL, tolerances={'resid': 1e-5}),
                       overrides={'alpha_max': 1, 'quad_tol': 1e-8, 'grid_n': 1024})
    assert cfg.alphas == [(0,), (1,)]
    assert cfg.settings.quad_tol == 1e-8
    assert cfg.settings.resid_tol == 1e-5
    assert cfg.settings.grid_n == 1024


def test_alpha_grid_in_two_dimensions():
    cfg = parse_config(dict(TWO, alpha={'max': 1}))
    assert cfg.alphas == [(0, 0), (0, 1), (1, 0), (1, 1)]
    cfg = parse_config(dict(TWO, alpha=[[2, 0], [0, 1], [2, 0]]))
    assert cfg.alphas == [(0, 1), (2, 0)]


def test_named_regions_and_dimension_inference():
    cfg = parse_config({'distribution': {'kind': 'point_mass', 'terms': [{'anchor': [2, 2]}]},
                        'domain': {'cube': 1}})
    assert cfg.dimension == 2
    assert cfg.domain.equals(Region.cube(1, 2))
    cfg = parse_config(dict(TWO, domain={'nonzero': True}))
    assert cfg.domain.equals(Region.nonzero(2))


def test_random_test_functions_follow_the_seed():
    data = dict(ONE, domain='(0,1)', test_functions=[{'kind': 'random', 'count': 3}], seed=5)
    first = parse_config(data)
    again = parse_config(data)
    other = parse_config(data, overrides={'seed': 6})
    assert len(first.test_functions) == 3
    assert [f.to_json() for f in first.test_functions] == \
        [f.to_json() for f in again.test_functions]
    assert other.seed == 6
    assert [f.to_json() for f in first.test_functions] != \
        [f.to_json() for f in other.test_functions]


def test_load_config_reports_json_position(tmp_path):
    bad = tmp_path / 'bad.json'
    bad.write_text('{\n  "dimension": 1,\n  oops\n}\n')
    with pytest.raises(ConfigError) as e:
        load_config(bad)
    assert 'line 3' in str(e.value)
    with pytest.raises(ConfigError):
        load_config(tmp_path / 'missing.json')


def test_load_config_from_files(tmp_path):
    plain = tmp_path / 'exp-tail.json'
    plain.write_text(json.dumps(EXP_TAIL))
    assert load_config(plain).alphas == [(0,), (1,), (2,), (3,)]
    packed = tmp_path / 'exp-tail.json.gz'
    write_gz_js(EXP_TAIL, packed)
    assert load_config(packed).name == 'exp-tail'


def test_distribution_kinds_come_from_the_class_registry():
    types = distribution_types()
    assert sorted(types) == ['density', 'euler_form', 'point_mass', 'sum']
    assert set(PARSERS) == set(types.values())
    data = {'kind': 'sum', 'parts': [POINT_MASS, {'kind': 'density', 'support': '[1,2]'}]}
    dist = parse_config(dict(ONE, distribution=data)).distribution
    assert dist.to_json()['kind'] == 'sum'
    assert [p.kind for p in dist.parts] == ['point_mass', 'density']
    assert [p.to_json()['kind'] for p in dist.parts] == ['point_mass', 'density']
