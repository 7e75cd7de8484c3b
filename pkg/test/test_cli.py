import json

import pytest

from hlab import process_folder, run
from hlab.__main__ import main
from hlab.config import parse_config
from hlab.utils import read_gz_js

EXP_TAIL = {
    'name': 'exp-tail',
    'dimension': 1,
    'distribution': {'kind': 'density', 'profiles': ['exponential'], 'support': '[1,inf)'},
    'domain': '(0,1)',
}

BALL = {
    'name': 'ball',
    'dimension': 2,
    'distribution': {'kind': 'point_mass', 'terms': [{'anchor': [2, 2]}]},
    'domain': {'cube': 1},
}

MIXED = {
    'name': 'mixed',
    'dimension': 2,
    'distribution': {'kind': 'point_mass', 'terms': [{'anchor': [2, 0.5]}]},
    'domain': [['(-1,1)', '(1,inf)']],
}

DELTA_TABLE = {
    'name': 'delta2',
    'dimension': 1,
    'distribution': {'kind': 'point_mass', 'terms': [{'anchor': [2]}]},
    'test_functions': [{'kind': 'bump', 'center': 1, 'radius': 0.5}],
    'alpha': {'max': 3},
}


@pytest.fixture
def write(tmp_path):
    def _write(data, name=None):
        path = tmp_path / '{}.json'.format(name or data['name'])
        path.write_text(json.dumps(data))
        return str(path)
    return _write


@pytest.mark.parametrize('data,code', [(EXP_TAIL, 1), (BALL, 0), (MIXED, 3)],
                         ids=['exp-tail', 'ball', 'mixed'])
def test_classify_exit_codes(write, capsys, data, code):
    assert main(['classify', write(data), '--format', 'json']) == code
    out = json.loads(capsys.readouterr().out)
    assert out['exit_code'] == code
    assert out['command'] == 'classify'


def test_exp_tail_verdict(write, capsys):
    main(['classify', write(EXP_TAIL), '--format', 'json'])
    summary = json.loads(capsys.readouterr().out)['summary']
    assert summary['outcome'] == 'NotAdmissible'
    assert summary['rule'] == 'Thm7-subset-NZ'
    assert summary['witness'] is not None


def test_usage_errors(write, tmp_path):
    assert main(['no-such-command', write(BALL)]) == 2
    assert main(['classify']) == 2
    assert main(['classify', str(tmp_path / 'missing.json')]) == 2
    bad = dict(BALL, domain={'cube': -1})
    assert main(['classify', write(bad, 'bad')]) == 2
    assert main(['eigentable', write(BALL)]) == 2
    assert main(['classify', write(BALL), '--grid-n', '1000']) == 2


def test_eigentable_csv(write, capsys):
    assert main(['eigentable', write(DELTA_TABLE), '--format', 'csv']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == 'phi,alpha,eigenvalue,residual,scale,passed'
    assert len(lines) == 5
    assert lines[1].startswith('0,0,0.5,')
    assert lines[4].startswith('0,3,0.0625,')
    assert all(line.endswith(',True') for line in lines[1:])


def test_alpha_max_flag(write, capsys):
    assert main(['eigentable', write(DELTA_TABLE), '--format', 'csv',
                 '--alpha-max', '1']) == 0
    assert len(capsys.readouterr().out.splitlines()) == 3


def test_json_output_is_deterministic(write, capsys):
    path = write(DELTA_TABLE)
    main(['eigentable', path, '--format', 'json'])
    first = capsys.readouterr().out
    main(['eigentable', path, '--format', 'json'])
    assert capsys.readouterr().out == first


def test_gz_output(write, tmp_path):
    out = str(tmp_path / 'report.json.gz')
    assert main(['classify', write(BALL), '--output', out]) == 0
    reports = read_gz_js(out)
    assert len(reports) == 1 and reports[0]['summary']['outcome'] == 'Admissible'


def test_folder_combines_exit_codes(write, tmp_path):
    write(BALL)
    write(EXP_TAIL)
    reports, code = process_folder('classify', str(tmp_path))
    assert [r.config for r in reports] == sorted(r.config for r in reports)
    assert code == 1
    write(dict(BALL, alpha='x'), 'broken')
    reports, code = process_folder('classify', str(tmp_path))
    assert code == 2 and len(reports) == 3


def test_euler_command():
    cfg = parse_config({'name': 'p', 'dimension': 2, 'alpha': {'max': 3},
                        'euler': {'terms': [{'order': [1, 1]}, {'order': [0, 0], 'coef': 3}]}})
    report = run('euler', cfg)
    assert report.exit_code == 0
    assert report.summary['polynomial'] == '3 + θ1·θ2'
    assert report.summary['round_trip'] is True
    assert len(report.rows) == 16


def test_verify_point_mass():
    cfg = parse_config(dict(DELTA_TABLE, domain='(0,inf)',
                            dilation={'eta': [0.5], 'y': [[0.9], [1.1]]}))
    report = run('verify', cfg)
    assert report.exit_code == 0
    assert [c[0] for c in report.rows] == ['eigen-residuals', 'closed-form-eigenvalues',
                                           'dilation-commutes', 'support-condition']
    assert all(c[1] == 'pass' for c in report.rows)


def test_region_commands():
    cfg = parse_config({'name': 'v', 'dimension': 1, 'm': '(1,2)', 'n': '(1,2)'})
    report = run('vstar', cfg)
    assert report.summary['v_star'] == '{1}'
    cfg = parse_config({'name': 'o', 'dimension': 2, 'domain': {'cube': 1}})
    assert run('omega-tilde', cfg).exit_code == 0


def test_convolve_command():
    ind = {'kind': 'density', 'support': '[1,2]'}
    cfg = parse_config({'name': 'c', 'dimension': 1, 's': ind, 't': ind,
                        'points': [[1.5], [2.0], [3.0]]})
    report = run('convolve', cfg)
    assert report.exit_code == 0
    assert report.header == ['z', 'fast', 'oracle']
    assert report.summary['mass'] == pytest.approx(1.0, rel=1e-5)


SPIKE = {'kind': 'density', 'profiles': [{'name': 'bump', 'params': [1, 0.0005]}],
         'support': '[0.9995,1.0005]'}
SMOOTH = {'kind': 'density', 'profiles': [{'name': 'bump', 'params': [1.5, 0.5]}],
          'support': '[1,2]'}


def test_convolve_refuses_a_coarse_grid():
    cfg = parse_config({'name': 'spike', 'dimension': 1, 's': SPIKE, 't': SMOOTH})
    report = run('convolve', cfg)
    assert report.exit_code == 3
    assert report.log[0].startswith('GridTooCoarse')

    cfg = parse_config({'name': 'spike', 'dimension': 1, 's': SPIKE, 't': SMOOTH,
                        'grid_n': 2 ** 16})
    report = run('convolve', cfg)
    assert report.exit_code == 0
    assert report.summary['certified_error'] <= 1e-6


def test_output_does_not_depend_on_workers(write, capsys):
    path = write(dict(DELTA_TABLE, test_functions=[
        {'kind': 'bump', 'center': 1, 'radius': 0.5},
        {'kind': 'bump', 'center': 1.5, 'radius': 0.25},
        {'kind': 'plateau', 'lower': [1.75], 'upper': [2.25], 'margin': [0.25]}]))
    outputs = []
    for workers in ('1', '3'):
        assert main(['eigentable', path, '--format', 'json', '--workers', workers]) == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]
