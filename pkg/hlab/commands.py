"""
Subcommands of the ``hlab`` front end.

A command turns one ExperimentConfig into a Report; ``run_config`` catches
library failures per config and records them in the report log.
"""
import logging as log
from abc import ABCMeta, abstractmethod
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from hlab.classifier import admissible
from hlab.distributions import PointMassCombo
from hlab.errors import ConfigError, HadamardError
from hlab.euler import euler_to_hadamard, hadamard_to_euler
from hlab.hadamard import dilation_commutes, eigentable, eigenvalue, transpose_apply
from hlab.mellin import convolve_fast, convolve_oracle
from hlab.mellin.bench import bench_compare
from hlab.regions.dilation import lemma3_check, v_star
from hlab.regions.strata import omega_tilde
from hlab.regions.support import Status, condition2_check, support_condition
from hlab.utils import m_map, to_csv_text, to_json_text, todict

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_UNKNOWN = 3

CLOSED_FORM_TOL = 1e-9


def worst(codes):
    """Combined exit code: usage errors dominate, then failures, then Unknown."""
    codes = set(codes)
    for code in (EXIT_USAGE, EXIT_FAILED, EXIT_UNKNOWN):
        if code in codes:
            return code
    return EXIT_OK


@dataclass
class Report:
    command: str
    config: str
    exit_code: int = EXIT_OK
    summary: dict = field(default_factory=dict)
    header: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    log: list = field(default_factory=list)

    def to_dict(self):
        return {
            'command': self.command,
            'config': self.config,
            'exit_code': self.exit_code,
            'summary': todict(self.summary),
            'header': list(self.header),
            'rows': todict(self.rows),
            'log': list(self.log),
        }

    def to_text(self):
        lines = ['== {} {} (exit {})'.format(self.command, self.config, self.exit_code)]
        for key in sorted(self.summary):
            lines.append('{}: {}'.format(key, _text(self.summary[key])))
        if self.rows:
            lines.append('  '.join(self.header))
            for row in self.rows:
                lines.append('  '.join(_text(v) for v in row))
        for entry in self.log:
            lines.append('! ' + entry)
        return '\n'.join(lines) + '\n'


def _text(v):
    if isinstance(v, float):
        return '{:.12g}'.format(v)
    if isinstance(v, (list, tuple)) and all(isinstance(x, int) for x in v):
        return '(' + ','.join(str(x) for x in v) + ')'
    v = todict(v)
    if isinstance(v, (dict, list)):
        return to_json_text(v).replace('\n', ' ')
    return str(v)


def render(reports, fmt):
    """Report bytes for stdout or --output, identical across runs."""
    if fmt == 'json':
        body = reports[0] if len(reports) == 1 else reports
        return to_json_text(body) + '\n'
    if fmt == 'csv':
        many = len(reports) > 1
        parts = []
        for r in reports:
            header, rows = r.header, r.rows
            if not rows:
                header = ['key', 'value']
                rows = [(k, _text(r.summary[k])) for k in sorted(r.summary)]
            if many:
                header = ['config'] + list(header)
                rows = [(r.config,) + tuple(row) for row in rows]
            parts.append(to_csv_text(header, rows))
        return ''.join(parts)
    return '\n'.join(r.to_text() for r in reports)


class Command(metaclass=ABCMeta):
    name = None
    description = ''

    def __init__(self, workers=1, verbose=-1):
        self.workers = workers
        self.verbose = verbose

    @abstractmethod
    def run(self, cfg, report):
        """Fill the report from the config; return the exit code."""

    def run_config(self, cfg):
        report = Report(self.name, cfg.name)
        try:
            report.exit_code = self.run(cfg, report)
        except ConfigError as e:
            report.log.append(str(e))
            report.exit_code = EXIT_USAGE
            if self.verbose > 1:
                raise e
        except HadamardError as e:
            report.log.append('{}: {}'.format(type(e).__name__, e))
            report.exit_code = EXIT_UNKNOWN
            if self.verbose > 1:
                raise e
        except ValueError as e:
            report.log.append('invalid input: {}'.format(e))
            report.exit_code = EXIT_USAGE
            if self.verbose > 1:
                raise e
        log.info('%s %s finished with exit code %d', self.name, cfg.name, report.exit_code)
        return report


def command_types():
    return {cls.name: cls for cls in Command.__subclasses__()}


def _table_rows(phi, dist, alphas, settings):
    return eigentable(dist, alphas, phi, settings)


class EigenTable(Command):
    name = 'eigentable'
    description = 'eigenvalues m_α and their residuals for every α in range'

    def run(self, cfg, report):
        cfg.require('distribution', 'test_functions', 'alphas')
        tables = m_map(partial(_table_rows, dist=cfg.distribution, alphas=cfg.alphas,
                               settings=cfg.settings),
                       cfg.test_functions, self.workers, progress=self.verbose >= 0)
        report.header = ['phi', 'alpha', 'eigenvalue', 'residual', 'scale', 'passed']
        failed = 0
        radius = None
        for i, rows in enumerate(tables):
            for r in rows:
                report.rows.append((i, r.alpha, r.eigenvalue, r.residual, r.scale, r.passed))
                failed += not r.passed
                radius = r.truncation_radius if radius is None else radius
        # rows ordered by α first, then by test function
        report.rows.sort(key=lambda row: (row[1], row[0]))
        report.summary.update({
            'distribution': str(cfg.distribution),
            'alphas': len(cfg.alphas),
            'test_functions': len(cfg.test_functions),
            'failed': failed,
            'residual_tolerance': cfg.settings.resid_tol,
            'truncation_radius': radius,
        })
        return EXIT_FAILED if failed else EXIT_OK


def _closed_form(dist, alpha):
    """m_α for point masses of order 0: Σ w σ(a) Π a_j^{-α_j-1}."""
    total = 0.0
    for a, beta, w in dist.terms:
        a = np.array(a)
        total += w * np.prod(np.sign(a) * np.abs(a) ** (-np.array(alpha, dtype=float) - 1))
    return float(total)


def _check(name, status, detail):
    return (name, status, detail)


class Verify(Command):
    name = 'verify'
    description = 'every available check for one (T, Ω)'

    def run(self, cfg, report):
        cfg.require('distribution')
        dist, settings = cfg.distribution, cfg.settings
        checks = []
        if cfg.test_functions and cfg.alphas:
            tables = m_map(partial(_table_rows, dist=dist, alphas=cfg.alphas,
                                   settings=settings),
                           cfg.test_functions, self.workers, progress=self.verbose >= 0)
            rows = [r for t in tables for r in t]
            worst_row = max(rows, key=lambda r: abs(r.residual) / max(1.0, r.scale))
            checks.append(_check(
                'eigen-residuals', 'pass' if all(r.passed for r in rows) else 'fail',
                'worst residual {:.3e} at α={}'.format(worst_row.residual, worst_row.alpha)))
        if isinstance(dist, PointMassCombo) and cfg.alphas:
            checks.append(self._closed_forms(dist, cfg.alphas, settings))
        if cfg.dilation is not None and cfg.test_functions:
            checks.append(self._dilation(dist, cfg, settings))
        if cfg.domain is not None:
            sc = support_condition(dist, cfg.domain, settings)
            status = {Status.HOLDS: 'pass', Status.FAILS: 'fail'}.get(sc.status, 'unknown')
            checks.append(_check('support-condition', status, sc.diagnostic))
            if cfg.condition2 is not None:
                small, large = cfg.condition2
                ok = condition2_check(dist, cfg.domain, small, large, settings)
                checks.append(_check('condition-2', 'pass' if ok else 'fail',
                                     'ω={} L={}'.format(small, large)))
            verdict = admissible(dist, cfg.domain, settings)
            report.summary['verdict'] = verdict.to_dict()
        report.header = ['check', 'status', 'detail']
        report.rows = checks
        report.summary['distribution'] = str(dist)
        codes = [{'pass': EXIT_OK, 'fail': EXIT_FAILED}.get(s, EXIT_UNKNOWN)
                 for _, s, _ in checks]
        if 'verdict' in report.summary:
            codes.append(verdict.exit_code)
        return worst(codes)

    def _closed_forms(self, dist, alphas, settings):
        try:
            poly = hadamard_to_euler(dist)
            expected = [poly.evaluate(a) for a in alphas]
            label = 'P(α) with P = {}'.format(poly)
        except ValueError:
            if any(any(beta) for _, beta, _ in dist.terms):
                return _check('closed-form-eigenvalues', 'unknown',
                              'no closed form for derivatives away from 𝟙')
            expected = [_closed_form(dist, a) for a in alphas]
            label = 'Σ w σ(a) a^(-α-1)'
        worst_err = 0.0
        for a, e in zip(alphas, expected):
            m = eigenvalue(dist, a, settings)
            worst_err = max(worst_err, abs(m - e) / max(1.0, abs(e)))
        status = 'pass' if worst_err <= CLOSED_FORM_TOL else 'fail'
        return _check('closed-form-eigenvalues', status,
                      '{}: worst relative error {:.3e}'.format(label, worst_err))

    def _dilation(self, dist, cfg, settings):
        eta, ys = cfg.dilation
        phi = cfg.test_functions[0]
        gap = dilation_commutes(dist, phi, eta, ys, settings)
        ref = np.abs(transpose_apply(dist, phi, settings).partial(ys * eta))
        ok = bool(np.all(gap <= settings.resid_tol * np.maximum(1.0, ref)))
        return _check('dilation-commutes', 'pass' if ok else 'fail',
                      'max gap {:.3e} over {} points'.format(float(np.max(gap)), len(ys)))


class Classify(Command):
    name = 'classify'
    description = 'is S ↦ S⋆T a Hadamard operator on D\'(Ω)'

    def run(self, cfg, report):
        cfg.require('distribution', 'domain')
        verdict = admissible(cfg.distribution, cfg.domain, cfg.settings)
        report.summary.update(verdict.to_dict())
        report.summary['distribution'] = str(cfg.distribution)
        report.summary['domain'] = str(cfg.domain)
        return verdict.exit_code


class OmegaTilde(Command):
    name = 'omega-tilde'
    description = 'dilation hull of Ω as zero-pattern strata'

    def run(self, cfg, report):
        cfg.require('domain')
        strata = omega_tilde(cfg.domain)
        report.summary.update(strata.to_json())
        report.summary['domain'] = str(cfg.domain)
        return EXIT_OK


class VStarCommand(Command):
    name = 'vstar'
    description = 'V_*(M, N) and the complement duality check'

    def run(self, cfg, report):
        cfg.require('m', 'n')
        vs = v_star(cfg.m, cfg.n, cfg.settings)
        duality = lemma3_check(cfg.m, cfg.n, cfg.settings)
        report.summary.update({
            'm': str(cfg.m),
            'n': str(cfg.n),
            'v_star': str(vs.region),
            'exactness': vs.tag,
            'unknown': str(vs.unknown),
            'duality': duality.to_json(),
        })
        if duality.exact and not duality.equal:
            return EXIT_FAILED
        return EXIT_OK if vs.exact and duality.exact else EXIT_UNKNOWN


class SupportCheck(Command):
    name = 'support-check'
    description = 'support condition of T on Ω'

    def run(self, cfg, report):
        cfg.require('distribution', 'domain')
        sc = support_condition(cfg.distribution, cfg.domain, cfg.settings)
        report.summary.update(sc.to_json())
        report.summary['domain'] = str(cfg.domain)
        codes = [{Status.HOLDS: EXIT_OK, Status.FAILS: EXIT_FAILED}.get(sc.status, EXIT_UNKNOWN)]
        if cfg.condition2 is not None:
            small, large = cfg.condition2
            ok = condition2_check(cfg.distribution, cfg.domain, small, large, cfg.settings)
            report.summary['condition2'] = ok
            codes.append(EXIT_OK if ok else EXIT_FAILED)
        return worst(codes)


class Convolve(Command):
    name = 'convolve'
    description = 'induced density s⋆t on a log-grid'

    def run(self, cfg, report):
        cfg.require('s', 't')
        n = cfg.settings.grid_n
        result = convolve_fast(cfg.s, cfg.t, n, cfg.settings)
        report.summary.update({
            's': str(cfg.s), 't': str(cfg.t), 'grid_n': n, 'mass': result.mass(),
            'pieces': len(result.pieces), 'certified_error': result.error,
        })
        if cfg.points is None:
            if result.dimension != 1:
                raise ConfigError('points', 'required for d > 1')
            report.header = ['z', 'value']
            report.rows = result.to_rows()
            return EXIT_OK
        fast = result.values_at(cfg.points)
        oracle = convolve_oracle(cfg.s, cfg.t, cfg.points, cfg.settings)
        report.header = ['z', 'fast', 'oracle']
        report.rows = [(list(z), float(a), float(b))
                       for z, a, b in zip(cfg.points.tolist(), fast, oracle)]
        scale = max(float(np.max(np.abs(oracle))), 1e-300)
        err = float(np.max(np.abs(fast - oracle))) / scale
        report.summary['max_relative_error'] = err
        return EXIT_OK if err <= cfg.settings.mellin_tol else EXIT_FAILED


class Bench(Command):
    name = 'bench'
    description = 'fast convolution against the oracle, timed'

    def run(self, cfg, report):
        pair = (cfg.s, cfg.t) if cfg.s is not None and cfg.t is not None else None
        report.summary.update(bench_compare(cfg.bench_n, cfg.settings, pair,
                                            quiet=self.verbose < 0))
        # the speedup target is machine dependent and never fails the run
        return EXIT_OK


class Euler(Command):
    name = 'euler'
    description = 'θ-expansion, eigenvalues and point-mass form of P(θ)'

    def run(self, cfg, report):
        cfg.require('euler')
        poly = cfg.euler
        dist = euler_to_hadamard(poly)
        back = hadamard_to_euler(dist)
        report.summary.update({
            'polynomial': str(poly),
            'expansion': [[list(k), c] for k, c in sorted(poly.expand().items())],
            'transpose': str(poly.reflect()),
            'point_masses': str(dist),
            'round_trip': back == poly,
        })
        report.header = ['alpha', 'P(alpha)', 'eigenvalue', 'error']
        failed = back != poly
        for a in cfg.alphas:
            expected = poly.evaluate(a)
            m = eigenvalue(dist, a, cfg.settings)
            err = abs(m - expected) / max(1.0, abs(expected))
            failed = failed or err > CLOSED_FORM_TOL
            report.rows.append((a, expected, m, err))
        return EXIT_FAILED if failed else EXIT_OK
