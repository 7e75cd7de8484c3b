"""
Case split deciding whether (T, Ω) yields a Hadamard operator on D'(Ω).
"""
import logging as log
from dataclasses import dataclass, field
from enum import Enum

from hlab.distributions.reps import Membership
from hlab.errors import ApproximateVStar, HadamardError
from hlab.euler import hadamard_to_euler
from hlab.regions import Region
from hlab.regions.dilation import reciprocal, v_star
from hlab.regions.strata import omega_tilde, require_open
from hlab.regions.support import Status, support_condition
from hlab.settings import resolve


class Outcome(Enum):
    ADMISSIBLE = 'Admissible'
    NOT_ADMISSIBLE = 'NotAdmissible'
    NECESSARY = 'NecessaryConditionsHold'
    UNKNOWN = 'Unknown'

    @property
    def exit_code(self):
        return {'Admissible': 0, 'NotAdmissible': 1}.get(self.value, 3)


class Rule(Enum):
    ZERO_IN_DOMAIN = 'Thm5-zero-in-Ω'
    SUBSET_NZ = 'Thm7-subset-NZ'
    BALL = 'Thm6-ball'
    EULER_ONLY = 'Thm9-euler-only'
    NECESSITY = 'Thm4-necessity'


class CaseKind(Enum):
    CONTAINS_ZERO = 'ContainsZero'
    SUBSET_NZ = 'SubsetNZ'
    MIXED = 'Mixed'


@dataclass(frozen=True)
class DomainCase:
    kind: CaseKind
    patterns: object

    def __str__(self):
        if self.kind == CaseKind.MIXED:
            return 'Mixed({})'.format(self.patterns.describe())
        return self.kind.value


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    rule: Rule = None
    reason: str = ''
    witness: object = None
    diagnostic: str = ''
    details: dict = field(default_factory=dict)

    @property
    def exit_code(self):
        return self.outcome.exit_code

    def to_dict(self):
        witness = self.witness
        if isinstance(witness, tuple):
            witness = [str(v) for v in witness]
        elif witness is not None:
            witness = str(witness)
        return {
            'outcome': self.outcome.value,
            'rule': None if self.rule is None else self.rule.value,
            'reason': self.reason,
            'witness': witness,
            'diagnostic': self.diagnostic,
            'details': self.details,
        }


def domain_case(omega):
    require_open(omega)
    patterns = omega_tilde(omega)
    if omega.contains((0,) * omega.dimension):
        return DomainCase(CaseKind.CONTAINS_ZERO, patterns)
    if patterns.is_nonzero:
        return DomainCase(CaseKind.SUBSET_NZ, patterns)
    return DomainCase(CaseKind.MIXED, patterns)


def _not_admissible(rule, reason, witness, diagnostic=''):
    return Verdict(Outcome.NOT_ADMISSIBLE, rule, reason, witness, diagnostic)


def _from_support(rule, sc):
    if sc.status == Status.FAILS:
        return Verdict(Outcome.NOT_ADMISSIBLE, rule,
                       'support condition fails for compact K', sc.witness,
                       sc.diagnostic, {'escaping_point': [str(v) for v in sc.point]})
    if sc.status == Status.UNKNOWN:
        return Verdict(Outcome.UNKNOWN, rule, 'support condition not certified',
                       diagnostic=sc.diagnostic)
    return None


def _zero_in_domain(dist, omega, eps, settings):
    rule = Rule.ZERO_IN_DOMAIN
    if dist.is_OH() != Membership.CERTIFIED:
        return Verdict(Outcome.UNKNOWN, rule, "O'_H membership not certified",
                       diagnostic='a single representation bounds finitely many decay orders')
    failed = _from_support(rule, support_condition(dist, omega, settings))
    if failed is not None:
        return failed
    d = omega.dimension
    if omega.equals(Region.cube(1, d)) and eps >= 1:
        return Verdict(Outcome.ADMISSIBLE, Rule.BALL,
                       'supp T ⊂ W_1 and T is certified',
                       diagnostic='clearance {:g}'.format(eps))
    return Verdict(Outcome.ADMISSIBLE, rule, 'support condition holds',
                   diagnostic='clearance {:g}'.format(eps))


def _subset_nz(dist, omega, settings):
    rule = Rule.SUBSET_NZ
    supp = dist.support_of()
    if not supp.bounded:
        failed = _from_support(rule, support_condition(dist, omega, settings))
        if failed is not None and failed.outcome == Outcome.NOT_ADMISSIBLE:
            return failed
        return _not_admissible(rule, 'support is not compact', supp,
                               'only compactly supported T act on subsets of (R\\0)^d')
    vs = v_star(omega, omega, settings)
    inv = reciprocal(supp)
    if not inv.is_subset(vs.region):
        outside = inv.difference(vs.region)
        if vs.exact or not outside.is_subset(vs.unknown):
            return _not_admissible(
                rule, '1/supp T ⊄ V_*(Ω)', outside.difference(vs.unknown),
                'V_*(Ω) = {}'.format(vs.region))
        return Verdict(Outcome.UNKNOWN, rule, 'V_*(Ω) is approximate',
                       diagnostic='unknown band {}'.format(vs.unknown))
    one = Region.point((1,) * omega.dimension)
    if vs.exact and vs.region.equals(one):
        details = {}
        try:
            details['euler_polynomial'] = str(hadamard_to_euler(dist))
        except ValueError:
            pass
        return Verdict(Outcome.ADMISSIBLE, Rule.EULER_ONLY,
                       'V_*(Ω) = {𝟙}: the operator is an Euler operator',
                       diagnostic='1/supp T = {}'.format(inv), details=details)
    return Verdict(Outcome.ADMISSIBLE, rule, '1/supp T ⊂ V_*(Ω)',
                   diagnostic='V_*(Ω) = {}'.format(vs.region))


def _mixed(dist, omega, case, settings):
    rule = Rule.NECESSITY
    supp = dist.support_of()
    if case.patterns.is_punctured and not supp.bounded:
        return _not_admissible(rule, 'on R^d \\ {0} only compactly supported T qualify',
                               supp)
    failed = _from_support(rule, support_condition(dist, omega, settings))
    if failed is not None:
        return failed
    if dist.is_OH() != Membership.CERTIFIED:
        return Verdict(Outcome.UNKNOWN, rule, "O'_H membership not certified")
    return Verdict(Outcome.NECESSARY, rule,
                   'necessary conditions hold; sufficiency is open for mixed domains',
                   diagnostic='Ω̃ = {}'.format(case.patterns.describe()))


def admissible(dist, omega, settings=None):
    """Verdict for the operator S ↦ S⋆T on D'(Ω); never raises."""
    settings = resolve(settings)
    try:
        case = domain_case(omega)
        eps = dist.hyperplane_clearance()
        if eps <= 0:
            rule = {CaseKind.CONTAINS_ZERO: Rule.ZERO_IN_DOMAIN,
                    CaseKind.SUBSET_NZ: Rule.SUBSET_NZ}.get(case.kind, Rule.NECESSITY)
            return _not_admissible(rule, 'support meets a coordinate hyperplane',
                                   dist.support_of(), 'clearance 0')
        if case.kind == CaseKind.CONTAINS_ZERO:
            verdict = _zero_in_domain(dist, omega, eps, settings)
        elif case.kind == CaseKind.SUBSET_NZ:
            verdict = _subset_nz(dist, omega, settings)
        else:
            verdict = _mixed(dist, omega, case, settings)
    except HadamardError as e:
        log.warning('classification left undecided: %s', e)
        return Verdict(Outcome.UNKNOWN, reason=type(e).__name__, diagnostic=str(e))
    if verdict.outcome in (Outcome.UNKNOWN, Outcome.NECESSARY):
        log.warning('%s for %s on %s', verdict.outcome.value, dist, omega)
    return verdict


def euler_only(omega, settings=None):
    """True iff V_*(Ω) = {𝟙}, i.e. every Hadamard operator on D'(Ω) is P(θ)."""
    require_open(omega)
    vs = v_star(omega, omega, settings)
    if not vs.exact:
        raise ApproximateVStar('V_*({}) is approximate; unknown band {}'.format(
            omega, vs.unknown))
    return vs.region.equals(Region.point((1,) * omega.dimension))
