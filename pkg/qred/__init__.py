"""
qredundancy: input redundancy analysis of parameterized quantum circuits.

Every command is a luigi task. Each task validates its inputs, computes one report and writes it atomically as JSON or
CSV below --out-dir (or to --out). The qredundancy program runs a single task with a local scheduler and echoes the
report on stdout.
"""
import os
import json
import shutil
import logging
import collections

import luigi
import numpy as np
import pandas as pd
from configobj import ConfigObj, flatten_errors
try:
    from configobj.validate import Validator
except ImportError:
    from validate import Validator
from frozendict import frozendict
from toil.job import Job

import tools.fileOps
import tools.misc
from .exceptions import *
from .circuit_io import load_circuit
from .fourier_calculus import extract_spectrum, frequency_set, GROUPING_TOL, DEFAULT_AXIS
from .rank_estimation import fourier_rank, DEFAULT_N, DEFAULT_RANK_TOL
from .arcsin_encoding import ScDictionary, sc_dimension, sc_project, sc_rank, generic_dimension, degree_bound, \
    polynomial_degree, DEFAULT_SC_TOL
from .bounds_fitting import bound_linear, bound_arcsin, bound_degree, fit_linear, fit_arcsin, tightness_sweep, \
    fit_points, DEFAULT_RESTARTS, DEFAULT_F, DEFAULT_POINTS
from .targets import parse_target, SampledTarget
from .verification import verification as run_verification, TRIALS

logger = logging.getLogger('qred')
logger.setLevel('INFO')

DEFAULT_FIT_TOL = 1e-8
TOLERANCE_FIELDS = ('rank_tol', 'sc_tol', 'fit_tol', 'grouping_tol')


###
# Base tasks shared by all commands
###


class QredTask(luigi.Task):
    """
    Base class for all commands. Holds the shared parameters.

    Reports default to <out_dir>/<task_id>.<format>, which is unique per set of significant parameters. An explicit
    --out path, or --rebuild, removes any existing report so the task always runs.
    """
    seed = luigi.IntParameter(default=0)
    tol_rank = luigi.FloatParameter(default=DEFAULT_RANK_TOL)
    budget_N = luigi.IntParameter(default=DEFAULT_N)
    restarts = luigi.IntParameter(default=DEFAULT_RESTARTS)
    config = luigi.Parameter(default=None)
    format = luigi.ChoiceParameter(choices=['json', 'csv'], default='json')
    out = luigi.Parameter(default=None, significant=False)
    out_dir = luigi.Parameter(default='./qred_output', significant=False)
    rebuild = luigi.BoolParameter(default=False, significant=False)
    logLevel = luigi.ChoiceParameter(default="INFO", choices=["INFO", "DEBUG", "ERROR", "WARNING"], significant=False)

    def __init__(self, *args, **kwargs):
        super(QredTask, self).__init__(*args, **kwargs)
        if self.rebuild is True or self.out is not None:
            for out in luigi.task.flatten(self.output()):
                if out.exists():
                    out.remove()

    def __repr__(self):
        """override the repr to make logging cleaner"""
        if hasattr(self, 'target') and self.target is not None:
            return 'Task: {} for {}'.format(self.__class__.__name__, self.target)
        return 'Task: {}'.format(self.__class__.__name__)

    def get_pipeline_args(self):
        """returns a namespace of the shared arguments with tolerances resolved against the config file"""
        args = tools.misc.PipelineNamespace()
        if self.seed < 0:
            raise InvalidInputException('--seed must be nonnegative, got {}.'.format(self.seed))
        if self.budget_N < 1:
            raise InvalidInputException('--budget-N must be at least 1, got {}.'.format(self.budget_N))
        if self.restarts < 1:
            raise InvalidInputException('--restarts must be at least 1, got {}.'.format(self.restarts))
        args.set('seed', self.seed, True)
        args.set('budget_N', self.budget_N, True)
        args.set('restarts', self.restarts, True)
        args.set('format', self.format, True)
        args.set('out_dir', os.path.abspath(self.out_dir), False)
        args.set('cfg', self.parse_cfg(), True)
        tolerances = {'rank_tol': self.tol_rank, 'sc_tol': DEFAULT_SC_TOL, 'fit_tol': DEFAULT_FIT_TOL,
                      'grouping_tol': GROUPING_TOL}
        tolerances.update(args.cfg['TOLERANCES'])
        for name, val in sorted(tolerances.items()):
            if not val > 0:
                raise InvalidInputException('Tolerance {} must be positive, got {}.'.format(name, val))
            args.set(name, val, True)
        return args

    def parse_cfg(self):
        """
        Parses the optional config file. Config file format:

        [TOLERANCES]
        rank_tol = 1e-8
        sc_tol = 1e-8
        fit_tol = 1e-8
        grouping_tol = 1e-9

        [SWEEP]
        [[cos2_linear]]
        target = cos2
        encoding = linear
        n = 1..3
        lo = 0
        hi = 1

        [RANK]
        [[identity]]
        target = poly:0,1
        x0 = 0
        eps = 0.5

        Tolerances given here override the command line. SWEEP and RANK entries are run by RunExperiments.
        """
        empty = frozendict({'TOLERANCES': frozendict(), 'SWEEP': frozendict(), 'RANK': frozendict()})
        if self.config is None:
            return empty
        if not os.path.exists(self.config):
            raise MissingFileException('Config file {} not found.'.format(self.config))
        # configspec validates the input config file
        configspec = ['[TOLERANCES]'] + ['{} = float(default=None)'.format(f) for f in TOLERANCE_FIELDS] + \
                     ['[SWEEP]', '[[__many__]]', 'target = string', "encoding = option('linear', 'arcsin')",
                      'n = string', 'lo = float(default=0.0)', 'hi = float(default=1.0)',
                      '[RANK]', '[[__many__]]', 'target = string', 'x0 = float(default=0.0)',
                      'eps = float(default=0.5)']
        parser = ConfigObj(self.config, configspec=configspec)
        for key in parser:
            if key not in ['TOLERANCES', 'SWEEP', 'RANK']:
                raise InvalidInputException('Invalid field {} in config file'.format(key))
        for key in parser.get('TOLERANCES', {}):
            if key not in TOLERANCE_FIELDS:
                raise InvalidInputException('Invalid tolerance {} in config file; expected one of {}.'.format(
                    key, ', '.join(TOLERANCE_FIELDS)))
        result = parser.validate(Validator(), preserve_errors=True)
        if result is not True:
            for sections, key, error in flatten_errors(parser, result):
                where = '/'.join(sections + [key if key is not None else ''])
                raise InvalidInputException('Invalid config entry {}: {}'.format(where, error or 'missing'))
        cfg = collections.defaultdict(dict)
        for name, val in parser['TOLERANCES'].items():
            if val is not None:
                cfg['TOLERANCES'][name] = val
        for section in ['SWEEP', 'RANK']:
            for name, entry in parser[section].items():
                cfg[section][name] = frozendict(entry)
        # return a hashable version
        return frozendict((key, frozendict(cfg[key])) for key in ['TOLERANCES', 'SWEEP', 'RANK'])

    def output(self):
        if self.out is not None:
            return luigi.LocalTarget(os.path.abspath(self.out))
        return luigi.LocalTarget(os.path.join(os.path.abspath(self.out_dir), '{}.{}'.format(self.task_id,
                                                                                         self.format)))

    def validate(self):
        """Raises a UserException if the inputs are unusable. Called before run()."""
        self.get_pipeline_args()

    def build_report(self, pipeline_args):
        """
        :return: tuple of (JSON payload, DataFrame) for the two output formats
        """
        raise NotImplementedError

    def run(self):
        self.validate()
        logger.setLevel(self.logLevel)
        pipeline_args = self.get_pipeline_args()
        logger.info('Running {}.'.format(self))
        payload, frame = self.build_report(pipeline_args)
        if pipeline_args.format == 'json':
            text = tools.fileOps.json_report(payload)
        else:
            text = tools.fileOps.csv_report(frame)
        tools.fileOps.ensure_file_dir(self.output().path)
        with self.output().open('w') as outf:
            outf.write(text)
        logger.info('Wrote report {}.'.format(self.output().path))

    def summary(self):
        """What the command line echoes once the task is done"""
        with self.output().open() as inf:
            return inf.read()

    def exit_status(self):
        return 0


@QredTask.event_handler(luigi.Event.PROCESSING_TIME)
def processing_time(task, processing_time):
    """
    An event to record the processing time of each task.
    """
    logger.info('{} finished in {:.3f} seconds.'.format(task, processing_time))


@QredTask.event_handler(luigi.Event.FAILURE)
def failure(task, exception):
    """
    Reports the failure of a task as a one-line diagnostic.
    """
    logger.error('{} failed: {}'.format(task, exception))


class QredWrapperTask(QredTask, luigi.WrapperTask):
    """add WrapperTask functionality to QredTask"""
    def output(self):
        return [r.output() for r in luigi.task.flatten(self.requires())]

    def run(self):
        pass

    def summary(self):
        return ''.join(p.path + '\n' for p in self.output())


class ToilTask(QredTask):
    """
    Task for launching toil pipelines from within luigi.
    """
    resources = {'toil': 1}  # all toil pipelines use 1 toil
    work_dir = luigi.Parameter(default='./qred_work', significant=False)
    batchSystem = luigi.Parameter(default='singleMachine', significant=False)
    maxCores = luigi.IntParameter(default=8, significant=False)
    defaultMemory = luigi.Parameter(default='2G', significant=False)
    defaultDisk = luigi.Parameter(default='2G', significant=False)
    disableCaching = luigi.BoolParameter(default=False, significant=False)
    workDir = luigi.Parameter(default=None, significant=False)
    cleanWorkDir = luigi.Parameter(default='onSuccess', significant=False)

    def __repr__(self):
        """override the QredTask repr to report the batch system being used"""
        base_repr = super(ToilTask, self).__repr__()
        return 'Toil' + base_repr + ' using batchSystem {}'.format(self.batchSystem)

    def prepare_toil_options(self, work_dir):
        """
        Prepares a Namespace object for Toil which has all defaults, overridden as specified.
        An existing jobStore with a live root job is restarted; a stale one is removed.
        :param work_dir: Parent directory where toil work will be done. jobStore will be placed inside.
        :return: Namespace
        """
        toil_args = self.get_toil_defaults()
        for name in ['batchSystem', 'defaultMemory', 'defaultDisk', 'disableCaching', 'workDir', 'cleanWorkDir']:
            setattr(toil_args, name, getattr(self, name))
        toil_args.maxCores = min(self.maxCores, tools.misc.thread_cap(default=self.maxCores))
        job_store = os.path.join(work_dir, 'jobStore')
        tools.fileOps.ensure_file_dir(job_store)
        if os.path.exists(job_store):
            try:
                root_job = next(open(os.path.join(job_store, 'rootJobStoreID'))).rstrip()
                if not os.path.exists(os.path.join(job_store, 'tmp', root_job)):
                    shutil.rmtree(job_store)
                else:
                    toil_args.restart = True
            except (OSError, StopIteration):
                shutil.rmtree(job_store)
        if toil_args.workDir is not None:
            tools.fileOps.ensure_dir(toil_args.workDir)
        toil_args.jobStore = job_store
        self.job_store = job_store
        return toil_args

    def get_toil_defaults(self):
        """
        Extracts the default toil options as a dictionary, setting jobStore to None
        :return: dict
        """
        parser = Job.Runner.getDefaultArgumentParser()
        namespace = parser.parse_args([''])  # empty jobStore attribute
        namespace.jobStore = None  # jobStore attribute will be updated per-batch
        namespace.logLevel = self.logLevel
        return namespace


def _parse_list(s, what):
    try:
        return tools.misc.parse_number_list(s)
    except ValueError as e:
        raise InvalidInputException('Malformed {} {!r}: {}'.format(what, s, e))


def _parse_target(text):
    if text is None:
        raise InputMissingException('A --target is required.')
    return parse_target(text)


###
# Commands
###


class Spectrum(QredTask):
    """
    Exact Fourier spectrum of a circuit's expectation value function over its input angles.
    """
    circuit = luigi.Parameter()
    theta = luigi.Parameter(default='')
    full = luigi.BoolParameter(default=False)
    format = luigi.ChoiceParameter(choices=['json', 'csv'], default='csv')

    def validate(self):
        super(Spectrum, self).validate()
        c = load_circuit(self.circuit)
        if len(_parse_list(self.theta, 'theta')) != c.m:
            raise SlotException('Circuit has {} training slots but --theta has {} values.'.format(
                c.m, len(_parse_list(self.theta, 'theta'))))

    def build_report(self, pipeline_args):
        logger.info('Extracting spectrum for {}.'.format(self.circuit))
        c = load_circuit(self.circuit)
        theta = [float(v) for v in _parse_list(self.theta, 'theta')]
        s = extract_spectrum(c, theta)
        df = s.to_frame(full=self.full)
        payload = {'circuit': self.circuit,
                   'n': s.n,
                   'axis_sets': [list(d) for d in s.axis_sets],
                   'symmetry_error': s.symmetry_error() if len(s.coeffs) > 0 else 0.0,
                   'coefficients': [{'w': [int(row['w{}'.format(j + 1)]) for j in range(s.n)],
                                     're': row['re'], 'im': row['im'],
                                     'numerically_zero': bool(row['numerically_zero'])}
                                    for _, row in df.iterrows()]}
        return payload, df


class Spread(QredTask):
    """
    The frequency set K_a and spread(a). a is a comma list or a file holding one.
    """
    a = luigi.Parameter()
    axis_sets = luigi.Parameter(default=None)

    def parse_a(self):
        s = self.a
        if os.path.exists(s):
            with open(s) as inf:
                s = ','.join(inf.read().replace(',', ' ').split())
        return _parse_list(s, 'a')

    def parse_axis_sets(self, n):
        """semicolon separated per-slot integer sets, e.g. -1,0,1;-2,0,2"""
        if self.axis_sets is None:
            return None
        sets = [tuple(_parse_list(d, 'axis set')) for d in self.axis_sets.split(';')]
        if len(sets) == 1 and n > 1:
            sets = sets * n
        return sets

    def validate(self):
        super(Spread, self).validate()
        if len(self.parse_a()) == 0:
            raise InvalidInputException('a is empty.')

    def build_report(self, pipeline_args):
        a = self.parse_a()
        logger.info('Enumerating K_a for a = {}.'.format(self.a))
        fs = frequency_set(a, self.parse_axis_sets(len(a)), tol=pipeline_args.grouping_tol)
        sizes = [len(d) for d in (self.parse_axis_sets(len(a)) or [DEFAULT_AXIS] * len(a))]
        payload = {'a': [float(v) for v in a],
                   'spread': fs.spread,
                   'K': list(fs.values),
                   'exact': fs.exact,
                   'generic_spread': (int(np.prod(sizes)) - 1) // 2}
        return payload, fs.to_frame()


class Rank(QredTask):
    """
    Fourier rank of a target near x0 from 2N+1 samples on [x0 - eps, x0 + eps]. Exit status 2 when exceeded.
    """
    target = luigi.Parameter()
    x0 = luigi.FloatParameter(default=0.0)
    eps = luigi.FloatParameter(default=0.5)

    def validate(self):
        super(Rank, self).validate()
        _parse_target(self.target)
        if not self.eps > 0:
            raise InvalidInputException('--eps must be positive, got {}.'.format(self.eps))

    def build_report(self, pipeline_args):
        h = _parse_target(self.target)
        logger.info('Estimating Fourier rank of {} at x0 = {}.'.format(self.target, self.x0))
        if isinstance(h, SampledTarget):
            report = fourier_rank(h.sample_set(pipeline_args.budget_N), rank_tol=pipeline_args.rank_tol)
        else:
            report = fourier_rank(h, self.x0, self.eps, pipeline_args.budget_N, pipeline_args.rank_tol)
        if report.exceeded:
            logger.warning('Rank of {} exceeds the budget ({}).'.format(self.target, report.reason))
        payload = report.to_dict()
        payload['target'] = self.target
        payload['rank_estimate'] = report.rank_estimate
        frame = pd.DataFrame([[self.target, report.hankel_rank, report.rank_estimate, report.fourier_rank,
                               report.exceeded, report.reason, report.residual, report.x0, report.delta * report.N,
                               report.N]],
                             columns=['target', 'hankel_rank', 'rank_estimate', 'fourier_rank', 'exceeded', 'reason',
                                      'residual', 'x0', 'eps', 'N'])
        return payload, frame

    def exit_status(self):
        if self.format == 'json':
            with self.output().open() as inf:
                exceeded = json.load(inf)['exceeded']
        else:
            exceeded = bool(pd.read_csv(self.output().path)['exceeded'].iloc[0])
        return 2 if exceeded else 0


class ScDim(QredTask):
    """
    Numerical dimension of the sc-monomial dictionary of (a, b) on [x0 - eps, x0 + eps]. With a target, also its
    projection residual and sc-rank with respect to this dictionary.
    """
    a = luigi.Parameter()
    b = luigi.Parameter()
    x0 = luigi.FloatParameter(default=0.0)
    eps = luigi.FloatParameter(default=0.5)
    n_samples = luigi.IntParameter(default=None)
    target = luigi.Parameter(default=None)

    def dictionary(self):
        return ScDictionary([float(v) for v in _parse_list(self.a, 'a')], [float(v) for v in _parse_list(self.b, 'b')])

    def validate(self):
        super(ScDim, self).validate()
        self.dictionary().check_segment(self.x0 - self.eps, self.x0 + self.eps)
        if self.target is not None:
            _parse_target(self.target)

    def build_report(self, pipeline_args):
        d = self.dictionary()
        logger.info('Computing sc dimension for {}.'.format(d))
        dim = sc_dimension(d, self.x0, self.eps, self.n_samples, pipeline_args.sc_tol)
        interval = d.common_interval()
        payload = {'a': list(d.a), 'b': list(d.b), 'x0': self.x0, 'eps': self.eps,
                   'monomials': len(d), 'sc_dimension': dim, 'generic_dimension': generic_dimension(d.n),
                   'common_interval': [interval.lo, interval.hi]}
        if self.target is not None:
            h = _parse_target(self.target)
            coeffs, residual = sc_project(h, d, self.x0, self.eps, self.n_samples)
            payload['target'] = self.target
            payload['projection_residual'] = residual
            payload['projection'] = {mu.label: v for mu, v in coeffs.items()}
            if d.n <= 3:
                result = sc_rank(h, self.x0, self.eps, d.n, [(d.a, d.b)], pipeline_args.sc_tol)
                payload['sc_rank'] = result.to_dict()
        return payload, d.to_frame()


class Bound(QredTask):
    """
    Input redundancy lower bound from a rank, or from a target. Echoes lower_bound_int.
    kinds: linear (log_3(r + 1)), linear_sharp (log_3(2r + 1)), arcsin (log_3(r)), degree (polynomial degree).
    """
    kind = luigi.ChoiceParameter(choices=['linear', 'linear_sharp', 'arcsin', 'degree'], default='linear')
    rank = luigi.IntParameter(default=None)
    target = luigi.Parameter(default=None)
    x0 = luigi.FloatParameter(default=0.0)
    eps = luigi.FloatParameter(default=0.5)

    def validate(self):
        super(Bound, self).validate()
        if self.rank is None and self.target is None:
            raise InputMissingException('Bound needs --rank or --target.')
        if self.rank is None and self.kind == 'arcsin':
            raise InvalidInputException('The arcsine bound needs an explicit --rank (sc-rank).')
        if self.rank is not None and self.rank < 0:
            raise InvalidInputException('--rank must be nonnegative, got {}.'.format(self.rank))

    def resolve_rank(self, pipeline_args):
        if self.rank is not None:
            return self.rank
        h = _parse_target(self.target)
        if self.kind == 'degree':
            if h.is_polynomial:
                return degree_bound(h.coefficients)
            return polynomial_degree(h, self.x0)
        report = fourier_rank(h, self.x0, self.eps, pipeline_args.budget_N, pipeline_args.rank_tol)
        return report.fourier_rank

    def build_report(self, pipeline_args):
        r = self.resolve_rank(pipeline_args)
        if self.kind in ('linear', 'linear_sharp'):
            reports = bound_linear(r)
            selected = reports[0] if self.kind == 'linear' else reports[1]
        elif self.kind == 'arcsin':
            reports = (bound_arcsin(r),)
            selected = reports[0]
        else:
            reports = (bound_degree(r),)
            selected = reports[0]
        payload = {'kind': self.kind, 'target': self.target, 'selected': selected.to_dict(),
                   'bounds': [b.to_dict() for b in reports]}
        frame = pd.DataFrame([b.to_dict() for b in reports],
                             columns=['rank_used', 'bound_kind', 'lower_bound_real', 'lower_bound_int', 'flag'])
        return payload, frame

    def summary(self):
        if self.format == 'json':
            with self.output().open() as inf:
                val = json.load(inf)['selected']['lower_bound_int']
        else:
            df = pd.read_csv(self.output().path)
            kind = {'linear': 'linear_log', 'linear_sharp': 'linear_log_sharp', 'arcsin': 'arcsin_log',
                    'degree': 'arcsin_degree'}[self.kind]
            val = df[df.bound_kind == kind].lower_bound_int.iloc[0]
            val = None if pd.isnull(val) else int(val)
        return '{}\n'.format('inf' if val is None else val)


class FitTask(QredTask):
    """Shared parameters of Fit and Sweep"""
    target = luigi.Parameter()
    encoding = luigi.ChoiceParameter(choices=['linear', 'arcsin'], default='linear')
    lo = luigi.FloatParameter(default=0.0)
    hi = luigi.FloatParameter(default=1.0)
    F = luigi.FloatParameter(default=DEFAULT_F)
    n_points = luigi.IntParameter(default=DEFAULT_POINTS)

    def validate(self):
        super(FitTask, self).validate()
        _parse_target(self.target)
        fit_points((self.lo, self.hi), 2)
        if not self.F > 0:
            raise InvalidInputException('--F must be positive, got {}.'.format(self.F))

    def fit_kwargs(self):
        kwargs = {'n_points': self.n_points}
        if self.encoding == 'linear':
            kwargs['F'] = self.F
        return kwargs


class Fit(FitTask):
    """
    Variational encoding fit at a fixed redundancy n.
    """
    n = luigi.IntParameter()

    def build_report(self, pipeline_args):
        h = _parse_target(self.target)
        logger.info('Fitting {} with {} encoding at n = {}.'.format(self.target, self.encoding, self.n))
        fitter = fit_linear if self.encoding == 'linear' else fit_arcsin
        fit = fitter(h, (self.lo, self.hi), self.n, restarts=pipeline_args.restarts, seed=pipeline_args.seed,
                     **self.fit_kwargs())
        payload = fit.to_dict()
        payload['target'] = self.target
        payload['success'] = bool(fit.residual < pipeline_args.fit_tol)
        xs, _ = fit_points((self.lo, self.hi), self.n_points)
        frame = pd.DataFrame({'x': xs, 'target': [h(x) for x in xs], 'fit': fit(xs)})
        return payload, frame


class Sweep(FitTask):
    """
    Best fit residual for every redundancy in a range such as 1..3.
    """
    n = luigi.Parameter(default='1..3')
    format = luigi.ChoiceParameter(choices=['json', 'csv'], default='csv')

    def validate(self):
        super(Sweep, self).validate()
        try:
            tools.misc.parse_range(self.n)
        except ValueError as e:
            raise InvalidInputException('Malformed range --n {!r}: {}'.format(self.n, e))

    def build_report(self, pipeline_args):
        h = _parse_target(self.target)
        logger.info('Sweeping {} with {} encoding over n = {}.'.format(self.target, self.encoding, self.n))
        df = tightness_sweep(h, (self.lo, self.hi), tools.misc.parse_range(self.n), self.encoding,
                             restarts=pipeline_args.restarts, seed=pipeline_args.seed, **self.fit_kwargs())
        hits = df[df.best_residual < pipeline_args.fit_tol]
        first = int(hits.n.iloc[0]) if len(hits) > 0 else None
        logger.info('First redundancy below {}: {}.'.format(pipeline_args.fit_tol, first))
        payload = {'target': self.target, 'encoding': self.encoding, 'first_success': first,
                   'rows': df.to_dict(orient='records')}
        return payload, df


class Verify(ToilTask):
    """
    Randomized property checks run as a toil pipeline. Exit status 1 if any trial fails.
    """
    checks = luigi.Parameter(default=','.join(TRIALS))
    trials = luigi.IntParameter(default=100)
    chunk_size = luigi.IntParameter(default=10, significant=False)
    format = luigi.ChoiceParameter(choices=['json', 'csv'], default='csv')

    def get_args(self, pipeline_args):
        args = tools.misc.HashableNamespace()
        args.checks = tuple(c.strip() for c in self.checks.split(','))
        args.trials = self.trials
        args.seed = pipeline_args.seed
        args.chunk_size = self.chunk_size
        return args

    def validate(self):
        super(Verify, self).validate()
        bad = [c for c in self.checks.split(',') if c.strip() not in TRIALS]
        if len(bad) > 0:
            raise InvalidInputException('Unknown checks {}; expected some of {}.'.format(
                ','.join(bad), ','.join(TRIALS)))
        if self.trials < 1 or self.chunk_size < 1:
            raise InvalidInputException('--trials and --chunk-size must be positive.')

    def build_report(self, pipeline_args):
        logger.info('Launching verification toil pipeline.')
        toil_work_dir = os.path.abspath(os.path.join(self.work_dir, 'toil', 'verification'))
        toil_options = self.prepare_toil_options(toil_work_dir)
        df = run_verification(self.get_args(pipeline_args), toil_options)
        logger.info('Verification toil pipeline is complete.')
        summary = {check: {'trials': int(len(g)), 'failed': int((~g.passed).sum())}
                   for check, g in df.groupby('check')}
        return {'summary': summary, 'rows': df.to_dict(orient='records')}, df

    def exit_status(self):
        if self.format == 'json':
            with self.output().open() as inf:
                failed = sum(v['failed'] for v in json.load(inf)['summary'].values())
        else:
            failed = int((~pd.read_csv(self.output().path).passed.astype(bool)).sum())
        return 1 if failed > 0 else 0


class RunExperiments(QredWrapperTask):
    """
    Runs every Sweep and Rank entry of the config file. Reports go to <out_dir>/experiments/<entry>.<format>.
    """
    def validate(self):
        super(RunExperiments, self).validate()
        if self.config is None:
            raise InputMissingException('RunExperiments needs a --config file.')

    def requires(self):
        self.validate()
        pipeline_args = self.get_pipeline_args()
        base_dir = os.path.join(pipeline_args.out_dir, 'experiments')
        for name, entry in sorted(pipeline_args.cfg['SWEEP'].items()):
            yield self.clone(Sweep, target=entry['target'], encoding=entry['encoding'], n=entry['n'],
                             lo=float(entry.get('lo', 0.0)), hi=float(entry.get('hi', 1.0)),
                             out=os.path.join(base_dir, 'sweep_{}.{}'.format(name, self.format)))
        for name, entry in sorted(pipeline_args.cfg['RANK'].items()):
            yield self.clone(Rank, target=entry['target'], x0=float(entry.get('x0', 0.0)),
                             eps=float(entry.get('eps', 0.5)),
                             out=os.path.join(base_dir, 'rank_{}.{}'.format(name, self.format)))
