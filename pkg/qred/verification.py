"""
Toil program running randomized property checks in batches.

Each check is a pure function of a seed that builds its own random instance and returns one result row:

    confinement    spectrum reconstruction matches the simulator at random off-grid angles
    shift_rule     the parameter-shift identity matches central finite differences
    theorem        the estimated Fourier rank of an encoded circuit never exceeds spread(a)
    soundness      synthesized exponential sums of known rank are recovered exactly and reproduce their samples

Seeds are split into chunks, each chunk is a child job, and a follow-on job merges the rows into a table.
"""
import logging

import numpy as np
import pandas as pd
from toil.common import Toil
from toil.job import Job

import tools.dataOps
from .exceptions import InvalidInputException
from .pqc_core import random_circuit, evaluate, evaluate_encoded, shift_gradient, Encoding
from .fourier_calculus import extract_spectrum, spread
from .rank_estimation import fourier_rank

CONFINEMENT_TOL = 1e-9
SHIFT_RULE_TOL = 1e-6
SOUNDNESS_RESIDUAL_TOL = 1e-7
FD_STEP = 1e-5


def confinement_trial(seed, n_points=50):
    """Random circuit with at most 4 qubits and 4 input slots; 3-point-per-axis DFT against the simulator"""
    rng = np.random.default_rng(seed)
    n_q = int(rng.integers(1, 5))
    n = int(rng.integers(1, 5))
    c = random_circuit(n_q, n, rng, depth=int(rng.integers(1, 3)))
    s = extract_spectrum(c)
    etas = rng.uniform(0, 1, size=(n_points, n))
    err = max(abs(s(eta) - evaluate(c, eta)) for eta in etas)
    return {'check': 'confinement', 'seed': seed, 'n_qubits': n_q, 'n': n, 'value': err,
            'passed': bool(err < CONFINEMENT_TOL)}


def shift_rule_trial(seed):
    """Shift-rule derivative of a random slot against a central difference with step 1e-5"""
    rng = np.random.default_rng(seed)
    n_q = int(rng.integers(1, 5))
    n = int(rng.integers(1, 5))
    m = int(rng.integers(0, 3))
    c = random_circuit(n_q, n, rng, depth=1, n_training=m)
    eta = rng.uniform(0, 1, n)
    theta = rng.uniform(0, 1, m)
    kind = 'training' if m > 0 and rng.uniform() < 0.5 else 'input'
    j = int(rng.integers(1, (m if kind == 'training' else n) + 1))
    plus, minus = (eta.copy(), eta.copy()) if kind == 'input' else (theta.copy(), theta.copy())
    plus[j - 1] += FD_STEP
    minus[j - 1] -= FD_STEP
    if kind == 'input':
        fd = (evaluate(c, plus, theta) - evaluate(c, minus, theta)) / (2 * FD_STEP)
    else:
        fd = (evaluate(c, eta, plus) - evaluate(c, eta, minus)) / (2 * FD_STEP)
    err = abs(shift_gradient(c, eta, theta, kind, j) - fd)
    return {'check': 'shift_rule', 'seed': seed, 'n_qubits': n_q, 'n': n, 'value': err,
            'passed': bool(err < SHIFT_RULE_TOL)}


def theorem_trial(seed, N=24, eps=0.5):
    """
    Random circuit and encoding with spread(a) <= 11: real-valued a for n <= 2, small integer a for n = 3. The
    Hankel rank estimate (floor of half the numerical rank) must not exceed spread(a).
    """
    rng = np.random.default_rng(seed)
    n_q = int(rng.integers(1, 4))
    n = int(rng.integers(1, 4))
    if n < 3:
        a = rng.uniform(-2, 2, n)
    else:
        a = rng.integers(-2, 3, n)
    b = rng.uniform(0, 1, n)
    c = random_circuit(n_q, n, rng, depth=1)
    e = Encoding('identity', a, b)
    x0 = float(rng.uniform(-1, 1))
    report = fourier_rank(lambda x: evaluate_encoded(c, e, None, x), x0, eps, N)
    sp = spread([int(v) for v in a] if n == 3 else a)
    return {'check': 'theorem', 'seed': seed, 'n_qubits': n_q, 'n': n, 'value': report.rank_estimate,
            'spread': sp, 'exceeded': report.exceeded, 'passed': bool(report.rank_estimate <= sp)}


def soundness_trial(seed, N=24, eps=0.5):
    """
    Exponential sum with r <= 5 positive frequencies at least one cycle per unit apart. Passes when the rank is
    recovered and the identified sum reproduces the samples within SOUNDNESS_RESIDUAL_TOL.
    """
    rng = np.random.default_rng(seed)
    r = int(rng.integers(1, 6))
    ks = 0.5 + np.cumsum(rng.uniform(1, 2, r))
    amps = rng.uniform(0.5, 1, r) * np.exp(2j * np.pi * rng.uniform(0, 1, r))
    alpha0 = float(rng.uniform(-1, 1))

    def h(x):
        return alpha0 + 2 * float(np.real(np.sum(amps * np.exp(2j * np.pi * ks * x))))

    report = fourier_rank(h, float(rng.uniform(-1, 1)), eps, N)
    fitted = not report.exceeded and report.residual < SOUNDNESS_RESIDUAL_TOL
    return {'check': 'soundness', 'seed': seed, 'n_qubits': 0, 'n': r, 'value': report.fourier_rank,
            'exceeded': report.exceeded, 'residual': report.residual,
            'passed': bool(report.fourier_rank == r and fitted)}


TRIALS = {'confinement': confinement_trial,
          'shift_rule': shift_rule_trial,
          'theorem': theorem_trial,
          'soundness': soundness_trial}


def run_trials(check, seeds):
    """Runs one check for each seed"""
    if check not in TRIALS:
        raise InvalidInputException('Unknown check {!r}; expected one of {}.'.format(check, ', '.join(TRIALS)))
    return [TRIALS[check](int(seed)) for seed in seeds]


def verification(args, toil_options):
    """
    Entry point to this program.
    :param args: namespace with checks, trials, seed and chunk_size
    :param toil_options: toil options namespace
    :return: DataFrame with one row per trial
    """
    with Toil(toil_options) as t:
        if not t.options.restart:
            rows = t.start(Job.wrapJobFn(setup, args))
        else:
            rows = t.restart()
    return pd.DataFrame(rows)


def setup(job, args):
    """
    Splits the trials of every check into chunks of seeds.
    :param args: argument namespace
    :return: merged list of result rows
    """
    chunk_rvs = []
    for check in args.checks:
        seeds = range(args.seed, args.seed + args.trials)
        for chunk in tools.dataOps.grouper(seeds, args.chunk_size):
            j = job.addChildJobFn(run_chunk, check, list(chunk))
            chunk_rvs.append(j.rv())
    return job.addFollowOnJobFn(merge, chunk_rvs).rv()


def run_chunk(job, check, seeds):
    """
    Runs one chunk of trials.
    :param check: check name
    :param seeds: list of seeds
    :return: list of row dicts
    """
    job.fileStore.logToMaster('Running {} trials for seeds {}-{}'.format(check, seeds[0], seeds[-1]),
                              level=logging.INFO)
    return run_trials(check, seeds)


def merge(job, chunks):
    """
    Merges and orders the rows of all chunks.
    :param chunks: list of lists of row dicts
    :return: list of row dicts
    """
    rows = tools.dataOps.flatten_list_of_lists(chunks)
    failed = [r for r in rows if not r['passed']]
    job.fileStore.logToMaster('Merged {} trials, {} failed'.format(len(rows), len(failed)), level=logging.INFO)
    return sorted(rows, key=lambda r: (r['check'], r['seed']))
