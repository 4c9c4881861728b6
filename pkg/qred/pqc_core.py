"""
Dense statevector simulation of MiNKiF circuits.

A circuit is an ordered list of operations on an n_q qubit register:

1. FixedGate: a unitary on a list of qubits, given as a matrix or as a named gate.
2. InputRotation: e^{-2 pi i eta_j H_j} for input slot j. Slots enumerate the redundant copies of the input.
3. TrainingRotation: e^{-2 pi i theta_j H_j} for training slot j.

The expectation value function is f(eta, theta) = <psi_final| M |psi_final>. Qubit 0 is the leftmost factor of every
Kronecker product, so the Pauli string 'ZI' acts with Z on qubit 0.

All objects are immutable after construction and may be shared between workers.
"""
import itertools
import functools

import numpy as np
import scipy.linalg
from scipy.stats import unitary_group

from .exceptions import DimensionMismatchException, NonHermitianException, SlotException, \
    CapacityExceededException, DomainViolationException, InvalidInputException, SpectrumException

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-12
NORM_TOL = 1e-12
IMAG_TOL = 1e-10
DIFF_TOL = 1e-9
MAX_QUBITS = 10
MAX_INPUTS = 8

PAULI = {
    'I': np.eye(2, dtype=complex),
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'Z': np.array([[1, 0], [0, -1]], dtype=complex),
}

_SQ2 = 1 / np.sqrt(2)
NAMED_GATES = {
    'I': PAULI['I'],
    'X': PAULI['X'],
    'Y': PAULI['Y'],
    'Z': PAULI['Z'],
    'H': np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    'S': np.array([[1, 0], [0, 1j]], dtype=complex),
    'T': np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
    'CNOT': np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    'CZ': np.diag([1, 1, 1, -1]).astype(complex),
    'SWAP': np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}
NAMED_GATES['CX'] = NAMED_GATES['CNOT']


def pauli_matrix(label):
    """
    Dense matrix of a Pauli string such as 'XZI'. The first character acts on qubit 0.
    :param label: string over IXYZ
    :return: complex ndarray of shape (2^len, 2^len)
    """
    label = label.upper()
    if len(label) == 0 or any(c not in PAULI for c in label):
        raise InvalidInputException('Invalid Pauli string {!r}; expected letters from IXYZ.'.format(label))
    return functools.reduce(np.kron, (PAULI[c] for c in label))


def num_qubits(dim):
    """Number of qubits for a Hilbert space of dimension dim, raising if dim is not a power of two."""
    n_q = int(round(np.log2(dim))) if dim > 0 else -1
    if n_q < 0 or 2 ** n_q != dim:
        raise DimensionMismatchException('Dimension {} is not a power of two.'.format(dim))
    return n_q


def check_hermitian(matrix, what='matrix'):
    """Raises NonHermitianException unless matrix equals its conjugate transpose within HERMITIAN_TOL"""
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatchException('{} must be square, got shape {}.'.format(what, matrix.shape))
    err = np.max(np.abs(matrix - matrix.conj().T))
    if err > HERMITIAN_TOL:
        raise NonHermitianException('{} is not Hermitian (max deviation {:.3e}).'.format(what, err))
    return matrix


def check_unitary(matrix, what='gate'):
    """Raises InvalidInputException unless U^dagger U = I within UNITARY_TOL"""
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatchException('{} must be square, got shape {}.'.format(what, matrix.shape))
    err = np.max(np.abs(matrix.conj().T @ matrix - np.eye(matrix.shape[0])))
    if err > UNITARY_TOL:
        raise InvalidInputException('{} is not unitary (max deviation {:.3e}).'.format(what, err))
    return matrix


def apply_operator(state, op, qubits, n_q):
    """
    Applies a k-qubit operator to the listed qubits of an n_q qubit statevector.
    :param state: complex vector of length 2^n_q
    :param op: complex matrix of shape (2^k, 2^k)
    :param qubits: list of k distinct qubit indices
    :return: new statevector
    """
    k = len(qubits)
    psi = state.reshape([2] * n_q)
    op = op.reshape([2] * (2 * k))
    psi = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), list(qubits)))
    psi = np.moveaxis(psi, list(range(k)), list(qubits))
    return psi.reshape(2 ** n_q)


def apply_pauli(state, label, qubits, n_q):
    """Applies a Pauli string one non-identity factor at a time"""
    for c, q in zip(label, qubits):
        if c != 'I':
            state = apply_operator(state, PAULI[c], [q], n_q)
    return state


class Hamiltonian(object):
    """
    A Hermitian generator for e^{-2 pi i alpha H}. Either a dense matrix, or a Pauli string scaled by 1/2 in which
    case the eigenvalues are exactly +-1/2 and evolution uses the closed form cos(pi alpha) I - 2i sin(pi alpha) H.
    """
    __slots__ = ('n_q', 'matrix', 'pauli_string', '_eigenvalues', '_eigenvectors', '_eigen_diffs')

    def __init__(self, matrix, pauli_string=None):
        self.matrix = check_hermitian(matrix, 'Hamiltonian')
        self.n_q = num_qubits(self.matrix.shape[0])
        self.pauli_string = pauli_string
        self._eigenvalues = None
        self._eigenvectors = None
        self._eigen_diffs = None

    @classmethod
    def from_pauli(cls, label):
        label = label.upper()
        return cls(0.5 * pauli_matrix(label), pauli_string=label)

    @classmethod
    def from_matrix(cls, matrix):
        return cls(np.asarray(matrix, dtype=complex))

    def __repr__(self):
        if self.pauli_string is not None:
            return 'Hamiltonian({}/2)'.format(self.pauli_string)
        return 'Hamiltonian(n_q={})'.format(self.n_q)

    @property
    def is_pauli(self):
        return self.pauli_string is not None

    def _diagonalize(self):
        if self._eigenvalues is None:
            self._eigenvalues, self._eigenvectors = scipy.linalg.eigh(self.matrix)

    @property
    def eigenvalues(self):
        self._diagonalize()
        return self._eigenvalues

    @property
    def eigen_diffs(self):
        """sorted tuple of distinct eigenvalue differences lambda_i - lambda_j"""
        if self._eigen_diffs is None:
            if self.is_pauli:
                if set(self.pauli_string) == {'I'}:
                    self._eigen_diffs = (0.0,)
                else:
                    self._eigen_diffs = (-1.0, 0.0, 1.0)
            else:
                ev = self.eigenvalues
                diffs = sorted(float(x - y) for x, y in itertools.product(ev, ev))
                distinct = [diffs[0]]
                for d in diffs[1:]:
                    if d - distinct[-1] > DIFF_TOL:
                        distinct.append(d)
                self._eigen_diffs = tuple(distinct)
        return self._eigen_diffs

    def integer_diffs(self):
        """
        The eigenvalue differences as integers. Raises SpectrumException if any difference is not an integer, since
        the expectation value is then not 1-periodic in this slot.
        :return: sorted tuple of ints
        """
        out = []
        for d in self.eigen_diffs:
            r = int(round(d))
            if abs(d - r) > DIFF_TOL:
                raise SpectrumException('{} has non-integer eigenvalue difference {:.6g}.'.format(self, d))
            out.append(r)
        return tuple(sorted(set(out)))

    def propagator(self, alpha):
        """Dense e^{-2 pi i alpha H}"""
        if self.is_pauli:
            return np.cos(np.pi * alpha) * np.eye(2 ** self.n_q) - 2j * np.sin(np.pi * alpha) * self.matrix
        self._diagonalize()
        phases = np.exp(-2j * np.pi * alpha * self._eigenvalues)
        return (self._eigenvectors * phases) @ self._eigenvectors.conj().T

    def apply(self, state, alpha, qubits, n_q):
        """Applies e^{-2 pi i alpha H} to the listed qubits of a register statevector"""
        if self.is_pauli:
            p_state = apply_pauli(state, self.pauli_string, qubits, n_q)
            return np.cos(np.pi * alpha) * state - 1j * np.sin(np.pi * alpha) * p_state
        return apply_operator(state, self.propagator(alpha), qubits, n_q)


class FixedGate(object):
    """A fixed unitary acting on a list of qubits"""
    __slots__ = ('unitary', 'qubits', 'name')
    kind = 'fixed'

    def __init__(self, unitary, qubits, name=None):
        self.unitary = check_unitary(unitary, 'Gate {}'.format(name) if name else 'Fixed gate')
        self.qubits = tuple(int(q) for q in qubits)
        self.name = name
        if 2 ** len(self.qubits) != self.unitary.shape[0]:
            raise DimensionMismatchException('Gate {} of dimension {} cannot act on qubits {}.'.format(
                name or 'matrix', self.unitary.shape[0], list(self.qubits)))

    @classmethod
    def named(cls, name, qubits):
        key = name.upper()
        if key not in NAMED_GATES:
            raise InvalidInputException('Unknown gate {!r}; known gates are {}.'.format(
                name, ', '.join(sorted(NAMED_GATES))))
        return cls(NAMED_GATES[key], qubits, name=key)

    def __repr__(self):
        return 'FixedGate({}, {})'.format(self.name or 'matrix', list(self.qubits))

    def apply(self, state, n_q):
        return apply_operator(state, self.unitary, self.qubits, n_q)


class _Rotation(object):
    __slots__ = ('slot', 'hamiltonian', 'qubits')
    kind = None

    def __init__(self, slot, hamiltonian, qubits=None):
        if int(slot) != slot or slot < 1:
            raise SlotException('{} slot must be a positive integer, got {!r}.'.format(self.kind, slot))
        self.slot = int(slot)
        self.hamiltonian = hamiltonian
        self.qubits = tuple(range(hamiltonian.n_q)) if qubits is None else tuple(int(q) for q in qubits)
        if len(self.qubits) != hamiltonian.n_q:
            raise DimensionMismatchException('{} slot {}: Hamiltonian on {} qubits listed with qubits {}.'.format(
                self.kind, slot, hamiltonian.n_q, list(self.qubits)))

    def __repr__(self):
        return '{}({}, {!r})'.format(self.__class__.__name__, self.slot, self.hamiltonian)

    def apply(self, state, alpha, n_q):
        return self.hamiltonian.apply(state, alpha, self.qubits, n_q)


class InputRotation(_Rotation):
    """e^{-2 pi i eta_j H} for input slot j"""
    __slots__ = ()
    kind = 'input'


class TrainingRotation(_Rotation):
    """e^{-2 pi i theta_j H} for training slot j"""
    __slots__ = ()
    kind = 'training'


class Circuit(object):
    """
    A MiNKiF circuit: operations, an observable M and a pure initial state (default |0...0>).
    n is the input redundancy (number of InputRotation ops) and m the number of TrainingRotation ops.
    """
    __slots__ = ('n_q', 'ops', 'observable', 'observable_pauli', 'initial_state', 'n', 'm')

    def __init__(self, n_q, ops, observable, initial_state=None):
        if n_q < 1 or n_q > MAX_QUBITS:
            raise CapacityExceededException('Circuits are limited to 1..{} qubits, got {}.'.format(MAX_QUBITS, n_q))
        self.n_q = int(n_q)
        self.ops = tuple(ops)
        for op in self.ops:
            if len(set(op.qubits)) != len(op.qubits) or any(q < 0 or q >= n_q for q in op.qubits):
                raise DimensionMismatchException('{!r} acts on invalid qubits for a {} qubit register.'.format(
                    op, n_q))
        if isinstance(observable, str):
            if len(observable) != n_q:
                raise DimensionMismatchException('Observable {} does not match {} qubits.'.format(observable, n_q))
            self.observable_pauli = observable.upper()
            self.observable = pauli_matrix(observable)
        else:
            self.observable_pauli = None
            self.observable = check_hermitian(observable, 'Observable')
            if self.observable.shape[0] != 2 ** n_q:
                raise DimensionMismatchException('Observable of dimension {} does not match {} qubits.'.format(
                    self.observable.shape[0], n_q))
        if initial_state is None:
            state = np.zeros(2 ** n_q, dtype=complex)
            state[0] = 1
        else:
            state = np.asarray(initial_state, dtype=complex).ravel()
            if state.shape[0] != 2 ** n_q:
                raise DimensionMismatchException('Initial state of dimension {} does not match {} qubits.'.format(
                    state.shape[0], n_q))
            norm = np.linalg.norm(state)
            if abs(norm - 1) > NORM_TOL:
                raise InvalidInputException('Initial state is not normalized (norm {:.15g}).'.format(norm))
        self.initial_state = state
        self.n = self._check_slots(InputRotation)
        self.m = self._check_slots(TrainingRotation)
        if self.n > MAX_INPUTS:
            raise CapacityExceededException('Circuits are limited to {} input slots, got {}.'.format(
                MAX_INPUTS, self.n))

    def _check_slots(self, cls):
        slots = [op.slot for op in self.ops if isinstance(op, cls)]
        if sorted(slots) != list(range(1, len(slots) + 1)):
            raise SlotException('{} slots must be exactly 1..{} with each used once, got {}.'.format(
                cls.kind.capitalize(), len(slots), sorted(slots)))
        return len(slots)

    def __repr__(self):
        return 'Circuit(n_q={}, n={}, m={}, ops={})'.format(self.n_q, self.n, self.m, len(self.ops))

    def input_rotations(self):
        """InputRotation ops ordered by slot"""
        return sorted((op for op in self.ops if isinstance(op, InputRotation)), key=lambda op: op.slot)


class Encoding(object):
    """
    Affine input encoding eta_j(x) = phi(a_j x + b_j) with phi the identity or arcsin(.)/(2 pi).
    """
    __slots__ = ('activation', 'a', 'b')
    IDENTITY = 'identity'
    ARCSINE = 'arcsine'

    def __init__(self, activation, a, b):
        if activation not in (self.IDENTITY, self.ARCSINE):
            raise InvalidInputException('Unknown activation {!r}.'.format(activation))
        self.activation = activation
        self.a = np.asarray(a, dtype=float).ravel()
        self.b = np.asarray(b, dtype=float).ravel()
        if self.a.shape != self.b.shape:
            raise DimensionMismatchException('Encoding vectors a and b differ in length ({} vs {}).'.format(
                len(self.a), len(self.b)))

    def __repr__(self):
        return 'Encoding({}, a={}, b={})'.format(self.activation, self.a.tolist(), self.b.tolist())

    @property
    def n(self):
        return len(self.a)

    def affine(self, x):
        return self.a * x + self.b

    def angles(self, x):
        """The encoded angle vector eta(x)"""
        s = self.affine(x)
        if self.activation == self.IDENTITY:
            return s
        for j, v in enumerate(s):
            if abs(v) > 1 + 1e-12:
                raise DomainViolationException(
                    'Arcsine encoding slot {}: a*x+b = {:.12g} lies outside [-1, 1] at x = {:.12g}.'.format(
                        j + 1, v, x), slot=j + 1)
        return np.arcsin(np.clip(s, -1, 1)) / (2 * np.pi)


def _check_params(c, eta, theta):
    eta = np.asarray(eta, dtype=float).ravel()
    theta = np.asarray(theta if theta is not None else [], dtype=float).ravel()
    if len(eta) != c.n:
        raise SlotException('Circuit has {} input slots but {} input angles were given.'.format(c.n, len(eta)))
    if len(theta) != c.m:
        raise SlotException('Circuit has {} training slots but {} training angles were given.'.format(
            c.m, len(theta)))
    return eta, theta


def evolve(state, H, alpha, qubits=None):
    """
    Applies e^{-2 pi i alpha H} to a statevector.
    :param state: complex vector of length 2^n_q
    :param H: Hamiltonian
    :param alpha: real
    :param qubits: qubits H acts on. Defaults to the whole register, in which case H must match the state.
    :return: new statevector with the same norm
    """
    state = np.asarray(state, dtype=complex).ravel()
    n_q = num_qubits(state.shape[0])
    if qubits is None:
        if H.n_q != n_q:
            raise DimensionMismatchException('Hamiltonian on {} qubits cannot act on a {} qubit state.'.format(
                H.n_q, n_q))
        qubits = range(n_q)
    return H.apply(state, alpha, list(qubits), n_q)


def final_state(c, eta, theta=None):
    """The statevector after every op of the circuit has been applied"""
    eta, theta = _check_params(c, eta, theta)
    psi = c.initial_state
    for op in c.ops:
        if isinstance(op, FixedGate):
            psi = op.apply(psi, c.n_q)
        elif isinstance(op, InputRotation):
            psi = op.apply(psi, eta[op.slot - 1], c.n_q)
        else:
            psi = op.apply(psi, theta[op.slot - 1], c.n_q)
    return psi


def evaluate(c, eta, theta=None):
    """
    The expectation value tr(M |psi><psi|) at input angles eta and training angles theta.
    :return: float
    """
    psi = final_state(c, eta, theta)
    if c.observable_pauli is not None:
        val = np.vdot(psi, apply_pauli(psi, c.observable_pauli, range(c.n_q), c.n_q))
    else:
        val = np.vdot(psi, c.observable @ psi)
    if abs(val.imag) >= IMAG_TOL:
        raise NonHermitianException('Expectation value has imaginary part {:.3e}.'.format(val.imag))
    return float(val.real)


def evaluate_encoded(c, e, theta, x):
    """f(eta(x), theta) for the encoding e"""
    if e.n != c.n:
        raise DimensionMismatchException('Encoding has {} slots but circuit has {} input slots.'.format(e.n, c.n))
    return evaluate(c, e.angles(x), theta)


def shift_gradient(c, eta, theta, kind, j):
    """
    Partial derivative of f by the parameter-shift identity pi * (f(+1/4 e_j) - f(-1/4 e_j)). Exact for Pauli/2
    Hamiltonians.
    :param kind: 'input' or 'training'
    :param j: 1-based slot index
    """
    eta, theta = _check_params(c, eta, theta)
    if kind not in ('input', 'training'):
        raise SlotException('Slot kind must be input or training, got {!r}.'.format(kind))
    vec = eta if kind == 'input' else theta
    if int(j) != j or j < 1 or j > len(vec):
        raise SlotException('Invalid {} slot {}; circuit has {}.'.format(kind, j, len(vec)))
    plus, minus = vec.copy(), vec.copy()
    plus[j - 1] += 0.25
    minus[j - 1] -= 0.25
    if kind == 'input':
        return np.pi * (evaluate(c, plus, theta) - evaluate(c, minus, theta))
    return np.pi * (evaluate(c, eta, plus) - evaluate(c, eta, minus))


def random_pauli_string(n_q, rng):
    """A uniformly random non-identity Pauli string"""
    while True:
        label = ''.join(rng.choice(list('IXYZ'), size=n_q))
        if set(label) != {'I'}:
            return label


def random_fixed_gate(n_q, rng):
    """A Haar-random unitary on a random pair of qubits (or the single qubit)"""
    k = min(2, n_q)
    qubits = rng.choice(n_q, size=k, replace=False).tolist()
    return FixedGate(unitary_group.rvs(2 ** k, random_state=rng), qubits, name='haar')


def random_circuit(n_q, n_inputs, rng, depth=1, n_training=0):
    """
    A random MiNKiF circuit: Haar-random fixed gates on random pairs interleaved with Pauli/2 input rotations,
    and optional training rotations, measured in a random Pauli observable.
    :param n_q: qubits
    :param n_inputs: input redundancy n
    :param rng: numpy Generator
    :param depth: fixed gates placed before the first and after every rotation
    :param n_training: training slots m
    """
    rotations = [InputRotation(j, Hamiltonian.from_pauli(random_pauli_string(n_q, rng)))
                 for j in range(1, n_inputs + 1)]
    rotations += [TrainingRotation(j, Hamiltonian.from_pauli(random_pauli_string(n_q, rng)))
                  for j in range(1, n_training + 1)]
    order = rng.permutation(len(rotations))
    ops = [random_fixed_gate(n_q, rng) for _ in range(depth)]
    for i in order:
        ops.append(rotations[i])
        ops.extend(random_fixed_gate(n_q, rng) for _ in range(depth))
    return Circuit(n_q, ops, random_pauli_string(n_q, rng))
