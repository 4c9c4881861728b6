"""
Reads and writes circuits in the JSON circuit format:

{
  "qubits": 2,
  "ops": [
    {"fixed": {"gate": "H", "qubits": [0]}},
    {"fixed": {"matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]], "qubits": [1]}},
    {"input": {"slot": 1, "pauli": "ZY"}},
    {"training": {"slot": 1, "matrix": [...], "qubits": [0]}}
  ],
  "observable": {"pauli": "ZI"},
  "initial": [[1, 0], [0, 0], [0, 0], [0, 0]]
}

Complex numbers are [re, im] pairs or plain reals. Pauli rotations use H = P/2; matrix rotations use the matrix as
given. Schema errors name the path of the offending field, JSON syntax errors the line and column.
"""
import os
import json

import numpy as np

from .exceptions import InvalidInputException, MissingFileException, UserException
from .pqc_core import Circuit, FixedGate, InputRotation, TrainingRotation, Hamiltonian, NAMED_GATES


class CircuitSchemaException(InvalidInputException):
    """exception to use when a circuit file does not follow the circuit schema"""
    def __init__(self, path, msg):
        super(CircuitSchemaException, self).__init__('{}: {}'.format(path, msg))
        self.path = path


def load_circuit(path):
    """
    Loads a circuit from a JSON file.
    :param path: file path
    :return: Circuit
    """
    if not os.path.exists(path):
        raise MissingFileException('Circuit file {} not found.'.format(path))
    with open(path) as inf:
        text = inf.read()
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInputException('{}: line {} column {}: {}'.format(path, e.lineno, e.colno, e.msg))
    return circuit_from_dict(d, source=path)


def _require(d, key, path, kind=None):
    if not isinstance(d, dict):
        raise CircuitSchemaException(path, 'expected an object')
    if key not in d:
        raise CircuitSchemaException('{}.{}'.format(path, key) if path else key, 'missing required field')
    val = d[key]
    if kind is not None and (not isinstance(val, kind) or isinstance(val, bool)):
        names = {int: 'integer', str: 'string', list: 'list', dict: 'object'}
        raise CircuitSchemaException('{}.{}'.format(path, key) if path else key,
                                     'expected {}'.format(names.get(kind, str(kind))))
    return val


def _complex(v, path):
    if isinstance(v, bool):
        raise CircuitSchemaException(path, 'expected a number or [re, im] pair')
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool)
                                                   for x in v):
        return complex(v[0], v[1])
    raise CircuitSchemaException(path, 'expected a number or [re, im] pair')


def parse_matrix(rows, path):
    """Parses a square complex matrix given as a list of rows of [re, im] pairs"""
    if not isinstance(rows, list) or len(rows) == 0:
        raise CircuitSchemaException(path, 'expected a non-empty list of rows')
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != len(rows):
            raise CircuitSchemaException('{}[{}]'.format(path, i), 'expected a row of length {}'.format(len(rows)))
        out.append([_complex(v, '{}[{}][{}]'.format(path, i, j)) for j, v in enumerate(row)])
    return np.array(out, dtype=complex)


def parse_vector(vals, path):
    if not isinstance(vals, list) or len(vals) == 0:
        raise CircuitSchemaException(path, 'expected a non-empty list')
    return np.array([_complex(v, '{}[{}]'.format(path, i)) for i, v in enumerate(vals)], dtype=complex)


def _qubits(d, path, default=None):
    if 'qubits' not in d:
        if default is None:
            raise CircuitSchemaException(path + '.qubits', 'missing required field')
        return default
    qubits = d['qubits']
    if not isinstance(qubits, list) or not all(isinstance(q, int) and not isinstance(q, bool) for q in qubits):
        raise CircuitSchemaException(path + '.qubits', 'expected a list of integers')
    return qubits


def _rotation(cls, d, path, n_q):
    slot = _require(d, 'slot', path, int)
    if 'pauli' in d:
        label = _require(d, 'pauli', path, str)
        qubits = _qubits(d, path, default=list(range(len(label))))
        if 'qubits' not in d and len(label) != n_q:
            raise CircuitSchemaException(path + '.pauli', 'Pauli string {} does not span {} qubits'.format(
                label, n_q))
        return cls(slot, Hamiltonian.from_pauli(label), qubits)
    if 'matrix' in d:
        h = Hamiltonian.from_matrix(parse_matrix(d['matrix'], path + '.matrix'))
        return cls(slot, h, _qubits(d, path, default=list(range(h.n_q))))
    raise CircuitSchemaException(path, 'expected a pauli or matrix field')


def _op(d, path, n_q):
    if not isinstance(d, dict) or len(d) != 1:
        raise CircuitSchemaException(path, 'expected an object with exactly one of fixed, input, training')
    kind, body = next(iter(d.items()))
    sub = '{}.{}'.format(path, kind)
    if not isinstance(body, dict):
        raise CircuitSchemaException(sub, 'expected an object')
    if kind == 'fixed':
        if 'gate' in body:
            return FixedGate.named(_require(body, 'gate', sub, str), _qubits(body, sub))
        if 'matrix' in body:
            return FixedGate(parse_matrix(body['matrix'], sub + '.matrix'), _qubits(body, sub))
        raise CircuitSchemaException(sub, 'expected a gate or matrix field')
    elif kind == 'input':
        return _rotation(InputRotation, body, sub, n_q)
    elif kind == 'training':
        return _rotation(TrainingRotation, body, sub, n_q)
    raise CircuitSchemaException(path, 'unknown operation {!r}'.format(kind))


def circuit_from_dict(d, source='circuit'):
    """
    Builds a Circuit from a parsed JSON document. Any error raised while building a field is reported with the
    path of that field.
    """
    if not isinstance(d, dict):
        raise CircuitSchemaException(source, 'top level must be an object')
    n_q = _require(d, 'qubits', '', int)
    ops_in = _require(d, 'ops', '', list)
    ops = []
    for i, op in enumerate(ops_in):
        path = 'ops[{}]'.format(i)
        try:
            ops.append(_op(op, path, n_q))
        except CircuitSchemaException:
            raise
        except UserException as e:
            raise CircuitSchemaException(path, str(e))
    obs = _require(d, 'observable', '', dict)
    if 'pauli' in obs:
        observable = _require(obs, 'pauli', 'observable', str)
    elif 'matrix' in obs:
        observable = parse_matrix(obs['matrix'], 'observable.matrix')
    else:
        raise CircuitSchemaException('observable', 'expected a pauli or matrix field')
    initial = parse_vector(d['initial'], 'initial') if d.get('initial') is not None else None
    try:
        return Circuit(n_q, ops, observable, initial)
    except UserException as e:
        raise InvalidInputException('{}: {}'.format(source, e))


def _matrix_to_list(m):
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def circuit_to_dict(c):
    """Inverse of circuit_from_dict"""
    ops = []
    for op in c.ops:
        if isinstance(op, FixedGate):
            if op.name in NAMED_GATES:
                body = {'gate': op.name, 'qubits': list(op.qubits)}
            else:
                body = {'matrix': _matrix_to_list(op.unitary), 'qubits': list(op.qubits)}
        else:
            h = op.hamiltonian
            if h.is_pauli:
                body = {'slot': op.slot, 'pauli': h.pauli_string, 'qubits': list(op.qubits)}
            else:
                body = {'slot': op.slot, 'matrix': _matrix_to_list(h.matrix), 'qubits': list(op.qubits)}
        ops.append({op.kind: body})
    if c.observable_pauli is not None:
        observable = {'pauli': c.observable_pauli}
    else:
        observable = {'matrix': _matrix_to_list(c.observable)}
    return {'qubits': c.n_q, 'ops': ops, 'observable': observable,
            'initial': [[float(v.real), float(v.imag)] for v in c.initial_state]}
