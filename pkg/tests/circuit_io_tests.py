import os
import json
import shutil
import tempfile
import unittest

import numpy as np

from qred.exceptions import InvalidInputException, MissingFileException
from qred.circuit_io import load_circuit, circuit_from_dict, circuit_to_dict, CircuitSchemaException
from qred.pqc_core import evaluate


COSINE = {'qubits': 1,
          'ops': [{'input': {'slot': 1, 'pauli': 'X'}}],
          'observable': {'pauli': 'Z'}}

TWO_QUBIT = {'qubits': 2,
             'ops': [{'fixed': {'gate': 'H', 'qubits': [0]}},
                     {'input': {'slot': 1, 'pauli': 'ZY'}},
                     {'fixed': {'matrix': [[[0, 0], [1, 0]], [[1, 0], [0, 0]]], 'qubits': [1]}},
                     {'training': {'slot': 1, 'matrix': [[0.5, 0], [0, -0.5]], 'qubits': [0]}},
                     {'input': {'slot': 2, 'pauli': 'X', 'qubits': [1]}}],
             'observable': {'pauli': 'ZX'},
             'initial': [[1, 0], 0, 0, 0]}


class CircuitFileTests(unittest.TestCase):

    def setUp(self):
        self.tmp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp_dir)

    def write(self, text, name='circuit.json'):
        path = os.path.join(self.tmp_dir, name)
        with open(path, 'w') as outf:
            outf.write(text)
        return path

    def test_load_cosine(self):
        c = load_circuit(self.write(json.dumps(COSINE)))
        self.assertEqual((c.n_q, c.n, c.m), (1, 1, 0))
        self.assertAlmostEqual(evaluate(c, [0.125]), np.cos(np.pi / 4), places=12)

    def test_missing_file(self):
        with self.assertRaises(MissingFileException):
            load_circuit(os.path.join(self.tmp_dir, 'nope.json'))

    def test_syntax_error(self):
        """
        JSON syntax errors report the line and column
        """
        path = self.write('{"qubits": 1,\n "ops": [}\n')
        with self.assertRaises(InvalidInputException) as cm:
            load_circuit(path)
        self.assertIn('line 2', str(cm.exception))


class CircuitSchemaTests(unittest.TestCase):

    def test_two_qubit_circuit(self):
        c = circuit_from_dict(TWO_QUBIT)
        self.assertEqual((c.n_q, c.n, c.m), (2, 2, 1))
        val = evaluate(c, [0.1, 0.2], [0.3])
        self.assertLessEqual(abs(val), 1.0)

    def test_to_dict(self):
        """
        Writing a circuit and reading it back gives the same expectation values
        """
        c = circuit_from_dict(TWO_QUBIT)
        d = circuit_to_dict(c)
        json.dumps(d)
        again = circuit_from_dict(d)
        for eta, theta in [([0.1, 0.2], [0.3]), ([0.7, 0.05], [0.9])]:
            self.assertAlmostEqual(evaluate(c, eta, theta), evaluate(again, eta, theta), places=12)

    def test_missing_observable(self):
        d = dict(COSINE)
        del d['observable']
        with self.assertRaises(CircuitSchemaException) as cm:
            circuit_from_dict(d)
        self.assertEqual(cm.exception.path, 'observable')

    def test_wrong_type(self):
        d = dict(COSINE, qubits='one')
        with self.assertRaises(CircuitSchemaException) as cm:
            circuit_from_dict(d)
        self.assertEqual(cm.exception.path, 'qubits')

    def test_bad_op_path(self):
        """
        Errors inside an operation are reported with the path of that operation
        """
        d = dict(COSINE, ops=[{'input': {'slot': 1, 'pauli': 'X'}}, {'fixed': {'gate': 'FOO', 'qubits': [0]}}])
        with self.assertRaises(CircuitSchemaException) as cm:
            circuit_from_dict(d)
        self.assertEqual(cm.exception.path, 'ops[1]')
        d = dict(COSINE, ops=[{'input': {'slot': 1, 'pauli': 'XX'}}])
        with self.assertRaises(CircuitSchemaException) as cm:
            circuit_from_dict(d)
        self.assertEqual(cm.exception.path, 'ops[0].input.pauli')
        d = dict(COSINE, ops=[{'rotate': {'slot': 1}}])
        with self.assertRaises(CircuitSchemaException):
            circuit_from_dict(d)

    def test_bad_matrix_entry(self):
        d = dict(COSINE, ops=[{'fixed': {'matrix': [[1, 0], [0, 'x']], 'qubits': [0]}}])
        with self.assertRaises(CircuitSchemaException) as cm:
            circuit_from_dict(d)
        self.assertEqual(cm.exception.path, 'ops[0].fixed.matrix[1][1]')

    def test_slot_gap(self):
        d = dict(COSINE, ops=[{'input': {'slot': 2, 'pauli': 'X'}}])
        with self.assertRaises(InvalidInputException):
            circuit_from_dict(d)


if __name__ == '__main__':
    unittest.main()
