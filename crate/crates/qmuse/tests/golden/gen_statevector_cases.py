#!/usr/bin/env python3
"""Regenerate statevector_cases.json.

Independent oracle for the simulator: final amplitudes are computed here by
building each gate as a dense 2^n x 2^n operator with Kronecker products and
multiplying it into the state, instead of the in-place bit-pair updates the
library uses. Conventions match the wire format: qubit i carries bit weight
2^i, basis codes are written most-significant qubit first, gates are
{kind, theta?, target, controls[]}.

Run from this directory: python3 gen_statevector_cases.py
"""

import json
import math
import random

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def rx(theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry(theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(theta):
    return np.array(
        [[np.exp(-1j * theta / 2), 0], [0, np.exp(1j * theta / 2)]], dtype=complex
    )


def single_qubit_op(num_qubits, target, u):
    op = np.array([[1]], dtype=complex)
    # kron chains put the last factor on the least significant bits, so walk
    # from the highest qubit down.
    for q in reversed(range(num_qubits)):
        op = np.kron(op, u if q == target else I2)
    return op


def controlled_x_op(num_qubits, controls, target):
    dim = 1 << num_qubits
    op = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        j = i ^ (1 << target) if all(i >> c & 1 for c in controls) else i
        op[j, i] = 1
    return op


def gate_op(num_qubits, gate):
    kind = gate["kind"]
    if kind in ("CX", "CCX"):
        return controlled_x_op(num_qubits, gate["controls"], gate["target"])
    u = {
        "X": lambda: X,
        "H": lambda: H,
        "RX": lambda: rx(gate["theta"]),
        "RY": lambda: ry(gate["theta"]),
        "RZ": lambda: rz(gate["theta"]),
    }[kind]()
    return single_qubit_op(num_qubits, gate["target"], u)


def simulate(case):
    num_qubits = case["num_qubits"]
    state = np.zeros(1 << num_qubits, dtype=complex)
    state[int(case["initial_code"], 2)] = 1
    for gate in case["gates"]:
        state = gate_op(num_qubits, gate) @ state
    return state


def random_case(rng, num_qubits, num_gates):
    kinds = ["X", "H", "RX", "RY", "RZ"]
    if num_qubits >= 2:
        kinds.append("CX")
    if num_qubits >= 3:
        kinds.append("CCX")
    gates = []
    for _ in range(num_gates):
        kind = rng.choice(kinds)
        gate = {"kind": kind, "target": rng.randrange(num_qubits)}
        if kind in ("RX", "RY", "RZ"):
            gate["theta"] = round(rng.uniform(-2 * math.pi, 2 * math.pi), 12)
        elif kind == "CX":
            others = [q for q in range(num_qubits) if q != gate["target"]]
            gate["controls"] = [rng.choice(others)]
        elif kind == "CCX":
            others = [q for q in range(num_qubits) if q != gate["target"]]
            gate["controls"] = rng.sample(others, 2)
        gates.append(gate)
    code = "".join(rng.choice("01") for _ in range(num_qubits))
    return {"num_qubits": num_qubits, "initial_code": code, "gates": gates}


def walk_case(code_q0q1q2):
    bits = [int(b) for b in code_q0q1q2]
    initial = "00" + "".join(str(b) for b in reversed(bits))
    gates = [
        {"kind": "H", "target": 3},
        {"kind": "H", "target": 4},
        {"kind": "X", "target": 3},
        {"kind": "CCX", "target": 0, "controls": [3, 4]},
        {"kind": "X", "target": 3},
        {"kind": "X", "target": 3},
        {"kind": "X", "target": 4},
        {"kind": "CCX", "target": 1, "controls": [3, 4]},
        {"kind": "X", "target": 4},
        {"kind": "X", "target": 3},
        {"kind": "CCX", "target": 2, "controls": [3, 4]},
    ]
    return {"num_qubits": 5, "initial_code": initial, "gates": gates}


def main():
    rng = random.Random(20260809)
    cases = []
    for num_qubits, num_gates in [
        (1, 1),
        (1, 6),
        (2, 4),
        (2, 10),
        (3, 8),
        (3, 16),
        (4, 12),
        (4, 25),
    ]:
        cases.append(random_case(rng, num_qubits, num_gates))
    cases.append(walk_case("001"))
    cases.append(walk_case("110"))
    # Nine Hadamards: the hyper-die state.
    cases.append(
        {
            "num_qubits": 9,
            "initial_code": "0" * 9,
            "gates": [{"kind": "H", "target": q} for q in range(9)],
        }
    )

    for case in cases:
        state = simulate(case)
        case["amplitudes"] = [[z.real, z.imag] for z in state]

    with open("statevector_cases.json", "w") as f:
        json.dump(cases, f, indent=1)
        f.write("\n")
    print(f"wrote {len(cases)} cases")


if __name__ == "__main__":
    main()
