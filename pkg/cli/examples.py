"""
Example Generators
Canonical input documents for the built-in examples.

- paper-discrete: φ(n) = ⌈n/2⌉, m ≡ 1, u_n = √(2 − 1/n) on a 200-point
  window; the first 100 points carry exact values of the infinite system
- cycle-demo: the 3-cycle 1 → 2 → 3 → 1 with u = (1, 2, 4)
- paper-continuous: no document; runs the quadrature validator
"""

import math

from utils.errors import InputError

EXAMPLE_NAMES = ("paper-continuous", "paper-discrete", "cycle-demo")

DISCRETE_WINDOW = 200


def halving_window_document(n_points=DISCRETE_WINDOW, tail_bound_asserted=False):
    """
    Window of φ(n) = ⌈n/2⌉ with u_n = √(2 − 1/n)

    The fiber of j is {2j − 1, 2j}, so J is exact for j ≤ n_points/2 and the
    criterion is exact on the first n_points/2 points.
    """
    indices = range(1, n_points + 1)
    return {
        "masses": [1.0] * n_points,
        "phi": [math.ceil(n / 2) for n in indices],
        "u": [math.sqrt(2.0 - 1.0 / n) for n in indices],
        "options": {
            "window": "prefix",
            "exact_prefix": n_points // 2,
            "tail_bound_asserted": tail_bound_asserted,
        },
    }


def cycle_demo_document():
    return {
        "masses": [1.0, 1.0, 1.0],
        "phi": [2, 3, 1],
        "u": [1.0, 2.0, 4.0],
        "options": {"window": "exact"},
    }


def example_document(name, tail_bound_asserted=False):
    """Document for a named example, or None for paper-continuous"""
    if name not in EXAMPLE_NAMES:
        raise InputError(f"unknown example {name!r}; choose from {', '.join(EXAMPLE_NAMES)}",
                         location="example")
    if name == "paper-discrete":
        return halving_window_document(tail_bound_asserted=tail_bound_asserted)
    if name == "cycle-demo":
        return cycle_demo_document()
    return None
