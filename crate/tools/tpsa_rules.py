"""Polar surface area contributions for N and O, as first-match rules.

Each rule: (element, charge, heavy_degree, h, single, double, triple, aromatic, in_3ring, value).
None means "any". Atoms matching no rule use the fallback base - per_neighbor*deg + per_h*h (floored at 0).
"""

N_RULES = [
    # degree 1
    (0, 1, 0, 0, 0, 1, 0, None, 23.79),
    (0, 1, 1, 0, 1, 0, 0, None, 23.85),
    (0, 1, 2, 1, 0, 0, 0, None, 26.02),
    (1, 1, 2, 0, 1, 0, 0, None, 25.59),
    (1, 1, 3, 1, 0, 0, 0, None, 27.64),
    # degree 2
    (0, 2, 0, 1, 1, 0, 0, None, 12.36),
    (0, 2, 0, 0, 1, 1, 0, None, 13.60),
    (0, 2, 1, 2, 0, 0, 0, True, 21.94),
    (0, 2, 1, 2, 0, 0, 0, False, 12.03),
    (1, 2, 0, 1, 0, 1, 0, None, 4.36),
    (1, 2, 1, 1, 1, 0, 0, None, 13.97),
    (1, 2, 2, 2, 0, 0, 0, None, 16.61),
    (0, 2, 0, 0, 0, 0, 2, None, 12.89),
    (0, 2, 1, 0, 0, 0, 2, None, 15.79),
    (1, 2, 1, 0, 0, 0, 2, None, 14.14),
    # degree 3
    (0, 3, 0, 3, 0, 0, 0, True, 3.01),
    (0, 3, 0, 3, 0, 0, 0, False, 3.24),
    (0, 3, 0, 1, 2, 0, 0, None, 11.68),
    (1, 3, 0, 2, 1, 0, 0, None, 3.01),
    (1, 3, 1, 3, 0, 0, 0, None, 4.44),
    (0, 3, 0, 0, 0, 0, 3, None, 4.41),
    (0, 3, 0, 1, 0, 0, 2, None, 4.93),
    (0, 3, 0, 0, 1, 0, 2, None, 8.39),
    (1, 3, 0, 0, 0, 0, 3, None, 4.10),
    (1, 3, 0, 1, 0, 0, 2, None, 3.88),
    # degree 4
    (1, 4, 0, 4, 0, 0, 0, None, 0.00),
]

O_RULES = [
    (0, 1, 0, 0, 1, 0, 0, None, 17.07),
    (0, 1, 1, 1, 0, 0, 0, None, 20.23),
    (-1, 1, 0, 1, 0, 0, 0, None, 23.06),
    (0, 2, 0, 2, 0, 0, 0, True, 12.53),
    (0, 2, 0, 2, 0, 0, 0, False, 9.23),
    (0, 2, 0, 0, 0, 0, 2, None, 13.14),
]

FALLBACK = {"N": (30.5, 8.2, 1.5), "O": (28.5, 8.6, 1.5)}
