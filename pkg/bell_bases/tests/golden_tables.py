"""Golden values for the generated bases and the correlation table.

Basis states are written unnormalised, as signed term lists. Correlation rows hold
``(CO1, CAQ, CA1)`` triples, with ``None`` where a family does not apply. Numbers
are kept as printed strings so tests can derive a tolerance from their precision.
"""
from __future__ import annotations

from typing import Dict, List, NamedTuple, Optional, Tuple

# (3,2,CA1,P0)
BASIS_32_CA1_P0: Dict[str, str] = {
    "000": "|000⟩ + |010⟩ + |100⟩ + |111⟩",
    "001": "|001⟩ + |011⟩ + |101⟩ + |110⟩",
    "010": "|000⟩ - |010⟩ + |100⟩ - |111⟩",
    "011": "|001⟩ - |011⟩ + |101⟩ - |110⟩",
    "100": "|000⟩ + |010⟩ - |100⟩ - |111⟩",
    "101": "|001⟩ + |011⟩ - |101⟩ - |110⟩",
    "110": "|000⟩ - |010⟩ - |100⟩ + |111⟩",
    "111": "|001⟩ - |011⟩ - |101⟩ + |110⟩",
}

# (3,2,CO1,P0)
BASIS_32_CO1_P0: Dict[str, str] = {
    "000": "|000⟩ + |011⟩ + |101⟩ + |110⟩",
    "001": "|001⟩ + |010⟩ + |100⟩ + |111⟩",
    "010": "|000⟩ - |011⟩ + |101⟩ - |110⟩",
    "011": "|001⟩ - |010⟩ + |100⟩ - |111⟩",
    "100": "|000⟩ + |011⟩ - |101⟩ - |110⟩",
    "101": "|001⟩ + |010⟩ - |100⟩ - |111⟩",
    "110": "|000⟩ - |011⟩ - |101⟩ + |110⟩",
    "111": "|001⟩ - |010⟩ - |100⟩ + |111⟩",
}

# (3,2,CO1,P2) label -> ((3,2,CAQ,P2) label, signed braid label, state)
BASIS_32_CO1_P2_COMPARISON: Dict[str, Tuple[str, str, str]] = {
    "000": ("001", "011", "|000⟩ + |011⟩ + |101⟩ - |110⟩"),
    "001": ("000", "001", "|001⟩ + |010⟩ + |100⟩ - |111⟩"),
    "010": ("011", "101", "|000⟩ - |011⟩ + |101⟩ + |110⟩"),
    "011": ("010", "111", "|001⟩ - |010⟩ + |100⟩ + |111⟩"),
    "100": ("101", "110", "|000⟩ + |011⟩ - |101⟩ + |110⟩"),
    "101": ("100", "- 100", "|001⟩ + |010⟩ - |100⟩ + |111⟩"),
    "110": ("111", "000", "|000⟩ - |011⟩ - |101⟩ - |110⟩"),
    "111": ("110", "- 010", "|001⟩ - |010⟩ - |100⟩ - |111⟩"),
}

# (4,3,CO1,P2) label -> (signed braid label, state)
BASIS_43_CO1_P2_BRAID: Dict[str, Tuple[str, str]] = {
    "0000": ("0011", "|0000⟩ + |0011⟩ + |0101⟩ - |0110⟩ + |1001⟩ - |1010⟩ - |1100⟩ - |1111⟩"),
    "0001": ("0001", "|0001⟩ + |0010⟩ + |0100⟩ - |0111⟩ + |1000⟩ - |1011⟩ - |1101⟩ - |1110⟩"),
    "0010": ("0101", "|0000⟩ - |0011⟩ + |0101⟩ + |0110⟩ + |1001⟩ + |1010⟩ - |1100⟩ +|1111⟩"),
    "0011": ("0111", "|0001⟩ - |0010⟩ + |0100⟩ + |0111⟩ + |1000⟩ + |1011⟩ - |1101⟩ +|1110⟩"),
    "0100": ("1111", "|0000⟩ + |0011⟩ - |0101⟩ + |0110⟩ + |1001⟩ - |1010⟩ + |1100⟩ +|1111⟩"),
    "0101": ("1101", "|0001⟩ + |0010⟩ - |0100⟩ + |0111⟩ + |1000⟩ - |1011⟩ + |1101⟩ +|1110⟩"),
    "0110": ("1001", "|0000⟩ - |0011⟩ - |0101⟩ - |0110⟩ + |1001⟩ + |1010⟩ + |1100⟩ - |1111⟩"),
    "0111": ("1011", "|0001⟩ - |0010⟩ - |0100⟩ - |0111⟩ + |1000⟩ + |1011⟩ + |1101⟩ - |1110⟩"),
    "1000": ("1010", "|0000⟩ + |0011⟩ + |0101⟩ - |0110⟩ - |1001⟩ + |1010⟩ + |1100⟩ +|1111⟩"),
    "1001": ("- 1000", "|0001⟩ + |0010⟩ + |0100⟩ - |0111⟩ - |1000⟩ + |1011⟩ + |1101⟩ +|1110⟩"),
    "1010": ("1100", "|0000⟩ - |0011⟩ + |0101⟩ + |0110⟩ - |1001⟩ - |1010⟩ + |1100⟩ - |1111⟩"),
    "1011": ("- 1110", "|0001⟩ - |0010⟩ + |0100⟩ + |0111⟩ - |1000⟩ - |1011⟩ + |1101⟩ - |1110⟩"),
    "1100": ("0110", "|0000⟩ + |0011⟩ - |0101⟩ + |0110⟩ - |1001⟩ + |1010⟩ - |1100⟩ - |1111⟩"),
    "1101": ("- 0100", "|0001⟩ + |0010⟩ - |0100⟩ + |0111⟩ - |1000⟩ + |1011⟩ - |1101⟩ - |1110⟩"),
    "1110": ("0000", "|0000⟩ - |0011⟩ - |0101⟩ - |0110⟩ - |1001⟩ - |1010⟩ - |1100⟩ +|1111⟩"),
    "1111": ("- 0010", "|0001⟩ - |0010⟩ - |0100⟩ - |0111⟩ - |1000⟩ - |1011⟩ - |1101⟩ +|1110⟩"),
}

Triple = Tuple[Optional[str], Optional[str], Optional[str]]


class CorrelationRow(NamedTuple):
    n: int
    m: int
    phase: str
    ggm: Triple
    concurrence: Triple
    avg_entropy: Triple
    delta_c: str
    delta_d: str


# the (n,1,P0) row holds for every n; it is checked at n = 3
CORRELATION_TABLE: List[CorrelationRow] = [
    CorrelationRow(3, 1, "P0", ("0.5", None, "0.5"), ("1", None, "1.0"), ("1.0", None, "1.0"), "1", "1.0"),
    CorrelationRow(3, 2, "P0", ("0.5", "0.5", "0.25"), ("1", "1.0", "0.866025"), ("1.0", "1.0", "0.811278"), "1", "0.994185"),
    CorrelationRow(3, 2, "P2", ("0.5", "0.5", "0.25"), ("1", "1.0", "0.866025"), ("1.0", "1.0", "0.811278"), "1", "0.993259"),
    CorrelationRow(4, 2, "P0", ("0.5", "0.5", "0.25"), ("1", "1.0", "0.866025"), ("1.4", "1.4", "0.976292"), "1", "0.997092"),
    CorrelationRow(4, 2, "P2", ("0.5", "0.5", "0.25"), ("1", "1.0", "0.866025"), ("1.4", "1.4", "0.976292"), "1", "0.996629"),
    CorrelationRow(4, 3, "P0", ("0.5", "0.25", "0.125"), ("1", "0.866025", "0.661438"), ("1.0", "1.0588", "0.61106"), "1", "0.991277"),
    CorrelationRow(4, 3, "P2", ("0.5", "0.25", "0.125"), ("1", "0.866025", "0.968246"), ("1.0", "1.0588", "1.09811"), "1", "0.989888"),
    CorrelationRow(4, 3, "P3", ("0.5", "0.25", "0.125"), ("1", "0.866025", "0.661438"), ("1.3", "1.0588", "0.61106"), "1", "0.0656589"),
    CorrelationRow(4, 3, "Pz", ("0.5", "0.25", "0.125"), ("1", "0.866025", "0.968246"), ("1.4", "1.24737", "1.09811"), "1", "0.996629"),
    CorrelationRow(5, 2, "P0", ("0.5", "0.5", "0.25"), ("1", "1.0", "0.866025"), ("1.4", "1.4", "0.976292"), "1", "0.997092"),
    CorrelationRow(5, 2, "P2", ("0.5", "0.5", "0.25"), ("1", "1.0", "0.866025"), ("1.4", "1.4", "0.976292"), "1", "0.996629"),
    CorrelationRow(5, 3, "P0", ("0.5", "0.25", "0.125"), ("1", "0.866025", "0.661438"), ("1.4", "1.18879", "0.688201"), "1", "0.994185"),
    CorrelationRow(5, 3, "P2", ("0.5", "0.25", "0.125"), ("1", "0.866025", "0.968246"), ("1.4", "1.18879", "1.09328"), "1", "0.993259"),
    CorrelationRow(5, 3, "P3", ("0.5", "0.25", "0.125"), ("1", "0.866025", "0.661438"), ("1.5", "1.18879", "0.688201"), "1", "0.377106"),
    CorrelationRow(5, 3, "Pz", ("0.5", "0.25", "0.125"), ("1", "0.866025", "0.968246"), ("1.53333", "1.33423", "1.09328"), "1", "1.0"),
    CorrelationRow(5, 4, "P0", ("0.5", "0.125", "0.0625"), ("1", "0.661438", "0.484123"), ("1.0", "0.747128", "0.403766"), "1", "0.98837"),
    CorrelationRow(5, 4, "P2", ("0.5", "0.125", "0.0625"), ("1", "0.968246", "0.992157"), ("1.53333", "1.34022", "1.29369"), "1", "0.997092"),
    CorrelationRow(5, 4, "P3", ("0.5", "0.125", "0.0625"), ("1", "0.968246", "0.927025"), ("1.41634", "1.27634", "1.10593"), "1", "0.0654596"),
    CorrelationRow(5, 4, "P4", ("0.5", "0.125", "0.0625"), ("1", "0.661438", "0.484123"), ("1.27043", "0.747128", "0.403766"), "1", "0.446504"),
    CorrelationRow(5, 4, "Pz", ("0.5", "0.125", "0.0625"), ("1", "1.0", "0.992157"), ("1.4", "1.24804", "1.10757"), "1", "0.996629"),
]

# exact minima of the discord score for every CO1 row
DERIVED_DELTA_D = {
    (3, 1, "P0"): 1.0,
    (3, 2, "P0"): 1.0,
    (3, 2, "P2"): 1.0,
    (4, 2, "P0"): 1.0,
    (4, 2, "P2"): 1.0,
    (4, 3, "P0"): 1.0,
    (4, 3, "P2"): 1.0,
    (4, 3, "P3"): 0.066166,
    (4, 3, "Pz"): 1.0,
    (5, 2, "P0"): 1.0,
    (5, 2, "P2"): 1.0,
    (5, 3, "P0"): 1.0,
    (5, 3, "P2"): 1.0,
    (5, 3, "P3"): 0.377444,
    (5, 3, "Pz"): 1.0,
    (5, 4, "P0"): 1.0,
    (5, 4, "P2"): 1.0,
    (5, 4, "P3"): 0.066166,
    (5, 4, "P4"): 0.448298,
    (5, 4, "Pz"): 1.0,
}

# rows whose printed discord score falls short of the exact minimum; every pair
# marginal there is classical-classical, so the exact score is 1
AMENDED_DELTA_D = frozenset(
    {
        (3, 2, "P0"),
        (3, 2, "P2"),
        (4, 2, "P0"),
        (4, 2, "P2"),
        (4, 3, "P0"),
        (4, 3, "P2"),
        (4, 3, "Pz"),
        (5, 2, "P0"),
        (5, 2, "P2"),
        (5, 3, "P0"),
        (5, 3, "P2"),
        (5, 4, "P0"),
        (5, 4, "P2"),
        (5, 4, "Pz"),
    }
)

DELTA_D_TOLERANCE = 2e-3


def printed_tolerance(printed: str) -> float:
    """Half a unit in the last printed digit, kept within [5e-6, 5e-2]."""

    decimals = len(printed.split(".")[1]) if "." in printed else 0
    return min(max(0.5 * 10.0**-decimals, 5e-6), 5e-2)


def compact(terms: str) -> str:
    return terms.replace(" ", "")
