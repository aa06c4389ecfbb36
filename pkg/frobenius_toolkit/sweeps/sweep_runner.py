"""
Sweep Runner

This module runs a named invariant over an (n, m) grid and collects one
row per cell into a pandas DataFrame with columns
n, m, expected, observed, passed, detail. Reports are written through
the helpers as .xlsx (openpyxl) or .csv.
"""

import os
import logging
from math import gcd
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import networkx as nx
import pandas as pd

from frobenius_toolkit.algebra.functionals import (
    ConsistencyError,
    cyclic_root,
    cyclic_support,
    eigenvalue_census,
    eigenvalue_symmetry_holds,
    is_unbroken_string,
    meander_index,
    prime_support,
    principal_candidate,
    subprime_support,
    trace_identity_holds,
)
from frobenius_toolkit.algebra.mcybe import DegenerationError, degeneration_limit, root_progression
from frobenius_toolkit.algebra.sln import Functional, algebra_index_estimate, is_frobenius, parabolic_support
from frobenius_toolkit.graphs.form_graph import form_graph_rebuild_matches
from frobenius_toolkit.graphs.matching import categorical_product, graph_index
from frobenius_toolkit.utils.config import get_settings
from frobenius_toolkit.utils.helpers import generate_filename, save_report_file

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["n", "m", "expected", "observed", "passed", "detail"]

Row = Dict[str, object]


def _row(n: int, m: int, expected, observed, detail: str = "") -> Row:
    return {
        "n": n,
        "m": m,
        "expected": expected,
        "observed": observed,
        "passed": expected == observed,
        "detail": detail,
    }


def _grid(n_max: int, coprime_only: bool = False, m_min: int = 1) -> Iterator[Tuple[int, int]]:
    for n in range(2, n_max + 1):
        for m in range(m_min, n):
            if coprime_only and gcd(n, m) != 1:
                continue
            yield n, m


def sweep_frobenius(n_max: int) -> List[Row]:
    """Cyclic functional on coprime cells; sampled functionals elsewhere."""
    settings = get_settings()
    rows = []
    for n, m in _grid(n_max):
        g = parabolic_support(n, m)
        if gcd(n, m) == 1:
            certificate = is_frobenius(g, Functional.from_support(cyclic_support(n, m).support))
            rows.append(_row(n, m, True, certificate.frobenius, f"kernel {certificate.kernel_dimension}"))
        else:
            index = algebra_index_estimate(g, settings.samples, settings.seed)
            rows.append(_row(n, m, False, index == 0, f"sampled index {index}"))
    return rows


def sweep_subprime(n_max: int) -> List[Row]:
    """Subprime functional is Frobenius exactly when n = +-1 mod m."""
    rows = []
    for n, m in _grid(n_max, m_min=2):
        S = subprime_support(n, m)
        expected = n % m in (1, m - 1)
        observed = is_frobenius(parabolic_support(n, m), Functional.from_support(S)).frobenius
        detail = ""
        if n % m == m - 1:
            detail = "equals cyclic" if S == cyclic_support(n, m).support else "differs from cyclic"
        rows.append(_row(n, m, expected, observed, detail))
    return rows


def sweep_prime(n_max: int) -> List[Row]:
    """Prime functional is Frobenius only for m = 1 and m = n - 1."""
    rows = []
    for n, m in _grid(n_max):
        g = parabolic_support(n, m)
        observed = is_frobenius(g, Functional.from_support(prime_support(n))).frobenius
        rows.append(_row(n, m, m in (1, n - 1), observed))
    return rows


def sweep_root(n_max: int) -> List[Row]:
    rows = []
    for n, m in _grid(n_max, coprime_only=True):
        try:
            root = cyclic_root(n, m)
            rows.append(_row(n, m, True, True, f"root {root}"))
        except ConsistencyError as e:
            rows.append(_row(n, m, True, False, str(e)))
    return rows


def sweep_meander(n_max: int) -> List[Row]:
    """Meander index of P(n, m) against gcd(n, m) - 1."""
    return [_row(n, m, gcd(n, m) - 1, meander_index(parabolic_support(n, m))) for n, m in _grid(n_max)]


def sweep_trace(n_max: int) -> List[Row]:
    """Trace identity, eigenvalue symmetry and unbroken string for the cyclic principal element."""
    rows = []
    for n, m in _grid(n_max, coprime_only=True):
        g = parabolic_support(n, m)
        census = eigenvalue_census(g, principal_candidate(n, cyclic_support(n, m).support))
        checks = {
            "trace": trace_identity_holds(g, census),
            "symmetry": eigenvalue_symmetry_holds(census),
            "string": is_unbroken_string(census),
        }
        failed = [name for name, ok in checks.items() if not ok]
        rows.append(_row(n, m, True, not failed, ", ".join(failed)))
    return rows


def sweep_rebuild(n_max: int) -> List[Row]:
    return [_row(n, m, True, form_graph_rebuild_matches(n, m)) for n, m in _grid(n_max, coprime_only=True)]


def sweep_progression(n_max: int) -> List[Row]:
    """
    Root progression of the cyclic principal element and its degeneration;
    a cell passes when a progression exists and only descents are removed.
    """
    rows = []
    for n, m in _grid(n_max, coprime_only=True):
        try:
            progression = root_progression(n, m)
            result = degeneration_limit(progression, principal_candidate(n, cyclic_support(n, m).support))
        except DegenerationError as e:
            rows.append(_row(n, m, True, False, str(e)))
            continue
        only_descents = set(result.removed) <= set(progression.descents)
        removed = ", ".join(f"{i}->{j}" for i, j in result.removed) or "none"
        rows.append(_row(n, m, True, only_descents, f"{progression.format_text()}; removed {removed}"))
    return rows


def sweep_product(n_max: int) -> List[Row]:
    """
    idx(P_n x P_m) against idx(P_n) idx(P_m) for paths under the categorical
    product. Failures are recorded, not treated as errors.
    """
    rows = []
    for n in range(2, n_max + 1):
        for m in range(2, n + 1):
            left, right = nx.path_graph(n), nx.path_graph(m)
            expected = graph_index(left) * graph_index(right)
            observed = graph_index(categorical_product(left, right))
            rows.append(_row(n, m, expected, observed, "categorical product of paths"))
    return rows


SWEEPS: Dict[str, Callable[[int], List[Row]]] = {
    "frobenius": sweep_frobenius,
    "subprime": sweep_subprime,
    "prime": sweep_prime,
    "root": sweep_root,
    "meander": sweep_meander,
    "trace": sweep_trace,
    "rebuild": sweep_rebuild,
    "progression": sweep_progression,
    "product": sweep_product,
}


def run_sweep(name: str, n_max: int) -> pd.DataFrame:
    """
    Run one named sweep and return its report.

    Args:
        name (str): One of SWEEPS.
        n_max (int): Largest n in the grid.

    Returns:
        DataFrame: One row per cell, columns REPORT_COLUMNS.
    """
    if name not in SWEEPS:
        raise ValueError(f"Unknown sweep {name!r}; choose from {', '.join(SWEEPS)}")
    if n_max < 2:
        raise ValueError(f"n_max must be at least 2, got {n_max}")
    logger.info(f"Running sweep '{name}' up to n = {n_max}")
    df = pd.DataFrame(SWEEPS[name](n_max), columns=REPORT_COLUMNS)
    passed = int(df["passed"].sum()) if not df.empty else 0
    logger.info(f"Sweep '{name}': {passed}/{len(df)} cells passed")
    if passed < len(df):
        logger.warning(f"Sweep '{name}' has {len(df) - passed} failing cells")
    return df


def save_sweep_report(df: pd.DataFrame, name: str, file_path: Optional[str] = None) -> Optional[str]:
    """
    Save a sweep report, by default under the configured output directory
    with a date-stamped name.

    Returns:
        str or None: Path written, or None if saving failed.
    """
    if not file_path:
        file_path = os.path.join(get_settings().output_dir, generate_filename(f"sweep_{name}", "xlsx"))
    return file_path if save_report_file(df, file_path) else None
