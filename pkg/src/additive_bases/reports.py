"""Run reports, input digests and the construction sweep."""

import hashlib
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field
from tqdm import tqdm

from .constructions import get_construction
from .errors import GuardError
from .instances import (
    gen_normalized_vector,
    gen_power_family,
    gen_random_rational_basis,
    gen_random_signed_integer_basis,
)
from .sumsets import ElementSet
from .utils.io import to_jsonable
from .utils.log import get_logger
from .version import __version__


logger = get_logger(__name__)

CSV_COLUMNS = ["family", "n", "k", "construction", "size", "bound", "ratio", "covered", "millis"]

DEFAULT_FAMILIES = {
    "round": "random-basis",
    "dyadic": "random-signed",
    "higher": "normalized",
    "natural": "random-signed",
}


class RunReport(BaseModel):
    """Self-contained record of one CLI run; `results` never holds timings."""

    model_config = ConfigDict(frozen=True)

    command: Dict[str, Any]
    input_digest: str
    results: Any
    timings: Dict[str, float] = Field(default_factory=dict)
    bound_ratios: Dict[str, float] = Field(default_factory=dict)
    version: str = __version__


def input_digest(inputs: Any) -> str:
    """sha256 of the canonical (sorted-key, compact) JSON form of the inputs."""
    canonical = json.dumps(to_jsonable(inputs), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def cell_seed(seed: int, family: str, n: int, k: int) -> int:
    """Independent, reproducible seed for one sweep cell."""
    digest = hashlib.sha256(f"{seed}:{family}:{n}:{k}".encode("utf-8")).hexdigest()
    return int(digest[:16], 16)


def sweep_input(family: str, n: int, k: int, seed: int) -> ElementSet:
    """
    Generate the input basis for one sweep cell.

    Args:
        family: One of "power-family", "random-basis", "random-signed", "normalized"
        n: Input size
        k: Order
        seed: Cell seed

    Returns:
        The generated basis
    """
    if family == "power-family":
        return gen_power_family(n)[0]
    if family == "random-basis":
        return gen_random_rational_basis(n, 50, 3, seed)
    if family == "random-signed":
        return gen_random_signed_integer_basis(n, 4 * n, seed)
    if family == "normalized":
        return ElementSet(gen_normalized_vector(n, 6, seed))
    raise GuardError(f"Unknown sweep family {family!r}")


def _run_cell(construction_name: str, family: str, n: int, k: int, seed: int) -> Dict[str, Any]:
    construction = get_construction(construction_name)
    basis = sweep_input(family, n, k, cell_seed(seed, family, n, k))
    started = time.perf_counter()
    output = construction.build(basis, k)
    covered, _ = construction.certify(basis, k, output=output)
    millis = (time.perf_counter() - started) * 1000.0

    size_parameter = construction.size_parameter(basis)
    bound = construction.bound(size_parameter, k)
    # Rows are keyed by the requested grid point; the bound uses the size parameter
    return {
        "family": family,
        "n": n,
        "size_parameter": size_parameter,
        "k": k,
        "construction": construction_name,
        "size": len(output),
        "bound": bound,
        "ratio": len(output) / bound if bound > 0 else None,
        "covered": covered,
        "max_stage_ratio": construction.diagnostics(basis, k).get("max_stage_ratio"),
        "millis": millis,
    }


def run_sweep(
    construction_name: str,
    n_values: Sequence[int],
    k_values: Sequence[int],
    seed: int = 0,
    family: Optional[str] = None,
    threads: int = 1,
    max_cells: int = 64,
    progress: bool = False,
) -> Tuple[pd.DataFrame, List[Dict[str, Any]]]:
    """
    Run a construction over a grid of (n, k) and verify coverage at every point.

    Cells run concurrently; rows come back in grid order.

    Args:
        construction_name: Registered construction name
        n_values: Input sizes
        k_values: Orders (the dyadic construction only accepts 2)
        seed: Base seed; every cell derives its own
        family: Input family, defaulting per construction
        threads: Worker threads
        max_cells: Largest grid accepted
        progress: Show a progress bar on stderr

    Returns:
        Tuple of (CSV frame with timings, timing-free result rows)

    Raises:
        GuardError: If the grid is empty or larger than max_cells
    """
    family = family or DEFAULT_FAMILIES[construction_name]
    cells = [(n, k) for n in n_values for k in k_values]
    if not cells:
        raise GuardError("Sweep grid is empty")
    if len(cells) > max_cells:
        raise GuardError(f"Sweep grid has {len(cells)} cells, the limit is {max_cells}")

    logger.info("Starting sweep", construction=construction_name, family=family, cells=len(cells))
    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        futures = [executor.submit(_run_cell, construction_name, family, n, k, seed) for n, k in cells]
        rows = [f.result() for f in tqdm(futures, total=len(futures), disable=not progress, file=sys.stderr)]

    frame = pd.DataFrame(rows, columns=CSV_COLUMNS)
    results = [{key: value for key, value in row.items() if key != "millis"} for row in rows]
    return frame, results


def sweep_bound_ratios(results: List[Dict[str, Any]]) -> Dict[str, float]:
    ratios = {f"n={row['n']},k={row['k']}": row["ratio"] for row in results if row["ratio"] is not None}
    if ratios:
        ratios["max"] = max(ratios.values())
    stage_ratios = [row["max_stage_ratio"] for row in results if row.get("max_stage_ratio") is not None]
    if stage_ratios:
        ratios["max_stage"] = max(stage_ratios)
    return ratios


def write_csv(frame: pd.DataFrame, path: str) -> None:
    frame.to_csv(path, index=False)
