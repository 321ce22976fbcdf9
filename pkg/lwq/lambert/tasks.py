"""
Background tasks evaluating one output row each.

Payloads and results are plain JSON-compatible dicts. Domain and
convergence failures come back as rows carrying ``error``, so a group of
rows always completes.
"""
from dataclasses import asdict
from typing import List, Sequence

from celery import group, shared_task
from celery.utils.log import get_task_logger

from .baselines import compare_one
from .core_iteration import SolveConfig
from .exceptions import DomainError
from .lambertw import Branch, Method, seed_sweep
from .reference_tables import TableId, evaluate_row, figure_rows, rows_for
from .serializers import ComparisonRowSerializer, SweepRowSerializer

logger = get_task_logger(__name__)


def config_payload(cfg: SolveConfig) -> dict:
    return asdict(cfg)


@shared_task(bind=True)
def table_row_task(self, table: str, index: int, config: dict) -> dict:
    row = rows_for(TableId(table))[index]
    logger.debug("[table_row_task] table=%s row=%s", table, row.row)
    return evaluate_row(row, SolveConfig(**config))


@shared_task(bind=True)
def figure_task(self, x: float, config: dict) -> List[dict]:
    logger.debug("[figure_task] x=%r", x)
    return figure_rows(x, SolveConfig(**config))


@shared_task(bind=True)
def sweep_row_task(self, x: float, seed: float, method: str, branch: str, config: dict) -> dict:
    logger.debug("[sweep_row_task] x=%r seed=%r", x, seed)
    try:
        result = seed_sweep(x, [seed], Method(method), Branch(branch), SolveConfig(**config))[0]
    except DomainError as e:
        return {"x": x, "branch": branch, "method": method, "seed": seed, "status": "DomainError", "error": str(e)}
    return dict(SweepRowSerializer(result).data)


@shared_task(bind=True)
def compare_row_task(self, x: float, branch: str, config: dict) -> dict:
    logger.debug("[compare_row_task] x=%r branch=%s", x, branch)
    try:
        row = compare_one(x, Branch(branch), SolveConfig(**config))
    except DomainError as e:
        return {"x": x, "branch": branch, "error": str(e)}
    return dict(ComparisonRowSerializer(row).data)


def gather(signatures: Sequence) -> list:
    """Run the signatures as one group and return their results in input order."""
    if not signatures:
        return []
    return group(signatures).apply_async().get()
