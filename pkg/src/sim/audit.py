from __future__ import annotations
"""CONGEST contract audit over accounted plans.

Each message record is expanded along its bit-fixing path: it holds link k
of the path during round `round + k`. A link used twice in one round, or a
payload wider than c·log2 n bits, is a violation.
"""
from collections import Counter
from typing import Iterable, Mapping

from src.core.types import AuditViolation, MessageRecord
from src.engine.plan import TransformPlan
from src.hypercube.coordinates import bit_fixing_path


def payload_bits(fields: Mapping[str, int]) -> int:
    return sum(max(1, int(value).bit_length()) for value in fields.values())


def audit_messages(messages: Iterable[MessageRecord], dimension: int, c: float = 4.0) -> list[AuditViolation]:
    limit = c * dimension
    usage: Counter[tuple[int, int, int]] = Counter()
    violations: list[AuditViolation] = []
    for rec in messages:
        path = bit_fixing_path(rec["src"], rec["dst"], dimension)
        for k, (a, b) in enumerate(zip(path, path[1:])):
            usage[(rec["round"] + k, min(a, b), max(a, b))] += 1
        bits = payload_bits(rec["fields"])
        if bits > limit:
            violations.append(
                AuditViolation(
                    kind="payload_size",
                    round=rec["round"],
                    link=[rec["src"], rec["dst"]],
                    detail=f"{bits} bits > {limit:g}",
                )
            )
    for (r, a, b), count in sorted(usage.items()):
        if count > 1:
            violations.append(
                AuditViolation(kind="link_overload", round=r, link=[a, b], detail=f"{count} messages")
            )
    return violations


def congest_audit(plans: Iterable[TransformPlan], dimension: int, c: float = 4.0) -> list[AuditViolation]:
    """Audit every plan on its own clock; plans never overlap in time."""
    found: list[AuditViolation] = []
    for plan in plans:
        found.extend(audit_messages(plan.message_log, dimension, c))
    return found
