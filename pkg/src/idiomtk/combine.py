"""Combination rules for predictions from different methods.

Two classifiers that agree keep their label; on disagreement a tunable
default class wins.  A separate overlay rule lets a high-precision partial
method (one that may abstain) override a fallback prediction wherever it
answered.
"""

from __future__ import annotations

from .corpus import Label
from .errors import DataError
from .predictions import Method, Prediction


def combine(pred_a: Prediction, pred_b: Prediction, default: Label) -> Prediction:
    """Merge two predictions for the same instance under a default class."""
    if pred_a.instance_id != pred_b.instance_id:
        raise DataError(
            f"cannot combine predictions for different instances: "
            f"{pred_a.instance_id!r} vs {pred_b.instance_id!r}"
        )
    if pred_a.label is pred_b.label:
        label = pred_a.label
        rationale = f"{pred_a.method.value}+{pred_b.method.value} agree"
    else:
        label = default
        rationale = (
            f"{pred_a.method.value}={pred_a.label.value} vs "
            f"{pred_b.method.value}={pred_b.label.value}; default {default.value}"
        )
    return Prediction(
        instance_id=pred_a.instance_id,
        label=label,
        method=Method.COMBINED,
        rationale=rationale,
    )


def overlay_unatt(optional: Prediction | None, fallback: Prediction) -> Prediction:
    """Prefer the partial method's answer when it exists."""
    if optional is None:
        return fallback
    if optional.instance_id != fallback.instance_id:
        raise DataError(
            f"cannot overlay predictions for different instances: "
            f"{optional.instance_id!r} vs {fallback.instance_id!r}"
        )
    return optional
