"""Logic-program emission and a bottom-up evaluator used as a test oracle."""

from __future__ import annotations

from .encode import (
    DesireTable,
    affine_weight,
    emit_pref_rules,
    emit_program,
    emit_sat_rules,
    encode_desire,
    encode_planning,
    sat_program,
    trajectory_facts,
)
from .program import AspProgram, Atom, Choice, Maximize, Rule
from .stratified import is_answer_set, least_model, stratified_eval

__all__ = [
    "AspProgram",
    "Atom",
    "Choice",
    "Maximize",
    "Rule",
    "DesireTable",
    "affine_weight",
    "emit_pref_rules",
    "emit_program",
    "emit_sat_rules",
    "encode_desire",
    "encode_planning",
    "sat_program",
    "trajectory_facts",
    "is_answer_set",
    "least_model",
    "stratified_eval",
]
