"""Word-game arena for metaphor-aware LLM agents (Undercover, Adversarial Taboo)."""

from ._metarena import (
    BackendError,
    Error,
    ExperiencePool,
    InvalidArgument,
    InvalidState,
    ParseError,
    ReplayMiss,
    RuleViolation,
    UndercoverGame,
    balanced,
    contains_whole_word,
    hypothesis_test,
    load_word_pairs,
    parse_guess,
    play_episode,
    pool_score,
    report_from_logs,
    run_tournament,
)

__all__ = [
    "BackendError",
    "Error",
    "ExperiencePool",
    "InvalidArgument",
    "InvalidState",
    "ParseError",
    "ReplayMiss",
    "RuleViolation",
    "UndercoverGame",
    "balanced",
    "contains_whole_word",
    "hypothesis_test",
    "load_word_pairs",
    "parse_guess",
    "play_episode",
    "pool_score",
    "report_from_logs",
    "run_tournament",
]
