# utils/file_utils.py
"""Loading program, interpretation and automaton files by extension."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from ..core.automata import DetAutomaton
from ..core.errors import GkatSyntaxError, UsageError
from ..core.export import from_json
from ..core.parser import parse_gkat, parse_kat
from ..core.semantics import Interpretation, load_interpretation
from ..core.syntax import Exp, Universe, check_scope

logger = logging.getLogger(__name__)

PROGRAM_KINDS = {".gkat": "gkat", ".kat": "kat"}


@dataclass(frozen=True)
class ProgramFile:
    path: Path
    kind: str  # "gkat" | "kat"
    universe: Universe
    expr: Exp


def read_text(path: Union[str, Path]) -> str:
    """
    Raises:
        UsageError: the file cannot be read
    """
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror or e}") from e


def program_kind(path: Union[str, Path]) -> str:
    suffix = Path(path).suffix.lower()
    if suffix not in PROGRAM_KINDS:
        raise UsageError(f"{path}: expected a .gkat or .kat program file")
    return PROGRAM_KINDS[suffix]


def load_program(path: Union[str, Path]) -> ProgramFile:
    """
    Parse a .gkat (imperative) or .kat (algebraic) program file.

    Raises:
        UsageError: unknown extension or unreadable file
        GkatSyntaxError: parse or scope error, message prefixed with the path
    """
    path = Path(path)
    kind = program_kind(path)
    text = read_text(path)
    parse = parse_gkat if kind == "gkat" else parse_kat
    try:
        universe, expr = parse(text)
        check_scope(expr, universe)
    except GkatSyntaxError as e:
        where = f"{path}:{e.line}:{e.column}" if e.line is not None else str(path)
        raise type(e)(f"{where}: {e.message}") from e
    logger.debug("Loaded %s program %s", kind, path)
    return ProgramFile(path, kind, universe, expr)


def load_automaton(path: Union[str, Path]) -> DetAutomaton:
    return from_json(read_text(path))


def load_interpretation_file(path: Union[str, Path]) -> Interpretation:
    return load_interpretation(read_text(path))
