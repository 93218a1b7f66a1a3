import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from complextrees.config import get_config, results_path, set_config
from complextrees.core import Alphabet, EPWord, FiniteWord, Relation
from complextrees.errors import InputError
from complextrees.family import (
    ParametricFamily,
    eval_family,
    load_family,
    preset,
    reference_alphabet,
    reference_relations,
)

from cli.models import RunConfig

console = Console(highlight=False, soft_wrap=True)
err_console = Console(stderr=True, highlight=False, soft_wrap=True)


def configure_logging(verbose: bool = False) -> None:
    level = "DEBUG" if verbose else get_config()["log_level"]
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def parse_complex(text: str) -> complex:
    """Parse ``1.5``, ``0+0.5i``, ``-i/2`` or ``(-1+1.32i)/4``; ``j`` works like ``i``."""
    s = str(text).strip().replace(" ", "").lower().replace("i", "j")
    if not s:
        raise InputError("empty complex number")
    try:
        if "/" in s:
            num, den = s.rsplit("/", 1)
            return parse_complex(num) / parse_complex(den)
        return complex(s)
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"invalid complex number {text!r}") from e


def format_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.15g}{z.imag:+.15g}i"


def parse_alphabet(text: str) -> Alphabet:
    parts = [p for p in text.split(",") if p.strip()]
    return Alphabet(tuple(parse_complex(p) for p in parts))


def parse_word(text: str):
    """An EPWord when the text has a ``~``, else a finite word."""
    return EPWord.parse(text) if "~" in text else FiniteWord.parse(text)


def parse_list(text: Optional[str]) -> List[str]:
    if not text:
        return []
    return [part.strip() for part in text.replace(";", ",").split(",") if part.strip()]


def parse_resolution(text: str) -> Tuple[int, int]:
    try:
        width, height = (int(v) for v in text.lower().split("x"))
    except ValueError as e:
        raise InputError(f"invalid resolution {text!r}: expected WIDTHxHEIGHT") from e
    return width, height


def load_config_file(path: Optional[str]) -> Dict[str, Any]:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except OSError as e:
        raise InputError(f"cannot read config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"config {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise InputError(f"config {path} must hold a JSON object")
    return data


def build_config(base: Dict[str, Any], command: str, **flags) -> RunConfig:
    """File values overridden by explicit (non-None) flags."""
    merged = dict(base)
    merged.update({key: value for key, value in flags.items() if value is not None})
    merged["command"] = command
    try:
        cfg = RunConfig.model_validate(merged)
    except ValidationError as e:
        err = e.errors()[0]
        where = ".".join(str(p) for p in err["loc"]) or "config"
        raise InputError(f"{where}: {err['msg']}") from e
    overrides = {"seed": cfg.seed}
    if cfg.workers is not None:
        overrides["workers"] = cfg.workers
    if cfg.output_dir is not None:
        overrides["results_dir"] = cfg.output_dir
    set_config(overrides)
    return cfg


def resolve_family(cfg: RunConfig) -> ParametricFamily:
    if cfg.preset:
        return preset(cfg.preset, cfg.ngon)
    if cfg.family:
        return load_family(cfg.family)
    raise InputError(f"{cfg.command} needs a family: use --preset or --family")


def resolve_alphabet(cfg: RunConfig) -> Alphabet:
    source = cfg.source()
    if source == "alphabet":
        return parse_alphabet(cfg.alphabet)
    if source == "reference":
        return reference_alphabet(cfg.reference)
    if cfg.z is None:
        raise InputError(f"{cfg.command} on a family needs the parameter --z")
    return eval_family(resolve_family(cfg), parse_complex(cfg.z))


def resolve_relations(cfg: RunConfig) -> List[Relation]:
    """Explicit --relations, else the family's declared relations, else a reference tree's."""
    if cfg.relations:
        return [Relation.parse(text) for text in cfg.relations]
    if cfg.preset or cfg.family:
        return sorted(resolve_family(cfg).declared_relations, key=str)
    if cfg.reference:
        return sorted(reference_relations(cfg.reference), key=str)
    return []


def output_path(cfg: RunConfig, default_name: str) -> Path:
    if cfg.output:
        return Path(cfg.output)
    return results_path(default_name)


def viewport(cfg: RunConfig) -> Tuple[Optional[complex], Optional[complex]]:
    if (cfg.lower is None) != (cfg.upper is None):
        raise InputError("give both --lower and --upper or neither")
    if cfg.lower is None:
        return None, None
    return parse_complex(cfg.lower), parse_complex(cfg.upper)
