"""Terminal output and file helpers for the command line."""

import os
import tempfile
from pathlib import Path


# ANSI color codes for terminal output
class Colors:
    RESET = "\033[0m"
    BOLD = "\033[1m"
    RED = "\033[31m"
    GREEN = "\033[32m"
    YELLOW = "\033[33m"
    CYAN = "\033[36m"
    WHITE = "\033[37m"
    BG_BLUE = "\033[44m"


VERDICT_COLORS = {
    "PASS": Colors.GREEN,
    "success": Colors.GREEN,
    "SKIP": Colors.YELLOW,
    "FAIL": Colors.RED,
    "error": Colors.RED,
}


def atomic_write(path: Path, text: str):
    """Write ``text`` next to ``path`` and move it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def colored(status: str, text: str | None = None) -> str:
    color = VERDICT_COLORS.get(status, Colors.WHITE)
    return f"{color}{Colors.BOLD}{text or status}{Colors.RESET}"


def print_banner(title: str):
    print(f"\n{Colors.BG_BLUE}{Colors.WHITE}{Colors.BOLD}--- {title} ---{Colors.RESET}")


def _number(value) -> str:
    return "-" if value is None else f"{value:.6f}"


def print_summary(rows: list[dict]):
    """One line per experiment: id, D estimate, final bounds and verdict."""
    print_banner("Gohberg sandwich")
    for row in rows:
        print(
            f"  {row['id']:<40} D={_number(row['d_estimate'])} "
            f"lower={_number(row['final_lower'])} upper={_number(row['final_upper'])} "
            f"{colored(row['verdict'])}"
        )


def print_checks(results: dict[str, dict]):
    print_banner("Self-test")
    for name, result in results.items():
        print(f"  {name:<14} {colored(result['status'])} {result['message']}")
