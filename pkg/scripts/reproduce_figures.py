#!/usr/bin/env python3
"""Regenerate the atlas and conversion-protocol tables in one go."""

import argparse
import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli.main import main as hlsim
from src.config.settings import settings
from src.utils.logger import setup_logger

logger = setup_logger(
    "reproduce_figures",
    log_level=settings.config.log_level,
    log_file=settings.config.log_file,
)

# (output file, hlsim arguments)
EXPORTS = [
    ("ep_atlas.csv", ["ep-map"]),
    ("third_order_lines.csv", ["ep-map", "--target", "3", "--samples", "41"]),
    ("sweep_chi_plus.csv", ["sweep", "--kind", "all", "--chi", "+1"]),
    ("sweep_chi_minus.csv", ["sweep", "--kind", "all", "--chi", "-1"]),
    ("hopping_q0_1.csv", ["evolve", "--kind", "hopping", "--q0", "1"]),
    ("tilted_q0_1.csv", ["evolve", "--kind", "tilted", "--q0", "1"]),
]


def main():
    """Export all figure tables."""
    parser = argparse.ArgumentParser(description="Regenerate figure data tables")
    parser.add_argument("--out-dir", default="results", help="Output directory")
    parser.add_argument("--q0-points", type=int, default=21, help="q0 grid size of the sweeps")
    parser.add_argument("--workers", type=int, default=settings.config.scan_workers)
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    failed = []
    for filename, command in EXPORTS:
        logger.info(f"Exporting {filename}...")
        argv = command + ["--out", str(out_dir / filename)]
        if command[0] == "sweep":
            argv += ["--q0-grid", f"0:1:{args.q0_points}", "--workers", str(args.workers)]
        elif command[0] == "ep-map":
            argv += ["--workers", str(args.workers)]
        code = hlsim(argv)
        if code != 0:
            logger.error(f"  {filename} failed with exit code {code}")
            failed.append(filename)
            continue
        size_kb = (out_dir / filename).stat().st_size / 1024
        logger.info(f"  -> {out_dir / filename} ({size_kb:.1f} KB)")

    if failed:
        logger.error(f"{len(failed)} exports failed: {failed}")
        sys.exit(1)
    logger.info("Export complete!")


if __name__ == "__main__":
    main()
