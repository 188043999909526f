"""Write every preset as a standalone TOML run file.

    python scripts/export_presets.py configs/

One file per curve (``fig2_T1-1e-04.toml`` and so on). Each file can be run
with ``optocool run --config <file>``.
"""
import argparse
from pathlib import Path

from optocool.config import build_config, dump_toml
from optocool.presets import PRESETS, preset_configs


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("directory", nargs="?", default="configs")
    ap.add_argument("--points", type=int, default=40)
    args = ap.parse_args()
    out = Path(args.directory)
    out.mkdir(parents=True, exist_ok=True)
    for name in PRESETS:
        for raw in preset_configs(name, points=args.points):
            build_config(raw)  # refuse to export anything that does not validate
            if name == "fig2":
                stem = f"fig2_T1-{raw['baths']['1']['temperature']:.0e}"
            elif name == "fig5":
                stem = f"fig5_{raw['solver']['method']}"
            else:
                stem = name
            path = out / f"{stem}.toml"
            path.write_text(dump_toml(raw))
            print(path)


if __name__ == "__main__":
    main()
