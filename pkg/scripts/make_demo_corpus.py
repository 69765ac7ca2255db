"""Generate a synthetic source tree for trying out the pipeline.

Each file holds one function whose body lines are unique to that file, so
any completion window plus its ground-truth continuation sits verbatim
inside exactly one retrieval unit. With the copy-oracle mock completer that
makes retrieval quality directly visible in the metrics.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path


def write_demo_tree(root: Path, n_files: int, body_lines: int) -> int:
    for fid in range(n_files):
        lines = [f"    int demo_{fid}_{i} = use_demo_{fid}({i});" for i in range(body_lines)]
        content = "int driver_demo_%d() {\n%s\n    return 0;\n}\n" % (fid, "\n".join(lines))
        path = root / f"demo/file_{fid:04d}.cc"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content, encoding="utf-8")
    return n_files


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--root", required=True, help="directory to create the tree in")
    parser.add_argument("--files", type=int, default=200, help="number of source files")
    parser.add_argument("--body-lines", type=int, default=30, help="function body lines per file")
    args = parser.parse_args()

    if args.files < 1 or args.body_lines < 1:
        print("error: --files and --body-lines must be positive", file=sys.stderr)
        return 2
    count = write_demo_tree(Path(args.root), args.files, args.body_lines)
    print(f"wrote {count} files under {args.root}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
