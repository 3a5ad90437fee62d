import os
import sys
from pathlib import Path

from effhull.config import settings
from effhull.errors import EffHullError
from effhull.services.catalog import example_matrices
from effhull.services.experiments import (
    TABLE2_A13,
    TABLE2_N,
    compare_run,
    inefficiency_count,
    perron_efficiency_grid,
)
from effhull.services.matrix_io import dump_json, write_rows


def main() -> int:
    out_dir = Path(os.getenv("EFFHULL_OUT_DIR") or (sys.argv[1] if len(sys.argv) > 1 else "results"))
    seed = int(os.getenv("EFFHULL_SEED", "0"))
    out_dir.mkdir(parents=True, exist_ok=True)

    try:
        counts = [inefficiency_count(n, 4.0, 2.0, TABLE2_A13, seed=seed) for n in TABLE2_N]
        dump_json([r.model_dump(mode="json") for r in counts], out_dir / "counts.json")
        write_rows(
            out_dir / "counts.csv",
            ["n", "a13", "trials", "inefficient", "perron_efficient", "hull_contained"],
            ([r.n, e.a13, e.trials, e.inefficient_count, e.perron_efficient, e.hull_contained]
             for r in counts for e in r.entries),
        )
        print(f"counts -> {out_dir / 'counts.json'}")

        grid = perron_efficiency_grid(TABLE2_N, 4.0, 2.0, TABLE2_A13)
        dump_json(grid, out_dir / "perron_grid.json")
        print(f"perron grid -> {out_dir / 'perron_grid.json'}")

        for label, A in example_matrices().items():
            report = compare_run(A, settings.compare_trials, seed, label=label)
            write_rows(
                out_dir / f"compare_{label}.csv",
                ["trial", "norm_convex", "norm_geometric"],
                ([r.trial_index, r.norm_convex, r.norm_geometric] for r in report.trials),
            )
            dump_json(report.reference_norms, out_dir / f"compare_{label}.references.json")
            print(f"compare {label} -> {out_dir / f'compare_{label}.csv'}")
    except (EffHullError, OSError) as exc:
        print(f"reproduction failed: {exc}", file=sys.stderr)
        return 1

    return 0


if __name__ == "__main__":
    sys.exit(main())
