"""Simulation reports."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field


@dataclass
class Metric:
    value: float
    stderr: float = 0.0
    trials: int = 0


@dataclass
class SimReport:
    name: str
    params: dict
    seed: int
    metrics: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)  # sweep table (list of dicts)
    wall_time: float = 0.0

    def add(self, key: str, value: float, stderr: float = 0.0, trials: int = 0):
        self.metrics[key] = Metric(float(value), float(stderr), int(trials))

    def add_proportion(self, key: str, hits: int, trials: int):
        p = hits / trials if trials else 0.0
        self.add(key, p, math.sqrt(p * (1 - p) / trials) if trials else 0.0, trials)

    def __getitem__(self, key) -> float:
        return self.metrics[key].value

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "name": self.name,
            "params": self.params,
            "seed": self.seed,
            "metrics": {k: vars(m) for k, m in self.metrics.items()},
            "rows": self.rows,
        }
        if timing:
            d["wall_time"] = self.wall_time
        return d

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True, default=float)

    def to_csv(self) -> str:
        """Sweep rows if present, otherwise one row per metric."""
        buf = io.StringIO()
        if self.rows:
            keys = list(self.rows[0])
            w = csv.DictWriter(buf, keys, lineterminator="\n")
            w.writeheader()
            w.writerows(self.rows)
        else:
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["metric", "value", "stderr", "trials"])
            for k, m in self.metrics.items():
                w.writerow([k, repr(m.value), repr(m.stderr), m.trials])
        return buf.getvalue()
