"""Sampled paths of configurations and their on-disk formats (JSON lines, OBJ frames)."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .geometry import Configuration


@dataclass
class Trajectory:
    """Configurations sampled on a uniform grid ``times`` in ``[0, 1]``."""

    kind: str
    times: np.ndarray
    frames: list = field(default_factory=list)

    def __len__(self):
        return len(self.frames)

    def __getitem__(self, i):
        return Configuration(self.kind, self.frames[i])

    @property
    def final(self):
        return self[-1]

    def records(self):
        for t, pts in zip(self.times, self.frames):
            yield {"t": float(t), "points": np.asarray(pts).tolist()}

    def write_jsonl(self, stream):
        for rec in self.records():
            stream.write(json.dumps(rec) + "\n")

    def save_jsonl(self, path):
        with open(path, "w") as fh:
            self.write_jsonl(fh)

    @classmethod
    def read_jsonl(cls, stream, kind):
        times, frames = [], []
        for line in stream:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            times.append(rec["t"])
            frames.append(np.asarray(rec["points"], dtype=float))
        return cls(kind, np.asarray(times), frames)

    def write_obj_frames(self, directory, prefix="frame"):
        """One OBJ file per sample with the skeleton's edges as polylines (``n = 3`` only)."""
        if not self.frames or np.asarray(self.frames[0]).shape[1] != 3:
            raise ValueError("OBJ output is only produced for configurations in R^3")
        os.makedirs(directory, exist_ok=True)
        paths = []
        width = len(str(len(self.frames) - 1))
        for k, pts in enumerate(self.frames):
            path = os.path.join(directory, f"{prefix}_{k:0{width}d}.obj")
            with open(path, "w") as fh:
                fh.write(f"# t = {float(self.times[k])!r}\n")
                for p in pts:
                    fh.write("v {!r} {!r} {!r}\n".format(*map(float, p)))
                for i, j in combinations(range(len(pts)), 2):
                    fh.write(f"l {i + 1} {j + 1}\n")
            paths.append(path)
        return paths


def uniform_times(samples):
    if samples < 2:
        raise ValueError("need at least two samples")
    return np.linspace(0.0, 1.0, samples)
