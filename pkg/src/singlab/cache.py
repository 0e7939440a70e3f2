"""Content-addressed trajectory cache (.npz files, atomic writes)."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from pathlib import Path
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .constants import Params
from .dynamics import Trajectory

CACHE_FORMAT = 1


def cache_key(kind: str, params: Params, seed: Dict[str, object], tolerances: Dict[str, object]) -> str:
    payload = {
        "format": CACHE_FORMAT,
        "field": kind,
        "n": params.n,
        "p": str(params.p),
        "seed": seed,
        "tolerances": tolerances,
    }
    blob = json.dumps(payload, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()


class TrajectoryCache:
    """Concurrent reads are lock-free; writes go through a temp file and os.replace under a lock."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._write_lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        self._count_lock = threading.Lock()

    def path(self, key: str) -> Path:
        return self.root / f"{key}.npz"

    def load(self, key: str) -> Optional[Trajectory]:
        path = self.path(key)
        if not path.exists():
            return None
        try:
            with np.load(path, allow_pickle=False) as z:
                meta = json.loads(str(z["meta"]))
                return Trajectory(z["times"], z["states"], meta)
        except (OSError, ValueError, KeyError):
            return None  # a damaged entry is recomputed

    def store(self, key: str, traj: Trajectory) -> None:
        meta = json.dumps({k: v for k, v in traj.meta.items() if isinstance(v, (int, float, str, bool))},
                          sort_keys=True)
        with self._write_lock:
            fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
            try:
                with os.fdopen(fd, "wb") as fh:
                    np.savez(fh, times=traj.times, states=traj.states, meta=np.array(meta))
                os.replace(tmp, self.path(key))
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise

    def get_or_compute(self, key: str, compute: Callable[[], Trajectory]) -> Tuple[Trajectory, bool]:
        cached = self.load(key)
        if cached is not None:
            with self._count_lock:
                self.hits += 1
            return cached, True
        traj = compute()
        self.store(key, traj)
        with self._count_lock:
            self.misses += 1
        return traj, False
