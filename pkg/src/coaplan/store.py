"""Append-only, versioned plan store.

Content is kept as the exact bytes written, so re-fetching any version is
byte-identical forever. Versions of one plan form a tree via parent links
(user-driven backtracking may branch from any ancestor).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class VersionInfo:
    version: int
    parent: Optional[int]


class PlanStore:
    def __init__(self):
        self._content: dict[tuple[str, int], bytes] = {}
        self._parents: dict[tuple[str, int], Optional[int]] = {}
        self._lock = threading.Lock()

    def put(self, plan_id: str, version: int, content: bytes,
            parent: Optional[int] = None) -> None:
        with self._lock:
            key = (plan_id, version)
            if key in self._content:
                raise ValueError(f"plan {plan_id} version {version} already stored")
            if version == 1:
                if parent is not None:
                    raise ValueError("version 1 cannot have a parent")
            else:
                if parent is None or (plan_id, parent) not in self._content:
                    raise ValueError(f"version {version} needs a stored parent")
            self._content[key] = bytes(content)
            self._parents[key] = parent

    def get(self, plan_id: str, version: int) -> bytes:
        return self._content[(plan_id, version)]

    def has(self, plan_id: str, version: int = 1) -> bool:
        return (plan_id, version) in self._content

    def next_version(self, plan_id: str) -> int:
        with self._lock:
            versions = [v for (pid, v) in self._content if pid == plan_id]
            return max(versions, default=0) + 1

    def history(self, plan_id: str) -> list[VersionInfo]:
        infos = [
            VersionInfo(version=v, parent=self._parents[(pid, v)])
            for (pid, v) in self._content if pid == plan_id
        ]
        infos.sort(key=lambda i: i.version)
        return infos
