"""Uniformly sampled observable records."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError


@dataclass
class TimeSeries:
    t: np.ndarray
    channels: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        if self.t.ndim != 1 or self.t.size == 0:
            raise ValidationError("t must be a non-empty 1-d array")
        if np.any(np.diff(self.t) <= 0):
            raise ValidationError("t must be strictly increasing")
        for name, values in list(self.channels.items()):
            self.channels[name] = self._coerce(name, values)

    def _coerce(self, name, values):
        values = np.asarray(values, dtype=float)
        if values.shape != self.t.shape:
            raise ValidationError(f"channel {name!r} has shape {values.shape}, expected {self.t.shape}")
        return values

    def add(self, name: str, values):
        self.channels[name] = self._coerce(name, values)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.t if name == "t" else self.channels[name]

    @property
    def columns(self) -> list[str]:
        return ["t", *self.channels]

    def rows(self):
        return np.column_stack([self.t, *self.channels.values()])
