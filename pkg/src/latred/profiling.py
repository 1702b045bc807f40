"""Wall-time accounting for the stages of a reduction run.

A :class:`StageProfile` is threaded through the orthogonalizer, the size
reduction loop and the enumerator; each stage adds its own wall time.
Whatever the run spends outside those three stages lands in ``other_time``
so the parts always sum to the measured total.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class StageProfile:
    """Seconds spent per stage, plus enumeration tree size."""

    qr_time: float = 0.0
    size_reduce_time: float = 0.0
    enum_time: float = 0.0
    other_time: float = 0.0
    enum_nodes: int = 0

    @property
    def total(self) -> float:
        return self.qr_time + self.size_reduce_time + self.enum_time + self.other_time

    def absorb_remainder(self, wall_seconds: float) -> None:
        """Set other_time to the wall time not accounted to a stage."""
        tracked = self.qr_time + self.size_reduce_time + self.enum_time
        self.other_time = max(wall_seconds - tracked, 0.0)
