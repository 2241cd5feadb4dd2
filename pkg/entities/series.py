"""
HyperAuthorPy — Bibliometric Toolkit

Notes:
- Per-year series produced by the metrics and collab modules.
- Both are plain (year, value) point lists with strictly increasing years.
"""

from dataclasses import dataclass

from core.errors import ArgumentError


@dataclass(frozen=True)
class YearSeries:
    """
    Ordered (year, value) points. Count series are zero-filled across their
    span; mean series omit years without data.
    """
    points: tuple = ()
    name: str = ""

    def __post_init__(self):
        points = tuple((int(y), v) for y, v in self.points)
        for (y0, _), (y1, _) in zip(points, points[1:]):
            if y1 <= y0:
                raise ArgumentError(f"years must be strictly increasing ({y0} then {y1})")
        object.__setattr__(self, "points", points)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def as_dict(self):
        return dict(self.points)

    @property
    def years(self):
        return [y for y, _ in self.points]

    @property
    def values(self):
        return [v for _, v in self.points]

    def total(self):
        return sum(self.values)


@dataclass(frozen=True)
class HIndexSeries(YearSeries):
    """Cumulative h-index per calendar year; never decreases."""

    def __post_init__(self):
        super().__post_init__()
        for (y0, h0), (y1, h1) in zip(self.points, self.points[1:]):
            if h1 < h0:
                raise ArgumentError(f"h-index series decreases between {y0} and {y1}")

    @property
    def final(self):
        return self.points[-1][1] if self.points else 0
