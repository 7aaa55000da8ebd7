"""Hierarchical multi-change-point search with bootstrap gating."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Optional

from .ballstat import Segment, SegmentBest, segment_scan
from .bootstrap import BootstrapConfig, segment_block_size, significance
from .exceptions import InvalidInputError, SegmentTooShortError
from .metric import as_array

METRIC_CHOICES = ("euclidean", "circular", "precomputed")


@dataclass(frozen=True)
class DetectionConfig:
    metric: str = "euclidean"
    min_seg: int = 10
    replicates: int = 199
    p_threshold: float = 0.05
    block_size: Optional[int] = None
    stride: int = 1
    seed: int = 0
    threads: int = 1
    # p_threshold / stage for stage = 1, 2, ...
    decreasing_threshold: bool = False

    def __post_init__(self):
        if self.metric not in METRIC_CHOICES:
            raise InvalidInputError("unknown metric %r" % self.metric)
        if self.min_seg < 1:
            raise InvalidInputError("min_seg must be >= 1")
        # remaining fields are checked by BootstrapConfig
        self.bootstrap_config()

    def bootstrap_config(self) -> BootstrapConfig:
        return BootstrapConfig(
            replicates=self.replicates,
            p_threshold=self.p_threshold,
            seed=self.seed,
            block_size=self.block_size,
            stride=self.stride,
            threads=self.threads,
        )

    def threshold_at(self, stage: int) -> float:
        if self.decreasing_threshold:
            return self.p_threshold / stage
        return self.p_threshold

    def echo(self) -> dict:
        # threads is left out on purpose: reports must not depend on it
        d = asdict(self)
        d.pop("threads")
        return d


@dataclass
class Stage:
    segment: tuple
    M_hat: int
    L_hat: int
    V: float
    p: float
    threshold: float
    block_size: int
    accepted: bool

    def to_dict(self) -> dict:
        return {
            "segment": list(self.segment),
            "M_hat": self.M_hat,
            "L_hat": self.L_hat,
            "V": self.V,
            "p": self.p,
            "threshold": self.threshold,
            "block_size": self.block_size,
            "accepted": self.accepted,
        }


@dataclass
class ChangePointReport:
    T: int
    changepoints: list = field(default_factory=list)
    p_values: list = field(default_factory=list)
    discovery_order: list = field(default_factory=list)
    segments: list = field(default_factory=list)
    stages: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    too_short: bool = False

    def to_dict(self) -> dict:
        return {
            "T": self.T,
            "changepoints": list(self.changepoints),
            "p_values": list(self.p_values),
            "discovery_order": list(self.discovery_order),
            "segments": [list(s) for s in self.segments],
            "stages": [s.to_dict() for s in self.stages],
            "config": dict(self.config),
            "too_short": self.too_short,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def detect(D, config: DetectionConfig = DetectionConfig(), cache: bool = True) -> ChangePointReport:
    """Find all change points of a series given its distance matrix.

    Each round scans every current segment for its best split (reusing
    cached results for segments that did not change), tests the globally
    best candidate by moving-block bootstrap and, if ``p < threshold``,
    splits there. The search stops at the first non-significant candidate
    or when no segment can be split any more.
    """
    arr = as_array(D)
    T = arr.shape[0]
    report = ChangePointReport(T=T, config=config.echo(), segments=[(0, T)])
    if T < 2 * config.min_seg:
        report.too_short = True
        return report

    boot = config.bootstrap_config()
    segments = [Segment(0, T)]
    memo = {}
    accepted = []
    stage = 0

    while True:
        candidates = []
        for seg in segments:
            key = (seg.start, seg.end)
            if cache and key in memo:
                best = memo[key]
            else:
                try:
                    best = segment_scan(arr, seg, config.min_seg, config.stride)
                except SegmentTooShortError:
                    best = None
                memo[key] = best
            if best is not None:
                candidates.append((seg, best))
        if not candidates:
            break

        # segments are kept sorted by start, so max() keeps the earliest on ties
        seg, best = max(candidates, key=lambda c: c[1].value)
        stage += 1
        threshold = config.threshold_at(stage)
        b = segment_block_size(arr, seg, config.block_size)
        p = significance(arr, seg, best, boot, config.min_seg, stream=stage, b=b)
        ok = p < threshold
        report.stages.append(Stage((seg.start, seg.end), best.M_hat, best.L_hat, best.value,
                                   p, threshold, b, ok))
        if not ok:
            break

        accepted.append((best.M_hat, p))
        i = segments.index(seg)
        segments[i:i + 1] = [Segment(seg.start, best.M_hat), Segment(best.M_hat, seg.end)]

    report.discovery_order = [cp for cp, _ in accepted]
    report.p_values = [p for _, p in accepted]
    report.changepoints = sorted(report.discovery_order)
    report.segments = [(s.start, s.end) for s in segments]
    return report
