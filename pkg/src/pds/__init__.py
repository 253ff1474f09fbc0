"""Location and routine deduction from smart-home motion/door sensor logs."""

from .estimators import ActivitySegmenter, FrequentItemsetMiner, LocationDeducer, TopologyEstimator
from .evaluation import GroundTruthLayout, location_scores, relationship_accuracy
from .events import IngestConfig, SensorEvent, SensorLog, load_log, loads_log
from .itemsets import FrequentItemset, frequent_itemsets, select_target_set
from .locations import DeductionConfig, LocationMap, run_full_deduction
from .routine import hourly_histograms
from .segmentation import (
    ClockWindow,
    IndoorActivity,
    LeaveBackActivity,
    SegmentationParams,
    detect_leaveback,
    segment_indoor,
)
from .simulate import DecoyConfig, FloorplanSpec, ResidentProfile, inject_decoy, load_plan, simulate
from .topology import alpha, apply_rules, build_confidence_graph, groups_over_days, sensor_groups

__version__ = "0.1.0"

__all__ = [
    "ActivitySegmenter", "ClockWindow", "DecoyConfig", "DeductionConfig", "FloorplanSpec",
    "FrequentItemset", "FrequentItemsetMiner", "GroundTruthLayout", "IndoorActivity",
    "IngestConfig", "LeaveBackActivity", "LocationDeducer", "LocationMap", "ResidentProfile",
    "SegmentationParams", "SensorEvent", "SensorLog", "TopologyEstimator", "alpha",
    "apply_rules", "build_confidence_graph", "detect_leaveback", "frequent_itemsets",
    "groups_over_days", "hourly_histograms", "inject_decoy", "load_log", "load_plan",
    "loads_log", "location_scores", "relationship_accuracy", "run_full_deduction",
    "segment_indoor", "select_target_set", "sensor_groups", "simulate",
]
