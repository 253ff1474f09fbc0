"""scikit-learn style wrappers so the pipeline stages compose with ``Pipeline`` and friends."""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .evaluation import location_scores, relationship_accuracy
from .itemsets import frequent_itemsets, select_target_set
from .locations import DeductionConfig, run_full_deduction
from .routine import attribute_to_location, hourly_histograms
from .segmentation import detect_leaveback, segment_indoor, sensor_id_list
from .topology import alpha, apply_rules, build_confidence_graph, sensor_groups
from .validation import check_activities, check_log, check_ratio, check_window, seg_params


class ActivitySegmenter(TransformerMixin, BaseEstimator):
    """Turns a sensor log into indoor activities. Stateless; ``fit`` only validates."""

    def __init__(self, x=40, y=10, z=3600):
        self.x = x
        self.y = y
        self.z = z

    def fit(self, X, y=None):
        self.params_ = seg_params(self.x, self.y, self.z)
        return self

    def transform(self, X):
        params = getattr(self, "params_", None) or seg_params(self.x, self.y, self.z)
        return segment_indoor(check_log(X), params)

    def leavebacks(self, X):
        return detect_leaveback(check_log(X), seg_params(self.x, self.y, self.z))


class TopologyEstimator(BaseEstimator):
    """Learns the confidence graph and rule-filtered topology of a home.

    ``fit`` takes a sensor log, or a list of indoor activities when ``from_activities``.
    """

    def __init__(self, x=40, y=10, z=3600, from_activities=False):
        self.x = x
        self.y = y
        self.z = z
        self.from_activities = from_activities

    def fit(self, X, y=None):
        if self.from_activities:
            acts = check_activities(X)
        else:
            acts = segment_indoor(check_log(X), seg_params(self.x, self.y, self.z))
        self.activities_ = acts
        self.graph_ = build_confidence_graph(acts)
        self.alpha_ = alpha(self.graph_)
        self.topology_ = apply_rules(self.graph_, self.alpha_)
        self.groups_ = sensor_groups(self.graph_)
        return self

    def predict(self, pairs):
        """Edge kind (``solid``/``dashed``/``None``) for each sensor pair."""
        check_is_fitted(self, "topology_")
        return [self.topology_.kind(a, b) for a, b in pairs]

    def score(self, X=None, y=None):
        """Relationship accuracy (percent) against a ground-truth layout ``y``."""
        check_is_fitted(self, "topology_")
        return relationship_accuracy(self.topology_, y).accuracy_percent


class FrequentItemsetMiner(BaseEstimator):
    def __init__(self, min_support=0.5):
        self.min_support = min_support

    def fit(self, X, y=None):
        s = check_ratio(self.min_support)
        baskets = [frozenset(sensor_id_list(t)) if hasattr(t, "events") else frozenset(t)
                   for t in X]
        self.itemsets_ = frequent_itemsets(baskets, s)
        self.target_ = select_target_set(self.itemsets_)
        return self


class LocationDeducer(BaseEstimator):
    """Full location deduction on a sensor log.

    After ``fit``: ``location_map_``, ``provenance_``, ``topology_``, ``alpha_``,
    ``activities_``, ``leavebacks_`` and ``report_``. ``predict`` maps activities to a
    location id (or ``None``).
    """

    def __init__(self, x=40, y=10, z=3600, min_support=0.5,
                 bedroom_window="02:00-06:00", kitchen_window="18:00-19:00"):
        self.x = x
        self.y = y
        self.z = z
        self.min_support = min_support
        self.bedroom_window = bedroom_window
        self.kitchen_window = kitchen_window

    def _config(self):
        return DeductionConfig(check_window(self.bedroom_window),
                               check_window(self.kitchen_window),
                               check_ratio(self.min_support))

    def fit(self, X, y=None):
        result = run_full_deduction(check_log(X), seg_params(self.x, self.y, self.z),
                                    self._config())
        self.result_ = result
        self.location_map_ = result.location_map
        self.provenance_ = result.provenance
        self.topology_ = result.topology
        self.alpha_ = result.alpha
        self.activities_ = result.activities
        self.leavebacks_ = result.leavebacks
        self.report_ = result.report
        return self

    def predict(self, X):
        check_is_fitted(self, "location_map_")
        return [attribute_to_location(a, self.location_map_) for a in check_activities(X)]

    def routine(self):
        check_is_fitted(self, "location_map_")
        return hourly_histograms(self.activities_, self.leavebacks_, self.location_map_)

    def score(self, X=None, y=None):
        """Mean F1 over bedrooms and kitchen/dining against a ground-truth layout ``y``."""
        check_is_fitted(self, "location_map_")
        scores = location_scores(self.location_map_, y)
        return (scores["bedrooms"].f1 + scores["kitchen_dining"].f1) / 2
