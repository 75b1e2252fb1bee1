"""Median orders, dependency digraphs and second-neighbourhood certificates
for small oriented graphs, checked against brute force."""

from .dependency import (
    convenient_orientations,
    dependency_digraph,
    good_edge_lemma_check,
    interval_structure,
    is_good_digraph,
    is_interval,
    loses_to,
)
from .digraph import (
    Digraph,
    has_snp,
    in_neighbors,
    missing_graph,
    out_neighbors,
    second_in_neighbors,
    second_out_neighbors,
    snp_oracle,
)
from .errors import Finding, PreconditionError
from .generators import cycle_gadget, enumerate_instances, fixtures
from .good_orders import check_main_inequality, contract_intervals, good_median_order, sed, sed_classify
from .matching import (
    cycle_lemmas_check,
    delta_structure_check,
    feed_snp_theorem_check,
    orient_paths,
    two_snp_check,
)
from .orders import (
    classify_order,
    exact_median_order,
    feedback_property_holds,
    local_median_order,
    order_weight,
)

__all__ = [name for name in dir() if not name.startswith("_")]
