"""
This module defines the prometheus collectors updated while simulating and verifying.

Collectors are registered with the default aioprometheus registry and are only ever updated from
the parent process, after a block of trials or a verification check has completed. Use
`render_metrics` to obtain the text exposition written by --metrics-out.
"""
from aioprometheus import REGISTRY, Counter, Histogram
from aioprometheus.renderer import render

# Monte Carlo counters
# TRIALS labels:
# 'scheme' : scheme id, e.g. "adaptive" or "qdg-postselect"
TRIALS = Counter("qdiscrim_trials",
                 "Number of Monte Carlo trials completed")
BLOCKS = Counter("qdiscrim_blocks",
                 "Number of fixed-size trial blocks completed")

# Post-selected data gathering only
QDG_RESTARTS = Counter("qdiscrim_qdg_restarts",
                       "Number of probe restarts after a resource outcome 1")
QDG_HERALDED = Counter("qdiscrim_qdg_heralded_failures",
                       "Number of post-selected runs that exhausted their copy budget")
COPIES_CONSUMED = Histogram("qdiscrim_copies_consumed",
                            "Mean copies consumed per post-selected run, one sample per block",
                            buckets=[1, 2, 5, 10, 20, 50, 100, 200, 500])

# Verification report
# CHECKS labels:
# 'verdict' : "pass", "fail" or "report"
CHECKS = Counter("qdiscrim_checks",
                 "Number of verification checks evaluated")


def render_metrics() -> bytes:
    content, _ = render(REGISTRY, ["text/plain"])
    return content
