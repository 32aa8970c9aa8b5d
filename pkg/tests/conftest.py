"""Shared test configuration.

Property-based tests run with a fixed, deadline-free profile so that slow
container filesystems never turn a passing algebraic identity into a flake.
"""

from hypothesis import HealthCheck, settings

settings.register_profile(
    "spindeq",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("spindeq")
