"""Shared memoized heavy computations for the test suite."""

import functools

from campedelli.campedelli import family_report, get_family, sample_member


@functools.lru_cache(maxsize=None)
def member_once(label, seed=0, primes=(19, 37, 73)):
    return sample_member(get_family(label), seed=seed, primes=primes)


@functools.lru_cache(maxsize=None)
def report_first(label, primes=(19, 37, 73), seed=0):
    return family_report(label, primes=primes, seed=seed)


@functools.lru_cache(maxsize=None)
def report_second(label, primes=(19, 37, 73), seed=0):
    """An independent recomputation of the same report (for determinism
    properties); cached separately from report_first."""
    return family_report(label, primes=primes, seed=seed)
