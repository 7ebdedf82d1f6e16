import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from thicklam import hypgraph


@pytest.fixture(scope="session")
def tree():
    return hypgraph.TreeBackend()


@pytest.fixture(scope="session")
def fareyb():
    return hypgraph.FareyBackend("0/1")


@pytest.fixture(scope="session")
def tree_config(tree):
    L, K, prov = hypgraph.calibrate_broken_geodesic(tree, l=2, delta=Fraction(0), seed=11)
    return hypgraph.CertificateConfig(
        delta=Fraction(0), l=2, L=L, K=K, B=Fraction(3), provenance=prov)


@pytest.fixture(scope="session")
def farey_config(fareyb):
    from oracles import reduced_slopes
    sample = [s for s in reduced_slopes(8, 8) if s[1] <= 8]
    delta = hypgraph.hyperbolicity_estimate(fareyb, sample)
    L, K, prov = hypgraph.calibrate_broken_geodesic(fareyb, l=2, delta=delta, seed=11)
    return hypgraph.CertificateConfig(
        delta=delta, l=2, L=L, K=K, B=Fraction(6), provenance=prov)
