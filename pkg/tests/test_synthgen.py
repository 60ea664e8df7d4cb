import numpy as np
import pytest
from pydantic import ValidationError

from app.core.exceptions import InvalidParameterError
from app.schemas.experiment import GroundTruthKind, GroundTruthSpec, RngSeed
from app.services.partition import contingency
from app.services.synthgen import (
    ground_truth,
    ground_truth_sizes,
    merge_split,
    random_reassign,
    shuffle_labels,
    shuffle_outside_main,
)

EQUAL = GroundTruthSpec(kind=GroundTruthKind.EQUAL_32, n=1024)
ASYMMETRIC = GroundTruthSpec(kind=GroundTruthKind.ASYMMETRIC, n=1024)


def test_ground_truth_sizes():
    assert ground_truth_sizes(EQUAL) == [32] * 32
    assert ground_truth_sizes(ASYMMETRIC) == [512, 256, 52, 51, 51, 51, 51]


def test_ground_truth_is_in_blocks():
    truth = ground_truth(GroundTruthSpec(kind=GroundTruthKind.EQUAL_32, n=64))
    assert truth.labels[:4] == (0, 0, 1, 1)
    assert truth.M == 32
    assert truth.cluster_sizes().tolist() == [2] * 32


def test_ground_truth_spec_validation():
    with pytest.raises(ValidationError):
        GroundTruthSpec(kind=GroundTruthKind.EQUAL_32, n=100)
    with pytest.raises(ValidationError):
        GroundTruthSpec(kind=GroundTruthKind.ASYMMETRIC, n=4)


def test_same_seed_same_output():
    seed = RngSeed(seed=7, stream_id=3)
    assert random_reassign(200, 9, seed) == random_reassign(200, 9, seed)
    assert random_reassign(200, 9, seed) != random_reassign(200, 9, seed.substream(4))


@pytest.mark.parametrize("c", [1, 2, 31, 500, 1024])
def test_random_reassign_hits_exact_cluster_count(c):
    f = random_reassign(1024, c, RngSeed(seed=0, stream_id=c))
    assert f.M == c
    assert f.n == 1024


def test_random_reassign_rejects_too_many_clusters():
    with pytest.raises(InvalidParameterError, match="cannot split beyond singletons"):
        random_reassign(10, 11, RngSeed())


def test_merge_split_identity_at_truth_count():
    truth = ground_truth(EQUAL)
    assert merge_split(truth, 32, RngSeed(seed=1)) == truth


@pytest.mark.parametrize("c", [1, 5, 16])
def test_merge_only_coarsens(c):
    truth = ground_truth(EQUAL)
    merged = merge_split(truth, c, RngSeed(seed=2, stream_id=c))
    assert merged.M == c
    # every truth cluster lands inside a single merged cluster
    assert (np.count_nonzero(contingency(truth, merged).counts, axis=1) == 1).all()


@pytest.mark.parametrize("c", [33, 100, 1024])
def test_split_only_refines(c):
    truth = ground_truth(EQUAL)
    split = merge_split(truth, c, RngSeed(seed=3, stream_id=c))
    assert split.M == c
    assert (np.count_nonzero(contingency(truth, split).counts, axis=0) == 1).all()


def test_merge_split_rejects_too_many_clusters():
    truth = ground_truth(GroundTruthSpec(kind=GroundTruthKind.EQUAL_32, n=64))
    with pytest.raises(InvalidParameterError):
        merge_split(truth, 65, RngSeed())


def test_shuffle_p0_is_identity_and_sizes_are_kept():
    truth = ground_truth(EQUAL)
    assert shuffle_labels(truth, 0.0, RngSeed()) == truth
    shuffled = shuffle_labels(truth, 0.4, RngSeed(seed=5))
    assert sorted(shuffled.cluster_sizes().tolist()) == sorted(truth.cluster_sizes().tolist())
    changed = int((shuffled.as_array() != truth.as_array()).sum())
    assert 0 < changed <= round(0.4 * 1024)


def test_shuffle_outside_main_keeps_main_cluster():
    truth = ground_truth(ASYMMETRIC)
    for p in (0.0, 0.3, 1.0):
        out = shuffle_outside_main(truth, p, 0, RngSeed(seed=9))
        main = truth.as_array() == 0
        assert (out.as_array()[main] == 0).all()
        changed = int((out.as_array() != truth.as_array()).sum())
        assert changed <= round(p * int((~main).sum()))
    assert shuffle_outside_main(truth, 0.0, 0, RngSeed()) == truth


def test_proportion_out_of_range():
    truth = ground_truth(EQUAL)
    with pytest.raises(InvalidParameterError):
        shuffle_labels(truth, 1.5, RngSeed())
    with pytest.raises(InvalidParameterError):
        shuffle_outside_main(truth, -0.1, 0, RngSeed())
