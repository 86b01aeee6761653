import numpy as np
import pytest
from fino_callnet.util.seed import stage_int, stage_rng, stage_seed


@pytest.mark.util
class TestStageSeed:
    def test_same_names_same_stream(self) -> None:
        a = stage_rng(42, "split").random(5)
        b = stage_rng(42, "split").random(5)
        np.testing.assert_array_equal(a, b)

    def test_different_names_differ(self) -> None:
        a = stage_rng(42, "split").random(5)
        b = stage_rng(42, "undersample").random(5)
        assert not np.array_equal(a, b)

    def test_different_master_seeds_differ(self) -> None:
        assert stage_int(1, "forest", "H") != stage_int(2, "forest", "H")

    def test_name_parts_are_joined(self) -> None:
        # ("a", "b") と ("a/b",) は同じストリーム
        assert stage_seed(0, "a", "b").entropy == stage_seed(0, "a/b").entropy
        assert stage_int(0, "a", "b") == stage_int(0, "a/b")

    def test_stage_int_is_32bit(self) -> None:
        value = stage_int(123, "permutation", "t1")
        assert 0 <= value < 2**32
